// Copyright 2026 The evssi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <set>
#include <stdexcept>

#include "doctest.h"
#include "evssi/crypto/contract_auth.hpp"
#include "evssi/crypto/conventional.hpp"
#include "evssi/crypto/hash.hpp"
#include "evssi/crypto/keystore.hpp"
#include "evssi/crypto/rng.hpp"
#include "evssi/crypto/types.hpp"

using namespace evssi;
using namespace evssi::crypto;

TEST_CASE("sha256 matches published vectors") {
  CHECK(hex_encode(sha256({})) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(hex_encode(sha256(to_bytes("abc"))) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(hex_encode(sha256(to_bytes(
            "abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"))) ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("incremental hashing matches one-shot") {
  Bytes msg = to_bytes("the quick brown fox jumps over the lazy dog");
  Hasher h;
  h.update(BytesView(msg.data(), 10)).update(BytesView(msg.data() + 10, 20));
  h.update(BytesView(msg.data() + 30, msg.size() - 30));
  CHECK(h.final_digest() == sha256(msg));
}

TEST_CASE("sized updates frame fields unambiguously") {
  // Length-prefixed framing: the split points are part of the digest.
  auto sized = [](std::initializer_list<std::string_view> parts) {
    Hasher h;
    for (auto p : parts) h.update_sized(p);
    return hex_encode(h.final_digest());
  };
  CHECK(sized({"ab", "c"}) ==
        "f2939f903016e5bb29b1e4a61cdbd376220ca03a24180b39995f2d50f2e0a647");
  CHECK(sized({"a", "bc"}) ==
        "b534ce16ac9c8b36823f39a395ce8e0e3c7ad9605b82b5444f18cadacd217a5d");
  CHECK(sized({"abc"}) ==
        "d04b72a650ce0f8ce4963330a53ee2832733d2baeffff3c1d8e256cca096d120");
}

TEST_CASE("hmac-sha256 matches independently computed vectors") {
  Bytes k1(32, 0x0b);
  CHECK(hex_encode(hmac_sha256(k1, to_bytes("Hi There"))) ==
        "198a607eb44bfbc69903a0f1cf2bbdc5ba0aa3f3d9ae3c1c7a3b1696a0b68cf7");

  Bytes k2 = to_bytes("Jefe");
  k2.resize(32, 0);
  CHECK(hex_encode(hmac_sha256(k2, to_bytes("what do ya want for nothing?"))) ==
        "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");

  Bytes k3(32, 0xaa);
  Bytes d3(50, 0xdd);
  CHECK(hex_encode(hmac_sha256(k3, d3)) ==
        "cdcb1220d1ecccea91e53aba3092f962e549fe6ce9ed7fdc43191fbde45c30b0");

  CHECK(hmac_verify(k1, to_bytes("Hi There"),
                    hmac_sha256(k1, to_bytes("Hi There"))));
  CHECK(!hmac_verify(k1, to_bytes("Hi Therf"),
                     hmac_sha256(k1, to_bytes("Hi There"))));
  CHECK(!hmac_verify(k1, to_bytes("Hi There"), Bytes(32, 0)));

  CHECK_THROWS_AS(hmac_sha256(Bytes(31, 1), d3), std::invalid_argument);
  CHECK_THROWS_AS(hmac_sha256(Bytes(33, 1), d3), std::invalid_argument);
}

TEST_CASE("rng is a pure function of its seed") {
  Rng a = Rng::from_u64(42);
  Rng b = Rng::from_u64(42);
  CHECK(a.bytes(64) == b.bytes(64));
  CHECK(a.u64() == b.u64());

  Rng c = Rng::from_u64(43);
  CHECK(Rng::from_u64(42).bytes(64) != c.bytes(64));
}

TEST_CASE("rng child streams are independent of parent consumption") {
  Rng parent1 = Rng::from_u64(9);
  Rng parent2 = Rng::from_u64(9);
  parent2.bytes(1000);  // drain one copy
  CHECK(parent1.child("ev").bytes(32) == parent2.child("ev").bytes(32));
  CHECK(parent1.child("ev").bytes(32) != parent1.child("cp").bytes(32));
}

TEST_CASE("rng bounded draws stay in range and cover small ranges") {
  Rng rng = Rng::from_u64(5);
  std::set<uint64_t> seen;
  for (int i = 0; i < 200; ++i) {
    uint64_t x = rng.below(5);
    CHECK(x < 5);
    seen.insert(x);
  }
  CHECK(seen.size() == 5);

  for (int i = 0; i < 20; ++i) {
    mpz_class m = rng.mpz_exact_bits(96);
    CHECK(mpz_sizeinbase(m.get_mpz_t(), 2) == 96);
  }
  mpz_class bound("123456789123456789123456789");
  for (int i = 0; i < 20; ++i) {
    mpz_class m = rng.mpz_below(bound);
    CHECK(m >= 0);
    CHECK(m < bound);
  }
}

TEST_CASE("did derivation commits to both public keys") {
  Bytes seed(32, 7);
  DidKeys k1 = did_keys_from_seed(seed);
  DidKeys k2 = did_keys_from_seed(seed);
  CHECK(k1.did == k2.did);
  CHECK(k1.sig_pk == k2.sig_pk);
  CHECK(k1.enc_sk == k2.enc_sk);
  CHECK(k1.did.starts_with(kDidPrefix));
  CHECK(k1.did.size() == std::string(kDidPrefix).size() + 32);
  CHECK(k1.did == did_from_keys(k1.sig_pk, k1.enc_pk));

  Bytes other_seed(32, 8);
  CHECK(did_keys_from_seed(other_seed).did != k1.did);

  Rng rng = Rng::from_u64(77);
  DidKeys k3 = gen_did_keys(rng);
  CHECK(k3.did != k1.did);
  CHECK(k3.sig_pk.size() == kSigPublicKeySize);
  CHECK(k3.sig_sk.size() == kSigSecretKeySize);
  CHECK(k3.enc_pk.size() == kEncPublicKeySize);
  CHECK(k3.enc_sk.size() == kEncSecretKeySize);
}

TEST_CASE("signatures verify and reject tampering") {
  Rng rng = Rng::from_u64(101);
  DidKeys k = gen_did_keys(rng);
  DidKeys other = gen_did_keys(rng);
  Bytes msg = to_bytes("register nym ev1");
  Bytes sig = sign(k.sig_sk, msg);
  CHECK(sig.size() == kSignatureSize);
  CHECK(verify_sig(k.sig_pk, msg, sig));

  Bytes bad_msg = msg;
  bad_msg[0] ^= 1;
  CHECK(!verify_sig(k.sig_pk, bad_msg, sig));

  Bytes bad_sig = sig;
  bad_sig[10] ^= 1;
  CHECK(!verify_sig(k.sig_pk, msg, bad_sig));

  CHECK(!verify_sig(other.sig_pk, msg, sig));
  CHECK(!verify_sig(k.sig_pk, msg, Bytes{}));
}

TEST_CASE("public-key encryption round trips and authenticates") {
  Rng rng = Rng::from_u64(202);
  DidKeys receiver = gen_did_keys(rng);
  DidKeys mallory = gen_did_keys(rng);
  Bytes msg = to_bytes("contract credential material");

  Bytes blob = pk_encrypt(receiver.enc_pk, msg, rng);
  auto plain = pk_decrypt(receiver.enc_sk, blob);
  REQUIRE(plain.has_value());
  CHECK(*plain == msg);

  // Fresh ephemeral key per encryption: ciphertexts never repeat.
  CHECK(pk_encrypt(receiver.enc_pk, msg, rng) != blob);

  CHECK(!pk_decrypt(mallory.enc_sk, blob).has_value());

  Bytes cut = blob;
  cut[blob.size() - 1] ^= 1;
  CHECK(!pk_decrypt(receiver.enc_sk, cut).has_value());
  CHECK(!pk_decrypt(receiver.enc_sk, Bytes(10, 0)).has_value());
}

TEST_CASE("symmetric encryption round trips and authenticates") {
  Rng rng = Rng::from_u64(203);
  Bytes key = rng.bytes(kSymKeySize);
  Bytes msg = to_bytes("wallet contents");

  Bytes blob = sym_encrypt(key, msg, rng);
  auto plain = sym_decrypt(key, blob);
  REQUIRE(plain.has_value());
  CHECK(*plain == msg);
  CHECK(sym_encrypt(key, msg, rng) != blob);

  Bytes wrong_key = rng.bytes(kSymKeySize);
  CHECK(!sym_decrypt(wrong_key, blob).has_value());

  blob[8] ^= 1;
  CHECK(!sym_decrypt(key, blob).has_value());
}

TEST_CASE("keystore seals, opens, and is deterministic") {
  Rng rng = Rng::from_u64(301);
  KeyBundle bundle;
  bundle.role = "ev";
  bundle.keys = gen_did_keys(rng);

  ContractCredential cred;
  cred.attrs = {{"emsp_id", "EMSP-A"}, {"tariff", "basic"}};
  cred.master_secret = codec::WireValue::from_u64(12345);
  cred.signature = codec::WireValue::bytes(rng.bytes(48));
  cred.rev_element = codec::WireValue::from_u64(97);
  cred.witness = codec::WireValue::bytes(rng.bytes(48));
  cred.witness_version = 3;
  cred.contract_key = rng.bytes(32);
  cred.contract_id = rng.bytes(kContractIdSize);
  cred.cred_def_id = "creddef:abc";
  cred.registry_id = "registry:def";
  cred.schema_id = "schema:ghi";
  bundle.credentials.push_back(cred);

  Rng seal_rng = Rng::from_u64(302);
  Bytes file = keystore_seal(bundle, "horse battery", seal_rng);

  // Same bundle, passphrase, and generator seed: identical file bytes.
  Rng seal_rng2 = Rng::from_u64(302);
  CHECK(keystore_seal(bundle, "horse battery", seal_rng2) == file);

  auto opened = keystore_open(file, "horse battery");
  REQUIRE(opened.has_value());
  CHECK(opened->role == "ev");
  CHECK(opened->keys.did == bundle.keys.did);
  CHECK(opened->keys.sig_sk == bundle.keys.sig_sk);
  REQUIRE(opened->credentials.size() == 1);
  CHECK(opened->credentials[0].attrs == cred.attrs);
  CHECK(opened->credentials[0].contract_key == cred.contract_key);
  CHECK(opened->credentials[0].witness_version == 3);
  CHECK(opened->credentials[0].signature == cred.signature);

  CHECK(!keystore_open(file, "horse battery0").has_value());

  Bytes corrupt = file;
  corrupt[corrupt.size() / 2] ^= 1;
  CHECK(!keystore_open(corrupt, "horse battery").has_value());
  CHECK(!keystore_open(Bytes(4, 0), "horse battery").has_value());
}

TEST_CASE("contract auth accepts the honest flow and names each failure") {
  Rng rng = Rng::from_u64(401);
  DidKeys emsp = gen_did_keys(rng);
  Bytes contract_key = rng.bytes(kMacKeySize);
  Bytes contract_id = rng.bytes(kContractIdSize);
  Bytes request_hash = sha256(to_bytes("proof request body"));
  const uint64_t now = 1'700'000'000;

  ContractKeyLookup lookup = [&](const Bytes& id) -> std::optional<Bytes> {
    if (id == contract_id) return contract_key;
    return std::nullopt;
  };

  Bytes blob = make_contract_auth(contract_key, contract_id, request_hash,
                                  now - 30, emsp.enc_pk, rng);

  SeenTags seen;
  auto out = check_contract_auth(emsp.enc_sk, blob, request_hash, lookup, now,
                                 kDefaultAuthWindow, seen);
  CHECK(out.result == AuthResult::Ok);
  CHECK(out.contract_id == contract_id);
  CHECK(out.timestamp == now - 30);

  // Same blob again: replay.
  out = check_contract_auth(emsp.enc_sk, blob, request_hash, lookup, now,
                            kDefaultAuthWindow, seen);
  CHECK(out.result == AuthResult::Replayed);

  // Garbage, and a blob sealed to someone else entirely.
  SeenTags fresh;
  CHECK(check_contract_auth(emsp.enc_sk, Bytes(64, 1), request_hash, lookup,
                            now, kDefaultAuthWindow, fresh)
            .result == AuthResult::DecryptFailed);
  DidKeys other = gen_did_keys(rng);
  Bytes foreign = make_contract_auth(contract_key, contract_id, request_hash,
                                     now, other.enc_pk, rng);
  CHECK(check_contract_auth(emsp.enc_sk, foreign, request_hash, lookup, now,
                            kDefaultAuthWindow, fresh)
            .result == AuthResult::DecryptFailed);

  // Contract id the provider has never issued.
  Bytes stranger_id = rng.bytes(kContractIdSize);
  Bytes stranger = make_contract_auth(contract_key, stranger_id, request_hash,
                                      now, emsp.enc_pk, rng);
  CHECK(check_contract_auth(emsp.enc_sk, stranger, request_hash, lookup, now,
                            kDefaultAuthWindow, fresh)
            .result == AuthResult::UnknownContract);

  // Wrong contract key behind the id.
  Bytes wrong_key = rng.bytes(kMacKeySize);
  Bytes forged = make_contract_auth(wrong_key, contract_id, request_hash, now,
                                    emsp.enc_pk, rng);
  CHECK(check_contract_auth(emsp.enc_sk, forged, request_hash, lookup, now,
                            kDefaultAuthWindow, fresh)
            .result == AuthResult::BadTag);

  // Tag bound to a different request than the one the verifier reports.
  Bytes other_hash = sha256(to_bytes("different request"));
  Bytes rebased = make_contract_auth(contract_key, contract_id, other_hash,
                                     now, emsp.enc_pk, rng);
  CHECK(check_contract_auth(emsp.enc_sk, rebased, request_hash, lookup, now,
                            kDefaultAuthWindow, fresh)
            .result == AuthResult::BadTag);
}

TEST_CASE("contract auth window is inclusive at both edges") {
  Rng rng = Rng::from_u64(402);
  DidKeys emsp = gen_did_keys(rng);
  Bytes contract_key = rng.bytes(kMacKeySize);
  Bytes contract_id = rng.bytes(kContractIdSize);
  Bytes request_hash = sha256(to_bytes("req"));
  const uint64_t now = 1'700'000'000;
  const uint64_t window = 600;

  ContractKeyLookup lookup = [&](const Bytes&) -> std::optional<Bytes> {
    return contract_key;
  };

  auto result_at = [&](uint64_t ts) {
    SeenTags seen;
    Bytes blob = make_contract_auth(contract_key, contract_id, request_hash,
                                    ts, emsp.enc_pk, rng);
    return check_contract_auth(emsp.enc_sk, blob, request_hash, lookup, now,
                               window, seen)
        .result;
  };

  CHECK(result_at(now - window) == AuthResult::Ok);
  CHECK(result_at(now + window) == AuthResult::Ok);
  CHECK(result_at(now - window - 1) == AuthResult::Expired);
  CHECK(result_at(now + window + 1) == AuthResult::Expired);
}
