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

#include "evssi/crypto/conventional.hpp"

#include <sodium.h>

#include <stdexcept>

#include "evssi/crypto/hash.hpp"

namespace evssi::crypto {

namespace {

void require_sodium() {
  // sodium_init is idempotent; -1 only on catastrophic failure.
  if (sodium_init() < 0) {
    throw std::runtime_error("libsodium initialization failed");
  }
}

void check_size(BytesView b, size_t want, const char* what) {
  if (b.size() != want) {
    throw std::invalid_argument(std::string(what) + ": wrong size");
  }
}

// Nonce for a box between two X25519 public keys. Both keys are fresh or
// long-lived but the ephemeral side is unique per message, so the pair
// never repeats.
Bytes box_nonce(BytesView eph_pk, BytesView receiver_pk) {
  Bytes digest = Hasher()
                     .update_sized("evssi.box.nonce")
                     .update_sized(eph_pk)
                     .update_sized(receiver_pk)
                     .final_digest();
  digest.resize(crypto_box_NONCEBYTES);
  return digest;
}

}  // namespace

std::string did_from_keys(BytesView sig_pk, BytesView enc_pk) {
  Bytes digest = Hasher()
                     .update_sized("evssi.did")
                     .update_sized(sig_pk)
                     .update_sized(enc_pk)
                     .final_digest();
  digest.resize(16);
  return std::string(kDidPrefix) + hex_encode(digest);
}

DidKeys did_keys_from_seed(BytesView seed32) {
  require_sodium();
  check_size(seed32, 32, "did key seed");

  DidKeys keys;
  keys.sig_pk.resize(kSigPublicKeySize);
  keys.sig_sk.resize(kSigSecretKeySize);
  Bytes sig_seed = Hasher().update_sized("evssi.did.sig").update_sized(seed32).final_digest();
  crypto_sign_seed_keypair(keys.sig_pk.data(), keys.sig_sk.data(),
                           sig_seed.data());

  keys.enc_pk.resize(kEncPublicKeySize);
  keys.enc_sk.resize(kEncSecretKeySize);
  Bytes enc_seed = Hasher().update_sized("evssi.did.enc").update_sized(seed32).final_digest();
  crypto_box_seed_keypair(keys.enc_pk.data(), keys.enc_sk.data(),
                          enc_seed.data());

  keys.did = did_from_keys(keys.sig_pk, keys.enc_pk);
  return keys;
}

DidKeys gen_did_keys(Rng& rng) {
  Bytes seed = rng.bytes(32);
  return did_keys_from_seed(seed);
}

Bytes sign(BytesView sig_sk, BytesView msg) {
  require_sodium();
  check_size(sig_sk, kSigSecretKeySize, "signing key");
  Bytes sig(kSignatureSize);
  crypto_sign_detached(sig.data(), nullptr, msg.data(), msg.size(),
                       sig_sk.data());
  return sig;
}

bool verify_sig(BytesView sig_pk, BytesView msg, BytesView sig) {
  require_sodium();
  if (sig_pk.size() != kSigPublicKeySize || sig.size() != kSignatureSize) {
    return false;
  }
  return crypto_sign_verify_detached(sig.data(), msg.data(), msg.size(),
                                     sig_pk.data()) == 0;
}

Bytes pk_encrypt(BytesView receiver_enc_pk, BytesView msg, Rng& rng) {
  require_sodium();
  check_size(receiver_enc_pk, kEncPublicKeySize, "encryption key");

  Bytes eph_seed = rng.bytes(32);
  Bytes eph_pk(kEncPublicKeySize), eph_sk(kEncSecretKeySize);
  crypto_box_seed_keypair(eph_pk.data(), eph_sk.data(), eph_seed.data());

  Bytes nonce = box_nonce(eph_pk, receiver_enc_pk);
  Bytes out = eph_pk;
  out.resize(kEncPublicKeySize + msg.size() + crypto_box_MACBYTES);
  if (crypto_box_easy(out.data() + kEncPublicKeySize, msg.data(), msg.size(),
                      nonce.data(), receiver_enc_pk.data(),
                      eph_sk.data()) != 0) {
    throw std::runtime_error("pk_encrypt failed");
  }
  return out;
}

std::optional<Bytes> pk_decrypt(BytesView receiver_enc_sk, BytesView blob) {
  require_sodium();
  if (receiver_enc_sk.size() != kEncSecretKeySize) return std::nullopt;
  if (blob.size() < kEncPublicKeySize + crypto_box_MACBYTES) return std::nullopt;

  BytesView eph_pk = blob.first(kEncPublicKeySize);
  BytesView box = blob.subspan(kEncPublicKeySize);

  Bytes receiver_pk(kEncPublicKeySize);
  crypto_scalarmult_base(receiver_pk.data(), receiver_enc_sk.data());
  Bytes nonce = box_nonce(eph_pk, receiver_pk);

  Bytes out(box.size() - crypto_box_MACBYTES);
  if (crypto_box_open_easy(out.data(), box.data(), box.size(), nonce.data(),
                           eph_pk.data(), receiver_enc_sk.data()) != 0) {
    return std::nullopt;
  }
  return out;
}

Bytes sym_encrypt(BytesView key32, BytesView msg, Rng& rng) {
  require_sodium();
  check_size(key32, kSymKeySize, "symmetric key");
  Bytes nonce = rng.bytes(crypto_secretbox_NONCEBYTES);
  Bytes out = nonce;
  out.resize(nonce.size() + msg.size() + crypto_secretbox_MACBYTES);
  crypto_secretbox_easy(out.data() + crypto_secretbox_NONCEBYTES, msg.data(),
                        msg.size(), nonce.data(), key32.data());
  return out;
}

std::optional<Bytes> sym_decrypt(BytesView key32, BytesView blob) {
  require_sodium();
  if (key32.size() != kSymKeySize) return std::nullopt;
  if (blob.size() < crypto_secretbox_NONCEBYTES + crypto_secretbox_MACBYTES) {
    return std::nullopt;
  }
  BytesView nonce = blob.first(crypto_secretbox_NONCEBYTES);
  BytesView box = blob.subspan(crypto_secretbox_NONCEBYTES);
  Bytes out(box.size() - crypto_secretbox_MACBYTES);
  if (crypto_secretbox_open_easy(out.data(), box.data(), box.size(),
                                 nonce.data(), key32.data()) != 0) {
    return std::nullopt;
  }
  return out;
}

}  // namespace evssi::crypto
