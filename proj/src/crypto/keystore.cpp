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

#include "evssi/crypto/keystore.hpp"

#include <sodium.h>

#include <stdexcept>

#include "evssi/codec.hpp"

namespace evssi::crypto {

namespace {

using codec::WireValue;

constexpr char kMagic[4] = {'E', 'V', 'K', 'S'};
constexpr uint8_t kVersion = 1;
constexpr size_t kSaltSize = 16;

// Interactive-strength argon2id would dominate test time; this store
// protects simulation artifacts, so the cheapest parameters are fine and
// keep the derivation deterministic and fast.
Bytes derive_key(const std::string& passphrase, BytesView salt) {
  Bytes key(kSymKeySize);
  if (crypto_pwhash(key.data(), key.size(), passphrase.data(),
                    passphrase.size(), salt.data(),
                    crypto_pwhash_OPSLIMIT_MIN, crypto_pwhash_MEMLIMIT_MIN,
                    crypto_pwhash_ALG_ARGON2ID13) != 0) {
    throw std::runtime_error("keystore: key derivation failed");
  }
  return key;
}

WireValue bundle_to_wire(const KeyBundle& b) {
  std::vector<WireValue> creds;
  for (const ContractCredential& c : b.credentials) {
    creds.push_back(c.to_wire());
  }
  return WireValue::record(
      codec::kRecKeyBundle,
      {WireValue::str(b.role), WireValue::str(b.keys.did),
       WireValue::bytes(b.keys.sig_pk), WireValue::bytes(b.keys.sig_sk),
       WireValue::bytes(b.keys.enc_pk), WireValue::bytes(b.keys.enc_sk),
       WireValue::seq(std::move(creds))});
}

KeyBundle bundle_from_wire(const WireValue& v) {
  if (!v.is(WireValue::Kind::Record) ||
      v.record_tag() != codec::kRecKeyBundle || v.items().size() != 7) {
    throw codec::CodecError(codec::CodecError::Kind::Malformed,
                            "codec: malformed key bundle");
  }
  KeyBundle b;
  b.role = v.items()[0].text();
  b.keys.did = v.items()[1].text();
  b.keys.sig_pk = v.items()[2].data();
  b.keys.sig_sk = v.items()[3].data();
  b.keys.enc_pk = v.items()[4].data();
  b.keys.enc_sk = v.items()[5].data();
  for (const WireValue& c : v.items()[6].items()) {
    b.credentials.push_back(ContractCredential::from_wire(c));
  }
  return b;
}

}  // namespace

Bytes keystore_seal(const KeyBundle& bundle, const std::string& passphrase,
                    Rng& rng) {
  Bytes salt = rng.bytes(kSaltSize);
  Bytes key = derive_key(passphrase, salt);
  Bytes box = sym_encrypt(key, codec::encode(bundle_to_wire(bundle)), rng);

  Bytes out(kMagic, kMagic + sizeof kMagic);
  out.push_back(kVersion);
  append(out, salt);
  append(out, box);
  return out;
}

std::optional<KeyBundle> keystore_open(BytesView file,
                                       const std::string& passphrase) {
  if (file.size() < sizeof kMagic + 1 + kSaltSize) return std::nullopt;
  if (!std::equal(kMagic, kMagic + sizeof kMagic, file.begin())) {
    return std::nullopt;
  }
  if (file[sizeof kMagic] != kVersion) return std::nullopt;

  BytesView salt = file.subspan(sizeof kMagic + 1, kSaltSize);
  BytesView box = file.subspan(sizeof kMagic + 1 + kSaltSize);
  Bytes key = derive_key(passphrase, salt);
  std::optional<Bytes> plain = sym_decrypt(key, box);
  if (!plain) return std::nullopt;
  try {
    return bundle_from_wire(codec::decode(*plain));
  } catch (const codec::CodecError&) {
    return std::nullopt;
  }
}

}  // namespace evssi::crypto
