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

#pragma once

#include <optional>
#include <string>

#include "evssi/bytes.hpp"
#include "evssi/crypto/rng.hpp"

namespace evssi::crypto {

inline constexpr size_t kSigPublicKeySize = 32;   // Ed25519
inline constexpr size_t kSigSecretKeySize = 64;
inline constexpr size_t kSignatureSize = 64;
inline constexpr size_t kEncPublicKeySize = 32;   // X25519
inline constexpr size_t kEncSecretKeySize = 32;
inline constexpr size_t kSymKeySize = 32;
inline constexpr const char* kDidPrefix = "did:evs:";

// A DID and the keypairs it binds: Ed25519 for signatures, X25519 for
// public-key encryption. The identifier is derived from the public keys,
// so a DID commits to its key material.
struct DidKeys {
  std::string did;
  Bytes sig_pk, sig_sk;
  Bytes enc_pk, enc_sk;
};

std::string did_from_keys(BytesView sig_pk, BytesView enc_pk);

DidKeys gen_did_keys(Rng& rng);
DidKeys did_keys_from_seed(BytesView seed32);

Bytes sign(BytesView sig_sk, BytesView msg);
bool verify_sig(BytesView sig_pk, BytesView msg, BytesView sig);

// Anonymous public-key encryption to an X25519 key: an ephemeral keypair
// is drawn from the caller's generator, the nonce is derived from both
// public keys, and the output is eph_pk || box. Decryption returns nullopt
// on any authentication failure. Sender identity, where the protocol needs
// it, is bound by an explicit signature inside the plaintext.
Bytes pk_encrypt(BytesView receiver_enc_pk, BytesView msg, Rng& rng);
std::optional<Bytes> pk_decrypt(BytesView receiver_enc_sk, BytesView blob);

// Symmetric authenticated encryption (XSalsa20-Poly1305), nonce prepended.
Bytes sym_encrypt(BytesView key32, BytesView msg, Rng& rng);
std::optional<Bytes> sym_decrypt(BytesView key32, BytesView blob);

}  // namespace evssi::crypto
