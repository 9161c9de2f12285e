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
#include <vector>

#include "evssi/crypto/conventional.hpp"
#include "evssi/crypto/types.hpp"

namespace evssi::crypto {

// Encrypted at-rest container for an actor's keys and credentials:
// a passphrase-derived key (argon2id) sealing the serialized bundle
// (XSalsa20-Poly1305). Writing with the same seed, bundle, and passphrase
// reproduces the file byte for byte.
struct KeyBundle {
  std::string role;
  DidKeys keys;
  std::vector<ContractCredential> credentials;
};

Bytes keystore_seal(const KeyBundle& bundle, const std::string& passphrase,
                    Rng& rng);

// nullopt on wrong passphrase or a corrupted container.
std::optional<KeyBundle> keystore_open(BytesView file,
                                       const std::string& passphrase);

}  // namespace evssi::crypto
