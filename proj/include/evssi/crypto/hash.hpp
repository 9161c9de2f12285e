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

#include <sodium.h>

#include <string_view>

#include "evssi/bytes.hpp"

namespace evssi::crypto {

inline constexpr size_t kDigestSize = 32;
inline constexpr size_t kMacSize = 32;
inline constexpr size_t kMacKeySize = 32;

Bytes sha256(BytesView data);

// Incremental SHA-256. update_sized prepends a 32-bit big-endian length so
// multi-field hash inputs cannot collide across field boundaries; every
// challenge and identifier digest in the system is built this way.
class Hasher {
 public:
  Hasher();
  Hasher& update(BytesView data);
  Hasher& update(std::string_view s) { return update(to_bytes(s)); }
  Hasher& update_sized(BytesView data);
  Hasher& update_sized(std::string_view s) { return update_sized(to_bytes(s)); }
  Bytes final_digest();

 private:
  crypto_hash_sha256_state state_;
  bool done_ = false;
};

// HMAC-SHA-256 with a 32-byte key.
Bytes hmac_sha256(BytesView key, BytesView data);
bool hmac_verify(BytesView key, BytesView data, BytesView tag);

}  // namespace evssi::crypto
