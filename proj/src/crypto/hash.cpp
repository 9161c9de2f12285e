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

#include "evssi/crypto/hash.hpp"

#include <cassert>
#include <stdexcept>

namespace evssi::crypto {

Bytes sha256(BytesView data) {
  Bytes out(kDigestSize);
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

Hasher::Hasher() { crypto_hash_sha256_init(&state_); }

Hasher& Hasher::update(BytesView data) {
  assert(!done_);
  crypto_hash_sha256_update(&state_, data.data(), data.size());
  return *this;
}

Hasher& Hasher::update_sized(BytesView data) {
  if (data.size() > 0xFFFFFFFFu) {
    throw std::length_error("Hasher: field too large");
  }
  Bytes len;
  append_u32_be(len, static_cast<uint32_t>(data.size()));
  update(len);
  return update(data);
}

Bytes Hasher::final_digest() {
  assert(!done_);
  done_ = true;
  Bytes out(kDigestSize);
  crypto_hash_sha256_final(&state_, out.data());
  return out;
}

Bytes hmac_sha256(BytesView key, BytesView data) {
  if (key.size() != kMacKeySize) {
    throw std::invalid_argument("hmac_sha256: key must be 32 bytes");
  }
  Bytes out(kMacSize);
  crypto_auth_hmacsha256_state st;
  crypto_auth_hmacsha256_init(&st, key.data(), key.size());
  crypto_auth_hmacsha256_update(&st, data.data(), data.size());
  crypto_auth_hmacsha256_final(&st, out.data());
  return out;
}

bool hmac_verify(BytesView key, BytesView data, BytesView tag) {
  if (tag.size() != kMacSize) return false;
  Bytes expected = hmac_sha256(key, data);
  return ct_equal(expected, tag);
}

}  // namespace evssi::crypto
