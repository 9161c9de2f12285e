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

#include "evssi/crypto/rng.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

#include "evssi/crypto/bigint.hpp"
#include "evssi/crypto/hash.hpp"

namespace evssi::crypto {

Rng::Rng(BytesView seed) {
  Bytes key = Hasher().update_sized("evssi.rng.seed").update_sized(seed).final_digest();
  std::copy(key.begin(), key.end(), key_.begin());
}

Rng Rng::from_u64(uint64_t seed) { return Rng(u64_be(seed)); }

Rng Rng::child(std::string_view label) const {
  Bytes key = Hasher()
                  .update_sized("evssi.rng.child")
                  .update_sized(BytesView(key_.data(), key_.size()))
                  .update_sized(label)
                  .final_digest();
  Rng out;
  std::copy(key.begin(), key.end(), out.key_.begin());
  return out;
}

void Rng::refill() {
  Bytes block = Hasher()
                    .update_sized(BytesView(key_.data(), key_.size()))
                    .update_sized(u64_be(block_))
                    .final_digest();
  ++block_;
  std::copy(block.begin(), block.end(), buf_.begin());
  buf_used_ = 0;
}

void Rng::fill(uint8_t* out, size_t len) {
  while (len > 0) {
    if (buf_used_ == buf_.size()) refill();
    size_t take = std::min(len, buf_.size() - buf_used_);
    std::memcpy(out, buf_.data() + buf_used_, take);
    buf_used_ += take;
    out += take;
    len -= take;
  }
}

Bytes Rng::bytes(size_t n) {
  Bytes out(n);
  fill(out.data(), n);
  return out;
}

uint64_t Rng::u64() {
  uint8_t raw[8];
  fill(raw, sizeof raw);
  uint64_t v = 0;
  for (uint8_t b : raw) v = v << 8 | b;
  return v;
}

uint64_t Rng::below(uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: zero bound");
  // Rejection sampling over the largest multiple of bound.
  uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    uint64_t v = u64();
    if (v < limit) return v % bound;
  }
}

mpz_class Rng::mpz_bits(unsigned bits) {
  if (bits == 0) return 0;
  size_t nbytes = (bits + 7) / 8;
  Bytes raw = bytes(nbytes);
  unsigned excess = static_cast<unsigned>(nbytes * 8 - bits);
  raw[0] &= static_cast<uint8_t>(0xFF >> excess);
  return mpz_from_bytes(raw);
}

mpz_class Rng::mpz_below(const mpz_class& bound) {
  if (bound <= 0) throw std::invalid_argument("Rng::mpz_below: zero bound");
  unsigned bits = static_cast<unsigned>(mpz_sizeinbase(bound.get_mpz_t(), 2));
  for (;;) {
    mpz_class v = mpz_bits(bits);
    if (v < bound) return v;
  }
}

mpz_class Rng::mpz_exact_bits(unsigned bits) {
  if (bits == 0) throw std::invalid_argument("Rng::mpz_exact_bits: zero width");
  mpz_class v = mpz_bits(bits);
  mpz_setbit(v.get_mpz_t(), bits - 1);
  return v;
}

}  // namespace evssi::crypto
