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

#include <array>
#include <cstdint>
#include <string_view>

#include <gmpxx.h>

#include "evssi/bytes.hpp"

namespace evssi::crypto {

// Deterministic random generator: SHA-256 in counter mode over a 32-byte
// key. Every random draw in the system comes from one of these so a run is
// a pure function of its seed; there is no ambient entropy anywhere.
// child() derives an independent stream, used to give each actor its own
// generator regardless of scheduling order.
class Rng {
 public:
  explicit Rng(BytesView seed);
  static Rng from_u64(uint64_t seed);

  Rng child(std::string_view label) const;

  void fill(uint8_t* out, size_t len);
  Bytes bytes(size_t n);
  uint64_t u64();
  // Uniform in [0, bound); bound must be positive.
  uint64_t below(uint64_t bound);

  // Uniform in [0, 2^bits).
  mpz_class mpz_bits(unsigned bits);
  // Uniform in [0, bound); bound must be positive.
  mpz_class mpz_below(const mpz_class& bound);
  // Uniform in [2^(bits-1), 2^bits): exactly `bits` significant bits.
  mpz_class mpz_exact_bits(unsigned bits);

 private:
  Rng() = default;
  void refill();

  std::array<uint8_t, 32> key_{};
  uint64_t block_ = 0;
  std::array<uint8_t, 32> buf_{};
  size_t buf_used_ = 32;  // empty
};

}  // namespace evssi::crypto
