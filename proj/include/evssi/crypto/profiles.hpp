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

#include <stdexcept>

namespace evssi::crypto {

// Bit-length profile for the RSA-group credential scheme. The 2048-bit
// profile carries production parameters; 512 and 1024 shrink only the
// modulus so tests and demos run fast. Everything else is derived:
//
//   e_bits      signature exponent width; primes live in
//               [2^(e_bits-1), 2^(e_bits-1) + 2^e_window]
//   v_bits      blinding exponent width, n_bits + pad + e_bits
//   response width for secret x: x_bits + pad_bits + hash_bits (+1 after
//   adding c*x), which is what keeps responses statistically independent
//   of the secrets.
struct ClProfile {
  unsigned n_bits;
  unsigned attr_bits = 256;
  unsigned pad_bits = 80;
  unsigned hash_bits = 256;
  unsigned e_window = 120;
  unsigned rev_bits = 128;

  unsigned e_bits() const { return attr_bits + pad_bits + hash_bits + 4; }
  unsigned v_bits() const { return n_bits + pad_bits + e_bits(); }
  unsigned vprime_bits() const { return n_bits + pad_bits; }
  unsigned response_bits(unsigned secret_bits) const {
    return secret_bits + pad_bits + hash_bits;
  }

  static ClProfile for_modulus_bits(unsigned bits) {
    if (bits != 512 && bits != 1024 && bits != 2048) {
      throw std::invalid_argument("ClProfile: modulus must be 512/1024/2048");
    }
    ClProfile p;
    p.n_bits = bits;
    return p;
  }
};

}  // namespace evssi::crypto
