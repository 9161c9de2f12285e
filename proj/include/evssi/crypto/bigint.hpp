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

#include <gmpxx.h>

#include "evssi/bytes.hpp"
#include "evssi/codec.hpp"

namespace evssi::crypto {

// Big-endian minimal encoding; zero is the empty string. Inputs must be
// non-negative (everything on the wire is).
Bytes mpz_to_bytes(const mpz_class& v);
mpz_class mpz_from_bytes(BytesView b);

codec::WireValue mpz_to_wire(const mpz_class& v);
mpz_class mpz_from_wire(const codec::WireValue& v);

unsigned bit_length(const mpz_class& v);

// Miller-Rabin via mpz_probab_prime_p with enough rounds for 2^-80 error.
bool is_probable_prime(const mpz_class& v);

class Rng;

// Uniform prime with exactly `bits` bits (top bit set).
mpz_class random_prime(Rng& rng, unsigned bits);

// Uniform prime in [lo, hi].
mpz_class random_prime_in_range(Rng& rng, const mpz_class& lo,
                                const mpz_class& hi);

// Safe prime p = 2q + 1 with p of exactly `bits` bits and q prime.
// Candidates are sieved against small primes on both p and q before the
// Miller-Rabin rounds, which is what makes 1024-bit searches tolerable.
mpz_class random_safe_prime(Rng& rng, unsigned bits);

// Modular inverse; throws std::domain_error when gcd(a, m) != 1.
mpz_class mod_inverse(const mpz_class& a, const mpz_class& m);

// a^e mod m for signed e (negative exponents use the inverse; m must then
// be coprime with a).
mpz_class powm(const mpz_class& a, const mpz_class& e, const mpz_class& m);

}  // namespace evssi::crypto
