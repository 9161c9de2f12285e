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

#include "evssi/crypto/bigint.hpp"

#include <stdexcept>
#include <vector>

#include "evssi/crypto/rng.hpp"

namespace evssi::crypto {

namespace {

// 25 Miller-Rabin rounds: error below 4^-25 < 2^-50 per round pair, far
// below the group-level security of the test profiles.
constexpr int kPrimalityRounds = 25;

const std::vector<unsigned long>& small_primes() {
  static const std::vector<unsigned long> primes = [] {
    std::vector<unsigned long> out;
    std::vector<bool> sieve(8192, true);
    for (unsigned long i = 2; i < sieve.size(); ++i) {
      if (!sieve[i]) continue;
      out.push_back(i);
      for (unsigned long j = i * i; j < sieve.size(); j += i) sieve[j] = false;
    }
    return out;
  }();
  return primes;
}

}  // namespace

Bytes mpz_to_bytes(const mpz_class& v) {
  if (v < 0) throw std::domain_error("mpz_to_bytes: negative value");
  if (v == 0) return {};
  size_t count = 0;
  Bytes out((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8);
  mpz_export(out.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
  out.resize(count);
  return out;
}

mpz_class mpz_from_bytes(BytesView b) {
  mpz_class v;
  if (!b.empty()) {
    mpz_import(v.get_mpz_t(), b.size(), 1, 1, 1, 0, b.data());
  }
  return v;
}

codec::WireValue mpz_to_wire(const mpz_class& v) {
  return codec::WireValue::uint_be(mpz_to_bytes(v));
}

mpz_class mpz_from_wire(const codec::WireValue& v) {
  if (!v.is(codec::WireValue::Kind::Uint)) {
    throw codec::CodecError(codec::CodecError::Kind::Malformed,
                            "codec: not an integer");
  }
  return mpz_from_bytes(v.data());
}

unsigned bit_length(const mpz_class& v) {
  if (v == 0) return 0;
  return static_cast<unsigned>(mpz_sizeinbase(v.get_mpz_t(), 2));
}

bool is_probable_prime(const mpz_class& v) {
  return mpz_probab_prime_p(v.get_mpz_t(), kPrimalityRounds) != 0;
}

mpz_class random_prime(Rng& rng, unsigned bits) {
  if (bits < 2) throw std::invalid_argument("random_prime: width too small");
  for (;;) {
    mpz_class c = rng.mpz_exact_bits(bits);
    mpz_setbit(c.get_mpz_t(), 0);
    if (is_probable_prime(c)) return c;
  }
}

mpz_class random_prime_in_range(Rng& rng, const mpz_class& lo,
                                const mpz_class& hi) {
  if (lo > hi) throw std::invalid_argument("random_prime_in_range: empty");
  mpz_class width = hi - lo + 1;
  for (;;) {
    mpz_class c = lo + rng.mpz_below(width);
    mpz_setbit(c.get_mpz_t(), 0);
    if (c > hi) continue;
    if (is_probable_prime(c)) return c;
  }
}

mpz_class random_safe_prime(Rng& rng, unsigned bits) {
  if (bits < 4) throw std::invalid_argument("random_safe_prime: width too small");
  const auto& primes = small_primes();
  for (;;) {
    // q odd with its top two bits set, so p = 2q + 1 has exactly `bits`
    // bits and p >= 1.5 * 2^(bits-1); a product of two such primes always
    // fills its full width.
    mpz_class q = rng.mpz_exact_bits(bits - 1);
    mpz_setbit(q.get_mpz_t(), bits - 3);
    mpz_setbit(q.get_mpz_t(), 0);
    // Walk q upward in steps of 2, sieving p and q together; restart from
    // a fresh candidate once the step count would spoil uniformity too far.
    for (int step = 0; step < 4096; ++step, q += 2) {
      if (bit_length(q) != bits - 1) break;
      bool composite = false;
      for (unsigned long sp : primes) {
        unsigned long rq = mpz_fdiv_ui(q.get_mpz_t(), sp);
        // p = 2q+1 divisible by sp  <=>  2q ≡ -1 (mod sp).
        if (rq == 0 || (2 * rq + 1) % sp == 0) {
          if (q != sp) {
            composite = true;
            break;
          }
        }
      }
      if (composite) continue;
      if (!is_probable_prime(q)) continue;
      mpz_class p = 2 * q + 1;
      if (is_probable_prime(p)) return p;
    }
  }
}

mpz_class mod_inverse(const mpz_class& a, const mpz_class& m) {
  mpz_class out;
  if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw std::domain_error("mod_inverse: not invertible");
  }
  return out;
}

mpz_class powm(const mpz_class& a, const mpz_class& e, const mpz_class& m) {
  mpz_class out;
  mpz_powm(out.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return out;
}

}  // namespace evssi::crypto
