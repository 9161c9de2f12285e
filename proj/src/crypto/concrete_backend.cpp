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

// RSA-group credential scheme.
//
// Issuer key: safe-prime modulus n = pq, quadratic-residue generators
// S, Z, R_0..R_{L-1}. Slot 0 holds the holder's link secret, slot 1 the
// credential's revocation element, slots 2+ the named attributes. A
// credential is (A, e, v) with
//
//   A^e = Z / (S^v * prod_i R_i^{m_i})  (mod n),  e prime.
//
// Issuance is blinded: the holder sends U = S^{v'} R_0^{ms} with a proof
// of well-formedness, the issuer signs U * S^{v''} * prod_{i>=1} R_i^{m_i}
// and never learns ms. Presentations randomize A' = A S^r and prove the
// signature relation plus non-revocation in zero knowledge, with one
// shared response binding the revocation element in the accumulator proof
// to attribute slot 1 of the signature proof.
//
// Revocation: accumulator V = u^{prod e_rev} over the same modulus.
// Adding squares in publicly (V^e), removal needs the group order. A
// holder's witness w satisfies w^{e_rev} = V and is maintained from the
// public delta log alone: Add multiplies the exponent, Remove uses the
// Bezout pair of the two primes.

#include <algorithm>
#include <optional>

#include "evssi/crypto/backend.hpp"
#include "evssi/crypto/bigint.hpp"
#include "evssi/crypto/hash.hpp"
#include "evssi/crypto/profiles.hpp"

namespace evssi::crypto {

namespace {

using codec::WireValue;

constexpr const char* kBlindChallengeTag = "evssi.blind.challenge";
constexpr const char* kPresBindTag = "evssi.pres.bind";
constexpr const char* kPresChallengeTag = "evssi.pres.challenge";

// Slot layout: 0 = link secret, 1 = revocation element, 2.. = named.
constexpr size_t kReservedSlots = 2;

[[noreturn]] void bad_input(const std::string& what) {
  throw CryptoError(CryptoError::Kind::BadInput, what);
}

mpz_class attr_to_int(const std::string& value) {
  return mpz_from_bytes(sha256(to_bytes(value)));
}

struct IssuerPub {
  mpz_class n, s, z;
  std::vector<mpz_class> r;  // one generator per slot
  std::vector<std::string> attr_names;
  unsigned n_bits = 0;

  ClProfile profile() const { return ClProfile::for_modulus_bits(n_bits); }

  size_t slot_of(const std::string& name) const {
    for (size_t i = 0; i < attr_names.size(); ++i) {
      if (attr_names[i] == name) return kReservedSlots + i;
    }
    bad_input("unknown attribute: " + name);
  }
};

WireValue issuer_pub_to_wire(const IssuerPub& k) {
  std::vector<WireValue> gens;
  for (const mpz_class& g : k.r) gens.push_back(mpz_to_wire(g));
  std::vector<WireValue> names;
  for (const std::string& a : k.attr_names) names.push_back(WireValue::str(a));
  return WireValue::record(
      codec::kRecIssuerPublicKey,
      {mpz_to_wire(k.n), mpz_to_wire(k.s), mpz_to_wire(k.z),
       WireValue::seq(std::move(gens)), WireValue::seq(std::move(names)),
       WireValue::from_u64(k.n_bits)});
}

IssuerPub issuer_pub_from_wire(const WireValue& v) {
  if (!v.is(WireValue::Kind::Record) ||
      v.record_tag() != codec::kRecIssuerPublicKey || v.items().size() != 6) {
    bad_input("malformed issuer public key");
  }
  IssuerPub k;
  k.n = mpz_from_wire(v.items()[0]);
  k.s = mpz_from_wire(v.items()[1]);
  k.z = mpz_from_wire(v.items()[2]);
  for (const WireValue& g : v.items()[3].items()) {
    k.r.push_back(mpz_from_wire(g));
  }
  for (const WireValue& a : v.items()[4].items()) {
    k.attr_names.push_back(a.text());
  }
  k.n_bits = static_cast<unsigned>(v.items()[5].as_u64());
  if (k.r.size() != kReservedSlots + k.attr_names.size()) {
    bad_input("issuer key slot mismatch");
  }
  return k;
}

struct IssuerSec {
  mpz_class p, q;

  mpz_class group_order() const { return ((p - 1) / 2) * ((q - 1) / 2); }
};

WireValue issuer_sec_to_wire(const IssuerSec& k) {
  return WireValue::record(codec::kRecIssuerSecretKey,
                           {mpz_to_wire(k.p), mpz_to_wire(k.q)});
}

IssuerSec issuer_sec_from_wire(const WireValue& v) {
  if (!v.is(WireValue::Kind::Record) ||
      v.record_tag() != codec::kRecIssuerSecretKey || v.items().size() != 2) {
    bad_input("malformed issuer secret key");
  }
  return IssuerSec{mpz_from_wire(v.items()[0]), mpz_from_wire(v.items()[1])};
}

struct RegParams {
  mpz_class n, u;
};

WireValue reg_params_to_wire(const RegParams& p) {
  return WireValue::record(codec::kRecRegistryDef,
                           {mpz_to_wire(p.n), mpz_to_wire(p.u)});
}

RegParams reg_params_from_wire(const WireValue& v) {
  if (!v.is(WireValue::Kind::Record) ||
      v.record_tag() != codec::kRecRegistryDef || v.items().size() != 2) {
    bad_input("malformed registry parameters");
  }
  return RegParams{mpz_from_wire(v.items()[0]), mpz_from_wire(v.items()[1])};
}

// Random generator of the quadratic-residue subgroup (a square of a unit).
mpz_class random_qr(Rng& rng, const mpz_class& n) {
  for (;;) {
    mpz_class x = rng.mpz_below(n);
    if (x < 2) continue;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
    if (g != 1) continue;
    return powm(x, 2, n);
  }
}

bool in_group(const mpz_class& x, const mpz_class& n) {
  return x >= 2 && x < n;
}

Bytes blind_challenge(const IssuerPub& key, const mpz_class& u,
                      const mpz_class& u_tilde, BytesView nonce) {
  return Hasher()
      .update_sized(kBlindChallengeTag)
      .update_sized(mpz_to_bytes(key.n))
      .update_sized(mpz_to_bytes(u))
      .update_sized(mpz_to_bytes(u_tilde))
      .update_sized(nonce)
      .final_digest();
}

struct PresCommitments {
  mpz_class a_prime, c_w, t, t_acc;
};

Bytes pres_bind_hash(BytesView request_bytes, const PresCommitments& cm,
                     const AttributeList& revealed) {
  Hasher h;
  h.update_sized(kPresBindTag)
      .update_sized(request_bytes)
      .update_sized(mpz_to_bytes(cm.a_prime))
      .update_sized(mpz_to_bytes(cm.c_w))
      .update_sized(mpz_to_bytes(cm.t))
      .update_sized(mpz_to_bytes(cm.t_acc));
  for (const auto& [name, value] : revealed) {
    h.update_sized(name).update_sized(value);
  }
  return h.final_digest();
}

Bytes pres_challenge(BytesView bind_hash) {
  return Hasher()
      .update_sized(kPresChallengeTag)
      .update_sized(bind_hash)
      .final_digest();
}

// Hidden slot indices for a reveal set, ascending. Slots 0 and 1 are never
// revealed.
std::vector<size_t> hidden_slots(const IssuerPub& key,
                                 const std::vector<std::string>& reveal) {
  std::vector<size_t> out = {0, 1};
  for (size_t i = 0; i < key.attr_names.size(); ++i) {
    if (std::find(reveal.begin(), reveal.end(), key.attr_names[i]) ==
        reveal.end()) {
      out.push_back(kReservedSlots + i);
    }
  }
  return out;
}

class ConcreteBackend final : public CryptoBackend {
 public:
  explicit ConcreteBackend(unsigned modulus_bits)
      : profile_(ClProfile::for_modulus_bits(modulus_bits)) {}

  std::string name() const override { return "concrete"; }
  unsigned modulus_bits() const override { return profile_.n_bits; }

  IssuerKeys issuer_keygen(
      Rng& rng, const std::vector<std::string>& attr_names) override {
    if (attr_names.empty()) bad_input("issuer_keygen: no attributes");

    IssuerSec sec;
    sec.p = random_safe_prime(rng, profile_.n_bits / 2);
    do {
      sec.q = random_safe_prime(rng, profile_.n_bits / 2);
    } while (sec.q == sec.p);

    IssuerPub pub;
    pub.n = sec.p * sec.q;
    pub.n_bits = profile_.n_bits;
    pub.attr_names = attr_names;
    mpz_class order = sec.group_order();
    pub.s = random_qr(rng, pub.n);
    auto gen = [&] {
      mpz_class x = 2 + rng.mpz_below(order - 2);
      return powm(pub.s, x, pub.n);
    };
    pub.z = gen();
    size_t slots = kReservedSlots + attr_names.size();
    for (size_t i = 0; i < slots; ++i) pub.r.push_back(gen());

    IssuerKeys out;
    out.pub = issuer_pub_to_wire(pub);
    out.sec = issuer_sec_to_wire(sec);
    out.attr_names = attr_names;
    return out;
  }

  RegistryInit registry_init(Rng& rng, const IssuerKeys& issuer) override {
    IssuerPub pub = issuer_pub_from_wire(issuer.pub);
    RegParams params;
    params.n = pub.n;
    params.u = random_qr(rng, pub.n);
    RegistryInit out;
    out.params = reg_params_to_wire(params);
    out.acc = mpz_to_wire(params.u);
    return out;
  }

  BlindedSecret blind_master_secret(Rng& rng, const WireValue& issuer_pub,
                                    BytesView offer_nonce) override {
    IssuerPub key = issuer_pub_from_wire(issuer_pub);
    ClProfile pf = key.profile();
    mpz_class ms = rng.mpz_bits(pf.attr_bits);
    mpz_class vprime = rng.mpz_bits(pf.vprime_bits());
    mpz_class u = powm(key.s, vprime, key.n) * powm(key.r[0], ms, key.n) % key.n;

    mpz_class ms_tilde = rng.mpz_bits(pf.response_bits(pf.attr_bits));
    mpz_class v_tilde = rng.mpz_bits(pf.response_bits(pf.vprime_bits()));
    mpz_class u_tilde =
        powm(key.s, v_tilde, key.n) * powm(key.r[0], ms_tilde, key.n) % key.n;

    Bytes c = blind_challenge(key, u, u_tilde, offer_nonce);
    mpz_class c_int = mpz_from_bytes(c);
    mpz_class ms_hat = ms_tilde + c_int * ms;
    mpz_class v_hat = v_tilde + c_int * vprime;

    BlindedSecret out;
    out.blinded = mpz_to_wire(u);
    out.proof = WireValue::record(
        codec::kRecBlindingProof,
        {WireValue::bytes(c), mpz_to_wire(ms_hat), mpz_to_wire(v_hat)});
    out.pending = WireValue::record(
        codec::kRecBlindedSecret,
        {mpz_to_wire(ms), mpz_to_wire(vprime), mpz_to_wire(u),
         WireValue::bytes(offer_nonce)});
    return out;
  }

  IssueResult issue_credential(Rng& rng, const IssuerKeys& issuer,
                               const WireValue& reg_params,
                               const WireValue& acc, const WireValue& blinded,
                               const WireValue& blind_proof,
                               BytesView offer_nonce,
                               const AttributeList& attrs) override {
    IssuerPub pub = issuer_pub_from_wire(issuer.pub);
    IssuerSec sec = issuer_sec_from_wire(issuer.sec);
    RegParams params = reg_params_from_wire(reg_params);
    if (params.n != pub.n) bad_input("registry bound to another modulus");

    mpz_class u = mpz_from_wire(blinded);
    if (!check_blinding(pub, u, blind_proof, offer_nonce)) {
      throw CryptoError(CryptoError::Kind::InvalidBlinding,
                        "blinded secret proof rejected");
    }

    AttributeList ordered = normalize_attrs(pub, attrs);

    ClProfile pf = pub.profile();
    mpz_class order = sec.group_order();
    mpz_class e_rev = random_prime(rng, pf.rev_bits);
    mpz_class lo;
    mpz_ui_pow_ui(lo.get_mpz_t(), 2, pf.e_bits() - 1);
    mpz_class hi = lo;
    mpz_setbit(hi.get_mpz_t(), pf.e_window);
    mpz_class e = random_prime_in_range(rng, lo, hi);
    mpz_class vpp = rng.mpz_exact_bits(pf.v_bits());

    // Q = Z / (U * S^v'' * prod_{i>=1} R_i^{m_i});  A = Q^(1/e).
    mpz_class denom = u * powm(pub.s, vpp, pub.n) % pub.n;
    denom = denom * powm(pub.r[1], e_rev, pub.n) % pub.n;
    for (size_t i = 0; i < ordered.size(); ++i) {
      denom = denom *
              powm(pub.r[kReservedSlots + i], attr_to_int(ordered[i].second),
                   pub.n) %
              pub.n;
    }
    mpz_class q_val = pub.z * mod_inverse(denom, pub.n) % pub.n;
    mpz_class a = powm(q_val, mod_inverse(e, order), pub.n);

    mpz_class acc_now = mpz_from_wire(acc);
    if (!in_group(acc_now, pub.n)) bad_input("bad accumulator value");

    IssueResult out;
    out.pre_credential = WireValue::record(
        codec::kRecPreCredential,
        {mpz_to_wire(a), mpz_to_wire(e), mpz_to_wire(vpp), mpz_to_wire(e_rev),
         attributes_to_wire(ordered)});
    // The pre-add accumulator IS the fresh witness: w^e_rev = V_after.
    out.witness =
        WireValue::record(codec::kRecAccumWitness, {mpz_to_wire(acc_now)});
    out.new_acc = mpz_to_wire(powm(acc_now, e_rev, pub.n));
    out.rev_element = mpz_to_wire(e_rev);
    return out;
  }

  ContractCredential complete_credential(const WireValue& issuer_pub,
                                         const WireValue& pending,
                                         const WireValue& pre_credential,
                                         const WireValue& witness,
                                         uint64_t witness_version) override {
    IssuerPub pub = issuer_pub_from_wire(issuer_pub);
    if (!pending.is(WireValue::Kind::Record) ||
        pending.record_tag() != codec::kRecBlindedSecret ||
        pending.items().size() != 4) {
      bad_input("malformed pending blinding state");
    }
    mpz_class ms = mpz_from_wire(pending.items()[0]);
    mpz_class vprime = mpz_from_wire(pending.items()[1]);

    if (!pre_credential.is(WireValue::Kind::Record) ||
        pre_credential.record_tag() != codec::kRecPreCredential ||
        pre_credential.items().size() != 5) {
      bad_input("malformed pre-credential");
    }
    mpz_class a = mpz_from_wire(pre_credential.items()[0]);
    mpz_class e = mpz_from_wire(pre_credential.items()[1]);
    mpz_class vpp = mpz_from_wire(pre_credential.items()[2]);
    mpz_class e_rev = mpz_from_wire(pre_credential.items()[3]);
    AttributeList attrs = attributes_from_wire(pre_credential.items()[4]);

    if (attrs.size() != pub.attr_names.size()) {
      throw CryptoError(CryptoError::Kind::SchemaMismatch,
                        "attribute count differs from issuer key");
    }
    for (size_t i = 0; i < attrs.size(); ++i) {
      if (attrs[i].first != pub.attr_names[i]) {
        throw CryptoError(CryptoError::Kind::SchemaMismatch,
                          "attribute order differs from issuer key");
      }
    }
    if (!has_emsp_id(attrs)) {
      throw CryptoError(CryptoError::Kind::SchemaMismatch,
                        "credential lacks " + std::string(kEmspIdAttribute));
    }

    mpz_class v = vprime + vpp;
    if (bit_length(e) != pub.profile().e_bits() || !is_probable_prime(e)) {
      throw CryptoError(CryptoError::Kind::InvalidSignature,
                        "signature exponent out of shape");
    }

    mpz_class denom = powm(pub.s, v, pub.n) * powm(pub.r[0], ms, pub.n) % pub.n;
    denom = denom * powm(pub.r[1], e_rev, pub.n) % pub.n;
    for (size_t i = 0; i < attrs.size(); ++i) {
      denom = denom *
              powm(pub.r[kReservedSlots + i], attr_to_int(attrs[i].second),
                   pub.n) %
              pub.n;
    }
    mpz_class expected = pub.z * mod_inverse(denom, pub.n) % pub.n;
    if (powm(a, e, pub.n) != expected) {
      throw CryptoError(CryptoError::Kind::InvalidSignature,
                        "pre-credential signature check failed");
    }

    ContractCredential cred;
    cred.attrs = attrs;
    cred.master_secret = mpz_to_wire(ms);
    cred.signature = WireValue::record(
        codec::kRecClSignature,
        {mpz_to_wire(a), mpz_to_wire(e), mpz_to_wire(v)});
    cred.rev_element = mpz_to_wire(e_rev);
    cred.witness = witness;
    cred.witness_version = witness_version;
    return cred;
  }

  WireValue acc_add(const WireValue& reg_params, const WireValue& acc,
                    const WireValue& element) override {
    RegParams params = reg_params_from_wire(reg_params);
    mpz_class v = mpz_from_wire(acc);
    mpz_class e = mpz_from_wire(element);
    if (!in_group(v, params.n) || e < 2) bad_input("acc_add: bad operand");
    return mpz_to_wire(powm(v, e, params.n));
  }

  WireValue acc_revoke(const IssuerKeys& issuer, const WireValue& reg_params,
                       const WireValue& acc,
                       const WireValue& element) override {
    IssuerSec sec = issuer_sec_from_wire(issuer.sec);
    RegParams params = reg_params_from_wire(reg_params);
    mpz_class v = mpz_from_wire(acc);
    mpz_class e = mpz_from_wire(element);
    if (!in_group(v, params.n) || e < 2) bad_input("acc_revoke: bad operand");
    mpz_class inv_e = mod_inverse(e, sec.group_order());
    return mpz_to_wire(powm(v, inv_e, params.n));
  }

  void witness_update(const WireValue& reg_params, ContractCredential& cred,
                      std::span<const RegistryDelta> deltas,
                      const WireValue& target_acc,
                      uint64_t target_version) override {
    RegParams params = reg_params_from_wire(reg_params);
    if (!cred.witness.is(WireValue::Kind::Record) ||
        cred.witness.record_tag() != codec::kRecAccumWitness ||
        cred.witness.items().size() != 1) {
      bad_input("malformed witness");
    }
    mpz_class w = mpz_from_wire(cred.witness.items()[0]);
    mpz_class own = mpz_from_wire(cred.rev_element);

    uint64_t at = cred.witness_version;
    for (const RegistryDelta& d : deltas) {
      if (d.version != at + 1) {
        throw CryptoError(CryptoError::Kind::StaleWitness,
                          "delta log gap at version " + std::to_string(at + 1));
      }
      mpz_class e = mpz_from_wire(d.element);
      if (d.op == RegistryDelta::Op::Add) {
        w = powm(w, e, params.n);
      } else {
        if (e == own) {
          throw CryptoError(CryptoError::Kind::Revoked,
                            "credential revoked at version " +
                                std::to_string(d.version));
        }
        // w' = V_after^a * w^b with a*own + b*e = 1, so w'^own = V_after.
        mpz_class g, a_coef, b_coef;
        mpz_gcdext(g.get_mpz_t(), a_coef.get_mpz_t(), b_coef.get_mpz_t(),
                   own.get_mpz_t(), e.get_mpz_t());
        if (g != 1) bad_input("revocation elements not coprime");
        mpz_class v_after = mpz_from_wire(d.acc_after);
        w = powm(v_after, a_coef, params.n) * powm(w, b_coef, params.n) %
            params.n;
      }
      at = d.version;
    }

    if (at != target_version) {
      throw CryptoError(CryptoError::Kind::StaleWitness,
                        "deltas stop at version " + std::to_string(at));
    }
    mpz_class target = mpz_from_wire(target_acc);
    if (powm(w, own, params.n) != target) {
      throw CryptoError(CryptoError::Kind::StaleWitness,
                        "witness does not match accumulator");
    }
    cred.witness =
        WireValue::record(codec::kRecAccumWitness, {mpz_to_wire(w)});
    cred.witness_version = target_version;
  }

  Presentation create_presentation(Rng& rng, const WireValue& issuer_pub,
                                   const WireValue& reg_params,
                                   const WireValue& acc,
                                   const ContractCredential& cred,
                                   const ProofRequest& request) override {
    IssuerPub pub = issuer_pub_from_wire(issuer_pub);
    RegParams params = reg_params_from_wire(reg_params);
    if (cred.witness_version != request.registry_version) {
      throw CryptoError(CryptoError::Kind::StaleWitness,
                        "witness version behind proof request");
    }
    mpz_class acc_now = mpz_from_wire(acc);
    mpz_class w = mpz_from_wire(cred.witness.items()[0]);
    mpz_class e_rev = mpz_from_wire(cred.rev_element);
    if (powm(w, e_rev, params.n) != acc_now) {
      throw CryptoError(CryptoError::Kind::StaleWitness,
                        "witness does not open the accumulator");
    }

    if (!cred.signature.is(WireValue::Kind::Record) ||
        cred.signature.record_tag() != codec::kRecClSignature ||
        cred.signature.items().size() != 3) {
      bad_input("malformed signature");
    }
    mpz_class a = mpz_from_wire(cred.signature.items()[0]);
    mpz_class e = mpz_from_wire(cred.signature.items()[1]);
    mpz_class v = mpz_from_wire(cred.signature.items()[2]);
    mpz_class ms = mpz_from_wire(cred.master_secret);

    // Slot values, hidden slot list, revealed list (in request order).
    std::vector<mpz_class> m(kReservedSlots + pub.attr_names.size());
    m[0] = ms;
    m[1] = e_rev;
    for (size_t i = 0; i < cred.attrs.size(); ++i) {
      m[kReservedSlots + i] = attr_to_int(cred.attrs[i].second);
    }
    AttributeList revealed;
    for (const std::string& name : request.reveal) {
      size_t slot = pub.slot_of(name);
      revealed.emplace_back(name, cred.attrs[slot - kReservedSlots].second);
    }
    std::vector<size_t> hidden = hidden_slots(pub, request.reveal);

    ClProfile pf = pub.profile();
    // Signature randomization. r is capped so e*r < 2^(v_bits-1) <= v,
    // keeping v_adj = v - e*r non-negative (the codec is unsigned).
    mpz_class r = rng.mpz_bits(pf.v_bits() - pf.e_bits() - 1);
    mpz_class a_prime = a * powm(pub.s, r, pub.n) % pub.n;
    mpz_class v_adj = v - e * r;
    mpz_class two_e1;
    mpz_ui_pow_ui(two_e1.get_mpz_t(), 2, pf.e_bits() - 1);
    mpz_class e_adj = e - two_e1;

    mpz_class e_tilde = rng.mpz_bits(pf.response_bits(pf.e_window));
    mpz_class v_tilde = rng.mpz_bits(pf.response_bits(pf.v_bits()));
    std::vector<mpz_class> m_tilde(hidden.size());
    for (auto& t : m_tilde) t = rng.mpz_bits(pf.response_bits(pf.attr_bits));

    mpz_class t_val = powm(a_prime, e_tilde, pub.n);
    t_val = t_val * powm(pub.s, v_tilde, pub.n) % pub.n;
    for (size_t k = 0; k < hidden.size(); ++k) {
      t_val = t_val * powm(pub.r[hidden[k]], m_tilde[k], pub.n) % pub.n;
    }

    // Non-revocation: C_w = w * S^r1; C_w^e_rev * S^-r2 = V with
    // r2 = e_rev * r1. The e_rev response is m_tilde[1]: the same value
    // answers for attribute slot 1, which binds the accumulator element
    // to the signed credential.
    mpz_class r1 = rng.mpz_bits(pf.n_bits + pf.pad_bits);
    mpz_class c_w = w * powm(pub.s, r1, pub.n) % pub.n;
    mpz_class r2 = e_rev * r1;
    unsigned r2_bits = pf.rev_bits + pf.n_bits + pf.pad_bits;
    mpz_class r2_tilde = rng.mpz_bits(pf.response_bits(r2_bits));
    mpz_class s_inv = mod_inverse(pub.s, pub.n);
    mpz_class t_acc =
        powm(c_w, m_tilde[1], pub.n) * powm(s_inv, r2_tilde, pub.n) % pub.n;

    PresCommitments cm{a_prime, c_w, t_val, t_acc};
    Bytes request_bytes = request.request_bytes();
    Bytes chi = pres_bind_hash(request_bytes, cm, revealed);
    Bytes c = pres_challenge(chi);
    mpz_class c_int = mpz_from_bytes(c);

    mpz_class e_hat = e_tilde + c_int * e_adj;
    mpz_class v_hat = v_tilde + c_int * v_adj;
    std::vector<WireValue> m_hats;
    for (size_t k = 0; k < hidden.size(); ++k) {
      m_hats.push_back(mpz_to_wire(m_tilde[k] + c_int * m[hidden[k]]));
    }
    mpz_class r2_hat = r2_tilde + c_int * r2;

    Presentation out;
    out.body = WireValue::record(
        codec::kRecPresentationProof,
        {mpz_to_wire(a_prime), mpz_to_wire(c_w), mpz_to_wire(t_val),
         mpz_to_wire(t_acc), WireValue::bytes(c), mpz_to_wire(e_hat),
         mpz_to_wire(v_hat), WireValue::seq(std::move(m_hats)),
         mpz_to_wire(r2_hat)});
    out.revealed = revealed;
    out.challenge_input_hash = chi;
    return out;
  }

  bool verify_presentation(const WireValue& issuer_pub,
                           const WireValue& reg_params, const WireValue& acc,
                           const Presentation& pres,
                           const ProofRequest& request) override {
    try {
      return verify_inner(issuer_pub, reg_params, acc, pres, request);
    } catch (const std::exception&) {
      // Malformed field shapes, non-invertible elements and the like are
      // verification failures, not crashes.
      return false;
    }
  }

 private:
  bool check_blinding(const IssuerPub& pub, const mpz_class& u,
                      const WireValue& proof, BytesView nonce) {
    if (!proof.is(WireValue::Kind::Record) ||
        proof.record_tag() != codec::kRecBlindingProof ||
        proof.items().size() != 3) {
      return false;
    }
    if (!in_group(u, pub.n)) return false;
    ClProfile pf = pub.profile();
    Bytes c = proof.items()[0].data();
    mpz_class ms_hat = mpz_from_wire(proof.items()[1]);
    mpz_class v_hat = mpz_from_wire(proof.items()[2]);
    if (bit_length(ms_hat) > pf.response_bits(pf.attr_bits) + 1 ||
        bit_length(v_hat) > pf.response_bits(pf.vprime_bits()) + 1) {
      return false;
    }
    mpz_class c_int = mpz_from_bytes(c);
    mpz_class u_tilde = powm(pub.s, v_hat, pub.n) *
                        powm(pub.r[0], ms_hat, pub.n) % pub.n;
    u_tilde = u_tilde * powm(mod_inverse(u, pub.n), c_int, pub.n) % pub.n;
    return ct_equal(blind_challenge(pub, u, u_tilde, nonce), c);
  }

  AttributeList normalize_attrs(const IssuerPub& pub,
                                const AttributeList& attrs) {
    if (attrs.size() != pub.attr_names.size()) {
      throw CryptoError(CryptoError::Kind::SchemaMismatch,
                        "attribute count differs from issuer key");
    }
    AttributeList ordered;
    for (const std::string& name : pub.attr_names) {
      auto it = std::find_if(attrs.begin(), attrs.end(),
                             [&](const auto& kv) { return kv.first == name; });
      if (it == attrs.end()) {
        throw CryptoError(CryptoError::Kind::SchemaMismatch,
                          "missing attribute " + name);
      }
      ordered.push_back(*it);
    }
    if (!has_emsp_id(ordered)) {
      throw CryptoError(CryptoError::Kind::SchemaMismatch,
                        "credential lacks " + std::string(kEmspIdAttribute));
    }
    return ordered;
  }

  static bool has_emsp_id(const AttributeList& attrs) {
    for (const auto& [name, value] : attrs) {
      if (name == kEmspIdAttribute && !value.empty()) return true;
    }
    return false;
  }

  bool verify_inner(const WireValue& issuer_pub, const WireValue& reg_params,
                    const WireValue& acc, const Presentation& pres,
                    const ProofRequest& request) {
    IssuerPub pub = issuer_pub_from_wire(issuer_pub);
    RegParams params = reg_params_from_wire(reg_params);
    ClProfile pf = pub.profile();

    // Revealed attributes must answer the request exactly.
    if (pres.revealed.size() != request.reveal.size()) return false;
    for (size_t i = 0; i < request.reveal.size(); ++i) {
      if (pres.revealed[i].first != request.reveal[i]) return false;
      if (pres.revealed[i].second.empty()) return false;
    }

    const WireValue& body = pres.body;
    if (!body.is(WireValue::Kind::Record) ||
        body.record_tag() != codec::kRecPresentationProof ||
        body.items().size() != 9) {
      return false;
    }
    mpz_class a_prime = mpz_from_wire(body.items()[0]);
    mpz_class c_w = mpz_from_wire(body.items()[1]);
    mpz_class t_val = mpz_from_wire(body.items()[2]);
    mpz_class t_acc = mpz_from_wire(body.items()[3]);
    Bytes c = body.items()[4].data();
    mpz_class e_hat = mpz_from_wire(body.items()[5]);
    mpz_class v_hat = mpz_from_wire(body.items()[6]);
    const auto& m_hat_items = body.items()[7].items();
    mpz_class r2_hat = mpz_from_wire(body.items()[8]);

    std::vector<size_t> hidden = hidden_slots(pub, request.reveal);
    if (m_hat_items.size() != hidden.size()) return false;
    if (c.size() != kDigestSize) return false;

    if (!in_group(a_prime, pub.n) || !in_group(c_w, pub.n) ||
        !in_group(t_val, pub.n) || !in_group(t_acc, pub.n)) {
      return false;
    }
    if (bit_length(e_hat) > pf.response_bits(pf.e_window) + 1) return false;
    if (bit_length(v_hat) > pf.response_bits(pf.v_bits()) + 1) return false;
    unsigned r2_bits = pf.rev_bits + pf.n_bits + pf.pad_bits;
    if (bit_length(r2_hat) > pf.response_bits(r2_bits) + 1) return false;

    std::vector<mpz_class> m_hats;
    for (const WireValue& mh : m_hat_items) {
      mpz_class x = mpz_from_wire(mh);
      if (bit_length(x) > pf.response_bits(pf.attr_bits) + 1) return false;
      m_hats.push_back(std::move(x));
    }

    mpz_class c_int = mpz_from_bytes(c);

    // Z_eff = Z / (prod_revealed R_i^{m_i} * A'^(2^(e_bits-1))).
    mpz_class denom = 1;
    for (const auto& [name, value] : pres.revealed) {
      denom = denom * powm(pub.r[pub.slot_of(name)], attr_to_int(value),
                           pub.n) %
              pub.n;
    }
    mpz_class two_e1;
    mpz_ui_pow_ui(two_e1.get_mpz_t(), 2, pf.e_bits() - 1);
    denom = denom * powm(a_prime, two_e1, pub.n) % pub.n;
    mpz_class z_eff = pub.z * mod_inverse(denom, pub.n) % pub.n;

    // T ?= Z_eff^-c * A'^e_hat * S^v_hat * prod_hidden R_i^m_hat.
    mpz_class t_check =
        powm(mod_inverse(z_eff, pub.n), c_int, pub.n) *
        powm(a_prime, e_hat, pub.n) % pub.n;
    t_check = t_check * powm(pub.s, v_hat, pub.n) % pub.n;
    for (size_t k = 0; k < hidden.size(); ++k) {
      t_check = t_check * powm(pub.r[hidden[k]], m_hats[k], pub.n) % pub.n;
    }
    if (t_check != t_val) return false;

    // T_acc ?= V^-c * C_w^m_hat[rev] * S^-r2_hat, same response m_hat[1]
    // as the signature equation's slot 1.
    mpz_class acc_now = mpz_from_wire(acc);
    if (!in_group(acc_now, params.n)) return false;
    mpz_class s_inv = mod_inverse(pub.s, pub.n);
    mpz_class t_acc_check =
        powm(mod_inverse(acc_now, pub.n), c_int, pub.n) *
        powm(c_w, m_hats[1], pub.n) % pub.n;
    t_acc_check = t_acc_check * powm(s_inv, r2_hat, pub.n) % pub.n;
    if (t_acc_check != t_acc) return false;

    PresCommitments cm{a_prime, c_w, t_val, t_acc};
    Bytes chi = pres_bind_hash(request.request_bytes(), cm, pres.revealed);
    if (!ct_equal(chi, pres.challenge_input_hash)) return false;
    return ct_equal(pres_challenge(chi), c);
  }

  ClProfile profile_;
};

}  // namespace

std::unique_ptr<CryptoBackend> make_concrete_backend(unsigned modulus_bits) {
  return std::make_unique<ConcreteBackend>(modulus_bits);
}

std::unique_ptr<CryptoBackend> make_backend(const std::string& name,
                                            unsigned modulus_bits) {
  if (name == "concrete") return make_concrete_backend(modulus_bits);
  if (name == "symbolic") return make_symbolic_backend();
  throw std::invalid_argument("unknown backend: " + name);
}

}  // namespace evssi::crypto
