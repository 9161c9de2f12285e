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

// Test fixtures shared by the unit tests and the acceptance checks: a
// compact issuance flow driven directly against a credential backend, and
// a single-field mutation generator for presentations.

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "evssi/codec.hpp"
#include "evssi/crypto/backend.hpp"
#include "evssi/crypto/rng.hpp"
#include "evssi/crypto/types.hpp"

namespace evssi::testsupport {

// A backend, an issuer, and a revocation registry with its delta log —
// everything needed to mint credentials and check presentations without
// the actor layer.
struct Flow {
  std::unique_ptr<crypto::CryptoBackend> backend;
  crypto::Rng rng = crypto::Rng::from_u64(0);
  crypto::IssuerKeys issuer;
  codec::WireValue params;
  codec::WireValue acc;
  std::vector<crypto::RegistryDelta> deltas;
  uint64_t version = 0;

  crypto::ContractCredential issue(const crypto::AttributeList& attrs) {
    Bytes nonce = rng.bytes(crypto::kNonceSize);
    crypto::BlindedSecret blinded =
        backend->blind_master_secret(rng, issuer.pub, nonce);
    crypto::IssueResult res =
        backend->issue_credential(rng, issuer, params, acc, blinded.blinded,
                                  blinded.proof, nonce, attrs);
    acc = res.new_acc;
    deltas.push_back({++version, crypto::RegistryDelta::Op::Add,
                      res.rev_element, acc});
    crypto::ContractCredential cred = backend->complete_credential(
        issuer.pub, blinded.pending, res.pre_credential, res.witness, version);
    cred.contract_key = rng.bytes(32);
    cred.contract_id = rng.bytes(crypto::kContractIdSize);
    cred.cred_def_id = "creddef:test";
    cred.registry_id = "registry:test";
    cred.schema_id = "schema:test";
    return cred;
  }

  void revoke(const codec::WireValue& element) {
    acc = backend->acc_revoke(issuer, params, acc, element);
    deltas.push_back(
        {++version, crypto::RegistryDelta::Op::Remove, element, acc});
  }

  // Brings a credential's witness up to the registry head from the delta
  // log, as a wallet would after reading the ledger.
  void sync(crypto::ContractCredential& cred) {
    std::vector<crypto::RegistryDelta> slice(
        deltas.begin() + static_cast<ptrdiff_t>(cred.witness_version),
        deltas.end());
    backend->witness_update(params, cred, slice, acc, version);
  }

  crypto::ProofRequest request(std::vector<std::string> reveal) {
    crypto::ProofRequest r;
    r.nonce = rng.bytes(crypto::kNonceSize);
    r.reveal = std::move(reveal);
    r.cred_def_id = "creddef:test";
    r.registry_id = "registry:test";
    r.registry_version = version;
    return r;
  }

  crypto::Presentation present(const crypto::ContractCredential& cred,
                               const crypto::ProofRequest& req) {
    return backend->create_presentation(rng, issuer.pub, params, acc, cred,
                                        req);
  }

  bool verify(const crypto::Presentation& pres,
              const crypto::ProofRequest& req) {
    return backend->verify_presentation(issuer.pub, params, acc, pres, req);
  }
};

inline Flow make_flow(const std::string& backend_name, unsigned bits,
                      uint64_t seed,
                      const std::vector<std::string>& attr_names) {
  Flow f;
  f.backend = crypto::make_backend(backend_name, bits);
  f.rng = crypto::Rng::from_u64(seed);
  f.issuer = f.backend->issuer_keygen(f.rng, attr_names);
  crypto::RegistryInit init = f.backend->registry_init(f.rng, f.issuer);
  f.params = init.params;
  f.acc = init.acc;
  return f;
}

// ---- single-field mutation ------------------------------------------------

// A mutated copy of one scalar: the value always changes, the kind never
// does, so the mutant exercises value checks rather than shape checks.
inline codec::WireValue mutate_scalar(const codec::WireValue& v) {
  using codec::WireValue;
  switch (v.kind()) {
    case WireValue::Kind::Uint: {
      Bytes m = v.data();
      if (m.empty()) {
        m.push_back(1);
      } else {
        m.back() ^= 1;
      }
      return WireValue::uint_be(std::move(m));
    }
    case WireValue::Kind::Bytes: {
      Bytes b = v.data();
      if (b.empty()) {
        b.push_back(1);
      } else {
        b[0] ^= 1;
      }
      return WireValue::bytes(std::move(b));
    }
    default: {
      std::string s = v.text();
      if (s.empty()) {
        s = "x";
      } else {
        s[0] = (s[0] == 'a') ? 'b' : 'a';
      }
      return WireValue::str(std::move(s));
    }
  }
}

inline size_t count_leaves(const codec::WireValue& v) {
  if (v.is(codec::WireValue::Kind::Sequence) ||
      v.is(codec::WireValue::Kind::Record)) {
    size_t n = 0;
    for (const codec::WireValue& child : v.items()) n += count_leaves(child);
    return n;
  }
  return 1;
}

inline codec::WireValue mutate_leaf_walk(const codec::WireValue& v,
                                         size_t target, size_t& index) {
  using codec::WireValue;
  if (v.is(WireValue::Kind::Sequence) || v.is(WireValue::Kind::Record)) {
    std::vector<WireValue> kids;
    kids.reserve(v.items().size());
    for (const WireValue& child : v.items()) {
      kids.push_back(mutate_leaf_walk(child, target, index));
    }
    return v.is(WireValue::Kind::Sequence)
               ? WireValue::seq(std::move(kids))
               : WireValue::record(v.record_tag(), std::move(kids));
  }
  return index++ == target ? mutate_scalar(v) : v;
}

// The tree with exactly leaf #target replaced by a different value.
inline codec::WireValue mutate_leaf(const codec::WireValue& v, size_t target) {
  size_t index = 0;
  return mutate_leaf_walk(v, target, index);
}

// Every presentation obtainable from `p` by changing exactly one scalar
// field: each commitment, response, and challenge in the proof body, each
// revealed name and value, and the challenge binding hash.
inline std::vector<crypto::Presentation> single_field_mutants(
    const crypto::Presentation& p) {
  codec::WireValue wire = p.to_wire();
  size_t leaves = count_leaves(wire);
  std::vector<crypto::Presentation> out;
  out.reserve(leaves);
  for (size_t i = 0; i < leaves; ++i) {
    out.push_back(crypto::Presentation::from_wire(mutate_leaf(wire, i)));
  }
  return out;
}

}  // namespace evssi::testsupport
