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

#include <optional>

#include "doctest.h"
#include "evssi/crypto/backend.hpp"
#include "evssi/crypto/bigint.hpp"
#include "support/flow.hpp"

using namespace evssi;
using namespace evssi::crypto;
using evssi::testsupport::Flow;
using evssi::testsupport::make_flow;

namespace {

AttributeList attrs_for(const std::string& ref) {
  return {{"emsp_id", "EMSP-A"}, {"contract_ref", ref}, {"tariff", "basic"}};
}

// Independent accumulator oracle: replay the public delta log to the set
// of live elements and evaluate one exponentiation by their product. The
// incremental updates the backend performs must land on exactly these
// values, because x -> x^e is a bijection on the subgroup.
struct AccOracle {
  mpz_class n, u;

  explicit AccOracle(const codec::WireValue& params_wire) {
    n = mpz_from_wire(params_wire.items()[0]);
    u = mpz_from_wire(params_wire.items()[1]);
  }

  static std::vector<mpz_class> live_elements(
      const std::vector<RegistryDelta>& deltas) {
    std::vector<mpz_class> live;
    for (const RegistryDelta& d : deltas) {
      mpz_class e = mpz_from_wire(d.element);
      if (d.op == RegistryDelta::Op::Add) {
        live.push_back(e);
      } else {
        live.erase(std::find(live.begin(), live.end(), e));
      }
    }
    return live;
  }

  mpz_class value(const std::vector<RegistryDelta>& deltas,
                  const std::optional<mpz_class>& skip = std::nullopt) const {
    mpz_class exponent = 1;
    for (const mpz_class& e : live_elements(deltas)) {
      if (skip && e == *skip) continue;
      exponent *= e;
    }
    return powm(u, exponent, n);
  }
};

mpz_class witness_of(const ContractCredential& cred) {
  return mpz_from_wire(cred.witness.items()[0]);
}

}  // namespace

TEST_CASE("chained additions equal one exponentiation by the product") {
  Flow f = make_flow("concrete", 512, 2001,
                     {"emsp_id", "contract_ref", "tariff"});
  AccOracle oracle(f.params);

  std::vector<ContractCredential> creds;
  for (int i = 0; i < 4; ++i) {
    creds.push_back(f.issue(attrs_for("C-" + std::to_string(i))));
    CHECK(mpz_from_wire(f.acc) == oracle.value(f.deltas));
  }

  // Distinct revocation elements, all odd primes.
  for (size_t i = 0; i < creds.size(); ++i) {
    mpz_class e = mpz_from_wire(creds[i].rev_element);
    CHECK(is_probable_prime(e));
    for (size_t j = i + 1; j < creds.size(); ++j) {
      CHECK(e != mpz_from_wire(creds[j].rev_element));
    }
  }
}

TEST_CASE("a fresh witness is the pre-addition accumulator") {
  Flow f = make_flow("concrete", 512, 2002,
                     {"emsp_id", "contract_ref", "tariff"});
  AccOracle oracle(f.params);

  ContractCredential first = f.issue(attrs_for("C-0"));
  CHECK(witness_of(first) == oracle.u);

  ContractCredential second = f.issue(attrs_for("C-1"));
  CHECK(witness_of(second) ==
        powm(oracle.u, mpz_from_wire(first.rev_element), oracle.n));

  // Both witnesses open the accumulator value of their issuance version.
  CHECK(powm(witness_of(second), mpz_from_wire(second.rev_element), oracle.n) ==
        mpz_from_wire(f.acc));
}

TEST_CASE("witness updates land on the independently computed value") {
  Flow f = make_flow("concrete", 512, 2003,
                     {"emsp_id", "contract_ref", "tariff"});
  AccOracle oracle(f.params);

  ContractCredential a = f.issue(attrs_for("C-a"));
  ContractCredential b = f.issue(attrs_for("C-b"));
  ContractCredential c = f.issue(attrs_for("C-c"));
  ContractCredential d = f.issue(attrs_for("C-d"));
  f.revoke(b.rev_element);
  f.revoke(d.rev_element);

  // a's witness walked through two additions and two removals must equal,
  // bit for bit, one direct exponentiation over the surviving elements.
  f.sync(a);
  CHECK(a.witness_version == f.version);
  mpz_class own = mpz_from_wire(a.rev_element);
  CHECK(witness_of(a) == oracle.value(f.deltas, own));
  CHECK(powm(witness_of(a), own, oracle.n) == mpz_from_wire(f.acc));

  // And the accumulator itself matches the oracle after removals.
  CHECK(mpz_from_wire(f.acc) == oracle.value(f.deltas));

  ProofRequest req = f.request({"emsp_id"});
  Presentation pres = f.present(a, req);
  CHECK(f.verify(pres, req));
}

TEST_CASE("witness updates are path independent") {
  for (const char* backend : {"concrete", "symbolic"}) {
    CAPTURE(backend);
    Flow f = make_flow(backend, 512, 2004,
                       {"emsp_id", "contract_ref", "tariff"});
    ContractCredential a = f.issue(attrs_for("C-a"));
    ContractCredential b = f.issue(attrs_for("C-b"));
    ContractCredential c = f.issue(attrs_for("C-c"));
    f.revoke(b.rev_element);

    // One jump to the head versus one delta at a time.
    ContractCredential one_shot = a;
    f.sync(one_shot);

    ContractCredential stepped = a;
    for (size_t i = 1; i < f.deltas.size(); ++i) {
      std::vector<RegistryDelta> single = {f.deltas[i]};
      f.backend->witness_update(f.params, stepped, single,
                                f.deltas[i].acc_after, f.deltas[i].version);
    }

    CHECK(one_shot.witness == stepped.witness);
    CHECK(one_shot.witness_version == stepped.witness_version);
    (void)c;
  }
}

TEST_CASE("revocation cuts off the revoked holder and only them") {
  for (const char* backend : {"concrete", "symbolic"}) {
    CAPTURE(backend);
    Flow f = make_flow(backend, 512, 2005,
                       {"emsp_id", "contract_ref", "tariff"});
    ContractCredential good = f.issue(attrs_for("C-good"));
    ContractCredential bad = f.issue(attrs_for("C-bad"));
    f.revoke(bad.rev_element);

    // Surviving holder keeps presenting.
    f.sync(good);
    ProofRequest req = f.request({"emsp_id"});
    Presentation pres = f.present(good, req);
    CHECK(f.verify(pres, req));

    // The revoked holder's update crosses their own removal.
    try {
      f.sync(bad);
      CHECK(false);
    } catch (const CryptoError& e) {
      CHECK(e.kind() == CryptoError::Kind::Revoked);
    }

    // And their stale witness cannot present.
    try {
      f.present(bad, req);
      CHECK(false);
    } catch (const CryptoError& e) {
      CHECK(e.kind() == CryptoError::Kind::StaleWitness);
    }
  }
}

TEST_CASE("delta slices must be gapless and reach the target") {
  for (const char* backend : {"concrete", "symbolic"}) {
    CAPTURE(backend);
    Flow f = make_flow(backend, 512, 2006,
                       {"emsp_id", "contract_ref", "tariff"});
    ContractCredential a = f.issue(attrs_for("C-a"));
    f.issue(attrs_for("C-b"));
    f.issue(attrs_for("C-c"));

    // Slice starting past the witness version.
    ContractCredential copy = a;
    std::vector<RegistryDelta> gap = {f.deltas[2]};
    try {
      f.backend->witness_update(f.params, copy, gap, f.acc, f.version);
      CHECK(false);
    } catch (const CryptoError& e) {
      CHECK(e.kind() == CryptoError::Kind::StaleWitness);
    }

    // Slice that stops short of the requested version.
    copy = a;
    std::vector<RegistryDelta> short_slice = {f.deltas[1]};
    try {
      f.backend->witness_update(f.params, copy, short_slice, f.acc, f.version);
      CHECK(false);
    } catch (const CryptoError& e) {
      CHECK(e.kind() == CryptoError::Kind::StaleWitness);
    }

    // Witness version and request version must agree at presentation time.
    ProofRequest req = f.request({"emsp_id"});
    try {
      f.present(a, req);  // a is still at version 1
      CHECK(false);
    } catch (const CryptoError& e) {
      CHECK(e.kind() == CryptoError::Kind::StaleWitness);
    }
  }
}

TEST_CASE("the symbolic registry refuses to remove an absent element") {
  Flow f = make_flow("symbolic", 512, 2007,
                     {"emsp_id", "contract_ref", "tariff"});
  ContractCredential a = f.issue(attrs_for("C-a"));
  f.revoke(a.rev_element);
  try {
    f.backend->acc_revoke(f.issuer, f.params, f.acc, a.rev_element);
    CHECK(false);
  } catch (const CryptoError& e) {
    CHECK(e.kind() == CryptoError::Kind::UnknownElement);
  }
}

TEST_CASE("registry deltas survive their wire form") {
  Flow f = make_flow("concrete", 512, 2008,
                     {"emsp_id", "contract_ref", "tariff"});
  ContractCredential a = f.issue(attrs_for("C-a"));
  f.revoke(a.rev_element);
  for (const RegistryDelta& d : f.deltas) {
    RegistryDelta back = registry_delta_from_wire(
        codec::decode(codec::encode(registry_delta_to_wire(d))));
    CHECK(back == d);
  }
}
