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

#include <algorithm>

#include "doctest.h"
#include "evssi/crypto/backend.hpp"
#include "support/flow.hpp"

using namespace evssi;
using namespace evssi::crypto;
using evssi::testsupport::Flow;
using evssi::testsupport::make_flow;

namespace {

const std::vector<std::string> kNames = {"emsp_id", "tariff"};
const AttributeList kAttrs = {{"emsp_id", "EMSP-A"}, {"tariff", "basic"}};

}  // namespace

TEST_CASE("tokens not minted by the backend never verify") {
  Flow f = make_flow("symbolic", 0, 3001, kNames);
  ContractCredential cred = f.issue(kAttrs);
  ProofRequest req = f.request({"emsp_id"});
  Presentation pres = f.present(cred, req);
  REQUIRE(f.verify(pres, req));

  // A token with a digest nobody issued: structurally perfect, unknown to
  // the table, so it carries no meaning.
  Presentation forged = pres;
  std::vector<codec::WireValue> fields(pres.body.items().begin(),
                                       pres.body.items().end());
  fields[2] = codec::WireValue::bytes(f.rng.bytes(32));
  forged.body = codec::WireValue::record(pres.body.record_tag(), fields);
  CHECK(!f.verify(forged, req));

  // Pointing the presentation at a different op's real token fails too:
  // the signature token exists in the table but is not a presentation.
  Presentation cross = pres;
  cross.body = cred.signature;
  CHECK(!f.verify(cross, req));
}

TEST_CASE("separate backend instances share no token table") {
  Flow f = make_flow("symbolic", 0, 3002, kNames);
  ContractCredential cred = f.issue(kAttrs);
  ProofRequest req = f.request({"emsp_id"});
  Presentation pres = f.present(cred, req);
  REQUIRE(f.verify(pres, req));

  // Same keys and bytes, different universe: nothing was ever minted there.
  auto other = make_symbolic_backend();
  CHECK(!other->verify_presentation(f.issuer.pub, f.params, f.acc, pres, req));
}

TEST_CASE("presentation tokens are fresh per run even for one request") {
  Flow f = make_flow("symbolic", 0, 3003, kNames);
  ContractCredential cred = f.issue(kAttrs);
  ProofRequest req = f.request({"emsp_id"});

  Presentation p1 = f.present(cred, req);
  Presentation p2 = f.present(cred, req);
  CHECK(f.verify(p1, req));
  CHECK(f.verify(p2, req));
  CHECK(p1.body != p2.body);
  CHECK(p1.challenge_input_hash != p2.challenge_input_hash);
}

TEST_CASE("wire-visible bytes never include wallet or witness internals") {
  Flow f = make_flow("symbolic", 0, 3004, kNames);
  ContractCredential cred = f.issue(kAttrs);
  ProofRequest req = f.request({"emsp_id"});
  Presentation pres = f.present(cred, req);

  Bytes on_the_wire = codec::encode(pres.to_wire());
  auto leaks = [&](const Bytes& secret) {
    return std::search(on_the_wire.begin(), on_the_wire.end(), secret.begin(),
                       secret.end()) != on_the_wire.end();
  };
  CHECK(!leaks(cred.master_secret.data()));
  CHECK(!leaks(cred.rev_element.data()));
}

TEST_CASE("re-adding a revoked element restores the accumulator value") {
  // Set semantics on the symbolic side, group semantics on the concrete
  // side: both make remove-then-readd the identity on the registry value.
  for (const char* backend : {"symbolic", "concrete"}) {
    CAPTURE(backend);
    Flow f = make_flow(backend, 512, 3005, kNames);
    ContractCredential cred = f.issue(kAttrs);
    codec::WireValue before = f.acc;
    codec::WireValue removed =
        f.backend->acc_revoke(f.issuer, f.params, f.acc, cred.rev_element);
    CHECK(removed != before);
    codec::WireValue restored =
        f.backend->acc_add(f.params, removed, cred.rev_element);
    CHECK(restored == before);
  }
}
