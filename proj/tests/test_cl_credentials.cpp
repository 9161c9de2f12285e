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
#include <set>

#include "doctest.h"
#include "evssi/crypto/backend.hpp"
#include "support/flow.hpp"

using namespace evssi;
using namespace evssi::crypto;
using evssi::testsupport::Flow;
using evssi::testsupport::make_flow;

namespace {

const std::vector<std::string> kNames = {"emsp_id", "contract_ref", "tariff"};
const AttributeList kAttrs = {{"emsp_id", "EMSP-A"},
                              {"contract_ref", "C-2043-118"},
                              {"tariff", "night-saver"}};

bool kind_is(const CryptoError& e, CryptoError::Kind k) {
  return e.kind() == k;
}

// Collect every scalar encoding in a value tree.
void leaf_encodings(const codec::WireValue& v, std::set<Bytes>& out) {
  if (v.is(codec::WireValue::Kind::Sequence) ||
      v.is(codec::WireValue::Kind::Record)) {
    for (const auto& child : v.items()) leaf_encodings(child, out);
  } else {
    out.insert(codec::encode(v));
  }
}

bool contains_subsequence(const Bytes& haystack, const Bytes& needle) {
  return std::search(haystack.begin(), haystack.end(), needle.begin(),
                     needle.end()) != haystack.end();
}

}  // namespace

TEST_CASE("credentials verify with every reveal subset") {
  for (const char* backend : {"concrete", "symbolic"}) {
    CAPTURE(backend);
    Flow f = make_flow(backend, 512, 1001, kNames);
    ContractCredential cred = f.issue(kAttrs);
    CHECK(cred.attrs == kAttrs);
    CHECK(cred.witness_version == 1);

    const std::vector<std::vector<std::string>> reveals = {
        {},
        {"emsp_id"},
        {"emsp_id", "tariff"},
        {"emsp_id", "contract_ref", "tariff"}};
    for (const auto& reveal : reveals) {
      ProofRequest req = f.request(reveal);
      Presentation pres = f.present(cred, req);
      CHECK(f.verify(pres, req));
      REQUIRE(pres.revealed.size() == reveal.size());
      for (size_t i = 0; i < reveal.size(); ++i) {
        CHECK(pres.revealed[i].first == reveal[i]);
        // Revealed values are the issued ones.
        auto it = std::find_if(kAttrs.begin(), kAttrs.end(), [&](auto& kv) {
          return kv.first == reveal[i];
        });
        CHECK(pres.revealed[i].second == it->second);
      }
    }
  }
}

TEST_CASE("presentations round trip through their wire form") {
  Flow f = make_flow("concrete", 512, 1002, kNames);
  ContractCredential cred = f.issue(kAttrs);
  ProofRequest req = f.request({"emsp_id"});
  Presentation pres = f.present(cred, req);

  Presentation back =
      Presentation::from_wire(codec::decode(codec::encode(pres.to_wire())));
  CHECK(f.verify(back, req));

  ProofRequest req_back =
      ProofRequest::from_wire(codec::decode(req.request_bytes()));
  CHECK(req_back.nonce == req.nonce);
  CHECK(req_back.reveal == req.reveal);
  CHECK(req_back.registry_version == req.registry_version);
  CHECK(f.verify(back, req_back));
}

TEST_CASE("a presentation answers only the request it was built for") {
  for (const char* backend : {"concrete", "symbolic"}) {
    CAPTURE(backend);
    Flow f = make_flow(backend, 512, 1003, kNames);
    ContractCredential cred = f.issue(kAttrs);

    ProofRequest req = f.request({"emsp_id"});
    Presentation pres = f.present(cred, req);
    REQUIRE(f.verify(pres, req));

    // Fresh nonce, same everything else.
    ProofRequest other = req;
    other.nonce = f.rng.bytes(kNonceSize);
    CHECK(!f.verify(pres, other));

    // Same nonce, different reveal set.
    ProofRequest wider = req;
    wider.reveal = {"emsp_id", "tariff"};
    CHECK(!f.verify(pres, wider));

    // Tampered revealed value, everything else intact.
    Presentation dishonest = pres;
    dishonest.revealed[0].second = "EMSP-B";
    CHECK(!f.verify(dishonest, req));
  }
}

TEST_CASE("issuance rejects a forged blinding proof") {
  for (const char* backend : {"concrete", "symbolic"}) {
    CAPTURE(backend);
    Flow f = make_flow(backend, 512, 1004, kNames);
    Bytes nonce = f.rng.bytes(kNonceSize);
    BlindedSecret bs = f.backend->blind_master_secret(f.rng, f.issuer.pub, nonce);

    auto issue_with = [&](const codec::WireValue& blinded,
                          const codec::WireValue& proof, BytesView n) {
      return f.backend->issue_credential(f.rng, f.issuer, f.params, f.acc,
                                         blinded, proof, n, kAttrs);
    };

    // Honest run succeeds; every tampered variant is InvalidBlinding.
    CHECK_NOTHROW(issue_with(bs.blinded, bs.proof, nonce));

    size_t proof_leaves = testsupport::count_leaves(bs.proof);
    for (size_t i = 0; i < proof_leaves; ++i) {
      codec::WireValue bad = testsupport::mutate_leaf(bs.proof, i);
      try {
        issue_with(bs.blinded, bad, nonce);
        CHECK(false);
      } catch (const CryptoError& e) {
        CHECK(kind_is(e, CryptoError::Kind::InvalidBlinding));
      }
    }

    codec::WireValue bad_commit = testsupport::mutate_leaf(bs.blinded, 0);
    try {
      issue_with(bad_commit, bs.proof, nonce);
      CHECK(false);
    } catch (const CryptoError& e) {
      CHECK(kind_is(e, CryptoError::Kind::InvalidBlinding));
    }

    // Proof replayed under a different offer nonce.
    Bytes other_nonce = f.rng.bytes(kNonceSize);
    try {
      issue_with(bs.blinded, bs.proof, other_nonce);
      CHECK(false);
    } catch (const CryptoError& e) {
      CHECK(kind_is(e, CryptoError::Kind::InvalidBlinding));
    }
  }
}

TEST_CASE("the holder rejects a tampered pre-credential") {
  for (const char* backend : {"concrete", "symbolic"}) {
    CAPTURE(backend);
    Flow f = make_flow(backend, 512, 1005, kNames);
    Bytes nonce = f.rng.bytes(kNonceSize);
    BlindedSecret bs = f.backend->blind_master_secret(f.rng, f.issuer.pub, nonce);
    IssueResult res = f.backend->issue_credential(
        f.rng, f.issuer, f.params, f.acc, bs.blinded, bs.proof, nonce, kAttrs);

    CHECK_NOTHROW(f.backend->complete_credential(f.issuer.pub, bs.pending,
                                                 res.pre_credential,
                                                 res.witness, 1));

    size_t leaves = testsupport::count_leaves(res.pre_credential);
    int signature_rejections = 0;
    for (size_t i = 0; i < leaves; ++i) {
      codec::WireValue bad = testsupport::mutate_leaf(res.pre_credential, i);
      try {
        f.backend->complete_credential(f.issuer.pub, bs.pending, bad,
                                       res.witness, 1);
        CHECK(false);  // every mutation must be caught
      } catch (const CryptoError& e) {
        if (e.kind() == CryptoError::Kind::InvalidSignature) {
          ++signature_rejections;
        } else {
          CHECK(kind_is(e, CryptoError::Kind::SchemaMismatch));
        }
      }
    }
    // Mutations of the signature values surface as InvalidSignature;
    // mutations of the embedded attributes as SchemaMismatch.
    CHECK(signature_rejections > 0);
  }
}

TEST_CASE("attribute sets must match the issuer schema exactly") {
  for (const char* backend : {"concrete", "symbolic"}) {
    CAPTURE(backend);
    Flow f = make_flow(backend, 512, 1006, kNames);

    auto issue_attrs = [&](const AttributeList& attrs) {
      Bytes nonce = f.rng.bytes(kNonceSize);
      BlindedSecret bs =
          f.backend->blind_master_secret(f.rng, f.issuer.pub, nonce);
      f.backend->issue_credential(f.rng, f.issuer, f.params, f.acc, bs.blinded,
                                  bs.proof, nonce, attrs);
    };

    auto expect_mismatch = [&](const AttributeList& attrs) {
      try {
        issue_attrs(attrs);
        CHECK(false);
      } catch (const CryptoError& e) {
        CHECK(kind_is(e, CryptoError::Kind::SchemaMismatch));
      }
    };

    // Too few, unknown name, and a contract with no mobility provider.
    expect_mismatch({{"emsp_id", "EMSP-A"}, {"tariff", "basic"}});
    expect_mismatch({{"emsp_id", "EMSP-A"},
                     {"contract_ref", "C-1"},
                     {"mystery", "x"}});
    expect_mismatch({{"emsp_id", ""},
                     {"contract_ref", "C-1"},
                     {"tariff", "basic"}});
  }
}

TEST_CASE("every single-field mutation of a valid presentation is rejected") {
  for (const char* backend : {"concrete", "symbolic"}) {
    CAPTURE(backend);
    Flow f = make_flow(backend, 512, 1007, kNames);
    ContractCredential cred = f.issue(kAttrs);
    ProofRequest req = f.request({"emsp_id"});
    Presentation pres = f.present(cred, req);
    REQUIRE(f.verify(pres, req));

    std::vector<Presentation> mutants = testsupport::single_field_mutants(pres);
    // Proof body fields + revealed pair + binding hash.
    CHECK(mutants.size() >= 6);
    for (size_t i = 0; i < mutants.size(); ++i) {
      CAPTURE(i);
      CHECK(!f.verify(mutants[i], req));
    }
  }
}

TEST_CASE("two presentations of one credential share no proof material") {
  Flow f = make_flow("concrete", 512, 1008, kNames);
  ContractCredential cred = f.issue(kAttrs);
  ProofRequest req = f.request({"emsp_id"});

  Presentation p1 = f.present(cred, req);
  Presentation p2 = f.present(cred, req);
  CHECK(f.verify(p1, req));
  CHECK(f.verify(p2, req));

  std::set<Bytes> leaves1, leaves2;
  leaf_encodings(p1.body, leaves1);
  leaf_encodings(p2.body, leaves2);
  for (const Bytes& leaf : leaves1) {
    CHECK(leaves2.find(leaf) == leaves2.end());
  }
  CHECK(p1.challenge_input_hash != p2.challenge_input_hash);
}

TEST_CASE("the master secret never crosses the wire") {
  for (const char* backend : {"concrete", "symbolic"}) {
    CAPTURE(backend);
    Flow f = make_flow(backend, 512, 1009, kNames);
    Bytes nonce = f.rng.bytes(kNonceSize);
    BlindedSecret bs = f.backend->blind_master_secret(f.rng, f.issuer.pub, nonce);
    IssueResult res = f.backend->issue_credential(
        f.rng, f.issuer, f.params, f.acc, bs.blinded, bs.proof, nonce, kAttrs);
    f.acc = res.new_acc;
    f.deltas.push_back({++f.version, RegistryDelta::Op::Add, res.rev_element,
                        f.acc});
    ContractCredential cred = f.backend->complete_credential(
        f.issuer.pub, bs.pending, res.pre_credential, res.witness, f.version);

    Bytes ms = cred.master_secret.data();
    REQUIRE(ms.size() >= 16);  // a real secret, not a placeholder

    ProofRequest req = f.request({"emsp_id"});
    Presentation pres = f.present(cred, req);
    REQUIRE(f.verify(pres, req));

    // What the issuer and the verifier see, end to end.
    const std::vector<Bytes> public_view = {
        codec::encode(bs.blinded), codec::encode(bs.proof),
        codec::encode(res.pre_credential), codec::encode(pres.to_wire())};
    for (const Bytes& seen : public_view) {
      CHECK(!contains_subsequence(seen, ms));
    }
  }
}

TEST_CASE("witness freshness gates presentation") {
  for (const char* backend : {"concrete", "symbolic"}) {
    CAPTURE(backend);
    Flow f = make_flow(backend, 512, 1010, kNames);
    ContractCredential first = f.issue(kAttrs);
    ContractCredential second = f.issue({{"emsp_id", "EMSP-B"},
                                         {"contract_ref", "C-9"},
                                         {"tariff", "fleet"}});
    CHECK(second.witness_version == 2);

    // The registry moved after `first` was issued; its witness is stale.
    ProofRequest req = f.request({"emsp_id"});
    try {
      f.present(first, req);
      CHECK(false);
    } catch (const CryptoError& e) {
      CHECK(kind_is(e, CryptoError::Kind::StaleWitness));
    }

    f.sync(first);
    CHECK(first.witness_version == 2);
    Presentation pres = f.present(first, req);
    CHECK(f.verify(pres, req));

    // A delta slice with a gap is refused outright.
    ContractCredential third = f.issue({{"emsp_id", "EMSP-C"},
                                        {"contract_ref", "C-77"},
                                        {"tariff", "basic"}});
    (void)third;
    ContractCredential fourth = f.issue({{"emsp_id", "EMSP-D"},
                                         {"contract_ref", "C-78"},
                                         {"tariff", "basic"}});
    (void)fourth;
    std::vector<RegistryDelta> gap = {f.deltas.back()};  // skips one version
    try {
      f.backend->witness_update(f.params, first, gap, f.acc, f.version);
      CHECK(false);
    } catch (const CryptoError& e) {
      CHECK(kind_is(e, CryptoError::Kind::StaleWitness));
    }
  }
}
