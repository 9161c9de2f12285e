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
#include <string>
#include <vector>

#include "doctest.h"
#include "evssi/actors/messages.hpp"
#include "evssi/codec.hpp"
#include "evssi/harness/checkers.hpp"
#include "evssi/harness/world.hpp"

using namespace evssi;
using harness::World;
using harness::WorldConfig;

namespace {

World small_world(uint64_t seed = 1,
                  std::vector<std::string> ev_modes = {}) {
  WorldConfig config;
  config.backend = "symbolic";
  config.seed = seed;
  World world(std::move(config));
  world.add_steward("steward");
  world.add_oem("oem1");
  world.add_emsp("emsp1", "EMSP-A");
  world.add_ev("ev1", "oem1", std::move(ev_modes));
  world.add_cpo("cpo1");
  world.add_cp("cp1", "cpo1", "site-north");
  return world;
}

void run_install(World& world) {
  REQUIRE(world.onboard("oem1"));
  REQUIRE(world.onboard("emsp1"));
  REQUIRE(world.setup_issuer("emsp1", {"emsp_id", "tariff"}));
  REQUIRE(world.provision("ev1"));
  REQUIRE_FALSE(
      world.register_contract("ev1", "emsp1", {{"tariff", "basic"}}).empty());
  REQUIRE(world.install("ev1").ok());
}

size_t commits_of(World& world, trace::Label label) {
  size_t n = 0;
  for (const trace::TraceEvent& e : world.trace().events()) {
    if (e.kind == trace::EventKind::Commit && e.label == label) ++n;
  }
  return n;
}

bool error_seen(World& world, const std::string& actor,
                const std::string& code) {
  for (const trace::ActorError& e : world.trace().errors()) {
    if (e.actor == actor && e.code == code) return true;
  }
  return false;
}

// Finds the i-th delivered message of the given type, for replays.
const trace::BusMessage* find_message(World& world, uint16_t msg_type,
                                      size_t index = 0) {
  for (const trace::BusMessage& m : world.trace().messages()) {
    try {
      if (codec::decode_envelope(m.payload).msg_type == msg_type) {
        if (index == 0) return &m;
        --index;
      }
    } catch (const codec::CodecError&) {
    }
  }
  return nullptr;
}

// Flips one byte in the first in-flight message of the given type.
class TamperOnce final : public harness::Adversary {
 public:
  explicit TamperOnce(uint16_t msg_type) : msg_type_(msg_type) {}

  bool before_deliver(trace::BusMessage& msg, harness::Bus&) override {
    if (done_) return true;
    try {
      if (codec::decode_envelope(msg.payload).msg_type != msg_type_) {
        return true;
      }
    } catch (const codec::CodecError&) {
      return true;
    }
    msg.payload.back() ^= 0x01;
    done_ = true;
    return true;
  }

 private:
  uint16_t msg_type_;
  bool done_ = false;
};

// Corrupts the sealed authorization token inside the first billing record
// that crosses the bus, leaving the rest of the message intact.
class CorruptBillingAuth final : public harness::Adversary {
 public:
  bool before_deliver(trace::BusMessage& msg, harness::Bus&) override {
    if (done_) return true;
    codec::MessageEnvelope env;
    try {
      env = codec::decode_envelope(msg.payload);
    } catch (const codec::CodecError&) {
      return true;
    }
    if (env.msg_type != codec::kMsgBillingForwardReq) return true;
    actors::BillingForwardReq req =
        actors::BillingForwardReq::from_wire(env.payload);
    req.auth_blob.front() ^= 0x01;
    env.payload = req.to_wire();
    msg.payload = codec::encode_envelope(env);
    done_ = true;
    return true;
  }

 private:
  bool done_ = false;
};

}  // namespace

TEST_CASE("provisioning lands a client DID and both sides agree on it") {
  World world = small_world();
  REQUIRE(world.onboard("oem1"));
  REQUIRE(world.provision("ev1"));

  const std::string& did = world.ev("ev1").prov_did();
  REQUIRE_FALSE(did.empty());
  CHECK(world.ledger().role_of(did) == ledger::Role::Client);

  harness::AgreementReport report = harness::check_injective_agreement(
      world.trace().events(), trace::Label::ProvDid);
  CHECK(report.pass);
  CHECK(report.commits == 1);
  CHECK(world.trace().errors().empty());
}

TEST_CASE("replayed messages are refused without damage") {
  World world = small_world();
  run_install(world);
  REQUIRE(world.discover("ev1", "cp1"));
  REQUIRE(world.charge("ev1", "cp1", 500));
  size_t errors_before = world.trace().errors().size();

  SUBCASE("issuance response replayed at the wallet") {
    const trace::BusMessage* msg =
        find_message(world, codec::kMsgCreateContractCredentialRes);
    REQUIRE(msg != nullptr);
    world.bus().post_raw(msg->from, msg->to, msg->payload);
    world.run_quiet();

    CHECK(world.ev("ev1").has_credential());
    CHECK(commits_of(world, trace::Label::CredInstall) == 1);
  }

  SUBCASE("credential offer replayed at the wallet") {
    const trace::BusMessage* msg =
        find_message(world, codec::kMsgGetCredOfferRes);
    REQUIRE(msg != nullptr);
    world.bus().post_raw(msg->from, msg->to, msg->payload);
    world.run_quiet();

    CHECK(commits_of(world, trace::Label::CredInstall) == 1);
  }

  SUBCASE("presentation replayed at the charge point") {
    const trace::BusMessage* msg =
        find_message(world, codec::kMsgValidateContractProofReq);
    REQUIRE(msg != nullptr);
    world.bus().post_raw(msg->from, msg->to, msg->payload);
    world.run_quiet();

    CHECK(error_seen(world, "cp1", "SessionConsumed"));
    CHECK(commits_of(world, trace::Label::ChargeAuth) == 1);
  }

  // In every variant the replay shows up as an error, never as progress,
  // and the trace still satisfies agreement.
  CHECK(world.trace().errors().size() > errors_before);
  CHECK(harness::all_pass(harness::check_all_agreement(world.trace().events())));
}

TEST_CASE("tampered issuance response leaves the wallet empty") {
  World world = small_world();
  TamperOnce tamper(codec::kMsgCreateContractCredentialRes);
  world.bus().set_adversary(&tamper);

  REQUIRE(world.onboard("oem1"));
  REQUIRE(world.onboard("emsp1"));
  REQUIRE(world.setup_issuer("emsp1", {"emsp_id", "tariff"}));
  REQUIRE(world.provision("ev1"));
  world.register_contract("ev1", "emsp1", {{"tariff", "basic"}});
  World::InstallOutcome outcome = world.install("ev1");

  CHECK_FALSE(outcome.stored);
  CHECK_FALSE(world.ev("ev1").has_credential());
  CHECK(commits_of(world, trace::Label::CredInstall) == 0);
  bool rejected = error_seen(world, "ev1", "DecryptFailed") ||
                  error_seen(world, "ev1", "BadSignature") ||
                  error_seen(world, "ev1", "MalformedMessage");
  CHECK(rejected);
  CHECK(harness::all_pass(harness::check_all_agreement(world.trace().events())));
}

TEST_CASE("tampered provisioning request is refused by the factory") {
  World world = small_world();
  REQUIRE(world.onboard("oem1"));
  TamperOnce tamper(codec::kMsgInitNymReq);
  world.bus().set_adversary(&tamper);

  CHECK_FALSE(world.provision("ev1"));
  bool refused = error_seen(world, "oem1", "AuthFailed") ||
                 error_seen(world, "oem1", "DecryptFailed") ||
                 error_seen(world, "oem1", "MalformedMessage");
  CHECK(refused);
  CHECK(commits_of(world, trace::Label::ProvDid) == 0);
}

TEST_CASE("authorization mode negotiation") {
  SUBCASE("defaults meet on contract-proof") {
    World world = small_world();
    run_install(world);
    CHECK(world.discover("ev1", "cp1"));
    CHECK(world.ev("ev1").negotiated_mode("cp1") ==
          std::optional<std::string>(actors::kModeContractProof));
  }

  SUBCASE("fallback mode is negotiable but cannot charge") {
    World world = small_world(1, {actors::kModeExternalPayment});
    run_install(world);
    CHECK_FALSE(world.discover("ev1", "cp1"));  // not contract-proof
    CHECK(world.ev("ev1").negotiated_mode("cp1") ==
          std::optional<std::string>(actors::kModeExternalPayment));

    CHECK_FALSE(world.charge("ev1", "cp1", 500));
    CHECK(error_seen(world, "ev1", "ModeNotNegotiated"));
  }

  SUBCASE("certificate mode is advertised but not implemented") {
    World world = small_world(1, {actors::kModePncPki});
    run_install(world);
    world.cp("cp1").set_supported_modes(
        {actors::kModePncPki, actors::kModeContractProof});
    CHECK_FALSE(world.discover("ev1", "cp1"));
    CHECK(world.ev("ev1").negotiated_mode("cp1") ==
          std::optional<std::string>(actors::kModePncPki));
    CHECK(error_seen(world, "ev1", "NotImplemented"));
  }

  SUBCASE("no overlap is an explicit dead end on both sides") {
    World world = small_world(1, {actors::kModeContractProof});
    run_install(world);
    world.cp("cp1").set_supported_modes({actors::kModeExternalPayment});
    CHECK_FALSE(world.discover("ev1", "cp1"));
    CHECK(world.ev("ev1").negotiated_mode("cp1") ==
          std::optional<std::string>(actors::kModeNone));
    CHECK(error_seen(world, "cp1", "NoCommonMode"));
    CHECK(error_seen(world, "ev1", "NoCommonMode"));
  }
}

TEST_CASE("message attacker can only ever produce known errors") {
  // Reordering, replaying, dropping and corrupting bus traffic must never
  // surface as anything but the documented error codes — and never as an
  // unearned protocol step.
  static const std::set<std::string> kKnownCodes = {
      "AlreadyRevoked",     "AuthFailed",           "AuthorizationRejected",
      "BadSignature",       "BillingRejected",      "CryptoRejected",
      "DecryptFailed",      "DeliveryBudgetExceeded",
      "InvalidBlinding",    "InvalidSignature",     "LedgerRejected",
      "MalformedMessage",   "ModeNotNegotiated",    "NoAuthorizedSession",
      "NoCommonMode",       "NoContract",           "NoCredential",
      "NonceMismatch",      "NotImplemented",       "NotIssued",
      "NotOnboarded",       "NotProvisioned",       "OfferMismatch",
      "PopFailed",          "ProofInvalid",         "RevokedCredential",
      "SchemaMismatch",     "SessionConsumed",      "StaleRegistryVersion",
      "UnexpectedMessage",  "UnknownChargePoint",   "UnknownContract",
      "UnknownCredDef",     "UnknownDid",           "UnknownEmsp",
      "UnknownOffer",       "UnknownSession",       "UnknownTrustAnchor",
      "UnroutableMessage",
      // Billing rejections carry the authorization-check verdict verbatim.
      "decrypt-failed",     "unknown-contract",     "bad-tag",
      "expired",            "replayed",
  };

  for (uint64_t seed = 1; seed <= 15; ++seed) {
    CAPTURE(seed);
    World world = small_world(seed);
    world.use_dolev_yao(8);

    world.onboard("oem1");
    world.onboard("emsp1");
    world.setup_issuer("emsp1", {"emsp_id", "tariff"});
    world.provision("ev1");
    world.register_contract("ev1", "emsp1", {{"tariff", "basic"}});
    world.install("ev1");
    world.discover("ev1", "cp1");
    world.charge("ev1", "cp1", 500);
    world.bill("cp1");

    for (const trace::ActorError& e : world.trace().errors()) {
      CAPTURE(e.actor);
      CAPTURE(e.detail);
      CHECK(kKnownCodes.contains(e.code));
    }
    CHECK(
        harness::all_pass(harness::check_all_agreement(world.trace().events())));
    CHECK(world.emsp("emsp1").billables().size() <= 1);
    size_t authorized = 0;
    for (const actors::Cp::Session& s : world.cp("cp1").sessions()) {
      if (s.stage == actors::Cp::Stage::Authorized ||
          s.stage == actors::Cp::Stage::Billed ||
          s.stage == actors::Cp::Stage::BillingPending) {
        ++authorized;
      }
    }
    CHECK(authorized <= 1);
  }
}

TEST_CASE("second charge reuses the stored witness without a registry read") {
  World world = small_world();
  run_install(world);
  REQUIRE(world.discover("ev1", "cp1"));
  CHECK(world.charge("ev1", "cp1", 400));
  CHECK(world.charge("ev1", "cp1", 900));
  CHECK(commits_of(world, trace::Label::ChargeAuth) == 2);
  CHECK(world.trace().errors().empty());
}

TEST_CASE("revocation closes the registry to the revoked wallet") {
  World world = small_world();
  run_install(world);
  REQUIRE(world.discover("ev1", "cp1"));
  REQUIRE(world.charge("ev1", "cp1", 400));

  REQUIRE(world.revoke("emsp1", "ev1"));
  CHECK_FALSE(world.charge("ev1", "cp1", 500));
  CHECK(error_seen(world, "ev1", "RevokedCredential"));
  CHECK(commits_of(world, trace::Label::ChargeAuth) == 1);

  SUBCASE("a second revocation of the same contract is refused") {
    CHECK_FALSE(world.revoke("emsp1", "ev1"));
    CHECK(error_seen(world, "emsp1", "AlreadyRevoked"));
  }

  SUBCASE("the revoked contract still settles the charge it already made") {
    CHECK(world.bill("cp1"));
    CHECK(world.emsp("emsp1").billables().size() == 1);
  }
}

TEST_CASE("billing is refused when the auth token does not match") {
  World world = small_world();
  run_install(world);
  REQUIRE(world.discover("ev1", "cp1"));
  REQUIRE(world.charge("ev1", "cp1", 400));

  // Corrupt the sealed token inside the forwarded billing request: the
  // provider must reject it and the charge point must report the refusal.
  CorruptBillingAuth tamper;
  world.bus().set_adversary(&tamper);
  CHECK_FALSE(world.bill("cp1"));
  CHECK(world.emsp("emsp1").billables().empty());
  CHECK(commits_of(world, trace::Label::Billing) == 0);
  CHECK(error_seen(world, "emsp1", "decrypt-failed"));
  CHECK(error_seen(world, "cp1", "BillingRejected"));
}
