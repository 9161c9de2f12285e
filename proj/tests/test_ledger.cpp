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

#include "evssi/ledger.hpp"

#include "doctest.h"
#include "evssi/crypto/conventional.hpp"
#include "evssi/crypto/hash.hpp"
#include "evssi/crypto/rng.hpp"

using namespace evssi;
using namespace evssi::ledger;

namespace {

DidRecord make_record(crypto::Rng& rng, Role role, const std::string& alias) {
  crypto::DidKeys keys = crypto::gen_did_keys(rng);
  return DidRecord{keys.did, role, keys.sig_pk, keys.enc_pk, alias};
}

struct Fixture {
  crypto::Rng rng = crypto::Rng::from_u64(4001);
  DidRecord steward = make_record(rng, Role::Steward, "steward");
  Ledger ledger{{steward}};

  DidRecord onboard(Role role, const std::string& alias) {
    DidRecord r = make_record(rng, role, alias);
    ledger.write_did(steward.did, r);
    return r;
  }
};

LedgerError::Kind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const LedgerError& e) {
    return e.kind();
  }
  FAIL("expected a ledger error");
  return LedgerError::Kind::NotFound;
}

}  // namespace

TEST_CASE("the steward grants second-level rights; nobody else does") {
  Fixture fx;
  DidRecord emsp = fx.onboard(Role::Verinym, "EMSP-A");
  CHECK(fx.ledger.get_did(emsp.did) == emsp);
  CHECK(fx.ledger.role_of(emsp.did) == Role::Verinym);

  // A verinym holder cannot mint another verinym.
  DidRecord intruder = make_record(fx.rng, Role::Verinym, "EMSP-EVIL");
  CHECK(kind_of([&] { fx.ledger.write_did(emsp.did, intruder); }) ==
        LedgerError::Kind::PermissionDenied);

  // Nor can an unknown caller write anything.
  CHECK(kind_of([&] { fx.ledger.write_did("did:evs:nobody", intruder); }) ==
        LedgerError::Kind::PermissionDenied);

  // Provisioning (client) DIDs also arrive via the steward.
  DidRecord ev = fx.onboard(Role::Client, "ev1");
  CHECK(fx.ledger.role_of(ev.did) == Role::Client);
  CHECK(kind_of([&] {
          fx.ledger.write_did(emsp.did,
                              make_record(fx.rng, Role::Client, "ev2"));
        }) == LedgerError::Kind::PermissionDenied);
}

TEST_CASE("a did registers once; only its controller updates it") {
  Fixture fx;
  DidRecord emsp = fx.onboard(Role::Verinym, "EMSP-A");

  CHECK(kind_of([&] { fx.ledger.write_did(fx.steward.did, emsp); }) ==
        LedgerError::Kind::DuplicateDid);

  // Controller update: new alias, same role.
  DidRecord renamed = emsp;
  renamed.alias = "EMSP-A-rebranded";
  fx.ledger.write_did(emsp.did, renamed);
  CHECK(fx.ledger.get_did(emsp.did).alias == "EMSP-A-rebranded");

  // Role escalation by self-update is refused.
  DidRecord escalated = emsp;
  escalated.role = Role::Steward;
  CHECK(kind_of([&] { fx.ledger.write_did(emsp.did, escalated); }) ==
        LedgerError::Kind::PermissionDenied);
}

TEST_CASE("issuance objects: publish, read back, reference checks") {
  Fixture fx;
  DidRecord emsp = fx.onboard(Role::Verinym, "EMSP-A");
  DidRecord ev = fx.onboard(Role::Client, "ev1");

  Schema schema{"", "contract", "1.0", {"emsp_id", "contract_ref", "tariff"}};
  std::string schema_id = fx.ledger.publish_schema(emsp.did, schema);
  CHECK(fx.ledger.get_schema(schema_id).attr_names == schema.attr_names);

  CredDef def;
  def.schema_id = schema_id;
  def.pub = codec::WireValue::bytes(fx.rng.bytes(64));
  std::string def_id = fx.ledger.publish_cred_def(emsp.did, def);
  CHECK(fx.ledger.get_cred_def(def_id).issuer_did == emsp.did);
  CHECK(fx.ledger.get_cred_def(def_id).schema_id == schema_id);

  // Clients hold no second-level rights.
  CHECK(kind_of([&] { fx.ledger.publish_schema(ev.did, schema); }) ==
        LedgerError::Kind::PermissionDenied);

  // The schema baseline always names the mobility provider.
  Schema degenerate{"", "broken", "1.0", {"contract_ref"}};
  CHECK(kind_of([&] { fx.ledger.publish_schema(emsp.did, degenerate); }) ==
        LedgerError::Kind::BadRecord);

  // Credential definitions may not dangle.
  CredDef dangling;
  dangling.schema_id = "schema:evs:00000000000000000000000000000000";
  dangling.pub = codec::WireValue::bytes(fx.rng.bytes(8));
  CHECK(kind_of([&] { fx.ledger.publish_cred_def(emsp.did, dangling); }) ==
        LedgerError::Kind::DanglingReference);
}

TEST_CASE("object ids are digests of their canonical content") {
  Fixture fx;
  DidRecord emsp = fx.onboard(Role::Verinym, "EMSP-A");
  Schema schema{"", "contract", "1.0", {"emsp_id", "tariff"}};
  std::string schema_id = fx.ledger.publish_schema(emsp.did, schema);

  // Independent recomputation: encode the content with an empty id and
  // take the first sixteen digest bytes.
  codec::WireValue content = codec::WireValue::record(
      codec::kRecSchema,
      {codec::WireValue::str(""), codec::WireValue::str("contract"),
       codec::WireValue::str("1.0"),
       codec::WireValue::seq({codec::WireValue::str("emsp_id"),
                              codec::WireValue::str("tariff")})});
  Bytes digest = crypto::sha256(codec::encode(content));
  CHECK(schema_id ==
        "schema:evs:" + hex_encode(BytesView(digest.data(), 16)));

  // Publishing identical content is idempotent and re-derives the id.
  CHECK(fx.ledger.publish_schema(emsp.did, schema) == schema_id);

  // Different content, different id.
  Schema other = schema;
  other.version = "1.1";
  CHECK(fx.ledger.publish_schema(emsp.did, other) != schema_id);
}

TEST_CASE("registries: issuer-only updates, gap-free versions") {
  Fixture fx;
  DidRecord emsp = fx.onboard(Role::Verinym, "EMSP-A");
  DidRecord rival = fx.onboard(Role::Verinym, "EMSP-B");

  Schema schema{"", "contract", "1.0", {"emsp_id"}};
  std::string schema_id = fx.ledger.publish_schema(emsp.did, schema);
  CredDef def;
  def.schema_id = schema_id;
  def.pub = codec::WireValue::bytes(fx.rng.bytes(32));
  std::string def_id = fx.ledger.publish_cred_def(emsp.did, def);

  codec::WireValue params = codec::WireValue::bytes(fx.rng.bytes(32));
  codec::WireValue acc0 = codec::WireValue::bytes(fx.rng.bytes(16));
  std::string reg_id = fx.ledger.publish_registry(emsp.did, def_id, params, acc0);

  // Another verinym holder can publish neither this registry nor updates.
  CHECK(kind_of([&] {
          fx.ledger.publish_registry(rival.did, def_id, params, acc0);
        }) == LedgerError::Kind::PermissionDenied);

  crypto::RegistryDelta d1{1, crypto::RegistryDelta::Op::Add,
                           codec::WireValue::from_u64(11),
                           codec::WireValue::bytes(fx.rng.bytes(16))};
  CHECK(fx.ledger.update_accumulator(emsp.did, reg_id, d1) == 1);
  CHECK(kind_of([&] { fx.ledger.update_accumulator(rival.did, reg_id, d1); }) ==
        LedgerError::Kind::PermissionDenied);

  // Readers at the new version see the new value.
  RegistrySnapshot reg = fx.ledger.get_registry(reg_id);
  CHECK(reg.version == 1);
  CHECK(reg.acc == d1.acc_after);

  // Two writes racing from the same base: exactly one lands, the other
  // conflicts.
  crypto::RegistryDelta d2a{2, crypto::RegistryDelta::Op::Add,
                            codec::WireValue::from_u64(13),
                            codec::WireValue::bytes(fx.rng.bytes(16))};
  crypto::RegistryDelta d2b{2, crypto::RegistryDelta::Op::Remove,
                            codec::WireValue::from_u64(11),
                            codec::WireValue::bytes(fx.rng.bytes(16))};
  CHECK(fx.ledger.update_accumulator(emsp.did, reg_id, d2a) == 2);
  CHECK(kind_of([&] { fx.ledger.update_accumulator(emsp.did, reg_id, d2b); }) ==
        LedgerError::Kind::VersionConflict);

  // Gaps are conflicts too.
  crypto::RegistryDelta d9{9, crypto::RegistryDelta::Op::Add,
                           codec::WireValue::from_u64(17),
                           codec::WireValue::bytes(fx.rng.bytes(16))};
  CHECK(kind_of([&] { fx.ledger.update_accumulator(emsp.did, reg_id, d9); }) ==
        LedgerError::Kind::VersionConflict);

  // The delta log reproduces exactly what was accepted.
  auto full = fx.ledger.registry_deltas(reg_id, 0);
  REQUIRE(full.size() == 2);
  CHECK(full[0] == d1);
  CHECK(full[1] == d2a);
  auto tail = fx.ledger.registry_deltas(reg_id, 1);
  REQUIRE(tail.size() == 1);
  CHECK(tail[0] == d2a);
}

TEST_CASE("reads are public and honest about absence") {
  Fixture fx;
  CHECK(kind_of([&] { fx.ledger.get_did("did:evs:nope"); }) ==
        LedgerError::Kind::NotFound);
  CHECK(kind_of([&] { fx.ledger.get_schema("schema:evs:ff"); }) ==
        LedgerError::Kind::NotFound);
  CHECK(kind_of([&] { fx.ledger.get_registry("registry:evs:ff"); }) ==
        LedgerError::Kind::NotFound);
  CHECK(!fx.ledger.role_of("did:evs:nope").has_value());
}

TEST_CASE("replaying the write log reproduces the state bit for bit") {
  Fixture fx;
  DidRecord emsp = fx.onboard(Role::Verinym, "EMSP-A");
  fx.onboard(Role::Client, "ev1");
  Schema schema{"", "contract", "1.0", {"emsp_id", "tariff"}};
  std::string schema_id = fx.ledger.publish_schema(emsp.did, schema);
  CredDef def;
  def.schema_id = schema_id;
  def.pub = codec::WireValue::bytes(fx.rng.bytes(32));
  std::string def_id = fx.ledger.publish_cred_def(emsp.did, def);
  std::string reg_id = fx.ledger.publish_registry(
      emsp.did, def_id, codec::WireValue::bytes(fx.rng.bytes(16)),
      codec::WireValue::bytes(fx.rng.bytes(16)));
  fx.ledger.update_accumulator(
      emsp.did, reg_id,
      {1, crypto::RegistryDelta::Op::Add, codec::WireValue::from_u64(5),
       codec::WireValue::bytes(fx.rng.bytes(16))});

  Ledger replica({fx.steward});
  replica.apply_log(fx.ledger.dump());
  CHECK(replica.state_digest() == fx.ledger.state_digest());
  CHECK(replica.version() == fx.ledger.version());
  CHECK(replica.dump() == fx.ledger.dump());
  CHECK(replica.get_registry(reg_id).version == 1);

  // Digest moves with the state.
  Bytes before = fx.ledger.state_digest();
  fx.onboard(Role::Client, "ev2");
  CHECK(fx.ledger.state_digest() != before);
}

TEST_CASE("genesis records travel through their wire form") {
  crypto::Rng rng = crypto::Rng::from_u64(4002);
  std::vector<DidRecord> stewards = {make_record(rng, Role::Steward, "st1"),
                                     make_record(rng, Role::Steward, "st2")};
  auto back = genesis_from_wire(
      codec::decode(codec::encode(genesis_to_wire(stewards))));
  CHECK(back == stewards);

  // Genesis must hold stewards only.
  std::vector<DidRecord> bad = {make_record(rng, Role::Verinym, "no")};
  CHECK_THROWS_AS(Ledger{bad}, LedgerError);
}
