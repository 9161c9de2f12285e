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

#include <algorithm>
#include <utility>

#include "evssi/crypto/hash.hpp"

namespace evssi::ledger {

namespace {

using codec::WireValue;

[[noreturn]] void fail(LedgerError::Kind kind, const std::string& what) {
  throw LedgerError(kind, what);
}

Role role_from_u64(uint64_t v) {
  switch (v) {
    case 0: return Role::Steward;
    case 1: return Role::Verinym;
    case 2: return Role::Client;
    default: fail(LedgerError::Kind::BadRecord, "unknown role value");
  }
}

std::vector<WireValue> string_seq(const std::vector<std::string>& items) {
  std::vector<WireValue> out;
  out.reserve(items.size());
  for (const std::string& s : items) out.push_back(WireValue::str(s));
  return out;
}

std::vector<std::string> string_seq_back(const WireValue& v) {
  std::vector<std::string> out;
  for (const WireValue& item : v.items()) out.push_back(item.text());
  return out;
}

const WireValue& field(const WireValue& v, uint16_t tag, size_t count,
                       size_t index) {
  if (!v.is(WireValue::Kind::Record) || v.record_tag() != tag ||
      v.items().size() != count) {
    fail(LedgerError::Kind::BadRecord,
         std::string("malformed ") + (codec::tag_name(tag) ? codec::tag_name(tag)
                                                           : "record"));
  }
  return v.items()[index];
}

// Content digest for derived identifiers: the object is encoded with an
// empty id, hashed, and the first 16 digest bytes become the identifier.
std::string content_id(const char* prefix, const WireValue& content) {
  Bytes digest = crypto::sha256(codec::encode(content));
  return std::string(prefix) +
         hex_encode(BytesView(digest.data(), 16));
}

}  // namespace

const char* role_name(Role r) {
  switch (r) {
    case Role::Steward: return "steward";
    case Role::Verinym: return "verinym";
    case Role::Client: return "client";
  }
  return "unknown";
}

// ---- wire forms ------------------------------------------------------------

WireValue DidRecord::to_wire() const {
  return WireValue::record(
      codec::kRecDid,
      {WireValue::str(did), WireValue::from_u64(static_cast<uint64_t>(role)),
       WireValue::bytes(sig_pk), WireValue::bytes(enc_pk),
       WireValue::str(alias)});
}

DidRecord DidRecord::from_wire(const WireValue& v) {
  DidRecord r;
  r.did = field(v, codec::kRecDid, 5, 0).text();
  r.role = role_from_u64(field(v, codec::kRecDid, 5, 1).as_u64());
  r.sig_pk = field(v, codec::kRecDid, 5, 2).data();
  r.enc_pk = field(v, codec::kRecDid, 5, 3).data();
  r.alias = field(v, codec::kRecDid, 5, 4).text();
  return r;
}

WireValue Schema::to_wire() const {
  return WireValue::record(
      codec::kRecSchema,
      {WireValue::str(id), WireValue::str(name), WireValue::str(version),
       WireValue::seq(string_seq(attr_names))});
}

Schema Schema::from_wire(const WireValue& v) {
  Schema s;
  s.id = field(v, codec::kRecSchema, 4, 0).text();
  s.name = field(v, codec::kRecSchema, 4, 1).text();
  s.version = field(v, codec::kRecSchema, 4, 2).text();
  s.attr_names = string_seq_back(field(v, codec::kRecSchema, 4, 3));
  return s;
}

WireValue CredDef::to_wire() const {
  return WireValue::record(codec::kRecCredDef,
                           {WireValue::str(id), WireValue::str(schema_id),
                            WireValue::str(issuer_did), pub});
}

CredDef CredDef::from_wire(const WireValue& v) {
  CredDef d;
  d.id = field(v, codec::kRecCredDef, 4, 0).text();
  d.schema_id = field(v, codec::kRecCredDef, 4, 1).text();
  d.issuer_did = field(v, codec::kRecCredDef, 4, 2).text();
  d.pub = field(v, codec::kRecCredDef, 4, 3);
  return d;
}

WireValue RegistrySnapshot::to_wire() const {
  return WireValue::record(
      codec::kRecRegistryState,
      {WireValue::str(id), WireValue::str(cred_def_id),
       WireValue::str(issuer_did), params, acc, WireValue::from_u64(version)});
}

RegistrySnapshot RegistrySnapshot::from_wire(const WireValue& v) {
  RegistrySnapshot r;
  r.id = field(v, codec::kRecRegistryState, 6, 0).text();
  r.cred_def_id = field(v, codec::kRecRegistryState, 6, 1).text();
  r.issuer_did = field(v, codec::kRecRegistryState, 6, 2).text();
  r.params = field(v, codec::kRecRegistryState, 6, 3);
  r.acc = field(v, codec::kRecRegistryState, 6, 4);
  r.version = field(v, codec::kRecRegistryState, 6, 5).as_u64();
  return r;
}

std::string schema_id_for(const Schema& s) {
  Schema content = s;
  content.id.clear();
  return content_id("schema:evs:", content.to_wire());
}

std::string cred_def_id_for(const CredDef& d) {
  CredDef content = d;
  content.id.clear();
  return content_id("creddef:evs:", content.to_wire());
}

std::string registry_id_for(const RegistrySnapshot& r) {
  RegistrySnapshot content = r;
  content.id.clear();
  content.version = 0;
  return content_id("registry:evs:", content.to_wire());
}

WireValue genesis_to_wire(const std::vector<DidRecord>& stewards) {
  std::vector<WireValue> items;
  items.reserve(stewards.size());
  for (const DidRecord& r : stewards) items.push_back(r.to_wire());
  return WireValue::record(codec::kRecGenesis,
                           {WireValue::seq(std::move(items))});
}

std::vector<DidRecord> genesis_from_wire(const WireValue& v) {
  std::vector<DidRecord> out;
  for (const WireValue& item : field(v, codec::kRecGenesis, 1, 0).items()) {
    out.push_back(DidRecord::from_wire(item));
  }
  return out;
}

// ---- ledger ----------------------------------------------------------------

Ledger::Ledger(std::vector<DidRecord> genesis_stewards)
    : genesis_(std::move(genesis_stewards)) {
  auto state = std::make_shared<State>();
  for (const DidRecord& r : genesis_) {
    if (r.role != Role::Steward) {
      fail(LedgerError::Kind::BadRecord, "genesis holds non-steward record");
    }
    if (!state->dids.emplace(r.did, r).second) {
      fail(LedgerError::Kind::DuplicateDid, "genesis did repeated: " + r.did);
    }
  }
  state_ = std::move(state);
}

std::shared_ptr<const Ledger::State> Ledger::snapshot() const {
  std::lock_guard<std::mutex> lock(write_mu_);
  return state_;
}

void Ledger::commit(State next, const std::string& op,
                    const std::string& caller, WireValue payload) {
  next.version += 1;
  WireValue entry = WireValue::record(
      codec::kRecLedgerWriteEntry,
      {WireValue::from_u64(next.version), WireValue::str(op),
       WireValue::str(caller), std::move(payload)});
  log_.push_back(codec::encode(entry));
  state_ = std::make_shared<const State>(std::move(next));
}

uint64_t Ledger::write_did(const std::string& caller, const DidRecord& record) {
  std::lock_guard<std::mutex> lock(write_mu_);
  const State& cur = *state_;

  auto caller_it = cur.dids.find(caller);
  if (caller_it == cur.dids.end()) {
    fail(LedgerError::Kind::PermissionDenied, "unknown caller: " + caller);
  }

  auto existing = cur.dids.find(record.did);
  if (existing != cur.dids.end()) {
    // Updates: only the DID's controller, and never a role change.
    if (caller != record.did) {
      fail(LedgerError::Kind::DuplicateDid,
           "did already registered: " + record.did);
    }
    if (existing->second.role != record.role) {
      fail(LedgerError::Kind::PermissionDenied,
           "role changes require a new registration");
    }
  } else if (caller_it->second.role != Role::Steward) {
    // New records are written by the steward, whatever their role: the
    // steward grants second-level (verinym) write rights and registers
    // provisioning DIDs relayed during onboarding.
    fail(LedgerError::Kind::PermissionDenied,
         "only the steward registers new DIDs");
  }

  State next = cur;
  next.dids[record.did] = record;
  commit(std::move(next), "did", caller, record.to_wire());
  return state_->version;
}

std::string Ledger::publish_schema(const std::string& caller, Schema schema) {
  std::lock_guard<std::mutex> lock(write_mu_);
  const State& cur = *state_;

  auto caller_it = cur.dids.find(caller);
  if (caller_it == cur.dids.end() ||
      caller_it->second.role == Role::Client) {
    fail(LedgerError::Kind::PermissionDenied,
         "publishing requires second-level write rights");
  }
  if (std::find(schema.attr_names.begin(), schema.attr_names.end(),
                crypto::kEmspIdAttribute) == schema.attr_names.end()) {
    fail(LedgerError::Kind::BadRecord,
         "schema baseline requires attribute " +
             std::string(crypto::kEmspIdAttribute));
  }

  schema.id = schema_id_for(schema);
  auto existing = cur.schemas.find(schema.id);
  if (existing != cur.schemas.end()) return schema.id;  // same content

  State next = cur;
  next.schemas[schema.id] = schema;
  commit(std::move(next), "schema", caller, schema.to_wire());
  return schema.id;
}

std::string Ledger::publish_cred_def(const std::string& caller, CredDef def) {
  std::lock_guard<std::mutex> lock(write_mu_);
  const State& cur = *state_;

  auto caller_it = cur.dids.find(caller);
  if (caller_it == cur.dids.end() ||
      caller_it->second.role == Role::Client) {
    fail(LedgerError::Kind::PermissionDenied,
         "publishing requires second-level write rights");
  }
  if (cur.schemas.find(def.schema_id) == cur.schemas.end()) {
    fail(LedgerError::Kind::DanglingReference,
         "credential definition references unknown schema " + def.schema_id);
  }

  def.issuer_did = caller;
  def.id = cred_def_id_for(def);
  auto existing = cur.cred_defs.find(def.id);
  if (existing != cur.cred_defs.end()) return def.id;

  State next = cur;
  next.cred_defs[def.id] = def;
  commit(std::move(next), "creddef", caller, def.to_wire());
  return def.id;
}

std::string Ledger::publish_registry(const std::string& caller,
                                     const std::string& cred_def_id,
                                     const WireValue& params,
                                     const WireValue& initial_acc) {
  std::lock_guard<std::mutex> lock(write_mu_);
  const State& cur = *state_;

  auto caller_it = cur.dids.find(caller);
  if (caller_it == cur.dids.end() ||
      caller_it->second.role == Role::Client) {
    fail(LedgerError::Kind::PermissionDenied,
         "publishing requires second-level write rights");
  }
  auto def = cur.cred_defs.find(cred_def_id);
  if (def == cur.cred_defs.end()) {
    fail(LedgerError::Kind::DanglingReference,
         "registry references unknown credential definition " + cred_def_id);
  }
  if (def->second.issuer_did != caller) {
    fail(LedgerError::Kind::PermissionDenied,
         "registry must be published by the credential definition's issuer");
  }

  RegistrySnapshot reg;
  reg.cred_def_id = cred_def_id;
  reg.issuer_did = caller;
  reg.params = params;
  reg.acc = initial_acc;
  reg.version = 0;
  reg.id = registry_id_for(reg);
  if (cur.registries.find(reg.id) != cur.registries.end()) return reg.id;

  State next = cur;
  next.registries[reg.id] = reg;
  next.delta_logs[reg.id] = {};
  commit(std::move(next), "registry", caller, reg.to_wire());
  return reg.id;
}

uint64_t Ledger::update_accumulator(const std::string& caller,
                                    const std::string& registry_id,
                                    const crypto::RegistryDelta& delta) {
  std::lock_guard<std::mutex> lock(write_mu_);
  const State& cur = *state_;

  auto reg = cur.registries.find(registry_id);
  if (reg == cur.registries.end()) {
    fail(LedgerError::Kind::NotFound, "unknown registry " + registry_id);
  }
  if (reg->second.issuer_did != caller) {
    fail(LedgerError::Kind::PermissionDenied,
         "accumulator updates are the issuer's alone");
  }
  if (delta.version != reg->second.version + 1) {
    fail(LedgerError::Kind::VersionConflict,
         "registry at version " + std::to_string(reg->second.version) +
             ", delta targets " + std::to_string(delta.version));
  }

  State next = cur;
  RegistrySnapshot& r = next.registries[registry_id];
  r.version = delta.version;
  r.acc = delta.acc_after;
  next.delta_logs[registry_id].push_back(delta);

  WireValue payload = WireValue::seq(
      {WireValue::str(registry_id), crypto::registry_delta_to_wire(delta)});
  commit(std::move(next), "acc", caller, std::move(payload));
  return delta.version;
}

DidRecord Ledger::get_did(const std::string& did) const {
  auto state = snapshot();
  auto it = state->dids.find(did);
  if (it == state->dids.end()) {
    fail(LedgerError::Kind::NotFound, "unknown did " + did);
  }
  return it->second;
}

std::optional<Role> Ledger::role_of(const std::string& did) const {
  auto state = snapshot();
  auto it = state->dids.find(did);
  if (it == state->dids.end()) return std::nullopt;
  return it->second.role;
}

Schema Ledger::get_schema(const std::string& id) const {
  auto state = snapshot();
  auto it = state->schemas.find(id);
  if (it == state->schemas.end()) {
    fail(LedgerError::Kind::NotFound, "unknown schema " + id);
  }
  return it->second;
}

CredDef Ledger::get_cred_def(const std::string& id) const {
  auto state = snapshot();
  auto it = state->cred_defs.find(id);
  if (it == state->cred_defs.end()) {
    fail(LedgerError::Kind::NotFound, "unknown credential definition " + id);
  }
  return it->second;
}

RegistrySnapshot Ledger::get_registry(const std::string& id) const {
  auto state = snapshot();
  auto it = state->registries.find(id);
  if (it == state->registries.end()) {
    fail(LedgerError::Kind::NotFound, "unknown registry " + id);
  }
  return it->second;
}

std::vector<crypto::RegistryDelta> Ledger::registry_deltas(
    const std::string& id, uint64_t from_version) const {
  auto state = snapshot();
  auto it = state->delta_logs.find(id);
  if (it == state->delta_logs.end()) {
    fail(LedgerError::Kind::NotFound, "unknown registry " + id);
  }
  std::vector<crypto::RegistryDelta> out;
  for (const crypto::RegistryDelta& d : it->second) {
    if (d.version > from_version) out.push_back(d);
  }
  return out;
}

uint64_t Ledger::version() const { return snapshot()->version; }

std::vector<Bytes> Ledger::dump() const {
  std::lock_guard<std::mutex> lock(write_mu_);
  return log_;
}

Bytes Ledger::state_digest() const {
  auto state = snapshot();
  crypto::Hasher h;
  h.update_sized("evssi.ledger.state");
  h.update_sized(u64_be(state->version));
  for (const auto& [did, record] : state->dids) {
    h.update_sized(codec::encode(record.to_wire()));
  }
  for (const auto& [id, schema] : state->schemas) {
    h.update_sized(codec::encode(schema.to_wire()));
  }
  for (const auto& [id, def] : state->cred_defs) {
    h.update_sized(codec::encode(def.to_wire()));
  }
  for (const auto& [id, reg] : state->registries) {
    h.update_sized(codec::encode(reg.to_wire()));
    for (const crypto::RegistryDelta& d : state->delta_logs.at(id)) {
      h.update_sized(codec::encode(crypto::registry_delta_to_wire(d)));
    }
  }
  return h.final_digest();
}

void Ledger::apply_log(const std::vector<Bytes>& log) {
  for (const Bytes& raw : log) {
    WireValue entry = codec::decode(raw);
    uint64_t version = field(entry, codec::kRecLedgerWriteEntry, 4, 0).as_u64();
    std::string op = field(entry, codec::kRecLedgerWriteEntry, 4, 1).text();
    std::string caller = field(entry, codec::kRecLedgerWriteEntry, 4, 2).text();
    const WireValue& payload = field(entry, codec::kRecLedgerWriteEntry, 4, 3);

    if (op == "did") {
      write_did(caller, DidRecord::from_wire(payload));
    } else if (op == "schema") {
      publish_schema(caller, Schema::from_wire(payload));
    } else if (op == "creddef") {
      publish_cred_def(caller, CredDef::from_wire(payload));
    } else if (op == "registry") {
      RegistrySnapshot reg = RegistrySnapshot::from_wire(payload);
      publish_registry(caller, reg.cred_def_id, reg.params, reg.acc);
    } else if (op == "acc") {
      if (!payload.is(WireValue::Kind::Sequence) || payload.items().size() != 2) {
        fail(LedgerError::Kind::BadRecord, "malformed accumulator entry");
      }
      update_accumulator(caller, payload.items()[0].text(),
                         crypto::registry_delta_from_wire(payload.items()[1]));
    } else {
      fail(LedgerError::Kind::BadRecord, "unknown log operation " + op);
    }

    if (this->version() != version) {
      fail(LedgerError::Kind::BadRecord,
           "log version skew at entry " + std::to_string(version));
    }
  }
}

}  // namespace evssi::ledger
