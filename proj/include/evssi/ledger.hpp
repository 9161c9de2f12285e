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

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "evssi/bytes.hpp"
#include "evssi/codec.hpp"
#include "evssi/crypto/types.hpp"

namespace evssi::ledger {

// Single-node emulation of the verifiable data registry: DID records,
// credential schemas, credential definitions, and revocation registries,
// under a two-level write-permission model — the steward creates DIDs and
// grants second-level rights; verinym holders publish issuance objects and
// drive their own registries. Reads are public snapshots; every mutation
// is appended to a write log so the full state can be replayed and
// audited bit for bit.

enum class Role : uint8_t { Steward = 0, Verinym = 1, Client = 2 };

const char* role_name(Role r);

class LedgerError : public std::runtime_error {
 public:
  enum class Kind {
    PermissionDenied,
    DuplicateDid,
    DanglingReference,  // cred_def without schema, registry without cred_def
    VersionConflict,    // accumulator update from a stale base version
    NotFound,
    BadRecord,          // malformed object (e.g. schema without emsp_id)
  };

  LedgerError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct DidRecord {
  std::string did;
  Role role = Role::Client;
  Bytes sig_pk;
  Bytes enc_pk;
  std::string alias;  // human-facing name, e.g. "EMSP-A"

  bool operator==(const DidRecord&) const = default;
  codec::WireValue to_wire() const;
  static DidRecord from_wire(const codec::WireValue& v);
};

struct Schema {
  std::string id;  // filled by the ledger: digest of the content fields
  std::string name;
  std::string version;
  std::vector<std::string> attr_names;

  bool operator==(const Schema&) const = default;
  codec::WireValue to_wire() const;
  static Schema from_wire(const codec::WireValue& v);
};

struct CredDef {
  std::string id;  // filled by the ledger
  std::string schema_id;
  std::string issuer_did;
  codec::WireValue pub;  // issuer public key

  bool operator==(const CredDef&) const = default;
  codec::WireValue to_wire() const;
  static CredDef from_wire(const codec::WireValue& v);
};

// A registry read: public parameters, the accumulator value at `version`,
// and who drives it. The delta log is served separately by version range.
struct RegistrySnapshot {
  std::string id;  // filled by the ledger
  std::string cred_def_id;
  std::string issuer_did;
  codec::WireValue params;
  codec::WireValue acc;
  uint64_t version = 0;

  bool operator==(const RegistrySnapshot&) const = default;
  codec::WireValue to_wire() const;
  static RegistrySnapshot from_wire(const codec::WireValue& v);
};

// Content-derived identifiers, stable across re-encoding because the
// encoding itself is canonical.
std::string schema_id_for(const Schema& s);
std::string cred_def_id_for(const CredDef& d);
std::string registry_id_for(const RegistrySnapshot& r);

codec::WireValue genesis_to_wire(const std::vector<DidRecord>& stewards);
std::vector<DidRecord> genesis_from_wire(const codec::WireValue& v);

class Ledger {
 public:
  // Genesis: the steward records that exist before any write.
  explicit Ledger(std::vector<DidRecord> genesis_stewards);

  // -- writes (serialized, permission-checked, logged) --
  uint64_t write_did(const std::string& caller, const DidRecord& record);
  std::string publish_schema(const std::string& caller, Schema schema);
  std::string publish_cred_def(const std::string& caller, CredDef def);
  std::string publish_registry(const std::string& caller,
                               const std::string& cred_def_id,
                               const codec::WireValue& params,
                               const codec::WireValue& initial_acc);
  uint64_t update_accumulator(const std::string& caller,
                              const std::string& registry_id,
                              const crypto::RegistryDelta& delta);

  // -- reads (public, consistent snapshots) --
  DidRecord get_did(const std::string& did) const;
  std::optional<Role> role_of(const std::string& did) const;
  Schema get_schema(const std::string& id) const;
  CredDef get_cred_def(const std::string& id) const;
  RegistrySnapshot get_registry(const std::string& id) const;
  // Deltas with version > from_version, in order, up to the head.
  std::vector<crypto::RegistryDelta> registry_deltas(
      const std::string& id, uint64_t from_version) const;
  uint64_t version() const;

  // -- audit --
  // The write log: one encoded entry per successful mutation.
  std::vector<Bytes> dump() const;
  const std::vector<DidRecord>& genesis() const { return genesis_; }
  // Digest of the canonical serialization of the entire state.
  Bytes state_digest() const;
  // Re-applies a dumped write log through the same permission checks.
  // Call on a ledger fresh from genesis; version skew is an error.
  void apply_log(const std::vector<Bytes>& log);

 private:
  struct State {
    std::map<std::string, DidRecord> dids;
    std::map<std::string, Schema> schemas;
    std::map<std::string, CredDef> cred_defs;
    std::map<std::string, RegistrySnapshot> registries;
    std::map<std::string, std::vector<crypto::RegistryDelta>> delta_logs;
    uint64_t version = 0;
  };

  std::shared_ptr<const State> snapshot() const;
  void commit(State next, const std::string& op, const std::string& caller,
              codec::WireValue payload);

  std::vector<DidRecord> genesis_;
  mutable std::mutex write_mu_;
  std::shared_ptr<const State> state_;
  std::vector<Bytes> log_;
};

}  // namespace evssi::ledger
