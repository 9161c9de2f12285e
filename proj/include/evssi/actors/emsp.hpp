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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "evssi/actors/actor.hpp"
#include "evssi/crypto/backend.hpp"
#include "evssi/crypto/contract_auth.hpp"
#include "evssi/crypto/conventional.hpp"
#include "evssi/ledger.hpp"

namespace evssi::actors {

// The e-mobility service provider: onboards as a verinym, publishes the
// contract-credential schema, issues credentials against registered
// contracts, drives the revocation registry, and settles billing records
// forwarded by operators. It is the only party that may link charging
// sessions to a contract, and only through the sealed authorization blob.
class Emsp : public Actor {
 public:
  struct StewardRef {
    std::string actor;
    std::string did;
    Bytes sig_pk;
  };

  enum class ContractStatus { Active, Revoked };

  struct Contract {
    Bytes contract_id;   // 16
    Bytes contract_key;  // 32
    std::string prov_did;
    crypto::AttributeList attrs;
    ContractStatus status = ContractStatus::Active;
    codec::WireValue rev_element;  // filled at issuance
    uint64_t added_version = 0;    // registry version of the Add delta
  };

  struct BillableEntry {
    Bytes contract_id;
    uint64_t meter_wh = 0;
    uint64_t timestamp = 0;
    Bytes request_hash;
    Bytes auth_inner;  // re-encrypted witness of what authorized billing
  };

  Emsp(std::string name, std::string alias, crypto::DidKeys verinym_keys,
       Bytes onboarding_key, StewardRef steward, crypto::Rng rng,
       crypto::CryptoBackend& backend, Ledger& ledger);

  // -- runner controls --
  void begin_onboarding(Context& ctx);
  // Publishes schema, credential definition, and revocation registry under
  // this provider's verinym. Direct ledger writes; no bus traffic.
  void setup_issuer(const std::vector<std::string>& attr_names);
  // Out-of-band contract conclusion with a vehicle owner. Returns the new
  // contract id. The emsp_id attribute is forced to this provider's alias.
  Bytes register_contract(const std::string& prov_did,
                          crypto::AttributeList attrs);
  void revoke_by_prov(const std::string& prov_did);

  // -- inspection --
  bool onboarded() const { return onboarded_; }
  const crypto::DidKeys& keys() const { return keys_; }
  const std::string& alias() const { return alias_; }
  const std::string& cred_def_id() const { return cred_def_id_; }
  const std::string& registry_id() const { return registry_id_; }
  const std::vector<BillableEntry>& billables() const { return billables_; }
  std::optional<Bytes> contract_id_for(const std::string& prov_did) const;
  // The signed terms, in schema order — what the holder must see offered.
  std::optional<crypto::AttributeList> contract_attrs_for(
      const std::string& prov_did) const;

 protected:
  void on_message(const codec::MessageEnvelope& env, const std::string& from,
                  Context& ctx) override;

 private:
  void handle_onboard_res(const codec::WireValue& payload, Context& ctx);
  void handle_offer_req(const codec::WireValue& payload,
                        const std::string& from, Context& ctx);
  void handle_cred_req(const codec::WireValue& payload, const std::string& from,
                       Context& ctx);
  void handle_billing(const codec::WireValue& payload, const std::string& from,
                      Context& ctx);

  Contract* active_contract_by_prov(const std::string& prov_did);

  std::string alias_;
  crypto::DidKeys keys_;
  Bytes onboarding_key_;
  StewardRef steward_;
  crypto::Rng rng_;
  crypto::CryptoBackend& backend_;
  Ledger& ledger_;

  Bytes pending_onboard_record_;
  Bytes pending_onboard_nonce_;
  bool onboarded_ = false;

  std::optional<crypto::IssuerKeys> issuer_;
  std::string schema_id_;
  std::string cred_def_id_;
  std::string registry_id_;

  std::vector<Contract> contracts_;

  struct PendingOffer {
    Bytes contract_id;
    Bytes offer_bytes;  // exact sealed plaintext, for the agreement digest
  };
  std::map<Bytes, PendingOffer> pending_offers_;  // keyed by offer nonce

  crypto::SeenTags seen_auth_tags_;
  std::vector<BillableEntry> billables_;
};

}  // namespace evssi::actors
