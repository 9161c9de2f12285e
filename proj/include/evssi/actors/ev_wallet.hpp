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
#include <string>
#include <vector>

#include "evssi/actors/actor.hpp"
#include "evssi/crypto/backend.hpp"
#include "evssi/crypto/conventional.hpp"
#include "evssi/ledger.hpp"

namespace evssi::actors {

// The vehicle: holds the provisioning DID, the contract credential, and
// every secret that must never leave the wallet. It talks to the OEM and
// steward once (provisioning), to its EMSP once per contract
// (installation, while parked at home with connectivity), and to charge
// points arbitrarily often. During charging it reads no ledger: the charge
// point relays the registry material it needs inside RequestProofRes.
class EvWallet : public Actor {
 public:
  struct Config {
    std::string oem_actor;
    Bytes pairing_key;
    Bytes oem_sig_pk;
    std::string steward_actor;
    std::string steward_did;
    Bytes steward_enc_pk;
    std::vector<std::string> modes = {kModeContractProof,
                                      kModeExternalPayment};
    // Privacy fixture: copy the contract id into the clear client_note
    // field of every presentation message.
    bool leak_contract_note = false;
  };

  struct StoredCredential {
    crypto::ContractCredential cred;
    codec::WireValue issuer_pub;
    codec::WireValue reg_params;
    std::string emsp_did;
    std::string emsp_actor;
    Bytes emsp_enc_pk;
    Bytes offer_hash;  // H(offer) as agreed at install
  };

  // Everything the key-reveal adversary obtains.
  struct RevealedState {
    crypto::DidKeys prov_keys;
    std::optional<StoredCredential> credential;
  };

  EvWallet(std::string name, Config config, crypto::Rng rng,
           crypto::CryptoBackend& backend, Ledger& ledger);

  // -- runner controls (the vehicle owner's actions) --
  void begin_provisioning(Context& ctx);
  // Out-of-band contract conclusion: the owner hands the provisioning DID
  // to the EMSP and receives the provider's identity and agreed terms.
  void accept_contract(const std::string& emsp_actor,
                       const std::string& emsp_did,
                       crypto::AttributeList attrs);
  void begin_install(Context& ctx);
  void begin_discovery(const std::string& cp_actor, Context& ctx);
  void begin_charge(const std::string& cp_actor, Context& ctx);

  // -- inspection --
  const std::string& prov_did() const { return prov_keys_.did; }
  bool provisioned() const;
  bool has_credential() const { return credential_.has_value(); }
  const StoredCredential& credential() const { return credential_.value(); }
  std::optional<std::string> negotiated_mode(const std::string& cp) const;
  bool last_charge_authorized() const { return last_charge_authorized_; }

  // Wallet values that must never appear on the bus in the clear.
  std::vector<Bytes> secret_material() const;

  RevealedState reveal_state() const;

 protected:
  void on_message(const codec::MessageEnvelope& env, const std::string& from,
                  Context& ctx) override;

 private:
  void handle_init_nym_res(const codec::WireValue& payload,
                           const std::string& from, Context& ctx);
  void handle_offer_res(const codec::WireValue& payload,
                        const std::string& from, Context& ctx);
  void handle_cred_res(const codec::WireValue& payload, const std::string& from,
                       Context& ctx);
  void handle_discovery_res(const codec::WireValue& payload,
                            const std::string& from, Context& ctx);
  void handle_proof_req_res(const codec::WireValue& payload,
                            const std::string& from, Context& ctx);
  void handle_validate_res(const codec::WireValue& payload,
                           const std::string& from, Context& ctx);

  Config config_;
  crypto::Rng rng_;
  crypto::CryptoBackend& backend_;
  Ledger& ledger_;

  crypto::DidKeys prov_keys_;

  struct PendingProvisioning {
    Bytes nonce_ev;
    crypto::DidKeys transport;
  };
  std::optional<PendingProvisioning> pending_prov_;

  struct ContractHandover {
    std::string emsp_actor;
    std::string emsp_did;
    crypto::AttributeList attrs;
  };
  std::optional<ContractHandover> contract_;

  struct PendingInstall {
    Bytes req_nonce;
    std::optional<CredOffer> offer;
    Bytes offer_bytes;
    std::optional<crypto::BlindedSecret> blinding;
    Bytes emsp_sig_pk;
    Bytes emsp_enc_pk;
    codec::WireValue issuer_pub;
    codec::WireValue reg_params;
  };
  std::optional<PendingInstall> pending_install_;

  std::optional<StoredCredential> credential_;
  std::map<std::string, std::string> mode_by_cp_;

  struct PendingCharge {
    std::string cp_actor;
    Bytes client_ref;
    Bytes session_id;
    bool presented = false;
  };
  std::optional<PendingCharge> pending_charge_;
  bool last_charge_authorized_ = false;
};

}  // namespace evssi::actors
