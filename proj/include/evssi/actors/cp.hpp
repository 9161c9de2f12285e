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
#include "evssi/ledger.hpp"

namespace evssi::actors {

// A charge point: negotiates the authorization mode, hands the vehicle a
// proof request together with the registry material its witness refresh
// needs, verifies the presentation, and reports authorized sessions to its
// operator for billing. It learns the provider identity (it must, to route
// billing) and nothing else about the vehicle.
class Cp : public Actor {
 public:
  enum class Stage {
    AwaitingProof,
    Authorized,
    Rejected,
    BillingPending,
    Billed,
  };

  struct Session {
    Bytes id;
    std::string ev_actor;
    Bytes request_bytes;          // the encoded proof request, as sent
    codec::WireValue request;
    codec::WireValue acc;         // accumulator pinned at session start
    uint64_t registry_version = 0;
    Stage stage = Stage::AwaitingProof;
    std::string emsp_id;          // revealed by the presentation
    Bytes auth_blob;              // opaque provider-bound authorization
    Bytes request_hash;
    uint64_t meter_wh = 0;
    std::string location;
  };

  Cp(std::string name, std::string cpo_actor, std::string location,
     crypto::Rng rng, crypto::CryptoBackend& backend, Ledger& ledger);

  // Accept presentations under this credential definition (and its
  // registry); an operator provisions this out of band.
  void trust_cred_def(const std::string& cred_def_id,
                      const std::string& registry_id);
  void set_meter_reading(uint64_t meter_wh);
  void set_supported_modes(std::vector<std::string> modes);

  // Forwards the most recent authorized session to the operator.
  void begin_billing(Context& ctx);

  const std::vector<Session>& sessions() const { return sessions_; }
  std::optional<Stage> latest_stage() const;

 protected:
  void on_message(const codec::MessageEnvelope& env, const std::string& from,
                  Context& ctx) override;

 private:
  void handle_discovery(const codec::WireValue& payload,
                        const std::string& from, Context& ctx);
  void handle_proof_req(const codec::WireValue& payload,
                        const std::string& from, Context& ctx);
  void handle_validate(const codec::WireValue& payload, const std::string& from,
                       Context& ctx);
  void handle_billing_ack(const codec::WireValue& payload,
                          const std::string& from, Context& ctx);

  Session* session_by_id(const Bytes& id);

  std::string cpo_actor_;
  std::string location_;
  crypto::Rng rng_;
  crypto::CryptoBackend& backend_;
  Ledger& ledger_;

  std::vector<std::string> modes_ = {kModeContractProof, kModeExternalPayment};
  std::string cred_def_id_;
  std::string registry_id_;
  uint64_t meter_wh_ = 0;

  std::vector<Session> sessions_;
};

}  // namespace evssi::actors
