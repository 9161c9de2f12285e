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
#include <string>

#include "evssi/actors/actor.hpp"
#include "evssi/crypto/conventional.hpp"
#include "evssi/crypto/rng.hpp"

namespace evssi::actors {

// The vehicle manufacturer: a ledger trust anchor that endorses
// provisioning-DID registrations for vehicles it paired with at the
// factory. It holds one verinym (onboarded like any issuer) and a
// per-vehicle pairing key that authenticates InitNymReq.
class Oem : public Actor {
 public:
  struct StewardRef {
    std::string actor;  // bus name
    std::string did;
    Bytes sig_pk;
  };

  Oem(std::string name, crypto::DidKeys verinym_keys, Bytes onboarding_key,
      StewardRef steward, crypto::Rng rng);

  // Factory provisioning: share a pairing key with one vehicle.
  void pair_vehicle(const std::string& ev_actor, Bytes pairing_key);

  // Sends WriteVerinymReq for this OEM's verinym.
  void begin_onboarding(Context& ctx);

  bool onboarded() const { return onboarded_; }
  const crypto::DidKeys& keys() const { return keys_; }

 protected:
  void on_message(const codec::MessageEnvelope& env, const std::string& from,
                  Context& ctx) override;

 private:
  void handle_init_nym(const codec::WireValue& payload, const std::string& from,
                       Context& ctx);
  void handle_onboard_res(const codec::WireValue& payload, Context& ctx);

  crypto::DidKeys keys_;
  Bytes onboarding_key_;
  StewardRef steward_;
  crypto::Rng rng_;
  std::map<std::string, Bytes> pairing_keys_;  // ev actor -> key
  Bytes pending_onboard_record_;               // encoded record awaiting ack
  Bytes pending_onboard_nonce_;
  bool onboarded_ = false;
};

}  // namespace evssi::actors
