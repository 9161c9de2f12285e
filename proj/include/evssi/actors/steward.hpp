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
#include <set>
#include <string>

#include "evssi/actors/actor.hpp"
#include "evssi/crypto/conventional.hpp"
#include "evssi/ledger.hpp"

namespace evssi::actors {

// The registry's first-level writer. Verinym onboarding is guarded by a
// pre-negotiated key per onboarder plus proof of possession of the verinym
// key; provisioning-DID registration is guarded by a trust-anchor (OEM)
// endorsement and proof of possession of the new DID's key. Both paths
// consume their nonce, so a replay can never produce a second ledger write
// or a second Commit.
class Steward : public Actor {
 public:
  Steward(std::string name, crypto::DidKeys keys, Ledger& ledger);

  // Pre-shared onboarding key for the verinym holder using `alias`.
  void add_onboarding_key(const std::string& alias, Bytes key);

  const crypto::DidKeys& keys() const { return keys_; }
  const std::string& did() const { return keys_.did; }

 protected:
  void on_message(const codec::MessageEnvelope& env, const std::string& from,
                  Context& ctx) override;

 private:
  void handle_write_verinym(const codec::WireValue& payload,
                            const std::string& from, Context& ctx);
  void handle_register_prov(const codec::WireValue& payload,
                            const std::string& from, Context& ctx);

  crypto::DidKeys keys_;
  Ledger& ledger_;
  std::map<std::string, Bytes> onboarding_keys_;  // alias -> pre-shared key
  std::set<Bytes> seen_verinym_nonces_;
  std::set<Bytes> seen_prov_nonces_;
};

}  // namespace evssi::actors
