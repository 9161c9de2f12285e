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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evssi/actors/cp.hpp"
#include "evssi/actors/cpo.hpp"
#include "evssi/actors/emsp.hpp"
#include "evssi/actors/ev_wallet.hpp"
#include "evssi/actors/oem.hpp"
#include "evssi/actors/steward.hpp"
#include "evssi/harness/adversary.hpp"
#include "evssi/harness/bus.hpp"

namespace evssi::harness {

struct WorldConfig {
  std::string backend = "concrete";
  unsigned bits = 512;
  uint64_t seed = 1;
  uint64_t base_time = 1'700'000'000;
};

// One deterministic universe: a ledger, a bus, a population of actors
// whose keys all derive from the world seed, and an optional adversary.
// The step methods drive complete protocol exchanges and run the bus to
// quiescence, so a scenario reads as a sequence of facts about the world
// rather than a message-pumping loop.
class World {
 public:
  explicit World(WorldConfig config);

  // -- population; the steward carries the genesis, add it first --
  void add_steward(const std::string& name);
  void add_oem(const std::string& name);
  void add_emsp(const std::string& name, const std::string& alias);
  void add_ev(const std::string& name, const std::string& oem_name,
              std::vector<std::string> modes = {},
              bool leak_contract_note = false);
  void add_cpo(const std::string& name);
  void add_cp(const std::string& name, const std::string& cpo_name,
              const std::string& location);

  // -- adversary --
  void use_passive_adversary();
  void use_dolev_yao(size_t max_actions);
  void restrict_dolev_yao(std::vector<std::string> kinds);
  size_t adversary_actions_taken() const;

  // -- protocol steps; each drains the bus before returning --
  bool onboard(const std::string& name);  // an OEM or EMSP by bus name
  bool setup_issuer(const std::string& emsp_name,
                    const std::vector<std::string>& attr_names);
  bool provision(const std::string& ev_name);
  Bytes register_contract(const std::string& ev_name,
                          const std::string& emsp_name,
                          crypto::AttributeList attrs);

  struct InstallOutcome {
    bool offer_accepted = false;   // the vehicle answered the offer
    bool issued = false;           // the provider issued (Running emitted)
    bool stored = false;           // the wallet holds the credential
    bool ok() const { return offer_accepted && issued && stored; }
  };
  InstallOutcome install(const std::string& ev_name);

  bool discover(const std::string& ev_name, const std::string& cp_name);
  bool charge(const std::string& ev_name, const std::string& cp_name,
              uint64_t meter_wh);
  bool bill(const std::string& cp_name);
  bool revoke(const std::string& emsp_name, const std::string& ev_name);

  // Hands the vehicle's long-term secrets to the adversary and records
  // the Reveal event the agreement checker keys on.
  void reveal(const std::string& ev_name);
  // Charges at `cp_name` impersonating the (previously revealed) vehicle.
  bool shadow_charge(const std::string& ev_name, const std::string& cp_name);

  size_t run_quiet(size_t max_deliveries = 10'000);

  // -- access --
  trace::Trace& trace() { return trace_; }
  Bus& bus() { return bus_; }
  ledger::Ledger& ledger() { return *ledger_; }
  crypto::CryptoBackend& backend() { return *backend_; }
  actors::Steward& steward() { return *steward_; }
  actors::Oem& oem(const std::string& name);
  actors::Emsp& emsp(const std::string& name);
  actors::EvWallet& ev(const std::string& name);
  actors::Cp& cp(const std::string& name);
  bool has_actor(const std::string& name) const;

  // Every byte string that must never appear inside bus traffic.
  std::vector<Bytes> collect_secrets() const;

 private:
  template <typename Map>
  static auto& lookup(Map& map, const std::string& name, const char* role);

  // Runs a direct actor operation; a precondition fault becomes an error
  // record instead of unwinding the step. An adversary that starves an
  // actor of a prerequisite makes later steps fail, not the whole run.
  template <typename Fn>
  bool absorb(const std::string& actor, Fn&& fn);

  WorldConfig config_;
  crypto::Rng root_;
  std::unique_ptr<crypto::CryptoBackend> backend_;
  trace::Trace trace_;
  Bus bus_;
  std::unique_ptr<ledger::Ledger> ledger_;

  std::unique_ptr<actors::Steward> steward_;
  std::map<std::string, std::unique_ptr<actors::Oem>> oems_;
  std::map<std::string, std::unique_ptr<actors::Emsp>> emsps_;
  std::map<std::string, std::unique_ptr<actors::EvWallet>> evs_;
  std::map<std::string, std::unique_ptr<actors::Cpo>> cpos_;
  std::map<std::string, std::unique_ptr<actors::Cp>> cps_;

  std::unique_ptr<Adversary> adversary_;
  DolevYaoAdversary* dolev_yao_ = nullptr;  // borrowed view of adversary_
  std::map<std::string, actors::EvWallet::RevealedState> revealed_;
};

}  // namespace evssi::harness
