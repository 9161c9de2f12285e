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

#include "evssi/harness/world.hpp"

#include <stdexcept>
#include <utility>

namespace evssi::harness {

namespace {

crypto::DidKeys keys_for(const crypto::Rng& root, const std::string& name) {
  crypto::Rng stream = root.child("keys:" + name);
  return crypto::gen_did_keys(stream);
}

}  // namespace

template <typename Map>
auto& World::lookup(Map& map, const std::string& name, const char* role) {
  auto it = map.find(name);
  if (it == map.end()) {
    throw std::out_of_range(std::string(role) + " " + name + " does not exist");
  }
  return *it->second;
}

template <typename Fn>
bool World::absorb(const std::string& actor, Fn&& fn) {
  try {
    fn();
    return true;
  } catch (const actors::ActorFault& fault) {
    trace_.add_error({actor, fault.code(), fault.what(), bus_.now()});
    return false;
  }
}

World::World(WorldConfig config)
    : config_(std::move(config)),
      root_(crypto::Rng::from_u64(config_.seed)),
      backend_(crypto::make_backend(config_.backend, config_.bits)),
      bus_(trace_, config_.base_time) {}

// -- population ---------------------------------------------------------------

void World::add_steward(const std::string& name) {
  if (steward_) {
    throw std::logic_error("world already has a steward");
  }
  crypto::DidKeys keys = keys_for(root_, name);
  ledger::DidRecord genesis;
  genesis.did = keys.did;
  genesis.role = ledger::Role::Steward;
  genesis.sig_pk = keys.sig_pk;
  genesis.enc_pk = keys.enc_pk;
  genesis.alias = name;
  ledger_ = std::make_unique<ledger::Ledger>(
      std::vector<ledger::DidRecord>{genesis});
  steward_ =
      std::make_unique<actors::Steward>(name, std::move(keys), *ledger_);
  bus_.attach(*steward_);
}

void World::add_oem(const std::string& name) {
  if (!steward_) {
    throw std::logic_error("world has no steward yet");
  }
  Bytes psk = root_.child("psk:" + name).bytes(32);
  steward_->add_onboarding_key(name, psk);
  actors::Oem::StewardRef ref{steward_->name(), steward_->did(),
                              steward_->keys().sig_pk};
  auto oem = std::make_unique<actors::Oem>(name, keys_for(root_, name),
                                           std::move(psk), std::move(ref),
                                           root_.child("actor:" + name));
  bus_.attach(*oem);
  oems_[name] = std::move(oem);
}

void World::add_emsp(const std::string& name, const std::string& alias) {
  if (!steward_) {
    throw std::logic_error("world has no steward yet");
  }
  Bytes psk = root_.child("psk:" + name).bytes(32);
  steward_->add_onboarding_key(alias, psk);
  actors::Emsp::StewardRef ref{steward_->name(), steward_->did(),
                               steward_->keys().sig_pk};
  auto emsp = std::make_unique<actors::Emsp>(
      name, alias, keys_for(root_, name), std::move(psk), std::move(ref),
      root_.child("actor:" + name), *backend_, *ledger_);
  bus_.attach(*emsp);
  for (auto& [cpo_name, cpo] : cpos_) {
    cpo->add_emsp_route(alias, name);
  }
  emsps_[name] = std::move(emsp);
}

void World::add_ev(const std::string& name, const std::string& oem_name,
                   std::vector<std::string> modes, bool leak_contract_note) {
  actors::Oem& oem = lookup(oems_, oem_name, "oem");
  Bytes pairing = root_.child("pair:" + name).bytes(32);
  oem.pair_vehicle(name, pairing);

  actors::EvWallet::Config config;
  config.oem_actor = oem_name;
  config.pairing_key = std::move(pairing);
  config.oem_sig_pk = oem.keys().sig_pk;
  config.steward_actor = steward_->name();
  config.steward_did = steward_->did();
  config.steward_enc_pk = steward_->keys().enc_pk;
  if (!modes.empty()) {
    config.modes = std::move(modes);
  }
  config.leak_contract_note = leak_contract_note;

  auto ev = std::make_unique<actors::EvWallet>(
      name, std::move(config), root_.child("actor:" + name), *backend_,
      *ledger_);
  bus_.attach(*ev);
  evs_[name] = std::move(ev);
}

void World::add_cpo(const std::string& name) {
  auto cpo = std::make_unique<actors::Cpo>(name);
  for (auto& [emsp_name, emsp] : emsps_) {
    cpo->add_emsp_route(emsp->alias(), emsp_name);
  }
  bus_.attach(*cpo);
  cpos_[name] = std::move(cpo);
}

void World::add_cp(const std::string& name, const std::string& cpo_name,
                   const std::string& location) {
  actors::Cpo& cpo = lookup(cpos_, cpo_name, "cpo");
  cpo.add_charge_point(name);
  auto cp = std::make_unique<actors::Cp>(name, cpo_name, location,
                                         root_.child("actor:" + name),
                                         *backend_, *ledger_);
  // Trust any credential material already on the registry.
  for (auto& [emsp_name, emsp] : emsps_) {
    if (!emsp->cred_def_id().empty()) {
      cp->trust_cred_def(emsp->cred_def_id(), emsp->registry_id());
    }
  }
  bus_.attach(*cp);
  cps_[name] = std::move(cp);
}

// -- adversary ----------------------------------------------------------------

void World::use_passive_adversary() {
  adversary_ = std::make_unique<PassiveAdversary>();
  dolev_yao_ = nullptr;
  bus_.set_adversary(adversary_.get());
}

void World::use_dolev_yao(size_t max_actions) {
  auto dy = std::make_unique<DolevYaoAdversary>(root_.child("adversary"),
                                                trace_, max_actions);
  dolev_yao_ = dy.get();
  adversary_ = std::move(dy);
  bus_.set_adversary(adversary_.get());
}

void World::restrict_dolev_yao(std::vector<std::string> kinds) {
  if (dolev_yao_ == nullptr) {
    throw std::logic_error("no message attacker to restrict");
  }
  dolev_yao_->restrict_actions(std::move(kinds));
}

size_t World::adversary_actions_taken() const {
  return dolev_yao_ == nullptr ? 0 : dolev_yao_->actions_taken();
}

// -- protocol steps -----------------------------------------------------------

size_t World::run_quiet(size_t max_deliveries) {
  return bus_.run(max_deliveries);
}

bool World::onboard(const std::string& name) {
  if (auto it = oems_.find(name); it != oems_.end()) {
    actors::Oem& oem = *it->second;
    absorb(name, [&] {
      bus_.with_context(
          oem, [&oem](actors::Context& ctx) { oem.begin_onboarding(ctx); });
    });
    run_quiet();
    return oem.onboarded();
  }
  actors::Emsp& emsp = lookup(emsps_, name, "emsp");
  absorb(name, [&] {
    bus_.with_context(
        emsp, [&emsp](actors::Context& ctx) { emsp.begin_onboarding(ctx); });
  });
  run_quiet();
  return emsp.onboarded();
}

bool World::setup_issuer(const std::string& emsp_name,
                         const std::vector<std::string>& attr_names) {
  actors::Emsp& emsp = lookup(emsps_, emsp_name, "emsp");
  if (!absorb(emsp_name, [&] { emsp.setup_issuer(attr_names); })) {
    return false;
  }
  for (auto& [cp_name, cp] : cps_) {
    cp->trust_cred_def(emsp.cred_def_id(), emsp.registry_id());
  }
  return true;
}

bool World::provision(const std::string& ev_name) {
  actors::EvWallet& ev = lookup(evs_, ev_name, "ev");
  absorb(ev_name, [&] {
    bus_.with_context(
        ev, [&ev](actors::Context& ctx) { ev.begin_provisioning(ctx); });
  });
  run_quiet();
  return ev.provisioned();
}

Bytes World::register_contract(const std::string& ev_name,
                               const std::string& emsp_name,
                               crypto::AttributeList attrs) {
  actors::EvWallet& ev = lookup(evs_, ev_name, "ev");
  actors::Emsp& emsp = lookup(emsps_, emsp_name, "emsp");
  Bytes contract_id;
  absorb(emsp_name, [&] {
    contract_id = emsp.register_contract(ev.prov_did(), std::move(attrs));
    // Both signatories keep the same canonical terms.
    ev.accept_contract(emsp_name, emsp.keys().did,
                       *emsp.contract_attrs_for(ev.prov_did()));
  });
  return contract_id;
}

World::InstallOutcome World::install(const std::string& ev_name) {
  actors::EvWallet& ev = lookup(evs_, ev_name, "ev");
  size_t first_message = trace_.messages().size();
  size_t first_event = trace_.events().size();

  absorb(ev_name, [&] {
    bus_.with_context(ev,
                      [&ev](actors::Context& ctx) { ev.begin_install(ctx); });
  });
  run_quiet();

  InstallOutcome outcome;
  for (size_t i = first_message; i < trace_.messages().size(); ++i) {
    const trace::BusMessage& m = trace_.messages()[i];
    if (m.from != ev_name) continue;
    try {
      if (codec::decode_envelope(m.payload).msg_type ==
          codec::kMsgCreateContractCredentialReq) {
        outcome.offer_accepted = true;
        break;
      }
    } catch (const codec::CodecError&) {
    }
  }
  for (size_t i = first_event; i < trace_.events().size(); ++i) {
    const trace::TraceEvent& e = trace_.events()[i];
    if (e.kind == trace::EventKind::Running &&
        e.label == trace::Label::CredInstall) {
      outcome.issued = true;
      break;
    }
  }
  outcome.stored = ev.has_credential();
  return outcome;
}

bool World::discover(const std::string& ev_name, const std::string& cp_name) {
  actors::EvWallet& ev = lookup(evs_, ev_name, "ev");
  absorb(ev_name, [&] {
    bus_.with_context(
        ev, [&](actors::Context& ctx) { ev.begin_discovery(cp_name, ctx); });
  });
  run_quiet();
  return ev.negotiated_mode(cp_name) ==
         std::optional<std::string>(actors::kModeContractProof);
}

bool World::charge(const std::string& ev_name, const std::string& cp_name,
                   uint64_t meter_wh) {
  actors::EvWallet& ev = lookup(evs_, ev_name, "ev");
  actors::Cp& cp = lookup(cps_, cp_name, "cp");
  cp.set_meter_reading(meter_wh);
  absorb(ev_name, [&] {
    bus_.with_context(
        ev, [&](actors::Context& ctx) { ev.begin_charge(cp_name, ctx); });
  });
  run_quiet();
  return ev.last_charge_authorized();
}

bool World::bill(const std::string& cp_name) {
  actors::Cp& cp = lookup(cps_, cp_name, "cp");
  auto billed = [&cp]() {
    size_t n = 0;
    for (const actors::Cp::Session& s : cp.sessions()) {
      if (s.stage == actors::Cp::Stage::Billed) ++n;
    }
    return n;
  };
  size_t before = billed();
  absorb(cp_name, [&] {
    bus_.with_context(cp,
                      [&cp](actors::Context& ctx) { cp.begin_billing(ctx); });
  });
  run_quiet();
  return billed() > before;
}

bool World::revoke(const std::string& emsp_name, const std::string& ev_name) {
  actors::Emsp& emsp = lookup(emsps_, emsp_name, "emsp");
  actors::EvWallet& ev = lookup(evs_, ev_name, "ev");
  return absorb(emsp_name, [&] { emsp.revoke_by_prov(ev.prov_did()); });
}

void World::reveal(const std::string& ev_name) {
  actors::EvWallet& ev = lookup(evs_, ev_name, "ev");
  revealed_[ev_name] = ev.reveal_state();
  trace_.add_event({trace::EventKind::Reveal, ev_name, "", trace::Label::Key,
                    {}, bus_.now()});
}

bool World::shadow_charge(const std::string& ev_name,
                          const std::string& cp_name) {
  auto stolen = revealed_.find(ev_name);
  if (stolen == revealed_.end()) {
    throw std::logic_error(ev_name + " was never revealed");
  }
  actors::Cp& cp = lookup(cps_, cp_name, "cp");

  auto shadow = std::make_unique<ShadowChargeAdversary>(
      stolen->second, *backend_, root_.child("shadow:" + ev_name), trace_,
      ev_name, cp_name);
  ShadowChargeAdversary* view = shadow.get();
  dolev_yao_ = nullptr;
  adversary_ = std::move(shadow);
  bus_.set_adversary(adversary_.get());

  view->arm(bus_);
  run_quiet();
  if (!view->presented()) return false;
  for (const actors::Cp::Session& s : cp.sessions()) {
    if (s.stage == actors::Cp::Stage::Authorized) return true;
  }
  return false;
}

// -- access -------------------------------------------------------------------

actors::Oem& World::oem(const std::string& name) {
  return lookup(oems_, name, "oem");
}
actors::Emsp& World::emsp(const std::string& name) {
  return lookup(emsps_, name, "emsp");
}
actors::EvWallet& World::ev(const std::string& name) {
  return lookup(evs_, name, "ev");
}
actors::Cp& World::cp(const std::string& name) {
  return lookup(cps_, name, "cp");
}

bool World::has_actor(const std::string& name) const {
  return (steward_ && steward_->name() == name) || oems_.contains(name) ||
         emsps_.contains(name) || evs_.contains(name) ||
         cpos_.contains(name) || cps_.contains(name);
}

std::vector<Bytes> World::collect_secrets() const {
  std::vector<Bytes> secrets;
  for (const auto& [name, ev] : evs_) {
    std::vector<Bytes> material = ev->secret_material();
    secrets.insert(secrets.end(), material.begin(), material.end());
  }
  return secrets;
}

}  // namespace evssi::harness
