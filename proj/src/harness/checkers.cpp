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

#include "evssi/harness/checkers.hpp"

#include <algorithm>
#include <set>

#include "evssi/actors/messages.hpp"
#include "evssi/harness/world.hpp"

namespace evssi::harness {

// -- injective agreement -------------------------------------------------------

AgreementReport check_injective_agreement(
    const std::vector<trace::TraceEvent>& events, trace::Label label) {
  AgreementReport report;
  report.label = label;

  std::vector<const trace::TraceEvent*> open_runnings;
  std::vector<bool> consumed;
  std::set<std::string> revealed;

  for (const trace::TraceEvent& e : events) {
    if (e.kind == trace::EventKind::Reveal) {
      revealed.insert(e.actor);
      continue;
    }
    if (e.label != label) continue;

    if (e.kind == trace::EventKind::Running) {
      open_runnings.push_back(&e);
      consumed.push_back(false);
      continue;
    }

    // Commit.
    ++report.commits;
    if (revealed.contains(e.actor) || revealed.contains(e.peer)) {
      ++report.excused;
      continue;
    }
    bool matched = false;
    for (size_t i = 0; i < open_runnings.size(); ++i) {
      if (consumed[i]) continue;
      if (open_runnings[i]->ds == e.ds) {
        consumed[i] = true;
        matched = true;
        break;
      }
    }
    if (matched) {
      ++report.matched;
    } else if (report.pass) {
      report.pass = false;
      report.violation = e;
      report.detail = std::string(trace::label_name(label)) + " commit by " +
                      e.actor + " (peer " + e.peer + ", t=" +
                      std::to_string(e.time) +
                      ") has no matching unconsumed running";
    }
  }
  return report;
}

std::vector<AgreementReport> check_all_agreement(
    const std::vector<trace::TraceEvent>& events) {
  std::vector<AgreementReport> reports;
  for (trace::Label label :
       {trace::Label::StewardVerinym, trace::Label::ProvDid,
        trace::Label::CredInstall, trace::Label::ChargeAuth,
        trace::Label::Billing}) {
    reports.push_back(check_injective_agreement(events, label));
  }
  return reports;
}

bool all_pass(const std::vector<AgreementReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const AgreementReport& r) { return r.pass; });
}

// -- wallet secrecy ------------------------------------------------------------

LeakReport check_no_secret_leak(const std::vector<trace::BusMessage>& messages,
                                const std::vector<Bytes>& secrets) {
  LeakReport report;
  for (const Bytes& secret : secrets) {
    if (secret.size() < 16) continue;  // too short to witness a leak
    for (const trace::BusMessage& m : messages) {
      auto hit = std::search(m.payload.begin(), m.payload.end(),
                             secret.begin(), secret.end());
      if (hit != m.payload.end()) {
        report.pass = false;
        report.detail = "secret (" + std::to_string(secret.size()) +
                        " bytes) appears in frame seq=" +
                        std::to_string(m.seq) + " " + m.from + "->" + m.to;
        return report;
      }
    }
  }
  return report;
}

// -- unlinkability -------------------------------------------------------------

void flatten_value(const codec::WireValue& v, const std::string& path,
                   std::map<std::string, Bytes>& out) {
  switch (v.kind()) {
    case codec::WireValue::Kind::Uint:
    case codec::WireValue::Kind::Bytes:
    case codec::WireValue::Kind::String:
      out[path] = codec::encode(v);
      return;
    case codec::WireValue::Kind::Sequence: {
      const auto& items = v.items();
      for (size_t i = 0; i < items.size(); ++i) {
        flatten_value(items[i], path + "[" + std::to_string(i) + "]", out);
      }
      return;
    }
    case codec::WireValue::Kind::Record: {
      std::string base = path.empty() ? "" : path + "/";
      std::string tag(codec::tag_name(v.record_tag()));
      const auto& items = v.items();
      for (size_t i = 0; i < items.size(); ++i) {
        flatten_value(items[i],
                      base + tag + "." +
                          actors::record_field_name(v.record_tag(), i),
                      out);
      }
      return;
    }
  }
}

std::map<std::string, Bytes> flatten_frame(const Bytes& envelope_bytes) {
  std::map<std::string, Bytes> out;
  codec::MessageEnvelope env = codec::decode_envelope(envelope_bytes);
  flatten_value(env.payload, "", out);
  return out;
}

const char* observer_name(Observer o) {
  return o == Observer::ChargeInfra ? "charge-infrastructure" : "provider";
}

namespace {

struct SessionView {
  std::string ev;
  std::map<std::string, Bytes> fields;
};

bool frame_visible(const trace::BusMessage& m, Observer observer) {
  auto is_infra = [](const std::string& name) {
    return name.starts_with("cp");  // cp1/cp2/cpo1 by construction below
  };
  if (observer == Observer::ChargeInfra) {
    return is_infra(m.from) || is_infra(m.to);
  }
  return m.from.starts_with("emsp") || m.to.starts_with("emsp");
}

}  // namespace

UnlinkabilityReport run_unlinkability_game(const UnlinkabilityConfig& config) {
  UnlinkabilityReport report;
  report.observer = config.observer;
  report.sessions_per_ev = config.sessions_per_ev;
  if (config.observer == Observer::Provider) {
    report.expected_fields = {"ContractAuthInner.contract_id"};
  }

  // Two vehicles, one provider, two sites run by one operator.
  WorldConfig wc;
  wc.backend = config.backend;
  wc.bits = config.bits;
  wc.seed = config.seed;
  World world(wc);
  world.add_steward("steward");
  world.add_oem("oem1");
  world.add_emsp("emsp1", "EMSP-A");
  world.add_ev("ev1", "oem1", {}, config.leak_contract_note);
  world.add_ev("ev2", "oem1", {}, config.leak_contract_note);
  world.add_cpo("cpo1");
  world.add_cp("cp1", "cpo1", "site-north");
  world.add_cp("cp2", "cpo1", "site-south");

  world.onboard("oem1");
  world.onboard("emsp1");
  world.setup_issuer("emsp1", {"emsp_id", "tariff"});
  for (const char* ev : {"ev1", "ev2"}) {
    world.provision(ev);
    world.register_contract(ev, "emsp1", {{"tariff", "standard"}});
    world.install(ev);
    world.discover(ev, "cp1");
    world.discover(ev, "cp2");
  }

  // Interleave the vehicles across both sites with per-session meter
  // readings; each observation window covers one charge plus its billing.
  std::vector<SessionView> sessions;
  size_t billable_count = 0;
  for (size_t round = 0; round < config.sessions_per_ev; ++round) {
    for (const char* ev : {"ev1", "ev2"}) {
      const char* cp = (round + (ev[2] == '2')) % 2 == 0 ? "cp1" : "cp2";
      size_t first = world.trace().messages().size();
      world.charge(ev, cp, 500 + 137 * round + (ev[2] == '2' ? 41 : 0));
      world.bill(cp);

      SessionView view;
      view.ev = ev;
      for (size_t i = first; i < world.trace().messages().size(); ++i) {
        const trace::BusMessage& m = world.trace().messages()[i];
        if (!frame_visible(m, config.observer)) continue;
        for (auto& [path, bytes] : flatten_frame(m.payload)) {
          view.fields[path] = bytes;
        }
      }
      if (config.observer == Observer::Provider) {
        const auto& billables = world.emsp("emsp1").billables();
        for (; billable_count < billables.size(); ++billable_count) {
          flatten_value(
              codec::decode(billables[billable_count].auth_inner), "",
              view.fields);
        }
      }
      sessions.push_back(std::move(view));
    }
  }

  if (sessions.empty()) {
    report.pass = report.expected_fields.empty();
    return report;
  }

  // A path participates only if every session recorded it.
  std::set<std::string> everywhere;
  for (const auto& kv : sessions.front().fields) {
    everywhere.insert(kv.first);
  }
  for (const SessionView& s : sessions) {
    std::erase_if(everywhere, [&s](const std::string& path) {
      return !s.fields.contains(path);
    });
  }

  for (const std::string& path : everywhere) {
    bool constant_per_ev = true;
    bool constant_globally = true;
    const Bytes* global_ref = nullptr;
    for (const char* ev : {"ev1", "ev2"}) {
      const Bytes* ev_ref = nullptr;
      for (const SessionView& s : sessions) {
        if (s.ev != ev) continue;
        const Bytes& value = s.fields.at(path);
        if (ev_ref == nullptr) {
          ev_ref = &value;
        } else if (*ev_ref != value) {
          constant_per_ev = false;
        }
        if (global_ref == nullptr) {
          global_ref = &value;
        } else if (*global_ref != value) {
          constant_globally = false;
        }
      }
    }
    if (constant_per_ev && !constant_globally) {
      report.linking_fields.push_back(path);
    }
  }

  report.pass = report.linking_fields == report.expected_fields;
  return report;
}

}  // namespace evssi::harness
