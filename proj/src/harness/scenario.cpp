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

#include "evssi/harness/scenario.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

#include "evssi/actors/trace.hpp"
#include "evssi/harness/checkers.hpp"

namespace evssi::harness {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

uint64_t parse_u64(const std::string& tok, size_t line, const char* what) {
  uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ScriptError(line,
                      std::string(what) + " wants a number, got '" + tok + "'");
  }
  return value;
}

// key=value pairs and bare flags trailing the positional arguments.
struct Fields {
  std::map<std::string, std::string> kv;
  std::set<std::string> flags;
};

Fields collect_fields(const ScriptLine& ln, size_t first,
                      const std::set<std::string>& keys,
                      const std::set<std::string>& flags) {
  Fields out;
  for (size_t i = first; i < ln.tokens.size(); ++i) {
    const std::string& tok = ln.tokens[i];
    size_t eq = tok.find('=');
    if (eq == std::string::npos) {
      if (!flags.contains(tok)) {
        throw ScriptError(ln.number, "unknown flag '" + tok + "'");
      }
      out.flags.insert(tok);
      continue;
    }
    std::string key = tok.substr(0, eq);
    std::string value = tok.substr(eq + 1);
    if (!keys.contains(key)) {
      throw ScriptError(ln.number, "unknown field '" + key + "'");
    }
    if (value.empty()) {
      throw ScriptError(ln.number, "empty value for '" + key + "'");
    }
    if (!out.kv.emplace(key, value).second) {
      throw ScriptError(ln.number, "duplicate field '" + key + "'");
    }
  }
  return out;
}

std::vector<std::string> positionals(const ScriptLine& ln, size_t first,
                                     size_t count, const char* usage) {
  std::vector<std::string> out;
  for (size_t i = 0; i < count; ++i) {
    size_t idx = first + i;
    if (idx >= ln.tokens.size() ||
        ln.tokens[idx].find('=') != std::string::npos) {
      throw ScriptError(ln.number, std::string("usage: ") + usage);
    }
    out.push_back(ln.tokens[idx]);
  }
  return out;
}

// One shape-checked script line, ready to execute.
struct Compiled {
  enum class Kind {
    Seed,
    Backend,
    Bits,
    BaseTime,
    AdversaryPassive,
    AdversaryDolevYao,
    ActorSteward,
    ActorOem,
    ActorEmsp,
    ActorEv,
    ActorCpo,
    ActorCp,
    StepOnboard,
    StepSetupIssuer,
    StepProvision,
    StepContract,
    StepInstall,
    StepDiscover,
    StepCharge,
    StepBill,
    StepRevoke,
    StepReveal,
    StepShadowCharge,
    AssertAgreement,
    AssertCommits,
    AssertBillingCount,
    AssertNoSecretLeak,
    AssertError,
    AssertUnlinkability,
  };

  Kind kind;
  size_t line = 0;
  std::string text;

  uint64_t number = 0;              // directive value, count, or meter
  std::vector<std::string> names;   // positional actor names in order
  std::vector<std::string> list;    // modes / attribute names / action kinds
  crypto::AttributeList attrs;      // contract terms
  std::optional<bool> expect;       // step outcome the script insists on
  bool flag = false;                // leak-contract-note
  trace::Label label = trace::Label::Key;
  Observer observer = Observer::ChargeInfra;
  std::string a, b;                 // backend name / error code + actor
};

std::optional<bool> take_expect(Fields& f, size_t line) {
  auto it = f.kv.find("expect");
  if (it == f.kv.end()) return std::nullopt;
  if (it->second == "ok") return true;
  if (it->second == "fail") return false;
  throw ScriptError(line, "expect wants 'ok' or 'fail'");
}

const std::set<std::string> kDyActionKinds = {"drop", "replay", "reorder",
                                              "inject", "modify"};

Compiled compile_directive(const ScriptLine& ln) {
  Compiled op;
  op.line = ln.number;
  op.text = ln.text;
  const std::string& head = ln.tokens[0];

  if (head == "adversary") {
    std::vector<std::string> which =
        positionals(ln, 1, 1, "adversary <passive | dolev-yao [...]>");
    if (which[0] == "passive") {
      collect_fields(ln, 2, {}, {});
      op.kind = Compiled::Kind::AdversaryPassive;
      return op;
    }
    if (which[0] != "dolev-yao") {
      throw ScriptError(ln.number, "unknown adversary '" + which[0] + "'");
    }
    Fields f = collect_fields(ln, 2, {"max-actions", "actions"}, {});
    op.kind = Compiled::Kind::AdversaryDolevYao;
    op.number = 8;
    if (auto it = f.kv.find("max-actions"); it != f.kv.end()) {
      op.number = parse_u64(it->second, ln.number, "max-actions");
    }
    if (auto it = f.kv.find("actions"); it != f.kv.end()) {
      op.list = split_commas(it->second);
      for (const std::string& kind : op.list) {
        if (!kDyActionKinds.contains(kind)) {
          throw ScriptError(ln.number, "unknown action kind '" + kind + "'");
        }
      }
      if (op.list.empty()) {
        throw ScriptError(ln.number, "actions wants at least one kind");
      }
    }
    return op;
  }

  std::vector<std::string> value =
      positionals(ln, 1, 1, (head + " <value>").c_str());
  collect_fields(ln, 2, {}, {});
  if (head == "seed") {
    op.kind = Compiled::Kind::Seed;
    op.number = parse_u64(value[0], ln.number, "seed");
  } else if (head == "bits") {
    op.kind = Compiled::Kind::Bits;
    op.number = parse_u64(value[0], ln.number, "bits");
    if (op.number < 128 || op.number > 8192) {
      throw ScriptError(ln.number, "bits wants a modulus size in [128, 8192]");
    }
  } else if (head == "base-time") {
    op.kind = Compiled::Kind::BaseTime;
    op.number = parse_u64(value[0], ln.number, "base-time");
  } else {  // backend
    op.kind = Compiled::Kind::Backend;
    if (value[0] != "concrete" && value[0] != "symbolic") {
      throw ScriptError(ln.number, "backend wants 'concrete' or 'symbolic'");
    }
    op.a = value[0];
  }
  return op;
}

Compiled compile_actor(const ScriptLine& ln) {
  Compiled op;
  op.line = ln.number;
  op.text = ln.text;
  std::vector<std::string> pos =
      positionals(ln, 1, 2, "actor <role> <name> [fields...]");
  const std::string& role = pos[0];
  op.names = {pos[1]};

  if (role == "steward") {
    collect_fields(ln, 3, {}, {});
    op.kind = Compiled::Kind::ActorSteward;
  } else if (role == "oem") {
    collect_fields(ln, 3, {}, {});
    op.kind = Compiled::Kind::ActorOem;
  } else if (role == "emsp") {
    Fields f = collect_fields(ln, 3, {"alias"}, {});
    if (!f.kv.contains("alias")) {
      throw ScriptError(ln.number, "emsp wants alias=<public id>");
    }
    op.kind = Compiled::Kind::ActorEmsp;
    op.a = f.kv["alias"];
  } else if (role == "ev") {
    Fields f = collect_fields(ln, 3, {"oem", "modes"}, {"leak-contract-note"});
    if (!f.kv.contains("oem")) {
      throw ScriptError(ln.number, "ev wants oem=<name>");
    }
    op.kind = Compiled::Kind::ActorEv;
    op.a = f.kv["oem"];
    if (auto it = f.kv.find("modes"); it != f.kv.end()) {
      op.list = split_commas(it->second);
    }
    op.flag = f.flags.contains("leak-contract-note");
  } else if (role == "cpo") {
    collect_fields(ln, 3, {}, {});
    op.kind = Compiled::Kind::ActorCpo;
  } else if (role == "cp") {
    Fields f = collect_fields(ln, 3, {"cpo", "location"}, {});
    if (!f.kv.contains("cpo") || !f.kv.contains("location")) {
      throw ScriptError(ln.number, "cp wants cpo=<name> location=<site>");
    }
    op.kind = Compiled::Kind::ActorCp;
    op.a = f.kv["cpo"];
    op.b = f.kv["location"];
  } else {
    throw ScriptError(ln.number, "unknown actor role '" + role + "'");
  }
  return op;
}

Compiled compile_step(const ScriptLine& ln) {
  Compiled op;
  op.line = ln.number;
  op.text = ln.text;
  std::vector<std::string> verb = positionals(ln, 1, 1, "step <verb> ...");
  const std::string& v = verb[0];

  auto one = [&](Compiled::Kind kind, const char* usage) {
    op.kind = kind;
    op.names = positionals(ln, 2, 1, usage);
    Fields f = collect_fields(ln, 3, {"expect"}, {});
    op.expect = take_expect(f, ln.number);
  };
  auto two = [&](Compiled::Kind kind, const char* usage) {
    op.kind = kind;
    op.names = positionals(ln, 2, 2, usage);
    Fields f = collect_fields(ln, 4, {"expect"}, {});
    op.expect = take_expect(f, ln.number);
  };

  if (v == "onboard") {
    one(Compiled::Kind::StepOnboard, "step onboard <oem-or-emsp>");
  } else if (v == "setup-issuer") {
    op.kind = Compiled::Kind::StepSetupIssuer;
    op.names = positionals(ln, 2, 1, "step setup-issuer <emsp> attrs=a,b");
    Fields f = collect_fields(ln, 3, {"attrs", "expect"}, {});
    if (!f.kv.contains("attrs")) {
      throw ScriptError(ln.number, "setup-issuer wants attrs=<name,name,...>");
    }
    op.list = split_commas(f.kv["attrs"]);
    if (op.list.empty()) {
      throw ScriptError(ln.number, "attrs wants at least one name");
    }
    op.expect = take_expect(f, ln.number);
  } else if (v == "provision") {
    one(Compiled::Kind::StepProvision, "step provision <ev>");
  } else if (v == "contract") {
    op.kind = Compiled::Kind::StepContract;
    op.names = positionals(ln, 2, 2, "step contract <ev> <emsp> [k=v...]");
    // Remaining key=value tokens are the contract terms, in script order.
    for (size_t i = 4; i < ln.tokens.size(); ++i) {
      const std::string& tok = ln.tokens[i];
      size_t eq = tok.find('=');
      if (eq == std::string::npos) {
        throw ScriptError(ln.number, "contract terms want key=value fields");
      }
      std::string key = tok.substr(0, eq);
      std::string val = tok.substr(eq + 1);
      if (key == "expect") {
        Fields f;
        f.kv["expect"] = val;
        op.expect = take_expect(f, ln.number);
      } else {
        op.attrs.emplace_back(key, val);
      }
    }
  } else if (v == "install") {
    one(Compiled::Kind::StepInstall, "step install <ev>");
  } else if (v == "discover") {
    two(Compiled::Kind::StepDiscover, "step discover <ev> <cp>");
  } else if (v == "charge") {
    op.kind = Compiled::Kind::StepCharge;
    op.names = positionals(ln, 2, 2, "step charge <ev> <cp> [meter=Wh]");
    Fields f = collect_fields(ln, 4, {"meter", "expect"}, {});
    op.number = 500;
    if (auto it = f.kv.find("meter"); it != f.kv.end()) {
      op.number = parse_u64(it->second, ln.number, "meter");
    }
    op.expect = take_expect(f, ln.number);
  } else if (v == "bill") {
    one(Compiled::Kind::StepBill, "step bill <cp>");
  } else if (v == "revoke") {
    two(Compiled::Kind::StepRevoke, "step revoke <emsp> <ev>");
  } else if (v == "reveal") {
    op.kind = Compiled::Kind::StepReveal;
    op.names = positionals(ln, 2, 1, "step reveal <ev>");
    collect_fields(ln, 3, {}, {});
  } else if (v == "shadow-charge") {
    two(Compiled::Kind::StepShadowCharge, "step shadow-charge <ev> <cp>");
  } else {
    throw ScriptError(ln.number, "unknown step '" + v + "'");
  }
  return op;
}

Compiled compile_assert(const ScriptLine& ln) {
  Compiled op;
  op.line = ln.number;
  op.text = ln.text;
  std::vector<std::string> what = positionals(ln, 1, 1, "assert <property> ...");
  const std::string& v = what[0];

  if (v == "agreement") {
    collect_fields(ln, 2, {}, {});
    op.kind = Compiled::Kind::AssertAgreement;
  } else if (v == "commits") {
    op.kind = Compiled::Kind::AssertCommits;
    std::vector<std::string> pos =
        positionals(ln, 2, 2, "assert commits <label> <count>");
    collect_fields(ln, 4, {}, {});
    try {
      op.label = trace::label_from_name(pos[0]);
    } catch (const codec::CodecError&) {
      throw ScriptError(ln.number, "unknown label '" + pos[0] + "'");
    }
    op.number = parse_u64(pos[1], ln.number, "commit count");
  } else if (v == "billing-count") {
    op.kind = Compiled::Kind::AssertBillingCount;
    std::vector<std::string> pos =
        positionals(ln, 2, 2, "assert billing-count <emsp> <count>");
    collect_fields(ln, 4, {}, {});
    op.names = {pos[0]};
    op.number = parse_u64(pos[1], ln.number, "billing count");
  } else if (v == "no-secret-leak") {
    collect_fields(ln, 2, {}, {});
    op.kind = Compiled::Kind::AssertNoSecretLeak;
  } else if (v == "error") {
    op.kind = Compiled::Kind::AssertError;
    std::vector<std::string> pos =
        positionals(ln, 2, 2, "assert error <code> <actor>");
    collect_fields(ln, 4, {}, {});
    op.a = pos[0];
    op.b = pos[1];
  } else if (v == "unlinkability") {
    op.kind = Compiled::Kind::AssertUnlinkability;
    Fields f = collect_fields(ln, 2, {"observer", "sessions"},
                              {"leak-contract-note"});
    if (!f.kv.contains("observer")) {
      throw ScriptError(ln.number,
                        "unlinkability wants observer=<charge-infrastructure "
                        "| provider>");
    }
    const std::string& obs = f.kv["observer"];
    if (obs == observer_name(Observer::ChargeInfra)) {
      op.observer = Observer::ChargeInfra;
    } else if (obs == observer_name(Observer::Provider)) {
      op.observer = Observer::Provider;
    } else {
      throw ScriptError(ln.number, "unknown observer '" + obs + "'");
    }
    op.number = 5;
    if (auto it = f.kv.find("sessions"); it != f.kv.end()) {
      op.number = parse_u64(it->second, ln.number, "sessions");
      if (op.number == 0) {
        throw ScriptError(ln.number, "sessions wants at least 1");
      }
    }
    op.flag = f.flags.contains("leak-contract-note");
  } else {
    throw ScriptError(ln.number, "unknown assert '" + v + "'");
  }
  return op;
}

Compiled compile_line(const ScriptLine& ln) {
  const std::string& head = ln.tokens[0];
  if (head == "seed" || head == "backend" || head == "bits" ||
      head == "base-time" || head == "adversary") {
    return compile_directive(ln);
  }
  if (head == "actor") return compile_actor(ln);
  if (head == "step") return compile_step(ln);
  if (head == "assert") return compile_assert(ln);
  throw ScriptError(ln.number, "unknown clause '" + head + "'");
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const std::string& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out.empty() ? "none" : out;
}

// Executes a compiled script against a lazily built world.
class Runner {
 public:
  ScenarioOutcome run(const Script& script) {
    std::vector<Compiled> ops;
    ops.reserve(script.lines.size());
    for (const ScriptLine& ln : script.lines) {
      ops.push_back(compile_line(ln));
    }
    for (const Compiled& op : ops) {
      exec(op);
    }
    ScenarioOutcome out;
    out.world = std::move(world_);
    out.assertions = std::move(results_);
    return out;
  }

 private:
  // Run-time reference mistakes (actor never declared, reveal before
  // shadow-charge, two stewards) surface as logic errors; pin them to the
  // script line.
  template <typename Fn>
  void guarded(size_t line, Fn&& fn) {
    try {
      fn();
    } catch (const std::logic_error& e) {
      throw ScriptError(line, e.what());
    }
  }

  World& world(const Compiled& op) {
    if (!world_) {
      throw ScriptError(op.line, "no actors declared yet");
    }
    return *world_;
  }

  void build_world() {
    if (!world_) {
      world_ = std::make_unique<World>(config_);
      if (pending_adversary_) {
        apply_adversary(*pending_adversary_);
        pending_adversary_.reset();
      }
    }
  }

  void apply_adversary(const Compiled& op) {
    if (op.kind == Compiled::Kind::AdversaryPassive) {
      world_->use_passive_adversary();
      return;
    }
    world_->use_dolev_yao(op.number);
    if (!op.list.empty()) {
      world_->restrict_dolev_yao(op.list);
    }
  }

  void record_expect(const Compiled& op, bool outcome) {
    if (!op.expect) return;
    AssertionResult r;
    r.line = op.line;
    r.clause = op.text;
    r.pass = outcome == *op.expect;
    r.detail = std::string("step ") + (outcome ? "succeeded" : "failed") +
               ", script expects " + (*op.expect ? "success" : "failure");
    results_.push_back(std::move(r));
  }

  void record(const Compiled& op, bool pass, std::string detail) {
    results_.push_back({op.line, op.text, pass, std::move(detail)});
  }

  void exec(const Compiled& op) {
    using K = Compiled::Kind;
    switch (op.kind) {
      case K::Seed:
      case K::Backend:
      case K::Bits:
      case K::BaseTime:
        if (world_) {
          throw ScriptError(op.line,
                            "configuration must precede the first actor");
        }
        if (op.kind == K::Seed) config_.seed = op.number;
        if (op.kind == K::Backend) config_.backend = op.a;
        if (op.kind == K::Bits) config_.bits = static_cast<unsigned>(op.number);
        if (op.kind == K::BaseTime) config_.base_time = op.number;
        return;

      case K::AdversaryPassive:
      case K::AdversaryDolevYao:
        if (world_) {
          apply_adversary(op);
        } else {
          pending_adversary_ = op;
        }
        return;

      case K::ActorSteward:
        build_world();
        guarded(op.line, [&] { world_->add_steward(op.names[0]); });
        return;
      case K::ActorOem:
        build_world();
        guarded(op.line, [&] { world_->add_oem(op.names[0]); });
        return;
      case K::ActorEmsp:
        build_world();
        guarded(op.line, [&] { world_->add_emsp(op.names[0], op.a); });
        return;
      case K::ActorEv:
        build_world();
        guarded(op.line, [&] {
          world_->add_ev(op.names[0], op.a, op.list, op.flag);
        });
        return;
      case K::ActorCpo:
        build_world();
        guarded(op.line, [&] { world_->add_cpo(op.names[0]); });
        return;
      case K::ActorCp:
        build_world();
        guarded(op.line, [&] { world_->add_cp(op.names[0], op.a, op.b); });
        return;

      case K::StepOnboard: {
        bool ok = false;
        guarded(op.line, [&] { ok = world(op).onboard(op.names[0]); });
        record_expect(op, ok);
        return;
      }
      case K::StepSetupIssuer: {
        bool ok = false;
        guarded(op.line,
                [&] { ok = world(op).setup_issuer(op.names[0], op.list); });
        record_expect(op, ok);
        return;
      }
      case K::StepProvision: {
        bool ok = false;
        guarded(op.line, [&] { ok = world(op).provision(op.names[0]); });
        record_expect(op, ok);
        return;
      }
      case K::StepContract: {
        Bytes contract_id;
        guarded(op.line, [&] {
          contract_id =
              world(op).register_contract(op.names[0], op.names[1], op.attrs);
        });
        record_expect(op, !contract_id.empty());
        return;
      }
      case K::StepInstall: {
        World::InstallOutcome outcome;
        guarded(op.line, [&] { outcome = world(op).install(op.names[0]); });
        record_expect(op, outcome.ok());
        return;
      }
      case K::StepDiscover: {
        bool ok = false;
        guarded(op.line,
                [&] { ok = world(op).discover(op.names[0], op.names[1]); });
        record_expect(op, ok);
        return;
      }
      case K::StepCharge: {
        bool ok = false;
        guarded(op.line, [&] {
          ok = world(op).charge(op.names[0], op.names[1], op.number);
        });
        record_expect(op, ok);
        return;
      }
      case K::StepBill: {
        bool ok = false;
        guarded(op.line, [&] { ok = world(op).bill(op.names[0]); });
        record_expect(op, ok);
        return;
      }
      case K::StepRevoke: {
        bool ok = false;
        guarded(op.line,
                [&] { ok = world(op).revoke(op.names[0], op.names[1]); });
        record_expect(op, ok);
        return;
      }
      case K::StepReveal:
        guarded(op.line, [&] { world(op).reveal(op.names[0]); });
        return;
      case K::StepShadowCharge: {
        bool ok = false;
        guarded(op.line, [&] {
          ok = world(op).shadow_charge(op.names[0], op.names[1]);
        });
        record_expect(op, ok);
        return;
      }

      case K::AssertAgreement: {
        World& w = world(op);
        std::vector<AgreementReport> reports =
            check_all_agreement(w.trace().events());
        if (all_pass(reports)) {
          size_t commits = 0;
          for (const AgreementReport& r : reports) commits += r.commits;
          record(op, true,
                 "every commit (" + std::to_string(commits) +
                     " across five labels) matches a distinct running");
        } else {
          std::string why;
          for (const AgreementReport& r : reports) {
            if (!r.pass) {
              why = r.detail;
              break;
            }
          }
          record(op, false, why);
        }
        return;
      }
      case K::AssertCommits: {
        World& w = world(op);
        size_t count = 0;
        for (const trace::TraceEvent& e : w.trace().events()) {
          if (e.kind == trace::EventKind::Commit && e.label == op.label) {
            ++count;
          }
        }
        record(op, count == op.number,
               std::string(trace::label_name(op.label)) + " commits: saw " +
                   std::to_string(count) + ", script expects " +
                   std::to_string(op.number));
        return;
      }
      case K::AssertBillingCount: {
        World& w = world(op);
        size_t count = 0;
        guarded(op.line,
                [&] { count = w.emsp(op.names[0]).billables().size(); });
        record(op, count == op.number,
               op.names[0] + " settled " + std::to_string(count) +
                   " billable record(s), script expects " +
                   std::to_string(op.number));
        return;
      }
      case K::AssertNoSecretLeak: {
        World& w = world(op);
        LeakReport report =
            check_no_secret_leak(w.trace().messages(), w.collect_secrets());
        record(op, report.pass,
               report.pass ? "no wallet secret bytes appear in any payload"
                           : report.detail);
        return;
      }
      case K::AssertError: {
        World& w = world(op);
        const trace::ActorError* found = nullptr;
        for (const trace::ActorError& e : w.trace().errors()) {
          if (e.code == op.a && e.actor == op.b) {
            found = &e;
            break;
          }
        }
        if (found != nullptr) {
          record(op, true,
                 op.b + " reported " + op.a + " at t=" +
                     std::to_string(found->time));
        } else {
          record(op, false,
                 "no " + op.a + " error from " + op.b + " (" +
                     std::to_string(w.trace().errors().size()) +
                     " errors recorded)");
        }
        return;
      }
      case K::AssertUnlinkability: {
        UnlinkabilityConfig cfg;
        cfg.backend = config_.backend;
        cfg.bits = config_.bits;
        cfg.seed = config_.seed;
        cfg.sessions_per_ev = op.number;
        cfg.observer = op.observer;
        cfg.leak_contract_note = op.flag;
        UnlinkabilityReport report = run_unlinkability_game(cfg);
        record(op, report.pass,
               std::string(observer_name(op.observer)) +
                   " linking fields: [" + join(report.linking_fields) +
                   "], allowed: [" + join(report.expected_fields) + "] over " +
                   std::to_string(op.number) + " sessions per vehicle");
        return;
      }
    }
  }

  WorldConfig config_;
  std::optional<Compiled> pending_adversary_;
  std::unique_ptr<World> world_;
  std::vector<AssertionResult> results_;
};

}  // namespace

Script parse_script(const std::string& text) {
  Script script;
  std::istringstream in(text);
  std::string raw;
  size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (size_t hash = raw.find('#'); hash != std::string::npos) {
      raw.erase(hash);
    }
    std::string line = trim(raw);
    if (line.empty()) continue;
    ScriptLine ln{number, line, split_ws(line)};
    compile_line(ln);  // shape-check now; references are checked at run time
    script.lines.push_back(std::move(ln));
  }
  return script;
}

ScenarioOutcome run_script(const Script& script) {
  return Runner().run(script);
}

ScenarioOutcome run_scenario(const std::string& text) {
  return run_script(parse_script(text));
}

ScenarioOutcome run_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ScriptError(0, "cannot open scenario file " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return run_scenario(buf.str());
}

}  // namespace evssi::harness
