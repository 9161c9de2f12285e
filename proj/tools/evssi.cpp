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

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "evssi/crypto/keystore.hpp"
#include "evssi/harness/checkers.hpp"
#include "evssi/harness/metrics.hpp"
#include "evssi/harness/scenario.hpp"
#include "evssi/harness/world.hpp"

namespace {

using namespace evssi;
using harness::World;
using harness::WorldConfig;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;  // a demo step or scenario assertion failed
constexpr int kExitUsage = 2;   // bad flags, bad script, unusable files

struct CommonOptions {
  std::string backend = "concrete";
  unsigned bits = 512;
  uint64_t seed = 1;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--backend", opt.backend, "crypto backend")
      ->check(CLI::IsMember({"concrete", "symbolic"}))
      ->capture_default_str();
  cmd->add_option("--bits", opt.bits, "RSA modulus size")
      ->check(CLI::Range(128u, 8192u))
      ->capture_default_str();
  cmd->add_option("--seed", opt.seed, "world seed")->capture_default_str();
}

// The canonical single-vehicle population the demo and ledger commands use.
void populate(World& world) {
  world.add_steward("steward");
  world.add_oem("oem1");
  world.add_emsp("emsp1", "EMSP-A");
  world.add_ev("ev1", "oem1");
  world.add_cpo("cpo1");
  world.add_cp("cp1", "cpo1", "site-north");
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  return static_cast<bool>(out);
}

std::string ledger_text(ledger::Ledger& ledger) {
  std::string text;
  for (const Bytes& record : ledger.dump()) {
    text += hex_encode(record);
    text += "\n";
  }
  return text;
}

size_t messages_of_type(const trace::Trace& trace, uint16_t msg_type) {
  size_t n = 0;
  for (const trace::BusMessage& m : trace.messages()) {
    try {
      if (codec::decode_envelope(m.payload).msg_type == msg_type) ++n;
    } catch (const codec::CodecError&) {
    }
  }
  return n;
}

struct DemoOptions {
  CommonOptions common;
  bool revoke_before_charge = false;
  std::string ledger_out;
  std::string trace_out;
};

int run_demo(const DemoOptions& opt) {
  WorldConfig config;
  config.backend = opt.common.backend;
  config.bits = opt.common.bits;
  config.seed = opt.common.seed;
  World world(std::move(config));
  populate(world);

  std::printf("demo: %s backend, %u-bit modulus, seed %llu\n",
              opt.common.backend.c_str(), opt.common.bits,
              static_cast<unsigned long long>(opt.common.seed));

  int failed_steps = 0;
  auto step = [&failed_steps](int n, const char* label, bool ok,
                              const std::string& detail) {
    std::printf("[%2d/12] %-38s %s\n", n, label,
                ok ? detail.c_str() : "FAILED");
    if (!ok) ++failed_steps;
  };

  bool ok = world.onboard("oem1");
  step(1, "OEM verinym registered", ok, world.oem("oem1").keys().did);
  ok = world.onboard("emsp1");
  step(2, "eMSP verinym registered", ok, world.emsp("emsp1").keys().did);

  ok = world.setup_issuer("emsp1", {"emsp_id", "tariff"});
  step(3, "schema, cred def and registry published", ok,
       world.emsp("emsp1").cred_def_id() + "  " +
           world.emsp("emsp1").registry_id());

  ok = world.provision("ev1");
  step(4, "vehicle provisioning DID on registry", ok,
       world.ev("ev1").prov_did());

  Bytes contract_id =
      world.register_contract("ev1", "emsp1", {{"tariff", "standard"}});
  step(5, "charging contract agreed", !contract_id.empty(),
       "contract " + hex_encode(contract_id));

  World::InstallOutcome install = world.install("ev1");
  step(6, "credential offer accepted", install.offer_accepted,
       "offer verified against contract terms");
  step(7, "contract credential issued", install.issued,
       "blinded issuance complete");
  step(8, "credential stored in wallet", install.stored,
       "witness pinned to registry version");

  ok = world.discover("ev1", "cp1");
  step(9, "authentication mode negotiated", ok, "contract-proof");

  if (opt.revoke_before_charge) {
    world.revoke("emsp1", "ev1");
    std::printf("        (provider revoked the contract out of band)\n");
  }

  bool authorized = world.charge("ev1", "cp1", 743);
  step(10, "proof request relayed by charge point",
       messages_of_type(world.trace(), codec::kMsgRequestProofRes) > 0,
       "nonce, attribute list and registry deltas");
  step(11, "charge authorization", authorized,
       "presentation verified, session authorized");

  bool billed = world.bill("cp1");
  size_t billables = world.emsp("emsp1").billables().size();
  step(12, "billing settled with provider", billed && billables == 1,
       "1 billable record at the eMSP");

  if (!opt.ledger_out.empty() &&
      !write_file(opt.ledger_out, ledger_text(world.ledger()))) {
    std::fprintf(stderr, "error: cannot write %s\n", opt.ledger_out.c_str());
    return kExitUsage;
  }
  if (!opt.trace_out.empty() &&
      !write_file(opt.trace_out, world.trace().export_hex())) {
    std::fprintf(stderr, "error: cannot write %s\n", opt.trace_out.c_str());
    return kExitUsage;
  }

  for (const trace::ActorError& e : world.trace().errors()) {
    std::printf("        error: %s reported %s (%s)\n", e.actor.c_str(),
                e.code.c_str(), e.detail.c_str());
  }

  bool billing_committed = false;
  for (const trace::TraceEvent& e : world.trace().events()) {
    if (e.kind == trace::EventKind::Commit &&
        e.label == trace::Label::Billing) {
      billing_committed = true;
    }
  }
  if (billing_committed && billables == 1 && failed_steps == 0) {
    std::printf("demo: complete, billing settled\n");
    return kExitOk;
  }
  std::printf("demo: failed (%d step(s) did not complete)\n", failed_steps);
  return kExitFailed;
}

int run_scenario_cmd(const std::string& path, const std::string& trace_out) {
  harness::ScenarioOutcome outcome = harness::run_scenario_file(path);
  size_t failed = 0;
  for (const harness::AssertionResult& a : outcome.assertions) {
    if (!a.pass) ++failed;
    std::printf("[%s] line %zu: %s\n        %s\n", a.pass ? "PASS" : "FAIL",
                a.line, a.clause.c_str(), a.detail.c_str());
  }
  if (!trace_out.empty() && outcome.world != nullptr &&
      !write_file(trace_out, outcome.world->trace().export_hex())) {
    std::fprintf(stderr, "error: cannot write %s\n", trace_out.c_str());
    return kExitUsage;
  }
  std::printf("scenario: %zu assertion(s), %zu failed\n",
              outcome.assertions.size(), failed);
  return failed == 0 ? kExitOk : kExitFailed;
}

struct BenchOptions {
  unsigned bits = 2048;
  uint64_t seed = 1;
  size_t reps = 100;
  std::vector<std::string> flows = {"install", "charge"};
  std::string format = "table";
};

int run_bench_cmd(const BenchOptions& opt) {
  harness::BenchReport report = harness::run_bench(opt.bits, opt.seed,
                                                   opt.reps);
  bool keep_install = false;
  bool keep_charge = false;
  for (const std::string& flow : opt.flows) {
    (flow == "install" ? keep_install : keep_charge) = true;
  }
  std::erase_if(report.rows, [&](const harness::BenchRow& row) {
    return row.phase == harness::kPhaseInstall ? !keep_install : !keep_charge;
  });
  std::string rendered = opt.format == "csv" ? harness::render_csv(report)
                                             : harness::render_table(report);
  std::fputs(rendered.c_str(), stdout);
  return kExitOk;
}

int run_ledger(const CommonOptions& opt) {
  WorldConfig config;
  config.backend = opt.backend;
  config.bits = opt.bits;
  config.seed = opt.seed;
  World world(std::move(config));
  populate(world);
  world.onboard("oem1");
  world.onboard("emsp1");
  world.setup_issuer("emsp1", {"emsp_id", "tariff"});
  world.provision("ev1");
  world.register_contract("ev1", "emsp1", {{"tariff", "standard"}});
  world.install("ev1");
  world.discover("ev1", "cp1");
  world.charge("ev1", "cp1", 743);
  world.bill("cp1");
  std::fputs(ledger_text(world.ledger()).c_str(), stdout);
  return kExitOk;
}

struct KeygenOptions {
  uint64_t seed = 1;
  std::string role = "holder";
  std::string passphrase;
  std::string out;
};

int run_keygen(const KeygenOptions& opt) {
  crypto::Rng rng = crypto::Rng::from_u64(opt.seed);
  crypto::Rng key_rng = rng.child("keygen:" + opt.role);
  crypto::DidKeys keys = crypto::gen_did_keys(key_rng);

  std::printf("role:   %s\n", opt.role.c_str());
  std::printf("did:    %s\n", keys.did.c_str());
  std::printf("sig-pk: %s\n", hex_encode(keys.sig_pk).c_str());
  std::printf("enc-pk: %s\n", hex_encode(keys.enc_pk).c_str());

  if (opt.out.empty()) return kExitOk;

  crypto::KeyBundle bundle;
  bundle.role = opt.role;
  bundle.keys = keys;
  crypto::Rng seal_rng = rng.child("keystore");
  Bytes file = crypto::keystore_seal(bundle, opt.passphrase, seal_rng);
  if (!write_file(opt.out,
                  std::string(file.begin(), file.end()))) {
    std::fprintf(stderr, "error: cannot write %s\n", opt.out.c_str());
    return kExitUsage;
  }
  std::optional<crypto::KeyBundle> reread =
      crypto::keystore_open(file, opt.passphrase);
  if (!reread || reread->keys.did != keys.did) {
    std::fprintf(stderr, "error: keystore round trip failed\n");
    return kExitFailed;
  }
  std::printf("keystore: wrote %zu bytes to %s (verified)\n", file.size(),
              opt.out.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Self-sovereign charging authorization: lifecycle demo, scripted "
      "scenarios, registry dumps and a message-cost bench"};
  argv = app.ensure_utf8(argv);
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.set_config("--config", "", "options file (INI), also via $EVSSI_CONFIG")
      ->envname("EVSSI_CONFIG");

  DemoOptions demo_opt;
  CLI::App* demo = app.add_subcommand(
      "demo", "Provision, issue, charge and bill one vehicle, step by step");
  add_common(demo, demo_opt.common);
  demo->add_flag("--revoke-before-charge", demo_opt.revoke_before_charge,
                 "revoke the contract after install; charging must fail");
  demo->add_option("--ledger-out", demo_opt.ledger_out,
                   "write the registry write-log (hex, one record per line)");
  demo->add_option("--trace-out", demo_opt.trace_out,
                   "write the bus trace export (hex)");

  std::string scenario_path;
  std::string scenario_trace_out;
  CLI::App* scenario = app.add_subcommand(
      "scenario", "Run a script and evaluate its assert clauses");
  scenario->add_option("path", scenario_path, "scenario script")->required();
  scenario->add_option("--trace-out", scenario_trace_out,
                       "write the final trace export (hex)");

  BenchOptions bench_opt;
  CLI::App* bench = app.add_subcommand(
      "bench", "Measure per-message processing cost on the concrete backend");
  bench->add_option("--bits", bench_opt.bits, "RSA modulus size")
      ->check(CLI::Range(128u, 8192u))
      ->capture_default_str();
  bench->add_option("--seed", bench_opt.seed, "world seed")
      ->capture_default_str();
  bench->add_option("--reps", bench_opt.reps, "repetitions")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--flows", bench_opt.flows, "flows to report")
      ->delimiter(',')
      ->check(CLI::IsMember({"install", "charge"}))
      ->capture_default_str();
  bench->add_option("--format", bench_opt.format, "output format")
      ->check(CLI::IsMember({"table", "csv"}))
      ->capture_default_str();

  CommonOptions ledger_opt;
  CLI::App* ledger = app.add_subcommand(
      "ledger", "Run the demo flow and dump the registry write-log as hex");
  add_common(ledger, ledger_opt);

  KeygenOptions keygen_opt;
  CLI::App* keygen = app.add_subcommand(
      "keygen", "Derive a DID key set from a seed; optionally seal a keystore");
  keygen->add_option("--seed", keygen_opt.seed, "derivation seed")
      ->capture_default_str();
  keygen->add_option("--role", keygen_opt.role, "label stored in the bundle")
      ->capture_default_str();
  keygen->add_option("--passphrase", keygen_opt.passphrase,
                     "keystore passphrase");
  keygen->add_option("--out", keygen_opt.out, "keystore output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help and friends
    }
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (demo->parsed()) return run_demo(demo_opt);
    if (scenario->parsed()) {
      return run_scenario_cmd(scenario_path, scenario_trace_out);
    }
    if (bench->parsed()) return run_bench_cmd(bench_opt);
    if (ledger->parsed()) return run_ledger(ledger_opt);
    if (keygen->parsed()) return run_keygen(keygen_opt);
  } catch (const harness::ScriptError& e) {
    std::fprintf(stderr, "script error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailed;
  }
  return kExitUsage;
}
