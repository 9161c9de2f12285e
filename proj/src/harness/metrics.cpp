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

#include "evssi/harness/metrics.hpp"

#include <array>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "evssi/codec.hpp"
#include "evssi/harness/world.hpp"

namespace evssi::harness {

namespace {

struct TrackedMessage {
  uint16_t msg_type;
  const char* phase;
  const char* name;
  const char* direction;
};

constexpr const char* kInstall = kPhaseInstall;
constexpr const char* kCharge = kPhaseCharge;

constexpr std::array<TrackedMessage, 8> kTracked = {{
    {codec::kMsgGetCredOfferReq, kInstall, "GetCredOfferReq", "EV -> eMSP"},
    {codec::kMsgGetCredOfferRes, kInstall, "GetCredOfferRes", "eMSP -> EV"},
    {codec::kMsgCreateContractCredentialReq, kInstall,
     "CreateContractCredentialReq", "EV -> eMSP"},
    {codec::kMsgCreateContractCredentialRes, kInstall,
     "CreateContractCredentialRes", "eMSP -> EV"},
    {codec::kMsgRequestProofReq, kCharge, "RequestProofReq", "EV -> CP"},
    {codec::kMsgRequestProofRes, kCharge, "RequestProofRes", "CP -> EV"},
    {codec::kMsgValidateContractProofReq, kCharge, "ValidateContractProofReq",
     "EV -> CP"},
    {codec::kMsgValidateContractProofRes, kCharge, "ValidateContractProofRes",
     "CP -> EV"},
}};

struct Samples {
  double total_ms = 0.0;
  uint64_t total_bytes = 0;
  size_t n = 0;
};

}  // namespace

BenchReport run_bench(unsigned bits, uint64_t seed, size_t reps) {
  if (reps == 0) {
    throw std::invalid_argument("bench wants at least one repetition");
  }

  WorldConfig config;
  config.backend = "concrete";
  config.bits = bits;
  config.seed = seed;
  World world(std::move(config));

  world.add_steward("steward");
  world.add_oem("oem");
  world.add_emsp("emsp", "EMSP-BENCH");
  world.add_cpo("cpo");
  world.add_cp("cp", "cpo", "bench-site");
  world.onboard("oem");
  world.onboard("emsp");
  world.setup_issuer("emsp", {"emsp_id", "tariff"});

  std::map<uint16_t, Samples> samples;
  world.bus().set_delivery_hook(
      [&samples](const trace::BusMessage& msg, double elapsed_ms) {
        uint16_t msg_type = 0;
        try {
          msg_type = codec::decode_envelope(msg.payload).msg_type;
        } catch (const codec::CodecError&) {
          return;
        }
        Samples& s = samples[msg_type];
        s.total_ms += elapsed_ms;
        s.total_bytes += msg.payload.size();
        ++s.n;
      });

  // Every repetition is a brand-new vehicle: fresh wallet keys, fresh
  // master secret, fresh accumulator slot. Setup (onboarding, issuer
  // keys) stays outside the measurement.
  for (size_t rep = 0; rep < reps; ++rep) {
    std::string ev = "ev" + std::to_string(rep + 1);
    world.add_ev(ev, "oem");
    if (!world.provision(ev)) {
      throw std::runtime_error("bench: provisioning failed for " + ev);
    }
    world.register_contract(ev, "emsp", {{"tariff", "standard"}});
    if (!world.install(ev).ok()) {
      throw std::runtime_error("bench: credential install failed for " + ev);
    }
    if (!world.discover(ev, "cp")) {
      throw std::runtime_error("bench: mode discovery failed for " + ev);
    }
    if (!world.charge(ev, "cp", 500 + 13 * rep)) {
      throw std::runtime_error("bench: charge authorization failed for " + ev);
    }
  }

  BenchReport report;
  report.bits = bits;
  report.seed = seed;
  report.reps = reps;
  for (const TrackedMessage& tracked : kTracked) {
    const Samples& s = samples[tracked.msg_type];
    BenchRow row;
    row.phase = tracked.phase;
    row.message = tracked.name;
    row.direction = tracked.direction;
    row.samples = s.n;
    if (s.n > 0) {
      row.mean_ms = s.total_ms / static_cast<double>(s.n);
      row.mean_size = s.total_bytes / s.n;
    }
    (row.phase == kInstall ? report.install_total_ms
                           : report.charge_total_ms) += row.mean_ms;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string render_table(const BenchReport& report) {
  char line[160];
  std::string out;
  std::snprintf(line, sizeof(line),
                "processing cost per message (%u-bit modulus, %zu reps, seed "
                "%llu)\n",
                report.bits, report.reps,
                static_cast<unsigned long long>(report.seed));
  out += line;

  for (const char* phase : {kInstall, kCharge}) {
    bool any = false;
    for (const BenchRow& row : report.rows) {
      if (row.phase == phase) any = true;
    }
    if (!any) continue;
    out += "\n";
    out += phase;
    out += "\n";
    std::snprintf(line, sizeof(line), "  %-28s %-12s %12s %14s\n", "message",
                  "direction", "time [ms]", "size [bytes]");
    out += line;
    for (const BenchRow& row : report.rows) {
      if (row.phase != phase) continue;
      std::snprintf(line, sizeof(line), "  %-28s %-12s %12.3f %14llu\n",
                    row.message.c_str(), row.direction.c_str(), row.mean_ms,
                    static_cast<unsigned long long>(row.mean_size));
      out += line;
    }
    double total = phase == kInstall ? report.install_total_ms
                                     : report.charge_total_ms;
    std::snprintf(line, sizeof(line), "  %-28s %-12s %12.3f\n",
                  "(phase total)", "", total);
    out += line;
  }
  return out;
}

std::string render_csv(const BenchReport& report) {
  std::string out = "phase,message,direction,mean_ms,mean_size_bytes,samples\n";
  char line[200];
  bool any_install = false;
  bool any_charge = false;
  for (const BenchRow& row : report.rows) {
    (row.phase == kInstall ? any_install : any_charge) = true;
    std::snprintf(line, sizeof(line), "%s,%s,%s,%.3f,%llu,%zu\n",
                  row.phase.c_str(), row.message.c_str(),
                  row.direction.c_str(), row.mean_ms,
                  static_cast<unsigned long long>(row.mean_size), row.samples);
    out += line;
  }
  if (any_install) {
    std::snprintf(line, sizeof(line), "%s,total,,%.3f,,\n", kInstall,
                  report.install_total_ms);
    out += line;
  }
  if (any_charge) {
    std::snprintf(line, sizeof(line), "%s,total,,%.3f,,\n", kCharge,
                  report.charge_total_ms);
    out += line;
  }
  return out;
}

}  // namespace evssi::harness
