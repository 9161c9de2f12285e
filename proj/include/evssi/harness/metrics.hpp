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

#include <cstdint>
#include <string>
#include <vector>

namespace evssi::harness {

// Per-message cost of the two wallet-facing flows, measured on the real
// (concrete) crypto backend. Each repetition provisions a fresh vehicle,
// installs a credential and runs one charge authorization; the bus's
// delivery hook attributes to every message the wall time its receiver's
// handler spent, which is where all the cryptographic work happens.
// Payload sizes are what actually crossed the bus, envelope included.

inline constexpr const char* kPhaseInstall = "credential-installation";
inline constexpr const char* kPhaseCharge = "charge-authorization";

struct BenchRow {
  std::string phase;      // kPhaseInstall or kPhaseCharge
  std::string message;    // wire message name
  std::string direction;  // e.g. "EV -> eMSP"
  double mean_ms = 0.0;
  uint64_t mean_size = 0;  // bytes, averaged over samples
  size_t samples = 0;
};

struct BenchReport {
  unsigned bits = 0;
  uint64_t seed = 0;
  size_t reps = 0;
  std::vector<BenchRow> rows;  // install rows first, then charge rows
  double install_total_ms = 0.0;
  double charge_total_ms = 0.0;
};

BenchReport run_bench(unsigned bits, uint64_t seed, size_t reps);

std::string render_table(const BenchReport& report);
std::string render_csv(const BenchReport& report);

}  // namespace evssi::harness
