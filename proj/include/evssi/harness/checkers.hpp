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
#include <string>
#include <vector>

#include "evssi/actors/trace.hpp"
#include "evssi/codec.hpp"

namespace evssi::harness {

// -- injective agreement -------------------------------------------------------
//
// Every Commit on a label must be explained by an earlier Running on the
// same label whose agreed data matches byte for byte, each Running
// explaining at most one Commit. A Commit naming a revealed party (itself
// or its peer) is excused: once the adversary holds a wallet's keys it can
// legitimately speak in that wallet's name, and flagging those commits
// would make the checker useless exactly when attacks get interesting.

struct AgreementReport {
  trace::Label label = trace::Label::StewardVerinym;
  size_t commits = 0;
  size_t matched = 0;
  size_t excused = 0;
  bool pass = true;
  std::optional<trace::TraceEvent> violation;  // first unexplained commit
  std::string detail;
};

AgreementReport check_injective_agreement(
    const std::vector<trace::TraceEvent>& events, trace::Label label);

// All five authentication labels.
std::vector<AgreementReport> check_all_agreement(
    const std::vector<trace::TraceEvent>& events);

bool all_pass(const std::vector<AgreementReport>& reports);

// -- wallet secrecy ------------------------------------------------------------

struct LeakReport {
  bool pass = true;
  std::string detail;  // which secret surfaced in which frame
};

// Scans every delivered frame for every secret byte string (needles
// shorter than 16 bytes are skipped as noise).
LeakReport check_no_secret_leak(const std::vector<trace::BusMessage>& messages,
                                const std::vector<Bytes>& secrets);

// -- unlinkability -------------------------------------------------------------
//
// A field-equality game over observed charge-and-bill sessions of two
// vehicles with the same provider. The observer flattens each session's
// frames into leaf fields; a field links vehicles if it is constant within
// each vehicle's sessions but differs between vehicles. Transport routing
// (who sent a frame to whom) is outside the observation: the game is about
// what the recorded data itself gives away.

// Flattens a wire value into leaf paths like
// "RequestProofRes.request/ProofRequest.nonce". Records label their
// fields, sequences index them.
void flatten_value(const codec::WireValue& v, const std::string& path,
                   std::map<std::string, Bytes>& out);

// Flattens one encoded bus frame (envelope payload only; the sender hint
// and addressing are transport, not observed data).
std::map<std::string, Bytes> flatten_frame(const Bytes& envelope_bytes);

enum class Observer {
  ChargeInfra,  // the charge points and their operator, pooled
  Provider,     // the EMSP, including what it decrypts for billing
};

const char* observer_name(Observer o);

struct UnlinkabilityReport {
  Observer observer = Observer::ChargeInfra;
  size_t sessions_per_ev = 0;
  std::vector<std::string> linking_fields;
  // The provider is supposed to link by contract — billing depends on it.
  // Everything else in linking_fields is a finding.
  std::vector<std::string> expected_fields;
  bool pass = false;
};

struct UnlinkabilityConfig {
  std::string backend = "concrete";
  unsigned bits = 512;
  uint64_t seed = 1;
  size_t sessions_per_ev = 5;
  Observer observer = Observer::ChargeInfra;
  // Fixture: have both wallets copy their contract id into the clear
  // client_note field, which the game must then name.
  bool leak_contract_note = false;
};

UnlinkabilityReport run_unlinkability_game(const UnlinkabilityConfig& config);

}  // namespace evssi::harness
