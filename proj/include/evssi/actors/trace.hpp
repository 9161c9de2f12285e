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

#include "evssi/bytes.hpp"
#include "evssi/codec.hpp"

// The trace is the harness's ground truth: every delivered message, every
// protocol-step event, every actor error and every adversary action, in
// global delivery order. Property checkers consume it; the export is the
// byte-exact determinism witness.

namespace evssi::trace {

// Running: a party starts a protocol step and states the data it expects
// to agree on. Commit: the responding party finishes the step over the
// same data. Reveal: the harness handed an actor's long-term secrets to
// the adversary (commits naming that actor are excused from agreement).
enum class EventKind : uint8_t { Running = 0, Commit = 1, Reveal = 2 };

// The five authentication steps whose injective agreement the harness
// checks, plus Key for reveal events.
enum class Label : uint8_t {
  StewardVerinym = 0,  // issuer onboarding: agreed data is the DID record
  ProvDid = 1,         // EV provisioning: record plus both nonces
  CredInstall = 2,     // issuance: H(offer) || H(U) || H(pre_credential)
  ChargeAuth = 3,      // presentation: H(request) || H(presentation)
  Billing = 4,         // H(request) || contract_id || timestamp
  Key = 5,             // reveal events only
};

const char* event_kind_name(EventKind k);
const char* label_name(Label l);
Label label_from_name(const std::string& name);

struct TraceEvent {
  EventKind kind = EventKind::Running;
  std::string actor;
  std::string peer;
  Label label = Label::Key;
  Bytes ds;  // canonical bytes of the agreed data
  uint64_t time = 0;

  bool operator==(const TraceEvent&) const = default;
  codec::WireValue to_wire() const;
  static TraceEvent from_wire(const codec::WireValue& v);
};

struct ActorError {
  std::string actor;
  std::string code;
  std::string detail;
  uint64_t time = 0;

  bool operator==(const ActorError&) const = default;
  codec::WireValue to_wire() const;
  static ActorError from_wire(const codec::WireValue& v);
};

struct AdversaryAction {
  std::string action;  // drop | replay | reorder | inject | modify
  uint64_t seq = 0;    // bus sequence number the action touched
  std::string detail;
  uint64_t time = 0;

  bool operator==(const AdversaryAction&) const = default;
  codec::WireValue to_wire() const;
  static AdversaryAction from_wire(const codec::WireValue& v);
};

// One delivered bus message (after any adversarial edits). `payload` is
// the encoded message envelope exactly as the receiver saw it.
struct BusMessage {
  uint64_t seq = 0;
  std::string from;
  std::string to;
  Bytes payload;
  uint64_t time = 0;

  bool operator==(const BusMessage&) const = default;
  codec::WireValue to_wire() const;
  static BusMessage from_wire(const codec::WireValue& v);
};

class Trace {
 public:
  void add_event(TraceEvent e);
  void add_error(ActorError e);
  void add_action(AdversaryAction a);
  void add_message(BusMessage m);

  const std::vector<TraceEvent>& events() const { return events_; }
  const std::vector<ActorError>& errors() const { return errors_; }
  const std::vector<AdversaryAction>& actions() const { return actions_; }
  const std::vector<BusMessage>& messages() const { return messages_; }

  bool has_error(const std::string& actor, const std::string& code) const;
  size_t count_commits(Label label) const;

  // Newline-delimited codec-hex of every record in global order.
  std::string export_hex() const;

 private:
  std::vector<TraceEvent> events_;
  std::vector<ActorError> errors_;
  std::vector<AdversaryAction> actions_;
  std::vector<BusMessage> messages_;
  std::vector<codec::WireValue> records_;  // unified order
};

}  // namespace evssi::trace
