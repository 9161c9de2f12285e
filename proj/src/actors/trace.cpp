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

#include "evssi/actors/trace.hpp"

#include <utility>

namespace evssi::trace {

using codec::WireValue;

const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::Running:
      return "Running";
    case EventKind::Commit:
      return "Commit";
    case EventKind::Reveal:
      return "Reveal";
  }
  return "?";
}

const char* label_name(Label l) {
  switch (l) {
    case Label::StewardVerinym:
      return "StewardVerinym";
    case Label::ProvDid:
      return "ProvDid";
    case Label::CredInstall:
      return "CredInstall";
    case Label::ChargeAuth:
      return "ChargeAuth";
    case Label::Billing:
      return "Billing";
    case Label::Key:
      return "Key";
  }
  return "?";
}

Label label_from_name(const std::string& name) {
  for (Label l : {Label::StewardVerinym, Label::ProvDid, Label::CredInstall,
                  Label::ChargeAuth, Label::Billing, Label::Key}) {
    if (name == label_name(l)) return l;
  }
  throw codec::CodecError(codec::CodecError::Kind::Malformed,
                          "unknown trace label " + name);
}

WireValue TraceEvent::to_wire() const {
  return WireValue::record(
      codec::kRecTraceEvent,
      {WireValue::from_u64(static_cast<uint64_t>(kind)), WireValue::str(actor),
       WireValue::str(peer), WireValue::str(label_name(label)),
       WireValue::bytes(ds), WireValue::from_u64(time)});
}

TraceEvent TraceEvent::from_wire(const WireValue& v) {
  if (v.record_tag() != codec::kRecTraceEvent || v.items().size() != 6) {
    throw codec::CodecError(codec::CodecError::Kind::Malformed,
                            "bad trace event record");
  }
  TraceEvent e;
  uint64_t kind = v.items()[0].as_u64();
  if (kind > 2) {
    throw codec::CodecError(codec::CodecError::Kind::Malformed,
                            "bad trace event kind");
  }
  e.kind = static_cast<EventKind>(kind);
  e.actor = v.items()[1].text();
  e.peer = v.items()[2].text();
  e.label = label_from_name(v.items()[3].text());
  e.ds = v.items()[4].data();
  e.time = v.items()[5].as_u64();
  return e;
}

WireValue ActorError::to_wire() const {
  return WireValue::record(
      codec::kRecActorError,
      {WireValue::str(actor), WireValue::str(code), WireValue::str(detail),
       WireValue::from_u64(time)});
}

ActorError ActorError::from_wire(const WireValue& v) {
  if (v.record_tag() != codec::kRecActorError || v.items().size() != 4) {
    throw codec::CodecError(codec::CodecError::Kind::Malformed,
                            "bad actor error record");
  }
  return ActorError{v.items()[0].text(), v.items()[1].text(),
                    v.items()[2].text(), v.items()[3].as_u64()};
}

WireValue AdversaryAction::to_wire() const {
  return WireValue::record(
      codec::kRecAdversaryAction,
      {WireValue::str(action), WireValue::from_u64(seq), WireValue::str(detail),
       WireValue::from_u64(time)});
}

AdversaryAction AdversaryAction::from_wire(const WireValue& v) {
  if (v.record_tag() != codec::kRecAdversaryAction || v.items().size() != 4) {
    throw codec::CodecError(codec::CodecError::Kind::Malformed,
                            "bad adversary action record");
  }
  return AdversaryAction{v.items()[0].text(), v.items()[1].as_u64(),
                         v.items()[2].text(), v.items()[3].as_u64()};
}

WireValue BusMessage::to_wire() const {
  return WireValue::record(
      codec::kRecBusMessage,
      {WireValue::from_u64(seq), WireValue::str(from), WireValue::str(to),
       WireValue::bytes(payload), WireValue::from_u64(time)});
}

BusMessage BusMessage::from_wire(const WireValue& v) {
  if (v.record_tag() != codec::kRecBusMessage || v.items().size() != 5) {
    throw codec::CodecError(codec::CodecError::Kind::Malformed,
                            "bad bus message record");
  }
  BusMessage m;
  m.seq = v.items()[0].as_u64();
  m.from = v.items()[1].text();
  m.to = v.items()[2].text();
  m.payload = v.items()[3].data();
  m.time = v.items()[4].as_u64();
  return m;
}

void Trace::add_event(TraceEvent e) {
  records_.push_back(e.to_wire());
  events_.push_back(std::move(e));
}

void Trace::add_error(ActorError e) {
  records_.push_back(e.to_wire());
  errors_.push_back(std::move(e));
}

void Trace::add_action(AdversaryAction a) {
  records_.push_back(a.to_wire());
  actions_.push_back(std::move(a));
}

void Trace::add_message(BusMessage m) {
  records_.push_back(m.to_wire());
  messages_.push_back(std::move(m));
}

bool Trace::has_error(const std::string& actor, const std::string& code) const {
  for (const ActorError& e : errors_) {
    if (e.actor == actor && e.code == code) return true;
  }
  return false;
}

size_t Trace::count_commits(Label label) const {
  size_t n = 0;
  for (const TraceEvent& e : events_) {
    if (e.kind == EventKind::Commit && e.label == label) ++n;
  }
  return n;
}

std::string Trace::export_hex() const {
  std::string out;
  for (const WireValue& r : records_) {
    out += hex_encode(codec::encode(r));
    out += '\n';
  }
  return out;
}

}  // namespace evssi::trace
