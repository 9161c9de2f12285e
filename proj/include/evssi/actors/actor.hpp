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

#include <stdexcept>
#include <string>

#include "evssi/actors/messages.hpp"
#include "evssi/actors/trace.hpp"
#include "evssi/codec.hpp"
#include "evssi/ledger.hpp"

namespace evssi::actors {

// The actor layer reads and writes the shared registry under its own
// names; every role deals in these types.
using ledger::CredDef;
using ledger::DidRecord;
using ledger::Ledger;
using ledger::LedgerError;
using ledger::RegistrySnapshot;
using ledger::Role;
using ledger::Schema;

// Services the harness provides to a handler while it processes one
// message: sending further messages (attributed to this actor), emitting
// trace events and errors, and the simulated clock.
class Context {
 public:
  virtual ~Context() = default;

  virtual void send(const std::string& to, uint16_t msg_type,
                    codec::WireValue payload) = 0;
  virtual void emit(trace::EventKind kind, trace::Label label,
                    const std::string& peer, Bytes ds) = 0;
  virtual void error(const std::string& code, const std::string& detail) = 0;
  virtual uint64_t now() const = 0;
};

// Raised by direct (non-bus) actor operations when a precondition fails;
// the scenario runner reports the code as a step failure.
class ActorFault : public std::runtime_error {
 public:
  ActorFault(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// A protocol state machine with a mailbox. deliver() is the only entry
// point the bus uses: it decodes the envelope and shields the bus from
// handler exceptions, so adversarial input can only ever produce an error
// record, never a crash or an unwound bus loop.
class Actor {
 public:
  explicit Actor(std::string name) : name_(std::move(name)) {}
  virtual ~Actor() = default;

  Actor(const Actor&) = delete;
  Actor& operator=(const Actor&) = delete;

  const std::string& name() const { return name_; }

  void deliver(const trace::BusMessage& msg, Context& ctx);

 protected:
  // `from` is the envelope's routing origin — where replies go, never an
  // authenticated identity.
  virtual void on_message(const codec::MessageEnvelope& env,
                          const std::string& from, Context& ctx) = 0;

  // Records the error and answers the sender with an ErrorRes, the
  // uniform rejection path for authenticated-but-invalid requests.
  void reject(Context& ctx, const std::string& to, const std::string& code,
              const std::string& detail);

 private:
  std::string name_;
};

}  // namespace evssi::actors
