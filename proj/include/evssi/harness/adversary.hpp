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

#include <optional>
#include <string>
#include <vector>

#include "evssi/actors/ev_wallet.hpp"
#include "evssi/actors/trace.hpp"
#include "evssi/crypto/backend.hpp"
#include "evssi/crypto/rng.hpp"
#include "evssi/harness/bus.hpp"

namespace evssi::harness {

// Sits between the queue and every receiver. It sees each frame before
// delivery, may withhold it, and may enqueue frames of its own — but it
// only ever works with bytes it has observed or invented. Secrets it was
// not explicitly handed stay out of reach.
class Adversary {
 public:
  virtual ~Adversary() = default;

  // Return false to withhold the frame from its receiver. The frame is
  // mutable: tampering in place is delivery of a modified frame.
  virtual bool before_deliver(trace::BusMessage& msg, Bus& bus) = 0;
};

// Observes and forwards everything.
class PassiveAdversary final : public Adversary {
 public:
  bool before_deliver(trace::BusMessage&, Bus&) override { return true; }
};

// A seeded message-level attacker with the classic repertoire: drop,
// replay, reorder, inject, modify. Every action is logged to the trace,
// and the schedule is a pure function of the seed, so a run under attack
// is as reproducible as an honest one.
class DolevYaoAdversary final : public Adversary {
 public:
  DolevYaoAdversary(crypto::Rng rng, trace::Trace& trace,
                    size_t max_actions = 8);

  // Restrict the repertoire (e.g. {"replay"} for the differential check).
  void restrict_actions(std::vector<std::string> kinds);

  bool before_deliver(trace::BusMessage& msg, Bus& bus) override;

  size_t actions_taken() const { return taken_; }

 private:
  struct Seen {
    std::string from;
    std::string to;
    Bytes payload;
  };

  bool enabled(const char* kind) const;

  crypto::Rng rng_;
  trace::Trace& trace_;
  size_t budget_;
  size_t taken_ = 0;
  std::vector<std::string> allowed_;  // empty = all
  std::vector<Seen> history_;
};

// The key-compromise fixture: armed with one vehicle's revealed wallet, it
// opens a charging session in that vehicle's name, intercepts the charge
// point's proof request, and answers with a presentation built from the
// stolen credential. The trace then carries an authorization commit for a
// vehicle that never ran the protocol — exactly what the agreement
// checker's reveal clause has to excuse, and its absence has to flag.
class ShadowChargeAdversary final : public Adversary {
 public:
  ShadowChargeAdversary(actors::EvWallet::RevealedState stolen,
                        crypto::CryptoBackend& backend, crypto::Rng rng,
                        trace::Trace& trace, std::string victim,
                        std::string charge_point);

  // Posts the spoofed session opener; call once before running the bus.
  void arm(Bus& bus);

  bool before_deliver(trace::BusMessage& msg, Bus& bus) override;

  bool presented() const { return presented_; }

 private:
  actors::EvWallet::RevealedState stolen_;
  crypto::CryptoBackend& backend_;
  crypto::Rng rng_;
  trace::Trace& trace_;
  std::string victim_;
  std::string charge_point_;
  Bytes client_ref_;
  bool presented_ = false;
};

}  // namespace evssi::harness
