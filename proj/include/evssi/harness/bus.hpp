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

#include <deque>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "evssi/actors/actor.hpp"
#include "evssi/actors/trace.hpp"

namespace evssi::harness {

class Adversary;

// A single-queue network: every frame an actor sends is appended, every
// delivery pops the front, and the adversary (when present) gets the last
// word on each frame before its receiver does. Time is logical — one tick
// per delivery — so identical runs produce identical traces down to the
// timestamp.
class Bus {
 public:
  explicit Bus(trace::Trace& trace, uint64_t base_time = 1'700'000'000);

  void attach(actors::Actor& actor);
  void set_adversary(Adversary* adversary);  // borrowed, may be nullptr

  uint64_t now() const { return base_time_ + delivered_; }

  // Ordinary actor output: wrap in an envelope attributed to `from`.
  void send(const std::string& from, const std::string& to, uint16_t msg_type,
            codec::WireValue payload);
  // Adversary output: enqueue a frame exactly as given (fresh seq).
  void post_raw(std::string from, std::string to, Bytes payload);

  // Drives an actor's out-of-band operation (a runner step, not a
  // delivery) under a context attributed to that actor.
  template <typename Fn>
  void with_context(actors::Actor& actor, Fn&& fn);

  // Delivers queued frames until quiet or the budget runs out; returns
  // the number delivered. Exceeding the budget leaves an error record in
  // the trace, as a message storm is a finding, not a crash.
  size_t run(size_t max_deliveries = 10'000);

  bool idle() const { return queue_.empty(); }
  const std::vector<std::string>& actor_names() const { return names_; }
  actors::Actor* actor_by_name(const std::string& name);

  // Benchmark tap: receiver-side handler wall time per delivered frame.
  using DeliveryHook =
      std::function<void(const trace::BusMessage&, double elapsed_ms)>;
  void set_delivery_hook(DeliveryHook hook) { hook_ = std::move(hook); }

 private:
  friend class BusContext;

  trace::Trace& trace_;
  uint64_t base_time_;
  uint64_t delivered_ = 0;
  uint64_t next_seq_ = 1;
  std::deque<trace::BusMessage> queue_;
  std::map<std::string, actors::Actor*> actors_;
  std::vector<std::string> names_;
  Adversary* adversary_ = nullptr;
  DeliveryHook hook_;
};

// The context every handler runs under: sends go back to the bus queue,
// events and errors go to the trace, and the clock is the bus clock.
class BusContext final : public actors::Context {
 public:
  BusContext(Bus& bus, std::string self)
      : bus_(bus), self_(std::move(self)) {}

  void send(const std::string& to, uint16_t msg_type,
            codec::WireValue payload) override {
    bus_.send(self_, to, msg_type, std::move(payload));
  }
  void emit(trace::EventKind kind, trace::Label label, const std::string& peer,
            Bytes ds) override {
    bus_.trace_.add_event(
        {kind, self_, peer, label, std::move(ds), bus_.now()});
  }
  void error(const std::string& code, const std::string& detail) override {
    bus_.trace_.add_error({self_, code, detail, bus_.now()});
  }
  uint64_t now() const override { return bus_.now(); }

 private:
  Bus& bus_;
  std::string self_;
};

template <typename Fn>
void Bus::with_context(actors::Actor& actor, Fn&& fn) {
  BusContext ctx(*this, actor.name());
  std::forward<Fn>(fn)(ctx);
}

}  // namespace evssi::harness
