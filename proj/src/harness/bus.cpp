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

#include "evssi/harness/bus.hpp"

#include <chrono>
#include <utility>

#include "evssi/harness/adversary.hpp"

namespace evssi::harness {

Bus::Bus(trace::Trace& trace, uint64_t base_time)
    : trace_(trace), base_time_(base_time) {}

void Bus::attach(actors::Actor& actor) {
  auto [it, inserted] = actors_.emplace(actor.name(), &actor);
  if (inserted) {
    names_.push_back(actor.name());
  }
}

void Bus::set_adversary(Adversary* adversary) { adversary_ = adversary; }

void Bus::send(const std::string& from, const std::string& to,
               uint16_t msg_type, codec::WireValue payload) {
  codec::MessageEnvelope env;
  env.msg_type = msg_type;
  env.sender_hint = from;
  env.payload = std::move(payload);

  trace::BusMessage msg;
  msg.seq = next_seq_++;
  msg.from = from;
  msg.to = to;
  msg.payload = codec::encode_envelope(env);
  queue_.push_back(std::move(msg));
}

void Bus::post_raw(std::string from, std::string to, Bytes payload) {
  trace::BusMessage msg;
  msg.seq = next_seq_++;
  msg.from = std::move(from);
  msg.to = std::move(to);
  msg.payload = std::move(payload);
  queue_.push_back(std::move(msg));
}

actors::Actor* Bus::actor_by_name(const std::string& name) {
  auto it = actors_.find(name);
  return it == actors_.end() ? nullptr : it->second;
}

size_t Bus::run(size_t max_deliveries) {
  size_t delivered_here = 0;
  while (!queue_.empty()) {
    if (delivered_here >= max_deliveries) {
      trace_.add_error({"bus", "DeliveryBudgetExceeded",
                        "stopped after " + std::to_string(delivered_here) +
                            " deliveries with traffic still queued",
                        now()});
      break;
    }
    trace::BusMessage msg = std::move(queue_.front());
    queue_.pop_front();

    if (adversary_ != nullptr && !adversary_->before_deliver(msg, *this)) {
      continue;  // withheld from the receiver; the adversary logged why
    }

    ++delivered_;  // this delivery's tick; the handler acts at this time
    ++delivered_here;
    msg.time = now();
    trace_.add_message(msg);

    actors::Actor* receiver = actor_by_name(msg.to);
    if (receiver == nullptr) {
      trace_.add_error(
          {"bus", "UnroutableMessage", "no actor named " + msg.to, now()});
      continue;
    }
    BusContext ctx(*this, receiver->name());
    auto start = std::chrono::steady_clock::now();
    receiver->deliver(msg, ctx);
    if (hook_) {
      std::chrono::duration<double, std::milli> elapsed =
          std::chrono::steady_clock::now() - start;
      hook_(msg, elapsed.count());
    }
  }
  return delivered_here;
}

}  // namespace evssi::harness
