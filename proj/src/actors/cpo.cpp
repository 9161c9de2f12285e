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

#include "evssi/actors/cpo.hpp"

#include <utility>

namespace evssi::actors {

using codec::WireValue;

Cpo::Cpo(std::string name) : Actor(std::move(name)) {}

void Cpo::add_emsp_route(const std::string& emsp_id, const std::string& actor) {
  emsp_routes_[emsp_id] = actor;
}

void Cpo::add_charge_point(const std::string& actor) {
  charge_points_.insert(actor);
}

void Cpo::on_message(const codec::MessageEnvelope& env, const std::string& from,
                     Context& ctx) {
  switch (env.msg_type) {
    case codec::kMsgBillingForwardReq:
      handle_forward(env.payload, from, ctx);
      return;
    case codec::kMsgBillingAck:
      handle_ack(env.payload, from, ctx);
      return;
    case codec::kMsgErrorRes:
      return;  // peer diagnostics, already in the trace on their side
    default:
      ctx.error("UnexpectedMessage",
                std::string(codec::tag_name(env.msg_type)) +
                    " is not an operator message");
  }
}

void Cpo::handle_forward(const WireValue& payload, const std::string& from,
                         Context& ctx) {
  BillingForwardReq req = BillingForwardReq::from_wire(payload);
  if (!charge_points_.contains(from)) {
    ctx.error("UnknownChargePoint", "billing record from " + from);
    return;
  }
  auto route = emsp_routes_.find(req.emsp_id);
  if (route == emsp_routes_.end()) {
    ctx.error("UnknownEmsp", "no clearing route for " + req.emsp_id);
    BillingAck nack;
    nack.session_id = req.session_id;
    nack.detail = "UnknownEmsp";
    ctx.send(from, codec::kMsgBillingAck, nack.to_wire());
    return;
  }
  // The provider settles against the contract, not the place; drop the
  // geography before the record leaves the operator's domain.
  req.location.clear();
  pending_[req.session_id] = from;
  ctx.send(route->second, codec::kMsgBillingForwardReq, req.to_wire());
}

void Cpo::handle_ack(const WireValue& payload, const std::string& from,
                     Context& ctx) {
  BillingAck ack = BillingAck::from_wire(payload);
  auto pending = pending_.find(ack.session_id);
  if (pending == pending_.end()) {
    ctx.error("UnknownSession", "ack for a session this operator never sent");
    return;
  }
  std::string cp = pending->second;
  pending_.erase(pending);
  ctx.send(cp, codec::kMsgBillingAck, ack.to_wire());
}

}  // namespace evssi::actors
