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
#include <set>
#include <string>

#include "evssi/actors/actor.hpp"

namespace evssi::actors {

// The charge point operator: routes billing records from its charge
// points to the providers' clearing endpoints and relays the verdicts
// back. It strips the charge point location before forwarding, so the
// provider's view of a session carries no geography.
class Cpo : public Actor {
 public:
  explicit Cpo(std::string name);

  void add_emsp_route(const std::string& emsp_id, const std::string& actor);
  void add_charge_point(const std::string& actor);

 protected:
  void on_message(const codec::MessageEnvelope& env, const std::string& from,
                  Context& ctx) override;

 private:
  void handle_forward(const codec::WireValue& payload, const std::string& from,
                      Context& ctx);
  void handle_ack(const codec::WireValue& payload, const std::string& from,
                  Context& ctx);

  std::map<std::string, std::string> emsp_routes_;  // emsp_id -> bus name
  std::set<std::string> charge_points_;
  std::map<Bytes, std::string> pending_;  // session id -> charge point
};

}  // namespace evssi::actors
