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

#include "evssi/actors/actor.hpp"

#include "evssi/crypto/backend.hpp"
#include "evssi/ledger.hpp"

namespace evssi::actors {

void Actor::deliver(const trace::BusMessage& msg, Context& ctx) {
  codec::MessageEnvelope env;
  try {
    env = codec::decode_envelope(msg.payload);
  } catch (const codec::CodecError& e) {
    ctx.error("MalformedMessage", e.what());
    return;
  }
  try {
    on_message(env, msg.from, ctx);
  } catch (const codec::CodecError& e) {
    // A structurally valid envelope whose payload or sealed interior does
    // not parse: adversarial input, recorded and dropped.
    ctx.error("MalformedMessage", e.what());
  } catch (const crypto::CryptoError& e) {
    ctx.error("CryptoRejected", e.what());
  } catch (const LedgerError& e) {
    ctx.error("LedgerRejected", e.what());
  }
}

void Actor::reject(Context& ctx, const std::string& to, const std::string& code,
                   const std::string& detail) {
  ctx.error(code, detail);
  ctx.send(to, codec::kMsgErrorRes, ErrorRes{code, detail}.to_wire());
}

}  // namespace evssi::actors
