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

#include "evssi/harness/adversary.hpp"

#include <algorithm>
#include <utility>

#include "evssi/crypto/contract_auth.hpp"
#include "evssi/crypto/hash.hpp"

namespace evssi::harness {

using actors::RequestProofReq;
using actors::RequestProofRes;
using actors::ValidateContractProofReq;

DolevYaoAdversary::DolevYaoAdversary(crypto::Rng rng, trace::Trace& trace,
                                     size_t max_actions)
    : rng_(std::move(rng)), trace_(trace), budget_(max_actions) {}

void DolevYaoAdversary::restrict_actions(std::vector<std::string> kinds) {
  allowed_ = std::move(kinds);
}

bool DolevYaoAdversary::enabled(const char* kind) const {
  return allowed_.empty() ||
         std::find(allowed_.begin(), allowed_.end(), kind) != allowed_.end();
}

bool DolevYaoAdversary::before_deliver(trace::BusMessage& msg, Bus& bus) {
  history_.push_back({msg.from, msg.to, msg.payload});

  if (taken_ >= budget_ || rng_.below(4) != 0) {
    return true;
  }

  // One draw decides the action; disabled kinds fall through to honest
  // delivery so restricted runs consume the same random stream.
  switch (rng_.below(5)) {
    case 0: {  // drop
      if (!enabled("drop")) break;
      ++taken_;
      trace_.add_action({"drop", msg.seq, msg.from + "->" + msg.to,
                         bus.now()});
      return false;
    }
    case 1: {  // replay an observed frame verbatim
      if (!enabled("replay")) break;
      ++taken_;
      const Seen& pick = history_[rng_.below(history_.size())];
      trace_.add_action({"replay", msg.seq, pick.from + "->" + pick.to,
                         bus.now()});
      bus.post_raw(pick.from, pick.to, pick.payload);
      break;
    }
    case 2: {  // reorder: requeue this frame behind everything pending
      if (!enabled("reorder")) break;
      ++taken_;
      trace_.add_action({"reorder", msg.seq, msg.from + "->" + msg.to,
                         bus.now()});
      bus.post_raw(msg.from, msg.to, msg.payload);
      return false;
    }
    case 3: {  // inject: garbage or a mangled copy, spoofed origin
      if (!enabled("inject")) break;
      ++taken_;
      const std::vector<std::string>& names = bus.actor_names();
      const std::string& to = names[rng_.below(names.size())];
      const std::string& from = names[rng_.below(names.size())];
      Bytes payload;
      if (history_.empty() || rng_.below(2) == 0) {
        payload = rng_.bytes(1 + rng_.below(64));
      } else {
        payload = history_[rng_.below(history_.size())].payload;
        payload[rng_.below(payload.size())] ^=
            static_cast<uint8_t>(1 + rng_.below(255));
      }
      trace_.add_action({"inject", msg.seq, from + "->" + to, bus.now()});
      bus.post_raw(from, to, std::move(payload));
      break;
    }
    case 4: {  // modify the frame in flight
      if (!enabled("modify")) break;
      ++taken_;
      if (!msg.payload.empty()) {
        msg.payload[rng_.below(msg.payload.size())] ^=
            static_cast<uint8_t>(1 + rng_.below(255));
      }
      trace_.add_action({"modify", msg.seq, msg.from + "->" + msg.to,
                         bus.now()});
      break;
    }
  }
  return true;
}

ShadowChargeAdversary::ShadowChargeAdversary(
    actors::EvWallet::RevealedState stolen, crypto::CryptoBackend& backend,
    crypto::Rng rng, trace::Trace& trace, std::string victim,
    std::string charge_point)
    : stolen_(std::move(stolen)),
      backend_(backend),
      rng_(std::move(rng)),
      trace_(trace),
      victim_(std::move(victim)),
      charge_point_(std::move(charge_point)) {}

void ShadowChargeAdversary::arm(Bus& bus) {
  client_ref_ = rng_.bytes(crypto::kNonceSize);

  RequestProofReq req;
  req.client_ref = client_ref_;
  req.witness_from_version = stolen_.credential->cred.witness_version;

  codec::MessageEnvelope env;
  env.msg_type = codec::kMsgRequestProofReq;
  env.sender_hint = victim_;
  env.payload = req.to_wire();

  trace_.add_action({"inject", 0, "spoofed session opener as " + victim_,
                     bus.now()});
  bus.post_raw(victim_, charge_point_, codec::encode_envelope(env));
}

bool ShadowChargeAdversary::before_deliver(trace::BusMessage& msg, Bus& bus) {
  if (presented_ || msg.to != victim_) {
    return true;
  }
  codec::MessageEnvelope env;
  try {
    env = codec::decode_envelope(msg.payload);
  } catch (const codec::CodecError&) {
    return true;
  }
  if (env.msg_type != codec::kMsgRequestProofRes) {
    return true;
  }
  RequestProofRes res = RequestProofRes::from_wire(env.payload);
  if (res.client_ref != client_ref_) {
    return true;
  }

  // Answer in the victim's place with the stolen wallet.
  actors::EvWallet::StoredCredential& cred = *stolen_.credential;
  crypto::ProofRequest request = crypto::ProofRequest::from_wire(res.request);

  std::vector<crypto::RegistryDelta> deltas;
  for (const codec::WireValue& d : res.deltas) {
    deltas.push_back(crypto::registry_delta_from_wire(d));
  }
  backend_.witness_update(cred.reg_params, cred.cred, deltas, res.acc,
                          res.registry_version);
  crypto::Presentation pres = backend_.create_presentation(
      rng_, cred.issuer_pub, cred.reg_params, res.acc, cred.cred, request);

  Bytes request_bytes = codec::encode(res.request);
  Bytes request_hash = crypto::sha256(request_bytes);
  Bytes auth_blob = crypto::make_contract_auth(
      cred.cred.contract_key, cred.cred.contract_id, request_hash, bus.now(),
      cred.emsp_enc_pk, rng_);

  ValidateContractProofReq present;
  present.session_id = res.session_id;
  present.presentation = pres.to_wire();
  present.auth_blob = std::move(auth_blob);

  codec::MessageEnvelope out;
  out.msg_type = codec::kMsgValidateContractProofReq;
  out.sender_hint = victim_;
  out.payload = present.to_wire();

  presented_ = true;
  trace_.add_action({"inject", msg.seq,
                     "stolen-credential presentation as " + victim_,
                     bus.now()});
  bus.post_raw(victim_, charge_point_, codec::encode_envelope(out));
  return false;  // the victim never sees the intercepted proof request
}

}  // namespace evssi::harness
