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

#include "evssi/actors/cp.hpp"

#include <algorithm>
#include <utility>

#include "evssi/crypto/hash.hpp"

namespace evssi::actors {

using codec::WireValue;

Cp::Cp(std::string name, std::string cpo_actor, std::string location,
       crypto::Rng rng, crypto::CryptoBackend& backend, Ledger& ledger)
    : Actor(std::move(name)),
      cpo_actor_(std::move(cpo_actor)),
      location_(std::move(location)),
      rng_(std::move(rng)),
      backend_(backend),
      ledger_(ledger) {}

void Cp::trust_cred_def(const std::string& cred_def_id,
                        const std::string& registry_id) {
  cred_def_id_ = cred_def_id;
  registry_id_ = registry_id;
}

void Cp::set_meter_reading(uint64_t meter_wh) { meter_wh_ = meter_wh; }

void Cp::set_supported_modes(std::vector<std::string> modes) {
  modes_ = std::move(modes);
}

void Cp::on_message(const codec::MessageEnvelope& env, const std::string& from,
                    Context& ctx) {
  switch (env.msg_type) {
    case codec::kMsgServiceDiscoveryReq:
      handle_discovery(env.payload, from, ctx);
      return;
    case codec::kMsgRequestProofReq:
      handle_proof_req(env.payload, from, ctx);
      return;
    case codec::kMsgValidateContractProofReq:
      handle_validate(env.payload, from, ctx);
      return;
    case codec::kMsgBillingAck:
      handle_billing_ack(env.payload, from, ctx);
      return;
    case codec::kMsgErrorRes:
      return;  // peer diagnostics, already in the trace on their side
    default:
      ctx.error("UnexpectedMessage",
                std::string(codec::tag_name(env.msg_type)) +
                    " is not a charge point message");
  }
}

void Cp::handle_discovery(const WireValue& payload, const std::string& from,
                          Context& ctx) {
  ServiceDiscoveryReq req = ServiceDiscoveryReq::from_wire(payload);
  auto offered = [&req](const char* mode) {
    return std::find(req.modes.begin(), req.modes.end(), mode) !=
           req.modes.end();
  };
  auto supported = [this](const char* mode) {
    return std::find(modes_.begin(), modes_.end(), mode) != modes_.end();
  };

  ServiceDiscoveryRes res;
  res.mode = kModeNone;
  // Strongest mutual mode wins; certificate-based contracts rank above the
  // fallback of paying ad hoc.
  for (const char* mode :
       {kModeContractProof, kModePncPki, kModeExternalPayment}) {
    if (offered(mode) && supported(mode)) {
      res.mode = mode;
      break;
    }
  }
  if (res.mode == kModeNone) {
    ctx.error("NoCommonMode", "no shared authorization mode with " + from);
  }
  ctx.send(from, codec::kMsgServiceDiscoveryRes, res.to_wire());
}

void Cp::handle_proof_req(const WireValue& payload, const std::string& from,
                          Context& ctx) {
  if (cred_def_id_.empty()) {
    reject(ctx, from, "UnknownCredDef",
           "charge point has no trusted credential definition");
    return;
  }
  RequestProofReq req = RequestProofReq::from_wire(payload);
  RegistrySnapshot reg = ledger_.get_registry(registry_id_);

  crypto::ProofRequest request;
  request.nonce = rng_.bytes(crypto::kNonceSize);
  request.reveal = {"emsp_id"};
  request.cred_def_id = cred_def_id_;
  request.registry_id = registry_id_;
  request.registry_version = reg.version;

  Session session;
  session.id = rng_.bytes(16);
  session.ev_actor = from;
  session.request = request.to_wire();
  session.request_bytes = codec::encode(session.request);
  session.acc = reg.acc;
  session.registry_version = reg.version;

  RequestProofRes res;
  res.client_ref = req.client_ref;
  res.session_id = session.id;
  res.request = session.request;
  res.acc = session.acc;
  res.registry_version = reg.version;
  // Relay the registry updates the vehicle has not seen; its witness
  // refresh happens entirely through this channel.
  for (const crypto::RegistryDelta& d :
       ledger_.registry_deltas(registry_id_, req.witness_from_version)) {
    res.deltas.push_back(crypto::registry_delta_to_wire(d));
  }

  sessions_.push_back(std::move(session));
  ctx.send(from, codec::kMsgRequestProofRes, res.to_wire());
}

void Cp::handle_validate(const WireValue& payload, const std::string& from,
                         Context& ctx) {
  ValidateContractProofReq req = ValidateContractProofReq::from_wire(payload);
  Session* session = session_by_id(req.session_id);
  if (session == nullptr) {
    reject(ctx, from, "UnknownSession", "no session under this id");
    return;
  }
  if (session->stage != Stage::AwaitingProof) {
    reject(ctx, from, "SessionConsumed", "session already has a verdict");
    return;
  }

  ValidateContractProofRes res;
  res.session_id = session->id;

  crypto::ProofRequest request =
      crypto::ProofRequest::from_wire(session->request);
  bool valid = false;
  std::string emsp_id;
  try {
    crypto::Presentation pres =
        crypto::Presentation::from_wire(req.presentation);
    CredDef def = ledger_.get_cred_def(cred_def_id_);
    RegistrySnapshot reg = ledger_.get_registry(registry_id_);
    valid = backend_.verify_presentation(def.pub, reg.params, session->acc,
                                         pres, request);
    if (valid) {
      for (const auto& [name, value] : pres.revealed) {
        if (name == "emsp_id") emsp_id = value;
      }
      if (emsp_id.empty()) valid = false;
      if (valid) {
        Bytes ds = crypto::sha256(session->request_bytes);
        append(ds, crypto::sha256(codec::encode(pres.to_wire())));
        session->stage = Stage::Authorized;
        session->emsp_id = emsp_id;
        session->auth_blob = req.auth_blob;
        session->request_hash = crypto::sha256(session->request_bytes);
        session->meter_wh = meter_wh_;
        session->location = location_;
        ctx.emit(trace::EventKind::Commit, trace::Label::ChargeAuth, from,
                 std::move(ds));
      }
    }
  } catch (const crypto::CryptoError&) {
    valid = false;  // adversarial presentation material, not a fault
  } catch (const codec::CodecError&) {
    valid = false;
  }

  if (!valid) {
    session->stage = Stage::Rejected;
    ctx.error("ProofInvalid", "presentation rejected for session");
    res.status = kStatusRejected;
  } else {
    res.status = kStatusAuthorized;
  }
  ctx.send(from, codec::kMsgValidateContractProofRes, res.to_wire());
}

void Cp::begin_billing(Context& ctx) {
  auto it = std::find_if(sessions_.rbegin(), sessions_.rend(),
                         [](const Session& s) {
                           return s.stage == Stage::Authorized;
                         });
  if (it == sessions_.rend()) {
    throw ActorFault("NoAuthorizedSession", "nothing to bill");
  }
  it->stage = Stage::BillingPending;

  BillingForwardReq req;
  req.session_id = it->id;
  req.meter_wh = it->meter_wh;
  req.emsp_id = it->emsp_id;
  req.request_hash = it->request_hash;
  req.auth_blob = it->auth_blob;
  req.location = {it->location};
  ctx.send(cpo_actor_, codec::kMsgBillingForwardReq, req.to_wire());
}

void Cp::handle_billing_ack(const WireValue& payload, const std::string& from,
                            Context& ctx) {
  if (from != cpo_actor_) {
    ctx.error("UnexpectedMessage", "billing ack from " + from);
    return;
  }
  BillingAck ack = BillingAck::from_wire(payload);
  Session* session = session_by_id(ack.session_id);
  if (session == nullptr || session->stage != Stage::BillingPending) {
    ctx.error("UnknownSession", "ack for a session not awaiting billing");
    return;
  }
  if (ack.accepted) {
    session->stage = Stage::Billed;
    return;
  }
  session->stage = Stage::Authorized;  // eligible for another attempt
  ctx.error("BillingRejected", ack.detail);
}

Cp::Session* Cp::session_by_id(const Bytes& id) {
  for (Session& s : sessions_) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

std::optional<Cp::Stage> Cp::latest_stage() const {
  if (sessions_.empty()) return std::nullopt;
  return sessions_.back().stage;
}

}  // namespace evssi::actors
