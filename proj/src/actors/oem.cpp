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

#include "evssi/actors/oem.hpp"

#include <utility>

#include "evssi/crypto/hash.hpp"
#include "evssi/ledger.hpp"

namespace evssi::actors {

using codec::WireValue;

Oem::Oem(std::string name, crypto::DidKeys verinym_keys, Bytes onboarding_key,
         StewardRef steward, crypto::Rng rng)
    : Actor(std::move(name)),
      keys_(std::move(verinym_keys)),
      onboarding_key_(std::move(onboarding_key)),
      steward_(std::move(steward)),
      rng_(std::move(rng)) {}

void Oem::pair_vehicle(const std::string& ev_actor, Bytes pairing_key) {
  pairing_keys_[ev_actor] = std::move(pairing_key);
}

void Oem::begin_onboarding(Context& ctx) {
  DidRecord record;
  record.did = keys_.did;
  record.role = Role::Verinym;
  record.sig_pk = keys_.sig_pk;
  record.enc_pk = keys_.enc_pk;
  record.alias = name();

  WriteVerinymReq req;
  req.did_record = record.to_wire();
  req.nonce = rng_.bytes(crypto::kNonceSize);
  req.pop_sig = crypto::sign(keys_.sig_sk, req.pop_bytes());
  req.mac = crypto::hmac_sha256(onboarding_key_, req.mac_bytes());

  pending_onboard_record_ = codec::encode(req.did_record);
  pending_onboard_nonce_ = req.nonce;
  ctx.emit(trace::EventKind::Running, trace::Label::StewardVerinym,
           steward_.actor, pending_onboard_record_);
  ctx.send(steward_.actor, codec::kMsgWriteVerinymReq, req.to_wire());
}

void Oem::on_message(const codec::MessageEnvelope& env, const std::string& from,
                     Context& ctx) {
  switch (env.msg_type) {
    case codec::kMsgInitNymReq:
      handle_init_nym(env.payload, from, ctx);
      return;
    case codec::kMsgWriteVerinymRes:
      handle_onboard_res(env.payload, ctx);
      return;
    case codec::kMsgErrorRes:
      return;
    default:
      ctx.error("UnexpectedMessage", "not an OEM message");
  }
}

void Oem::handle_init_nym(const WireValue& payload, const std::string& from,
                          Context& ctx) {
  InitNymReq req = InitNymReq::from_wire(payload);

  auto key = pairing_keys_.find(from);
  if (key == pairing_keys_.end()) {
    reject(ctx, from, "AuthFailed", "no pairing key for " + from);
    return;
  }
  if (!crypto::hmac_verify(key->second, req.auth_bytes(), req.tag)) {
    reject(ctx, from, "AuthFailed", "pairing tag rejected");
    return;
  }

  InitNymInner inner;
  inner.steward_did = steward_.did;
  inner.nonce_ev = req.nonce_ev;
  inner.nonce_st = rng_.bytes(crypto::kNonceSize);
  inner.oem_did = keys_.did;
  inner.endorsement_sig = crypto::sign(
      keys_.sig_sk, endorsement_bytes(steward_.did, inner.nonce_ev,
                                      inner.nonce_st, inner.oem_did));

  InitNymRes res;
  res.blob = crypto::pk_encrypt(req.transport_pk,
                                codec::encode(inner.to_wire()), rng_);
  ctx.send(from, codec::kMsgInitNymRes, res.to_wire());
}

void Oem::handle_onboard_res(const WireValue& payload, Context& ctx) {
  if (pending_onboard_nonce_.empty()) {
    ctx.error("UnexpectedMessage", "no onboarding in progress");
    return;
  }
  WriteVerinymRes res = WriteVerinymRes::from_wire(payload);
  Bytes expected = verinym_res_sig_bytes(
      pending_onboard_record_, pending_onboard_nonce_, res.ledger_version);
  if (!crypto::verify_sig(steward_.sig_pk, expected, res.steward_sig)) {
    ctx.error("BadSignature", "steward onboarding receipt rejected");
    return;
  }
  pending_onboard_nonce_.clear();
  onboarded_ = true;
}

}  // namespace evssi::actors
