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

#include "evssi/actors/steward.hpp"

#include <utility>

#include "evssi/crypto/hash.hpp"

namespace evssi::actors {

using codec::WireValue;

Steward::Steward(std::string name, crypto::DidKeys keys, Ledger& ledger)
    : Actor(std::move(name)), keys_(std::move(keys)), ledger_(ledger) {}

void Steward::add_onboarding_key(const std::string& alias, Bytes key) {
  onboarding_keys_[alias] = std::move(key);
}

void Steward::on_message(const codec::MessageEnvelope& env,
                         const std::string& from, Context& ctx) {
  switch (env.msg_type) {
    case codec::kMsgWriteVerinymReq:
      handle_write_verinym(env.payload, from, ctx);
      return;
    case codec::kMsgRegisterProvisioningDid:
      handle_register_prov(env.payload, from, ctx);
      return;
    case codec::kMsgErrorRes:
      return;  // peer diagnostics, already in the trace on their side
    default:
      ctx.error("UnexpectedMessage",
                std::string(codec::tag_name(env.msg_type)
                                ? codec::tag_name(env.msg_type)
                                : "unknown") +
                    " is not a steward message");
  }
}

void Steward::handle_write_verinym(const WireValue& payload,
                                   const std::string& from, Context& ctx) {
  WriteVerinymReq req = WriteVerinymReq::from_wire(payload);
  DidRecord record = DidRecord::from_wire(req.did_record);

  if (record.role != Role::Verinym) {
    reject(ctx, from, "AuthFailed", "onboarding requires a verinym record");
    return;
  }
  auto key = onboarding_keys_.find(record.alias);
  if (key == onboarding_keys_.end()) {
    reject(ctx, from, "AuthFailed", "no onboarding key for " + record.alias);
    return;
  }
  if (!crypto::hmac_verify(key->second, req.mac_bytes(), req.mac)) {
    reject(ctx, from, "AuthFailed", "onboarding mac rejected");
    return;
  }
  if (!crypto::verify_sig(record.sig_pk, req.pop_bytes(), req.pop_sig)) {
    reject(ctx, from, "PopFailed", "verinym key possession proof rejected");
    return;
  }
  if (!seen_verinym_nonces_.insert(req.nonce).second) {
    reject(ctx, from, "AuthFailed", "onboarding nonce replayed");
    return;
  }

  uint64_t version = ledger_.write_did(keys_.did, record);
  Bytes record_bytes = codec::encode(req.did_record);
  ctx.emit(trace::EventKind::Commit, trace::Label::StewardVerinym, from,
           record_bytes);

  WriteVerinymRes res;
  res.did = record.did;
  res.ledger_version = version;
  res.steward_sig = crypto::sign(
      keys_.sig_sk, verinym_res_sig_bytes(record_bytes, req.nonce, version));
  ctx.send(from, codec::kMsgWriteVerinymRes, res.to_wire());
}

void Steward::handle_register_prov(const WireValue& payload,
                                   const std::string& from, Context& ctx) {
  RegisterProvisioningDid req = RegisterProvisioningDid::from_wire(payload);

  auto plain = crypto::pk_decrypt(keys_.enc_sk, req.blob);
  if (!plain) {
    reject(ctx, from, "DecryptFailed", "provisioning blob rejected");
    return;
  }
  ProvRegisterInner inner = ProvRegisterInner::from_wire(codec::decode(*plain));
  DidRecord record = DidRecord::from_wire(inner.did_record);

  if (record.role != Role::Client) {
    reject(ctx, from, "BadSignature", "provisioning record must be a client");
    return;
  }
  if (ledger_.role_of(inner.oem_did) != Role::Verinym) {
    reject(ctx, from, "UnknownTrustAnchor",
           "endorsing DID is not an onboarded trust anchor");
    return;
  }
  DidRecord oem = ledger_.get_did(inner.oem_did);
  Bytes endorsed = endorsement_bytes(keys_.did, inner.nonce_ev, inner.nonce_st,
                                     inner.oem_did);
  if (!crypto::verify_sig(oem.sig_pk, endorsed, inner.endorsement_sig)) {
    reject(ctx, from, "BadSignature", "trust-anchor endorsement rejected");
    return;
  }
  if (!crypto::verify_sig(record.sig_pk, inner.signing_bytes(), inner.pop_sig)) {
    reject(ctx, from, "PopFailed",
           "provisioning key possession proof rejected");
    return;
  }
  if (!seen_prov_nonces_.insert(inner.nonce_st).second) {
    reject(ctx, from, "NonceMismatch", "provisioning nonce replayed");
    return;
  }

  ledger_.write_did(keys_.did, record);

  Bytes ds = codec::encode(inner.did_record);
  append(ds, inner.nonce_ev);
  append(ds, inner.nonce_st);
  ctx.emit(trace::EventKind::Commit, trace::Label::ProvDid, from, ds);
}

}  // namespace evssi::actors
