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

#include "evssi/actors/emsp.hpp"

#include <algorithm>
#include <utility>

#include "evssi/crypto/hash.hpp"

namespace evssi::actors {

using codec::WireValue;

Emsp::Emsp(std::string name, std::string alias, crypto::DidKeys verinym_keys,
           Bytes onboarding_key, StewardRef steward, crypto::Rng rng,
           crypto::CryptoBackend& backend, Ledger& ledger)
    : Actor(std::move(name)),
      alias_(std::move(alias)),
      keys_(std::move(verinym_keys)),
      onboarding_key_(std::move(onboarding_key)),
      steward_(std::move(steward)),
      rng_(std::move(rng)),
      backend_(backend),
      ledger_(ledger) {}

void Emsp::on_message(const codec::MessageEnvelope& env,
                      const std::string& from, Context& ctx) {
  switch (env.msg_type) {
    case codec::kMsgWriteVerinymRes:
      handle_onboard_res(env.payload, ctx);
      return;
    case codec::kMsgGetCredOfferReq:
      handle_offer_req(env.payload, from, ctx);
      return;
    case codec::kMsgCreateContractCredentialReq:
      handle_cred_req(env.payload, from, ctx);
      return;
    case codec::kMsgBillingForwardReq:
      handle_billing(env.payload, from, ctx);
      return;
    case codec::kMsgErrorRes:
      return;  // peer diagnostics, already in the trace on their side
    default:
      ctx.error("UnexpectedMessage",
                std::string(codec::tag_name(env.msg_type)) +
                    " is not a provider message");
  }
}

// -- onboarding ---------------------------------------------------------------

void Emsp::begin_onboarding(Context& ctx) {
  DidRecord record;
  record.did = keys_.did;
  record.role = Role::Verinym;
  record.sig_pk = keys_.sig_pk;
  record.enc_pk = keys_.enc_pk;
  record.alias = alias_;  // published emsp_id -> DID mapping

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

void Emsp::handle_onboard_res(const WireValue& payload, Context& ctx) {
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

// -- issuer setup and contract management (direct, no bus) ---------------------

void Emsp::setup_issuer(const std::vector<std::string>& attr_names) {
  if (!onboarded_) {
    throw ActorFault("NotOnboarded", "verinym not yet on the registry");
  }
  issuer_ = backend_.issuer_keygen(rng_, attr_names);

  Schema schema;
  schema.name = "contract-credential";
  schema.version = "1.0";
  schema.attr_names = attr_names;
  schema_id_ = ledger_.publish_schema(keys_.did, schema);

  CredDef def;
  def.schema_id = schema_id_;
  def.issuer_did = keys_.did;
  def.pub = issuer_->pub;
  cred_def_id_ = ledger_.publish_cred_def(keys_.did, def);

  crypto::RegistryInit reg = backend_.registry_init(rng_, *issuer_);
  registry_id_ =
      ledger_.publish_registry(keys_.did, cred_def_id_, reg.params, reg.acc);
}

Bytes Emsp::register_contract(const std::string& prov_did,
                              crypto::AttributeList attrs) {
  if (!issuer_) {
    throw ActorFault("NotOnboarded", "issuer material not published");
  }
  try {
    (void)ledger_.get_did(prov_did);
  } catch (const LedgerError&) {
    throw ActorFault("UnknownDid", prov_did + " is not on the registry");
  }

  // The provider identity attribute is not negotiable.
  auto emsp_id = std::find_if(attrs.begin(), attrs.end(), [](const auto& a) {
    return a.first == "emsp_id";
  });
  if (emsp_id == attrs.end()) {
    attrs.emplace_back("emsp_id", alias_);
  } else {
    emsp_id->second = alias_;
  }

  // Issue in schema order; reject contracts that do not fill the schema.
  crypto::AttributeList ordered;
  for (const std::string& name : issuer_->attr_names) {
    auto it = std::find_if(attrs.begin(), attrs.end(), [&name](const auto& a) {
      return a.first == name;
    });
    if (it == attrs.end()) {
      throw ActorFault("SchemaMismatch", "contract lacks attribute " + name);
    }
    ordered.emplace_back(*it);
  }
  if (ordered.size() != attrs.size()) {
    throw ActorFault("SchemaMismatch", "contract has attributes off schema");
  }

  Contract contract;
  contract.contract_id = rng_.bytes(16);
  contract.contract_key = rng_.bytes(32);
  contract.prov_did = prov_did;
  contract.attrs = std::move(ordered);
  Bytes id = contract.contract_id;
  contracts_.push_back(std::move(contract));
  return id;
}

void Emsp::revoke_by_prov(const std::string& prov_did) {
  auto it = std::find_if(
      contracts_.begin(), contracts_.end(),
      [&prov_did](const Contract& c) { return c.prov_did == prov_did; });
  if (it == contracts_.end()) {
    throw ActorFault("UnknownContract", "no contract for " + prov_did);
  }
  if (it->status == ContractStatus::Revoked) {
    throw ActorFault("AlreadyRevoked", "contract already revoked");
  }
  if (it->added_version == 0) {
    throw ActorFault("NotIssued", "no credential issued under this contract");
  }

  RegistrySnapshot reg = ledger_.get_registry(registry_id_);
  crypto::RegistryDelta delta;
  delta.version = reg.version + 1;
  delta.op = crypto::RegistryDelta::Op::Remove;
  delta.element = it->rev_element;
  delta.acc_after =
      backend_.acc_revoke(*issuer_, reg.params, reg.acc, it->rev_element);
  ledger_.update_accumulator(keys_.did, registry_id_, delta);
  it->status = ContractStatus::Revoked;
}

Emsp::Contract* Emsp::active_contract_by_prov(const std::string& prov_did) {
  for (Contract& c : contracts_) {
    if (c.prov_did == prov_did && c.status == ContractStatus::Active) {
      return &c;
    }
  }
  return nullptr;
}

std::optional<Bytes> Emsp::contract_id_for(const std::string& prov_did) const {
  for (const Contract& c : contracts_) {
    if (c.prov_did == prov_did) return c.contract_id;
  }
  return std::nullopt;
}

std::optional<crypto::AttributeList> Emsp::contract_attrs_for(
    const std::string& prov_did) const {
  for (const Contract& c : contracts_) {
    if (c.prov_did == prov_did) return c.attrs;
  }
  return std::nullopt;
}

// -- credential issuance ------------------------------------------------------

void Emsp::handle_offer_req(const WireValue& payload, const std::string& from,
                            Context& ctx) {
  if (!issuer_) {
    reject(ctx, from, "NoContract", "issuer material not published");
    return;
  }
  GetCredOfferReq req = GetCredOfferReq::from_wire(payload);
  Contract* contract = active_contract_by_prov(req.prov_did);
  if (contract == nullptr) {
    reject(ctx, from, "NoContract", "no active contract for " + req.prov_did);
    return;
  }
  DidRecord holder;
  try {
    holder = ledger_.get_did(req.prov_did);
  } catch (const LedgerError&) {
    reject(ctx, from, "UnknownDid", req.prov_did + " is not on the registry");
    return;
  }
  Bytes signed_bytes =
      GetCredOfferReq::sig_bytes(req.prov_did, req.req_nonce, keys_.did);
  if (!crypto::verify_sig(holder.sig_pk, signed_bytes, req.sig)) {
    reject(ctx, from, "BadSignature", "offer request signature rejected");
    return;
  }

  CredOffer offer;
  offer.emsp_did = keys_.did;
  offer.offer_nonce = rng_.bytes(crypto::kNonceSize);
  offer.cred_def_id = cred_def_id_;
  offer.registry_id = registry_id_;
  offer.schema_id = schema_id_;
  offer.attrs = contract->attrs;
  offer.req_nonce = req.req_nonce;
  offer.emsp_sig = crypto::sign(keys_.sig_sk, offer.signing_bytes());

  Bytes offer_bytes = codec::encode(offer.to_wire());
  pending_offers_[offer.offer_nonce] =
      PendingOffer{contract->contract_id, offer_bytes};

  GetCredOfferRes res;
  res.blob = crypto::pk_encrypt(holder.enc_pk, offer_bytes, rng_);
  ctx.send(from, codec::kMsgGetCredOfferRes, res.to_wire());
}

void Emsp::handle_cred_req(const WireValue& payload, const std::string& from,
                           Context& ctx) {
  CreateContractCredentialReq req =
      CreateContractCredentialReq::from_wire(payload);
  auto plain = crypto::pk_decrypt(keys_.enc_sk, req.blob);
  if (!plain) {
    reject(ctx, from, "DecryptFailed", "credential request unreadable");
    return;
  }
  CredReqInner inner = CredReqInner::from_wire(codec::decode(*plain));

  auto pending_it = pending_offers_.find(inner.offer_nonce);
  if (pending_it == pending_offers_.end()) {
    reject(ctx, from, "UnknownOffer", "no open offer under this nonce");
    return;
  }
  // One shot per offer, whatever happens next.
  PendingOffer pending = std::move(pending_it->second);
  pending_offers_.erase(pending_it);

  auto contract_it = std::find_if(
      contracts_.begin(), contracts_.end(), [&pending](const Contract& c) {
        return c.contract_id == pending.contract_id;
      });
  if (contract_it == contracts_.end() ||
      contract_it->status != ContractStatus::Active ||
      contract_it->prov_did != inner.prov_did) {
    reject(ctx, from, "NoContract", "offer no longer backed by a contract");
    return;
  }
  Contract& contract = *contract_it;

  DidRecord holder;
  try {
    holder = ledger_.get_did(inner.prov_did);
  } catch (const LedgerError&) {
    reject(ctx, from, "UnknownDid", inner.prov_did + " is not on the registry");
    return;
  }
  if (!crypto::verify_sig(holder.sig_pk, inner.signing_bytes(), inner.sig)) {
    reject(ctx, from, "BadSignature", "credential request signature rejected");
    return;
  }

  RegistrySnapshot reg = ledger_.get_registry(registry_id_);
  crypto::IssueResult issued;
  try {
    issued = backend_.issue_credential(rng_, *issuer_, reg.params, reg.acc,
                                       inner.blinded, inner.blind_proof,
                                       inner.offer_nonce, contract.attrs);
  } catch (const crypto::CryptoError& e) {
    if (e.kind() == crypto::CryptoError::Kind::InvalidBlinding) {
      reject(ctx, from, "InvalidBlinding", e.what());
      return;
    }
    throw;
  }

  crypto::RegistryDelta delta;
  delta.version = reg.version + 1;
  delta.op = crypto::RegistryDelta::Op::Add;
  delta.element = issued.rev_element;
  delta.acc_after = issued.new_acc;
  uint64_t new_version =
      ledger_.update_accumulator(keys_.did, registry_id_, delta);

  contract.rev_element = issued.rev_element;
  contract.added_version = new_version;

  Bytes ds = crypto::sha256(pending.offer_bytes);
  append(ds, crypto::sha256(codec::encode(inner.blinded)));
  append(ds, crypto::sha256(codec::encode(issued.pre_credential)));
  ctx.emit(trace::EventKind::Running, trace::Label::CredInstall, from,
           std::move(ds));

  CredResInner out;
  out.offer_nonce = inner.offer_nonce;
  out.pre_credential = issued.pre_credential;
  out.witness = issued.witness;
  out.witness_version = new_version;
  out.contract_key = contract.contract_key;
  out.contract_id = contract.contract_id;
  out.emsp_sig = crypto::sign(keys_.sig_sk, out.signing_bytes());

  CreateContractCredentialRes res;
  res.blob =
      crypto::pk_encrypt(holder.enc_pk, codec::encode(out.to_wire()), rng_);
  ctx.send(from, codec::kMsgCreateContractCredentialRes, res.to_wire());
}

// -- billing ------------------------------------------------------------------

void Emsp::handle_billing(const WireValue& payload, const std::string& from,
                          Context& ctx) {
  BillingForwardReq req = BillingForwardReq::from_wire(payload);

  BillingAck ack;
  ack.session_id = req.session_id;

  if (req.emsp_id != alias_) {
    ack.detail = "UnknownEmsp";
    ctx.error("UnknownEmsp", "billing for provider " + req.emsp_id);
    ctx.send(from, codec::kMsgBillingAck, ack.to_wire());
    return;
  }

  auto key_for = [this](const Bytes& contract_id) -> std::optional<Bytes> {
    // Revoked contracts still settle sessions they authorized earlier.
    for (const Contract& c : contracts_) {
      if (c.contract_id == contract_id) return c.contract_key;
    }
    return std::nullopt;
  };
  crypto::AuthCheckOutcome outcome = crypto::check_contract_auth(
      keys_.enc_sk, req.auth_blob, req.request_hash, key_for, ctx.now(),
      crypto::kDefaultAuthWindow, seen_auth_tags_);

  if (outcome.result != crypto::AuthResult::Ok) {
    ack.detail = crypto::auth_result_name(outcome.result);
    ctx.error(ack.detail, "billing authorization rejected");
    ctx.send(from, codec::kMsgBillingAck, ack.to_wire());
    return;
  }

  BillableEntry entry;
  entry.contract_id = outcome.contract_id;
  entry.meter_wh = req.meter_wh;
  entry.timestamp = outcome.timestamp;
  entry.request_hash = req.request_hash;
  // Keep the decrypted authorization witness with the entry; it is the
  // only identifying view of the session the provider ever holds.
  entry.auth_inner = *crypto::pk_decrypt(keys_.enc_sk, req.auth_blob);
  billables_.push_back(std::move(entry));

  Bytes ds = req.request_hash;
  append(ds, outcome.contract_id);
  append(ds, u64_be(outcome.timestamp));
  ctx.emit(trace::EventKind::Commit, trace::Label::Billing, from,
           std::move(ds));

  ack.accepted = true;
  ctx.send(from, codec::kMsgBillingAck, ack.to_wire());
}

}  // namespace evssi::actors
