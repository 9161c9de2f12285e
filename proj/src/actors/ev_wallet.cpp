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

#include "evssi/actors/ev_wallet.hpp"

#include <algorithm>
#include <utility>

#include "evssi/crypto/contract_auth.hpp"
#include "evssi/crypto/hash.hpp"

namespace evssi::actors {

using codec::WireValue;

EvWallet::EvWallet(std::string name, Config config, crypto::Rng rng,
                   crypto::CryptoBackend& backend, Ledger& ledger)
    : Actor(std::move(name)),
      config_(std::move(config)),
      rng_(std::move(rng)),
      backend_(backend),
      ledger_(ledger) {}

void EvWallet::on_message(const codec::MessageEnvelope& env,
                          const std::string& from, Context& ctx) {
  switch (env.msg_type) {
    case codec::kMsgInitNymRes:
      handle_init_nym_res(env.payload, from, ctx);
      return;
    case codec::kMsgGetCredOfferRes:
      handle_offer_res(env.payload, from, ctx);
      return;
    case codec::kMsgCreateContractCredentialRes:
      handle_cred_res(env.payload, from, ctx);
      return;
    case codec::kMsgServiceDiscoveryRes:
      handle_discovery_res(env.payload, from, ctx);
      return;
    case codec::kMsgRequestProofRes:
      handle_proof_req_res(env.payload, from, ctx);
      return;
    case codec::kMsgValidateContractProofRes:
      handle_validate_res(env.payload, from, ctx);
      return;
    case codec::kMsgErrorRes:
      return;  // peer diagnostics, already in the trace on their side
    default:
      ctx.error("UnexpectedMessage",
                std::string(codec::tag_name(env.msg_type)) +
                    " is not a vehicle message");
  }
}

// -- provisioning -------------------------------------------------------------

void EvWallet::begin_provisioning(Context& ctx) {
  prov_keys_ = crypto::gen_did_keys(rng_);

  PendingProvisioning pending;
  pending.nonce_ev = rng_.bytes(crypto::kNonceSize);
  pending.transport = crypto::gen_did_keys(rng_);

  InitNymReq req;
  req.nonce_ev = pending.nonce_ev;
  req.transport_pk = pending.transport.enc_pk;
  req.tag = crypto::hmac_sha256(config_.pairing_key, req.auth_bytes());

  pending_prov_ = std::move(pending);
  ctx.send(config_.oem_actor, codec::kMsgInitNymReq, req.to_wire());
}

void EvWallet::handle_init_nym_res(const WireValue& payload,
                                   const std::string& from, Context& ctx) {
  if (!pending_prov_) {
    ctx.error("UnexpectedMessage", "no provisioning in progress");
    return;
  }
  InitNymRes res = InitNymRes::from_wire(payload);
  auto plain = crypto::pk_decrypt(pending_prov_->transport.enc_sk, res.blob);
  if (!plain) {
    reject(ctx, from, "DecryptFailed", "provisioning response unreadable");
    return;
  }
  InitNymInner inner = InitNymInner::from_wire(codec::decode(*plain));
  if (inner.nonce_ev != pending_prov_->nonce_ev) {
    reject(ctx, from, "NonceMismatch", "provisioning nonce does not match");
    return;
  }
  Bytes endorsed = endorsement_bytes(inner.steward_did, inner.nonce_ev,
                                     inner.nonce_st, inner.oem_did);
  if (!crypto::verify_sig(config_.oem_sig_pk, endorsed,
                          inner.endorsement_sig)) {
    reject(ctx, from, "BadSignature", "manufacturer endorsement rejected");
    return;
  }
  if (inner.steward_did != config_.steward_did) {
    reject(ctx, from, "BadSignature",
           "endorsement names a steward this vehicle does not trust");
    return;
  }

  DidRecord record;
  record.did = prov_keys_.did;
  record.role = Role::Client;
  record.sig_pk = prov_keys_.sig_pk;
  record.enc_pk = prov_keys_.enc_pk;

  ProvRegisterInner reg;
  reg.did_record = record.to_wire();
  reg.nonce_ev = inner.nonce_ev;
  reg.nonce_st = inner.nonce_st;
  reg.oem_did = inner.oem_did;
  reg.endorsement_sig = inner.endorsement_sig;
  reg.pop_sig = crypto::sign(prov_keys_.sig_sk, reg.signing_bytes());

  Bytes ds = codec::encode(reg.did_record);
  append(ds, reg.nonce_ev);
  append(ds, reg.nonce_st);
  ctx.emit(trace::EventKind::Running, trace::Label::ProvDid,
           config_.steward_actor, std::move(ds));

  RegisterProvisioningDid msg;
  msg.blob = crypto::pk_encrypt(config_.steward_enc_pk,
                                codec::encode(reg.to_wire()), rng_);
  pending_prov_.reset();
  ctx.send(config_.steward_actor, codec::kMsgRegisterProvisioningDid,
           msg.to_wire());
}

bool EvWallet::provisioned() const {
  // The vehicle is online whenever it provisions or installs; confirming
  // the DID write against the registry is a direct read, not a message.
  return !prov_keys_.did.empty() &&
         ledger_.role_of(prov_keys_.did) == std::optional<Role>(Role::Client);
}

// -- contract installation ----------------------------------------------------

void EvWallet::accept_contract(const std::string& emsp_actor,
                               const std::string& emsp_did,
                               crypto::AttributeList attrs) {
  contract_ = ContractHandover{emsp_actor, emsp_did, std::move(attrs)};
}

void EvWallet::begin_install(Context& ctx) {
  if (!contract_) {
    throw ActorFault("NoContract", "no contract handover to install against");
  }
  if (prov_keys_.did.empty()) {
    throw ActorFault("NotProvisioned", "vehicle has no provisioning DID");
  }

  PendingInstall pending;
  pending.req_nonce = rng_.bytes(crypto::kNonceSize);

  GetCredOfferReq req;
  req.prov_did = prov_keys_.did;
  req.req_nonce = pending.req_nonce;
  req.sig = crypto::sign(
      prov_keys_.sig_sk,
      GetCredOfferReq::sig_bytes(req.prov_did, req.req_nonce,
                                 contract_->emsp_did));

  pending_install_ = std::move(pending);
  ctx.send(contract_->emsp_actor, codec::kMsgGetCredOfferReq, req.to_wire());
}

void EvWallet::handle_offer_res(const WireValue& payload,
                                const std::string& from, Context& ctx) {
  if (!pending_install_ || !contract_) {
    ctx.error("UnexpectedMessage", "no installation in progress");
    return;
  }
  GetCredOfferRes res = GetCredOfferRes::from_wire(payload);
  auto plain = crypto::pk_decrypt(prov_keys_.enc_sk, res.blob);
  if (!plain) {
    reject(ctx, from, "DecryptFailed", "credential offer unreadable");
    return;
  }
  CredOffer offer = CredOffer::from_wire(codec::decode(*plain));
  if (offer.req_nonce != pending_install_->req_nonce) {
    reject(ctx, from, "NonceMismatch", "offer echoes a different request");
    return;
  }
  if (offer.emsp_did != contract_->emsp_did) {
    reject(ctx, from, "OfferMismatch", "offer is not from the contracted provider");
    return;
  }

  // The vehicle is online for installation: resolve the provider and the
  // published credential material directly from the registry.
  DidRecord emsp = ledger_.get_did(offer.emsp_did);
  if (!crypto::verify_sig(emsp.sig_pk, offer.signing_bytes(), offer.emsp_sig)) {
    reject(ctx, from, "BadSignature", "offer signature rejected");
    return;
  }
  CredDef def = ledger_.get_cred_def(offer.cred_def_id);
  RegistrySnapshot reg = ledger_.get_registry(offer.registry_id);
  if (def.issuer_did != offer.emsp_did || def.schema_id != offer.schema_id ||
      reg.cred_def_id != offer.cred_def_id) {
    reject(ctx, from, "OfferMismatch",
           "offer references ledger objects of a different issuer");
    return;
  }
  if (offer.attrs != contract_->attrs) {
    reject(ctx, from, "OfferMismatch",
           "offered attributes differ from the agreed contract");
    return;
  }

  pending_install_->offer = offer;
  pending_install_->offer_bytes = *plain;
  pending_install_->emsp_sig_pk = emsp.sig_pk;
  pending_install_->emsp_enc_pk = emsp.enc_pk;
  pending_install_->issuer_pub = def.pub;
  pending_install_->reg_params = reg.params;
  pending_install_->blinding =
      backend_.blind_master_secret(rng_, def.pub, offer.offer_nonce);

  CredReqInner inner;
  inner.prov_did = prov_keys_.did;
  inner.offer_nonce = offer.offer_nonce;
  inner.blinded = pending_install_->blinding->blinded;
  inner.blind_proof = pending_install_->blinding->proof;
  inner.sig = crypto::sign(prov_keys_.sig_sk, inner.signing_bytes());

  CreateContractCredentialReq req;
  req.blob =
      crypto::pk_encrypt(emsp.enc_pk, codec::encode(inner.to_wire()), rng_);
  ctx.send(from, codec::kMsgCreateContractCredentialReq, req.to_wire());
}

void EvWallet::handle_cred_res(const WireValue& payload,
                               const std::string& from, Context& ctx) {
  if (!pending_install_ || !pending_install_->offer) {
    ctx.error("UnexpectedMessage", "no credential request outstanding");
    return;
  }
  PendingInstall& pending = *pending_install_;
  CreateContractCredentialRes res =
      CreateContractCredentialRes::from_wire(payload);
  auto plain = crypto::pk_decrypt(prov_keys_.enc_sk, res.blob);
  if (!plain) {
    reject(ctx, from, "DecryptFailed", "credential response unreadable");
    return;
  }
  CredResInner inner = CredResInner::from_wire(codec::decode(*plain));
  if (inner.offer_nonce != pending.offer->offer_nonce) {
    reject(ctx, from, "NonceMismatch", "response binds a different offer");
    return;
  }
  if (!crypto::verify_sig(pending.emsp_sig_pk, inner.signing_bytes(),
                          inner.emsp_sig)) {
    reject(ctx, from, "BadSignature", "credential response signature rejected");
    return;
  }

  crypto::ContractCredential cred;
  try {
    cred = backend_.complete_credential(
        pending.issuer_pub, pending.blinding->pending, inner.pre_credential,
        inner.witness, inner.witness_version);
  } catch (const crypto::CryptoError& e) {
    if (e.kind() == crypto::CryptoError::Kind::InvalidSignature) {
      reject(ctx, from, "InvalidSignature", e.what());
      return;
    }
    throw;
  }
  cred.contract_key = inner.contract_key;
  cred.contract_id = inner.contract_id;
  cred.cred_def_id = pending.offer->cred_def_id;
  cred.registry_id = pending.offer->registry_id;
  cred.schema_id = pending.offer->schema_id;

  Bytes ds = crypto::sha256(pending.offer_bytes);
  append(ds, crypto::sha256(codec::encode(pending.blinding->blinded)));
  append(ds, crypto::sha256(codec::encode(inner.pre_credential)));
  ctx.emit(trace::EventKind::Commit, trace::Label::CredInstall,
           contract_->emsp_actor, std::move(ds));

  StoredCredential stored;
  stored.cred = std::move(cred);
  stored.issuer_pub = pending.issuer_pub;
  stored.reg_params = pending.reg_params;
  stored.emsp_did = pending.offer->emsp_did;
  stored.emsp_actor = contract_->emsp_actor;
  stored.emsp_enc_pk = pending.emsp_enc_pk;
  stored.offer_hash = crypto::sha256(pending.offer_bytes);
  credential_ = std::move(stored);
  pending_install_.reset();
}

// -- charging -----------------------------------------------------------------

void EvWallet::begin_discovery(const std::string& cp_actor, Context& ctx) {
  ServiceDiscoveryReq req;
  req.modes = config_.modes;
  ctx.send(cp_actor, codec::kMsgServiceDiscoveryReq, req.to_wire());
}

void EvWallet::handle_discovery_res(const WireValue& payload,
                                    const std::string& from, Context& ctx) {
  ServiceDiscoveryRes res = ServiceDiscoveryRes::from_wire(payload);
  mode_by_cp_[from] = res.mode;
  if (res.mode == kModeNone) {
    ctx.error("NoCommonMode", "no shared authorization mode with " + from);
  } else if (res.mode == kModePncPki) {
    // Negotiable for interoperability experiments, but this wallet carries
    // no certificate-chain machinery behind it.
    ctx.error("NotImplemented", "pnc-pki negotiated but not supported");
  }
}

std::optional<std::string> EvWallet::negotiated_mode(
    const std::string& cp) const {
  auto it = mode_by_cp_.find(cp);
  if (it == mode_by_cp_.end()) return std::nullopt;
  return it->second;
}

void EvWallet::begin_charge(const std::string& cp_actor, Context& ctx) {
  if (!credential_) {
    throw ActorFault("NoCredential", "no contract credential installed");
  }
  auto mode = negotiated_mode(cp_actor);
  if (mode != std::optional<std::string>(kModeContractProof)) {
    throw ActorFault("ModeNotNegotiated",
                     "contract-proof mode was not negotiated with " + cp_actor);
  }

  PendingCharge pending;
  pending.cp_actor = cp_actor;
  pending.client_ref = rng_.bytes(crypto::kNonceSize);
  last_charge_authorized_ = false;

  RequestProofReq req;
  req.client_ref = pending.client_ref;
  req.witness_from_version = credential_->cred.witness_version;

  pending_charge_ = std::move(pending);
  ctx.send(cp_actor, codec::kMsgRequestProofReq, req.to_wire());
}

void EvWallet::handle_proof_req_res(const WireValue& payload,
                                    const std::string& from, Context& ctx) {
  if (!pending_charge_ || pending_charge_->presented) {
    ctx.error("UnexpectedMessage", "no proof request outstanding");
    return;
  }
  RequestProofRes res = RequestProofRes::from_wire(payload);
  if (res.client_ref != pending_charge_->client_ref) {
    ctx.error("NonceMismatch", "proof request for a different session");
    return;
  }
  StoredCredential& stored = *credential_;
  crypto::ProofRequest request = crypto::ProofRequest::from_wire(res.request);
  if (request.cred_def_id != stored.cred.cred_def_id ||
      request.registry_id != stored.cred.registry_id) {
    reject(ctx, from, "UnknownCredDef",
           "proof request names a credential this wallet does not hold");
    return;
  }

  // Refresh the non-revocation witness from the relayed delta slice; the
  // vehicle needs no registry connection of its own at the charge point.
  std::vector<crypto::RegistryDelta> deltas;
  deltas.reserve(res.deltas.size());
  for (const WireValue& d : res.deltas) {
    deltas.push_back(crypto::registry_delta_from_wire(d));
  }
  try {
    backend_.witness_update(stored.reg_params, stored.cred, deltas, res.acc,
                            res.registry_version);
  } catch (const crypto::CryptoError& e) {
    switch (e.kind()) {
      case crypto::CryptoError::Kind::Revoked:
        reject(ctx, from, "RevokedCredential", e.what());
        return;
      case crypto::CryptoError::Kind::StaleWitness:
        reject(ctx, from, "StaleRegistryVersion", e.what());
        return;
      default:
        throw;
    }
  }

  crypto::Presentation pres = backend_.create_presentation(
      rng_, stored.issuer_pub, stored.reg_params, res.acc, stored.cred,
      request);

  Bytes request_bytes = codec::encode(res.request);
  Bytes request_hash = crypto::sha256(request_bytes);
  uint64_t ts = ctx.now();
  Bytes auth_blob = crypto::make_contract_auth(
      stored.cred.contract_key, stored.cred.contract_id, request_hash, ts,
      stored.emsp_enc_pk, rng_);

  Bytes charge_ds = request_hash;
  append(charge_ds, crypto::sha256(codec::encode(pres.to_wire())));
  ctx.emit(trace::EventKind::Running, trace::Label::ChargeAuth, from,
           std::move(charge_ds));

  Bytes billing_ds = request_hash;
  append(billing_ds, stored.cred.contract_id);
  append(billing_ds, u64_be(ts));
  ctx.emit(trace::EventKind::Running, trace::Label::Billing,
           stored.emsp_actor, std::move(billing_ds));

  ValidateContractProofReq req;
  req.session_id = res.session_id;
  req.presentation = pres.to_wire();
  req.auth_blob = std::move(auth_blob);
  if (config_.leak_contract_note) {
    req.client_note = hex_encode(stored.cred.contract_id);
  }
  pending_charge_->session_id = res.session_id;
  pending_charge_->presented = true;
  ctx.send(from, codec::kMsgValidateContractProofReq, req.to_wire());
}

void EvWallet::handle_validate_res(const WireValue& payload,
                                   const std::string& from, Context& ctx) {
  if (!pending_charge_ || !pending_charge_->presented) {
    ctx.error("UnexpectedMessage", "no presentation outstanding");
    return;
  }
  ValidateContractProofRes res = ValidateContractProofRes::from_wire(payload);
  if (res.session_id != pending_charge_->session_id) {
    ctx.error("NonceMismatch", "verdict for a different session");
    return;
  }
  pending_charge_.reset();
  if (res.status == kStatusAuthorized) {
    last_charge_authorized_ = true;
    return;
  }
  last_charge_authorized_ = false;
  ctx.error("AuthorizationRejected", from + " rejected the presentation");
}

// -- inspection ---------------------------------------------------------------

std::vector<Bytes> EvWallet::secret_material() const {
  std::vector<Bytes> secrets;
  auto add = [&secrets](const Bytes& b) {
    if (!b.empty()) secrets.push_back(b);
  };
  add(config_.pairing_key);
  add(prov_keys_.sig_sk);
  add(prov_keys_.enc_sk);
  if (pending_prov_) {
    add(pending_prov_->transport.enc_sk);
  }
  if (credential_) {
    const crypto::ContractCredential& cred = credential_->cred;
    add(cred.contract_key);
    // The master secret is a backend value; its canonical encoding is the
    // most sensitive needle we can scan for.
    add(codec::encode(cred.master_secret));
  }
  return secrets;
}

EvWallet::RevealedState EvWallet::reveal_state() const {
  RevealedState state;
  state.prov_keys = prov_keys_;
  state.credential = credential_;
  return state;
}

}  // namespace evssi::actors
