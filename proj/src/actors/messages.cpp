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

#include "evssi/actors/messages.hpp"

#include <map>

#include "evssi/crypto/conventional.hpp"
#include "evssi/crypto/hash.hpp"

namespace evssi::actors {

using codec::CodecError;
using codec::WireValue;

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw CodecError(CodecError::Kind::Malformed, what);
}

const std::vector<WireValue>& expect_record(const WireValue& v, uint16_t tag,
                                            size_t fields) {
  if (!v.is(WireValue::Kind::Record) || v.record_tag() != tag ||
      v.items().size() != fields) {
    malformed(std::string("bad ") +
              (codec::tag_name(tag) ? codec::tag_name(tag) : "record"));
  }
  return v.items();
}

Bytes fixed_bytes(const WireValue& v, size_t n, const char* what) {
  const Bytes& b = v.data();
  if (!v.is(WireValue::Kind::Bytes) || b.size() != n) {
    malformed(std::string("bad size for ") + what);
  }
  return b;
}

std::vector<std::string> string_seq(const WireValue& v) {
  if (!v.is(WireValue::Kind::Sequence)) malformed("expected string sequence");
  std::vector<std::string> out;
  out.reserve(v.items().size());
  for (const WireValue& item : v.items()) out.push_back(item.text());
  return out;
}

WireValue string_seq_wire(const std::vector<std::string>& xs) {
  std::vector<WireValue> items;
  items.reserve(xs.size());
  for (const std::string& x : xs) items.push_back(WireValue::str(x));
  return WireValue::seq(std::move(items));
}

}  // namespace

// -- provisioning ------------------------------------------------------------

Bytes InitNymReq::auth_bytes() const {
  return crypto::Hasher()
      .update("evssi.initnym.auth")
      .update_sized(nonce_ev)
      .update_sized(transport_pk)
      .final_digest();
}

WireValue InitNymReq::to_wire() const {
  return WireValue::record(codec::kMsgInitNymReq,
                           {WireValue::bytes(nonce_ev),
                            WireValue::bytes(transport_pk),
                            WireValue::bytes(tag)});
}

InitNymReq InitNymReq::from_wire(const WireValue& v) {
  const auto& f = expect_record(v, codec::kMsgInitNymReq, 3);
  InitNymReq m;
  m.nonce_ev = fixed_bytes(f[0], crypto::kNonceSize, "nonce_ev");
  m.transport_pk = fixed_bytes(f[1], crypto::kEncPublicKeySize, "transport_pk");
  m.tag = fixed_bytes(f[2], crypto::kMacSize, "tag");
  return m;
}

WireValue InitNymInner::to_wire() const {
  return WireValue::record(
      codec::kRecInitNymInner,
      {WireValue::str(steward_did), WireValue::bytes(nonce_ev),
       WireValue::bytes(nonce_st), WireValue::str(oem_did),
       WireValue::bytes(endorsement_sig)});
}

InitNymInner InitNymInner::from_wire(const WireValue& v) {
  const auto& f = expect_record(v, codec::kRecInitNymInner, 5);
  InitNymInner m;
  m.steward_did = f[0].text();
  m.nonce_ev = fixed_bytes(f[1], crypto::kNonceSize, "nonce_ev");
  m.nonce_st = fixed_bytes(f[2], crypto::kNonceSize, "nonce_st");
  m.oem_did = f[3].text();
  m.endorsement_sig = fixed_bytes(f[4], crypto::kSignatureSize, "endorsement");
  return m;
}

Bytes endorsement_bytes(const std::string& steward_did, BytesView nonce_ev,
                        BytesView nonce_st, const std::string& oem_did) {
  return codec::encode(WireValue::record(
      codec::kRecProvEndorsement,
      {WireValue::str(steward_did), WireValue::bytes(nonce_ev),
       WireValue::bytes(nonce_st), WireValue::str(oem_did)}));
}

WireValue InitNymRes::to_wire() const {
  return WireValue::record(codec::kMsgInitNymRes, {WireValue::bytes(blob)});
}

InitNymRes InitNymRes::from_wire(const WireValue& v) {
  const auto& f = expect_record(v, codec::kMsgInitNymRes, 1);
  return InitNymRes{f[0].data()};
}

Bytes ProvRegisterInner::signing_bytes() const {
  return codec::encode(WireValue::record(
      codec::kRecProvRegisterInner,
      {did_record, WireValue::bytes(nonce_ev), WireValue::bytes(nonce_st),
       WireValue::str(oem_did), WireValue::bytes(endorsement_sig)}));
}

WireValue ProvRegisterInner::to_wire() const {
  return WireValue::record(
      codec::kRecProvRegisterInner,
      {did_record, WireValue::bytes(nonce_ev), WireValue::bytes(nonce_st),
       WireValue::str(oem_did), WireValue::bytes(endorsement_sig),
       WireValue::bytes(pop_sig)});
}

ProvRegisterInner ProvRegisterInner::from_wire(const WireValue& v) {
  const auto& f = expect_record(v, codec::kRecProvRegisterInner, 6);
  ProvRegisterInner m;
  m.did_record = f[0];
  m.nonce_ev = fixed_bytes(f[1], crypto::kNonceSize, "nonce_ev");
  m.nonce_st = fixed_bytes(f[2], crypto::kNonceSize, "nonce_st");
  m.oem_did = f[3].text();
  m.endorsement_sig = fixed_bytes(f[4], crypto::kSignatureSize, "endorsement");
  m.pop_sig = fixed_bytes(f[5], crypto::kSignatureSize, "pop_sig");
  return m;
}

WireValue RegisterProvisioningDid::to_wire() const {
  return WireValue::record(codec::kMsgRegisterProvisioningDid,
                           {WireValue::bytes(blob)});
}

RegisterProvisioningDid RegisterProvisioningDid::from_wire(const WireValue& v) {
  const auto& f = expect_record(v, codec::kMsgRegisterProvisioningDid, 1);
  return RegisterProvisioningDid{f[0].data()};
}

// -- issuer onboarding -------------------------------------------------------

Bytes WriteVerinymReq::pop_bytes() const {
  return crypto::Hasher()
      .update("evssi.verinym.pop")
      .update_sized(codec::encode(did_record))
      .update_sized(nonce)
      .final_digest();
}

Bytes WriteVerinymReq::mac_bytes() const {
  return crypto::Hasher()
      .update("evssi.verinym.auth")
      .update_sized(codec::encode(did_record))
      .update_sized(nonce)
      .update_sized(pop_sig)
      .final_digest();
}

WireValue WriteVerinymReq::to_wire() const {
  return WireValue::record(
      codec::kMsgWriteVerinymReq,
      {did_record, WireValue::bytes(nonce), WireValue::bytes(pop_sig),
       WireValue::bytes(mac)});
}

WriteVerinymReq WriteVerinymReq::from_wire(const WireValue& v) {
  const auto& f = expect_record(v, codec::kMsgWriteVerinymReq, 4);
  WriteVerinymReq m;
  m.did_record = f[0];
  m.nonce = fixed_bytes(f[1], crypto::kNonceSize, "nonce");
  m.pop_sig = fixed_bytes(f[2], crypto::kSignatureSize, "pop_sig");
  m.mac = fixed_bytes(f[3], crypto::kMacSize, "mac");
  return m;
}

WireValue WriteVerinymRes::to_wire() const {
  return WireValue::record(
      codec::kMsgWriteVerinymRes,
      {WireValue::str(did), WireValue::from_u64(ledger_version),
       WireValue::bytes(steward_sig)});
}

WriteVerinymRes WriteVerinymRes::from_wire(const WireValue& v) {
  const auto& f = expect_record(v, codec::kMsgWriteVerinymRes, 3);
  WriteVerinymRes m;
  m.did = f[0].text();
  m.ledger_version = f[1].as_u64();
  m.steward_sig = fixed_bytes(f[2], crypto::kSignatureSize, "steward_sig");
  return m;
}

Bytes verinym_res_sig_bytes(BytesView did_record_bytes, BytesView nonce,
                            uint64_t ledger_version) {
  return crypto::Hasher()
      .update("evssi.verinym.res")
      .update_sized(did_record_bytes)
      .update_sized(nonce)
      .update_sized(u64_be(ledger_version))
      .final_digest();
}

// -- credential installation -------------------------------------------------

Bytes GetCredOfferReq::sig_bytes(const std::string& prov_did,
                                 BytesView req_nonce,
                                 const std::string& emsp_did) {
  return crypto::Hasher()
      .update("evssi.offer.req")
      .update_sized(prov_did)
      .update_sized(req_nonce)
      .update_sized(emsp_did)
      .final_digest();
}

WireValue GetCredOfferReq::to_wire() const {
  return WireValue::record(codec::kMsgGetCredOfferReq,
                           {WireValue::str(prov_did),
                            WireValue::bytes(req_nonce), WireValue::bytes(sig)});
}

GetCredOfferReq GetCredOfferReq::from_wire(const WireValue& v) {
  const auto& f = expect_record(v, codec::kMsgGetCredOfferReq, 3);
  GetCredOfferReq m;
  m.prov_did = f[0].text();
  m.req_nonce = fixed_bytes(f[1], crypto::kNonceSize, "req_nonce");
  m.sig = fixed_bytes(f[2], crypto::kSignatureSize, "sig");
  return m;
}

Bytes CredOffer::signing_bytes() const {
  return codec::encode(WireValue::record(
      codec::kRecCredOffer,
      {WireValue::str(emsp_did), WireValue::bytes(offer_nonce),
       WireValue::str(cred_def_id), WireValue::str(registry_id),
       WireValue::str(schema_id), crypto::attributes_to_wire(attrs),
       WireValue::bytes(req_nonce)}));
}

WireValue CredOffer::to_wire() const {
  return WireValue::record(
      codec::kRecCredOffer,
      {WireValue::str(emsp_did), WireValue::bytes(offer_nonce),
       WireValue::str(cred_def_id), WireValue::str(registry_id),
       WireValue::str(schema_id), crypto::attributes_to_wire(attrs),
       WireValue::bytes(req_nonce), WireValue::bytes(emsp_sig)});
}

CredOffer CredOffer::from_wire(const WireValue& v) {
  const auto& f = expect_record(v, codec::kRecCredOffer, 8);
  CredOffer m;
  m.emsp_did = f[0].text();
  m.offer_nonce = fixed_bytes(f[1], crypto::kNonceSize, "offer_nonce");
  m.cred_def_id = f[2].text();
  m.registry_id = f[3].text();
  m.schema_id = f[4].text();
  m.attrs = crypto::attributes_from_wire(f[5]);
  m.req_nonce = fixed_bytes(f[6], crypto::kNonceSize, "req_nonce");
  m.emsp_sig = fixed_bytes(f[7], crypto::kSignatureSize, "emsp_sig");
  return m;
}

WireValue GetCredOfferRes::to_wire() const {
  return WireValue::record(codec::kMsgGetCredOfferRes, {WireValue::bytes(blob)});
}

GetCredOfferRes GetCredOfferRes::from_wire(const WireValue& v) {
  const auto& f = expect_record(v, codec::kMsgGetCredOfferRes, 1);
  return GetCredOfferRes{f[0].data()};
}

Bytes CredReqInner::signing_bytes() const {
  return codec::encode(WireValue::record(
      codec::kRecCredReqInner,
      {WireValue::str(prov_did), WireValue::bytes(offer_nonce), blinded,
       blind_proof}));
}

WireValue CredReqInner::to_wire() const {
  return WireValue::record(
      codec::kRecCredReqInner,
      {WireValue::str(prov_did), WireValue::bytes(offer_nonce), blinded,
       blind_proof, WireValue::bytes(sig)});
}

CredReqInner CredReqInner::from_wire(const WireValue& v) {
  const auto& f = expect_record(v, codec::kRecCredReqInner, 5);
  CredReqInner m;
  m.prov_did = f[0].text();
  m.offer_nonce = fixed_bytes(f[1], crypto::kNonceSize, "offer_nonce");
  m.blinded = f[2];
  m.blind_proof = f[3];
  m.sig = fixed_bytes(f[4], crypto::kSignatureSize, "sig");
  return m;
}

WireValue CreateContractCredentialReq::to_wire() const {
  return WireValue::record(codec::kMsgCreateContractCredentialReq,
                           {WireValue::bytes(blob)});
}

CreateContractCredentialReq CreateContractCredentialReq::from_wire(
    const WireValue& v) {
  const auto& f = expect_record(v, codec::kMsgCreateContractCredentialReq, 1);
  return CreateContractCredentialReq{f[0].data()};
}

Bytes CredResInner::signing_bytes() const {
  return codec::encode(WireValue::record(
      codec::kRecCredResInner,
      {WireValue::bytes(offer_nonce), pre_credential, witness,
       WireValue::from_u64(witness_version), WireValue::bytes(contract_key),
       WireValue::bytes(contract_id)}));
}

WireValue CredResInner::to_wire() const {
  return WireValue::record(
      codec::kRecCredResInner,
      {WireValue::bytes(offer_nonce), pre_credential, witness,
       WireValue::from_u64(witness_version), WireValue::bytes(contract_key),
       WireValue::bytes(contract_id), WireValue::bytes(emsp_sig)});
}

CredResInner CredResInner::from_wire(const WireValue& v) {
  const auto& f = expect_record(v, codec::kRecCredResInner, 7);
  CredResInner m;
  m.offer_nonce = fixed_bytes(f[0], crypto::kNonceSize, "offer_nonce");
  m.pre_credential = f[1];
  m.witness = f[2];
  m.witness_version = f[3].as_u64();
  m.contract_key = fixed_bytes(f[4], crypto::kSymKeySize, "contract_key");
  m.contract_id = fixed_bytes(f[5], crypto::kContractIdSize, "contract_id");
  m.emsp_sig = fixed_bytes(f[6], crypto::kSignatureSize, "emsp_sig");
  return m;
}

WireValue CreateContractCredentialRes::to_wire() const {
  return WireValue::record(codec::kMsgCreateContractCredentialRes,
                           {WireValue::bytes(blob)});
}

CreateContractCredentialRes CreateContractCredentialRes::from_wire(
    const WireValue& v) {
  const auto& f = expect_record(v, codec::kMsgCreateContractCredentialRes, 1);
  return CreateContractCredentialRes{f[0].data()};
}

// -- charge authorization ----------------------------------------------------

WireValue ServiceDiscoveryReq::to_wire() const {
  return WireValue::record(codec::kMsgServiceDiscoveryReq,
                           {string_seq_wire(modes)});
}

ServiceDiscoveryReq ServiceDiscoveryReq::from_wire(const WireValue& v) {
  const auto& f = expect_record(v, codec::kMsgServiceDiscoveryReq, 1);
  return ServiceDiscoveryReq{string_seq(f[0])};
}

WireValue ServiceDiscoveryRes::to_wire() const {
  return WireValue::record(codec::kMsgServiceDiscoveryRes,
                           {WireValue::str(mode)});
}

ServiceDiscoveryRes ServiceDiscoveryRes::from_wire(const WireValue& v) {
  const auto& f = expect_record(v, codec::kMsgServiceDiscoveryRes, 1);
  return ServiceDiscoveryRes{f[0].text()};
}

WireValue RequestProofReq::to_wire() const {
  return WireValue::record(
      codec::kMsgRequestProofReq,
      {WireValue::bytes(client_ref), WireValue::from_u64(witness_from_version)});
}

RequestProofReq RequestProofReq::from_wire(const WireValue& v) {
  const auto& f = expect_record(v, codec::kMsgRequestProofReq, 2);
  RequestProofReq m;
  m.client_ref = fixed_bytes(f[0], crypto::kNonceSize, "client_ref");
  m.witness_from_version = f[1].as_u64();
  return m;
}

WireValue RequestProofRes::to_wire() const {
  return WireValue::record(
      codec::kMsgRequestProofRes,
      {WireValue::bytes(client_ref), WireValue::bytes(session_id), request, acc,
       WireValue::from_u64(registry_version), WireValue::seq(deltas)});
}

RequestProofRes RequestProofRes::from_wire(const WireValue& v) {
  const auto& f = expect_record(v, codec::kMsgRequestProofRes, 6);
  RequestProofRes m;
  m.client_ref = fixed_bytes(f[0], crypto::kNonceSize, "client_ref");
  m.session_id = fixed_bytes(f[1], crypto::kNonceSize, "session_id");
  m.request = f[2];
  m.acc = f[3];
  m.registry_version = f[4].as_u64();
  if (!f[5].is(WireValue::Kind::Sequence)) malformed("bad delta slice");
  m.deltas = f[5].items();
  return m;
}

WireValue ValidateContractProofReq::to_wire() const {
  return WireValue::record(
      codec::kMsgValidateContractProofReq,
      {WireValue::bytes(session_id), presentation, WireValue::bytes(auth_blob),
       WireValue::str(client_note)});
}

ValidateContractProofReq ValidateContractProofReq::from_wire(
    const WireValue& v) {
  const auto& f = expect_record(v, codec::kMsgValidateContractProofReq, 4);
  ValidateContractProofReq m;
  m.session_id = fixed_bytes(f[0], crypto::kNonceSize, "session_id");
  m.presentation = f[1];
  m.auth_blob = f[2].data();
  m.client_note = f[3].text();
  return m;
}

WireValue ValidateContractProofRes::to_wire() const {
  return WireValue::record(
      codec::kMsgValidateContractProofRes,
      {WireValue::bytes(session_id), WireValue::str(status)});
}

ValidateContractProofRes ValidateContractProofRes::from_wire(
    const WireValue& v) {
  const auto& f = expect_record(v, codec::kMsgValidateContractProofRes, 2);
  ValidateContractProofRes m;
  m.session_id = fixed_bytes(f[0], crypto::kNonceSize, "session_id");
  m.status = f[1].text();
  return m;
}

// -- billing -----------------------------------------------------------------

WireValue BillingForwardReq::to_wire() const {
  return WireValue::record(
      codec::kMsgBillingForwardReq,
      {WireValue::bytes(session_id), WireValue::from_u64(meter_wh),
       WireValue::str(emsp_id), WireValue::bytes(request_hash),
       WireValue::bytes(auth_blob), string_seq_wire(location)});
}

BillingForwardReq BillingForwardReq::from_wire(const WireValue& v) {
  const auto& f = expect_record(v, codec::kMsgBillingForwardReq, 6);
  BillingForwardReq m;
  m.session_id = fixed_bytes(f[0], crypto::kNonceSize, "session_id");
  m.meter_wh = f[1].as_u64();
  m.emsp_id = f[2].text();
  m.request_hash = fixed_bytes(f[3], crypto::kDigestSize, "request_hash");
  m.auth_blob = f[4].data();
  m.location = string_seq(f[5]);
  if (m.location.size() > 1) malformed("location carries at most one entry");
  return m;
}

WireValue BillingAck::to_wire() const {
  return WireValue::record(
      codec::kMsgBillingAck,
      {WireValue::bytes(session_id), WireValue::from_bool(accepted),
       WireValue::str(detail)});
}

BillingAck BillingAck::from_wire(const WireValue& v) {
  const auto& f = expect_record(v, codec::kMsgBillingAck, 3);
  BillingAck m;
  m.session_id = fixed_bytes(f[0], crypto::kNonceSize, "session_id");
  m.accepted = f[1].as_bool();
  m.detail = f[2].text();
  return m;
}

// -- errors ------------------------------------------------------------------

WireValue ErrorRes::to_wire() const {
  return WireValue::record(codec::kMsgErrorRes,
                           {WireValue::str(code), WireValue::str(detail)});
}

ErrorRes ErrorRes::from_wire(const WireValue& v) {
  const auto& f = expect_record(v, codec::kMsgErrorRes, 2);
  return ErrorRes{f[0].text(), f[1].text()};
}

// -- observer field names ----------------------------------------------------

std::string record_field_name(uint16_t tag, size_t index) {
  static const std::map<uint16_t, std::vector<const char*>> kFields = {
      {codec::kMsgInitNymReq, {"nonce_ev", "transport_pk", "tag"}},
      {codec::kMsgInitNymRes, {"blob"}},
      {codec::kMsgRegisterProvisioningDid, {"blob"}},
      {codec::kMsgWriteVerinymReq, {"did_record", "nonce", "pop_sig", "mac"}},
      {codec::kMsgWriteVerinymRes, {"did", "ledger_version", "steward_sig"}},
      {codec::kMsgGetCredOfferReq, {"prov_did", "req_nonce", "sig"}},
      {codec::kMsgGetCredOfferRes, {"blob"}},
      {codec::kMsgCreateContractCredentialReq, {"blob"}},
      {codec::kMsgCreateContractCredentialRes, {"blob"}},
      {codec::kMsgServiceDiscoveryReq, {"modes"}},
      {codec::kMsgServiceDiscoveryRes, {"mode"}},
      {codec::kMsgRequestProofReq, {"client_ref", "witness_from_version"}},
      {codec::kMsgRequestProofRes,
       {"client_ref", "session_id", "request", "acc", "registry_version",
        "deltas"}},
      {codec::kMsgValidateContractProofReq,
       {"session_id", "presentation", "auth_blob", "client_note"}},
      {codec::kMsgValidateContractProofRes, {"session_id", "status"}},
      {codec::kMsgBillingForwardReq,
       {"session_id", "meter_wh", "emsp_id", "request_hash", "auth_blob",
        "location"}},
      {codec::kMsgBillingAck, {"session_id", "accepted", "detail"}},
      {codec::kMsgErrorRes, {"code", "detail"}},
      {codec::kRecContractAuthInner,
       {"contract_id", "timestamp", "request_hash", "tag"}},
      {codec::kRecProofRequest,
       {"nonce", "reveal", "cred_def_id", "registry_id", "registry_version"}},
      {codec::kRecAttribute, {"name", "value"}},
  };
  auto it = kFields.find(tag);
  if (it != kFields.end() && index < it->second.size()) {
    return it->second[index];
  }
  return "f" + std::to_string(index);
}

}  // namespace evssi::actors
