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

#include <cstdint>
#include <string>
#include <vector>

#include "evssi/bytes.hpp"
#include "evssi/codec.hpp"
#include "evssi/crypto/types.hpp"
#include "evssi/ledger.hpp"

// Typed views of every protocol message payload and of the records that
// travel sealed inside them. from_wire validates shape (record tag, field
// count, field kinds, fixed sizes) and throws CodecError{Malformed} on any
// disagreement, so handlers can treat "does not parse" uniformly.
//
// Signed structures expose signing_bytes(): the canonical encoding of the
// record minus its trailing signature field (the record tag doubles as the
// domain separator). Signatures are always over those exact bytes.

namespace evssi::actors {

// -- provisioning ------------------------------------------------------------

// EV -> OEM. Authenticated with the factory pairing key; transport_pk is a
// fresh X25519 key the response is sealed to, so only the vehicle that
// opened the exchange can read it.
struct InitNymReq {
  Bytes nonce_ev;      // 16
  Bytes transport_pk;  // 32
  Bytes tag;           // HMAC(pairing_key, auth_bytes())

  Bytes auth_bytes() const;
  codec::WireValue to_wire() const;
  static InitNymReq from_wire(const codec::WireValue& v);
};

// Sealed interior of InitNymRes: the steward to register with, both
// nonces, and the OEM's endorsement signature binding them. The
// endorsement is what the steward later accepts as trust-anchor approval.
struct InitNymInner {
  std::string steward_did;
  Bytes nonce_ev;  // 16
  Bytes nonce_st;  // 16
  std::string oem_did;
  Bytes endorsement_sig;

  codec::WireValue to_wire() const;
  static InitNymInner from_wire(const codec::WireValue& v);
};

// The bytes the OEM endorsement signs (a pure signing form; this record
// never travels by itself).
Bytes endorsement_bytes(const std::string& steward_did, BytesView nonce_ev,
                        BytesView nonce_st, const std::string& oem_did);

// OEM -> EV, sealed to InitNymReq.transport_pk.
struct InitNymRes {
  Bytes blob;

  codec::WireValue to_wire() const;
  static InitNymRes from_wire(const codec::WireValue& v);
};

// Sealed interior of RegisterProvisioningDid, encrypted to the steward.
// pop_sig is by the record's own signing key over signing_bytes(), which
// covers the record and both nonces, so a swapped record cannot reuse a
// proof of possession.
struct ProvRegisterInner {
  codec::WireValue did_record;  // ledger DidRecord wire form
  Bytes nonce_ev;               // 16
  Bytes nonce_st;               // 16
  std::string oem_did;
  Bytes endorsement_sig;
  Bytes pop_sig;

  Bytes signing_bytes() const;
  codec::WireValue to_wire() const;
  static ProvRegisterInner from_wire(const codec::WireValue& v);
};

// EV -> steward.
struct RegisterProvisioningDid {
  Bytes blob;

  codec::WireValue to_wire() const;
  static RegisterProvisioningDid from_wire(const codec::WireValue& v);
};

// -- issuer onboarding -------------------------------------------------------

// OEM/EMSP -> steward, plaintext: verinym records are public the moment
// they hit the ledger. mac authenticates under the onboarder's pre-shared
// key; pop_sig proves control of the verinym signing key.
struct WriteVerinymReq {
  codec::WireValue did_record;
  Bytes nonce;  // 16, consumed by the steward
  Bytes pop_sig;
  Bytes mac;

  Bytes pop_bytes() const;
  Bytes mac_bytes() const;
  codec::WireValue to_wire() const;
  static WriteVerinymReq from_wire(const codec::WireValue& v);
};

struct WriteVerinymRes {
  std::string did;
  uint64_t ledger_version = 0;
  Bytes steward_sig;  // over signing_bytes() + the request's record/nonce

  codec::WireValue to_wire() const;
  static WriteVerinymRes from_wire(const codec::WireValue& v);
};

Bytes verinym_res_sig_bytes(BytesView did_record_bytes, BytesView nonce,
                            uint64_t ledger_version);

// -- credential installation -------------------------------------------------

// EV -> EMSP, plaintext; the signature proves control of prov_did and
// binds the request to this EMSP.
struct GetCredOfferReq {
  std::string prov_did;
  Bytes req_nonce;  // 16
  Bytes sig;

  static Bytes sig_bytes(const std::string& prov_did, BytesView req_nonce,
                         const std::string& emsp_did);
  codec::WireValue to_wire() const;
  static GetCredOfferReq from_wire(const codec::WireValue& v);
};

// Sealed interior of GetCredOfferRes.
struct CredOffer {
  std::string emsp_did;
  Bytes offer_nonce;  // 16
  std::string cred_def_id;
  std::string registry_id;
  std::string schema_id;
  crypto::AttributeList attrs;
  Bytes req_nonce;  // echo of the request nonce
  Bytes emsp_sig;

  Bytes signing_bytes() const;
  codec::WireValue to_wire() const;
  static CredOffer from_wire(const codec::WireValue& v);
};

struct GetCredOfferRes {
  Bytes blob;

  codec::WireValue to_wire() const;
  static GetCredOfferRes from_wire(const codec::WireValue& v);
};

// Sealed interior of CreateContractCredentialReq.
struct CredReqInner {
  std::string prov_did;
  Bytes offer_nonce;
  codec::WireValue blinded;
  codec::WireValue blind_proof;
  Bytes sig;  // by the prov_did signing key

  Bytes signing_bytes() const;
  codec::WireValue to_wire() const;
  static CredReqInner from_wire(const codec::WireValue& v);
};

struct CreateContractCredentialReq {
  Bytes blob;

  codec::WireValue to_wire() const;
  static CreateContractCredentialReq from_wire(const codec::WireValue& v);
};

// Sealed interior of CreateContractCredentialRes: the pre-credential, the
// holder's accumulator witness and its version, and the contract channel
// material for billing.
struct CredResInner {
  Bytes offer_nonce;
  codec::WireValue pre_credential;
  codec::WireValue witness;
  uint64_t witness_version = 0;
  Bytes contract_key;  // 32
  Bytes contract_id;   // 16
  Bytes emsp_sig;

  Bytes signing_bytes() const;
  codec::WireValue to_wire() const;
  static CredResInner from_wire(const codec::WireValue& v);
};

struct CreateContractCredentialRes {
  Bytes blob;

  codec::WireValue to_wire() const;
  static CreateContractCredentialRes from_wire(const codec::WireValue& v);
};

// -- charge authorization ----------------------------------------------------

inline constexpr const char* kModeContractProof = "contract-proof";
inline constexpr const char* kModePncPki = "pnc-pki";
inline constexpr const char* kModeExternalPayment = "external-payment";
inline constexpr const char* kModeNone = "none";

struct ServiceDiscoveryReq {
  std::vector<std::string> modes;

  codec::WireValue to_wire() const;
  static ServiceDiscoveryReq from_wire(const codec::WireValue& v);
};

struct ServiceDiscoveryRes {
  std::string mode;

  codec::WireValue to_wire() const;
  static ServiceDiscoveryRes from_wire(const codec::WireValue& v);
};

// EV -> CP. witness_from_version tells the charge point which slice of the
// registry delta log to relay back, so an offline vehicle can refresh its
// witness without its own ledger connection.
struct RequestProofReq {
  Bytes client_ref;  // 16
  uint64_t witness_from_version = 0;

  codec::WireValue to_wire() const;
  static RequestProofReq from_wire(const codec::WireValue& v);
};

// CP -> EV: the proof request plus the registry material the vehicle needs
// (current accumulator, its version, and the delta slice).
struct RequestProofRes {
  Bytes client_ref;
  Bytes session_id;  // 16
  codec::WireValue request;
  codec::WireValue acc;
  uint64_t registry_version = 0;
  std::vector<codec::WireValue> deltas;

  codec::WireValue to_wire() const;
  static RequestProofRes from_wire(const codec::WireValue& v);
};

// EV -> CP. client_note is empty in the honest protocol; the privacy
// fixtures use it as a deliberately leaky side channel the unlinkability
// checker must catch.
struct ValidateContractProofReq {
  Bytes session_id;
  codec::WireValue presentation;
  Bytes auth_blob;  // sealed ContractAuthData, opaque to the CP
  std::string client_note;

  codec::WireValue to_wire() const;
  static ValidateContractProofReq from_wire(const codec::WireValue& v);
};

inline constexpr const char* kStatusAuthorized = "authorized";
inline constexpr const char* kStatusRejected = "rejected";

struct ValidateContractProofRes {
  Bytes session_id;
  std::string status;

  codec::WireValue to_wire() const;
  static ValidateContractProofRes from_wire(const codec::WireValue& v);
};

// -- billing -----------------------------------------------------------------

// CP -> CPO -> EMSP. location carries zero or one entries: the CP fills it
// for its operator, the operator strips it before forwarding, so the
// EMSP-bound record deliberately lacks the field.
struct BillingForwardReq {
  Bytes session_id;
  uint64_t meter_wh = 0;
  std::string emsp_id;
  Bytes request_hash;
  Bytes auth_blob;
  std::vector<std::string> location;

  codec::WireValue to_wire() const;
  static BillingForwardReq from_wire(const codec::WireValue& v);
};

struct BillingAck {
  Bytes session_id;
  bool accepted = false;
  std::string detail;

  codec::WireValue to_wire() const;
  static BillingAck from_wire(const codec::WireValue& v);
};

// -- errors ------------------------------------------------------------------

struct ErrorRes {
  std::string code;
  std::string detail;

  codec::WireValue to_wire() const;
  static ErrorRes from_wire(const codec::WireValue& v);
};

// Human-readable name of field `index` of a record with tag `tag`, for
// observer reports; "f<index>" when unnamed.
std::string record_field_name(uint16_t tag, size_t index);

}  // namespace evssi::actors
