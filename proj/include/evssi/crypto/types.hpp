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
#include <utility>
#include <vector>

#include "evssi/bytes.hpp"
#include "evssi/codec.hpp"

namespace evssi::crypto {

// Attribute values are strings at the API surface; backends map them into
// their message space. "emsp_id" is mandatory in every contract credential
// and is the attribute charge points ask to be revealed.
using AttributeList = std::vector<std::pair<std::string, std::string>>;

inline constexpr const char* kEmspIdAttribute = "emsp_id";
inline constexpr size_t kContractIdSize = 16;
inline constexpr size_t kNonceSize = 16;

codec::WireValue attributes_to_wire(const AttributeList& attrs);
AttributeList attributes_from_wire(const codec::WireValue& v);

// Issuer keypair. `pub` is published on the ledger inside the credential
// definition; `sec` never leaves the issuer.
struct IssuerKeys {
  codec::WireValue pub;
  codec::WireValue sec;
  std::vector<std::string> attr_names;  // named slots, excludes hidden ones
};

// Fresh revocation registry: public parameters plus the empty accumulator.
struct RegistryInit {
  codec::WireValue params;
  codec::WireValue acc;
};

// One accumulator change, as recorded on the ledger. `acc_after` carries
// the post-change value so holders can update witnesses from the delta
// log alone.
struct RegistryDelta {
  uint64_t version = 0;
  enum class Op : uint8_t { Add = 0, Remove = 1 } op = Op::Add;
  codec::WireValue element;
  codec::WireValue acc_after;

  bool operator==(const RegistryDelta&) const = default;
};

codec::WireValue registry_delta_to_wire(const RegistryDelta& d);
RegistryDelta registry_delta_from_wire(const codec::WireValue& v);

// Holder-side output of blinding the master secret. `blinded` and `proof`
// go to the issuer; `pending` stays in the wallet until the credential
// arrives.
struct BlindedSecret {
  codec::WireValue blinded;
  codec::WireValue proof;
  codec::WireValue pending;
};

// Issuer-side output of signing a credential: the pre-credential the
// holder finishes, the holder's accumulator witness, and the accumulator
// value after adding the credential's revocation element.
struct IssueResult {
  codec::WireValue pre_credential;
  codec::WireValue witness;
  codec::WireValue new_acc;
  codec::WireValue rev_element;
};

// A completed contract credential at rest in a wallet. contract_key and
// contract_id arrive alongside the credential and tie presentations to
// the billing path; they are filled by the wallet, not the backend.
struct ContractCredential {
  AttributeList attrs;
  codec::WireValue master_secret;
  codec::WireValue signature;
  codec::WireValue rev_element;
  codec::WireValue witness;
  uint64_t witness_version = 0;
  Bytes contract_key;
  Bytes contract_id;
  std::string cred_def_id;
  std::string registry_id;
  std::string schema_id;

  codec::WireValue to_wire() const;
  static ContractCredential from_wire(const codec::WireValue& v);
};

// What a verifier asks for. request_bytes() is the canonical encoding
// every signature-of-knowledge binds to.
struct ProofRequest {
  Bytes nonce;
  std::vector<std::string> reveal;
  std::string cred_def_id;
  std::string registry_id;
  uint64_t registry_version = 0;

  codec::WireValue to_wire() const;
  static ProofRequest from_wire(const codec::WireValue& v);
  Bytes request_bytes() const { return codec::encode(to_wire()); }
};

// A selective-disclosure presentation. `body` is backend-specific;
// `challenge_input_hash` commits to the request and commitment values the
// challenge was derived from, and is re-derived during verification.
struct Presentation {
  codec::WireValue body;
  AttributeList revealed;
  Bytes challenge_input_hash;

  codec::WireValue to_wire() const;
  static Presentation from_wire(const codec::WireValue& v);
};

}  // namespace evssi::crypto
