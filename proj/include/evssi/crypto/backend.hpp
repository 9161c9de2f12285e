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

#include <memory>
#include <span>
#include <stdexcept>
#include <string>

#include "evssi/crypto/rng.hpp"
#include "evssi/crypto/types.hpp"

namespace evssi::crypto {

class CryptoError : public std::runtime_error {
 public:
  enum class Kind {
    InvalidBlinding,   // blinded-secret proof rejected at issuance
    InvalidSignature,  // pre-credential fails the holder's check
    SchemaMismatch,    // attributes disagree with the issuer key
    UnknownElement,    // accumulator operation on an absent element
    Revoked,           // witness update crossed the holder's own removal
    StaleWitness,      // witness does not reach the requested version
    BadInput,          // malformed or out-of-range argument
  };

  CryptoError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// The credential engine behind the protocol. Two implementations exist
// with identical observable contracts:
//
//   "concrete"  the real scheme in a hidden-order RSA group (blinded
//               issuance, selective-disclosure proofs, a dynamic
//               accumulator for revocation);
//   "symbolic"  opaque tokens with an internal perfect-cryptography table,
//               for fast protocol-level analysis.
//
// verify_presentation returns false rather than throwing: a presentation
// from the network is adversarial input, not a programming error.
class CryptoBackend {
 public:
  virtual ~CryptoBackend() = default;

  virtual std::string name() const = 0;
  virtual unsigned modulus_bits() const = 0;

  virtual IssuerKeys issuer_keygen(
      Rng& rng, const std::vector<std::string>& attr_names) = 0;

  virtual RegistryInit registry_init(Rng& rng, const IssuerKeys& issuer) = 0;

  virtual BlindedSecret blind_master_secret(Rng& rng,
                                            const codec::WireValue& issuer_pub,
                                            BytesView offer_nonce) = 0;

  // Verifies the blinding proof (CryptoError{InvalidBlinding} on failure),
  // signs the attributes, and adds the fresh revocation element to the
  // accumulator.
  virtual IssueResult issue_credential(Rng& rng, const IssuerKeys& issuer,
                                       const codec::WireValue& reg_params,
                                       const codec::WireValue& acc,
                                       const codec::WireValue& blinded,
                                       const codec::WireValue& blind_proof,
                                       BytesView offer_nonce,
                                       const AttributeList& attrs) = 0;

  // Holder side: checks the issuer's signature over the blinded secret and
  // assembles the credential. witness_version is the registry version the
  // witness was issued at.
  virtual ContractCredential complete_credential(
      const codec::WireValue& issuer_pub, const codec::WireValue& pending,
      const codec::WireValue& pre_credential, const codec::WireValue& witness,
      uint64_t witness_version) = 0;

  virtual codec::WireValue acc_add(const codec::WireValue& reg_params,
                                   const codec::WireValue& acc,
                                   const codec::WireValue& element) = 0;

  virtual codec::WireValue acc_revoke(const IssuerKeys& issuer,
                                      const codec::WireValue& reg_params,
                                      const codec::WireValue& acc,
                                      const codec::WireValue& element) = 0;

  // Applies a delta-log slice to the credential's witness, in order. The
  // slice must start at witness_version + 1 and end at target_version;
  // gaps raise StaleWitness, a Remove of the credential's own element
  // raises Revoked.
  virtual void witness_update(const codec::WireValue& reg_params,
                              ContractCredential& cred,
                              std::span<const RegistryDelta> deltas,
                              const codec::WireValue& target_acc,
                              uint64_t target_version) = 0;

  virtual Presentation create_presentation(Rng& rng,
                                           const codec::WireValue& issuer_pub,
                                           const codec::WireValue& reg_params,
                                           const codec::WireValue& acc,
                                           const ContractCredential& cred,
                                           const ProofRequest& request) = 0;

  virtual bool verify_presentation(const codec::WireValue& issuer_pub,
                                   const codec::WireValue& reg_params,
                                   const codec::WireValue& acc,
                                   const Presentation& pres,
                                   const ProofRequest& request) = 0;
};

std::unique_ptr<CryptoBackend> make_concrete_backend(unsigned modulus_bits);
std::unique_ptr<CryptoBackend> make_symbolic_backend();
std::unique_ptr<CryptoBackend> make_backend(const std::string& name,
                                            unsigned modulus_bits);

}  // namespace evssi::crypto
