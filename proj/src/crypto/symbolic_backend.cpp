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

// Symbolic credential backend: perfect cryptography over opaque tokens.
//
// Every cryptographic object is a token (op, key_id, digest). The digest
// is all the wire ever carries; the preimage lives in a table private to
// the backend instance. Creation registers an entry, verification looks
// one up, and a token that was never registered is by definition a
// forgery. This models an attacker who can replay and reshuffle bytes but
// never invert or fabricate cryptography, and it keeps whole-protocol runs
// cheap enough for adversarial sweeps.
//
// The accumulator is a digest of the sorted element set; a witness digests
// the set minus the holder's own element. Witness maintenance follows the
// same delta-log contract as the concrete scheme, including Revoked and
// StaleWitness behavior, so actors cannot tell the backends apart.

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <set>

#include "evssi/crypto/backend.hpp"
#include "evssi/crypto/hash.hpp"

namespace evssi::crypto {

namespace {

using codec::WireValue;

constexpr const char* kOpAccParams = "acc-params";
constexpr const char* kOpBlindCommit = "blind-commit";
constexpr const char* kOpBlindProof = "blind-proof";
constexpr const char* kOpSignature = "cl-sig";
constexpr const char* kOpPresentation = "presentation";

[[noreturn]] void bad_input(const std::string& what) {
  throw CryptoError(CryptoError::Kind::BadInput, what);
}

struct Token {
  std::string op;
  Bytes key_id;
  Bytes digest;
};

WireValue token_to_wire(const Token& t) {
  return WireValue::record(codec::kRecSymToken,
                           {WireValue::str(t.op), WireValue::bytes(t.key_id),
                            WireValue::bytes(t.digest)});
}

std::optional<Token> token_from_wire(const WireValue& v) {
  if (!v.is(WireValue::Kind::Record) ||
      v.record_tag() != codec::kRecSymToken || v.items().size() != 3) {
    return std::nullopt;
  }
  Token t;
  t.op = v.items()[0].text();
  t.key_id = v.items()[1].data();
  t.digest = v.items()[2].data();
  return t;
}

Bytes token_digest(std::string_view op, BytesView key_id,
                   BytesView payload_bytes) {
  return Hasher()
      .update_sized("evssi.sym.token")
      .update_sized(op)
      .update_sized(key_id)
      .update_sized(payload_bytes)
      .final_digest();
}

struct SymIssuerPub {
  Bytes key_id;
  std::vector<std::string> attr_names;
};

SymIssuerPub sym_pub_from_wire(const WireValue& v) {
  if (!v.is(WireValue::Kind::Record) ||
      v.record_tag() != codec::kRecSymIssuerPublicKey ||
      v.items().size() != 2) {
    bad_input("malformed issuer public key");
  }
  SymIssuerPub k;
  k.key_id = v.items()[0].data();
  for (const WireValue& a : v.items()[1].items()) {
    k.attr_names.push_back(a.text());
  }
  return k;
}

class SymbolicBackend final : public CryptoBackend {
 public:
  std::string name() const override { return "symbolic"; }
  unsigned modulus_bits() const override { return 0; }

  IssuerKeys issuer_keygen(
      Rng& rng, const std::vector<std::string>& attr_names) override {
    if (attr_names.empty()) bad_input("issuer_keygen: no attributes");
    Bytes key_id = rng.bytes(16);
    std::vector<WireValue> names;
    for (const std::string& a : attr_names) names.push_back(WireValue::str(a));
    IssuerKeys out;
    out.pub = WireValue::record(
        codec::kRecSymIssuerPublicKey,
        {WireValue::bytes(key_id), WireValue::seq(std::move(names))});
    out.sec = WireValue::record(codec::kRecSymIssuerSecretKey,
                                {WireValue::bytes(key_id)});
    out.attr_names = attr_names;
    return out;
  }

  RegistryInit registry_init(Rng&, const IssuerKeys& issuer) override {
    SymIssuerPub pub = sym_pub_from_wire(issuer.pub);
    RegistryInit out;
    Token params{kOpAccParams, pub.key_id,
                 token_digest(kOpAccParams, pub.key_id, {})};
    out.params = token_to_wire(params);
    out.acc = acc_value(pub.key_id, {});
    return out;
  }

  BlindedSecret blind_master_secret(Rng& rng, const WireValue& issuer_pub,
                                    BytesView offer_nonce) override {
    SymIssuerPub pub = sym_pub_from_wire(issuer_pub);
    Bytes ms = rng.bytes(32);
    Bytes salt = rng.bytes(16);

    WireValue commit_payload = WireValue::record(
        codec::kRecBlindedSecret,
        {WireValue::bytes(ms), WireValue::bytes(salt),
         WireValue::bytes(offer_nonce)});
    Token commit = register_token(kOpBlindCommit, pub.key_id, commit_payload);

    WireValue proof_payload = WireValue::record(
        codec::kRecBlindingProof,
        {WireValue::bytes(commit.digest), WireValue::bytes(offer_nonce)});
    Token proof = register_token(kOpBlindProof, pub.key_id, proof_payload);

    BlindedSecret out;
    out.blinded = token_to_wire(commit);
    out.proof = token_to_wire(proof);
    out.pending = WireValue::record(
        codec::kRecBlindedSecret,
        {WireValue::bytes(ms), WireValue::bytes(commit.digest),
         WireValue::bytes(offer_nonce)});
    return out;
  }

  IssueResult issue_credential(Rng& rng, const IssuerKeys& issuer,
                               const WireValue& reg_params,
                               const WireValue& acc, const WireValue& blinded,
                               const WireValue& blind_proof,
                               BytesView offer_nonce,
                               const AttributeList& attrs) override {
    SymIssuerPub pub = sym_pub_from_wire(issuer.pub);
    check_params(reg_params, pub.key_id);

    auto commit = token_from_wire(blinded);
    auto proof = token_from_wire(blind_proof);
    if (!commit || !proof || commit->op != kOpBlindCommit ||
        proof->op != kOpBlindProof || commit->key_id != pub.key_id ||
        proof->key_id != pub.key_id) {
      throw CryptoError(CryptoError::Kind::InvalidBlinding,
                        "blinding tokens malformed");
    }
    auto commit_payload = lookup(commit->digest);
    auto proof_payload = lookup(proof->digest);
    if (!commit_payload || !proof_payload ||
        proof_payload->items()[0].data() != commit->digest ||
        proof_payload->items()[1].data() !=
            Bytes(offer_nonce.begin(), offer_nonce.end())) {
      throw CryptoError(CryptoError::Kind::InvalidBlinding,
                        "blinded secret proof rejected");
    }

    AttributeList ordered = normalize_attrs(pub.attr_names, attrs);
    Bytes e_rev = rng.bytes(16);

    WireValue sig_payload = WireValue::record(
        codec::kRecClSignature,
        {WireValue::bytes(commit->digest), WireValue::bytes(e_rev),
         attributes_to_wire(ordered)});
    Token sig = register_token(kOpSignature, pub.key_id, sig_payload);

    std::set<Bytes> elements = acc_elements(acc, pub.key_id);
    std::set<Bytes> after = elements;
    if (!after.insert(e_rev).second) bad_input("duplicate accumulator element");

    IssueResult out;
    out.pre_credential = WireValue::record(
        codec::kRecPreCredential,
        {token_to_wire(sig), WireValue::bytes(e_rev),
         attributes_to_wire(ordered)});
    out.witness = witness_value(pub.key_id, e_rev, elements);
    out.new_acc = acc_value(pub.key_id, after);
    out.rev_element = WireValue::bytes(e_rev);
    return out;
  }

  ContractCredential complete_credential(const WireValue& issuer_pub,
                                         const WireValue& pending,
                                         const WireValue& pre_credential,
                                         const WireValue& witness,
                                         uint64_t witness_version) override {
    SymIssuerPub pub = sym_pub_from_wire(issuer_pub);
    if (!pending.is(WireValue::Kind::Record) ||
        pending.record_tag() != codec::kRecBlindedSecret ||
        pending.items().size() != 3) {
      bad_input("malformed pending blinding state");
    }
    Bytes ms = pending.items()[0].data();
    Bytes commit_digest = pending.items()[1].data();

    if (!pre_credential.is(WireValue::Kind::Record) ||
        pre_credential.record_tag() != codec::kRecPreCredential ||
        pre_credential.items().size() != 3) {
      bad_input("malformed pre-credential");
    }
    auto sig = token_from_wire(pre_credential.items()[0]);
    Bytes e_rev = pre_credential.items()[1].data();
    AttributeList attrs = attributes_from_wire(pre_credential.items()[2]);

    if (!sig || sig->op != kOpSignature || sig->key_id != pub.key_id) {
      throw CryptoError(CryptoError::Kind::InvalidSignature,
                        "signature token malformed");
    }
    auto sig_payload = lookup(sig->digest);
    if (!sig_payload || sig_payload->items()[0].data() != commit_digest ||
        sig_payload->items()[1].data() != e_rev ||
        attributes_from_wire(sig_payload->items()[2]) != attrs) {
      throw CryptoError(CryptoError::Kind::InvalidSignature,
                        "pre-credential signature check failed");
    }

    if (attrs.size() != pub.attr_names.size()) {
      throw CryptoError(CryptoError::Kind::SchemaMismatch,
                        "attribute count differs from issuer key");
    }
    for (size_t i = 0; i < attrs.size(); ++i) {
      if (attrs[i].first != pub.attr_names[i]) {
        throw CryptoError(CryptoError::Kind::SchemaMismatch,
                          "attribute order differs from issuer key");
      }
    }
    bool has_emsp = false;
    for (const auto& [name, value] : attrs) {
      if (name == kEmspIdAttribute && !value.empty()) has_emsp = true;
    }
    if (!has_emsp) {
      throw CryptoError(CryptoError::Kind::SchemaMismatch,
                        "credential lacks " + std::string(kEmspIdAttribute));
    }

    ContractCredential cred;
    cred.attrs = attrs;
    cred.master_secret = WireValue::bytes(ms);
    cred.signature = pre_credential.items()[0];
    cred.rev_element = WireValue::bytes(e_rev);
    cred.witness = witness;
    cred.witness_version = witness_version;
    return cred;
  }

  WireValue acc_add(const WireValue& reg_params, const WireValue& acc,
                    const WireValue& element) override {
    Bytes key_id = params_key(reg_params);
    std::set<Bytes> elements = acc_elements(acc, key_id);
    if (!elements.insert(element.data()).second) {
      bad_input("duplicate accumulator element");
    }
    return acc_value(key_id, elements);
  }

  WireValue acc_revoke(const IssuerKeys& issuer, const WireValue& reg_params,
                       const WireValue& acc,
                       const WireValue& element) override {
    SymIssuerPub pub = sym_pub_from_wire(issuer.pub);
    Bytes key_id = params_key(reg_params);
    if (key_id != pub.key_id) bad_input("registry bound to another key");
    std::set<Bytes> elements = acc_elements(acc, key_id);
    if (elements.erase(element.data()) == 0) {
      throw CryptoError(CryptoError::Kind::UnknownElement,
                        "element not in accumulator");
    }
    return acc_value(key_id, elements);
  }

  void witness_update(const WireValue& reg_params, ContractCredential& cred,
                      std::span<const RegistryDelta> deltas,
                      const WireValue& target_acc,
                      uint64_t target_version) override {
    Bytes key_id = params_key(reg_params);
    Bytes own = cred.rev_element.data();

    uint64_t at = cred.witness_version;
    for (const RegistryDelta& d : deltas) {
      if (d.version != at + 1) {
        throw CryptoError(CryptoError::Kind::StaleWitness,
                          "delta log gap at version " + std::to_string(at + 1));
      }
      if (d.op == RegistryDelta::Op::Remove && d.element.data() == own) {
        throw CryptoError(CryptoError::Kind::Revoked,
                          "credential revoked at version " +
                              std::to_string(d.version));
      }
      at = d.version;
    }
    if (at != target_version) {
      throw CryptoError(CryptoError::Kind::StaleWitness,
                        "deltas stop at version " + std::to_string(at));
    }

    std::set<Bytes> elements = acc_elements(target_acc, key_id);
    if (elements.erase(own) == 0) {
      throw CryptoError(CryptoError::Kind::Revoked,
                        "own element absent from accumulator");
    }
    cred.witness = witness_value(key_id, own, elements);
    cred.witness_version = target_version;
  }

  Presentation create_presentation(Rng& rng, const WireValue& issuer_pub,
                                   const WireValue& reg_params,
                                   const WireValue& acc,
                                   const ContractCredential& cred,
                                   const ProofRequest& request) override {
    SymIssuerPub pub = sym_pub_from_wire(issuer_pub);
    Bytes key_id = params_key(reg_params);
    if (cred.witness_version != request.registry_version) {
      throw CryptoError(CryptoError::Kind::StaleWitness,
                        "witness version behind proof request");
    }
    Bytes own = cred.rev_element.data();
    std::set<Bytes> elements = acc_elements(acc, key_id);
    std::set<Bytes> others = elements;
    if (others.erase(own) == 0) {
      throw CryptoError(CryptoError::Kind::StaleWitness,
                        "own element absent from accumulator");
    }
    if (cred.witness != witness_value(key_id, own, others)) {
      throw CryptoError(CryptoError::Kind::StaleWitness,
                        "witness does not open the accumulator");
    }

    AttributeList revealed;
    for (const std::string& name : request.reveal) {
      auto it = std::find_if(cred.attrs.begin(), cred.attrs.end(),
                             [&](const auto& kv) { return kv.first == name; });
      if (it == cred.attrs.end()) bad_input("unknown attribute: " + name);
      revealed.push_back(*it);
    }

    auto sig = token_from_wire(cred.signature);
    if (!sig) bad_input("malformed signature token");

    Bytes request_bytes = request.request_bytes();
    Bytes salt = rng.bytes(32);  // fresh token per presentation
    WireValue payload = WireValue::record(
        codec::kRecPresentationProof,
        {WireValue::bytes(sig->digest), WireValue::bytes(sha256(request_bytes)),
         WireValue::bytes(acc_digest(acc)), WireValue::bytes(own),
         attributes_to_wire(revealed), WireValue::bytes(salt)});
    Token token = register_token(kOpPresentation, pub.key_id, payload);

    Presentation out;
    out.body = token_to_wire(token);
    out.revealed = revealed;
    out.challenge_input_hash = bind_hash(request_bytes, token, revealed);
    return out;
  }

  bool verify_presentation(const WireValue& issuer_pub,
                           const WireValue& reg_params, const WireValue& acc,
                           const Presentation& pres,
                           const ProofRequest& request) override {
    try {
      return verify_inner(issuer_pub, reg_params, acc, pres, request);
    } catch (const std::exception&) {
      return false;
    }
  }

 private:
  Token register_token(const std::string& op, const Bytes& key_id,
                       const WireValue& payload) {
    Bytes payload_bytes = codec::encode(payload);
    Token t{op, key_id, token_digest(op, key_id, payload_bytes)};
    std::lock_guard<std::mutex> lock(mu_);
    table_[t.digest] = payload;
    return t;
  }

  std::optional<WireValue> lookup(const Bytes& digest) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = table_.find(digest);
    if (it == table_.end()) return std::nullopt;
    return it->second;
  }

  static Bytes params_key(const WireValue& reg_params) {
    auto t = token_from_wire(reg_params);
    if (!t || t->op != kOpAccParams) bad_input("malformed registry parameters");
    return t->key_id;
  }

  void check_params(const WireValue& reg_params, const Bytes& key_id) {
    if (params_key(reg_params) != key_id) {
      bad_input("registry bound to another key");
    }
  }

  static Bytes acc_digest(const WireValue& acc) {
    if (!acc.is(WireValue::Kind::Record) ||
        acc.record_tag() != codec::kRecSymRegistryValue ||
        acc.items().size() != 1) {
      bad_input("malformed accumulator value");
    }
    return acc.items()[0].data();
  }

  WireValue acc_value(const Bytes& key_id, const std::set<Bytes>& elements) {
    Hasher h;
    h.update_sized("evssi.sym.acc").update_sized(key_id);
    for (const Bytes& e : elements) h.update_sized(e);
    Bytes digest = h.final_digest();
    {
      std::lock_guard<std::mutex> lock(mu_);
      sets_[digest] = elements;
    }
    return WireValue::record(codec::kRecSymRegistryValue,
                             {WireValue::bytes(digest)});
  }

  std::set<Bytes> acc_elements(const WireValue& acc, const Bytes& key_id) {
    Bytes digest = acc_digest(acc);
    std::lock_guard<std::mutex> lock(mu_);
    auto it = sets_.find(digest);
    if (it == sets_.end()) bad_input("unknown accumulator value");
    (void)key_id;
    return it->second;
  }

  WireValue witness_value(const Bytes& key_id, const Bytes& own,
                          const std::set<Bytes>& others) {
    Hasher h;
    h.update_sized("evssi.sym.witness").update_sized(key_id).update_sized(own);
    for (const Bytes& e : others) h.update_sized(e);
    return WireValue::record(codec::kRecSymWitness,
                             {WireValue::bytes(own),
                              WireValue::bytes(h.final_digest())});
  }

  static Bytes bind_hash(BytesView request_bytes, const Token& token,
                         const AttributeList& revealed) {
    Hasher h;
    h.update_sized("evssi.sym.pres.bind")
        .update_sized(request_bytes)
        .update_sized(token.digest);
    for (const auto& [name, value] : revealed) {
      h.update_sized(name).update_sized(value);
    }
    return h.final_digest();
  }

  static AttributeList normalize_attrs(
      const std::vector<std::string>& attr_names, const AttributeList& attrs) {
    if (attrs.size() != attr_names.size()) {
      throw CryptoError(CryptoError::Kind::SchemaMismatch,
                        "attribute count differs from issuer key");
    }
    AttributeList ordered;
    for (const std::string& name : attr_names) {
      auto it = std::find_if(attrs.begin(), attrs.end(),
                             [&](const auto& kv) { return kv.first == name; });
      if (it == attrs.end()) {
        throw CryptoError(CryptoError::Kind::SchemaMismatch,
                          "missing attribute " + name);
      }
      ordered.push_back(*it);
    }
    bool has_emsp = false;
    for (const auto& [name, value] : ordered) {
      if (name == kEmspIdAttribute && !value.empty()) has_emsp = true;
    }
    if (!has_emsp) {
      throw CryptoError(CryptoError::Kind::SchemaMismatch,
                        "credential lacks " + std::string(kEmspIdAttribute));
    }
    return ordered;
  }

  bool verify_inner(const WireValue& issuer_pub, const WireValue& reg_params,
                    const WireValue& acc, const Presentation& pres,
                    const ProofRequest& request) {
    SymIssuerPub pub = sym_pub_from_wire(issuer_pub);
    Bytes key_id = params_key(reg_params);
    if (key_id != pub.key_id) return false;

    if (pres.revealed.size() != request.reveal.size()) return false;
    for (size_t i = 0; i < request.reveal.size(); ++i) {
      if (pres.revealed[i].first != request.reveal[i]) return false;
    }

    auto token = token_from_wire(pres.body);
    if (!token || token->op != kOpPresentation || token->key_id != pub.key_id) {
      return false;
    }
    auto payload = lookup(token->digest);
    if (!payload || payload->record_tag() != codec::kRecPresentationProof ||
        payload->items().size() != 6) {
      return false;
    }

    Bytes sig_digest = payload->items()[0].data();
    Bytes req_digest = payload->items()[1].data();
    Bytes bound_acc = payload->items()[2].data();
    Bytes own = payload->items()[3].data();
    AttributeList bound_revealed = attributes_from_wire(payload->items()[4]);

    if (req_digest != sha256(request.request_bytes())) return false;
    if (bound_acc != acc_digest(acc)) return false;
    if (bound_revealed != pres.revealed) return false;

    auto sig_payload = lookup(sig_digest);
    if (!sig_payload || sig_payload->record_tag() != codec::kRecClSignature) {
      return false;
    }
    if (sig_payload->items()[1].data() != own) return false;
    AttributeList attrs = attributes_from_wire(sig_payload->items()[2]);
    for (const auto& [name, value] : pres.revealed) {
      auto it = std::find_if(attrs.begin(), attrs.end(),
                             [&](const auto& kv) { return kv.first == name; });
      if (it == attrs.end() || it->second != value) return false;
    }

    // Non-revocation: the holder's element must still be accumulated.
    std::set<Bytes> elements = acc_elements(acc, key_id);
    if (elements.find(own) == elements.end()) return false;

    Bytes chi = bind_hash(request.request_bytes(), *token, pres.revealed);
    if (!ct_equal(chi, pres.challenge_input_hash)) return false;
    return true;
  }

  mutable std::mutex mu_;
  std::map<Bytes, WireValue> table_;
  std::map<Bytes, std::set<Bytes>> sets_;
};

}  // namespace

std::unique_ptr<CryptoBackend> make_symbolic_backend() {
  return std::make_unique<SymbolicBackend>();
}

}  // namespace evssi::crypto
