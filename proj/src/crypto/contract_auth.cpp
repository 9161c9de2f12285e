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

#include "evssi/crypto/contract_auth.hpp"

#include "evssi/codec.hpp"
#include "evssi/crypto/conventional.hpp"
#include "evssi/crypto/hash.hpp"
#include "evssi/crypto/types.hpp"

namespace evssi::crypto {

namespace {

using codec::WireValue;

Bytes auth_tag(BytesView contract_key, BytesView request_hash,
               BytesView contract_id, uint64_t timestamp) {
  Bytes framed = Hasher()
                     .update_sized("evssi.contract-auth")
                     .update_sized(request_hash)
                     .update_sized(contract_id)
                     .update_sized(u64_be(timestamp))
                     .final_digest();
  return hmac_sha256(contract_key, framed);
}

}  // namespace

const char* auth_result_name(AuthResult r) {
  switch (r) {
    case AuthResult::Ok: return "ok";
    case AuthResult::DecryptFailed: return "decrypt-failed";
    case AuthResult::UnknownContract: return "unknown-contract";
    case AuthResult::BadTag: return "bad-tag";
    case AuthResult::Expired: return "expired";
    case AuthResult::Replayed: return "replayed";
  }
  return "unknown";
}

Bytes make_contract_auth(BytesView contract_key, BytesView contract_id,
                         BytesView request_hash, uint64_t timestamp,
                         BytesView emsp_enc_pk, Rng& rng) {
  Bytes tag = auth_tag(contract_key, request_hash, contract_id, timestamp);
  WireValue inner = WireValue::record(
      codec::kRecContractAuthInner,
      {WireValue::bytes(contract_id), WireValue::from_u64(timestamp),
       WireValue::bytes(request_hash), WireValue::bytes(tag)});
  return pk_encrypt(emsp_enc_pk, codec::encode(inner), rng);
}

AuthCheckOutcome check_contract_auth(BytesView emsp_enc_sk, BytesView blob,
                                     BytesView expected_request_hash,
                                     const ContractKeyLookup& key_for,
                                     uint64_t now, uint64_t window,
                                     SeenTags& seen) {
  AuthCheckOutcome out{AuthResult::DecryptFailed, {}, 0};

  std::optional<Bytes> plain = pk_decrypt(emsp_enc_sk, blob);
  if (!plain) return out;

  Bytes contract_id, request_hash, tag;
  uint64_t timestamp = 0;
  try {
    WireValue inner = codec::decode(*plain);
    if (!inner.is(WireValue::Kind::Record) ||
        inner.record_tag() != codec::kRecContractAuthInner ||
        inner.items().size() != 4) {
      return out;
    }
    contract_id = inner.items()[0].data();
    timestamp = inner.items()[1].as_u64();
    request_hash = inner.items()[2].data();
    tag = inner.items()[3].data();
  } catch (const codec::CodecError&) {
    return out;
  }

  out.contract_id = contract_id;
  out.timestamp = timestamp;

  std::optional<Bytes> key = key_for(contract_id);
  if (!key) {
    out.result = AuthResult::UnknownContract;
    return out;
  }

  // The tag must bind the request hash the charge point reported, not
  // just the one inside the sealed record.
  if (request_hash != Bytes(expected_request_hash.begin(),
                            expected_request_hash.end()) ||
      !ct_equal(auth_tag(*key, request_hash, contract_id, timestamp), tag)) {
    out.result = AuthResult::BadTag;
    return out;
  }

  uint64_t lo = now >= window ? now - window : 0;
  uint64_t hi = now + window;
  if (timestamp < lo || timestamp > hi) {
    out.result = AuthResult::Expired;
    return out;
  }

  if (!seen.insert(tag).second) {
    out.result = AuthResult::Replayed;
    return out;
  }

  out.result = AuthResult::Ok;
  return out;
}

}  // namespace evssi::crypto
