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
#include <functional>
#include <optional>
#include <set>

#include "evssi/bytes.hpp"
#include "evssi/crypto/rng.hpp"

namespace evssi::crypto {

// Billing authorization: alongside each presentation, the vehicle seals a
// record to its mobility provider that only the provider can open —
//
//   { contract_id, timestamp, request_hash,
//     tag = HMAC(contract_key, request_hash || contract_id || timestamp) }
//
// The charge point forwards the blob opaquely with the billing data. The
// provider resolves contract_id to the contract key it handed out at
// issuance, checks the tag against the request hash the charge point
// reports, bounds the timestamp, and rejects tags it has seen before.
// The charge point learns nothing that links two charging sessions; the
// provider learns which contract charged, which is exactly the linkage
// billing requires.

inline constexpr uint64_t kDefaultAuthWindow = 86400;  // seconds, each way

Bytes make_contract_auth(BytesView contract_key, BytesView contract_id,
                         BytesView request_hash, uint64_t timestamp,
                         BytesView emsp_enc_pk, Rng& rng);

enum class AuthResult {
  Ok,
  DecryptFailed,
  UnknownContract,
  BadTag,
  Expired,
  Replayed,
};

const char* auth_result_name(AuthResult r);

struct AuthCheckOutcome {
  AuthResult result;
  Bytes contract_id;       // filled when decryption succeeded
  uint64_t timestamp = 0;  // likewise
};

// Tags accepted so far; the replay guard.
using SeenTags = std::set<Bytes>;

using ContractKeyLookup =
    std::function<std::optional<Bytes>(const Bytes& contract_id)>;

AuthCheckOutcome check_contract_auth(BytesView emsp_enc_sk, BytesView blob,
                                     BytesView expected_request_hash,
                                     const ContractKeyLookup& key_for,
                                     uint64_t now, uint64_t window,
                                     SeenTags& seen);

}  // namespace evssi::crypto
