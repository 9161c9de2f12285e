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

#include "evssi/codec.hpp"

#include <map>

#include "doctest.h"
#include "evssi/crypto/rng.hpp"

using namespace evssi;
using codec::CodecError;
using codec::WireValue;

namespace {

// Random value tree for property tests; depth-bounded.
WireValue random_value(crypto::Rng& rng, int depth) {
  int pick = static_cast<int>(rng.below(depth > 3 ? 3 : 5));
  switch (pick) {
    case 0:
      return WireValue::uint_be(rng.bytes(rng.below(9)));
    case 1:
      return WireValue::bytes(rng.bytes(rng.below(40)));
    case 2: {
      std::string s;
      size_t len = rng.below(12);
      for (size_t i = 0; i < len; ++i) {
        s.push_back(static_cast<char>('a' + rng.below(26)));
      }
      return WireValue::str(s);
    }
    case 3: {
      std::vector<WireValue> items;
      size_t count = rng.below(4);
      for (size_t i = 0; i < count; ++i) {
        items.push_back(random_value(rng, depth + 1));
      }
      return WireValue::seq(std::move(items));
    }
    default: {
      std::vector<WireValue> items;
      size_t count = rng.below(4);
      for (size_t i = 0; i < count; ++i) {
        items.push_back(random_value(rng, depth + 1));
      }
      return WireValue::record(codec::kRecAttribute, std::move(items));
    }
  }
}

}  // namespace

TEST_CASE("strings encode as tag, length, raw UTF-8") {
  Bytes got = codec::encode(WireValue::str("EMSP-A"));
  Bytes want = hex_decode("f00200000006454d53502d41");
  CHECK(got == want);
}

TEST_CASE("integer zero has an empty magnitude") {
  Bytes got = codec::encode(WireValue::from_u64(0));
  CHECK(got == hex_decode("f00000000000"));
  CHECK(codec::decode(got).as_u64() == 0);
}

TEST_CASE("integers are minimal big-endian") {
  CHECK(codec::encode(WireValue::from_u64(0x1234)) ==
        hex_decode("f000000000021234"));
  // Factory normalizes away leading zeros.
  CHECK(WireValue::uint_be(hex_decode("000012")) ==
        WireValue::uint_be(hex_decode("12")));
  CHECK(codec::decode(codec::encode(WireValue::from_u64(0xdeadbeefcafe)))
            .as_u64() == 0xdeadbeefcafe);
}

TEST_CASE("round trip is identity over random values") {
  crypto::Rng rng = crypto::Rng::from_u64(7001);
  for (int i = 0; i < 400; ++i) {
    WireValue v = random_value(rng, 0);
    Bytes b = codec::encode(v);
    WireValue back = codec::decode(b);
    CHECK(back == v);
    CHECK(codec::encode(back) == b);
  }
}

TEST_CASE("distinct values never share an encoding") {
  crypto::Rng rng = crypto::Rng::from_u64(7002);
  std::map<Bytes, WireValue> seen;
  for (int i = 0; i < 600; ++i) {
    WireValue v = random_value(rng, 0);
    Bytes b = codec::encode(v);
    auto [it, inserted] = seen.emplace(b, v);
    if (!inserted) CHECK(it->second == v);
  }
  // Same payload bytes under different kinds must still differ.
  CHECK(codec::encode(WireValue::bytes(to_bytes("abc"))) !=
        codec::encode(WireValue::str("abc")));
}

TEST_CASE("decoder rejects non-canonical and malformed input") {
  // Leading zero in an integer magnitude.
  CHECK_THROWS_AS(codec::decode(hex_decode("f000000000020012")), CodecError);
  // Trailing bytes.
  CHECK_THROWS_AS(codec::decode(hex_decode("f0000000000000")), CodecError);
  // Truncated payload.
  CHECK_THROWS_AS(codec::decode(hex_decode("f00100000004aabb")), CodecError);
  // Truncated header.
  CHECK_THROWS_AS(codec::decode(hex_decode("f001")), CodecError);
  // Unknown tag.
  CHECK_THROWS_AS(codec::decode(hex_decode("7fff00000000")), CodecError);
  // Invalid UTF-8: overlong encoding of '/'.
  CHECK_THROWS_AS(codec::decode(hex_decode("f00200000002c0af")), CodecError);
  // Invalid UTF-8: lone continuation byte.
  CHECK_THROWS_AS(codec::decode(hex_decode("f00200000001af")), CodecError);
  // Invalid UTF-8: surrogate half U+D800.
  CHECK_THROWS_AS(codec::decode(hex_decode("f00200000003eda080")), CodecError);
}

TEST_CASE("decoder bounds nesting depth") {
  Bytes evil;
  for (int i = 0; i < 80; ++i) {
    Bytes level;
    append_u16_be(level, codec::kTagSequence);
    append_u32_be(level, static_cast<uint32_t>(evil.size()));
    append(level, evil);
    evil = level;
  }
  CHECK_THROWS_AS(codec::decode(evil), CodecError);
}

TEST_CASE("record construction requires a registered tag") {
  CHECK_THROWS_AS(WireValue::record(0x7777, {}), CodecError);
  CHECK_THROWS_AS(WireValue::record(codec::kTagUint, {}), CodecError);
}

TEST_CASE("mutated encodings never decode to a non-canonical value") {
  crypto::Rng rng = crypto::Rng::from_u64(7003);
  int decoded_ok = 0;
  for (int i = 0; i < 300; ++i) {
    Bytes b = codec::encode(random_value(rng, 0));
    // Flip, truncate, or extend.
    switch (rng.below(3)) {
      case 0:
        if (!b.empty()) b[rng.below(b.size())] ^= 1 << rng.below(8);
        break;
      case 1:
        b.resize(rng.below(b.size() + 1));
        break;
      default:
        b.push_back(static_cast<uint8_t>(rng.below(256)));
        break;
    }
    try {
      WireValue v = codec::decode(b);
      // If it still decodes, it must decode to the canonical form of
      // exactly these bytes.
      CHECK(codec::encode(v) == b);
      ++decoded_ok;
    } catch (const CodecError&) {
      // rejection is the common, correct outcome
    }
  }
  CHECK(decoded_ok < 300);
}

TEST_CASE("envelope round trip and rejection") {
  codec::MessageEnvelope env;
  env.msg_type = codec::kMsgInitNymReq;
  env.sender_hint = "ev1";
  env.payload = WireValue::record(
      codec::kRecAttribute, {WireValue::str("n"), WireValue::str("v")});

  Bytes b = codec::encode_envelope(env);
  codec::MessageEnvelope back = codec::decode_envelope(b);
  CHECK(back == env);

  // Unknown message tag.
  Bytes bad = b;
  bad[0] = 0x7F;
  CHECK_THROWS_AS(codec::decode_envelope(bad), CodecError);

  // Bad version byte.
  bad = b;
  bad[6] ^= 0xFF;
  CHECK_THROWS_AS(codec::decode_envelope(bad), CodecError);

  // Trailing garbage.
  bad = b;
  bad.push_back(0);
  CHECK_THROWS_AS(codec::decode_envelope(bad), CodecError);

  // Data-record tags are not message tags.
  CHECK(!codec::is_message_tag(codec::kRecDid));
  CHECK(codec::is_message_tag(codec::kMsgBillingForwardReq));
}

TEST_CASE("framing overhead stays proportionate at credential-request scale") {
  // A credential-issuance request at production parameters carries a
  // 256-byte group element, a challenge, and two responses of ~74 and
  // ~308 bytes. The framed message must stay within 4x of the ~2.2 KB
  // scale such messages have in practice, and above a quarter of it.
  crypto::Rng rng = crypto::Rng::from_u64(7004);
  codec::MessageEnvelope env;
  env.msg_type = codec::kMsgCreateContractCredentialReq;
  env.sender_hint = "ev1";
  env.payload = WireValue::record(
      codec::kRecBlindedSecret,
      {WireValue::bytes(rng.bytes(256)),   // blinded commitment
       WireValue::bytes(rng.bytes(32)),    // challenge
       WireValue::bytes(rng.bytes(74)),    // secret response
       WireValue::bytes(rng.bytes(308)),   // blinding response
       WireValue::bytes(rng.bytes(16))});  // offer nonce
  size_t size = codec::encode_envelope(env).size();
  CHECK(size >= 2185 / 4);
  CHECK(size <= 2185 * 4);
}
