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
#include <stdexcept>
#include <string>
#include <vector>

#include "evssi/bytes.hpp"

// Canonical wire format used everywhere a structure crosses an actor
// boundary: protocol messages, ledger objects, keystores, trace exports,
// and every hash or signature input. Each value is a TLV item:
//
//   tag (u16, big-endian) || length (u32, big-endian) || payload
//
// Four base kinds carry reserved tags in the 0xF000 range; every composite
// structure is a "record": a registered tag below 0xF000 whose payload is
// the concatenation of its field encodings in fixed order. Encoding is
// total and deterministic, so equal values always produce equal bytes and
// distinct values never collide. The decoder accepts exactly the canonical
// form: non-minimal integers, truncated or oversized lengths, trailing
// bytes, invalid UTF-8 and unknown tags are all hard errors, never
// best-effort repairs.

namespace evssi::codec {

// -- base kind tags ---------------------------------------------------------

inline constexpr uint16_t kTagUint = 0xF000;      // big-endian, no leading 0
inline constexpr uint16_t kTagBytes = 0xF001;     // opaque octets
inline constexpr uint16_t kTagString = 0xF002;    // well-formed UTF-8
inline constexpr uint16_t kTagSequence = 0xF003;  // ordered heterogeneous

// -- protocol message tags (0x0001 .. 0x00FF) -------------------------------

inline constexpr uint16_t kMsgInitNymReq = 0x0001;
inline constexpr uint16_t kMsgInitNymRes = 0x0002;
inline constexpr uint16_t kMsgRegisterProvisioningDid = 0x0003;
inline constexpr uint16_t kMsgWriteVerinymReq = 0x0004;
inline constexpr uint16_t kMsgWriteVerinymRes = 0x0005;
inline constexpr uint16_t kMsgGetCredOfferReq = 0x0006;
inline constexpr uint16_t kMsgGetCredOfferRes = 0x0007;
inline constexpr uint16_t kMsgCreateContractCredentialReq = 0x0008;
inline constexpr uint16_t kMsgCreateContractCredentialRes = 0x0009;
inline constexpr uint16_t kMsgServiceDiscoveryReq = 0x000A;
inline constexpr uint16_t kMsgServiceDiscoveryRes = 0x000B;
inline constexpr uint16_t kMsgRequestProofReq = 0x000C;
inline constexpr uint16_t kMsgRequestProofRes = 0x000D;
inline constexpr uint16_t kMsgValidateContractProofReq = 0x000E;
inline constexpr uint16_t kMsgValidateContractProofRes = 0x000F;
inline constexpr uint16_t kMsgBillingForwardReq = 0x0010;
inline constexpr uint16_t kMsgBillingAck = 0x0011;
inline constexpr uint16_t kMsgErrorRes = 0x001F;

// -- data record tags (0x0100 .. 0x01FF) ------------------------------------

inline constexpr uint16_t kRecDid = 0x0101;
inline constexpr uint16_t kRecSchema = 0x0102;
inline constexpr uint16_t kRecCredDef = 0x0103;
inline constexpr uint16_t kRecRegistryDef = 0x0104;
inline constexpr uint16_t kRecRegistryDelta = 0x0105;
inline constexpr uint16_t kRecRegistryState = 0x0106;
inline constexpr uint16_t kRecProofRequest = 0x0110;
inline constexpr uint16_t kRecPresentation = 0x0111;
inline constexpr uint16_t kRecContractAuthInner = 0x0112;
inline constexpr uint16_t kRecCredOffer = 0x0113;
inline constexpr uint16_t kRecPreCredential = 0x0114;
inline constexpr uint16_t kRecBlindedSecret = 0x0115;
inline constexpr uint16_t kRecContractCredential = 0x0116;
inline constexpr uint16_t kRecIssuerPublicKey = 0x0117;
inline constexpr uint16_t kRecIssuerSecretKey = 0x0118;
inline constexpr uint16_t kRecClSignature = 0x0119;
inline constexpr uint16_t kRecPresentationProof = 0x011A;
inline constexpr uint16_t kRecNonRevProof = 0x011B;
inline constexpr uint16_t kRecBlindingProof = 0x011C;
inline constexpr uint16_t kRecAccumWitness = 0x011D;
inline constexpr uint16_t kRecAttribute = 0x011E;

inline constexpr uint16_t kRecSymToken = 0x0130;
inline constexpr uint16_t kRecSymIssuerPublicKey = 0x0131;
inline constexpr uint16_t kRecSymIssuerSecretKey = 0x0132;
inline constexpr uint16_t kRecSymRegistryValue = 0x0133;
inline constexpr uint16_t kRecSymWitness = 0x0134;

inline constexpr uint16_t kRecLedgerWriteEntry = 0x0140;
inline constexpr uint16_t kRecGenesis = 0x0141;
inline constexpr uint16_t kRecKeyBundle = 0x0142;

inline constexpr uint16_t kRecTraceEvent = 0x0150;
inline constexpr uint16_t kRecBusMessage = 0x0151;
inline constexpr uint16_t kRecActorError = 0x0152;
inline constexpr uint16_t kRecAdversaryAction = 0x0153;

// Encrypted-payload interiors and signing forms used by the actor layer.
inline constexpr uint16_t kRecInitNymInner = 0x0160;
inline constexpr uint16_t kRecProvRegisterInner = 0x0161;
inline constexpr uint16_t kRecProvEndorsement = 0x0162;  // signing form only
inline constexpr uint16_t kRecCredReqInner = 0x0163;
inline constexpr uint16_t kRecCredResInner = 0x0164;

// Name for a registered tag, or nullptr when the tag is unknown.
const char* tag_name(uint16_t tag);
bool tag_registered(uint16_t tag);
bool is_message_tag(uint16_t tag);

class CodecError : public std::runtime_error {
 public:
  enum class Kind {
    Malformed,   // truncation, trailing bytes, bad length, non-minimal
                 // integer, invalid UTF-8, nesting too deep
    UnknownTag,  // tag absent from the registry
  };

  CodecError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// A decoded value. Uint magnitudes are stored big-endian with no leading
// zero byte (zero is the empty magnitude); factories normalize, the
// decoder rejects. Equality is structural.
class WireValue {
 public:
  enum class Kind { Uint, Bytes, String, Sequence, Record };

  WireValue() : kind_(Kind::Uint) {}  // the integer zero

  static WireValue from_u64(uint64_t v);
  static WireValue from_bool(bool v) { return from_u64(v ? 1 : 0); }
  static WireValue uint_be(Bytes magnitude);  // strips leading zeros
  static WireValue bytes(Bytes b);
  static WireValue bytes(BytesView b) { return bytes(Bytes(b.begin(), b.end())); }
  static WireValue str(std::string s);
  static WireValue seq(std::vector<WireValue> items);
  static WireValue record(uint16_t tag, std::vector<WireValue> fields);

  Kind kind() const { return kind_; }
  bool is(Kind k) const { return kind_ == k; }

  // Accessors throw CodecError{Malformed} on kind mismatch so message
  // parsers can treat shape errors uniformly.
  uint16_t record_tag() const;
  const Bytes& data() const;                    // Uint | Bytes payload
  const std::string& text() const;              // String
  const std::vector<WireValue>& items() const;  // Sequence | Record
  uint64_t as_u64() const;                      // Uint that fits 64 bits
  bool as_bool() const;                         // Uint 0 or 1

  bool operator==(const WireValue&) const = default;

 private:
  Kind kind_;
  uint16_t tag_ = 0;
  Bytes data_;
  std::string text_;
  std::vector<WireValue> items_;
};

Bytes encode(const WireValue& v);

// Decodes exactly one value; trailing bytes are Malformed.
WireValue decode(BytesView b);

// -- message envelope -------------------------------------------------------
//
// What actually travels on the bus:
//
//   msg_type (u16 BE) || length (u32 BE) || version (0x01)
//                     || TLV(sender_hint string) || TLV(payload)
//
// sender_hint is routing metadata (an actor name), never trusted for
// authentication.

inline constexpr uint8_t kEnvelopeVersion = 0x01;

struct MessageEnvelope {
  uint16_t msg_type = 0;
  std::string sender_hint;
  WireValue payload;

  bool operator==(const MessageEnvelope&) const = default;
};

Bytes encode_envelope(const MessageEnvelope& env);
MessageEnvelope decode_envelope(BytesView b);

}  // namespace evssi::codec
