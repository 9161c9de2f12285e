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

#include <array>
#include <limits>

namespace evssi::codec {

namespace {

// Nesting depth bound so hostile input cannot exhaust the stack.
constexpr int kMaxDepth = 64;

struct TagEntry {
  uint16_t tag;
  const char* name;
};

constexpr TagEntry kTagTable[] = {
    {kTagUint, "uint"},
    {kTagBytes, "bytes"},
    {kTagString, "utf8"},
    {kTagSequence, "sequence"},

    {kMsgInitNymReq, "InitNymReq"},
    {kMsgInitNymRes, "InitNymRes"},
    {kMsgRegisterProvisioningDid, "RegisterProvisioningDid"},
    {kMsgWriteVerinymReq, "WriteVerinymReq"},
    {kMsgWriteVerinymRes, "WriteVerinymRes"},
    {kMsgGetCredOfferReq, "GetCredOfferReq"},
    {kMsgGetCredOfferRes, "GetCredOfferRes"},
    {kMsgCreateContractCredentialReq, "CreateContractCredentialReq"},
    {kMsgCreateContractCredentialRes, "CreateContractCredentialRes"},
    {kMsgServiceDiscoveryReq, "ServiceDiscoveryReq"},
    {kMsgServiceDiscoveryRes, "ServiceDiscoveryRes"},
    {kMsgRequestProofReq, "RequestProofReq"},
    {kMsgRequestProofRes, "RequestProofRes"},
    {kMsgValidateContractProofReq, "ValidateContractProofReq"},
    {kMsgValidateContractProofRes, "ValidateContractProofRes"},
    {kMsgBillingForwardReq, "BillingForwardReq"},
    {kMsgBillingAck, "BillingAck"},
    {kMsgErrorRes, "ErrorRes"},

    {kRecDid, "DidRecord"},
    {kRecSchema, "CredentialSchema"},
    {kRecCredDef, "CredentialDefinition"},
    {kRecRegistryDef, "RevocationRegistryDef"},
    {kRecRegistryDelta, "RegistryDelta"},
    {kRecRegistryState, "RegistryState"},
    {kRecProofRequest, "ProofRequest"},
    {kRecPresentation, "Presentation"},
    {kRecContractAuthInner, "ContractAuthInner"},
    {kRecCredOffer, "CredOffer"},
    {kRecPreCredential, "PreCredential"},
    {kRecBlindedSecret, "BlindedSecret"},
    {kRecContractCredential, "ContractCredential"},
    {kRecIssuerPublicKey, "IssuerPublicKey"},
    {kRecIssuerSecretKey, "IssuerSecretKey"},
    {kRecClSignature, "ClSignature"},
    {kRecPresentationProof, "PresentationProof"},
    {kRecNonRevProof, "NonRevProof"},
    {kRecBlindingProof, "BlindingProof"},
    {kRecAccumWitness, "AccumWitness"},
    {kRecAttribute, "Attribute"},

    {kRecSymToken, "SymToken"},
    {kRecSymIssuerPublicKey, "SymIssuerPublicKey"},
    {kRecSymIssuerSecretKey, "SymIssuerSecretKey"},
    {kRecSymRegistryValue, "SymRegistryValue"},
    {kRecSymWitness, "SymWitness"},

    {kRecLedgerWriteEntry, "LedgerWriteEntry"},
    {kRecGenesis, "Genesis"},
    {kRecKeyBundle, "KeyBundle"},

    {kRecTraceEvent, "TraceEvent"},
    {kRecBusMessage, "BusMessage"},
    {kRecActorError, "ActorError"},
    {kRecAdversaryAction, "AdversaryAction"},

    {kRecInitNymInner, "InitNymInner"},
    {kRecProvRegisterInner, "ProvRegisterInner"},
    {kRecProvEndorsement, "ProvEndorsement"},
    {kRecCredReqInner, "CredReqInner"},
    {kRecCredResInner, "CredResInner"},
};

[[noreturn]] void malformed(const std::string& what) {
  throw CodecError(CodecError::Kind::Malformed, "codec: " + what);
}

[[noreturn]] void unknown_tag(uint16_t tag) {
  throw CodecError(CodecError::Kind::UnknownTag,
                   "codec: unknown tag 0x" +
                       hex_encode(Bytes{static_cast<uint8_t>(tag >> 8),
                                        static_cast<uint8_t>(tag)}));
}

// UTF-8 well-formedness per the usual table: rejects overlong forms,
// surrogates, and code points above U+10FFFF.
bool valid_utf8(std::string_view s) {
  size_t i = 0;
  while (i < s.size()) {
    uint8_t b0 = static_cast<uint8_t>(s[i]);
    size_t len;
    uint32_t cp;
    if (b0 < 0x80) {
      i += 1;
      continue;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (size_t k = 1; k < len; ++k) {
      uint8_t b = static_cast<uint8_t>(s[i + k]);
      if ((b & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (b & 0x3F);
    }
    if (len == 2 && cp < 0x80) return false;
    if (len == 3 && cp < 0x800) return false;
    if (len == 4 && cp < 0x10000) return false;
    if (cp >= 0xD800 && cp <= 0xDFFF) return false;
    if (cp > 0x10FFFF) return false;
    i += len;
  }
  return true;
}

void encode_into(const WireValue& v, Bytes& out, int depth);

void encode_header(uint16_t tag, size_t len, Bytes& out) {
  if (len > std::numeric_limits<uint32_t>::max()) {
    malformed("payload too large");
  }
  append_u16_be(out, tag);
  append_u32_be(out, static_cast<uint32_t>(len));
}

void encode_into(const WireValue& v, Bytes& out, int depth) {
  if (depth > kMaxDepth) malformed("nesting too deep");
  switch (v.kind()) {
    case WireValue::Kind::Uint:
      encode_header(kTagUint, v.data().size(), out);
      append(out, v.data());
      break;
    case WireValue::Kind::Bytes:
      encode_header(kTagBytes, v.data().size(), out);
      append(out, v.data());
      break;
    case WireValue::Kind::String:
      encode_header(kTagString, v.text().size(), out);
      append(out, to_bytes(v.text()));
      break;
    case WireValue::Kind::Sequence:
    case WireValue::Kind::Record: {
      Bytes payload;
      for (const WireValue& item : v.items()) {
        encode_into(item, payload, depth + 1);
      }
      uint16_t tag = v.kind() == WireValue::Kind::Sequence ? kTagSequence
                                                           : v.record_tag();
      encode_header(tag, payload.size(), out);
      append(out, payload);
      break;
    }
  }
}

struct Reader {
  BytesView in;
  size_t pos = 0;

  size_t remaining() const { return in.size() - pos; }

  uint16_t read_u16() {
    if (remaining() < 2) malformed("truncated header");
    uint16_t v = static_cast<uint16_t>(in[pos] << 8 | in[pos + 1]);
    pos += 2;
    return v;
  }

  uint32_t read_u32() {
    if (remaining() < 4) malformed("truncated header");
    uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v = v << 8 | in[pos + k];
    pos += 4;
    return v;
  }

  BytesView read_payload(uint32_t len) {
    if (remaining() < len) malformed("length exceeds input");
    BytesView p = in.subspan(pos, len);
    pos += len;
    return p;
  }
};

WireValue decode_one(Reader& r, int depth) {
  if (depth > kMaxDepth) malformed("nesting too deep");
  uint16_t tag = r.read_u16();
  uint32_t len = r.read_u32();
  BytesView payload = r.read_payload(len);

  switch (tag) {
    case kTagUint:
      if (!payload.empty() && payload[0] == 0) {
        malformed("non-minimal integer");
      }
      return WireValue::uint_be(Bytes(payload.begin(), payload.end()));
    case kTagBytes:
      return WireValue::bytes(Bytes(payload.begin(), payload.end()));
    case kTagString: {
      std::string s(payload.begin(), payload.end());
      if (!valid_utf8(s)) malformed("invalid UTF-8");
      return WireValue::str(std::move(s));
    }
    default: {
      if (!tag_registered(tag)) unknown_tag(tag);
      Reader inner{payload, 0};
      std::vector<WireValue> items;
      while (inner.remaining() > 0) {
        items.push_back(decode_one(inner, depth + 1));
      }
      if (tag == kTagSequence) return WireValue::seq(std::move(items));
      return WireValue::record(tag, std::move(items));
    }
  }
}

}  // namespace

const char* tag_name(uint16_t tag) {
  for (const TagEntry& e : kTagTable) {
    if (e.tag == tag) return e.name;
  }
  return nullptr;
}

bool tag_registered(uint16_t tag) { return tag_name(tag) != nullptr; }

bool is_message_tag(uint16_t tag) {
  return tag >= 0x0001 && tag <= 0x00FF && tag_registered(tag);
}

WireValue WireValue::from_u64(uint64_t v) {
  Bytes mag;
  for (int shift = 56; shift >= 0; shift -= 8) {
    uint8_t b = static_cast<uint8_t>(v >> shift);
    if (!mag.empty() || b != 0) mag.push_back(b);
  }
  return uint_be(std::move(mag));
}

WireValue WireValue::uint_be(Bytes magnitude) {
  size_t skip = 0;
  while (skip < magnitude.size() && magnitude[skip] == 0) ++skip;
  if (skip > 0) magnitude.erase(magnitude.begin(), magnitude.begin() + skip);
  WireValue v;
  v.kind_ = Kind::Uint;
  v.data_ = std::move(magnitude);
  return v;
}

WireValue WireValue::bytes(Bytes b) {
  WireValue v;
  v.kind_ = Kind::Bytes;
  v.data_ = std::move(b);
  return v;
}

WireValue WireValue::str(std::string s) {
  WireValue v;
  v.kind_ = Kind::String;
  v.text_ = std::move(s);
  return v;
}

WireValue WireValue::seq(std::vector<WireValue> items) {
  WireValue v;
  v.kind_ = Kind::Sequence;
  v.items_ = std::move(items);
  return v;
}

WireValue WireValue::record(uint16_t tag, std::vector<WireValue> fields) {
  if (tag >= 0xF000 || !tag_registered(tag)) unknown_tag(tag);
  WireValue v;
  v.kind_ = Kind::Record;
  v.tag_ = tag;
  v.items_ = std::move(fields);
  return v;
}

uint16_t WireValue::record_tag() const {
  if (kind_ != Kind::Record) malformed("not a record");
  return tag_;
}

const Bytes& WireValue::data() const {
  if (kind_ != Kind::Uint && kind_ != Kind::Bytes) {
    malformed("not an integer or byte string");
  }
  return data_;
}

const std::string& WireValue::text() const {
  if (kind_ != Kind::String) malformed("not a string");
  return text_;
}

const std::vector<WireValue>& WireValue::items() const {
  if (kind_ != Kind::Sequence && kind_ != Kind::Record) {
    malformed("not a sequence or record");
  }
  return items_;
}

uint64_t WireValue::as_u64() const {
  if (kind_ != Kind::Uint) malformed("not an integer");
  if (data_.size() > 8) malformed("integer exceeds 64 bits");
  uint64_t v = 0;
  for (uint8_t b : data_) v = v << 8 | b;
  return v;
}

bool WireValue::as_bool() const {
  uint64_t v = as_u64();
  if (v > 1) malformed("not a boolean");
  return v == 1;
}

Bytes encode(const WireValue& v) {
  Bytes out;
  encode_into(v, out, 0);
  return out;
}

WireValue decode(BytesView b) {
  Reader r{b, 0};
  WireValue v = decode_one(r, 0);
  if (r.remaining() != 0) malformed("trailing bytes");
  return v;
}

Bytes encode_envelope(const MessageEnvelope& env) {
  if (!is_message_tag(env.msg_type)) unknown_tag(env.msg_type);
  Bytes body;
  body.push_back(kEnvelopeVersion);
  encode_into(WireValue::str(env.sender_hint), body, 0);
  encode_into(env.payload, body, 0);

  Bytes out;
  encode_header(env.msg_type, body.size(), out);
  append(out, body);
  return out;
}

MessageEnvelope decode_envelope(BytesView b) {
  Reader r{b, 0};
  uint16_t msg_type = r.read_u16();
  if (!is_message_tag(msg_type)) unknown_tag(msg_type);
  uint32_t len = r.read_u32();
  BytesView body = r.read_payload(len);
  if (r.remaining() != 0) malformed("trailing bytes after envelope");

  Reader inner{body, 0};
  if (inner.remaining() < 1) malformed("missing envelope version");
  uint8_t version = body[inner.pos++];
  if (version != kEnvelopeVersion) malformed("unsupported envelope version");
  WireValue hint = decode_one(inner, 0);
  if (!hint.is(WireValue::Kind::String)) malformed("bad sender hint");
  WireValue payload = decode_one(inner, 0);
  if (inner.remaining() != 0) malformed("trailing bytes in envelope");

  MessageEnvelope env;
  env.msg_type = msg_type;
  env.sender_hint = hint.text();
  env.payload = std::move(payload);
  return env;
}

}  // namespace evssi::codec
