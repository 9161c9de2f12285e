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

#include "evssi/crypto/types.hpp"

namespace evssi::crypto {

namespace {

using codec::CodecError;
using codec::WireValue;

[[noreturn]] void bad_shape(const char* what) {
  throw CodecError(CodecError::Kind::Malformed, std::string("codec: ") + what);
}

const WireValue& field(const WireValue& rec, size_t i) {
  if (rec.items().size() <= i) bad_shape("missing field");
  return rec.items()[i];
}

void expect_record(const WireValue& v, uint16_t tag) {
  if (!v.is(WireValue::Kind::Record) || v.record_tag() != tag) {
    bad_shape("unexpected record tag");
  }
}

void expect_field_count(const WireValue& v, size_t n) {
  if (v.items().size() != n) bad_shape("wrong field count");
}

}  // namespace

codec::WireValue attributes_to_wire(const AttributeList& attrs) {
  std::vector<WireValue> items;
  items.reserve(attrs.size());
  for (const auto& [name, value] : attrs) {
    items.push_back(WireValue::record(
        codec::kRecAttribute, {WireValue::str(name), WireValue::str(value)}));
  }
  return WireValue::seq(std::move(items));
}

AttributeList attributes_from_wire(const codec::WireValue& v) {
  if (!v.is(WireValue::Kind::Sequence)) bad_shape("attributes not a sequence");
  AttributeList out;
  out.reserve(v.items().size());
  for (const WireValue& item : v.items()) {
    expect_record(item, codec::kRecAttribute);
    expect_field_count(item, 2);
    out.emplace_back(field(item, 0).text(), field(item, 1).text());
  }
  return out;
}

codec::WireValue registry_delta_to_wire(const RegistryDelta& d) {
  return WireValue::record(
      codec::kRecRegistryDelta,
      {WireValue::from_u64(d.version),
       WireValue::from_u64(static_cast<uint64_t>(d.op)), d.element,
       d.acc_after});
}

RegistryDelta registry_delta_from_wire(const codec::WireValue& v) {
  expect_record(v, codec::kRecRegistryDelta);
  expect_field_count(v, 4);
  RegistryDelta d;
  d.version = field(v, 0).as_u64();
  uint64_t op = field(v, 1).as_u64();
  if (op > 1) bad_shape("bad delta op");
  d.op = static_cast<RegistryDelta::Op>(op);
  d.element = field(v, 2);
  d.acc_after = field(v, 3);
  return d;
}

codec::WireValue ContractCredential::to_wire() const {
  return WireValue::record(
      codec::kRecContractCredential,
      {attributes_to_wire(attrs), master_secret, signature, rev_element,
       witness, WireValue::from_u64(witness_version),
       WireValue::bytes(contract_key), WireValue::bytes(contract_id),
       WireValue::str(cred_def_id), WireValue::str(registry_id),
       WireValue::str(schema_id)});
}

ContractCredential ContractCredential::from_wire(const codec::WireValue& v) {
  expect_record(v, codec::kRecContractCredential);
  expect_field_count(v, 11);
  ContractCredential c;
  c.attrs = attributes_from_wire(field(v, 0));
  c.master_secret = field(v, 1);
  c.signature = field(v, 2);
  c.rev_element = field(v, 3);
  c.witness = field(v, 4);
  c.witness_version = field(v, 5).as_u64();
  c.contract_key = field(v, 6).data();
  c.contract_id = field(v, 7).data();
  c.cred_def_id = field(v, 8).text();
  c.registry_id = field(v, 9).text();
  c.schema_id = field(v, 10).text();
  return c;
}

codec::WireValue ProofRequest::to_wire() const {
  std::vector<WireValue> names;
  names.reserve(reveal.size());
  for (const std::string& r : reveal) names.push_back(WireValue::str(r));
  return WireValue::record(
      codec::kRecProofRequest,
      {WireValue::bytes(nonce), WireValue::seq(std::move(names)),
       WireValue::str(cred_def_id), WireValue::str(registry_id),
       WireValue::from_u64(registry_version)});
}

ProofRequest ProofRequest::from_wire(const codec::WireValue& v) {
  expect_record(v, codec::kRecProofRequest);
  expect_field_count(v, 5);
  ProofRequest r;
  r.nonce = field(v, 0).data();
  for (const WireValue& name : field(v, 1).items()) {
    r.reveal.push_back(name.text());
  }
  r.cred_def_id = field(v, 2).text();
  r.registry_id = field(v, 3).text();
  r.registry_version = field(v, 4).as_u64();
  return r;
}

codec::WireValue Presentation::to_wire() const {
  return WireValue::record(codec::kRecPresentation,
                           {body, attributes_to_wire(revealed),
                            WireValue::bytes(challenge_input_hash)});
}

Presentation Presentation::from_wire(const codec::WireValue& v) {
  expect_record(v, codec::kRecPresentation);
  expect_field_count(v, 3);
  Presentation p;
  p.body = field(v, 0);
  p.revealed = attributes_from_wire(field(v, 1));
  p.challenge_input_hash = field(v, 2).data();
  return p;
}

}  // namespace evssi::crypto
