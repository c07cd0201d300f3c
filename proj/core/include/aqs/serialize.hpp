#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqs/chained_cipher.hpp"
#include "aqs/forgery.hpp"
#include "aqs/protocol.hpp"
#include "aqs/state_vector.hpp"

namespace aqs {

using OrderedJson = nlohmann::ordered_json;

/// Shortest round-trip decimal form, printf "%.17g".
std::string format_g17(double value);

OrderedJson json_of(const PermutationKey& key);
OrderedJson json_of(const Bits& bits);
OrderedJson json_of(const StateVector& state);  // amplitudes as [re, im] pairs
OrderedJson json_of(const std::vector<BellOutcome>& outcomes);
OrderedJson json_of(const FixedPointCensus& census);

/// Full output documents: {"schema_version": 1, "kind": ..., ...}.
OrderedJson json_of(const ProtocolTranscript& transcript);
OrderedJson json_of(const AttackReport& report);

PermutationKey key_from_json(const nlohmann::json& node);
Bits bits_from_json(const nlohmann::json& node);
StateVector state_from_json(const nlohmann::json& node);

/// Two-space indentation, keys in insertion order, floats via format_g17;
/// equal documents serialize byte-identically.
std::string canonical_dump(const OrderedJson& doc);

/// canonical_dump plus trailing newline, written to `path`, or to standard
/// output when `path` is "-".
void write_document(const OrderedJson& doc, const std::string& path);

}  // namespace aqs
