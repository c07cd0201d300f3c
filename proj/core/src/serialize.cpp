#include "aqs/serialize.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <utility>

namespace aqs {

namespace {

bool is_container(const OrderedJson& v) { return v.is_array() || v.is_object(); }

void append_scalar(const OrderedJson& v, std::string& out) {
    if (v.is_number_float()) {
        const double d = v.get<double>();
        out += std::isfinite(d) ? format_g17(d) : "null";
    } else {
        out += v.dump();  // integers, booleans, strings (escaped), null
    }
}

void write_value(const OrderedJson& v, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    const std::string inner(static_cast<std::size_t>(indent) + 2, ' ');
    if (v.is_object()) {
        if (v.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [key, value] : v.items()) {
            if (!first) {
                out += ",\n";
            }
            first = false;
            out += inner;
            out += OrderedJson(key).dump();
            out += ": ";
            write_value(value, out, indent + 2);
        }
        out += '\n';
        out += pad;
        out += '}';
        return;
    }
    if (v.is_array()) {
        if (v.empty()) {
            out += "[]";
            return;
        }
        bool flat = true;
        for (const OrderedJson& item : v) {
            if (is_container(item)) {
                flat = false;
                break;
            }
        }
        if (flat) {
            out += '[';
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i > 0) {
                    out += ", ";
                }
                append_scalar(v[i], out);
            }
            out += ']';
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i > 0) {
                out += ",\n";
            }
            out += inner;
            write_value(v[i], out, indent + 2);
        }
        out += '\n';
        out += pad;
        out += ']';
        return;
    }
    append_scalar(v, out);
}

OrderedJson json_of_verdict(const Verdict& verdict) {
    return OrderedJson{{"v_bit", verdict.v_bit},
                       {"accepted", verdict.accepted},
                       {"reason", std::string(to_string(verdict.reason))}};
}

double number_from(const nlohmann::json& node, const char* what) {
    if (!node.is_number()) {
        throw IoError(std::string("expected a number for ") + what);
    }
    return node.get<double>();
}

}  // namespace

std::string format_g17(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

OrderedJson json_of(const PermutationKey& key) {
    return OrderedJson(key.mapping());
}

OrderedJson json_of(const Bits& bits) { return OrderedJson(bits); }

OrderedJson json_of(const StateVector& state) {
    OrderedJson amps = OrderedJson::array();
    for (const Complex& a : state.amplitudes()) {
        amps.push_back(OrderedJson::array({a.real(), a.imag()}));
    }
    return amps;
}

OrderedJson json_of(const std::vector<BellOutcome>& outcomes) {
    OrderedJson arr = OrderedJson::array();
    for (BellOutcome o : outcomes) {
        arr.push_back(std::string(to_string(o)));
    }
    return arr;
}

OrderedJson json_of(const FixedPointCensus& census) {
    OrderedJson histogram = OrderedJson::object();
    for (const auto& [size, count] : census.size_histogram) {
        histogram[std::to_string(size)] = count;
    }
    OrderedJson entries = OrderedJson::array();
    for (const KeyCensusEntry& entry : census.entries) {
        entries.push_back(OrderedJson{{"key", json_of(entry.key)},
                                      {"fixed_count", entry.fixed_count},
                                      {"contains_all_zeros", entry.contains_all_zeros}});
    }
    return OrderedJson{{"n", census.n},
                       {"exhaustive", census.exhaustive},
                       {"keys_surveyed", census.entries.size()},
                       {"all_zeros_universal", census.all_zeros_universal},
                       {"size_histogram", std::move(histogram)},
                       {"entries", std::move(entries)}};
}

OrderedJson json_of(const ProtocolTranscript& transcript) {
    OrderedJson events = OrderedJson::array();
    for (const TranscriptEvent& e : transcript.events) {
        events.push_back(OrderedJson{{"phase", e.phase},
                                     {"actor", e.actor},
                                     {"action", e.action},
                                     {"detail", e.detail}});
    }
    OrderedJson doc{{"schema_version", 1},
                    {"kind", "honest-run"},
                    {"n", transcript.n},
                    {"seed", transcript.seed},
                    {"mode", std::string(to_string(transcript.comparator.mode))},
                    {"swap_reps", transcript.comparator.swap_reps},
                    {"message_source", transcript.message_source},
                    {"message", transcript.message ? OrderedJson(transcript.message->to_string())
                                                   : OrderedJson(nullptr)},
                    {"events", std::move(events)},
                    {"verdict", json_of_verdict(transcript.verdict)},
                    {"final_fidelity", transcript.final_fidelity}};
    if (transcript.error) {
        doc["error"] = *transcript.error;
    }
    return doc;
}

OrderedJson json_of(const AttackReport& report) {
    OrderedJson records = OrderedJson::array();
    for (const ForgeryTrial& trial : report.trial_records) {
        records.push_back(OrderedJson{{"trial", trial.trial},
                                      {"k_a", json_of(trial.k_a)},
                                      {"k_r", json_of(trial.k_r)},
                                      {"accepted", trial.accepted},
                                      {"fidelity_st_se", trial.fidelity_st_se}});
    }
    return OrderedJson{
        {"schema_version", 1},
        {"kind", "forgery"},
        {"n", report.n},
        {"seed", report.seed},
        {"mode", std::string(to_string(report.comparator.mode))},
        {"swap_reps", report.comparator.swap_reps},
        {"exhaustive", report.exhaustive},
        {"trials", report.trials},
        {"accepted", report.accepted},
        {"acceptance_rate", report.acceptance_rate()},
        {"verdict", report.attack_demonstrated() ? "attack-demonstrated" : "attack-incomplete"},
        {"trial_records", std::move(records)},
        {"census", json_of(report.census)},
        {"remark", report.remark}};
}

PermutationKey key_from_json(const nlohmann::json& node) {
    if (!node.is_array() || node.empty()) {
        throw IoError("permutation key must be a non-empty array of integers");
    }
    std::vector<int> mapping;
    mapping.reserve(node.size());
    for (const auto& item : node) {
        if (!item.is_number_integer() && !item.is_number_unsigned()) {
            throw IoError("permutation key entries must be integers");
        }
        mapping.push_back(item.get<int>());
    }
    return PermutationKey(std::move(mapping));
}

Bits bits_from_json(const nlohmann::json& node) {
    if (!node.is_array()) {
        throw IoError("bit list must be an array");
    }
    Bits bits;
    bits.reserve(node.size());
    for (const auto& item : node) {
        if (!item.is_number_integer() && !item.is_number_unsigned()) {
            throw IoError("bit list entries must be integers");
        }
        bits.push_back(item.get<int>());
    }
    return bits;
}

StateVector state_from_json(const nlohmann::json& node) {
    if (!node.is_array() || node.size() < 2 || !std::has_single_bit(node.size())) {
        throw IoError("state must be an array of 2^n amplitude pairs, n >= 1");
    }
    std::vector<Complex> amps;
    amps.reserve(node.size());
    for (const auto& pair : node) {
        if (!pair.is_array() || pair.size() != 2) {
            throw IoError("each amplitude must be an [re, im] pair");
        }
        amps.emplace_back(number_from(pair[0], "amplitude"), number_from(pair[1], "amplitude"));
    }
    const int n = std::countr_zero(node.size());
    return StateVector(n, std::move(amps));
}

std::string canonical_dump(const OrderedJson& doc) {
    std::string out;
    write_value(doc, out, 0);
    return out;
}

void write_document(const OrderedJson& doc, const std::string& path) {
    const std::string text = canonical_dump(doc) + '\n';
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) {
            throw IoError("failed writing document to standard output");
        }
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    file << text;
    file.close();
    if (!file) {
        throw IoError("failed writing document to '" + path + "'");
    }
}

}  // namespace aqs
