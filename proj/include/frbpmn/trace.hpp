#pragma once

// Evidence traces: newline-delimited JSON, one evidence record per line.
//
//   {"instance":"run-1","seq":3,"source":"es_x","data":"do_y",
//    "ts":"1970-01-01T00:00:03Z","hardens":"run-1.2","recordId":"run-1.3"}
//
// `seq` is the ordering authority within an instance; `ts` is informational.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "frbpmn/error.hpp"

namespace frbpmn {

struct EvidenceRecord {
    std::string record_id;
    std::string instance;
    std::uint64_t seq = 0;
    std::string source;
    std::string data;
    std::string ts;
    std::optional<std::string> hardens;

    bool operator==(const EvidenceRecord&) const = default;
};

/// Records ordered by (instance, seq).
struct EvidenceTrace {
    std::vector<EvidenceRecord> records;

    bool operator==(const EvidenceTrace&) const = default;

    bool empty() const noexcept { return records.empty(); }
    std::size_t size() const noexcept { return records.size(); }

    void normalize() {
        std::stable_sort(records.begin(), records.end(), [](const EvidenceRecord& a, const EvidenceRecord& b) {
            if (a.instance != b.instance) return a.instance < b.instance;
            return a.seq < b.seq;
        });
    }

    /// Instance ids in trace order.
    std::vector<std::string> instances() const {
        std::vector<std::string> out;
        for (const auto& r : records)
            if (out.empty() || out.back() != r.instance) out.push_back(r.instance);
        return out;
    }

    /// Records of one instance in seq order.
    std::vector<EvidenceRecord> instance_records(std::string_view instance) const {
        std::vector<EvidenceRecord> out;
        for (const auto& r : records)
            if (r.instance == instance) out.push_back(r);
        return out;
    }
};

namespace detail {

inline bool is_iso8601(const std::string& ts) {
    static const std::regex re(
        R"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(\.\d+)?(Z|[+-]\d{2}:\d{2}))");
    return std::regex_match(ts, re);
}

inline std::string string_field(const nlohmann::json& obj, const char* name, std::size_t line) {
    auto it = obj.find(name);
    if (it == obj.end()) throw FormatError(std::string("missing field '") + name + "'", line);
    if (!it->is_string()) throw FormatError(std::string("field '") + name + "' must be a string", line);
    return it->get<std::string>();
}

}  // namespace detail

inline EvidenceTrace parse_trace(std::string_view bytes) {
    EvidenceTrace trace;
    std::map<std::string, std::uint64_t> last_seq;
    std::set<std::string> record_ids;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        std::size_t end = bytes.find('\n', pos);
        if (end == std::string_view::npos) end = bytes.size();
        std::string_view line = bytes.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw FormatError(std::string("invalid JSON: ") + e.what(), line_no);
        }
        if (!obj.is_object()) throw FormatError("record must be a JSON object", line_no);

        EvidenceRecord r;
        r.instance = detail::string_field(obj, "instance", line_no);
        auto seq = obj.find("seq");
        if (seq == obj.end()) throw FormatError("missing field 'seq'", line_no);
        if (!seq->is_number_unsigned()) throw FormatError("field 'seq' must be a non-negative integer", line_no);
        r.seq = seq->get<std::uint64_t>();
        r.source = detail::string_field(obj, "source", line_no);
        r.data = detail::string_field(obj, "data", line_no);
        r.ts = detail::string_field(obj, "ts", line_no);
        if (!detail::is_iso8601(r.ts)) throw FormatError("field 'ts' is not an ISO-8601 timestamp", line_no);
        r.record_id = detail::string_field(obj, "recordId", line_no);
        if (auto h = obj.find("hardens"); h != obj.end() && !h->is_null()) {
            if (!h->is_string()) throw FormatError("field 'hardens' must be a string", line_no);
            r.hardens = h->get<std::string>();
        }

        auto [it, fresh] = last_seq.try_emplace(r.instance, r.seq);
        if (!fresh) {
            if (r.seq == it->second)
                throw FormatError("duplicate seq " + std::to_string(r.seq) + " in instance '" + r.instance + "'",
                                  line_no);
            if (r.seq < it->second)
                throw FormatError("non-monotonic seq in instance '" + r.instance + "'", line_no);
            it->second = r.seq;
        }
        if (!record_ids.insert(r.record_id).second)
            throw FormatError("duplicate recordId '" + r.record_id + "'", line_no);
        trace.records.push_back(std::move(r));
    }
    trace.normalize();
    return trace;
}

inline std::string write_trace(const EvidenceTrace& trace) {
    std::string out;
    for (const auto& r : trace.records) {
        nlohmann::ordered_json j;
        j["instance"] = r.instance;
        j["seq"] = r.seq;
        j["source"] = r.source;
        j["data"] = r.data;
        j["ts"] = r.ts;
        if (r.hardens) j["hardens"] = *r.hardens;
        j["recordId"] = r.record_id;
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace frbpmn
