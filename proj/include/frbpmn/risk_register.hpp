#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "frbpmn/error.hpp"

namespace frbpmn {

enum class RiskCategory { Retained, Residual, Unknown, Dispute };
enum class RiskTreatment { Mitigated, Retained, None };

struct ContextRef {
    std::string source_id;
    std::string data_id;

    bool operator==(const ContextRef&) const = default;
    auto operator<=>(const ContextRef&) const = default;
};

/// One row of the risk register.
struct RiskCase {
    std::string id;
    std::string title;
    RiskCategory category = RiskCategory::Unknown;
    RiskTreatment treatment = RiskTreatment::None;
    std::vector<std::string> affected_elements;
    std::string forensic_requirement;
    std::vector<ContextRef> covering_contexts;

    bool operator==(const RiskCase&) const = default;
};

inline std::string_view to_string(RiskCategory c) {
    switch (c) {
        case RiskCategory::Retained: return "retained";
        case RiskCategory::Residual: return "residual";
        case RiskCategory::Unknown: return "unknown";
        case RiskCategory::Dispute: return "dispute";
    }
    return "?";
}

inline std::string_view to_string(RiskTreatment t) {
    switch (t) {
        case RiskTreatment::Mitigated: return "mitigated";
        case RiskTreatment::Retained: return "retained";
        case RiskTreatment::None: return "none";
    }
    return "?";
}

namespace detail {

inline std::string register_string(const nlohmann::json& obj, const char* key, std::size_t index) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string())
        throw SchemaError("risk case #" + std::to_string(index + 1) + ": field '" + key + "' must be a string");
    return it->get<std::string>();
}

}  // namespace detail

/// Accepts either a top-level array of cases or an object with a "cases" array.
inline std::vector<RiskCase> parse_risk_register(std::string_view bytes) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), 0, e.byte);
    }
    const nlohmann::json* cases = &doc;
    if (doc.is_object()) {
        auto it = doc.find("cases");
        if (it == doc.end()) throw SchemaError("risk register object needs a 'cases' array");
        cases = &*it;
    }
    if (!cases->is_array()) throw SchemaError("risk register must be an array of cases");

    std::vector<RiskCase> out;
    for (std::size_t i = 0; i < cases->size(); ++i) {
        const auto& c = (*cases)[i];
        if (!c.is_object()) throw SchemaError("risk case #" + std::to_string(i + 1) + " must be an object");
        RiskCase rc;
        rc.id = detail::register_string(c, "id", i);
        rc.title = detail::register_string(c, "title", i);

        std::string category = detail::register_string(c, "category", i);
        if (category == "retained") rc.category = RiskCategory::Retained;
        else if (category == "residual") rc.category = RiskCategory::Residual;
        else if (category == "unknown") rc.category = RiskCategory::Unknown;
        else if (category == "dispute") rc.category = RiskCategory::Dispute;
        else throw SchemaError("risk case '" + rc.id + "': unknown category '" + category + "'");

        std::string treatment = detail::register_string(c, "treatment", i);
        if (treatment == "mitigated") rc.treatment = RiskTreatment::Mitigated;
        else if (treatment == "retained") rc.treatment = RiskTreatment::Retained;
        else if (treatment == "none") rc.treatment = RiskTreatment::None;
        else throw SchemaError("risk case '" + rc.id + "': unknown treatment '" + treatment + "'");

        if (auto it = c.find("affectedElements"); it != c.end()) {
            if (!it->is_array()) throw SchemaError("risk case '" + rc.id + "': affectedElements must be an array");
            for (const auto& e : *it) {
                if (!e.is_string()) throw SchemaError("risk case '" + rc.id + "': affectedElements holds ids");
                rc.affected_elements.push_back(e.get<std::string>());
            }
        }
        if (auto it = c.find("forensicRequirement"); it != c.end()) {
            if (!it->is_string()) throw SchemaError("risk case '" + rc.id + "': forensicRequirement must be text");
            rc.forensic_requirement = it->get<std::string>();
        }
        if (auto it = c.find("coveringContexts"); it != c.end()) {
            if (!it->is_array()) throw SchemaError("risk case '" + rc.id + "': coveringContexts must be an array");
            for (const auto& ctx : *it) {
                if (!ctx.is_object() || !ctx.contains("sourceId") || !ctx.contains("dataId") ||
                    !ctx["sourceId"].is_string() || !ctx["dataId"].is_string())
                    throw SchemaError("risk case '" + rc.id + "': covering context needs sourceId and dataId");
                rc.covering_contexts.push_back({ctx["sourceId"].get<std::string>(), ctx["dataId"].get<std::string>()});
            }
        }
        out.push_back(std::move(rc));
    }
    return out;
}

inline std::string write_risk_register(const std::vector<RiskCase>& cases) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : cases) {
        nlohmann::ordered_json j;
        j["id"] = c.id;
        j["title"] = c.title;
        j["category"] = std::string(to_string(c.category));
        j["treatment"] = std::string(to_string(c.treatment));
        j["affectedElements"] = c.affected_elements;
        j["forensicRequirement"] = c.forensic_requirement;
        j["coveringContexts"] = nlohmann::ordered_json::array();
        for (const auto& ctx : c.covering_contexts)
            j["coveringContexts"].push_back({{"sourceId", ctx.source_id}, {"dataId", ctx.data_id}});
        arr.push_back(std::move(j));
    }
    nlohmann::ordered_json doc;
    doc["cases"] = std::move(arr);
    return doc.dump(2) + "\n";
}

}  // namespace frbpmn
