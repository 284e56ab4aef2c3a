#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "vmrank/error.hpp"
#include "vmrank/groups.hpp"

namespace vmrank {

/// One benchmarked metric of a VM, e.g. the L2 cache latency or the number
/// of sequential file reads per second.
struct attribute_definition {
    std::string id;
    std::string name;
    aggregate_group group = aggregate_group::g1;
    sub_group subgroup = sub_group::g1_1;
    direction dir = direction::higher_better;
    std::string unit;
    /// True when the metric is a throughput that multiplies out across cores
    /// (used by the parallel execution adjustment).
    bool parallel_scalable = false;

    friend bool operator==(const attribute_definition&, const attribute_definition&) = default;
};

/// One VM type on offer.
struct vm_profile {
    std::string id;
    int vcpus = 1;
    double memory_gib = 0.0;
    double cost_per_hour = 0.0; // USD per hour

    friend bool operator==(const vm_profile&, const vm_profile&) = default;
};

/// The attribute taxonomy plus the fleet of VM types under consideration.
/// Attribute and VM order is canonical: it is the order declared in the
/// catalog file and fixes row/column order everywhere downstream.
struct catalog {
    std::vector<attribute_definition> attributes;
    std::vector<vm_profile> vms;

    friend bool operator==(const catalog&, const catalog&) = default;
};

namespace detail {

inline void check_identifier(const std::string& id, const char* what) {
    if (id.empty())
        throw schema_error(std::string(what) + " id must not be empty");
    for (char c : id)
        if (c == ',' || c == '\n' || c == '\r' || c == '"')
            throw schema_error(std::string(what) + " id '" + id + "' contains a character reserved by the report formats");
}

} // namespace detail

/// Checks the catalog invariants: unique ids, sub-group consistent with its
/// aggregate group, positive cost, at least one vCPU. Throws schema_error.
inline void validate(const catalog& cat) {
    std::unordered_set<std::string> seen;
    for (const auto& a : cat.attributes) {
        detail::check_identifier(a.id, "attribute");
        if (!seen.insert(a.id).second)
            throw schema_error("duplicate attribute id '" + a.id + "'");
        if (parent_of(a.subgroup) != a.group)
            throw schema_error("attribute '" + a.id + "': sub_group " + std::string(to_string(a.subgroup)) +
                               " is not a sub-group of " + std::string(to_string(a.group)));
    }
    seen.clear();
    for (const auto& v : cat.vms) {
        detail::check_identifier(v.id, "vm");
        if (!seen.insert(v.id).second)
            throw schema_error("duplicate vm id '" + v.id + "'");
        if (v.vcpus < 1)
            throw schema_error("vm '" + v.id + "': vcpus must be at least 1");
        if (!(v.memory_gib > 0.0))
            throw schema_error("vm '" + v.id + "': memory_gib must be positive");
        if (!(v.cost_per_hour > 0.0))
            throw schema_error("vm '" + v.id + "': cost_per_hour must be positive");
    }
}

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& obj, const char* key,
                                           const std::string& context) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw schema_error(context + ": missing field '" + key + "'");
    return *it;
}

inline std::string require_string(const nlohmann::json& obj, const char* key,
                                  const std::string& context) {
    const auto& f = require_field(obj, key, context);
    if (!f.is_string())
        throw schema_error(context + ": field '" + key + "' must be a string");
    return f.get<std::string>();
}

inline double require_number(const nlohmann::json& obj, const char* key,
                             const std::string& context) {
    const auto& f = require_field(obj, key, context);
    if (!f.is_number())
        throw schema_error(context + ": field '" + key + "' must be a number");
    return f.get<double>();
}

} // namespace detail

inline catalog catalog_from_json(const nlohmann::json& doc) {
    if (!doc.is_object())
        throw schema_error("catalog: top level must be an object");
    catalog cat;
    const auto& attrs = detail::require_field(doc, "attributes", "catalog");
    const auto& vms = detail::require_field(doc, "vms", "catalog");
    if (!attrs.is_array() || !vms.is_array())
        throw schema_error("catalog: 'attributes' and 'vms' must be arrays");

    for (const auto& item : attrs) {
        if (!item.is_object())
            throw schema_error("catalog: every attribute entry must be an object");
        const std::string ctx = "attribute '" + item.value("id", std::string("?")) + "'";
        attribute_definition a;
        a.id = detail::require_string(item, "id", ctx);
        a.name = item.value("name", a.id);
        const std::string grp = detail::require_string(item, "aggregate_group", ctx);
        const std::string sub = detail::require_string(item, "sub_group", ctx);
        const std::string dir = detail::require_string(item, "direction", ctx);
        auto g = parse_aggregate_group(grp);
        if (!g)
            throw schema_error(ctx + ": unknown aggregate_group '" + grp + "'");
        auto s = parse_sub_group(sub);
        if (!s)
            throw schema_error(ctx + ": unknown sub_group '" + sub + "'");
        auto d = parse_direction(dir);
        if (!d)
            throw schema_error(ctx + ": unknown direction '" + dir + "'");
        a.group = *g;
        a.subgroup = *s;
        a.dir = *d;
        a.unit = item.value("unit", std::string());
        a.parallel_scalable = item.value("parallel_scalable", false);
        cat.attributes.push_back(std::move(a));
    }
    for (const auto& item : vms) {
        if (!item.is_object())
            throw schema_error("catalog: every vm entry must be an object");
        const std::string ctx = "vm '" + item.value("id", std::string("?")) + "'";
        vm_profile v;
        v.id = detail::require_string(item, "id", ctx);
        const double vcpus = detail::require_number(item, "vcpus", ctx);
        if (vcpus != static_cast<int>(vcpus))
            throw schema_error(ctx + ": vcpus must be an integer");
        v.vcpus = static_cast<int>(vcpus);
        v.memory_gib = detail::require_number(item, "memory_gib", ctx);
        v.cost_per_hour = detail::require_number(item, "cost_per_hour", ctx);
        cat.vms.push_back(std::move(v));
    }
    validate(cat);
    return cat;
}

inline nlohmann::json to_json(const catalog& cat) {
    nlohmann::json attrs = nlohmann::json::array();
    for (const auto& a : cat.attributes)
        attrs.push_back({{"id", a.id},
                         {"name", a.name},
                         {"aggregate_group", std::string(to_string(a.group))},
                         {"sub_group", std::string(to_string(a.subgroup))},
                         {"direction", std::string(to_string(a.dir))},
                         {"unit", a.unit},
                         {"parallel_scalable", a.parallel_scalable}});
    nlohmann::json vms = nlohmann::json::array();
    for (const auto& v : cat.vms)
        vms.push_back({{"id", v.id},
                       {"vcpus", v.vcpus},
                       {"memory_gib", v.memory_gib},
                       {"cost_per_hour", v.cost_per_hour}});
    return {{"attributes", std::move(attrs)}, {"vms", std::move(vms)}};
}

/// Loads and validates a catalog file. Throws parse_error on unreadable or
/// malformed JSON, schema_error on invariant violations.
inline catalog load_catalog(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open catalog file '" + path.string() + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error("catalog file '" + path.string() + "': " + e.what());
    }
    return catalog_from_json(doc);
}

inline void save_catalog(const catalog& cat, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw error("cannot write catalog file '" + path.string() + "'");
    out << to_json(cat).dump(2) << '\n';
}

} // namespace vmrank
