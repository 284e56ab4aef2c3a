#pragma once

#include <cstdio>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vmrank/catalog.hpp"
#include "vmrank/ranking.hpp"
#include "vmrank/scoring.hpp"
#include "vmrank/validation.hpp"
#include "vmrank/weightspace.hpp"

namespace vmrank::report {

/// Fixed-format double rendering so repeated runs emit identical bytes.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

/// The signed per-attribute weights a ranking was computed with, attached
/// to reports so the scoring inputs are auditable.
struct weight_audit {
    std::vector<std::pair<std::string, double>> entries; // (attribute id, signed weight)
};

inline weight_audit audit_weights(std::span<const attribute_definition> attributes,
                                  const expanded_weights& expanded) {
    weight_audit audit;
    audit.entries.reserve(attributes.size());
    for (std::size_t j = 0; j < attributes.size(); ++j)
        audit.entries.emplace_back(attributes[j].id, expanded.values[j]);
    return audit;
}

inline std::string ranking_to_csv(const ranking_result& r, const weight_audit* audit = nullptr) {
    std::string out;
    out += "# mode," + std::string(to_string(r.mode)) + "\n";
    out += "# execution," + std::string(to_string(r.execution)) + "\n";
    if (audit)
        for (const auto& [id, w] : audit->entries)
            out += "# expanded_weight," + id + "," + format_double(w) + "\n";
    out += "vm_id,rank,score,key\n";
    for (const auto& e : r.entries)
        out += e.vm_id + "," + std::to_string(e.rank) + "," + format_double(e.score) + "," +
               format_double(e.key) + "\n";
    return out;
}

inline nlohmann::json ranking_to_json(const ranking_result& r,
                                      const weight_audit* audit = nullptr) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : r.entries)
        entries.push_back(
            {{"vm_id", e.vm_id}, {"rank", e.rank}, {"score", e.score}, {"key", e.key}});
    nlohmann::json doc{{"mode", std::string(to_string(r.mode))},
                       {"execution", std::string(to_string(r.execution))},
                       {"tie_break_applied", r.tie_break_applied},
                       {"entries", std::move(entries)}};
    if (audit) {
        nlohmann::json weights = nlohmann::json::array();
        for (const auto& [id, w] : audit->entries)
            weights.push_back({{"attribute_id", id}, {"weight", w}});
        doc["expanded_weights"] = std::move(weights);
    }
    return doc;
}

inline std::string ranking_to_markdown(const ranking_result& r,
                                       const weight_audit* audit = nullptr) {
    std::string out;
    out += "## " + std::string(to_string(r.mode)) + " ranking (" +
           std::string(to_string(r.execution)) + " execution)\n\n";
    out += "| rank | vm | score | key |\n|---:|---|---:|---:|\n";
    for (const auto& e : r.entries)
        out += "| " + std::to_string(e.rank) + " | " + e.vm_id + " | " + format_double(e.score) +
               " | " + format_double(e.key) + " |\n";
    if (audit) {
        out += "\n### Expanded weights\n\n| attribute | signed weight |\n|---|---:|\n";
        for (const auto& [id, w] : audit->entries)
            out += "| " + id + " | " + format_double(w) + " |\n";
    }
    return out;
}

inline std::string frequency_to_csv(const frequency_table& t) {
    std::string out = "vm_id,rank_position,count\n";
    for (int pos = 1; pos <= t.top_k; ++pos)
        for (std::size_t vm = 0; vm < t.vm_ids.size(); ++vm)
            out += t.vm_ids[vm] + "," + std::to_string(pos) + "," +
                   std::to_string(t.count(vm, pos)) + "\n";
    return out;
}

inline nlohmann::json frequency_to_json(const frequency_table& t) {
    nlohmann::json counts = nlohmann::json::array();
    for (int pos = 1; pos <= t.top_k; ++pos)
        for (std::size_t vm = 0; vm < t.vm_ids.size(); ++vm)
            counts.push_back({{"vm_id", t.vm_ids[vm]},
                              {"rank_position", pos},
                              {"count", t.count(vm, pos)}});
    return {{"mode", std::string(to_string(t.mode))},
            {"execution", std::string(to_string(t.execution))},
            {"space", std::string(to_string(t.kind))},
            {"top_k", t.top_k},
            {"total_vectors", t.total_vectors},
            {"counts", std::move(counts)}};
}

/// Markdown summary: per rank position, the VMs in descending count order.
inline std::string frequency_to_markdown(const frequency_table& t) {
    std::string out;
    out += "## Top-" + std::to_string(t.top_k) + " frequencies, " +
           std::string(to_string(t.mode)) + " ranking, " + std::string(to_string(t.execution)) +
           " execution\n\n";
    out += std::string(to_string(t.kind)) + " space, " + std::to_string(t.total_vectors) +
           " weight vectors\n";
    for (int pos = 1; pos <= t.top_k; ++pos) {
        out += "\n### Rank " + std::to_string(pos) + "\n\n| vm | count | share |\n|---|---:|---:|\n";
        std::vector<std::size_t> idx(t.vm_ids.size());
        for (std::size_t i = 0; i < idx.size(); ++i)
            idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            if (t.count(a, pos) != t.count(b, pos))
                return t.count(a, pos) > t.count(b, pos);
            return t.vm_ids[a] < t.vm_ids[b];
        });
        for (std::size_t i : idx) {
            const double share =
                100.0 * static_cast<double>(t.count(i, pos)) / static_cast<double>(t.total_vectors);
            char pct[32];
            std::snprintf(pct, sizeof(pct), "%.2f%%", share);
            out += "| " + t.vm_ids[i] + " | " + std::to_string(t.count(i, pos)) + " | " + pct +
                   " |\n";
        }
    }
    return out;
}

inline std::string format_weights(std::span<const std::uint8_t> digits, int dims) {
    std::string out;
    for (int d = 0; d < dims; ++d) {
        if (d)
            out += '-';
        out += static_cast<char>('0' + digits[static_cast<std::size_t>(d)]);
    }
    return out;
}

inline std::string curve_to_csv(const score_curve_result& c) {
    const int dims = group_count(c.kind);
    std::string out = "weight_vector,score\n";
    for (const auto& e : c.entries)
        out += format_weights(e.weights, dims) + "," + format_double(e.score) + "\n";
    return out;
}

inline nlohmann::json curve_to_json(const score_curve_result& c) {
    const int dims = group_count(c.kind);
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : c.entries) {
        nlohmann::json weights = nlohmann::json::array();
        for (int d = 0; d < dims; ++d)
            weights.push_back(static_cast<int>(e.weights[static_cast<std::size_t>(d)]));
        entries.push_back({{"weights", std::move(weights)}, {"score", e.score}});
    }
    return {{"space", std::string(to_string(c.kind))},
            {"mode", std::string(to_string(c.mode))},
            {"execution", std::string(to_string(c.execution))},
            {"entries", std::move(entries)}};
}

/// Markdown summary of a score curve: extremes plus the ten best vectors.
inline std::string curve_to_markdown(const score_curve_result& c) {
    const int dims = group_count(c.kind);
    std::string out;
    out += "## Score curve, " + std::string(to_string(c.mode)) + " ranking, " +
           std::string(to_string(c.execution)) + " execution\n\n";
    out += std::string(to_string(c.kind)) + " space, " + std::to_string(c.entries.size()) +
           " weight vectors";
    if (!c.entries.empty())
        out += ", score range [" + format_double(c.entries.front().score) + ", " +
               format_double(c.entries.back().score) + "]";
    out += "\n\n### Closest weight vectors\n\n| weight vector | score |\n|---|---:|\n";
    const std::size_t shown = std::min<std::size_t>(c.entries.size(), 10);
    for (std::size_t i = 0; i < shown; ++i)
        out += "| " + format_weights(c.entries[i].weights, dims) + " | " +
               format_double(c.entries[i].score) + " |\n";
    return out;
}

inline std::string validation_to_csv(const validation_report& v) {
    std::string out = "mode,execution,vm_count,pearson_percent,hamming_score\n";
    out += std::string(to_string(v.mode)) + "," + std::string(to_string(v.execution)) + "," +
           std::to_string(v.vm_count) + "," + format_double(v.pearson_percent) + "," +
           format_double(v.hamming_score) + "\n";
    return out;
}

inline nlohmann::json validation_to_json(const validation_report& v) {
    return {{"mode", std::string(to_string(v.mode))},
            {"execution", std::string(to_string(v.execution))},
            {"vm_count", v.vm_count},
            {"pearson_percent", v.pearson_percent},
            {"hamming_score", v.hamming_score}};
}

inline std::string validation_to_markdown(const validation_report& v) {
    std::string out;
    out += "## Validation, " + std::string(to_string(v.mode)) + " ranking, " +
           std::string(to_string(v.execution)) + " execution\n\n";
    out += "- VMs compared: " + std::to_string(v.vm_count) + "\n";
    out += "- Pearson correlation: " + format_double(v.pearson_percent) + "%\n";
    out += "- Weighted hamming score: " + format_double(v.hamming_score) + "\n";
    return out;
}

} // namespace vmrank::report
