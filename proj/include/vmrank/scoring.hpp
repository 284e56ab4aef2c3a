#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "vmrank/error.hpp"
#include "vmrank/groups.hpp"
#include "vmrank/measurements.hpp"

namespace vmrank {

/// Column-standardized measurement matrix. Each column holds z-scores
/// computed with the population standard deviation (divide by m). Columns
/// with zero deviation are all zeros: a constant attribute carries no
/// discriminating information.
struct normalized_matrix {
    std::vector<vm_profile> vms;
    std::vector<attribute_definition> attributes;
    std::vector<double> values; // row-major, vms.size() x attributes.size()
    std::vector<double> means;  // per column
    std::vector<double> stddevs; // per column, population

    std::size_t vm_count() const noexcept { return vms.size(); }
    std::size_t attribute_count() const noexcept { return attributes.size(); }

    double value(std::size_t vm, std::size_t attribute) const {
        return values[vm * attributes.size() + attribute];
    }
};

/// User-supplied importance weights, one integer in [0,5] per group.
/// Order is G1..G4 for aggregate, G1_1..G4_2 for fine_grain.
struct weight_vector {
    weight_kind kind = weight_kind::aggregate;
    std::vector<int> values;

    friend bool operator==(const weight_vector&, const weight_vector&) = default;
};

inline void validate(const weight_vector& w) {
    const std::size_t expected = static_cast<std::size_t>(group_count(w.kind));
    if (w.values.size() != expected)
        throw schema_error("weight vector: expected " + std::to_string(expected) +
                           " entries for kind '" + std::string(to_string(w.kind)) + "', got " +
                           std::to_string(w.values.size()));
    for (std::size_t i = 0; i < w.values.size(); ++i)
        if (w.values[i] < min_weight || w.values[i] > max_weight)
            throw schema_error("weight " + std::string(group_label(w.kind, static_cast<int>(i))) +
                               " = " + std::to_string(w.values[i]) + " is outside [" +
                               std::to_string(min_weight) + ", " + std::to_string(max_weight) + "]");
}

inline weight_vector aggregate_weights(std::array<int, 4> values) {
    weight_vector w{weight_kind::aggregate, {values.begin(), values.end()}};
    validate(w);
    return w;
}

inline weight_vector fine_grain_weights(std::array<int, 8> values) {
    weight_vector w{weight_kind::fine_grain, {values.begin(), values.end()}};
    validate(w);
    return w;
}

/// Per-attribute signed weights: |w_j| is the weight of the attribute's
/// governing group, the sign is + for higher_better and - for lower_better.
struct expanded_weights {
    std::vector<double> values;
};

/// z = (r - mean) / population stddev, column by column. Sums run in row
/// order so results are reproducible bit for bit.
inline normalized_matrix normalize(const measurement_matrix& mm) {
    const std::size_t m = mm.vm_count();
    const std::size_t n = mm.attribute_count();
    if (m < 1)
        throw data_error("cannot normalize a matrix with no VMs");

    normalized_matrix out;
    out.vms = mm.vms;
    out.attributes = mm.attributes;
    out.values.resize(m * n);
    out.means.resize(n);
    out.stddevs.resize(n);

    for (std::size_t j = 0; j < n; ++j) {
        // A constant column has sigma = 0 by definition; detect it by value
        // equality, not by the computed sigma, which can land on a tiny
        // nonzero number once the mean has been rounded.
        bool constant = true;
        for (std::size_t i = 1; i < m && constant; ++i)
            constant = mm.value(i, j) == mm.value(0, j);
        if (constant) {
            out.means[j] = mm.value(0, j);
            out.stddevs[j] = 0.0;
            for (std::size_t i = 0; i < m; ++i)
                out.values[i * n + j] = 0.0;
            continue;
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            sum += mm.value(i, j);
        const double mean = sum / static_cast<double>(m);
        double sq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double d = mm.value(i, j) - mean;
            sq += d * d;
        }
        const double sd = std::sqrt(sq / static_cast<double>(m));
        out.means[j] = mean;
        out.stddevs[j] = sd;
        if (sd == 0.0) { // squared deviations underflowed
            for (std::size_t i = 0; i < m; ++i)
                out.values[i * n + j] = 0.0;
            continue;
        }
        for (std::size_t i = 0; i < m; ++i)
            out.values[i * n + j] = (mm.value(i, j) - mean) / sd;
    }
    return out;
}

/// Maps group weights onto per-attribute signed weights. Latency-class
/// (lower_better) attributes receive the negated group weight.
inline expanded_weights expand_weights(const weight_vector& weights,
                                       std::span<const attribute_definition> attributes) {
    validate(weights);
    expanded_weights out;
    out.values.reserve(attributes.size());
    for (const auto& a : attributes) {
        const int slot = weights.kind == weight_kind::aggregate ? index_of(a.group)
                                                                : index_of(a.subgroup);
        const double w = static_cast<double>(weights.values[static_cast<std::size_t>(slot)]);
        out.values.push_back(a.dir == direction::higher_better ? w : -w);
    }
    return out;
}

/// Parallel-execution adjustment: throughput attributes that scale with
/// cores (parallel_scalable and higher_better) are multiplied by the VM's
/// vCPU count. Everything else is untouched. Must run before normalize().
inline measurement_matrix apply_parallel_adjustment(const measurement_matrix& mm) {
    measurement_matrix out = mm;
    const std::size_t n = mm.attribute_count();
    for (std::size_t j = 0; j < n; ++j) {
        const auto& a = mm.attributes[j];
        if (!a.parallel_scalable || a.dir != direction::higher_better)
            continue;
        for (std::size_t i = 0; i < mm.vm_count(); ++i)
            out.at(i, j) = mm.value(i, j) * static_cast<double>(mm.vms[i].vcpus);
    }
    return out;
}

/// Per-VM weighted scores, tagged with the execution mode they were
/// computed for.
struct score_vector {
    std::vector<double> values;
    execution_mode execution = execution_mode::sequential;
};

namespace detail {

/// S_i = sum_j z(i,j) * w_j, summed in canonical attribute order. Every
/// scoring path in the library funnels through this kernel so scores are
/// bit-identical regardless of how they were requested.
inline void score_into(const double* z, std::size_t m, std::size_t n, const double* w,
                       double* out) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = z + i * n;
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            s += row[j] * w[j];
        out[i] = s;
    }
}

} // namespace detail

inline score_vector score(const normalized_matrix& nm, const expanded_weights& weights,
                          execution_mode execution = execution_mode::sequential) {
    if (weights.values.size() != nm.attribute_count())
        throw data_error("expanded weights have " + std::to_string(weights.values.size()) +
                         " entries but the matrix has " + std::to_string(nm.attribute_count()) +
                         " attributes");
    score_vector out;
    out.execution = execution;
    out.values.resize(nm.vm_count());
    detail::score_into(nm.values.data(), nm.vm_count(), nm.attribute_count(),
                       weights.values.data(), out.values.data());
    return out;
}

/// The full scoring pipeline: optional vCPU adjustment, normalization,
/// weight expansion, weighted sum.
inline score_vector compute_scores(const measurement_matrix& mm, const weight_vector& weights,
                                   execution_mode execution) {
    const expanded_weights expanded = expand_weights(weights, mm.attributes);
    if (execution == execution_mode::parallel) {
        const measurement_matrix adjusted = apply_parallel_adjustment(mm);
        return score(normalize(adjusted), expanded, execution);
    }
    return score(normalize(mm), expanded, execution);
}

inline weight_vector weights_from_json(const nlohmann::json& doc) {
    if (!doc.is_object())
        throw schema_error("weights: top level must be an object");
    const std::string kind_text = detail::require_string(doc, "kind", "weights");
    auto kind = parse_weight_kind(kind_text);
    if (!kind)
        throw schema_error("weights: unknown kind '" + kind_text + "'");
    const auto& table = detail::require_field(doc, "weights", "weights");
    if (!table.is_object())
        throw schema_error("weights: field 'weights' must be an object");

    weight_vector w;
    w.kind = *kind;
    const int slots = group_count(*kind);
    w.values.resize(static_cast<std::size_t>(slots));
    for (int i = 0; i < slots; ++i) {
        const std::string key{group_label(*kind, i)};
        auto it = table.find(key);
        if (it == table.end())
            throw schema_error("weights: missing entry for group '" + key + "'");
        if (!it->is_number_integer())
            throw schema_error("weights: entry '" + key + "' must be an integer");
        w.values[static_cast<std::size_t>(i)] = it->get<int>();
    }
    if (table.size() != static_cast<std::size_t>(slots))
        throw schema_error("weights: object has entries that do not belong to kind '" +
                           kind_text + "'");
    validate(w);
    return w;
}

inline nlohmann::json to_json(const weight_vector& w) {
    nlohmann::json table = nlohmann::json::object();
    for (std::size_t i = 0; i < w.values.size(); ++i)
        table[std::string(group_label(w.kind, static_cast<int>(i)))] = w.values[i];
    return {{"kind", std::string(to_string(w.kind))}, {"weights", std::move(table)}};
}

inline weight_vector load_weights(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open weights file '" + path.string() + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error("weights file '" + path.string() + "': " + e.what());
    }
    return weights_from_json(doc);
}

} // namespace vmrank
