#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "vmrank/catalog.hpp"
#include "vmrank/error.hpp"
#include "vmrank/scoring.hpp"

namespace vmrank {

/// Shift applied to scores before forming the cost/score ratio when any
/// score is non-positive (z-scored attributes make negative scores the
/// normal case). The shift preserves score order.
inline constexpr double pc_shift_epsilon = 1e-6;

/// An ordered ranking of the fleet. Ranks are dense 1..m with no shared
/// ranks; ties are broken by lower cost, then lexicographic vm id.
struct ranking_result {
    struct entry {
        std::string vm_id;
        int rank = 0;
        double score = 0.0;
        /// The value the ordering was keyed on: the score itself for P,
        /// cost / shifted score for PC.
        double key = 0.0;
    };

    ranking_mode mode = ranking_mode::performance;
    execution_mode execution = execution_mode::sequential;
    std::vector<entry> entries; // sorted, entries[0] is rank 1
    bool tie_break_applied = false;
};

namespace detail {

/// Deterministic tie-break: position of each VM in the (cost ascending,
/// id ascending) order. Shared by every ranking producer.
inline std::vector<int> tie_break_ranks(std::span<const vm_profile> vms) {
    std::vector<int> idx(vms.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        const auto& va = vms[static_cast<std::size_t>(a)];
        const auto& vb = vms[static_cast<std::size_t>(b)];
        if (va.cost_per_hour != vb.cost_per_hour)
            return va.cost_per_hour < vb.cost_per_hour;
        return va.id < vb.id;
    });
    std::vector<int> ranks(vms.size());
    for (std::size_t pos = 0; pos < idx.size(); ++pos)
        ranks[static_cast<std::size_t>(idx[pos])] = static_cast<int>(pos);
    return ranks;
}

/// order := VM indices sorted by key descending (or ascending), ties by the
/// precomputed tie-break rank.
inline void order_by_key(std::span<const double> keys, std::span<const int> tie, bool descending,
                         std::vector<int>& order) {
    order.resize(keys.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double ka = keys[static_cast<std::size_t>(a)];
        const double kb = keys[static_cast<std::size_t>(b)];
        if (ka != kb)
            return descending ? ka > kb : ka < kb;
        return tie[static_cast<std::size_t>(a)] < tie[static_cast<std::size_t>(b)];
    });
}

/// S' per the PC rule: identity when all scores are strictly positive,
/// otherwise an order-preserving shift to (0, inf).
inline void shifted_scores(std::span<const double> scores, std::span<double> out) {
    double lo = scores[0], hi = scores[0];
    for (double s : scores) {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    if (lo > 0.0) {
        std::copy(scores.begin(), scores.end(), out.begin());
        return;
    }
    double range = hi - lo;
    if (range == 0.0)
        range = 1.0;
    for (std::size_t i = 0; i < scores.size(); ++i)
        out[i] = scores[i] - lo + pc_shift_epsilon * range;
}

inline void performance_cost_keys(std::span<const double> scores,
                                  std::span<const vm_profile> vms, std::span<double> keys) {
    shifted_scores(scores, keys);
    for (std::size_t i = 0; i < keys.size(); ++i)
        keys[i] = vms[i].cost_per_hour / keys[i];
}

inline bool has_adjacent_duplicate(std::span<const double> keys, std::span<const int> order) {
    for (std::size_t pos = 1; pos < order.size(); ++pos)
        if (keys[static_cast<std::size_t>(order[pos - 1])] ==
            keys[static_cast<std::size_t>(order[pos])])
            return true;
    return false;
}

} // namespace detail

/// P ranking: scores descending, rank 1 is the best performer.
inline ranking_result rank_performance(const score_vector& scores,
                                       std::span<const vm_profile> vms) {
    if (scores.values.size() != vms.size())
        throw data_error("score vector covers " + std::to_string(scores.values.size()) +
                         " VMs but the fleet has " + std::to_string(vms.size()));
    const auto tie = detail::tie_break_ranks(vms);
    std::vector<int> order;
    detail::order_by_key(scores.values, tie, /*descending=*/true, order);

    ranking_result out;
    out.mode = ranking_mode::performance;
    out.execution = scores.execution;
    out.tie_break_applied = detail::has_adjacent_duplicate(scores.values, order);
    out.entries.reserve(vms.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const auto i = static_cast<std::size_t>(order[pos]);
        out.entries.push_back({vms[i].id, static_cast<int>(pos) + 1, scores.values[i],
                               scores.values[i]});
    }
    return out;
}

/// PC ranking: cost / shifted score ascending, rank 1 is the best value for
/// money.
inline ranking_result rank_performance_cost(const score_vector& scores,
                                            std::span<const vm_profile> vms) {
    if (scores.values.size() != vms.size())
        throw data_error("score vector covers " + std::to_string(scores.values.size()) +
                         " VMs but the fleet has " + std::to_string(vms.size()));
    std::vector<double> keys(vms.size());
    detail::performance_cost_keys(scores.values, vms, keys);
    const auto tie = detail::tie_break_ranks(vms);
    std::vector<int> order;
    detail::order_by_key(keys, tie, /*descending=*/false, order);

    ranking_result out;
    out.mode = ranking_mode::performance_cost;
    out.execution = scores.execution;
    out.tie_break_applied = detail::has_adjacent_duplicate(keys, order);
    out.entries.reserve(vms.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const auto i = static_cast<std::size_t>(order[pos]);
        out.entries.push_back({vms[i].id, static_cast<int>(pos) + 1, scores.values[i], keys[i]});
    }
    return out;
}

inline ranking_result rank(const score_vector& scores, std::span<const vm_profile> vms,
                           ranking_mode mode) {
    return mode == ranking_mode::performance ? rank_performance(scores, vms)
                                             : rank_performance_cost(scores, vms);
}

} // namespace vmrank
