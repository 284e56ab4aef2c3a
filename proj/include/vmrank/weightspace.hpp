#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "vmrank/error.hpp"
#include "vmrank/measurements.hpp"
#include "vmrank/ranking.hpp"
#include "vmrank/scoring.hpp"
#include "vmrank/validation.hpp"

namespace vmrank {

/// The exhaustive space of weight vectors of one kind: every vector in
/// {0..5}^d except the all-zero one, enumerated in lexicographic order.
/// Ordinal k (1-based) maps to the base-6 digits of k, most significant
/// first, so the first aggregate vector is (0,0,0,1).
class weight_space {
public:
    explicit weight_space(weight_kind kind) noexcept : kind_(kind) {}

    weight_kind kind() const noexcept { return kind_; }
    int dimensions() const noexcept { return group_count(kind_); }

    /// 6^4 - 1 = 1295 for aggregate, 6^8 - 1 = 1679615 for fine_grain.
    std::uint64_t cardinality() const noexcept {
        std::uint64_t c = 1;
        for (int i = 0; i < dimensions(); ++i)
            c *= weight_domain_size;
        return c - 1;
    }

    weight_vector vector_at(std::uint64_t ordinal) const {
        if (ordinal < 1 || ordinal > cardinality())
            throw data_error("weight-space ordinal " + std::to_string(ordinal) +
                             " outside [1, " + std::to_string(cardinality()) + "]");
        weight_vector w;
        w.kind = kind_;
        w.values.resize(static_cast<std::size_t>(dimensions()));
        decode(ordinal, w.values);
        return w;
    }

    /// Calls f(const weight_vector&) for every vector in order. The vector
    /// object is reused between calls.
    template <typename F>
    void for_each(F&& f) const {
        weight_vector w;
        w.kind = kind_;
        w.values.assign(static_cast<std::size_t>(dimensions()), 0);
        const std::uint64_t card = cardinality();
        for (std::uint64_t ordinal = 1; ordinal <= card; ++ordinal) {
            increment(w.values);
            f(static_cast<const weight_vector&>(w));
        }
    }

    /// Writes the base-6 digits of ordinal into out (most significant first).
    static void decode(std::uint64_t ordinal, std::span<int> out) {
        for (std::size_t i = out.size(); i-- > 0;) {
            out[i] = static_cast<int>(ordinal % weight_domain_size);
            ordinal /= weight_domain_size;
        }
    }

    /// Base-6 odometer step; advancing from ordinal k's digits to k+1's.
    static void increment(std::span<int> digits) {
        for (std::size_t i = digits.size(); i-- > 0;) {
            if (digits[i] < max_weight) {
                ++digits[i];
                return;
            }
            digits[i] = 0;
        }
    }

private:
    weight_kind kind_;
};

/// How often each VM lands on each of the top-k rank positions across the
/// whole weight space.
struct frequency_table {
    ranking_mode mode = ranking_mode::performance;
    execution_mode execution = execution_mode::sequential;
    weight_kind kind = weight_kind::aggregate;
    int top_k = 0;
    std::uint64_t total_vectors = 0;
    std::vector<std::string> vm_ids;   // catalog order
    std::vector<std::uint64_t> counts; // vm_ids.size() x top_k, row-major

    /// Count for rank position `position` (1-based, <= top_k).
    std::uint64_t count(std::size_t vm, int position) const {
        return counts[vm * static_cast<std::size_t>(top_k) +
                      static_cast<std::size_t>(position - 1)];
    }
};

/// One point of an ordered score curve: a weight vector (leading
/// `dimensions()` slots used) and its distance from the empirical ranking.
struct curve_entry {
    std::array<std::uint8_t, 8> weights{};
    double score = 0.0;
};

struct score_curve_result {
    weight_kind kind = weight_kind::aggregate;
    ranking_mode mode = ranking_mode::performance;
    execution_mode execution = execution_mode::sequential;
    std::vector<curve_entry> entries; // ascending by (score, weight vector)
};

namespace detail {

/// Shared, immutable state for one enumeration pass: the normalized matrix
/// (vCPU-adjusted when execution is parallel) plus everything needed to
/// turn a digit vector into a ranking without touching strings.
struct enumeration_context {
    std::size_t m = 0;
    std::size_t n = 0;
    int dims = 0;
    ranking_mode mode = ranking_mode::performance;
    std::vector<double> z;        // m x n normalized values
    std::vector<int> slot_of;     // per attribute: index into the weight vector
    std::vector<double> sign_of;  // per attribute: +1 / -1
    std::vector<int> tie;         // per VM: tie-break rank
    std::span<const vm_profile> vms;

    enumeration_context(const measurement_matrix& mm, const weight_space& space,
                        ranking_mode mode_, execution_mode execution)
        : m(mm.vm_count()), n(mm.attribute_count()), dims(space.dimensions()), mode(mode_),
          vms(mm.vms) {
        const normalized_matrix nm = execution == execution_mode::parallel
                                         ? normalize(apply_parallel_adjustment(mm))
                                         : normalize(mm);
        z = nm.values;
        slot_of.reserve(n);
        sign_of.reserve(n);
        for (const auto& a : mm.attributes) {
            slot_of.push_back(space.kind() == weight_kind::aggregate ? index_of(a.group)
                                                                     : index_of(a.subgroup));
            sign_of.push_back(a.dir == direction::higher_better ? 1.0 : -1.0);
        }
        tie = tie_break_ranks(vms);
    }

    /// Per-worker scratch buffers.
    struct scratch {
        std::vector<int> digits;
        std::vector<double> w;
        std::vector<double> scores;
        std::vector<double> keys;
        std::vector<int> order;
    };

    scratch make_scratch() const {
        scratch s;
        s.digits.assign(static_cast<std::size_t>(dims), 0);
        s.w.resize(n);
        s.scores.resize(m);
        s.keys.resize(m);
        s.order.resize(m);
        return s;
    }

    /// Ranking order for the digit vector currently in s.digits. Exactly
    /// the computation rank_performance / rank_performance_cost perform,
    /// minus the string bookkeeping.
    void order_for(scratch& s) const {
        for (std::size_t j = 0; j < n; ++j)
            s.w[j] = sign_of[j] * static_cast<double>(s.digits[static_cast<std::size_t>(slot_of[j])]);
        score_into(z.data(), m, n, s.w.data(), s.scores.data());
        if (mode == ranking_mode::performance) {
            order_by_key(s.scores, tie, /*descending=*/true, s.order);
        } else {
            performance_cost_keys(s.scores, vms, s.keys);
            order_by_key(s.keys, tie, /*descending=*/false, s.order);
        }
    }
};

/// Contiguous [begin, end) ordinal blocks, one per worker. Deterministic:
/// results are merged in block order, so the worker count never changes
/// the output.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> split_ordinals(std::uint64_t count,
                                                                           int workers) {
    const auto w = static_cast<std::uint64_t>(workers);
    const std::uint64_t blocks = std::min<std::uint64_t>(w, count);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    std::uint64_t begin = 1;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        const std::uint64_t size = count / blocks + (b < count % blocks ? 1 : 0);
        out.emplace_back(begin, begin + size);
        begin += size;
    }
    return out;
}

template <typename PerOrdinal>
inline void run_partitioned(std::uint64_t count, int workers, PerOrdinal&& body) {
    if (workers < 1)
        throw data_error("workers must be at least 1");
    const auto blocks = split_ordinals(count, workers);
    if (blocks.size() <= 1) {
        if (!blocks.empty())
            body(0, blocks[0].first, blocks[0].second);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b)
        threads.emplace_back([&, b] { body(b, blocks[b].first, blocks[b].second); });
    for (auto& t : threads)
        t.join();
}

} // namespace detail

/// Ranks the fleet under every weight vector in the space and tabulates how
/// often each VM occupies each of the first k rank positions. Partitioned
/// across `workers` threads; the result is identical for any worker count.
inline frequency_table top_k_frequency(const measurement_matrix& mm, const weight_space& space,
                                       ranking_mode mode, execution_mode execution, int top_k,
                                       int workers = 1) {
    const auto m = mm.vm_count();
    if (top_k < 1 || static_cast<std::size_t>(top_k) > m)
        throw data_error("top_k must be in [1, " + std::to_string(m) + "], got " +
                         std::to_string(top_k));

    const detail::enumeration_context ctx(mm, space, mode, execution);
    const std::uint64_t card = space.cardinality();
    const auto blocks = detail::split_ordinals(card, workers);
    std::vector<std::vector<std::uint64_t>> partials(
        blocks.size(), std::vector<std::uint64_t>(m * static_cast<std::size_t>(top_k), 0));

    detail::run_partitioned(card, workers,
                            [&](std::size_t block, std::uint64_t begin, std::uint64_t end) {
        auto s = ctx.make_scratch();
        weight_space::decode(begin, s.digits);
        auto& local = partials[block];
        for (std::uint64_t ordinal = begin; ordinal < end; ++ordinal) {
            ctx.order_for(s);
            for (int pos = 0; pos < top_k; ++pos)
                ++local[static_cast<std::size_t>(s.order[static_cast<std::size_t>(pos)]) *
                            static_cast<std::size_t>(top_k) +
                        static_cast<std::size_t>(pos)];
            weight_space::increment(s.digits);
        }
    });

    frequency_table table;
    table.mode = mode;
    table.execution = execution;
    table.kind = space.kind();
    table.top_k = top_k;
    table.total_vectors = card;
    table.vm_ids.reserve(m);
    for (const auto& v : mm.vms)
        table.vm_ids.push_back(v.id);
    table.counts.assign(m * static_cast<std::size_t>(top_k), 0);
    for (const auto& local : partials)
        for (std::size_t i = 0; i < local.size(); ++i)
            table.counts[i] += local[i];
    return table;
}

/// Scores every weight vector's ranking against the empirical ranking with
/// the weighted hamming distance and returns the curve sorted ascending by
/// (score, weight vector). The empirical ranking must cover the fleet.
inline score_curve_result score_curve(const measurement_matrix& mm, const weight_space& space,
                                      ranking_mode mode, execution_mode execution,
                                      const ranking_result& empirical, int workers = 1) {
    const auto m = mm.vm_count();
    std::map<std::string, int> er_by_id = detail::rank_by_id(empirical);
    std::vector<int> er(m);
    std::set<std::string> odd;
    for (std::size_t i = 0; i < m; ++i) {
        auto it = er_by_id.find(mm.vms[i].id);
        if (it == er_by_id.end()) {
            odd.insert(mm.vms[i].id);
            continue;
        }
        er[i] = it->second;
        er_by_id.erase(it);
    }
    for (const auto& [id, r] : er_by_id)
        odd.insert(id);
    if (!odd.empty())
        throw data_error("empirical ranking does not match the fleet; offending ids: " +
                         detail::join_listing(odd));

    const detail::enumeration_context ctx(mm, space, mode, execution);
    const std::uint64_t card = space.cardinality();

    score_curve_result result;
    result.kind = space.kind();
    result.mode = mode;
    result.execution = execution;
    result.entries.resize(card);

    detail::run_partitioned(card, workers,
                            [&](std::size_t, std::uint64_t begin, std::uint64_t end) {
        auto s = ctx.make_scratch();
        weight_space::decode(begin, s.digits);
        const int mi = static_cast<int>(m);
        for (std::uint64_t ordinal = begin; ordinal < end; ++ordinal) {
            ctx.order_for(s);
            std::int64_t total = 0;
            for (int pos = 0; pos < mi; ++pos) {
                const auto vm = static_cast<std::size_t>(s.order[static_cast<std::size_t>(pos)]);
                total += hamming_contribution(mi, er[vm], pos + 1);
            }
            auto& entry = result.entries[ordinal - 1];
            for (std::size_t d = 0; d < s.digits.size(); ++d)
                entry.weights[d] = static_cast<std::uint8_t>(s.digits[d]);
            entry.score = static_cast<double>(total);
            weight_space::increment(s.digits);
        }
    });

    std::sort(result.entries.begin(), result.entries.end(),
              [](const curve_entry& a, const curve_entry& b) {
                  if (a.score != b.score)
                      return a.score < b.score;
                  return a.weights < b.weights;
              });
    return result;
}

} // namespace vmrank
