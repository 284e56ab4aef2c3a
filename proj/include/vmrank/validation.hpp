#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vmrank/error.hpp"
#include "vmrank/measurements.hpp"
#include "vmrank/ranking.hpp"

namespace vmrank {

/// Measured wall-clock time of the target application on one VM, averaged
/// over its repeated executions.
struct empirical_observation {
    std::string vm_id;
    execution_mode execution = execution_mode::sequential;
    double time_seconds = 0.0;
};

/// Outcome of comparing a method ranking against an empirical ranking.
struct validation_report {
    double pearson_percent = 0.0;
    double hamming_score = 0.0;
    ranking_mode mode = ranking_mode::performance;
    execution_mode execution = execution_mode::sequential;
    int vm_count = 0;
};

/// Reads `vm_id,execution,time_seconds` CSV rows. Execution is
/// "sequential" or "parallel".
inline std::vector<empirical_observation> load_empirical(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open empirical file '" + path.string() + "'");

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        throw parse_error(path.string() + ": empty empirical file");
    ++line_no;
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != "vm_id,execution,time_seconds")
        throw parse_error(path.string() +
                          ": expected header 'vm_id,execution,time_seconds', got '" + line + "'");

    std::vector<empirical_observation> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r")
            continue;
        auto fields = detail::split_csv_line(line);
        if (fields.size() != 3)
            throw parse_error(path.string() + ":" + std::to_string(line_no) +
                              ": expected 3 fields, got " + std::to_string(fields.size()));
        empirical_observation obs;
        obs.vm_id = std::move(fields[0]);
        auto exec = parse_execution_mode(fields[1]);
        if (!exec)
            throw parse_error(path.string() + ":" + std::to_string(line_no) +
                              ": unknown execution mode '" + fields[1] + "'");
        obs.execution = *exec;
        obs.time_seconds = detail::parse_double_field(fields[2], path, line_no, "time_seconds");
        if (!(obs.time_seconds > 0.0))
            throw parse_error(path.string() + ":" + std::to_string(line_no) +
                              ": time_seconds must be positive");
        out.push_back(std::move(obs));
    }
    return out;
}

/// Ranks the fleet from measured application times. P mode gives rank 1 to
/// the lowest time; PC mode orders by total run cost, cost_per_hour *
/// time_seconds, ascending. Reported scores are the negated z-scored times
/// so that higher still means better; the ordering itself uses raw values.
inline ranking_result empirical_rank(std::span<const empirical_observation> observations,
                                     std::span<const vm_profile> vms, ranking_mode mode,
                                     execution_mode execution) {
    std::map<std::string, double> time_of;
    std::set<std::string> duplicates;
    for (const auto& obs : observations) {
        if (obs.execution != execution)
            continue;
        if (!time_of.emplace(obs.vm_id, obs.time_seconds).second)
            duplicates.insert(obs.vm_id);
    }
    if (!duplicates.empty())
        throw data_error("duplicate empirical observations for: " +
                         detail::join_listing(duplicates));

    std::set<std::string> missing;
    std::vector<double> times(vms.size());
    for (std::size_t i = 0; i < vms.size(); ++i) {
        auto it = time_of.find(vms[i].id);
        if (it == time_of.end()) {
            missing.insert(vms[i].id);
            continue;
        }
        times[i] = it->second;
        time_of.erase(it);
    }
    if (!missing.empty())
        throw data_error("no " + std::string(to_string(execution)) +
                         " empirical observation for: " + detail::join_listing(missing));
    if (!time_of.empty()) {
        std::set<std::string> extra;
        for (const auto& [id, t] : time_of)
            extra.insert(id);
        throw data_error("empirical observations reference VMs not in the fleet: " +
                         detail::join_listing(extra));
    }

    const auto m = static_cast<double>(vms.size());
    double sum = 0.0;
    for (double t : times)
        sum += t;
    const double mean = sum / m;
    double sq = 0.0;
    for (double t : times)
        sq += (t - mean) * (t - mean);
    const double sd = std::sqrt(sq / m);

    std::vector<double> keys(vms.size());
    if (mode == ranking_mode::performance)
        keys = times;
    else
        for (std::size_t i = 0; i < vms.size(); ++i)
            keys[i] = vms[i].cost_per_hour * times[i];

    const auto tie = detail::tie_break_ranks(vms);
    std::vector<int> order;
    detail::order_by_key(keys, tie, /*descending=*/false, order);

    ranking_result out;
    out.mode = mode;
    out.execution = execution;
    out.tie_break_applied = detail::has_adjacent_duplicate(keys, order);
    out.entries.reserve(vms.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const auto i = static_cast<std::size_t>(order[pos]);
        const double z = sd == 0.0 ? 0.0 : (times[i] - mean) / sd;
        out.entries.push_back({vms[i].id, static_cast<int>(pos) + 1, -z, keys[i]});
    }
    return out;
}

namespace detail {

inline std::map<std::string, int> rank_by_id(const ranking_result& r) {
    std::map<std::string, int> out;
    for (const auto& e : r.entries)
        out.emplace(e.vm_id, e.rank);
    return out;
}

inline void require_same_vm_set(const std::map<std::string, int>& a,
                                const std::map<std::string, int>& b) {
    std::set<std::string> odd;
    for (const auto& [id, r] : a)
        if (!b.count(id))
            odd.insert(id);
    for (const auto& [id, r] : b)
        if (!a.count(id))
            odd.insert(id);
    if (!odd.empty() || a.size() != b.size())
        throw data_error("rankings cover different VM sets; offending ids: " +
                         detail::join_listing(odd));
}

} // namespace detail

/// Pearson product-moment correlation of the two integer rank vectors,
/// paired by vm id, expressed as a percentage in [-100, 100].
inline double pearson_correlation(const ranking_result& a, const ranking_result& b) {
    const auto ra = detail::rank_by_id(a);
    const auto rb = detail::rank_by_id(b);
    detail::require_same_vm_set(ra, rb);
    const std::size_t m = ra.size();
    if (m < 2)
        throw data_error("pearson correlation needs at least 2 VMs");

    double sum_a = 0.0, sum_b = 0.0;
    for (const auto& [id, r] : ra) {
        sum_a += r;
        sum_b += rb.at(id);
    }
    const double mean_a = sum_a / static_cast<double>(m);
    const double mean_b = sum_b / static_cast<double>(m);
    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (const auto& [id, r] : ra) {
        const double da = r - mean_a;
        const double db = rb.at(id) - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0)
        throw data_error("pearson correlation undefined: a rank vector is constant");
    return 100.0 * cov / std::sqrt(var_a * var_b);
}

/// Contribution of one VM to the weighted hamming distance: the rank
/// displacement |R - R'| weighted by C = m - R + 1, so displacing the
/// empirically top-ranked VM costs the most. The decay is linear from m
/// down to 1.
constexpr std::int64_t hamming_contribution(int vm_count, int empirical_rank,
                                            int calculated_rank) noexcept {
    const std::int64_t c = vm_count - empirical_rank + 1;
    const std::int64_t d = empirical_rank >= calculated_rank
                               ? empirical_rank - calculated_rank
                               : calculated_rank - empirical_rank;
    return c * d;
}

/// Weighted hamming distance between the empirical and the calculated
/// ranking. Asymmetric on purpose: coefficients come from the empirical
/// side. Zero iff the rankings are identical.
inline double hamming_score(const ranking_result& empirical, const ranking_result& calculated,
                            int vm_count) {
    const auto er = detail::rank_by_id(empirical);
    const auto cr = detail::rank_by_id(calculated);
    detail::require_same_vm_set(er, cr);
    if (static_cast<std::size_t>(vm_count) != er.size())
        throw data_error("hamming score: vm_count " + std::to_string(vm_count) +
                         " does not match the rankings (" + std::to_string(er.size()) + " VMs)");
    std::int64_t total = 0;
    for (const auto& [id, r] : er)
        total += hamming_contribution(vm_count, r, cr.at(id));
    return static_cast<double>(total);
}

inline double hamming_score(const ranking_result& empirical, const ranking_result& calculated) {
    return hamming_score(empirical, calculated, static_cast<int>(empirical.entries.size()));
}

/// Runs both validation metrics on a method ranking and its empirical
/// counterpart. The two rankings must be of the same mode and execution.
inline validation_report compare(const ranking_result& method, const ranking_result& empirical) {
    if (method.mode != empirical.mode)
        throw data_error(std::string("cannot compare a ") + std::string(to_string(method.mode)) +
                         " ranking against a " + std::string(to_string(empirical.mode)) +
                         " ranking");
    if (method.execution != empirical.execution)
        throw data_error("cannot compare rankings for different execution modes");
    validation_report report;
    report.mode = method.mode;
    report.execution = method.execution;
    report.vm_count = static_cast<int>(method.entries.size());
    report.pearson_percent = pearson_correlation(method, empirical);
    report.hamming_score = hamming_score(empirical, method, report.vm_count);
    return report;
}

} // namespace vmrank
