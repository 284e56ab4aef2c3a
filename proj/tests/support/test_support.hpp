#pragma once

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <unistd.h>

#include "vmrank/vmrank.hpp"

namespace testsupport {

inline std::filesystem::path data_dir() {
#ifdef VMRANK_DATA_DIR
    return std::filesystem::path(VMRANK_DATA_DIR);
#else
    return std::filesystem::path("data");
#endif
}

/// Temporary file that cleans up after itself.
class temp_file {
public:
    explicit temp_file(const std::string& contents, const std::string& suffix = ".tmp") {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("vmrank_test_" + std::to_string(++counter) + "_" +
                 std::to_string(static_cast<long>(::getpid())) + suffix);
        std::ofstream out(path_);
        out << contents;
    }
    ~temp_file() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    temp_file(const temp_file&) = delete;
    temp_file& operator=(const temp_file&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Small catalog used across the unit tests: two attributes per aggregate
/// group with mixed directions, `count` VMs with distinct costs.
inline vmrank::catalog make_test_catalog(std::size_t vm_count, bool distinct_costs = true) {
    using namespace vmrank;
    catalog cat;
    cat.attributes = {
        {"a_lat", "latency a", aggregate_group::g1, sub_group::g1_1, direction::lower_better, "us", false},
        {"b_lat", "latency b", aggregate_group::g1, sub_group::g1_2, direction::lower_better, "ns", false},
        {"c_lat", "latency c", aggregate_group::g2, sub_group::g2_1, direction::lower_better, "us", false},
        {"c_bw", "bandwidth c", aggregate_group::g2, sub_group::g2_2, direction::higher_better, "MB/s", false},
        {"d_ops", "ops d", aggregate_group::g3, sub_group::g3_1, direction::higher_better, "ops/s", true},
        {"d_time", "op time d", aggregate_group::g3, sub_group::g3_2, direction::lower_better, "ns", false},
        {"e_bw", "bandwidth e", aggregate_group::g4, sub_group::g4_1, direction::higher_better, "MB/s", false},
        {"e_ops", "ops e", aggregate_group::g4, sub_group::g4_2, direction::higher_better, "ops/s", false},
    };
    for (std::size_t i = 0; i < vm_count; ++i) {
        vm_profile v;
        v.id = "vm" + std::string(1, static_cast<char>('a' + i));
        v.vcpus = static_cast<int>(1 + i % 4 * 2);
        v.memory_gib = 4.0 * static_cast<double>(i + 1);
        v.cost_per_hour = distinct_costs ? 0.1 * static_cast<double>(i + 1) : 0.5;
        cat.vms.push_back(std::move(v));
    }
    return cat;
}

/// A complete random measurement matrix over the given catalog.
inline vmrank::measurement_matrix random_matrix(const vmrank::catalog& cat, std::mt19937& rng,
                                                double lo = 1.0, double hi = 1000.0) {
    vmrank::measurement_matrix mm;
    mm.vms = cat.vms;
    mm.attributes = cat.attributes;
    std::uniform_real_distribution<double> dist(lo, hi);
    mm.values.resize(cat.vms.size() * cat.attributes.size());
    for (auto& v : mm.values)
        v = dist(rng);
    return mm;
}

inline vmrank::weight_vector random_weights(vmrank::weight_kind kind, std::mt19937& rng) {
    vmrank::weight_vector w;
    w.kind = kind;
    std::uniform_int_distribution<int> dist(vmrank::min_weight, vmrank::max_weight);
    bool any = false;
    w.values.resize(static_cast<std::size_t>(vmrank::group_count(kind)));
    do {
        for (auto& v : w.values) {
            v = dist(rng);
            any = any || v != 0;
        }
    } while (!any);
    return w;
}

/// One case-study fixture: per VM, method and empirical ranks for the four
/// mode/execution combinations.
struct rank_table {
    std::vector<std::string> vm_ids;
    // column order: seq_p_method, seq_p_empirical, par_p_method, par_p_empirical,
    //               seq_pc_method, seq_pc_empirical, par_pc_method, par_pc_empirical
    std::vector<std::array<int, 8>> ranks;
};

inline rank_table load_rank_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open rank table " + path.string());
    rank_table table;
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        auto fields = vmrank::detail::split_csv_line(line);
        if (fields.size() != 9)
            throw std::runtime_error("bad rank table row: " + line);
        table.vm_ids.push_back(fields[0]);
        std::array<int, 8> row{};
        for (int c = 0; c < 8; ++c)
            row[static_cast<std::size_t>(c)] = std::stoi(fields[static_cast<std::size_t>(c + 1)]);
        table.ranks.push_back(row);
    }
    return table;
}

/// Builds a ranking_result from explicit (vm, rank) pairs, synthesizing
/// scores so the sortedness invariant holds.
inline vmrank::ranking_result ranking_from_ranks(const std::vector<std::string>& vm_ids,
                                                 const std::vector<int>& ranks,
                                                 vmrank::ranking_mode mode,
                                                 vmrank::execution_mode execution) {
    vmrank::ranking_result r;
    r.mode = mode;
    r.execution = execution;
    std::map<int, std::string> by_rank;
    for (std::size_t i = 0; i < vm_ids.size(); ++i)
        by_rank[ranks[i]] = vm_ids[i];
    for (const auto& [rank, id] : by_rank) {
        const auto m = static_cast<double>(vm_ids.size());
        const double score = m - rank; // descending with rank
        const double key = mode == vmrank::ranking_mode::performance ? score
                                                                     : static_cast<double>(rank);
        r.entries.push_back({id, rank, score, key});
    }
    return r;
}

} // namespace testsupport
