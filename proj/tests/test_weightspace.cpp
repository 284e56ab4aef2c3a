#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>

#include "support/test_support.hpp"
#include "vmrank/vmrank.hpp"

using namespace vmrank;

TEST_CASE("aggregate space enumerates exactly 1295 vectors") {
    weight_space space(weight_kind::aggregate);
    CHECK(space.cardinality() == 1295);

    std::uint64_t count = 0;
    bool saw_all_zero = false;
    std::vector<int> first;
    space.for_each([&](const weight_vector& w) {
        if (count == 0)
            first = w.values;
        ++count;
        if (std::all_of(w.values.begin(), w.values.end(), [](int v) { return v == 0; }))
            saw_all_zero = true;
    });
    CHECK(count == 1295);
    CHECK_FALSE(saw_all_zero);
    CHECK(first == std::vector<int>{0, 0, 0, 1});
}

TEST_CASE("fine-grain space has cardinality 1679615") {
    weight_space space(weight_kind::fine_grain);
    CHECK(space.cardinality() == 1679615);
    CHECK(space.dimensions() == 8);
    CHECK(space.vector_at(1).values == std::vector<int>{0, 0, 0, 0, 0, 0, 0, 1});
    CHECK(space.vector_at(1679615).values == std::vector<int>{5, 5, 5, 5, 5, 5, 5, 5});
}

TEST_CASE("enumeration order is lexicographic") {
    weight_space space(weight_kind::aggregate);
    std::vector<int> prev;
    std::uint64_t checked = 0;
    space.for_each([&](const weight_vector& w) {
        if (!prev.empty())
            CHECK(std::lexicographical_compare(prev.begin(), prev.end(), w.values.begin(),
                                               w.values.end()));
        prev = w.values;
        ++checked;
    });
    CHECK(checked == 1295);
    CHECK(space.vector_at(7).values == std::vector<int>{0, 0, 1, 1});
    CHECK_THROWS_AS(space.vector_at(0), data_error);
    CHECK_THROWS_AS(space.vector_at(1296), data_error);
}

TEST_CASE("single-VM fleet puts all mass on that VM") {
    const catalog cat = testsupport::make_test_catalog(1);
    std::mt19937 rng(301);
    const auto mm = testsupport::random_matrix(cat, rng);
    weight_space space(weight_kind::aggregate);
    const auto table = top_k_frequency(mm, space, ranking_mode::performance,
                                       execution_mode::sequential, 1);
    REQUIRE(table.vm_ids.size() == 1);
    CHECK(table.count(0, 1) == space.cardinality());
}

TEST_CASE("frequency table matches a serial step-by-step recomputation") {
    const catalog cat = testsupport::make_test_catalog(3);
    std::mt19937 rng(307);
    const auto mm = testsupport::random_matrix(cat, rng);
    weight_space space(weight_kind::aggregate);

    for (auto mode : {ranking_mode::performance, ranking_mode::performance_cost}) {
        const auto table =
            top_k_frequency(mm, space, mode, execution_mode::sequential, 3, /*workers=*/3);

        // Oracle: one ranking at a time through the public scoring pipeline.
        std::map<std::string, std::size_t> vm_index;
        for (std::size_t i = 0; i < table.vm_ids.size(); ++i)
            vm_index[table.vm_ids[i]] = i;
        std::vector<std::uint64_t> expected(table.vm_ids.size() * 3, 0);
        space.for_each([&](const weight_vector& w) {
            const auto sv = compute_scores(mm, w, execution_mode::sequential);
            const auto r = rank(sv, mm.vms, mode);
            for (int pos = 0; pos < 3; ++pos)
                ++expected[vm_index[r.entries[static_cast<std::size_t>(pos)].vm_id] * 3 +
                           static_cast<std::size_t>(pos)];
        });
        CHECK(table.counts == expected);
    }
}

TEST_CASE("per-position counts sum to the cardinality") {
    const catalog cat = testsupport::make_test_catalog(4);
    std::mt19937 rng(311);
    const auto mm = testsupport::random_matrix(cat, rng);
    weight_space space(weight_kind::aggregate);
    for (auto exec : {execution_mode::sequential, execution_mode::parallel}) {
        const auto table =
            top_k_frequency(mm, space, ranking_mode::performance_cost, exec, 3, 2);
        for (int pos = 1; pos <= 3; ++pos) {
            std::uint64_t total = 0;
            for (std::size_t vm = 0; vm < table.vm_ids.size(); ++vm)
                total += table.count(vm, pos);
            CHECK(total == 1295);
        }
    }
}

TEST_CASE("worker count never changes the frequency table") {
    const catalog cat = testsupport::make_test_catalog(5);
    std::mt19937 rng(313);
    const auto mm = testsupport::random_matrix(cat, rng);
    weight_space space(weight_kind::aggregate);
    const auto reference = top_k_frequency(mm, space, ranking_mode::performance,
                                           execution_mode::sequential, 3, 1);
    for (int workers : {2, 3, 8, 64}) {
        const auto table = top_k_frequency(mm, space, ranking_mode::performance,
                                           execution_mode::sequential, 3, workers);
        CHECK(table.counts == reference.counts);
    }
    CHECK(report::frequency_to_csv(reference) ==
          report::frequency_to_csv(top_k_frequency(mm, space, ranking_mode::performance,
                                                   execution_mode::sequential, 3, 8)));
}

TEST_CASE("top_k bounds are enforced") {
    const catalog cat = testsupport::make_test_catalog(3);
    std::mt19937 rng(317);
    const auto mm = testsupport::random_matrix(cat, rng);
    weight_space space(weight_kind::aggregate);
    CHECK_THROWS_AS(top_k_frequency(mm, space, ranking_mode::performance,
                                    execution_mode::sequential, 4),
                    data_error);
    CHECK_THROWS_AS(top_k_frequency(mm, space, ranking_mode::performance,
                                    execution_mode::sequential, 0),
                    data_error);
    CHECK_THROWS_AS(top_k_frequency(mm, space, ranking_mode::performance,
                                    execution_mode::sequential, 3, 0),
                    data_error);
}

TEST_CASE("score curve hits zero when the empirical ranking is achievable") {
    const catalog cat = testsupport::make_test_catalog(3);
    std::mt19937 rng(331);
    const auto mm = testsupport::random_matrix(cat, rng);
    weight_space space(weight_kind::aggregate);

    // Use the ranking of some mid-space weight vector as the "empirical"
    // ranking; the curve must then bottom out at zero.
    const auto w = space.vector_at(777);
    const auto target = rank_performance(compute_scores(mm, w, execution_mode::sequential), mm.vms);
    const auto curve = score_curve(mm, space, ranking_mode::performance,
                                   execution_mode::sequential, target, 2);
    REQUIRE(curve.entries.size() == space.cardinality());
    CHECK(curve.entries.front().score == 0.0);
}

TEST_CASE("score curve is sorted and non-negative") {
    const catalog cat = testsupport::make_test_catalog(4);
    std::mt19937 rng(337);
    const auto mm = testsupport::random_matrix(cat, rng);
    weight_space space(weight_kind::aggregate);
    const auto empirical = rank_performance(
        compute_scores(mm, space.vector_at(100), execution_mode::sequential), mm.vms);
    const auto curve = score_curve(mm, space, ranking_mode::performance,
                                   execution_mode::sequential, empirical);
    for (std::size_t i = 0; i < curve.entries.size(); ++i) {
        CHECK(curve.entries[i].score >= 0.0);
        if (i > 0) {
            const bool ordered =
                curve.entries[i - 1].score < curve.entries[i].score ||
                (curve.entries[i - 1].score == curve.entries[i].score &&
                 curve.entries[i - 1].weights < curve.entries[i].weights);
            CHECK(ordered);
        }
    }
}

TEST_CASE("score curve matches an exhaustive oracle") {
    const catalog cat = testsupport::make_test_catalog(3);
    std::mt19937 rng(347);
    const auto mm = testsupport::random_matrix(cat, rng);
    weight_space space(weight_kind::aggregate);
    const auto empirical = rank_performance(
        compute_scores(mm, space.vector_at(55), execution_mode::sequential), mm.vms);

    const auto curve = score_curve(mm, space, ranking_mode::performance,
                                   execution_mode::sequential, empirical, 3);

    // Oracle: every weight vector through the public pipeline, one at a
    // time, collecting (vector, hamming) then sorting the same way.
    std::vector<std::pair<std::vector<int>, double>> expected;
    space.for_each([&](const weight_vector& w) {
        const auto r =
            rank_performance(compute_scores(mm, w, execution_mode::sequential), mm.vms);
        expected.emplace_back(w.values, hamming_score(empirical, r));
    });
    std::stable_sort(expected.begin(), expected.end(),
                     [](const auto& a, const auto& b) {
                         if (a.second != b.second)
                             return a.second < b.second;
                         return a.first < b.first;
                     });
    REQUIRE(curve.entries.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(curve.entries[i].score == expected[i].second);
        for (std::size_t d = 0; d < expected[i].first.size(); ++d)
            CHECK(static_cast<int>(curve.entries[i].weights[d]) == expected[i].first[d]);
    }
}

TEST_CASE("score curve rejects a mismatched empirical fleet") {
    const catalog cat = testsupport::make_test_catalog(3);
    std::mt19937 rng(349);
    const auto mm = testsupport::random_matrix(cat, rng);
    weight_space space(weight_kind::aggregate);
    const auto empirical = testsupport::ranking_from_ranks(
        {"vma", "vmb", "ghost"}, {1, 2, 3}, ranking_mode::performance,
        execution_mode::sequential);
    CHECK_THROWS_AS(score_curve(mm, space, ranking_mode::performance, execution_mode::sequential,
                                empirical),
                    data_error);
}
