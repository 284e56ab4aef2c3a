#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace vmrank {

/// The four aggregate attribute groups: memory and process, local
/// communication, computation, storage.
enum class aggregate_group : std::uint8_t { g1, g2, g3, g4 };

/// Each aggregate group splits into two fine-grain sub-groups
/// (G1 -> G1_1/G1_2 and so on).
enum class sub_group : std::uint8_t { g1_1, g1_2, g2_1, g2_2, g3_1, g3_2, g4_1, g4_2 };

/// Whether a larger raw value of the attribute means a better VM.
enum class direction : std::uint8_t { higher_better, lower_better };

/// A weight vector carries either 4 aggregate weights or 8 fine-grain weights.
enum class weight_kind : std::uint8_t { aggregate, fine_grain };

/// P = performance only, PC = performance per cost.
enum class ranking_mode : std::uint8_t { performance, performance_cost };

enum class execution_mode : std::uint8_t { sequential, parallel };

inline constexpr int aggregate_group_count = 4;
inline constexpr int sub_group_count = 8;

/// Weights are small integers: 0 (group irrelevant) through 5 (critical).
inline constexpr int min_weight = 0;
inline constexpr int max_weight = 5;
inline constexpr int weight_domain_size = max_weight - min_weight + 1;

constexpr int index_of(aggregate_group g) noexcept { return static_cast<int>(g); }
constexpr int index_of(sub_group g) noexcept { return static_cast<int>(g); }

constexpr aggregate_group parent_of(sub_group g) noexcept {
    return static_cast<aggregate_group>(index_of(g) / 2);
}

constexpr int group_count(weight_kind kind) noexcept {
    return kind == weight_kind::aggregate ? aggregate_group_count : sub_group_count;
}

constexpr std::string_view to_string(aggregate_group g) noexcept {
    constexpr std::array<std::string_view, 4> names{"G1", "G2", "G3", "G4"};
    return names[static_cast<std::size_t>(g)];
}

constexpr std::string_view to_string(sub_group g) noexcept {
    constexpr std::array<std::string_view, 8> names{"G1_1", "G1_2", "G2_1", "G2_2",
                                                    "G3_1", "G3_2", "G4_1", "G4_2"};
    return names[static_cast<std::size_t>(g)];
}

constexpr std::string_view to_string(direction d) noexcept {
    return d == direction::higher_better ? "higher_better" : "lower_better";
}

constexpr std::string_view to_string(weight_kind k) noexcept {
    return k == weight_kind::aggregate ? "aggregate" : "fine_grain";
}

constexpr std::string_view to_string(ranking_mode m) noexcept {
    return m == ranking_mode::performance ? "P" : "PC";
}

constexpr std::string_view to_string(execution_mode e) noexcept {
    return e == execution_mode::sequential ? "sequential" : "parallel";
}

constexpr std::string_view describe(aggregate_group g) noexcept {
    constexpr std::array<std::string_view, 4> text{"memory and process", "local communication",
                                                   "computation", "storage"};
    return text[static_cast<std::size_t>(g)];
}

constexpr std::string_view describe(sub_group g) noexcept {
    constexpr std::array<std::string_view, 8> text{
        "process latency",      "memory latency",         "local communication latency",
        "local communication bandwidth", "integer operations", "floating point operations",
        "file I/O bandwidth",   "file I/O frequency"};
    return text[static_cast<std::size_t>(g)];
}

/// Label of the weight slot `index` (0-based) for the given kind: "G1".."G4"
/// or "G1_1".."G4_2".
constexpr std::string_view group_label(weight_kind kind, int index) noexcept {
    return kind == weight_kind::aggregate ? to_string(static_cast<aggregate_group>(index))
                                          : to_string(static_cast<sub_group>(index));
}

constexpr std::optional<aggregate_group> parse_aggregate_group(std::string_view s) noexcept {
    for (int i = 0; i < aggregate_group_count; ++i)
        if (s == to_string(static_cast<aggregate_group>(i)))
            return static_cast<aggregate_group>(i);
    return std::nullopt;
}

constexpr std::optional<sub_group> parse_sub_group(std::string_view s) noexcept {
    for (int i = 0; i < sub_group_count; ++i)
        if (s == to_string(static_cast<sub_group>(i)))
            return static_cast<sub_group>(i);
    return std::nullopt;
}

constexpr std::optional<direction> parse_direction(std::string_view s) noexcept {
    if (s == "higher_better")
        return direction::higher_better;
    if (s == "lower_better")
        return direction::lower_better;
    return std::nullopt;
}

constexpr std::optional<weight_kind> parse_weight_kind(std::string_view s) noexcept {
    if (s == "aggregate")
        return weight_kind::aggregate;
    if (s == "fine_grain")
        return weight_kind::fine_grain;
    return std::nullopt;
}

constexpr std::optional<execution_mode> parse_execution_mode(std::string_view s) noexcept {
    if (s == "sequential")
        return execution_mode::sequential;
    if (s == "parallel")
        return execution_mode::parallel;
    return std::nullopt;
}

} // namespace vmrank
