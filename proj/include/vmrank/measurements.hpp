#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vmrank/catalog.hpp"
#include "vmrank/error.hpp"

namespace vmrank {

/// One raw benchmark execution: the value of one attribute on one VM for one
/// repeat of the measurement campaign.
struct measurement_run {
    std::string vm_id;
    std::string attribute_id;
    std::uint32_t repeat_index = 0;
    double value = 0.0;
};

/// The complete m x n value matrix: one row per VM, one column per attribute,
/// in catalog order. Immutable after ingestion.
struct measurement_matrix {
    std::vector<vm_profile> vms;
    std::vector<attribute_definition> attributes;
    std::vector<double> values; // row-major, vms.size() x attributes.size()

    std::size_t vm_count() const noexcept { return vms.size(); }
    std::size_t attribute_count() const noexcept { return attributes.size(); }

    double value(std::size_t vm, std::size_t attribute) const {
        return values[vm * attributes.size() + attribute];
    }
    double& at(std::size_t vm, std::size_t attribute) {
        return values[vm * attributes.size() + attribute];
    }
};

namespace detail {

inline std::string join_listing(const std::set<std::string>& items, std::size_t cap = 10) {
    std::string out;
    std::size_t shown = 0;
    for (const auto& s : items) {
        if (shown == cap) {
            out += ", and " + std::to_string(items.size() - cap) + " more";
            break;
        }
        if (shown)
            out += ", ";
        out += s;
        ++shown;
    }
    return out;
}

} // namespace detail

/// Aggregates raw runs into the measurement matrix. Each cell is the
/// arithmetic mean over that (vm, attribute) pair's repeats, summed in
/// ascending repeat_index order so the result does not depend on the order
/// runs are supplied in.
///
/// Throws data_error when a run references an unknown id, when a value is
/// negative, or when any (vm, attribute) cell ends up with no runs.
inline measurement_matrix ingest_runs(const catalog& cat, std::span<const measurement_run> runs) {
    const std::size_t m = cat.vms.size();
    const std::size_t n = cat.attributes.size();

    std::unordered_map<std::string_view, std::size_t> vm_index, attr_index;
    for (std::size_t i = 0; i < m; ++i)
        vm_index.emplace(cat.vms[i].id, i);
    for (std::size_t j = 0; j < n; ++j)
        attr_index.emplace(cat.attributes[j].id, j);

    std::vector<std::vector<std::pair<std::uint32_t, double>>> cells(m * n);
    std::set<std::string> unknown;
    for (const auto& run : runs) {
        auto vi = vm_index.find(run.vm_id);
        auto ai = attr_index.find(run.attribute_id);
        if (vi == vm_index.end())
            unknown.insert("vm '" + run.vm_id + "'");
        if (ai == attr_index.end())
            unknown.insert("attribute '" + run.attribute_id + "'");
        if (vi == vm_index.end() || ai == attr_index.end())
            continue;
        if (run.value < 0.0)
            throw data_error("negative measurement value for (" + run.vm_id + ", " +
                             run.attribute_id + ")");
        cells[vi->second * n + ai->second].emplace_back(run.repeat_index, run.value);
    }
    if (!unknown.empty())
        throw data_error("measurement runs reference ids not in the catalog: " +
                         detail::join_listing(unknown));

    std::set<std::string> missing;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (cells[i * n + j].empty())
                missing.insert("(" + cat.vms[i].id + ", " + cat.attributes[j].id + ")");
    if (!missing.empty())
        throw data_error("no measurement runs for " + std::to_string(missing.size()) +
                         " cell(s): " + detail::join_listing(missing));

    measurement_matrix mm;
    mm.vms = cat.vms;
    mm.attributes = cat.attributes;
    mm.values.resize(m * n);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        auto& repeats = cells[c];
        // The value component breaks repeat_index ties so the sum stays a
        // function of the multiset of runs, not of their arrival order.
        std::sort(repeats.begin(), repeats.end());
        double sum = 0.0;
        for (const auto& [idx, v] : repeats)
            sum += v;
        mm.values[c] = sum / static_cast<double>(repeats.size());
    }
    return mm;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

inline double parse_double_field(const std::string& text, const std::filesystem::path& path,
                                 std::size_t line_no, const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw parse_error(path.string() + ":" + std::to_string(line_no) + ": invalid " + what +
                          " '" + text + "'");
    return v;
}

inline std::uint64_t parse_uint_field(const std::string& text, const std::filesystem::path& path,
                                      std::size_t line_no, const char* what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw parse_error(path.string() + ":" + std::to_string(line_no) + ": invalid " + what +
                          " '" + text + "'");
    return v;
}

} // namespace detail

/// Reads a runs CSV with header `vm_id,attribute_id,repeat_index,value`.
/// Decimal separator is '.', encoding UTF-8. Blank lines are ignored.
inline std::vector<measurement_run> load_runs(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open runs file '" + path.string() + "'");

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        throw parse_error(path.string() + ": empty runs file");
    ++line_no;
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != "vm_id,attribute_id,repeat_index,value")
        throw parse_error(path.string() + ": expected header 'vm_id,attribute_id,repeat_index,value', got '" +
                          line + "'");

    std::vector<measurement_run> runs;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r")
            continue;
        auto fields = detail::split_csv_line(line);
        if (fields.size() != 4)
            throw parse_error(path.string() + ":" + std::to_string(line_no) +
                              ": expected 4 fields, got " + std::to_string(fields.size()));
        measurement_run run;
        run.vm_id = std::move(fields[0]);
        run.attribute_id = std::move(fields[1]);
        run.repeat_index = static_cast<std::uint32_t>(
            detail::parse_uint_field(fields[2], path, line_no, "repeat_index"));
        run.value = detail::parse_double_field(fields[3], path, line_no, "value");
        if (run.value < 0.0)
            throw parse_error(path.string() + ":" + std::to_string(line_no) +
                              ": measurement values must be non-negative");
        runs.push_back(std::move(run));
    }
    return runs;
}

} // namespace vmrank
