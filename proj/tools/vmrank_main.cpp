// Command-line front end: rank a VM fleet from benchmark data and weights,
// sweep the whole weight space, and validate rankings against measured
// application times.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vmrank/vmrank.hpp"

namespace {

using namespace vmrank;

struct cli_options {
    std::string catalog_path;
    std::string runs_path;
    std::string weights_path;
    std::string empirical_path;
    std::string output_path;
    std::string mode = "p";
    std::string exec = "seq";
    std::string format = "csv";
    std::string space = "aggregate";
    int top_k = 3;
    int workers = 1;
};

ranking_mode mode_of(const cli_options& opt) {
    return opt.mode == "p" ? ranking_mode::performance : ranking_mode::performance_cost;
}

execution_mode exec_of(const cli_options& opt) {
    return opt.exec == "seq" ? execution_mode::sequential : execution_mode::parallel;
}

void emit(const std::string& text, const cli_options& opt) {
    if (opt.output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opt.output_path);
    if (!out)
        throw error("cannot write output file '" + opt.output_path + "'");
    out << text;
}

measurement_matrix load_matrix(const cli_options& opt, catalog& cat) {
    cat = load_catalog(opt.catalog_path);
    const auto runs = load_runs(opt.runs_path);
    return ingest_runs(cat, runs);
}

int cmd_rank(const cli_options& opt) {
    catalog cat;
    const measurement_matrix mm = load_matrix(opt, cat);
    const weight_vector weights = load_weights(opt.weights_path);
    const expanded_weights expanded = expand_weights(weights, cat.attributes);
    const score_vector scores = compute_scores(mm, weights, exec_of(opt));
    const ranking_result ranking = rank(scores, mm.vms, mode_of(opt));
    const report::weight_audit audit = report::audit_weights(cat.attributes, expanded);

    if (opt.format == "csv")
        emit(report::ranking_to_csv(ranking, &audit), opt);
    else if (opt.format == "json")
        emit(report::ranking_to_json(ranking, &audit).dump(2) + "\n", opt);
    else
        emit(report::ranking_to_markdown(ranking, &audit), opt);
    return 0;
}

int cmd_enumerate(const cli_options& opt) {
    catalog cat;
    const measurement_matrix mm = load_matrix(opt, cat);
    const weight_space space(opt.space == "aggregate" ? weight_kind::aggregate
                                                      : weight_kind::fine_grain);

    if (!opt.empirical_path.empty()) {
        const auto observations = load_empirical(opt.empirical_path);
        const ranking_result empirical =
            empirical_rank(observations, cat.vms, mode_of(opt), exec_of(opt));
        const score_curve_result curve =
            score_curve(mm, space, mode_of(opt), exec_of(opt), empirical, opt.workers);
        if (opt.format == "csv")
            emit(report::curve_to_csv(curve), opt);
        else if (opt.format == "json")
            emit(report::curve_to_json(curve).dump(2) + "\n", opt);
        else
            emit(report::curve_to_markdown(curve), opt);
        return 0;
    }

    const frequency_table table =
        top_k_frequency(mm, space, mode_of(opt), exec_of(opt), opt.top_k, opt.workers);
    if (opt.format == "csv")
        emit(report::frequency_to_csv(table), opt);
    else if (opt.format == "json")
        emit(report::frequency_to_json(table).dump(2) + "\n", opt);
    else
        emit(report::frequency_to_markdown(table), opt);
    return 0;
}

int cmd_validate(const cli_options& opt) {
    catalog cat;
    const measurement_matrix mm = load_matrix(opt, cat);
    const weight_vector weights = load_weights(opt.weights_path);
    const score_vector scores = compute_scores(mm, weights, exec_of(opt));
    const ranking_result method = rank(scores, mm.vms, mode_of(opt));
    const auto observations = load_empirical(opt.empirical_path);
    const ranking_result empirical =
        empirical_rank(observations, cat.vms, mode_of(opt), exec_of(opt));
    const validation_report result = compare(method, empirical);

    if (opt.format == "csv")
        emit(report::validation_to_csv(result), opt);
    else if (opt.format == "json")
        emit(report::validation_to_json(result).dump(2) + "\n", opt);
    else
        emit(report::validation_to_markdown(result), opt);
    return 0;
}

int cmd_inspect(const cli_options& opt) {
    const catalog cat = load_catalog(opt.catalog_path);
    normalized_matrix nm;
    bool have_stats = false;
    if (!opt.runs_path.empty()) {
        const auto runs = load_runs(opt.runs_path);
        nm = normalize(ingest_runs(cat, runs));
        have_stats = true;
    }

    if (opt.format == "json") {
        nlohmann::json doc{{"catalog", to_json(cat)}};
        if (have_stats) {
            nlohmann::json stats = nlohmann::json::array();
            for (std::size_t j = 0; j < nm.attribute_count(); ++j)
                stats.push_back({{"attribute_id", nm.attributes[j].id},
                                 {"mean", nm.means[j]},
                                 {"stddev", nm.stddevs[j]}});
            doc["column_stats"] = std::move(stats);
        }
        emit(doc.dump(2) + "\n", opt);
        return 0;
    }

    if (opt.format == "csv") {
        std::string out;
        out += "record,id,field1,field2,field3,field4,field5\n";
        for (const auto& a : cat.attributes)
            out += "attribute," + a.id + "," + std::string(to_string(a.group)) + "," +
                   std::string(to_string(a.subgroup)) + "," + std::string(to_string(a.dir)) +
                   "," + a.unit + "," + (a.parallel_scalable ? "scalable" : "fixed") + "\n";
        for (const auto& v : cat.vms)
            out += "vm," + v.id + "," + std::to_string(v.vcpus) + "," +
                   report::format_double(v.memory_gib) + "," +
                   report::format_double(v.cost_per_hour) + ",,\n";
        if (have_stats)
            for (std::size_t j = 0; j < nm.attribute_count(); ++j)
                out += "column_stat," + nm.attributes[j].id + "," +
                       report::format_double(nm.means[j]) + "," +
                       report::format_double(nm.stddevs[j]) + ",,,\n";
        emit(out, opt);
        return 0;
    }

    std::string out;
    out += "## Catalog: " + std::to_string(cat.attributes.size()) + " attributes, " +
           std::to_string(cat.vms.size()) + " VMs\n\n";
    out += "| attribute | group | sub-group | direction | unit | parallel |\n"
           "|---|---|---|---|---|---|\n";
    for (const auto& a : cat.attributes)
        out += "| " + a.id + " | " + std::string(to_string(a.group)) + " | " +
               std::string(to_string(a.subgroup)) + " | " + std::string(to_string(a.dir)) +
               " | " + a.unit + " | " + (a.parallel_scalable ? "scalable" : "fixed") + " |\n";
    out += "\n| vm | vCPUs | memory (GiB) | cost ($/hr) |\n|---|---:|---:|---:|\n";
    for (const auto& v : cat.vms)
        out += "| " + v.id + " | " + std::to_string(v.vcpus) + " | " +
               report::format_double(v.memory_gib) + " | " +
               report::format_double(v.cost_per_hour) + " |\n";
    if (have_stats) {
        out += "\n### Column statistics\n\n| attribute | mean | population stddev |\n|---|---:|---:|\n";
        for (std::size_t j = 0; j < nm.attribute_count(); ++j)
            out += "| " + nm.attributes[j].id + " | " + report::format_double(nm.means[j]) +
                   " | " + report::format_double(nm.stddevs[j]) + " |\n";
    }
    emit(out, opt);
    return 0;
}

void add_common_flags(CLI::App* cmd, cli_options& opt, bool with_exec_mode = true) {
    cmd->add_option("--catalog", opt.catalog_path, "Catalog JSON file")->required();
    cmd->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"csv", "json", "md"}))
        ->capture_default_str();
    cmd->add_option("--output", opt.output_path, "Output file (default: standard output)");
    if (with_exec_mode) {
        cmd->add_option("--mode", opt.mode, "Ranking mode: p (performance) or pc (performance-cost)")
            ->check(CLI::IsMember({"p", "pc"}))
            ->capture_default_str();
        cmd->add_option("--exec", opt.exec, "Execution mode the ranking targets")
            ->check(CLI::IsMember({"seq", "par"}))
            ->capture_default_str();
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark-driven performance and performance-cost ranking of cloud VMs"};
    app.require_subcommand(1);

    cli_options opt;

    CLI::App* rank_cmd = app.add_subcommand("rank", "Rank the fleet for one weight vector");
    add_common_flags(rank_cmd, opt);
    rank_cmd->add_option("--runs", opt.runs_path, "Measurement runs CSV")->required();
    rank_cmd->add_option("--weights", opt.weights_path, "Weights JSON file")->required();

    CLI::App* enum_cmd =
        app.add_subcommand("enumerate", "Sweep every weight vector: top-k frequencies, or an "
                                        "ordered score curve with --empirical");
    add_common_flags(enum_cmd, opt);
    enum_cmd->add_option("--runs", opt.runs_path, "Measurement runs CSV")->required();
    enum_cmd->add_option("--space", opt.space, "Weight space to enumerate")
        ->check(CLI::IsMember({"aggregate", "fine"}))
        ->capture_default_str();
    enum_cmd->add_option("--top", opt.top_k, "Rank positions to tabulate")->capture_default_str();
    enum_cmd->add_option("--workers", opt.workers, "Worker threads")->capture_default_str();
    enum_cmd->add_option("--empirical", opt.empirical_path,
                         "Empirical times CSV; switches output to the score curve");

    CLI::App* validate_cmd =
        app.add_subcommand("validate", "Compare the method ranking against empirical times");
    add_common_flags(validate_cmd, opt);
    validate_cmd->add_option("--runs", opt.runs_path, "Measurement runs CSV")->required();
    validate_cmd->add_option("--weights", opt.weights_path, "Weights JSON file")->required();
    validate_cmd->add_option("--empirical", opt.empirical_path, "Empirical times CSV")->required();

    CLI::App* inspect_cmd = app.add_subcommand("inspect", "Print catalog and matrix summaries");
    add_common_flags(inspect_cmd, opt, /*with_exec_mode=*/false);
    inspect_cmd->add_option("--runs", opt.runs_path, "Measurement runs CSV (adds column stats)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(rank_cmd))
            return cmd_rank(opt);
        if (app.got_subcommand(enum_cmd))
            return cmd_enumerate(opt);
        if (app.got_subcommand(validate_cmd))
            return cmd_validate(opt);
        return cmd_inspect(opt);
    } catch (const vmrank::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
