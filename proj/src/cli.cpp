#include "cdmetrics/cli.hpp"

#include "cdmetrics/diagram.hpp"
#include "cdmetrics/formats.hpp"
#include "cdmetrics/metrics.hpp"
#include "cdmetrics/parser.hpp"
#include "cdmetrics/quality_model.hpp"
#include "cdmetrics/rank_validation.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace cdm::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

enum class OutputFormat { Table, Json, Csv };

struct GlobalOptions {
    OutputFormat format = OutputFormat::Table;
    bool quiet = false;
};

struct Diagnostics {
    std::ostream& err;
    bool quiet;

    void emit(const std::string& line) const {
        if (!quiet) {
            err << line << '\n';
        }
    }
};

std::optional<std::string> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Outcome of loading one diagram file. Produced off-thread, printed in
// argument order.
struct LoadedDiagram {
    std::string path;
    std::optional<ValidatedDiagram> diagram;
    std::optional<MetricsVector> metrics;
    int exit_code = kOk;
    std::string diagnostic;
};

LoadedDiagram load_diagram(const std::string& path) {
    LoadedDiagram result;
    result.path = path;
    auto text = read_file(path);
    if (!text) {
        result.exit_code = kParse;
        result.diagnostic = fmt::format("{}: error: cannot read file", path);
        return result;
    }
    try {
        const bool json = fs::path(path).extension() == ".json";
        const ClassDiagram parsed = json ? parse_json(*text) : parse(*text);
        result.diagram = validate(parsed);
        result.metrics = compute_metrics(*result.diagram);
    } catch (const SyntaxError& e) {
        result.exit_code = kParse;
        result.diagnostic =
            fmt::format("{}:{}:{}: syntax error: {}", path, e.span().line, e.span().column, e.reason());
    } catch (const ValidationError& e) {
        result.exit_code = kValidation;
        result.diagnostic = fmt::format("{}: validation error: {}", path, e.what());
    }
    return result;
}

std::vector<LoadedDiagram> load_all(const std::vector<std::string>& paths) {
    std::vector<std::future<LoadedDiagram>> jobs;
    jobs.reserve(paths.size());
    for (const auto& path : paths) {
        jobs.push_back(std::async(std::launch::async, load_diagram, path));
    }
    std::vector<LoadedDiagram> results;
    results.reserve(jobs.size());
    for (auto& job : jobs) {
        results.push_back(job.get());
    }
    return results;
}

std::string csv_number(double value) {
    return fmt::format("{}", value);
}

std::string key_values(const MetricsVector& metrics, const std::vector<Metric>& which) {
    std::string out;
    for (Metric m : which) {
        if (!out.empty()) {
            out += ',';
        }
        out += fmt::format("{}={}", metric_name(m), metrics[m]);
    }
    return out;
}

int worst(int a, int b) {
    return std::max(a, b);
}

int cmd_metrics(const std::vector<std::string>& paths, const GlobalOptions& opts, std::ostream& out,
                const Diagnostics& diag) {
    const std::vector<Metric> all(kAllMetrics.begin(), kAllMetrics.end());
    int code = kOk;
    ordered_json json_rows = ordered_json::array();
    if (opts.format == OutputFormat::Csv) {
        out << "file,id";
        for (Metric m : all) {
            out << ',' << metric_name(m);
        }
        out << '\n';
    }
    for (const auto& loaded : load_all(paths)) {
        code = worst(code, loaded.exit_code);
        if (!loaded.metrics) {
            diag.emit(loaded.diagnostic);
            continue;
        }
        const auto& mv = *loaded.metrics;
        const std::string& id = loaded.diagram->diagram().id;
        switch (opts.format) {
        case OutputFormat::Table:
            out << loaded.path << ": " << key_values(mv, all) << '\n';
            break;
        case OutputFormat::Csv:
            out << loaded.path << ',' << id;
            for (Metric m : all) {
                out << ',' << mv[m];
            }
            out << '\n';
            break;
        case OutputFormat::Json: {
            ordered_json row;
            row["file"] = loaded.path;
            row["id"] = id;
            row["metrics"] = ordered_json::object();
            for (Metric m : all) {
                row["metrics"][std::string(metric_name(m))] = mv[m];
            }
            json_rows.push_back(std::move(row));
            break;
        }
        }
    }
    if (opts.format == OutputFormat::Json) {
        out << json_rows.dump(2) << '\n';
    }
    return code;
}

std::optional<LinearModel> load_model(const std::string& path, const Diagnostics& diag) {
    if (path.empty()) {
        return published_understandability_model();
    }
    auto text = read_file(path);
    if (!text) {
        diag.emit(fmt::format("{}: error: cannot read model file", path));
        return std::nullopt;
    }
    try {
        return parse_model(*text);
    } catch (const FormatError& e) {
        diag.emit(fmt::format("{}: error: {}", path, e.what()));
        return std::nullopt;
    }
}

int cmd_estimate(const std::vector<std::string>& paths, const std::string& model_path, const GlobalOptions& opts,
                 std::ostream& out, const Diagnostics& diag) {
    auto model = load_model(model_path, diag);
    if (!model) {
        return kData;
    }
    std::vector<Metric> used;
    for (const auto& c : model->coefficients()) {
        used.push_back(c.metric);
    }

    int code = kOk;
    ordered_json json_rows = ordered_json::array();
    if (opts.format == OutputFormat::Csv) {
        out << "file,id";
        for (Metric m : used) {
            out << ',' << metric_name(m);
        }
        out << ",estimate\n";
    }
    for (const auto& loaded : load_all(paths)) {
        code = worst(code, loaded.exit_code);
        if (!loaded.metrics) {
            diag.emit(loaded.diagnostic);
            continue;
        }
        const auto& mv = *loaded.metrics;
        const double estimate = model->estimate(mv);
        const std::string& id = loaded.diagram->diagram().id;
        switch (opts.format) {
        case OutputFormat::Table:
            out << fmt::format("{}: {} understandability={:.3f}\n", loaded.path, key_values(mv, used), estimate);
            break;
        case OutputFormat::Csv:
            out << loaded.path << ',' << id;
            for (Metric m : used) {
                out << ',' << mv[m];
            }
            out << ',' << csv_number(estimate) << '\n';
            break;
        case OutputFormat::Json: {
            ordered_json row;
            row["file"] = loaded.path;
            row["id"] = id;
            row["metrics"] = ordered_json::object();
            for (Metric m : used) {
                row["metrics"][std::string(metric_name(m))] = mv[m];
            }
            row["estimate"] = estimate;
            json_rows.push_back(std::move(row));
            break;
        }
        }
    }
    if (opts.format == OutputFormat::Json) {
        out << json_rows.dump(2) << '\n';
    }
    return code;
}

int cmd_fit(const std::string& corpus_path, const std::vector<Metric>& predictors, std::ostream& out,
            const Diagnostics& diag) {
    auto text = read_file(corpus_path);
    if (!text) {
        diag.emit(fmt::format("{}: error: cannot read corpus", corpus_path));
        return kData;
    }
    try {
        const auto samples = parse_fit_corpus(*text);
        out << model_to_json(fit(samples, predictors));
        return kOk;
    } catch (const InsufficientSamples& e) {
        diag.emit(fmt::format("{}: InsufficientSamples: {}", corpus_path, e.what()));
    } catch (const SingularDesign& e) {
        diag.emit(fmt::format("{}: SingularDesign: {}", corpus_path, e.what()));
    } catch (const Error& e) {
        diag.emit(fmt::format("{}: error: {}", corpus_path, e.what()));
    }
    return kData;
}

std::string critical_text(double value) {
    return std::isnan(value) ? "n/a" : fmt::format("{:.4f}", value);
}

ordered_json report_json(const ValidationReport& report) {
    ordered_json doc;
    doc["n"] = report.n;
    doc["mode"] = to_string(report.mode);
    doc["d"] = report.d;
    doc["sum_d_squared"] = report.sum_d_squared;
    doc["r_s"] = report.r_s;
    doc["alpha"] = report.alpha;
    doc["critical_value"] = std::isnan(report.critical_value) ? ordered_json() : ordered_json(report.critical_value);
    doc["significant"] = report.significant;
    return doc;
}

void print_report(const ValidationReport& report, OutputFormat format, std::ostream& out) {
    switch (format) {
    case OutputFormat::Table:
        out << fmt::format("n            {}\n", report.n);
        out << fmt::format("mode         {}\n", to_string(report.mode));
        out << fmt::format("sum_d2       {:.4f}\n", report.sum_d_squared);
        out << fmt::format("r_s          {:.4f}\n", report.r_s);
        out << fmt::format("alpha        {}\n", report.alpha);
        out << fmt::format("critical     {}\n", critical_text(report.critical_value));
        out << fmt::format("significant  {}\n", report.significant ? "yes" : "no");
        break;
    case OutputFormat::Csv:
        out << "n,mode,sum_d_squared,r_s,alpha,critical_value,significant\n";
        out << report.n << ',' << to_string(report.mode) << ',' << csv_number(report.sum_d_squared) << ','
            << csv_number(report.r_s) << ',' << csv_number(report.alpha) << ','
            << (std::isnan(report.critical_value) ? std::string() : csv_number(report.critical_value)) << ','
            << (report.significant ? "true" : "false") << '\n';
        break;
    case OutputFormat::Json:
        out << report_json(report).dump(2) << '\n';
        break;
    }
}

int cmd_validate(const std::string& corpus_path, DifferenceMode mode, double alpha, const std::string& model_path,
                 const GlobalOptions& opts, std::ostream& out, const Diagnostics& diag) {
    auto text = read_file(corpus_path);
    if (!text) {
        diag.emit(fmt::format("{}: error: cannot read corpus", corpus_path));
        return kData;
    }
    std::vector<ValidationRow> rows;
    try {
        rows = parse_validation_corpus(*text);
    } catch (const FormatError& e) {
        diag.emit(fmt::format("{}: error: {}", corpus_path, e.what()));
        return kData;
    }

    // Rows naming a diagram are estimated with the selected model; paths
    // resolve against the corpus file's directory.
    std::vector<std::string> diagram_paths;
    for (const auto& row : rows) {
        if (row.diagram) {
            const fs::path p(*row.diagram);
            diagram_paths.push_back(p.is_absolute() ? p.string() : (fs::path(corpus_path).parent_path() / p).string());
        }
    }
    std::vector<RatedPair> pairs;
    if (!diagram_paths.empty()) {
        auto model = load_model(model_path, diag);
        if (!model) {
            return kData;
        }
        int code = kOk;
        auto loaded = load_all(diagram_paths);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            code = worst(code, loaded[i].exit_code);
            if (!loaded[i].metrics) {
                diag.emit(loaded[i].diagnostic);
                continue;
            }
            pairs.push_back({rows[i].known, model->estimate(*loaded[i].metrics)});
        }
        if (code != kOk) {
            return code;
        }
    } else {
        for (const auto& row : rows) {
            pairs.push_back({row.known, *row.computed});
        }
    }

    try {
        print_report(spearman(pairs, mode, alpha), opts.format, out);
    } catch (const RankError& e) {
        diag.emit(fmt::format("{}: error: {}", corpus_path, e.what()));
        return kData;
    }
    return kOk;
}

int cmd_reproduce(DifferenceMode mode, double alpha, double tolerance, const GlobalOptions& opts, std::ostream& out) {
    const ValidationReport report = spearman(table2_pairs(), mode, alpha);
    const double gap = std::abs(report.r_s - kPublishedSpearman);
    const bool ok = gap <= tolerance;

    switch (opts.format) {
    case OutputFormat::Table:
        out << fmt::format("pairs         {}\n", report.n);
        out << fmt::format("mode          {}\n", to_string(mode));
        out << fmt::format("sum_d2        {:.4f}\n", report.sum_d_squared);
        out << fmt::format("computed r_s  {:.4f}\n", report.r_s);
        out << fmt::format("reported r_s  {:.4f}\n", kPublishedSpearman);
        out << fmt::format("gap           {:.4f}\n", gap);
        out << fmt::format("tolerance     {:.4f}\n", tolerance);
        out << fmt::format("critical      {}\n", critical_text(report.critical_value));
        out << fmt::format("significant   {}\n", report.significant ? "yes" : "no");
        out << fmt::format("result        {}\n", ok ? "reproduced" : "MISMATCH");
        break;
    case OutputFormat::Csv:
        out << "n,mode,sum_d_squared,computed_r_s,reported_r_s,gap,tolerance,significant,reproduced\n";
        out << report.n << ',' << to_string(mode) << ',' << csv_number(report.sum_d_squared) << ','
            << csv_number(report.r_s) << ',' << csv_number(kPublishedSpearman) << ',' << csv_number(gap) << ','
            << csv_number(tolerance) << ',' << (report.significant ? "true" : "false") << ','
            << (ok ? "true" : "false") << '\n';
        break;
    case OutputFormat::Json: {
        ordered_json doc = report_json(report);
        doc["reported_r_s"] = kPublishedSpearman;
        doc["gap"] = gap;
        doc["tolerance"] = tolerance;
        doc["reproduced"] = ok;
        out << doc.dump(2) << '\n';
        break;
    }
    }
    return ok ? kOk : kReproduction;
}

std::vector<std::string> split_names(const std::string& list) {
    std::vector<std::string> names;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        names.push_back(item);
    }
    return names;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Class-diagram design metrics and understandability estimation", "cdmetrics"};
    app.require_subcommand(1);

    GlobalOptions opts;
    const std::map<std::string, OutputFormat> formats{
        {"table", OutputFormat::Table}, {"json", OutputFormat::Json}, {"csv", OutputFormat::Csv}};
    const std::map<std::string, DifferenceMode> modes{{"rank", DifferenceMode::Rank},
                                                      {"value", DifferenceMode::Value}};
    std::string format_name = "table";
    app.add_option("--format", format_name, "Output format: table, json or csv")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();
    app.add_flag("--quiet", opts.quiet, "Suppress diagnostics on standard error");

    std::vector<std::string> paths;
    auto* metrics = app.add_subcommand("metrics", "Compute the eleven design metrics per diagram");
    metrics->add_option("files", paths, "Diagram files (.cd or .json)")->required();
    metrics->fallthrough();

    std::string model_path;
    auto* estimate = app.add_subcommand("estimate", "Estimate understandability per diagram");
    estimate->add_option("files", paths, "Diagram files (.cd or .json)")->required();
    estimate->add_option("--model", model_path, "Model file (defaults to the published model)");
    estimate->fallthrough();

    std::string corpus;
    std::string predictor_list = "NAssoc,NA,MaxDIT";
    auto* fit_cmd = app.add_subcommand("fit", "Fit a linear model to a rated corpus");
    fit_cmd->add_option("corpus", corpus, "Rated corpus file")->required();
    fit_cmd->add_option("--predictors", predictor_list, "Comma-separated metric names")->capture_default_str();
    fit_cmd->fallthrough();

    std::string mode_name = "rank";
    double alpha = 0.05;
    auto* validate_cmd = app.add_subcommand("validate", "Spearman validation of estimates against known ratings");
    validate_cmd->add_option("corpus", corpus, "Validation corpus file")->required();
    validate_cmd->add_option("--mode", mode_name, "Difference mode: rank or value")
        ->check(CLI::IsMember({"rank", "value"}))
        ->capture_default_str();
    validate_cmd->add_option("--alpha", alpha, "Significance level")->check(CLI::Range(1e-12, 0.5))->capture_default_str();
    validate_cmd->add_option("--model", model_path, "Model for rows that name a diagram");
    validate_cmd->fallthrough();

    double tolerance = 0.002;
    auto* reproduce = app.add_subcommand("reproduce", "Recompute r_s on the bundled 28-diagram ratings");
    reproduce->add_option("--mode", mode_name, "Difference mode: rank or value")
        ->check(CLI::IsMember({"rank", "value"}))
        ->capture_default_str();
    reproduce->add_option("--alpha", alpha, "Significance level")->check(CLI::Range(1e-12, 0.5))->capture_default_str();
    reproduce->add_option("--tolerance", tolerance, "Allowed gap to the reported coefficient")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    reproduce->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) {
        reversed.pop_back();
    }
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    opts.format = formats.at(format_name);
    const DifferenceMode mode = modes.at(mode_name);
    const Diagnostics diag{err, opts.quiet};

    if (metrics->parsed()) {
        return cmd_metrics(paths, opts, out, diag);
    }
    if (estimate->parsed()) {
        return cmd_estimate(paths, model_path, opts, out, diag);
    }
    if (fit_cmd->parsed()) {
        std::vector<Metric> predictors;
        for (const auto& name : split_names(predictor_list)) {
            auto metric = metric_from_name(name);
            if (!metric) {
                diag.emit(fmt::format("error: unknown predictor '{}'", name));
                return kUsage;
            }
            predictors.push_back(*metric);
        }
        return cmd_fit(corpus, predictors, out, diag);
    }
    if (validate_cmd->parsed()) {
        return cmd_validate(corpus, mode, alpha, model_path, opts, out, diag);
    }
    return cmd_reproduce(mode, alpha, tolerance, opts, out);
}

} // namespace cdm::cli
