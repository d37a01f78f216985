// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include "cdmetrics/cli.hpp"
#include "cdmetrics/diagram.hpp"
#include "cdmetrics/formats.hpp"
#include "cdmetrics/metrics.hpp"
#include "cdmetrics/parser.hpp"
#include "cdmetrics/quality_model.hpp"
#include "cdmetrics/rank_validation.hpp"

#include "../support/generators.hpp"
#include "../support/oracles.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace cdm;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, std::string_view title, const std::function<Outcome()>& body) {
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, fmt::format("unexpected exception: {}", e.what())};
    }
    if (!o.pass) {
        ++failures;
    }
    std::cout << fmt::format("[{}] {}. {}: {}\n", o.pass ? "PASS" : "FAIL", id, title, o.detail);
}

int run_cli(std::vector<std::string> args, std::string& out) {
    args.insert(args.begin(), "cdmetrics");
    std::ostringstream o;
    std::ostringstream e;
    const int code = cli::run(args, o, e);
    out = o.str();
    return code;
}

constexpr double kReproduceTolerance = 0.002;
constexpr double kRankExpected = 0.9492;
constexpr double kRankTolerance = 0.0005;
constexpr double kRankSumD2 = 185.5;
constexpr double kValueExpected = 0.9985;
constexpr double kValueTolerance = 0.0005;
constexpr double kValueSumD2 = 5.4126;
constexpr double kValueSumD2Tolerance = 0.001;
constexpr double kEstimateTolerance = 1e-9;
constexpr double kPlaneTolerance = 1e-9;
constexpr double kPlantedTolerance = 1e-8;
constexpr double kCriticalExpected = 0.374;
constexpr double kCriticalTolerance = 0.005;
constexpr double kAlpha = 0.05;
constexpr int kRandomTrials = 1000;

Outcome table2_reproduction() {
    const auto start = std::chrono::steady_clock::now();
    std::string out;
    const int code = run_cli({"reproduce"}, out);
    const auto report = spearman(table2_pairs(), DifferenceMode::Rank);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double gap = std::abs(report.r_s - kPublishedSpearman);
    const bool pass = code == cli::kOk && gap <= kReproduceTolerance &&
                      std::abs(report.r_s - kRankExpected) <= kRankTolerance &&
                      std::abs(report.sum_d_squared - kRankSumD2) < 1e-9 && seconds < 1.0;
    return {pass, fmt::format("r_s={:.6f} sum_d2={} gap={:.6f} (<= {}) exit={} runtime={:.3f}s", report.r_s,
                              report.sum_d_squared, gap, kReproduceTolerance, code, seconds)};
}

Outcome value_mode() {
    const auto report = spearman(table2_pairs(), DifferenceMode::Value);
    std::string out;
    const int code = run_cli({"reproduce", "--mode", "value"}, out);
    const bool pass = std::abs(report.r_s - kValueExpected) <= kValueTolerance &&
                      std::abs(report.sum_d_squared - kValueSumD2) <= kValueSumD2Tolerance &&
                      code == cli::kReproduction;
    return {pass, fmt::format("r_s={:.6f} sum_d2={:.6f} reproduce --mode value exit={}", report.r_s,
                              report.sum_d_squared, code)};
}

Outcome published_estimates() {
    struct Case {
        std::int64_t nassoc, na, maxdit;
        double expected;
    };
    const Case cases[] = {{0, 0, 0, 1.33515}, {1, 1, 1, 1.85095}, {5, 20, 2, 3.58715}};
    double worst = 0.0;
    for (const auto& c : cases) {
        MetricsVector mv;
        mv[Metric::NAssoc] = c.nassoc;
        mv[Metric::NA] = c.na;
        mv[Metric::MaxDIT] = c.maxdit;
        worst = std::max(worst, std::abs(published_understandability_model().estimate(mv) - c.expected));
    }
    return {worst <= kEstimateTolerance, fmt::format("max abs error {:.3g} (<= {})", worst, kEstimateTolerance)};
}

Outcome regression_recovery() {
    // Noiseless plane from four corner points.
    const std::vector<Metric> published{Metric::NAssoc, Metric::NA, Metric::MaxDIT};
    const double ratings[] = {1.33515, 1.46415, 1.38145, 1.67565};
    const double corners[4][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    std::vector<RatedSample> plane;
    for (int i = 0; i < 4; ++i) {
        RatedSample s;
        for (int j = 0; j < 3; ++j) {
            s.predictors[published[j]] = corners[i][j];
        }
        s.rating = ratings[i];
        plane.push_back(s);
    }
    const auto m = fit(plane, published);
    double plane_err = std::abs(m.intercept() - 1.33515);
    const double weights[] = {0.129, 0.0463, 0.3405};
    for (int j = 0; j < 3; ++j) {
        plane_err = std::max(plane_err, std::abs(m.coefficients()[j].weight - weights[j]));
    }

    // Random planted models, n <= 20, p <= 5.
    std::mt19937 rng(20240601);
    double planted_err = 0.0;
    for (int trial = 0; trial < kRandomTrials; ++trial) {
        std::vector<Metric> pool(kAllMetrics.begin(), kAllMetrics.end());
        std::shuffle(pool.begin(), pool.end(), rng);
        const std::size_t p = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        const std::vector<Metric> predictors(pool.begin(), pool.begin() + static_cast<long>(p));
        std::uniform_real_distribution<double> weight(-3.0, 3.0);
        std::vector<Coefficient> coefficients;
        for (Metric metric : predictors) {
            coefficients.push_back({metric, weight(rng)});
        }
        const LinearModel truth(weight(rng), coefficients);
        const std::size_t n = std::uniform_int_distribution<std::size_t>(p + 1, 20)(rng);
        std::uniform_real_distribution<double> value(0.0, 10.0);
        std::vector<RatedSample> samples(n);
        for (auto& s : samples) {
            for (Metric metric : predictors) {
                s.predictors[metric] = value(rng);
            }
            s.rating = truth.estimate(s.predictors);
        }
        const auto fitted = fit(samples, predictors);
        planted_err = std::max(planted_err, std::abs(fitted.intercept() - truth.intercept()));
        for (std::size_t j = 0; j < p; ++j) {
            planted_err =
                std::max(planted_err, std::abs(fitted.coefficients()[j].weight - truth.coefficients()[j].weight));
        }
    }

    // Rank-deficient designs: a column that is an exact integer combination
    // of others, or a constant column.
    int rejected = 0;
    const int singular_trials = 200;
    for (int trial = 0; trial < singular_trials; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(4, 20)(rng);
        std::uniform_int_distribution<int> small(0, 9);
        std::uniform_int_distribution<int> coef(-3, 3);
        const int a = coef(rng);
        const int b = coef(rng);
        const bool constant = trial % 4 == 0;
        std::vector<RatedSample> samples(n);
        for (auto& s : samples) {
            const double x = small(rng);
            const double y = small(rng);
            s.predictors[Metric::NA] = x;
            s.predictors[Metric::NM] = y;
            s.predictors[Metric::NC] = constant ? 7.0 : a * x + b * y;
            s.rating = small(rng);
        }
        const std::vector<Metric> predictors{Metric::NA, Metric::NM, Metric::NC};
        try {
            (void)fit(samples, predictors);
        } catch (const SingularDesign&) {
            ++rejected;
        }
    }

    const bool pass = plane_err <= kPlaneTolerance && planted_err <= kPlantedTolerance && rejected == singular_trials;
    return {pass, fmt::format("plane max err {:.3g} (<= {}), planted max err over {} designs {:.3g} (<= {}), "
                              "singular rejected {}/{}",
                              plane_err, kPlaneTolerance, kRandomTrials, planted_err, kPlantedTolerance, rejected,
                              singular_trials)};
}

Outcome metric_oracle() {
    std::mt19937 rng(8675309);
    int disagreements = 0;
    for (int trial = 0; trial < kRandomTrials; ++trial) {
        const auto d = testing::random_diagram(rng, 8);
        if (compute_metrics(validate(d)) != testing::brute_metrics(d)) {
            ++disagreements;
        }
    }
    return {disagreements == 0, fmt::format("{} random diagrams, {} disagreements", kRandomTrials, disagreements)};
}

Outcome significance_threshold() {
    const auto report = spearman(table2_pairs(), DifferenceMode::Rank, kAlpha);
    const auto sig = significance(report.r_s, 28, kAlpha);
    const bool pass = std::abs(sig.critical_value - kCriticalExpected) <= kCriticalTolerance && sig.significant &&
                      report.significant && report.n == 28;
    return {pass, fmt::format("critical={:.4f} (expected {} +/- {}), r_s={:.4f} significant={}", sig.critical_value,
                              kCriticalExpected, kCriticalTolerance, report.r_s, sig.significant)};
}

Outcome parser_round_trip() {
    std::mt19937 rng(424242);
    int mismatches = 0;
    for (int trial = 0; trial < kRandomTrials; ++trial) {
        const auto d = canonical_order(testing::random_diagram(rng, 8));
        if (parse(serialize(d)) != d) {
            ++mismatches;
        }
    }

    namespace fs = std::filesystem;
    const fs::path dir = fs::path(CDM_TEST_DATA_DIR) / "errors";
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    const auto manifest = read_delimited(slurp(dir / "manifest.csv"));
    int wrong_spans = 0;
    for (const auto& row : manifest.rows) {
        const SourceSpan expected{std::stoi(row[1]), std::stoi(row[2])};
        try {
            (void)parse(slurp(dir / row[0]));
            ++wrong_spans;
        } catch (const SyntaxError& e) {
            if (!(e.span() == expected)) {
                ++wrong_spans;
            }
        }
    }
    const bool pass = mismatches == 0 && wrong_spans == 0 && !manifest.rows.empty();
    return {pass, fmt::format("{} round trips, {} mismatches; {} error fixtures, {} wrong spans", kRandomTrials,
                              mismatches, manifest.rows.size(), wrong_spans)};
}

} // namespace

int main() {
    criterion(1, "Table 2 reproduction (rank mode)", table2_reproduction);
    criterion(2, "Value-mode discrepancy", value_mode);
    criterion(3, "Published model estimates", published_estimates);
    criterion(4, "Regression recovery", regression_recovery);
    criterion(5, "Metric oracle equivalence", metric_oracle);
    criterion(6, "Significance threshold", significance_threshold);
    criterion(7, "Parser round trip and error spans", parser_round_trip);
    std::cout << (failures == 0 ? "all acceptance criteria passed\n"
                                : fmt::format("{} acceptance criteria failed\n", failures));
    return failures == 0 ? 0 : 1;
}
