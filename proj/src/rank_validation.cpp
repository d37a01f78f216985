#include "cdmetrics/rank_validation.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cdm {

std::string_view to_string(DifferenceMode mode) {
    return mode == DifferenceMode::Rank ? "rank" : "value";
}

std::vector<double> ranks_with_ties(std::span<const double> values) {
    if (values.empty()) {
        throw RankError("cannot rank an empty list");
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw RankError("cannot rank non-finite values");
        }
    }
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        // Positions i..j (0-based) hold ranks i+1..j+1.
        const double shared = static_cast<double>(i + j + 2) / 2.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = shared;
        }
        i = j + 1;
    }
    return ranks;
}

Significance significance(double r_s, std::size_t n, double alpha) {
    if (!(alpha > 0.0 && alpha <= 0.5)) {
        throw RankError(fmt::format("alpha must lie in (0, 0.5], got {}", alpha));
    }
    if (n < 4) {
        throw RankError(fmt::format("too few pairs for a significance threshold: {}", n));
    }
    const double dof = static_cast<double>(n - 2);
    const boost::math::students_t dist(dof);
    const double t = boost::math::quantile(dist, 1.0 - alpha / 2.0);
    const double critical = t / std::sqrt(dof + t * t);
    return {critical, r_s > critical};
}

ValidationReport spearman(std::span<const RatedPair> pairs, DifferenceMode mode, double alpha) {
    const std::size_t n = pairs.size();
    if (n < 2) {
        throw RankError(fmt::format("too few pairs: {}", n));
    }
    if (!(alpha > 0.0 && alpha <= 0.5)) {
        throw RankError(fmt::format("alpha must lie in (0, 0.5], got {}", alpha));
    }

    std::vector<double> known(n);
    std::vector<double> computed(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(pairs[i].known) || !std::isfinite(pairs[i].computed)) {
            throw RankError(fmt::format("pair {} is not finite", i + 1));
        }
        known[i] = pairs[i].known;
        computed[i] = pairs[i].computed;
    }

    ValidationReport report;
    report.n = n;
    report.mode = mode;
    report.alpha = alpha;
    report.d.resize(n);
    if (mode == DifferenceMode::Rank) {
        const auto rk = ranks_with_ties(known);
        const auto rc = ranks_with_ties(computed);
        for (std::size_t i = 0; i < n; ++i) {
            report.d[i] = rk[i] - rc[i];
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            report.d[i] = computed[i] - known[i];
        }
    }
    for (double d : report.d) {
        report.sum_d_squared += d * d;
    }
    const double nn = static_cast<double>(n);
    report.r_s = 1.0 - 6.0 * report.sum_d_squared / (nn * (nn * nn - 1.0));

    if (n >= 4) {
        const Significance sig = significance(report.r_s, n, alpha);
        report.critical_value = sig.critical_value;
        report.significant = sig.significant;
    } else {
        report.critical_value = std::numeric_limits<double>::quiet_NaN();
        report.significant = false;
    }
    return report;
}

} // namespace cdm
