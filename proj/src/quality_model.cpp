#include "cdmetrics/quality_model.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace cdm {

InsufficientSamples::InsufficientSamples(std::size_t needed, std::size_t got)
    : ModelError(fmt::format("insufficient samples: need at least {}, got {}", needed, got)),
      needed_(needed),
      got_(got) {}

PredictorValues to_predictors(const MetricsVector& metrics) {
    PredictorValues values;
    for (Metric m : kAllMetrics) {
        values[m] = static_cast<double>(metrics[m]);
    }
    return values;
}

LinearModel::LinearModel(double intercept, std::vector<Coefficient> coefficients)
    : intercept_(intercept), coefficients_(std::move(coefficients)) {
    if (!std::isfinite(intercept_)) {
        throw ModelError("model intercept must be finite");
    }
    std::set<Metric> seen;
    for (const auto& c : coefficients_) {
        if (!seen.insert(c.metric).second) {
            throw ModelError(fmt::format("duplicate coefficient for {}", metric_name(c.metric)));
        }
        if (!std::isfinite(c.weight)) {
            throw ModelError(fmt::format("coefficient for {} must be finite", metric_name(c.metric)));
        }
    }
}

double LinearModel::estimate(const MetricsVector& metrics) const {
    double y = intercept_;
    for (const auto& c : coefficients_) {
        y += c.weight * static_cast<double>(metrics[c.metric]);
    }
    return y;
}

double LinearModel::estimate(const PredictorValues& values) const {
    double y = intercept_;
    for (const auto& c : coefficients_) {
        auto it = values.find(c.metric);
        if (it == values.end()) {
            throw ModelError(fmt::format("no value for predictor {}", metric_name(c.metric)));
        }
        y += c.weight * it->second;
    }
    return y;
}

const LinearModel& published_understandability_model() {
    static const LinearModel model(1.33515, {
                                                {Metric::NAssoc, 0.129},
                                                {Metric::NA, 0.0463},
                                                {Metric::MaxDIT, 0.3405},
                                            });
    return model;
}

namespace {

using Matrix = std::vector<std::vector<double>>;

// Gaussian elimination with partial pivoting on a copy of `a`.
// A pivot below tolerance * (largest entry of a) means rank deficiency.
std::vector<double> solve(Matrix a, std::vector<double> b) {
    const std::size_t n = b.size();
    double scale = 0.0;
    for (const auto& row : a) {
        for (double v : row) {
            scale = std::max(scale, std::abs(v));
        }
    }
    const double threshold = kPivotTolerance * std::max(scale, 1.0);

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) {
                pivot = r;
            }
        }
        if (std::abs(a[pivot][col]) <= threshold) {
            throw SingularDesign("singular design: predictor columns and intercept are linearly dependent");
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a[r][col] / a[col][col];
            if (factor == 0.0) {
                continue;
            }
            for (std::size_t k = col; k < n; ++k) {
                a[r][k] -= factor * a[col][k];
            }
            b[r] -= factor * b[col];
        }
    }

    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t k = i + 1; k < n; ++k) {
            acc -= a[i][k] * x[k];
        }
        x[i] = acc / a[i][i];
    }
    return x;
}

} // namespace

LinearModel fit(std::span<const RatedSample> samples, std::span<const Metric> predictors) {
    {
        std::set<Metric> distinct(predictors.begin(), predictors.end());
        if (distinct.size() != predictors.size()) {
            throw ModelError("predictor list contains duplicates");
        }
    }
    const std::size_t p = predictors.size() + 1;
    if (samples.size() < p) {
        throw InsufficientSamples(p, samples.size());
    }

    // Design matrix with a leading intercept column.
    Matrix design(samples.size(), std::vector<double>(p, 1.0));
    std::vector<double> y(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const RatedSample& s = samples[i];
        if (!std::isfinite(s.rating)) {
            throw ModelError(fmt::format("sample {}: rating must be finite", i + 1));
        }
        y[i] = s.rating;
        for (std::size_t j = 0; j < predictors.size(); ++j) {
            auto it = s.predictors.find(predictors[j]);
            if (it == s.predictors.end()) {
                throw ModelError(fmt::format("sample {}: missing predictor {}", i + 1, metric_name(predictors[j])));
            }
            if (!std::isfinite(it->second)) {
                throw ModelError(fmt::format("sample {}: predictor {} must be finite", i + 1,
                                             metric_name(predictors[j])));
            }
            design[i][j + 1] = it->second;
        }
    }

    Matrix gram(p, std::vector<double>(p, 0.0));
    std::vector<double> moment(p, 0.0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t r = 0; r < p; ++r) {
            moment[r] += design[i][r] * y[i];
            for (std::size_t c = 0; c < p; ++c) {
                gram[r][c] += design[i][r] * design[i][c];
            }
        }
    }

    std::vector<double> beta = solve(gram, moment);

    // One step of iterative refinement on the normal equations.
    std::vector<double> residual(p);
    for (std::size_t r = 0; r < p; ++r) {
        double acc = moment[r];
        for (std::size_t c = 0; c < p; ++c) {
            acc -= gram[r][c] * beta[c];
        }
        residual[r] = acc;
    }
    std::vector<double> correction = solve(gram, residual);
    for (std::size_t r = 0; r < p; ++r) {
        beta[r] += correction[r];
    }

    std::vector<Coefficient> coefficients;
    for (std::size_t j = 0; j < predictors.size(); ++j) {
        coefficients.push_back({predictors[j], beta[j + 1]});
    }
    return LinearModel(beta[0], std::move(coefficients));
}

} // namespace cdm
