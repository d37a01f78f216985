#pragma once

#include "cdmetrics/error.hpp"
#include "cdmetrics/metrics.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cdm {

class ModelError : public Error {
public:
    using Error::Error;
};

class InsufficientSamples : public ModelError {
public:
    InsufficientSamples(std::size_t needed, std::size_t got);
    std::size_t needed() const noexcept { return needed_; }
    std::size_t got() const noexcept { return got_; }

private:
    std::size_t needed_;
    std::size_t got_;
};

class SingularDesign : public ModelError {
public:
    using ModelError::ModelError;
};

// Real-valued predictor assignment; computed metrics are integral but rated
// corpora may carry averaged values.
using PredictorValues = std::map<Metric, double>;

PredictorValues to_predictors(const MetricsVector& metrics);

struct Coefficient {
    Metric metric;
    double weight;

    bool operator==(const Coefficient&) const = default;
};

// y = intercept + sum(weight_i * x_i). Metrics are distinct and weights finite.
class LinearModel {
public:
    LinearModel(double intercept, std::vector<Coefficient> coefficients);

    double intercept() const noexcept { return intercept_; }
    const std::vector<Coefficient>& coefficients() const noexcept { return coefficients_; }

    double estimate(const MetricsVector& metrics) const;
    // Throws ModelError when a coefficient's metric is absent from `values`.
    double estimate(const PredictorValues& values) const;

    bool operator==(const LinearModel&) const = default;

private:
    double intercept_;
    std::vector<Coefficient> coefficients_;
};

// Understandability = 1.33515 + 0.129 NAssoc + 0.0463 NA + 0.3405 MaxDIT
const LinearModel& published_understandability_model();

struct RatedSample {
    PredictorValues predictors;
    double rating = 0.0;
};

// Ordinary least squares over `predictors` plus an intercept, solved through
// the normal equations with partial pivoting and one refinement step.
// Throws InsufficientSamples when |samples| < |predictors| + 1 and
// SingularDesign when the design matrix is rank deficient.
LinearModel fit(std::span<const RatedSample> samples, std::span<const Metric> predictors);

inline constexpr double kPivotTolerance = 1e-12;

} // namespace cdm
