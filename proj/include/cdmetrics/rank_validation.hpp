#pragma once

#include "cdmetrics/error.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cdm {

class RankError : public Error {
public:
    using Error::Error;
};

struct RatedPair {
    double known = 0.0;    // expert rating
    double computed = 0.0; // model estimate
};

// Rank: d_i = rank(known)_i - rank(computed)_i over fractional ranks.
// Value: d_i = computed_i - known_i.
enum class DifferenceMode { Rank, Value };

std::string_view to_string(DifferenceMode mode);

struct Significance {
    double critical_value = 0.0;
    bool significant = false;
};

struct ValidationReport {
    std::size_t n = 0;
    DifferenceMode mode = DifferenceMode::Rank;
    std::vector<double> d;
    double sum_d_squared = 0.0;
    double r_s = 0.0;
    double alpha = 0.05;
    // NaN and not significant when n < 4, where no threshold is defined.
    double critical_value = 0.0;
    bool significant = false;
};

// Fractional ranks: 1 for the smallest value, ties share the mean of the
// positions they occupy. Throws RankError on empty or non-finite input.
std::vector<double> ranks_with_ties(std::span<const double> values);

// r_s = 1 - 6 * sum(d^2) / (n (n^2 - 1)). Requires n >= 2.
ValidationReport spearman(std::span<const RatedPair> pairs, DifferenceMode mode = DifferenceMode::Rank,
                          double alpha = 0.05);

// Critical value r = t / sqrt(n - 2 + t^2), t the two-sided Student-t
// quantile at 1 - alpha/2 with n - 2 degrees of freedom.
// Requires n >= 4 and alpha in (0, 0.5].
Significance significance(double r_s, std::size_t n, double alpha);

} // namespace cdm
