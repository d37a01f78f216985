#pragma once

#include "cdmetrics/error.hpp"
#include "cdmetrics/quality_model.hpp"
#include "cdmetrics/rank_validation.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cdm {

// Malformed model or corpus file.
class FormatError : public Error {
public:
    using Error::Error;
};

// {"intercept": number, "coefficients": {metric-name: number, ...}}
LinearModel parse_model(std::string_view json_text);
std::string model_to_json(const LinearModel& model);

// Delimiter-separated values. The delimiter (',', ';' or tab) is taken from
// the header line. Blank lines and lines starting with '#' are skipped and
// cells are trimmed.
struct DelimitedTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> row_lines; // 1-based source line of each row
};

DelimitedTable read_delimited(std::string_view text);

// Locale-independent, '.' decimal separator, whole cell must be consumed.
std::optional<double> parse_number(std::string_view cell);

// Header: predictor metric names (optionally preceded by `id`) with a final
// `rating` column.
std::vector<RatedSample> parse_fit_corpus(std::string_view text);

// Header `id,known,computed` or `id,known,diagram`.
struct ValidationRow {
    std::string id;
    double known = 0.0;
    std::optional<double> computed;
    std::optional<std::string> diagram;
};

std::vector<ValidationRow> parse_validation_corpus(std::string_view text);

// The 28 published (known, model) rating pairs D0..D27, compiled in from
// data/table2.csv.
std::string_view table2_fixture();
std::vector<RatedPair> table2_pairs();

inline constexpr double kPublishedSpearman = 0.9482;

} // namespace cdm
