#include "cdmetrics/formats.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>

namespace cdm {

namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string> split(std::string_view line, char delimiter) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t at = line.find(delimiter, start);
        cells.emplace_back(trim(line.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start)));
        if (at == std::string_view::npos) {
            break;
        }
        start = at + 1;
    }
    return cells;
}

double require_number(const std::string& cell, int line, std::string_view column) {
    auto value = parse_number(cell);
    if (!value) {
        throw FormatError(fmt::format("line {}: column '{}': '{}' is not a number", line, column, cell));
    }
    return *value;
}

} // namespace

std::optional<double> parse_number(std::string_view cell) {
    cell = trim(cell);
    if (!cell.empty() && cell.front() == '+') {
        cell.remove_prefix(1);
    }
    if (cell.empty()) {
        return std::nullopt;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

LinearModel parse_model(std::string_view json_text) {
    using nlohmann::ordered_json;
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text.begin(), json_text.end());
    } catch (const ordered_json::parse_error& e) {
        throw FormatError(fmt::format("model file: {}", e.what()));
    }
    if (!doc.is_object() || !doc.contains("intercept") || !doc.at("intercept").is_number()) {
        throw FormatError("model file: expected a numeric 'intercept'");
    }
    if (!doc.contains("coefficients") || !doc.at("coefficients").is_object()) {
        throw FormatError("model file: expected a 'coefficients' object");
    }
    std::vector<Coefficient> coefficients;
    for (const auto& [name, weight] : doc.at("coefficients").items()) {
        auto metric = metric_from_name(name);
        if (!metric) {
            throw FormatError(fmt::format("model file: unknown metric '{}'", name));
        }
        if (!weight.is_number()) {
            throw FormatError(fmt::format("model file: weight for '{}' is not a number", name));
        }
        coefficients.push_back({*metric, weight.get<double>()});
    }
    try {
        return LinearModel(doc.at("intercept").get<double>(), std::move(coefficients));
    } catch (const ModelError& e) {
        throw FormatError(fmt::format("model file: {}", e.what()));
    }
}

std::string model_to_json(const LinearModel& model) {
    nlohmann::ordered_json doc;
    doc["intercept"] = model.intercept();
    doc["coefficients"] = nlohmann::ordered_json::object();
    for (const auto& c : model.coefficients()) {
        doc["coefficients"][std::string(metric_name(c.metric))] = c.weight;
    }
    return doc.dump(2) + "\n";
}

DelimitedTable read_delimited(std::string_view text) {
    DelimitedTable table;
    char delimiter = ',';
    bool have_header = false;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        const std::string_view raw = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (!have_header) {
            for (char candidate : {',', ';', '\t'}) {
                if (line.find(candidate) != std::string_view::npos) {
                    delimiter = candidate;
                    break;
                }
            }
            table.header = split(line, delimiter);
            have_header = true;
            continue;
        }
        auto cells = split(line, delimiter);
        if (cells.size() != table.header.size()) {
            throw FormatError(
                fmt::format("line {}: expected {} cells, found {}", line_no, table.header.size(), cells.size()));
        }
        table.rows.push_back(std::move(cells));
        table.row_lines.push_back(line_no);
    }
    if (!have_header) {
        throw FormatError("corpus has no header row");
    }
    return table;
}

std::vector<RatedSample> parse_fit_corpus(std::string_view text) {
    const DelimitedTable table = read_delimited(text);
    const auto& header = table.header;
    if (header.empty() || header.back() != "rating") {
        throw FormatError("fit corpus: the last column must be 'rating'");
    }
    std::vector<std::optional<Metric>> columns;
    for (std::size_t c = 0; c + 1 < header.size(); ++c) {
        if (c == 0 && header[c] == "id") {
            columns.push_back(std::nullopt);
            continue;
        }
        auto metric = metric_from_name(header[c]);
        if (!metric) {
            throw FormatError(fmt::format("fit corpus: unknown predictor column '{}'", header[c]));
        }
        if (std::find(columns.begin(), columns.end(), metric) != columns.end()) {
            throw FormatError(fmt::format("fit corpus: duplicate column '{}'", header[c]));
        }
        columns.push_back(metric);
    }

    std::vector<RatedSample> samples;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        RatedSample sample;
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (columns[c]) {
                sample.predictors[*columns[c]] = require_number(row[c], table.row_lines[r], header[c]);
            }
        }
        sample.rating = require_number(row.back(), table.row_lines[r], "rating");
        samples.push_back(std::move(sample));
    }
    return samples;
}

std::vector<ValidationRow> parse_validation_corpus(std::string_view text) {
    const DelimitedTable table = read_delimited(text);
    const auto& header = table.header;
    const bool computed = header == std::vector<std::string>{"id", "known", "computed"};
    const bool diagram = header == std::vector<std::string>{"id", "known", "diagram"};
    if (!computed && !diagram) {
        throw FormatError("validation corpus: header must be 'id,known,computed' or 'id,known,diagram'");
    }
    std::vector<ValidationRow> rows;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& cells = table.rows[r];
        ValidationRow row;
        row.id = cells[0];
        row.known = require_number(cells[1], table.row_lines[r], "known");
        if (computed) {
            row.computed = require_number(cells[2], table.row_lines[r], "computed");
        } else {
            if (cells[2].empty()) {
                throw FormatError(fmt::format("line {}: empty diagram path", table.row_lines[r]));
            }
            row.diagram = cells[2];
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<RatedPair> table2_pairs() {
    std::vector<RatedPair> pairs;
    for (const auto& row : parse_validation_corpus(table2_fixture())) {
        pairs.push_back({row.known, *row.computed});
    }
    return pairs;
}

} // namespace cdm
