#include "data_io.hpp"

#include <algorithm>
#include <limits>
#include <charconv>
#include <fstream>
#include <numeric>

#include "errors.hpp"
#include "rng.hpp"

namespace croann::data {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

double parse_number(std::string_view field, std::size_t line_no) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw DataError("line " + std::to_string(line_no) + ": not a number: '" +
                        std::string(field) + "'");
    return value;
}

}  // namespace

SplitCounts resolve_split_counts(SplitCounts requested, std::size_t available) {
    long shortfall = requested.total() - long(available);
    auto shrink = [&shortfall](int& portion) {
        const long cut = std::min<long>(shortfall, portion);
        portion -= int(cut);
        shortfall -= cut;
    };
    if (shortfall > 0) {
        shrink(requested.train);
        shrink(requested.validation);
        shrink(requested.test);
    }
    return requested;
}

RawDataset parse_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    if (schema.label_column < 0) throw ConfigError("schema: label_column not set");
    if (schema.attribute_columns.empty()) throw ConfigError("schema: no attribute columns");

    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset file: " + path.string());

    RawDataset out;
    out.n_attributes = int(schema.attribute_columns.size());
    int max_col = schema.label_column;
    for (int c : schema.attribute_columns) max_col = std::max(max_col, c);

    std::string line;
    std::size_t line_no = 0;
    std::vector<double> row(schema.attribute_columns.size());
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (text.empty()) continue;
        const std::vector<std::string_view> fields = split_fields(text);
        if (int(fields.size()) <= max_col)
            throw DataError("line " + std::to_string(line_no) + ": expected at least " +
                            std::to_string(max_col + 1) + " columns, got " +
                            std::to_string(fields.size()));

        bool missing = false;
        if (!schema.missing_marker.empty()) {
            for (int c : schema.attribute_columns)
                if (fields[c] == schema.missing_marker) missing = true;
            if (fields[schema.label_column] == schema.missing_marker) missing = true;
        }
        if (missing) {
            out.rows_dropped += 1;
            continue;
        }

        for (std::size_t a = 0; a < schema.attribute_columns.size(); ++a)
            row[a] = parse_number(fields[schema.attribute_columns[a]], line_no);

        const std::string label(fields[schema.label_column]);
        const auto it = std::find(out.class_names.begin(), out.class_names.end(), label);
        int label_index;
        if (it == out.class_names.end()) {
            label_index = int(out.class_names.size());
            out.class_names.push_back(label);
        } else {
            label_index = int(it - out.class_names.begin());
        }

        out.attributes.insert(out.attributes.end(), row.begin(), row.end());
        out.labels.push_back(label_index);
    }

    if (out.labels.empty())
        throw DataError("dataset is empty: " + path.string());
    if (out.n_classes() < 2)
        throw DataError("dataset has a single class: " + path.string());
    return out;
}

DatasetSplit split_dataset(const RawDataset& dataset, const SplitCounts& counts,
                           std::uint64_t seed) {
    if (counts.train < 1 || counts.validation < 1 || counts.test < 1)
        throw DataError("split counts must all be >= 1");
    if (counts.total() > long(dataset.size()))
        throw DataError("split counts (" + std::to_string(counts.total()) +
                        ") exceed dataset size (" + std::to_string(dataset.size()) + ")");

    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.index(i)]);

    const int n_attr = dataset.n_attributes;
    const int n_out = dataset.n_classes();

    // Normalization statistics from the training rows only.
    std::vector<std::pair<double, double>> stats(
        n_attr, {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()});
    for (int i = 0; i < counts.train; ++i) {
        const double* row = dataset.attributes.data() + order[i] * n_attr;
        for (int a = 0; a < n_attr; ++a) {
            stats[a].first = std::min(stats[a].first, row[a]);
            stats[a].second = std::max(stats[a].second, row[a]);
        }
    }

    auto fill = [&](Portion& portion, std::size_t begin, int count) {
        portion.n_features = n_attr;
        portion.n_outputs = n_out;
        portion.features.reserve(std::size_t(count) * n_attr);
        portion.targets.assign(std::size_t(count) * n_out, 0.0);
        portion.labels.reserve(count);
        for (int i = 0; i < count; ++i) {
            const double* row = dataset.attributes.data() + order[begin + i] * n_attr;
            for (int a = 0; a < n_attr; ++a) {
                const auto [lo, hi] = stats[a];
                const double denom = hi > lo ? hi - lo : 1.0;
                portion.features.push_back(2.0 * (row[a] - lo) / denom - 1.0);
            }
            const int label = dataset.labels[order[begin + i]];
            portion.targets[std::size_t(i) * n_out + label] = 1.0;
            portion.labels.push_back(label);
        }
    };

    DatasetSplit split;
    split.normalization = stats;
    fill(split.train, 0, counts.train);
    fill(split.validation, std::size_t(counts.train), counts.validation);
    fill(split.test, std::size_t(counts.train) + counts.validation, counts.test);
    return split;
}

}  // namespace croann::data
