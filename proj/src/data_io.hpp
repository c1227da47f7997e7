#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "slfn.hpp"

namespace croann::data {

/// Column layout of a dataset CSV. Rows whose attribute or label field
/// equals missing_marker are dropped (and counted) at parse time.
struct CsvSchema {
    std::vector<int> attribute_columns;
    int label_column = -1;
    std::string missing_marker;  // empty disables missing-value handling
};

struct RawDataset {
    std::vector<double> attributes;  // size() x n_attributes, row-major
    std::vector<int> labels;         // class indices in [0, n_classes)
    std::vector<std::string> class_names;  // index -> label text, first-appearance order
    int n_attributes = 0;
    std::size_t rows_dropped = 0;

    std::size_t size() const { return labels.size(); }
    int n_classes() const { return int(class_names.size()); }
};

struct SplitCounts {
    int train = 0;
    int validation = 0;
    int test = 0;

    long total() const { return long(train) + validation + test; }
};

/// Shrinks the requested counts to fit the available row count, taking the
/// whole shortfall from the training portion first, then validation, then
/// test. Used when missing-value rows reduce a dataset below its nominal
/// split sizes.
SplitCounts resolve_split_counts(SplitCounts requested, std::size_t available);

/// One portion of a split: normalized features, one-hot targets, labels.
struct Portion {
    std::vector<double> features;
    std::vector<double> targets;
    std::vector<int> labels;
    int n_features = 0;
    int n_outputs = 0;

    std::size_t count() const { return labels.size(); }
    slfn::PatternSet view() const {
        return {features, targets, labels, labels.size(), n_features, n_outputs};
    }
};

struct DatasetSplit {
    Portion train;
    Portion validation;
    Portion test;
    /// Per-attribute (min, max) measured on the training portion and applied
    /// to all three portions.
    std::vector<std::pair<double, double>> normalization;
};

/// Parses a CSV file per the schema. Throws IoError if the file cannot be
/// read and DataError (with a line number) on malformed rows or an empty
/// dataset.
RawDataset parse_csv(const std::filesystem::path& path, const CsvSchema& schema);

/// Seeded uniform permutation, then the first counts.train rows become the
/// training portion, the next counts.validation the validation portion, the
/// next counts.test the test portion. Attributes are min-max scaled to
/// [-1, 1] with training-portion statistics (other portions may exceed the
/// range slightly); labels are one-hot encoded.
DatasetSplit split_dataset(const RawDataset& dataset, const SplitCounts& counts,
                           std::uint64_t seed);

}  // namespace croann::data
