#ifndef DAMEX_CSV_HPP
#define DAMEX_CSV_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "damex/dataset.hpp"

namespace damex {

struct CsvReadOptions {
    /// 1-based position of the label column in the file; 0 means unlabeled.
    std::size_t label_column = 0;
};

/// Raw parse result. Unlike Dataset this may be empty (header-only file);
/// callers that need rows convert with to_dataset().
struct CsvTable {
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> rows;
    std::optional<std::vector<int>> labels;

    bool empty() const noexcept { return rows.empty(); }
    Dataset to_dataset() const;
};

/// Comma-delimited, one header row, decimal point, no quoting. Parse
/// failures carry the 1-based (row, col) file location; the header is row 1.
CsvTable read_csv_table(const std::string& path, const CsvReadOptions& options = {});

/// read_csv_table + to_dataset.
Dataset read_csv(const std::string& path, const CsvReadOptions& options = {});

/// Writes features (plus a trailing "label" column when labels are present)
/// in shortest-round-trip decimal form; atomic replace.
void write_csv(const Dataset& data, const std::string& path);

}  // namespace damex

#endif
