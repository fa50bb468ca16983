#include "damex/csv.hpp"

#include <charconv>
#include <cmath>
#include <string_view>
#include <utility>

#include "damex/errors.hpp"
#include "damex/io_util.hpp"

namespace damex {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_value(std::string_view field, std::size_t row, std::size_t col) {
    double value = 0.0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || end != field.data() + field.size()) {
        throw parse_error("invalid number", row, col);
    }
    if (!std::isfinite(value)) {
        throw parse_error("invalid value", row, col);
    }
    return value;
}

int parse_label(std::string_view field, std::size_t row, std::size_t col) {
    const double value = parse_value(field, row, col);
    if (value != 0.0 && value != 1.0) {
        throw parse_error("labels must be 0 or 1", row, col);
    }
    return value == 1.0 ? 1 : 0;
}

}  // namespace

Dataset CsvTable::to_dataset() const {
    auto labels_copy = labels;
    return Dataset::from_rows(rows, std::move(labels_copy), feature_names);
}

CsvTable read_csv_table(const std::string& path, const CsvReadOptions& options) {
    const std::string text = read_text(path);

    CsvTable table;
    if (options.label_column != 0) {
        table.labels.emplace();
    }

    std::size_t file_row = 0;
    std::size_t field_count = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) {
            eol = text.size();
        }
        std::string_view line(text.data() + pos, eol - pos);
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;  // blank lines (including a trailing newline) are skipped
        }
        ++file_row;

        const auto fields = split_fields(line);
        if (file_row == 1) {
            field_count = fields.size();
            if (options.label_column > field_count) {
                throw parse_error("label column out of range", 1, options.label_column);
            }
            for (std::size_t c = 0; c < field_count; ++c) {
                if (c + 1 != options.label_column) {
                    table.feature_names.emplace_back(fields[c]);
                }
            }
            if (table.feature_names.empty()) {
                throw parse_error("no feature columns", 1, 1);
            }
            continue;
        }

        if (fields.size() != field_count) {
            const std::size_t col = std::min(fields.size(), field_count) + 1;
            throw parse_error("inconsistent dimension", file_row, col);
        }
        std::vector<double> row;
        row.reserve(table.feature_names.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (c + 1 == options.label_column) {
                table.labels->push_back(parse_label(fields[c], file_row, c + 1));
            } else {
                row.push_back(parse_value(fields[c], file_row, c + 1));
            }
        }
        table.rows.push_back(std::move(row));
    }

    if (file_row == 0) {
        throw parse_error("missing header row", 1, 1);
    }
    return table;
}

Dataset read_csv(const std::string& path, const CsvReadOptions& options) {
    return read_csv_table(path, options).to_dataset();
}

void write_csv(const Dataset& data, const std::string& path) {
    std::string out;
    const auto& names = data.feature_names();
    for (std::size_t j = 0; j < data.cols(); ++j) {
        if (j > 0) {
            out += ',';
        }
        out += names.empty() ? "f" + std::to_string(j + 1) : names[j];
    }
    if (data.has_labels()) {
        out += ",label";
    }
    out += '\n';

    for (std::size_t i = 0; i < data.rows(); ++i) {
        for (std::size_t j = 0; j < data.cols(); ++j) {
            if (j > 0) {
                out += ',';
            }
            out += format_double(data.at(i, j));
        }
        if (data.has_labels()) {
            out += ',';
            out += data.labels()[i] == 1 ? '1' : '0';
        }
        out += '\n';
    }
    write_text_atomic(path, out);
}

}  // namespace damex
