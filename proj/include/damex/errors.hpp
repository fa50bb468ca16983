#ifndef DAMEX_ERRORS_HPP
#define DAMEX_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace damex {

// Precondition violations throw std::invalid_argument directly; the types
// below distinguish failures that come from external inputs (files, formats)
// so callers can map them to coarser error codes.

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// Parse failure with a 1-based location in the offending file.
class parse_error : public io_error {
public:
    parse_error(const std::string& what, std::size_t row, std::size_t col)
        : io_error(what + " at (row " + std::to_string(row) + ", col " + std::to_string(col) + ")"),
          row_(row),
          col_(col) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

// Unusable model file: missing fields, inconsistent content.
class format_error : public io_error {
public:
    explicit format_error(const std::string& what) : io_error(what) {}
};

// Model file written by a format revision this build does not read.
class version_error : public format_error {
public:
    explicit version_error(const std::string& what) : format_error(what) {}
};

// Shape disagreement between a point/dataset and what the consumer expects.
class dimension_error : public std::invalid_argument {
public:
    explicit dimension_error(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace damex

#endif
