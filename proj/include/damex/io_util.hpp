#ifndef DAMEX_IO_UTIL_HPP
#define DAMEX_IO_UTIL_HPP

#include <string>

namespace damex {

/// Whole-file read; throws io_error on failure.
std::string read_text(const std::string& path);

/// Writes to a sibling temp file and renames over the target, so readers
/// never observe a half-written file.
void write_text_atomic(const std::string& path, const std::string& content);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

}  // namespace damex

#endif
