#ifndef DAMEX_TOOLS_UTIL_HPP
#define DAMEX_TOOLS_UTIL_HPP

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

namespace tool {

/// Exit code 1.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exit code 2.
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double value) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

/// Output file that appears atomically: writes go to a sibling temp file that
/// replaces the target on commit() and disappears on early destruction.
class AtomicFile {
public:
    explicit AtomicFile(const std::filesystem::path& path)
        : path_(path), tmp_(path.string() + ".tmp") {
        out_.open(tmp_, std::ios::binary | std::ios::trunc);
        if (!out_) {
            throw data_error("cannot open " + tmp_.string() + " for writing");
        }
    }

    AtomicFile(const AtomicFile&) = delete;
    AtomicFile& operator=(const AtomicFile&) = delete;

    ~AtomicFile() {
        if (!committed_) {
            out_.close();
            std::error_code ignored;
            std::filesystem::remove(tmp_, ignored);
        }
    }

    std::ofstream& stream() { return out_; }

    void commit() {
        out_.flush();
        if (!out_) {
            throw data_error("write failed: " + tmp_.string());
        }
        out_.close();
        std::error_code ec;
        std::filesystem::rename(tmp_, path_, ec);
        if (ec) {
            throw data_error("cannot replace " + path_.string() + ": " + ec.message());
        }
        committed_ = true;
    }

private:
    std::filesystem::path path_;
    std::filesystem::path tmp_;
    std::ofstream out_;
    bool committed_ = false;
};

}  // namespace tool

#endif
