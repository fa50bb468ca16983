#ifndef DAMEX_TOOLS_PREPARE_HPP
#define DAMEX_TOOLS_PREPARE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace tool {

struct PrepareOptions {
    std::string recipe;  // shuttle | forestcover | sa | sf | http | smtp
    std::vector<std::string> raw_files;
    std::string out_dir;
    std::uint64_t seed = 0;
};

/// Known recipe names, for usage messages.
const std::vector<std::string>& prepare_recipes();

/// Turns raw benchmark files into <recipe>.csv (full labeled data),
/// <recipe>_train.csv (normal rows of a seeded half), <recipe>_test.csv
/// (the labeled rest) and <recipe>_manifest.json under out_dir, and prints a
/// one-paragraph summary to stdout. Throws data_error with a message starting
/// "recipe precondition failed" when the raw data lacks what the recipe
/// assumes.
void prepare_dataset(const PrepareOptions& options);

}  // namespace tool

#endif
