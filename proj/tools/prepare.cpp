#include "prepare.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "util.hpp"

namespace tool {
namespace {

using Fields = std::vector<std::string_view>;

struct RowCtx {
    const std::string& path;
    std::size_t line;
};

void split_comma(std::string_view line, Fields& out) {
    out.clear();
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

void split_whitespace(std::string_view line, Fields& out) {
    out.clear();
    std::size_t at = 0;
    while (at < line.size()) {
        while (at < line.size() && (line[at] == ' ' || line[at] == '\t')) {
            ++at;
        }
        if (at >= line.size()) {
            return;
        }
        std::size_t end = at;
        while (end < line.size() && line[end] != ' ' && line[end] != '\t') {
            ++end;
        }
        out.push_back(line.substr(at, end - at));
        at = end;
    }
}

/// Calls fn(path, line_number, fields) for every non-blank raw line. The raw
/// benchmarks carry no header row.
template <typename Fn>
void scan_raw(const std::vector<std::string>& paths, bool whitespace,
              std::size_t expected_fields, Fn&& fn) {
    Fields fields;
    std::string line;
    for (const auto& path : paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw data_error("cannot open " + path);
        }
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            if (line.find_first_not_of(" \t") == std::string::npos) {
                continue;
            }
            if (whitespace) {
                split_whitespace(line, fields);
            } else {
                split_comma(line, fields);
            }
            if (fields.size() != expected_fields) {
                throw data_error("recipe precondition failed: row " + std::to_string(line_no) +
                                 " in " + path + " has " + std::to_string(fields.size()) +
                                 " fields, expected " + std::to_string(expected_fields));
            }
            fn(path, line_no, fields);
        }
        if (in.bad()) {
            throw data_error("read failed: " + path);
        }
    }
}

double num_field(const Fields& fields, std::size_t index, const RowCtx& ctx) {
    const std::string_view field = fields[index];
    double value = 0.0;
    const auto result = std::from_chars(field.data(), field.data() + field.size(), value);
    if (result.ec != std::errc{} || result.ptr != field.data() + field.size() ||
        !std::isfinite(value)) {
        throw data_error("recipe precondition failed: non-numeric field '" + std::string(field) +
                         "' at (row " + std::to_string(ctx.line) + ", col " +
                         std::to_string(index + 1) + ") in " + ctx.path);
    }
    return value;
}

/// KDD connection label without the trailing dot ("normal." -> "normal").
std::string_view kdd_class(const Fields& fields) {
    std::string_view label = fields.back();
    if (!label.empty() && label.back() == '.') {
        label.remove_suffix(1);
    }
    return label;
}

std::uint64_t below(std::mt19937_64& gen, std::uint64_t n) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t draw = gen();
    while (draw >= limit) {
        draw = gen();
    }
    return draw % n;
}

/// First-appearance integer codes for one categorical raw column, observed
/// over every raw row so the coding does not depend on filtering or seed.
struct Encoder {
    std::map<std::string, std::size_t, std::less<>> codes;
    std::vector<std::string> order;

    void observe(std::string_view value) {
        if (codes.find(value) == codes.end()) {
            codes.emplace(std::string(value), order.size());
            order.emplace_back(value);
        }
    }

    double code(std::string_view value) const {
        return static_cast<double>(codes.find(value)->second);
    }
};

/// classify: -1 drop the row, 0 normal, 1 anomaly,
/// 2 anomaly candidate (kept only if the 1%-target sample picks it).
struct Recipe {
    bool whitespace = false;
    std::size_t raw_fields = 0;
    std::vector<std::size_t> keep;
    std::vector<std::string> columns;
    std::vector<bool> categorical;
    bool subsample_anomalies = false;
    std::function<int(const Fields&, const RowCtx&)> classify;
    std::string normal_missing;
    std::string anomaly_missing;
};

const std::vector<std::string>& kdd_names() {
    static const std::vector<std::string> names = {
        "duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes", "land",
        "wrong_fragment", "urgent", "hot", "num_failed_logins", "logged_in", "num_compromised",
        "root_shell", "su_attempted", "num_root", "num_file_creations", "num_shells",
        "num_access_files", "num_outbound_cmds", "is_host_login", "is_guest_login", "count",
        "srv_count", "serror_rate", "srv_serror_rate", "rerror_rate", "srv_rerror_rate",
        "same_srv_rate", "diff_srv_rate", "srv_diff_host_rate", "dst_host_count",
        "dst_host_srv_count", "dst_host_same_srv_rate", "dst_host_diff_srv_rate",
        "dst_host_same_src_port_rate", "dst_host_srv_diff_host_rate", "dst_host_serror_rate",
        "dst_host_srv_serror_rate", "dst_host_rerror_rate", "dst_host_srv_rerror_rate"};
    return names;
}

std::vector<std::string> numbered_columns(std::size_t count) {
    std::vector<std::string> names;
    names.reserve(count);
    for (std::size_t i = 1; i <= count; ++i) {
        names.push_back("f" + std::to_string(i));
    }
    return names;
}

std::vector<std::size_t> iota_indices(std::size_t count) {
    std::vector<std::size_t> indices(count);
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    return indices;
}

Recipe kdd_subset_recipe(const std::string& service) {
    Recipe r;
    r.raw_fields = 42;
    r.keep = {0, 4, 5};
    r.columns = {"duration", "src_bytes", "dst_bytes"};
    r.categorical = {false, false, false};
    r.classify = [service](const Fields& f, const RowCtx& ctx) {
        if (num_field(f, 11, ctx) != 1.0 || f[2] != service) {
            return -1;
        }
        return kdd_class(f) == "normal" ? 0 : 1;
    };
    r.normal_missing = "no normal rows with service=" + service;
    r.anomaly_missing = "no attack rows with service=" + service;
    return r;
}

Recipe make_recipe(const std::string& name) {
    Recipe r;
    if (name == "shuttle") {
        // Everything but class 4; class 1 is normal, the rest anomalous.
        r.whitespace = true;
        r.raw_fields = 10;
        r.keep = iota_indices(9);
        r.columns = numbered_columns(9);
        r.categorical.assign(9, false);
        r.classify = [](const Fields& f, const RowCtx& ctx) {
            const double cls = num_field(f, 9, ctx);
            if (cls == 4.0) {
                return -1;
            }
            return cls == 1.0 ? 0 : 1;
        };
        r.normal_missing = "no class-1 rows in raw data";
        r.anomaly_missing = "no anomaly rows (classes other than 1 and 4) in raw data";
        return r;
    }
    if (name == "forestcover") {
        // Class 2 against class 4, other cover types dropped.
        r.raw_fields = 55;
        r.keep = iota_indices(54);
        r.columns = numbered_columns(54);
        r.categorical.assign(54, false);
        r.classify = [](const Fields& f, const RowCtx& ctx) {
            const double cls = num_field(f, 54, ctx);
            if (cls == 2.0) {
                return 0;
            }
            return cls == 4.0 ? 1 : -1;
        };
        r.normal_missing = "no class-2 rows in raw data";
        r.anomaly_missing = "no class-4 rows in raw data";
        return r;
    }
    if (name == "sa") {
        // All normal connections plus a seeded anomaly sample targeting a 1%
        // anomaly share.
        r.raw_fields = 42;
        r.keep = iota_indices(41);
        r.columns = kdd_names();
        r.categorical.assign(41, false);
        r.categorical[1] = r.categorical[2] = r.categorical[3] = true;
        r.subsample_anomalies = true;
        r.classify = [](const Fields& f, const RowCtx&) {
            return kdd_class(f) == "normal" ? 0 : 2;
        };
        r.normal_missing = "no normal-labeled rows in raw data";
        r.anomaly_missing = "no attack-labeled rows in raw data";
        return r;
    }
    if (name == "sf") {
        // Connections with positive logged_in; attacks are the anomalies.
        r.raw_fields = 42;
        r.keep = {0, 2, 4, 5};
        r.columns = {"duration", "service", "src_bytes", "dst_bytes"};
        r.categorical = {false, true, false, false};
        r.classify = [](const Fields& f, const RowCtx& ctx) {
            if (num_field(f, 11, ctx) != 1.0) {
                return -1;
            }
            return kdd_class(f) == "normal" ? 0 : 1;
        };
        r.normal_missing = "no normal rows with positive logged_in";
        r.anomaly_missing = "no attack rows with positive logged_in";
        return r;
    }
    if (name == "http" || name == "smtp") {
        return kdd_subset_recipe(name);
    }
    throw usage_error("unknown recipe '" + name + "'");
}

}  // namespace

const std::vector<std::string>& prepare_recipes() {
    static const std::vector<std::string> names = {"shuttle", "forestcover", "sa",
                                                   "sf",      "http",        "smtp"};
    return names;
}

void prepare_dataset(const PrepareOptions& options) {
    if (options.raw_files.empty()) {
        throw usage_error("at least one --raw file is required");
    }
    const Recipe recipe = make_recipe(options.recipe);
    const std::filesystem::path out_dir(options.out_dir.empty() ? "." : options.out_dir);
    std::filesystem::create_directories(out_dir);

    // Pass 1: category codes, class counts, anomaly-candidate census.
    std::map<std::size_t, Encoder> encoders;
    for (std::size_t i = 0; i < recipe.keep.size(); ++i) {
        if (recipe.categorical[i]) {
            encoders.emplace(recipe.keep[i], Encoder{});
        }
    }
    std::size_t data_rows = 0;
    std::size_t n_normal = 0;
    std::size_t n_anomaly = 0;
    std::size_t n_candidates = 0;
    scan_raw(options.raw_files, recipe.whitespace, recipe.raw_fields,
             [&](const std::string& path, std::size_t line, const Fields& fields) {
                 ++data_rows;
                 for (auto& [column, encoder] : encoders) {
                     encoder.observe(fields[column]);
                 }
                 const RowCtx ctx{path, line};
                 switch (recipe.classify(fields, ctx)) {
                     case 0: ++n_normal; break;
                     case 1: ++n_anomaly; break;
                     case 2: ++n_candidates; break;
                     default: break;
                 }
             });

    if (data_rows == 0) {
        throw data_error("recipe precondition failed: no data rows in raw input");
    }
    if (n_normal == 0) {
        throw data_error("recipe precondition failed: " + recipe.normal_missing);
    }

    std::mt19937_64 gen(options.seed);
    std::vector<bool> chosen;
    if (recipe.subsample_anomalies) {
        if (n_candidates == 0) {
            throw data_error("recipe precondition failed: " + recipe.anomaly_missing);
        }
        // want / (n_normal + want) ~= 1%.
        auto want = static_cast<std::size_t>(std::llround(static_cast<double>(n_normal) / 99.0));
        want = std::clamp<std::size_t>(want, 1, n_candidates);
        std::vector<std::uint32_t> pick(n_candidates);
        std::iota(pick.begin(), pick.end(), 0u);
        for (std::size_t i = 0; i < want; ++i) {
            std::swap(pick[i], pick[i + below(gen, n_candidates - i)]);
        }
        chosen.assign(n_candidates, false);
        for (std::size_t i = 0; i < want; ++i) {
            chosen[pick[i]] = true;
        }
        n_anomaly = want;
    } else if (n_anomaly == 0) {
        throw data_error("recipe precondition failed: " + recipe.anomaly_missing);
    }

    // Seeded half/half split of the kept rows; the training half keeps only
    // its normal rows (train-on-normal protocol), the rest is the test half.
    const std::size_t n_final = n_normal + n_anomaly;
    std::vector<std::uint32_t> perm(n_final);
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::size_t i = 0; i + 1 < n_final; ++i) {
        std::swap(perm[i], perm[i + below(gen, n_final - i)]);
    }
    const std::size_t n_pool = n_final / 2;
    std::vector<bool> in_pool(n_final, false);
    for (std::size_t i = 0; i < n_pool; ++i) {
        in_pool[perm[i]] = true;
    }

    // Pass 2: stream the kept rows out.
    const std::string base = options.recipe;
    AtomicFile full(out_dir / (base + ".csv"));
    AtomicFile train(out_dir / (base + "_train.csv"));
    AtomicFile test(out_dir / (base + "_test.csv"));
    std::string header;
    for (const auto& column : recipe.columns) {
        header += column;
        header += ',';
    }
    header += "label\n";
    full.stream() << header;
    train.stream() << header;
    test.stream() << header;

    std::size_t kept_ordinal = 0;
    std::size_t candidate_ordinal = 0;
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    std::string row;
    scan_raw(options.raw_files, recipe.whitespace, recipe.raw_fields,
             [&](const std::string& path, std::size_t line, const Fields& fields) {
                 const RowCtx ctx{path, line};
                 int label = recipe.classify(fields, ctx);
                 if (label < 0) {
                     return;
                 }
                 if (label == 2) {
                     const bool take = chosen[candidate_ordinal++];
                     if (!take) {
                         return;
                     }
                     label = 1;
                 }
                 row.clear();
                 for (std::size_t i = 0; i < recipe.keep.size(); ++i) {
                     const std::size_t column = recipe.keep[i];
                     const double value = recipe.categorical[i]
                                              ? encoders.at(column).code(fields[column])
                                              : num_field(fields, column, ctx);
                     row += format_double(value);
                     row += ',';
                 }
                 row += static_cast<char>('0' + label);
                 row += '\n';
                 full.stream() << row;
                 if (in_pool[kept_ordinal]) {
                     if (label == 0) {
                         train.stream() << row;
                         ++train_rows;
                     }
                 } else {
                     test.stream() << row;
                     ++test_rows;
                 }
                 ++kept_ordinal;
             });
    full.commit();
    train.commit();
    test.commit();

    const double ratio = static_cast<double>(n_anomaly) / static_cast<double>(n_final);
    nlohmann::ordered_json manifest;
    manifest["recipe"] = options.recipe;
    manifest["sources"] = options.raw_files;
    manifest["seed"] = options.seed;
    manifest["rows"] = n_final;
    manifest["features"] = recipe.columns.size();
    manifest["anomalies"] = n_anomaly;
    manifest["anomaly_ratio"] = ratio;
    manifest["columns"] = recipe.columns;
    nlohmann::ordered_json encodings = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < recipe.keep.size(); ++i) {
        if (recipe.categorical[i]) {
            encodings[recipe.columns[i]] = encoders.at(recipe.keep[i]).order;
        }
    }
    manifest["categorical_encodings"] = encodings;
    manifest["outputs"] = {
        {"full", {{"path", base + ".csv"}, {"rows", n_final}}},
        {"train", {{"path", base + "_train.csv"}, {"rows", train_rows}}},
        {"test", {{"path", base + "_test.csv"}, {"rows", test_rows}}},
    };
    AtomicFile manifest_file(out_dir / (base + "_manifest.json"));
    manifest_file.stream() << manifest.dump(2) << '\n';
    manifest_file.commit();

    std::cout << "prepared " << options.recipe << ": " << n_final << " rows x "
              << recipe.columns.size() << " features, " << n_anomaly << " anomalies ("
              << format_double(100.0 * ratio) << "%)\n"
              << "train: " << train_rows << " rows (normal only), test: " << test_rows
              << " rows\n"
              << "wrote " << base << ".csv, " << base << "_train.csv, " << base << "_test.csv, "
              << base << "_manifest.json in " << out_dir.string() << "\n";
}

}  // namespace tool
