// Command-line front end. All detector work goes through the shared C API;
// this file only parses arguments, moves bytes, and formats tables.
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <damex/damex.h>

#include "CLI11.hpp"
#include "prepare.hpp"
#include "util.hpp"

namespace {

using tool::AtomicFile;
using tool::data_error;
using tool::format_double;
using tool::usage_error;

void check(damex_status status) {
    if (status != DAMEX_OK) {
        throw data_error(damex_last_error());
    }
}

template <typename T, void (*Destroy)(T*)>
struct Handle {
    T* ptr = nullptr;

    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Destroy(ptr); }

    T** out() { return &ptr; }
    operator T*() const { return ptr; }
};

using DatasetHandle = Handle<damex_dataset, damex_dataset_destroy>;
using ModelHandle = Handle<damex_model, damex_model_destroy>;
using StabilityHandle = Handle<damex_stability_report, damex_stability_report_destroy>;
using EvalHandle = Handle<damex_eval_report, damex_eval_report_destroy>;

struct MuMin {
    double value = 0.0;
    int is_auto = 1;
};

MuMin parse_mu_min(const std::string& text) {
    if (text == "auto") {
        return {};
    }
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
        throw usage_error("--mu-min expects a number or 'auto', got '" + text + "'");
    }
    return {value, 0};
}

std::string join_features(const std::size_t* features, std::size_t count) {
    std::string joined;
    for (std::size_t i = 0; i < count; ++i) {
        if (i > 0) {
            joined += '+';
        }
        joined += std::to_string(features[i]);
    }
    return joined;
}

/// (non-blank line count, field count of the first non-blank line).
std::pair<std::size_t, std::size_t> csv_shape(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw data_error("cannot open " + path);
    }
    std::size_t lines = 0;
    std::size_t header_fields = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        if (++lines == 1) {
            header_fields = 1 + static_cast<std::size_t>(
                                    std::count(line.begin(), line.end(), ','));
        }
    }
    if (in.bad()) {
        throw data_error("read failed: " + path);
    }
    return {lines, header_fields};
}

/// Prints the table and mirrors it to `path` when non-empty.
void emit_table(const std::string& table, const std::string& path) {
    std::cout << table;
    if (!path.empty()) {
        AtomicFile out(path);
        out.stream() << table;
        out.commit();
    }
}

// ---- fit ----------------------------------------------------------------

struct FitArgs {
    std::string train;
    std::string out;
    std::size_t label_col = 0;
    std::size_t k = 0;
    double epsilon = 0.01;
    std::string mu_min = "auto";
};

void print_census(damex_model* model) {
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t k = 0;
    std::size_t n_extreme = 0;
    std::size_t charged = 0;
    double epsilon = 0.0;
    double mu_min = 0.0;
    check(damex_model_sample_size(model, &n));
    check(damex_model_dim(model, &d));
    check(damex_model_k(model, &k));
    check(damex_model_epsilon(model, &epsilon));
    check(damex_model_mu_min(model, &mu_min));
    check(damex_model_n_extreme(model, &n_extreme));
    check(damex_model_charged_count(model, &charged));

    std::string cone_table = "cone,dim,mass,count\n";
    std::map<std::size_t, std::pair<std::size_t, double>> by_dim;
    double charged_mass = 0.0;
    std::vector<std::size_t> features(d);
    for (std::size_t i = 0; i < charged; ++i) {
        std::size_t n_features = 0;
        double mass = 0.0;
        std::size_t count = 0;
        check(damex_model_cone(model, i, features.data(), d, &n_features, &mass, &count));
        cone_table += join_features(features.data(), n_features);
        cone_table += ',' + std::to_string(n_features);
        cone_table += ',' + format_double(mass);
        cone_table += ',' + std::to_string(count);
        cone_table += '\n';
        auto& slot = by_dim[n_features];
        slot.first += 1;
        slot.second += mass;
        charged_mass += mass;
    }

    std::cout << "# fitted on " << n << " rows x " << d << " features\n"
              << "# k: " << k << "\n"
              << "# epsilon: " << format_double(epsilon) << "\n"
              << "# mu_min: " << format_double(mu_min) << "\n"
              << "# extreme rows: " << n_extreme << "\n"
              << "# charged cones: " << charged << "\n"
              << "# charged mass: " << format_double(charged_mass) << "\n"
              << cone_table << "\n# mass by cone dimension\ndim,cones,mass\n";
    for (const auto& [dim, slot] : by_dim) {
        std::cout << dim << ',' << slot.first << ',' << format_double(slot.second) << '\n';
    }
}

void run_fit(const FitArgs& args) {
    const MuMin mu = parse_mu_min(args.mu_min);
    DatasetHandle train;
    check(damex_dataset_from_csv(args.train.c_str(), args.label_col, train.out()));
    ModelHandle model;
    check(damex_fit(train, args.k, args.epsilon, mu.value, mu.is_auto, model.out()));
    check(damex_model_save(model, args.out.c_str()));
    print_census(model);
}

// ---- score --------------------------------------------------------------

struct ScoreArgs {
    std::string model;
    std::string test;
    std::string out;
    std::size_t label_col = 0;
};

void run_score(const ScoreArgs& args) {
    ModelHandle model;
    check(damex_model_load(args.model.c_str(), model.out()));
    std::size_t d = 0;
    check(damex_model_dim(model, &d));

    const auto [lines, header_fields] = csv_shape(args.test);
    if (lines == 0) {
        throw data_error("missing header row in " + args.test);
    }
    if (lines == 1) {
        // Header-only input: validate the shape, emit the header.
        if (args.label_col > header_fields) {
            throw data_error("label column out of range in " + args.test);
        }
        const std::size_t features = header_fields - (args.label_col > 0 ? 1 : 0);
        if (features != d) {
            throw data_error("wrong dimension: model expects " + std::to_string(d) +
                             " features, " + args.test + " has " + std::to_string(features));
        }
        AtomicFile out(args.out);
        out.stream() << "row,s_n,is_extreme,cone\n";
        out.commit();
        return;
    }

    DatasetHandle test;
    check(damex_dataset_from_csv(args.test.c_str(), args.label_col, test.out()));
    std::size_t rows = 0;
    std::size_t cols = 0;
    check(damex_dataset_rows(test, &rows));
    check(damex_dataset_cols(test, &cols));

    AtomicFile out(args.out);
    out.stream() << "row,s_n,is_extreme,cone\n";
    std::vector<double> point(cols);
    std::vector<std::size_t> features(cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            check(damex_dataset_value(test, i, j, &point[j]));
        }
        double score = 0.0;
        double sup_norm = 0.0;
        int extreme = 0;
        int charged = 0;
        std::size_t n_features = 0;
        check(damex_describe(model, point.data(), cols, &score, &extreme, &charged, &sup_norm,
                             features.data(), cols, &n_features));
        out.stream() << (i + 1) << ',' << format_double(score) << ',' << extreme << ',';
        if (charged) {
            out.stream() << join_features(features.data(), n_features);
        } else {
            out.stream() << "none-charged";
        }
        out.stream() << '\n';
    }
    out.commit();
}

// ---- simulate -----------------------------------------------------------

struct SimulateArgs {
    std::size_t d = 10;
    std::size_t K = 3;
    double w = 0.1;
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    std::string out;
    std::string support_out;
};

void run_simulate(const SimulateArgs& args) {
    DatasetHandle data;
    char* support = nullptr;
    check(damex_simulate(args.d, args.K, args.w, args.seed, args.n, data.out(), &support));
    std::string support_text(support);
    damex_string_free(support);
    check(damex_dataset_write_csv(data, args.out.c_str()));
    std::cout << "# planted support\n" << support_text << '\n';
    if (!args.support_out.empty()) {
        AtomicFile out(args.support_out);
        out.stream() << support_text << '\n';
        out.commit();
    }
}

// ---- recover ------------------------------------------------------------

struct RecoverArgs {
    std::size_t d = 10;
    std::vector<std::size_t> K{3, 5, 10, 15, 25, 50};
    std::vector<std::size_t> n{50000};
    std::size_t runs = 20;
    double w = 0.1;
    std::size_t k = 0;
    double epsilon = 0.05;
    std::string mu_min = "auto";
    std::uint64_t seed = 0;
    std::string out;
};

void run_recover(const RecoverArgs& args) {
    const MuMin mu = parse_mu_min(args.mu_min);
    std::vector<double> means(args.K.size() * args.n.size());
    check(damex_recovery_experiment(args.d, args.K.data(), args.K.size(), args.n.data(),
                                    args.n.size(), args.runs, args.w, args.k, args.epsilon,
                                    mu.value, mu.is_auto, args.seed, means.data()));
    std::string table = "K,n,runs,mean_errors\n";
    for (std::size_t i = 0; i < args.K.size(); ++i) {
        for (std::size_t j = 0; j < args.n.size(); ++j) {
            table += std::to_string(args.K[i]);
            table += ',' + std::to_string(args.n[j]);
            table += ',' + std::to_string(args.runs);
            table += ',' + format_double(means[i * args.n.size() + j]);
            table += '\n';
        }
    }
    emit_table(table, args.out);
}

// ---- evaluate -----------------------------------------------------------

struct EvaluateArgs {
    std::string data;
    std::size_t label_col = 0;
    std::size_t splits = 20;
    double train_fraction = 0.5;
    std::size_t k = 0;
    double epsilon = 0.01;
    std::string mu_min = "auto";
    std::size_t trees = 100;
    std::size_t subsample = 256;
    std::uint64_t seed = 0;
    std::string out;
};

void run_evaluate(const EvaluateArgs& args) {
    const MuMin mu = parse_mu_min(args.mu_min);
    DatasetHandle data;
    check(damex_dataset_from_csv(args.data.c_str(), args.label_col, data.out()));
    EvalHandle report;
    check(damex_evaluate_splits(data, args.splits, args.train_fraction, args.k, args.epsilon,
                                mu.value, mu.is_auto, args.trees, args.subsample, args.seed,
                                report.out()));

    std::size_t warnings = 0;
    check(damex_eval_warning_count(report, &warnings));
    for (std::size_t i = 0; i < warnings; ++i) {
        const char* text = nullptr;
        check(damex_eval_warning(report, i, &text));
        std::cerr << "warning: " << text << '\n';
    }

    std::string table = "split,roc_iforest,pr_iforest,roc_combined,pr_combined\n";
    const auto append = [&table](const std::string& head, double a, double b, double c,
                                 double d) {
        table += head;
        table += ',' + format_double(a);
        table += ',' + format_double(b);
        table += ',' + format_double(c);
        table += ',' + format_double(d);
        table += '\n';
    };
    std::size_t count = 0;
    check(damex_eval_split_count(report, &count));
    double roc_b = 0.0;
    double pr_b = 0.0;
    double roc_c = 0.0;
    double pr_c = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        check(damex_eval_split(report, i, &roc_b, &pr_b, &roc_c, &pr_c));
        append(std::to_string(i + 1), roc_b, pr_b, roc_c, pr_c);
    }
    check(damex_eval_mean(report, &roc_b, &pr_b, &roc_c, &pr_c));
    append("mean", roc_b, pr_b, roc_c, pr_c);
    check(damex_eval_stddev(report, &roc_b, &pr_b, &roc_c, &pr_c));
    append("stddev", roc_b, pr_b, roc_c, pr_c);
    emit_table(table, args.out);
}

// ---- stability ----------------------------------------------------------

struct StabilityArgs {
    std::string data;
    std::size_t label_col = 0;
    std::vector<std::size_t> k_grid;
    std::vector<double> epsilon_grid;
    std::size_t k_fixed = 0;
    double epsilon_fixed = 0.01;
    std::string mu_min = "auto";
    double level = 0.9;
    std::string out;
};

void run_stability(const StabilityArgs& args) {
    const MuMin mu = parse_mu_min(args.mu_min);
    DatasetHandle data;
    check(damex_dataset_from_csv(args.data.c_str(), args.label_col, data.out()));
    StabilityHandle report;
    check(damex_stability_scan(data, args.k_grid.empty() ? nullptr : args.k_grid.data(),
                               args.k_grid.size(),
                               args.epsilon_grid.empty() ? nullptr : args.epsilon_grid.data(),
                               args.epsilon_grid.size(), args.k_fixed, args.epsilon_fixed,
                               mu.value, mu.is_auto, args.level, report.out()));

    std::string table = "scan,k,epsilon,charged,jaccard_prev\n";
    const auto append_scan = [&](int which, std::size_t entries, const char* tag) {
        for (std::size_t i = 0; i < entries; ++i) {
            std::size_t k = 0;
            double epsilon = 0.0;
            std::size_t charged = 0;
            double jaccard = 0.0;
            check(damex_stability_entry(report, which, i, &k, &epsilon, &charged, &jaccard));
            table += tag;
            table += ',' + std::to_string(k);
            table += ',' + format_double(epsilon);
            table += ',' + std::to_string(charged);
            table += ',' + format_double(jaccard);
            table += '\n';
        }
    };
    std::size_t k_entries = 0;
    std::size_t epsilon_entries = 0;
    check(damex_stability_k_count(report, &k_entries));
    check(damex_stability_epsilon_count(report, &epsilon_entries));
    append_scan(0, k_entries, "k");
    append_scan(1, epsilon_entries, "epsilon");

    std::size_t chosen_k = 0;
    double chosen_epsilon = 0.0;
    check(damex_stability_chosen(report, &chosen_k, &chosen_epsilon));
    table += "# chosen k: " + std::to_string(chosen_k) + '\n';
    table += "# chosen epsilon: " + format_double(chosen_epsilon) + '\n';
    emit_table(table, args.out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anomaly detection on multivariate extremes: cone-mass detector, "
                 "isolation-forest baseline, simulation and evaluation protocols."};
    app.require_subcommand(1);
    app.set_version_flag("-V,--version", std::string(damex_version()));

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "Fit the detector on a CSV and save the model");
    fit->add_option("train", fit_args.train, "Training CSV (header row required)")->required();
    fit->add_option("--out", fit_args.out, "Model file to write")->required();
    fit->add_option("--label-col", fit_args.label_col,
                    "1-based label column to exclude (0 = none)");
    fit->add_option("--k", fit_args.k, "Extremes budget (0 = ceil(sqrt(n)))");
    fit->add_option("--epsilon", fit_args.epsilon, "Cone thickness in [0, 1)")->capture_default_str();
    fit->add_option("--mu-min", fit_args.mu_min, "Mass threshold, a number or 'auto'")->capture_default_str();
    fit->callback([&fit_args] { run_fit(fit_args); });

    ScoreArgs score_args;
    auto* score = app.add_subcommand("score", "Score a CSV with a saved model");
    score->add_option("model", score_args.model, "Model file from 'fit'")->required();
    score->add_option("test", score_args.test, "CSV to score")->required();
    score->add_option("--out", score_args.out, "Scores CSV to write")->required();
    score->add_option("--label-col", score_args.label_col,
                      "1-based label column to exclude (0 = none)");
    score->callback([&score_args] { run_score(score_args); });

    SimulateArgs sim_args;
    auto* simulate =
        app.add_subcommand("simulate", "Sample the planted-support max-stable model");
    simulate->add_option("--d", sim_args.d, "Dimension")->capture_default_str();
    simulate->add_option("--K", sim_args.K, "Number of planted subsets")->capture_default_str();
    simulate->add_option("--w", sim_args.w, "Dependence strength in (0, 1]")->capture_default_str();
    simulate->add_option("--n", sim_args.n, "Rows to sample")->capture_default_str();
    simulate->add_option("--seed", sim_args.seed, "RNG seed")->capture_default_str();
    simulate->add_option("--out", sim_args.out, "Data CSV to write")->required();
    simulate->add_option("--support-out", sim_args.support_out,
                         "Also write the planted support to this file");
    simulate->callback([&sim_args] { run_simulate(sim_args); });

    RecoverArgs recover_args;
    auto* recover =
        app.add_subcommand("recover", "Support-recovery experiment over a (K, n) grid");
    recover->add_option("--d", recover_args.d, "Dimension")->capture_default_str();
    recover->add_option("--K", recover_args.K, "Planted support sizes")->capture_default_str();
    recover->add_option("--n", recover_args.n, "Sample sizes")->capture_default_str();
    recover->add_option("--runs", recover_args.runs, "Repetitions per grid point")->capture_default_str();
    recover->add_option("--w", recover_args.w, "Dependence strength")->capture_default_str();
    recover->add_option("--k", recover_args.k, "Extremes budget (0 = ceil(sqrt(n)))");
    recover->add_option("--epsilon", recover_args.epsilon, "Cone thickness")->capture_default_str();
    recover->add_option("--mu-min", recover_args.mu_min, "Mass threshold or 'auto'")->capture_default_str();
    recover->add_option("--seed", recover_args.seed, "RNG seed")->capture_default_str();
    recover->add_option("--out", recover_args.out, "Also write the table to this file");
    recover->callback([&recover_args] { run_recover(recover_args); });

    EvaluateArgs eval_args;
    auto* evaluate = app.add_subcommand(
        "evaluate", "Baseline vs combined detector over random labeled splits");
    evaluate->add_option("data", eval_args.data, "Labeled CSV")->required();
    evaluate->add_option("--label-col", eval_args.label_col, "1-based label column")
        ->required();
    evaluate->add_option("--splits", eval_args.splits, "Number of random splits")->capture_default_str();
    evaluate->add_option("--train-fraction", eval_args.train_fraction,
                         "Fraction of rows in the training half")->capture_default_str();
    evaluate->add_option("--k", eval_args.k, "Extremes budget (0 = ceil(sqrt(n)))");
    evaluate->add_option("--epsilon", eval_args.epsilon, "Cone thickness")->capture_default_str();
    evaluate->add_option("--mu-min", eval_args.mu_min, "Mass threshold or 'auto'")->capture_default_str();
    evaluate->add_option("--trees", eval_args.trees, "Isolation-forest size")->capture_default_str();
    evaluate->add_option("--subsample", eval_args.subsample,
                         "Isolation-forest subsample size")->capture_default_str();
    evaluate->add_option("--seed", eval_args.seed, "RNG seed")->capture_default_str();
    evaluate->add_option("--out", eval_args.out, "Also write the table to this file");
    evaluate->callback([&eval_args] { run_evaluate(eval_args); });

    StabilityArgs stab_args;
    auto* stability =
        app.add_subcommand("stability", "Charged-support stability scan over k and epsilon");
    stability->add_option("data", stab_args.data, "Training CSV")->required();
    stability->add_option("--label-col", stab_args.label_col,
                          "1-based label column to exclude (0 = none)");
    stability->add_option("--k-grid", stab_args.k_grid,
                          "k grid (default: log-spaced over [n^1/4, n^2/3])");
    stability->add_option("--epsilon-grid", stab_args.epsilon_grid,
                          "epsilon grid (default: log-spaced over [1e-4, 0.1])");
    stability->add_option("--k-fixed", stab_args.k_fixed,
                          "k used by the epsilon scan (0 = ceil(sqrt(n)))");
    stability->add_option("--epsilon-fixed", stab_args.epsilon_fixed,
                          "epsilon used by the k scan")->capture_default_str();
    stability->add_option("--mu-min", stab_args.mu_min, "Mass threshold or 'auto'")->capture_default_str();
    stability->add_option("--level", stab_args.level, "Stability level on Jaccard")->capture_default_str();
    stability->add_option("--out", stab_args.out, "Also write the table to this file");
    stability->callback([&stab_args] { run_stability(stab_args); });

    tool::PrepareOptions prep_args;
    auto* prepare =
        app.add_subcommand("prepare", "Turn raw benchmark files into labeled CSVs");
    prepare->add_option("recipe", prep_args.recipe, "One of: shuttle, forestcover, sa, sf, http, smtp")
        ->required();
    prepare->add_option("--raw", prep_args.raw_files, "Raw input file (repeatable)")
        ->required();
    prepare->add_option("--out-dir", prep_args.out_dir, "Output directory (default .)");
    prepare->add_option("--seed", prep_args.seed, "RNG seed for sampling and the split")->capture_default_str();
    prepare->callback([&prep_args] { tool::prepare_dataset(prep_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const data_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
