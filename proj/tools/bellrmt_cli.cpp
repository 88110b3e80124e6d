#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bellrmt/analytic.hpp"
#include "bellrmt/error.hpp"
#include "bellrmt/io.hpp"
#include "bellrmt/sweep.hpp"
#include "bellrmt/validation.hpp"

using namespace bellrmt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct UsageError {
    std::string flag;
    std::string message;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
}

int parse_int_flag(const std::string& flag, const std::string& text) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError{flag, "'" + text + "' is not an integer"};
}

std::vector<Ensemble> parse_ensembles(const std::string& names, const std::string& ks) {
    std::vector<int> k_values;
    for (const auto& k : split(ks, ',')) k_values.push_back(parse_int_flag("--k", k));

    std::vector<Ensemble> out;
    for (const auto& name : split(names, ',')) {
        if (name == "structured") {
            if (k_values.empty()) throw UsageError{"--k", "required with --ensemble structured"};
            for (int k : k_values) {
                if (k < 1) throw UsageError{"--k", "must be >= 1, got " + std::to_string(k)};
                out.push_back(Ensemble::structured(k));
            }
            continue;
        }
        try {
            out.push_back(parse_ensemble(name));
        } catch (const Error& e) {
            throw UsageError{"--ensemble", e.what()};
        }
    }
    if (out.empty()) throw UsageError{"--ensemble", "no ensemble given"};
    return out;
}

std::vector<int> parse_grid(const std::string& spec, int n_min, int n_max) {
    if (spec == "exp") {
        if (n_min < 2) throw UsageError{"--n-min", "must be >= 2"};
        if (n_max < n_min) throw UsageError{"--n-max", "must be >= --n-min"};
        return exponential_n_grid(n_min, n_max);
    }
    if (spec.rfind("list:", 0) == 0) {
        std::vector<int> grid;
        for (const auto& v : split(spec.substr(5), ',')) grid.push_back(parse_int_flag("--n-grid", v));
        if (grid.empty()) throw UsageError{"--n-grid", "empty list"};
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (grid[i] < 2) throw UsageError{"--n-grid", "values must be >= 2"};
            if (i > 0 && grid[i] <= grid[i - 1]) throw UsageError{"--n-grid", "values must be strictly increasing"};
        }
        return grid;
    }
    throw UsageError{"--n-grid", "expected 'exp' or 'list:<csv>', got '" + spec + "'"};
}

int threads_from_env() {
    const char* env = std::getenv("BELLRMT_THREADS");
    if (env == nullptr || *env == '\0') return 0;
    const int t = parse_int_flag("BELLRMT_THREADS", env);
    if (t < 0) throw UsageError{"BELLRMT_THREADS", "must be >= 0"};
    return t;
}

void write_to(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

struct SweepFlags {
    std::string ensemble = "hs";
    std::string k;
    int n_min = 2;
    int n_max = 512;
    std::string n_grid = "exp";
    std::int64_t samples = 1000;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
    int threads = 0;
    int bins = 50;
    std::string config;
};

int run_sweep_command(const CLI::App& cmd, const SweepFlags& f) {
    SweepConfig cfg;
    if (!f.config.empty()) {
        try {
            cfg = load_sweep_config(f.config);
        } catch (const Error& e) {
            throw UsageError{"--config", e.what()};
        }
    }
    const bool grid_flags = cmd.count("--n-grid") + cmd.count("--n-min") + cmd.count("--n-max") > 0;
    if (cmd.count("--ensemble") || cmd.count("--k") || f.config.empty()) cfg.ensembles = parse_ensembles(f.ensemble, f.k);
    if (grid_flags || f.config.empty()) cfg.n_grid = parse_grid(f.n_grid, f.n_min, f.n_max);
    if (cmd.count("--samples") || f.config.empty()) cfg.samples_per_point = f.samples;
    if (cmd.count("--seed") || f.config.empty()) cfg.master_seed = f.seed;
    if (cmd.count("--bins") || f.config.empty()) cfg.histogram_bins = f.bins;
    if (cmd.count("--out")) cfg.output_path = f.out;
    if (cmd.count("--threads")) {
        cfg.threads = f.threads;
    } else if (f.config.empty() || cfg.threads == 0) {
        cfg.threads = threads_from_env();
    }

    if (cfg.samples_per_point < 2) throw UsageError{"--samples", "must be >= 2"};
    if (cfg.histogram_bins < 1) throw UsageError{"--bins", "must be >= 1"};
    if (cfg.threads < 0) throw UsageError{"--threads", "must be >= 0"};
    try {
        cfg.validate();
    } catch (const Error& e) {
        throw UsageError{f.config.empty() ? "--ensemble" : "--config", e.what()};
    }

    const OutputFormat format = f.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    const SweepResult result = run_sweep(cfg);
    if (cfg.output_path.empty()) {
        if (format == OutputFormat::Json) {
            write_json(result, std::cout);
        } else {
            write_csv(result, std::cout);
        }
    } else {
        emit_results(result, format, cfg.output_path);
    }
    return kExitOk;
}

struct HistFlags {
    std::string ensemble = "hs";
    std::string k;
    int n = 2;
    std::int64_t samples = 1000;
    int bins = 50;
    std::uint64_t seed = 0;
    std::string out;
    int threads = 0;
};

int run_hist_command(const CLI::App& cmd, const HistFlags& f) {
    SweepConfig cfg;
    cfg.ensembles = parse_ensembles(f.ensemble, f.k);
    if (f.n < 2) throw UsageError{"--n", "must be >= 2"};
    if (f.samples < 2) throw UsageError{"--samples", "must be >= 2"};
    if (f.bins < 1) throw UsageError{"--bins", "must be >= 1"};
    cfg.n_grid = {f.n};
    cfg.samples_per_point = f.samples;
    cfg.histogram_bins = f.bins;
    cfg.master_seed = f.seed;
    cfg.threads = cmd.count("--threads") ? f.threads : threads_from_env();
    if (cfg.threads < 0) throw UsageError{"--threads", "must be >= 0"};

    const SweepResult result = run_sweep(cfg);
    std::ostringstream text;
    write_histogram_csv(result, text);
    write_to(f.out, text.str());
    return kExitOk;
}

int run_validate_command(std::uint64_t seed, int threads) {
    const auto checks = run_validation(seed, threads);
    bool all = true;
    for (const auto& c : checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        all = all && c.passed;
    }
    std::cout << (all ? "all checks passed" : "validation FAILED") << '\n';
    return all ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo sweeps of the Bell functional over random bipartite states"};
    app.require_subcommand(1);

    SweepFlags sf;
    auto* sweep = app.add_subcommand("sweep", "Mean, spread and histogram of A_N over an N grid");
    sweep->add_option("--ensemble", sf.ensemble, "hs|structured|maxent|coulomb, comma separated");
    sweep->add_option("--k", sf.k, "Unitaries per structured state, comma separated");
    sweep->add_option("--n-min", sf.n_min, "Smallest N of the exponential grid");
    sweep->add_option("--n-max", sf.n_max, "Largest N of the exponential grid");
    sweep->add_option("--n-grid", sf.n_grid, "exp or list:<n1,n2,...>");
    sweep->add_option("--samples", sf.samples, "Samples per grid point");
    sweep->add_option("--seed", sf.seed, "Master seed");
    sweep->add_option("--out", sf.out, "Output file (stdout when omitted)");
    sweep->add_option("--format", sf.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--threads", sf.threads, "Worker threads (default: BELLRMT_THREADS, then all)");
    sweep->add_option("--bins", sf.bins, "Histogram bins");
    sweep->add_option("--config", sf.config, "JSON sweep configuration; flags override it");

    HistFlags hf;
    auto* hist = app.add_subcommand("hist", "Histogram of A_N at a single N");
    hist->add_option("--ensemble", hf.ensemble, "hs|structured|maxent|coulomb");
    hist->add_option("--k", hf.k, "Unitaries per structured state");
    hist->add_option("--n", hf.n, "Dimension N");
    hist->add_option("--samples", hf.samples, "Samples");
    hist->add_option("--bins", hf.bins, "Histogram bins");
    hist->add_option("--seed", hf.seed, "Master seed");
    hist->add_option("--out", hf.out, "Output file (stdout when omitted)");
    hist->add_option("--threads", hf.threads, "Worker threads");

    auto* analytic_cmd = app.add_subcommand("analytic", "Print the closed-form reference values as JSON");

    std::uint64_t validate_seed = 20240601;
    int validate_threads = 0;
    auto* validate = app.add_subcommand("validate", "Run the oracle and invariant checks");
    validate->add_option("--seed", validate_seed, "Master seed for the stochastic checks");
    validate->add_option("--threads", validate_threads, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*sweep) return run_sweep_command(*sweep, sf);
        if (*hist) return run_hist_command(*hist, hf);
        if (*analytic_cmd) {
            std::cout << analytic::to_json(analytic::analytic_table()) << '\n';
            return kExitOk;
        }
        if (*validate) {
            if (validate->count("--threads") == 0) validate_threads = threads_from_env();
            return run_validate_command(validate_seed, validate_threads);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.flag << ": " << e.message << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
