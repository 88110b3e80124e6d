#include "bellrmt/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "json.hpp"

#include "bellrmt/error.hpp"

namespace bellrmt {
namespace {

using nlohmann::json;

std::string k_field(const Ensemble& e) { return e.family == Family::Structured ? std::to_string(e.k) : ""; }

double rounded(double v) { return std::stod(format_number(v)); }

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

double parse_double(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::IoError, "bad number '" + s + "' in " + where);
    }
}

std::int64_t parse_int(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::IoError, "bad integer '" + s + "' in " + where);
    }
}

std::uint64_t parse_seed(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::IoError, "bad seed '" + s + "' in " + where);
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    return in;
}

using PointKey = std::tuple<std::string, std::string, int>;

PointKey key_of(const PointResult& p) { return {p.ensemble.name(), k_field(p.ensemble), p.n}; }

Ensemble ensemble_from_fields(const std::string& name, const std::string& k, const std::string& where) {
    return parse_ensemble(name, k.empty() ? 0 : static_cast<int>(parse_int(k, where)));
}

McmcConfig mcmc_from_json(const json& j) {
    McmcConfig cfg;
    if (j.contains("burn_in_sweeps")) cfg.burn_in_sweeps = j.at("burn_in_sweeps").get<std::int64_t>();
    if (j.contains("thinning_sweeps")) cfg.thinning_sweeps = j.at("thinning_sweeps").get<std::int64_t>();
    if (j.contains("step_size") && !j.at("step_size").is_null()) cfg.step_size = j.at("step_size").get<double>();
    return cfg;
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    std::string s(buf);
    if (s == "-0") s = "0";
    return s;
}

void write_csv(const SweepResult& result, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& p : result.points) {
        out << p.ensemble.name() << ',' << k_field(p.ensemble) << ',' << p.n << ',' << p.samples << ','
            << format_number(p.mean) << ',' << format_number(p.std) << ',' << format_number(p.std_error) << ','
            << format_number(p.violation_fraction) << ',' << result.master_seed << '\n';
    }
}

void write_histogram_csv(const SweepResult& result, std::ostream& out) {
    out << kHistogramHeader << '\n';
    for (const auto& p : result.points) {
        for (std::size_t b = 0; b < p.histogram.counts.size(); ++b) {
            out << p.ensemble.name() << ',' << k_field(p.ensemble) << ',' << p.n << ','
                << format_number(p.histogram.edges[b]) << ',' << format_number(p.histogram.edges[b + 1]) << ','
                << p.histogram.counts[b] << '\n';
        }
    }
}

void write_json(const SweepResult& result, std::ostream& out) {
    nlohmann::ordered_json doc;
    doc["master_seed"] = result.master_seed;
    doc["samples_per_point"] = result.samples_per_point;
    nlohmann::ordered_json points = nlohmann::ordered_json::array();
    for (const auto& p : result.points) {
        nlohmann::ordered_json jp;
        jp["ensemble"] = p.ensemble.name();
        jp["k"] = p.ensemble.family == Family::Structured ? nlohmann::ordered_json(p.ensemble.k) : nullptr;
        jp["N"] = p.n;
        jp["samples"] = p.samples;
        jp["mean"] = rounded(p.mean);
        jp["std"] = rounded(p.std);
        jp["stderr"] = rounded(p.std_error);
        jp["violation_fraction"] = rounded(p.violation_fraction);
        jp["seed"] = result.master_seed;
        if (p.acceptance_rate) jp["acceptance_rate"] = rounded(*p.acceptance_rate);
        nlohmann::ordered_json edges = nlohmann::ordered_json::array();
        for (double e : p.histogram.edges) edges.push_back(rounded(e));
        jp["histogram"] = {{"edges", edges}, {"counts", p.histogram.counts}};
        points.push_back(std::move(jp));
    }
    doc["points"] = std::move(points);
    out << doc.dump(2) << '\n';
}

void emit_results(const SweepResult& result, OutputFormat format, const std::string& path) {
    if (format == OutputFormat::Json) {
        auto out = open_output(path);
        write_json(result, out);
        if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
        return;
    }
    {
        auto out = open_output(path);
        write_csv(result, out);
        if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
    }
    const std::string hist_path = path + ".hist.csv";
    auto hist = open_output(hist_path);
    write_histogram_csv(result, hist);
    if (!hist) throw Error(ErrorCode::IoError, "write to '" + hist_path + "' failed");
}

SweepResult read_results_csv(const std::string& path) {
    auto in = open_input(path);
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != kCsvHeader) {
        throw Error(ErrorCode::IoError, "'" + path + "' does not start with header " + kCsvHeader);
    }
    SweepResult result;
    std::map<PointKey, std::size_t> index;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(row);
        const auto f = split_csv(line);
        if (f.size() != 9) throw Error(ErrorCode::IoError, "expected 9 fields at " + where);
        PointResult p;
        p.ensemble = ensemble_from_fields(f[0], f[1], where);
        p.n = static_cast<int>(parse_int(f[2], where));
        p.samples = parse_int(f[3], where);
        p.mean = parse_double(f[4], where);
        p.std = parse_double(f[5], where);
        p.std_error = parse_double(f[6], where);
        p.violation_fraction = parse_double(f[7], where);
        result.master_seed = parse_seed(f[8], where);
        if (p.ensemble.family != Family::MaxEntangled || result.samples_per_point == 0) {
            result.samples_per_point = std::max(result.samples_per_point, p.samples);
        }
        index[key_of(p)] = result.points.size();
        result.points.push_back(std::move(p));
    }

    std::ifstream hist(path + ".hist.csv", std::ios::binary);
    if (!hist) return result;
    if (!std::getline(hist, line) || strip_cr(line) != kHistogramHeader) {
        throw Error(ErrorCode::IoError, "'" + path + ".hist.csv' does not start with header " + kHistogramHeader);
    }
    row = 1;
    while (std::getline(hist, line)) {
        ++row;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::string where = path + ".hist.csv:" + std::to_string(row);
        const auto f = split_csv(line);
        if (f.size() != 6) throw Error(ErrorCode::IoError, "expected 6 fields at " + where);
        const PointKey key{f[0], f[1], static_cast<int>(parse_int(f[2], where))};
        auto it = index.find(key);
        if (it == index.end()) throw Error(ErrorCode::IoError, "histogram row without a summary row at " + where);
        auto& h = result.points[it->second].histogram;
        const double lo = parse_double(f[3], where);
        const double hi = parse_double(f[4], where);
        if (h.edges.empty()) h.edges.push_back(lo);
        h.edges.push_back(hi);
        h.counts.push_back(parse_int(f[5], where));
    }
    return result;
}

SweepResult read_results_json(const std::string& path) {
    auto in = open_input(path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::IoError, "'" + path + "': " + e.what());
    }
    try {
        SweepResult result;
        result.master_seed = doc.at("master_seed").get<std::uint64_t>();
        result.samples_per_point = doc.at("samples_per_point").get<std::int64_t>();
        for (const auto& jp : doc.at("points")) {
            PointResult p;
            const int k = jp.at("k").is_null() ? 0 : jp.at("k").get<int>();
            p.ensemble = parse_ensemble(jp.at("ensemble").get<std::string>(), k);
            p.n = jp.at("N").get<int>();
            p.samples = jp.at("samples").get<std::int64_t>();
            p.mean = jp.at("mean").get<double>();
            p.std = jp.at("std").get<double>();
            p.std_error = jp.at("stderr").get<double>();
            p.violation_fraction = jp.at("violation_fraction").get<double>();
            if (jp.contains("acceptance_rate")) p.acceptance_rate = jp.at("acceptance_rate").get<double>();
            p.histogram.edges = jp.at("histogram").at("edges").get<std::vector<double>>();
            p.histogram.counts = jp.at("histogram").at("counts").get<std::vector<std::int64_t>>();
            result.points.push_back(std::move(p));
        }
        return result;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::IoError, "'" + path + "' does not match the result schema: " + e.what());
    }
}

Ensemble parse_ensemble(const std::string& name, int k) {
    if (name == "hs") return Ensemble::hs();
    if (name == "structured") return Ensemble::structured(k);
    if (name == "maxent") return Ensemble::max_entangled();
    if (name == "coulomb") return Ensemble::coulomb_gas();
    throw Error(ErrorCode::InvalidConfig, "unknown ensemble '" + name + "' (expected hs|structured|maxent|coulomb)");
}

SweepConfig load_sweep_config(const std::string& path) {
    auto in = open_input(path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, "'" + path + "': " + e.what());
    }
    SweepConfig cfg;
    try {
        if (doc.contains("ensembles")) {
            cfg.ensembles.clear();
            for (const auto& je : doc.at("ensembles")) {
                if (je.is_string()) {
                    cfg.ensembles.push_back(parse_ensemble(je.get<std::string>()));
                    continue;
                }
                Ensemble e = parse_ensemble(je.at("kind").get<std::string>(), je.value("k", 0));
                if (e.family == Family::CoulombGas) e.mcmc = mcmc_from_json(je);
                cfg.ensembles.push_back(e);
            }
        }
        if (doc.contains("n_grid")) cfg.n_grid = doc.at("n_grid").get<std::vector<int>>();
        if (doc.contains("samples_per_point")) cfg.samples_per_point = doc.at("samples_per_point").get<std::int64_t>();
        if (doc.contains("master_seed")) cfg.master_seed = doc.at("master_seed").get<std::uint64_t>();
        if (doc.contains("output_path")) cfg.output_path = doc.at("output_path").get<std::string>();
        if (doc.contains("histogram_bins")) cfg.histogram_bins = doc.at("histogram_bins").get<int>();
        if (doc.contains("threads")) cfg.threads = doc.at("threads").get<int>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, "'" + path + "': " + e.what());
    }
    return cfg;
}

}  // namespace bellrmt
