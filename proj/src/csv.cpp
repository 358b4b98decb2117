#include "rydssh/csv.hpp"

#include "rydssh/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rydssh::csv {

namespace fs = std::filesystem;

std::string format_number(double value) {
    if (value == 0.0) value = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

std::string trajectory(const PopulationTrajectory& traj, const std::vector<int>& labels) {
    if (labels.size() != traj.sites()) throw SpecError("csv::trajectory: label count mismatch");
    std::string out = "t_us";
    for (int label : labels) out += fmt::format(",p_{}", label);
    if (traj.background) out += ",background";
    out += ",survival\n";
    for (std::size_t k = 0; k < traj.times_us.size(); ++k) {
        out += format_number(traj.times_us[k]);
        for (std::size_t i = 0; i < traj.sites(); ++i) {
            out += ',';
            out += format_number(traj.populations(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)));
        }
        if (traj.background) out += ',' + format_number((*traj.background)[k]);
        out += ',' + format_number(traj.survival[k]) + '\n';
    }
    return out;
}

std::string sweep(const SweepResult& result) {
    std::string out = "param_value";
    for (const auto& name : result.observable_names) out += ',' + name;
    out += '\n';
    for (std::size_t i = 0; i < result.parameter_values.size(); ++i) {
        out += format_number(result.parameter_values[i]);
        for (double v : result.observables[i]) out += ',' + format_number(v);
        out += '\n';
    }
    return out;
}

std::string trace(const SFITrace& t) {
    std::string out = "t_us,signal\n";
    for (std::size_t i = 0; i < t.times_us.size(); ++i) {
        out += format_number(t.times_us[i]) + ',' + format_number(t.signal[i]) + '\n';
    }
    return out;
}

std::string trajectory_long(const PopulationTrajectory& traj, const std::vector<int>& labels) {
    std::string out = "series,x,y\n";
    for (std::size_t i = 0; i < traj.sites(); ++i) {
        for (std::size_t k = 0; k < traj.times_us.size(); ++k) {
            out += fmt::format("p_{},{},{}\n", labels.at(i), format_number(traj.times_us[k]),
                               format_number(traj.populations(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i))));
        }
    }
    return out;
}

std::string sweep_long(const SweepResult& result) {
    std::string out = "series,x,y\n";
    for (std::size_t j = 0; j < result.observable_names.size(); ++j) {
        for (std::size_t i = 0; i < result.parameter_values.size(); ++i) {
            out += fmt::format("{},{},{}\n", result.observable_names[j], format_number(result.parameter_values[i]),
                               format_number(result.observables[i][j]));
        }
    }
    return out;
}

SFITrace parse_trace(std::istream& in) {
    SFITrace t;
    std::string line;
    if (!std::getline(in, line)) throw SpecError("trace CSV is empty");
    if (line.rfind("t_us,signal", 0) != 0) throw SpecError("trace CSV header must be 't_us,signal'");
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        // strtod, not stod: subnormal signal values are legal and must not throw.
        const char* begin = line.c_str();
        char* end = nullptr;
        const double time = std::strtod(begin, &end);
        if (end == begin || *end != ',') throw SpecError("trace CSV row " + std::to_string(row) + " is malformed");
        const char* second = end + 1;
        const double value = std::strtod(second, &end);
        if (end == second) throw SpecError("trace CSV row " + std::to_string(row) + " is malformed");
        t.times_us.push_back(time);
        t.signal.push_back(value);
    }
    return t;
}

SFITrace read_trace(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open trace file " + path.string());
    return parse_trace(in);
}

std::vector<SFITrace> load_basis_directory(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw SpecError("basis directory " + dir.string() + " does not exist");
    std::vector<SFITrace> basis;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
        const std::string stem = entry.path().stem().string();
        std::size_t digits = 0;
        while (digits < stem.size() && std::isdigit(static_cast<unsigned char>(stem[digits]))) ++digits;
        if (digits == 0) throw SpecError("basis file " + entry.path().string() + " has no leading n label");
        SFITrace t = read_trace(entry.path());
        t.label = std::stoi(stem.substr(0, digits));
        basis.push_back(std::move(t));
    }
    if (basis.empty()) throw SpecError("basis directory " + dir.string() + " holds no .csv traces");
    std::sort(basis.begin(), basis.end(), [](const SFITrace& a, const SFITrace& b) { return *a.label < *b.label; });
    return basis;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace rydssh::csv
