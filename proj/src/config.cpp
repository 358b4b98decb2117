#include "rydssh/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace rydssh {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(path + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError(path + (path.empty() ? "" : ".") + key + ": unknown key");
        }
    }
}

template <typename T>
T get_as(const json& obj, const std::string& key, const std::string& path) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(path + "." + key + ": wrong type");
    }
}

template <typename T>
std::optional<T> get_opt(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) return std::nullopt;
    return get_as<T>(obj, key, path);
}

// Either an explicit list or {"start", "stop", "count"} (inclusive, evenly spaced).
std::vector<double> parse_values(const json& node, const std::string& path) {
    if (node.is_array()) {
        try {
            return node.get<std::vector<double>>();
        } catch (const json::exception&) {
            throw ConfigError(path + ": expected a list of numbers");
        }
    }
    reject_unknown(node, path, {"start", "stop", "count"});
    for (const char* k : {"start", "stop", "count"}) {
        if (!node.contains(k)) throw ConfigError(path + "." + k + ": missing");
    }
    const double start = get_as<double>(node, "start", path);
    const double stop = get_as<double>(node, "stop", path);
    const auto count = get_as<std::size_t>(node, "count", path);
    if (count < 2) throw ConfigError(path + ".count: must be at least 2");
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) {
        values[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return values;
}

Experiment parse_experiment(const std::string& name) {
    if (name == "evolve") return Experiment::evolve;
    if (name == "sweep_edge_detuning") return Experiment::sweep_edge_detuning;
    if (name == "sweep_protection") return Experiment::sweep_protection;
    if (name == "splitting_vs_size") return Experiment::splitting_vs_size;
    if (name == "dressed_scan") return Experiment::dressed_scan;
    if (name == "sfi_pipeline") return Experiment::sfi_pipeline;
    throw ConfigError("experiment: unknown experiment '" + name + "'");
}

LatticeSpec parse_lattice(const json& node) {
    reject_unknown(node, "lattice", {"labels", "couplings_khz", "bond_detunings_khz"});
    for (const char* k : {"labels", "couplings_khz"}) {
        if (!node.contains(k)) throw ConfigError(std::string("lattice.") + k + ": missing");
    }
    LatticeSpec spec;
    spec.site_labels = get_as<std::vector<int>>(node, "labels", "lattice");
    spec.couplings_khz = get_as<std::vector<double>>(node, "couplings_khz", "lattice");
    spec.bond_detunings_khz = get_opt<std::vector<double>>(node, "bond_detunings_khz", "lattice")
                                  .value_or(std::vector<double>(spec.couplings_khz.size(), 0.0));
    try {
        spec.validate();
    } catch (const SpecError& e) {
        throw ConfigError(std::string("lattice: ") + e.what());
    }
    return spec;
}

TimeConfig parse_time(const json& node) {
    reject_unknown(node, "time", {"t_max_us", "samples", "grid_us"});
    TimeConfig t;
    t.t_max_us = get_opt<double>(node, "t_max_us", "time");
    t.samples = get_opt<std::size_t>(node, "samples", "time");
    t.grid_us = get_opt<std::vector<double>>(node, "grid_us", "time");
    if (!t.grid_us && !t.t_max_us) throw ConfigError("time: need either t_max_us or grid_us");
    if (t.t_max_us && !(*t.t_max_us > 0.0)) throw ConfigError("time.t_max_us: must be positive");
    return t;
}

DecoherenceParams parse_decoherence(const json& node) {
    reject_unknown(node, "decoherence", {"survival_time_us", "dephasing_time_us", "background_bin"});
    DecoherenceParams d;
    d.survival_time_us = get_opt<double>(node, "survival_time_us", "decoherence");
    d.dephasing_time_us = get_opt<double>(node, "dephasing_time_us", "decoherence");
    d.background_bin = get_opt<bool>(node, "background_bin", "decoherence").value_or(false);
    try {
        d.validate();
    } catch (const SpecError& e) {
        throw ConfigError(e.what());
    }
    return d;
}

SweepConfig parse_sweep(const json& node) {
    reject_unknown(node, "sweep", {"bond_index", "values", "probe_time_us", "sizes", "ratios", "omega_weak_khz",
                                   "omega_strong_khz", "size", "transfer_resonance", "transfer_window_us"});
    SweepConfig s;
    s.bond_index = get_opt<std::size_t>(node, "bond_index", "sweep");
    if (node.contains("values")) s.values = parse_values(node.at("values"), "sweep.values");
    s.probe_time_us = get_opt<double>(node, "probe_time_us", "sweep").value_or(2.5);
    s.sizes = get_opt<std::vector<int>>(node, "sizes", "sweep").value_or(std::vector<int>{});
    if (node.contains("ratios")) s.ratios = parse_values(node.at("ratios"), "sweep.ratios");
    s.omega_weak_khz = get_opt<double>(node, "omega_weak_khz", "sweep");
    s.omega_strong_khz = get_opt<double>(node, "omega_strong_khz", "sweep");
    s.size = get_opt<std::size_t>(node, "size", "sweep");
    s.transfer_resonance = get_opt<bool>(node, "transfer_resonance", "sweep").value_or(false);
    s.transfer_window_us = get_opt<double>(node, "transfer_window_us", "sweep").value_or(0.0);
    return s;
}

SfiConfig parse_sfi(const json& node) {
    reject_unknown(node, "sfi", {"peak_field_v_cm", "time_constant_us", "width_us", "quantum_defect",
                                 "noise_fraction", "window_us", "samples", "basis_dir"});
    SfiConfig s;
    s.ramp.peak_field_v_per_cm = get_opt<double>(node, "peak_field_v_cm", "sfi").value_or(s.ramp.peak_field_v_per_cm);
    s.ramp.time_constant_us = get_opt<double>(node, "time_constant_us", "sfi").value_or(s.ramp.time_constant_us);
    s.width_us = get_opt<double>(node, "width_us", "sfi").value_or(s.width_us);
    s.quantum_defect = get_opt<double>(node, "quantum_defect", "sfi").value_or(s.quantum_defect);
    s.noise_fraction = get_opt<double>(node, "noise_fraction", "sfi").value_or(0.0);
    s.window_us = get_opt<double>(node, "window_us", "sfi").value_or(s.window_us);
    s.samples = get_opt<std::size_t>(node, "samples", "sfi").value_or(s.samples);
    s.basis_dir = get_opt<std::string>(node, "basis_dir", "sfi");
    if (!(s.width_us > 0.0) || !(s.window_us > 0.0) || s.samples < 2 || s.noise_fraction < 0.0) {
        throw ConfigError("sfi: width_us, window_us must be positive, samples >= 2, noise_fraction >= 0");
    }
    try {
        s.ramp.validate();
    } catch (const SpecError& e) {
        throw ConfigError(std::string("sfi: ") + e.what());
    }
    return s;
}

OutputConfig parse_output(const json& node) {
    reject_unknown(node, "output", {"dir", "stem", "long_format"});
    OutputConfig o;
    o.dir = get_opt<std::string>(node, "dir", "output");
    o.stem = get_opt<std::string>(node, "stem", "output").value_or(o.stem);
    o.long_format = get_opt<bool>(node, "long_format", "output").value_or(false);
    if (o.stem.empty() || o.stem.find('/') != std::string::npos) throw ConfigError("output.stem: must be a plain file name");
    return o;
}

}  // namespace

std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::evolve: return "evolve";
        case Experiment::sweep_edge_detuning: return "sweep_edge_detuning";
        case Experiment::sweep_protection: return "sweep_protection";
        case Experiment::splitting_vs_size: return "splitting_vs_size";
        case Experiment::dressed_scan: return "dressed_scan";
        case Experiment::sfi_pipeline: return "sfi_pipeline";
    }
    return "unknown";
}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object() || root.empty()) throw ConfigError("config: empty or not an object; 'experiment' is required");
    reject_unknown(root, "", {"experiment", "lattice", "initial_site", "time", "decoherence", "fractional",
                              "sweep", "sfi", "output"});
    if (!root.contains("experiment")) throw ConfigError("experiment: missing");

    RunConfig c;
    c.experiment = parse_experiment(get_as<std::string>(root, "experiment", ""));
    if (root.contains("lattice")) c.lattice = parse_lattice(root.at("lattice"));
    c.initial_site = get_opt<int>(root, "initial_site", "");
    if (root.contains("time")) c.time = parse_time(root.at("time"));
    if (root.contains("decoherence")) c.decoherence = parse_decoherence(root.at("decoherence"));
    c.fractional = get_opt<bool>(root, "fractional", "").value_or(false);
    if (root.contains("sweep")) c.sweep = parse_sweep(root.at("sweep"));
    if (root.contains("sfi")) c.sfi = parse_sfi(root.at("sfi"));
    if (root.contains("output")) c.output = parse_output(root.at("output"));
    validate_config(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void validate_config(const RunConfig& c) {
    std::vector<std::string> missing;
    const bool has_sweep = c.sweep.has_value();
    auto need = [&](bool ok, const char* field) {
        if (!ok) missing.emplace_back(field);
    };

    switch (c.experiment) {
        case Experiment::evolve:
        case Experiment::sfi_pipeline:
            need(c.lattice.has_value(), "lattice");
            need(c.initial_site.has_value(), "initial_site");
            need(c.time.has_value(), "time");
            break;
        case Experiment::sweep_edge_detuning:
        case Experiment::sweep_protection:
            need(c.lattice.has_value(), "lattice");
            need(has_sweep && c.sweep->bond_index.has_value(), "sweep.bond_index");
            need(has_sweep && !c.sweep->values.empty(), "sweep.values");
            break;
        case Experiment::splitting_vs_size:
            need(has_sweep && c.sweep->omega_weak_khz.has_value(), "sweep.omega_weak_khz");
            need(has_sweep && c.sweep->omega_strong_khz.has_value(), "sweep.omega_strong_khz");
            need(has_sweep && !c.sweep->sizes.empty(), "sweep.sizes");
            break;
        case Experiment::dressed_scan:
            need(has_sweep && c.sweep->omega_weak_khz.has_value(), "sweep.omega_weak_khz");
            need(has_sweep && !c.sweep->ratios.empty(), "sweep.ratios");
            need(has_sweep && c.sweep->size.has_value(), "sweep.size");
            break;
    }
    if (!missing.empty()) {
        std::string msg = "experiment '" + to_string(c.experiment) + "' is missing required fields:";
        for (const auto& m : missing) msg += " " + m;
        throw ConfigError(msg);
    }
    if (c.lattice && c.initial_site) {
        try {
            c.lattice->index_of(*c.initial_site);
        } catch (const SpecError& e) {
            throw ConfigError(std::string("initial_site: ") + e.what());
        }
    }
    if (c.experiment == Experiment::sweep_protection && c.lattice && c.initial_site &&
        *c.initial_site != c.lattice->site_labels.front()) {
        throw ConfigError("initial_site: sweep_protection always starts from the first (edge) site");
    }
    if (c.lattice && has_sweep && c.sweep->bond_index && *c.sweep->bond_index >= c.lattice->couplings_khz.size()) {
        throw ConfigError("sweep.bond_index: out of range for the lattice");
    }
}

}  // namespace rydssh
