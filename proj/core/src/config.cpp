#include "mejpa/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mejpa/errors.hpp"

namespace mejpa {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config: " + path + ": " + what);
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         const std::set<std::string>& allowed) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) fail(path + "." + key, "unknown key");
    }
}

const json* find(const json& obj, const std::string& key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double require_number(const json& obj, const std::string& path, const std::string& key) {
    const json* v = find(obj, key);
    if (!v) fail(path + "." + key, "missing required key");
    if (!v->is_number()) fail(path + "." + key, "expected a number");
    return v->get<double>();
}

double number_or(const json& obj, const std::string& path, const std::string& key,
                 double fallback, std::vector<std::string>* defaults) {
    const json* v = find(obj, key);
    if (!v) {
        if (defaults) {
            std::ostringstream os;
            os << path << "." << key << "=" << fallback;
            defaults->push_back(os.str());
        }
        return fallback;
    }
    if (!v->is_number()) fail(path + "." + key, "expected a number");
    return v->get<double>();
}

std::optional<double> optional_number(const json& obj, const std::string& path,
                                      const std::string& key) {
    const json* v = find(obj, key);
    if (!v || v->is_null()) return std::nullopt;
    if (!v->is_number()) fail(path + "." + key, "expected a number");
    return v->get<double>();
}

int int_or(const json& obj, const std::string& path, const std::string& key,
           int fallback) {
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_number_integer()) fail(path + "." + key, "expected an integer");
    return v->get<int>();
}

bool bool_or(const json& obj, const std::string& path, const std::string& key,
             bool fallback) {
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_boolean()) fail(path + "." + key, "expected a boolean");
    return v->get<bool>();
}

std::string require_string(const json& obj, const std::string& path,
                           const std::string& key) {
    const json* v = find(obj, key);
    if (!v) fail(path + "." + key, "missing required key");
    if (!v->is_string()) fail(path + "." + key, "expected a string");
    return v->get<std::string>();
}

LineSection parse_section(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    reject_unknown_keys(j, path, {"z0_ohm", "f_ref_hz", "theta_ref_rad", "loss_db"});
    LineSection s;
    s.z0 = require_number(j, path, "z0_ohm");
    s.f_ref = require_number(j, path, "f_ref_hz");
    s.theta_ref = require_number(j, path, "theta_ref_rad");
    s.loss_db = number_or(j, path, "loss_db", 0.0, nullptr);
    return s;
}

PhysicalConstants parse_constants(const json* j, const std::string& path,
                                  std::vector<std::string>* defaults) {
    PhysicalConstants c;
    if (!j) {
        defaults->push_back(path + "=SI defaults");
        return c;
    }
    if (!j->is_object()) fail(path, "expected an object");
    reject_unknown_keys(*j, path, {"electron_charge_c", "planck_h_js", "boltzmann_k_jk",
                                   "flux_quantum_wb", "al_gap_ev"});
    c.electron_charge = number_or(*j, path, "electron_charge_c", c.electron_charge, defaults);
    c.planck_h = number_or(*j, path, "planck_h_js", c.planck_h, defaults);
    c.boltzmann_k = number_or(*j, path, "boltzmann_k_jk", c.boltzmann_k, defaults);
    c.flux_quantum = number_or(*j, path, "flux_quantum_wb",
                               c.planck_h / (2.0 * c.electron_charge), defaults);
    c.al_gap_ev = number_or(*j, path, "al_gap_ev", c.al_gap_ev, defaults);
    return c;
}

DesignConfig parse_design(const json& j, std::vector<std::string>* defaults) {
    const std::string path = "design";
    if (!j.is_object()) fail(path, "expected an object");
    reject_unknown_keys(j, path,
                        {"constants", "squid", "junction", "transformer", "pump", "grid"});

    DesignConfig d;
    d.constants = parse_constants(find(j, "constants"), path + ".constants", defaults);

    const json* junction = find(j, "junction");
    if (junction) {
        const std::string jp = path + ".junction";
        if (!junction->is_object()) fail(jp, "expected an object");
        reject_unknown_keys(*junction, jp,
                            {"area_um2", "j_c_a_per_um2", "c_per_area_f_per_um2",
                             "ra_ohm_um2"});
        FabProcess fab;
        fab.j_c = number_or(*junction, jp, "j_c_a_per_um2", 0.0, nullptr);
        fab.c_per_area = require_number(*junction, jp, "c_per_area_f_per_um2");
        fab.ra_product = number_or(*junction, jp, "ra_ohm_um2", 0.0, nullptr);
        const double area = require_number(*junction, jp, "area_um2");
        const JunctionParams one = junction_from_fab(area, fab, d.constants);
        d.junctions = std::make_pair(one, one);
    }

    const json* squid = find(j, "squid");
    if (squid) {
        const std::string sp = path + ".squid";
        if (!squid->is_object()) fail(sp, "expected an object");
        reject_unknown_keys(*squid, sp,
                            {"i_c_total_a", "c_total_f", "l_stray_h", "flux_dc_phi0"});
        d.squid.i_c_total = require_number(*squid, sp, "i_c_total_a");
        d.squid.c_total = require_number(*squid, sp, "c_total_f");
        d.squid.l_stray = number_or(*squid, sp, "l_stray_h", 0.0, defaults);
        d.squid.flux_dc = number_or(*squid, sp, "flux_dc_phi0", 0.0, defaults);
    } else if (d.junctions) {
        d.squid = squid_from_junctions(d.junctions->first, d.junctions->second);
        defaults->push_back(path + ".squid=derived from design.junction");
    } else {
        fail(path + ".squid", "missing required key");
    }

    const json* transformer = find(j, "transformer");
    if (transformer) {
        const std::string tp = path + ".transformer";
        if (!transformer->is_object()) fail(tp, "expected an object");
        reject_unknown_keys(*transformer, tp,
                            {"source_impedance_ohm", "sections", "ripple_segment"});
        d.transformer.source_impedance =
            number_or(*transformer, tp, "source_impedance_ohm", 50.0, defaults);
        const json* sections = find(*transformer, "sections");
        if (sections) {
            if (!sections->is_array()) fail(tp + ".sections", "expected an array");
            int idx = 0;
            for (const auto& s : *sections) {
                std::ostringstream sp;
                sp << tp << ".sections[" << idx++ << "]";
                d.transformer.sections.push_back(parse_section(s, sp.str()));
            }
        }
        const json* ripple = find(*transformer, "ripple_segment");
        if (ripple && !ripple->is_null()) {
            d.transformer.ripple_segment = parse_section(*ripple, tp + ".ripple_segment");
        }
    } else {
        defaults->push_back(path + ".transformer=bare 50 Ohm source");
    }

    const json* pump = find(j, "pump");
    if (pump) {
        const std::string pp = path + ".pump";
        if (!pump->is_object()) fail(pp, "expected an object");
        reject_unknown_keys(*pump, pp,
                            {"f_pump_hz", "delta_phi", "phase_rad", "p_pump_dbm",
                             "flux_per_sqrt_watt"});
        d.pump.f_pump = number_or(*pump, pp, "f_pump_hz", 0.0, defaults);
        d.pump.phase = number_or(*pump, pp, "phase_rad", 0.0, nullptr);
        d.pump.p_pump_dbm = optional_number(*pump, pp, "p_pump_dbm");
        const auto depth = optional_number(*pump, pp, "delta_phi");
        const auto coupling = optional_number(*pump, pp, "flux_per_sqrt_watt");
        if (depth) {
            d.pump.delta_phi = *depth;
        } else if (d.pump.p_pump_dbm && coupling) {
            // on-chip power to flux depth through the user-supplied coupling
            const double watts = std::pow(10.0, (*d.pump.p_pump_dbm - 30.0) / 10.0);
            d.pump.delta_phi = *coupling * std::sqrt(watts);
            defaults->push_back(pp + ".delta_phi=converted from p_pump_dbm");
        } else if (d.pump.p_pump_dbm) {
            fail(pp, "p_pump_dbm given without delta_phi or flux_per_sqrt_watt; the "
                     "power-to-flux coupling is device specific and is never guessed");
        } else {
            d.pump.delta_phi = 0.0;
            defaults->push_back(pp + ".delta_phi=0");
        }
    } else {
        defaults->push_back(path + ".pump=off");
    }

    const json* grid = find(j, "grid");
    if (grid) {
        const std::string gp = path + ".grid";
        if (!grid->is_object()) fail(gp, "expected an object");
        reject_unknown_keys(*grid, gp, {"f_start_hz", "f_stop_hz", "points"});
        d.grid.f_start = require_number(*grid, gp, "f_start_hz");
        d.grid.f_stop = require_number(*grid, gp, "f_stop_hz");
        d.grid.points = int_or(*grid, gp, "points", 1001);
    }
    return d;
}

NoiseSpec parse_noise(const json& j) {
    const std::string path = "noise";
    if (!j.is_object()) fail(path, "expected an object");
    reject_unknown_keys(j, path,
                        {"dsnr_linear", "dsnr_db", "trace_on", "trace_off", "g_jpa_linear",
                         "g_jpa_db", "t_hemt_k", "y_factor", "t_in_k", "f_hz"});
    NoiseSpec n;
    n.dsnr_linear = optional_number(j, path, "dsnr_linear");
    n.dsnr_db = optional_number(j, path, "dsnr_db");
    if (find(j, "trace_on")) n.trace_on = require_string(j, path, "trace_on");
    if (find(j, "trace_off")) n.trace_off = require_string(j, path, "trace_off");
    n.g_jpa_linear = optional_number(j, path, "g_jpa_linear");
    n.g_jpa_db = optional_number(j, path, "g_jpa_db");
    n.t_hemt_k = optional_number(j, path, "t_hemt_k");
    const json* yf = find(j, "y_factor");
    if (yf && !yf->is_null()) {
        const std::string yp = path + ".y_factor";
        if (!yf->is_object()) fail(yp, "expected an object");
        reject_unknown_keys(*yf, yp, {"t_hot_k", "t_cold_k", "p_hot", "p_cold"});
        YFactorInputs in;
        in.t_hot = require_number(*yf, yp, "t_hot_k");
        in.t_cold = require_number(*yf, yp, "t_cold_k");
        in.p_hot = require_number(*yf, yp, "p_hot");
        in.p_cold = require_number(*yf, yp, "p_cold");
        n.y_factor = in;
    }
    n.t_in_k = optional_number(j, path, "t_in_k");
    n.f_hz = number_or(j, path, "f_hz", 0.0, nullptr);
    return n;
}

RunConfig parse_validated(const json& j, const std::string& source_dir) {
    if (!j.is_object()) fail("<root>", "expected a JSON object");
    reject_unknown_keys(j, "<root>",
                        {"design", "tune", "gain", "sweep", "optimize", "noise", "output"});

    RunConfig cfg;
    cfg.source_dir = source_dir;

    const json* design = find(j, "design");
    if (!design) fail("design", "missing required key");
    cfg.design = parse_design(*design, &cfg.defaults_applied);

    if (const json* t = find(j, "tune")) {
        const std::string path = "tune";
        if (!t->is_object()) fail(path, "expected an object");
        reject_unknown_keys(*t, path, {"flux_start_phi0", "flux_stop_phi0", "points"});
        TuneSpec spec;
        spec.flux_start = number_or(*t, path, "flux_start_phi0", 0.0, nullptr);
        spec.flux_stop = number_or(*t, path, "flux_stop_phi0", 0.5, nullptr);
        spec.points = int_or(*t, path, "points", 251);
        if (spec.points < 2) fail(path + ".points", "need at least 2 points");
        cfg.tune = spec;
    }
    if (const json* g = find(j, "gain")) {
        const std::string path = "gain";
        if (!g->is_object()) fail(path, "expected an object");
        reject_unknown_keys(*g, path, {"target_g0_db", "f_center_hz", "threshold_db"});
        GainSpec spec;
        spec.target_g0_db = optional_number(*g, path, "target_g0_db");
        spec.f_center_hz = optional_number(*g, path, "f_center_hz");
        spec.threshold_db = number_or(*g, path, "threshold_db", 15.0, nullptr);
        cfg.gain = spec;
    }
    if (const json* s = find(j, "sweep")) {
        const std::string path = "sweep";
        if (!s->is_object()) fail(path, "expected an object");
        reject_unknown_keys(*s, path,
                            {"path", "values", "retune", "target_g0_db", "threshold_db"});
        SweepSpec spec;
        spec.path = require_string(*s, path, "path");
        const json* values = find(*s, "values");
        if (!values || !values->is_array()) fail(path + ".values", "expected an array");
        for (const auto& v : *values) {
            if (!v.is_number()) fail(path + ".values", "expected numbers");
            spec.values.push_back(v.get<double>());
        }
        spec.retune = bool_or(*s, path, "retune", false);
        spec.target_g0_db = number_or(*s, path, "target_g0_db", 20.0, nullptr);
        spec.threshold_db = number_or(*s, path, "threshold_db", 15.0, nullptr);
        cfg.sweep = spec;
    }
    if (const json* o = find(j, "optimize")) {
        const std::string path = "optimize";
        if (!o->is_object()) fail(path, "expected an object");
        reject_unknown_keys(*o, path,
                            {"mode", "free_params", "target_g0_db", "g_floor_db",
                             "ripple_cap_db"});
        OptimizeSpec spec;
        spec.mode = require_string(*o, path, "mode");
        if (spec.mode != "flatten" && spec.mode != "max_bandwidth") {
            fail(path + ".mode", "expected \"flatten\" or \"max_bandwidth\"");
        }
        const json* params = find(*o, "free_params");
        if (!params || !params->is_array() || params->empty()) {
            fail(path + ".free_params", "expected a non-empty array of parameter paths");
        }
        for (const auto& p : *params) {
            if (!p.is_string()) fail(path + ".free_params", "expected strings");
            spec.free_params.push_back(p.get<std::string>());
        }
        spec.target_g0_db = number_or(*o, path, "target_g0_db", 20.0, nullptr);
        spec.g_floor_db = number_or(*o, path, "g_floor_db", 15.0, nullptr);
        spec.ripple_cap_db = optional_number(*o, path, "ripple_cap_db");
        cfg.optimize = spec;
    }
    if (const json* n = find(j, "noise")) cfg.noise = parse_noise(*n);

    if (const json* out = find(j, "output")) {
        const std::string path = "output";
        if (!out->is_object()) fail(path, "expected an object");
        reject_unknown_keys(*out, path, {"format"});
        const std::string fmt = require_string(*out, path, "format");
        if (fmt == "csv") {
            cfg.format = TableFormat::csv;
        } else if (fmt == "json") {
            cfg.format = TableFormat::json;
        } else {
            fail(path + ".format", "expected \"csv\" or \"json\"");
        }
    }

    try {
        cfg.design.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("config: invariant violation: ") + e.what());
    }
    return cfg;
}

int line_of_offset(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::ostringstream msg;
        msg << "config: parse error at line " << line_of_offset(text, e.byte) << ": "
            << e.what();
        throw ConfigError(msg.str());
    }
    RunConfig cfg = parse_validated(j, source_dir);
    cfg.config_hash = fnv1a_hex(text);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string dir = std::filesystem::path(path).parent_path().string();
    return parse_config(buffer.str(), dir.empty() ? "." : dir);
}

}  // namespace mejpa
