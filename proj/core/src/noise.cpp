#include "mejpa/noise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mejpa/errors.hpp"

namespace mejpa {

void YFactorInputs::validate() const {
    if (t_cold < 0.0 || t_hot <= t_cold) {
        throw DomainError("YFactorInputs: need t_hot > t_cold >= 0");
    }
    if (p_cold <= 0.0 || p_hot <= p_cold) {
        throw DomainError("YFactorInputs: need p_hot > p_cold > 0");
    }
}

double y_factor_hemt(const YFactorInputs& inputs) {
    inputs.validate();
    const double y = inputs.p_hot / inputs.p_cold;
    if (y <= 1.0) throw DomainError("y_factor_hemt: Y factor must exceed 1");
    const double t = (inputs.t_hot - y * inputs.t_cold) / (y - 1.0);
    if (t < 0.0) {
        std::ostringstream msg;
        msg << "y_factor_hemt: inconsistent inputs give negative noise temperature ("
            << t << " K)";
        throw ConsistencyError(msg.str());
    }
    return t;
}

double quantum_limit_temperature(double f_hz, const PhysicalConstants& constants) {
    if (f_hz <= 0.0) throw DomainError("quantum_limit_temperature: f must be positive");
    return constants.planck_h * f_hz / (2.0 * constants.boltzmann_k);
}

double callen_welton_temperature(double f_hz, double t_phys,
                                 const PhysicalConstants& constants) {
    const double half_photon = quantum_limit_temperature(f_hz, constants);
    if (t_phys < 0.0) throw DomainError("callen_welton_temperature: t_phys must be >= 0");
    if (t_phys == 0.0) return half_photon;  // coth -> 1
    return half_photon / std::tanh(half_photon / t_phys);
}

NoiseBudget t_jpa_from_dsnr(double dsnr, double g_jpa, double t_hemt, double t_in,
                            double f_hz, const PhysicalConstants& constants) {
    if (dsnr <= 0.0) throw DomainError("t_jpa_from_dsnr: dsnr must be positive");
    if (g_jpa < 1.0) throw DomainError("t_jpa_from_dsnr: g_jpa must be >= 1");
    if (t_hemt < 0.0 || t_in < 0.0) {
        throw DomainError("t_jpa_from_dsnr: temperatures must be non-negative");
    }

    // Substituting the budget identity t_sys = t_in + t_jpa + t_hemt/g into
    // the SNR relation and collecting t_jpa:
    //   t_jpa [1 - 1/dsnr + 1/g] =
    //       (t_in + t_hemt/g)(1/dsnr - 1/g) + t_in (1/dsnr - 1)
    const double inv_d = 1.0 / dsnr;
    const double inv_g = 1.0 / g_jpa;
    const double coeff = 1.0 - inv_d + inv_g;
    if (coeff <= 0.0) {
        std::ostringstream msg;
        msg << "t_jpa_from_dsnr: unphysical regime, 1 - 1/dsnr + 1/g = " << coeff
            << " <= 0";
        throw DomainError(msg.str());
    }

    NoiseBudget budget;
    budget.dsnr = dsnr;
    budget.g_jpa = g_jpa;
    budget.t_hemt = t_hemt;
    budget.t_in = t_in;
    budget.t_jpa =
        ((t_in + t_hemt * inv_g) * (inv_d - inv_g) + t_in * (inv_d - 1.0)) / coeff;
    budget.t_sys = t_in + budget.t_jpa + t_hemt * inv_g;
    budget.sub_vacuum = budget.t_jpa < 0.0;
    if (f_hz > 0.0) budget.t_quantum = quantum_limit_temperature(f_hz, constants);
    return budget;
}

namespace {

struct TraceSnr {
    double tone;
    double floor;
};

TraceSnr trace_snr(const std::vector<TracePoint>& trace, const char* which) {
    if (trace.size() < 8) {
        throw DomainError(std::string("dsnr_from_traces: ") + which +
                          " trace has too few points");
    }
    std::vector<double> linear(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
        linear[i] = std::pow(10.0, trace[i].power_dbm / 10.0);
    }
    std::vector<double> sorted = linear;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double floor = sorted[sorted.size() / 2];
    const double tone = *std::max_element(linear.begin(), linear.end());
    if (tone < 3.0 * floor) {
        throw FitError(std::string("dsnr_from_traces: no tone detected in ") + which +
                       " trace (peak below 3x the noise floor)");
    }
    return {tone, floor};
}

}  // namespace

double dsnr_from_traces(const std::vector<TracePoint>& on_trace,
                        const std::vector<TracePoint>& off_trace) {
    if (on_trace.size() != off_trace.size()) {
        throw DomainError("dsnr_from_traces: traces do not share a frequency axis");
    }
    for (std::size_t i = 0; i < on_trace.size(); ++i) {
        if (on_trace[i].freq_hz != off_trace[i].freq_hz) {
            throw DomainError("dsnr_from_traces: traces do not share a frequency axis");
        }
    }
    const TraceSnr on = trace_snr(on_trace, "pump-on");
    const TraceSnr off = trace_snr(off_trace, "pump-off");
    return (on.tone / on.floor) / (off.tone / off.floor);
}

std::vector<TracePoint> parse_trace(std::istream& in) {
    std::vector<TracePoint> trace;
    std::string line;
    int lineno = 0;
    bool header_allowed = true;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') continue;
        for (char& ch : line) {
            if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
        }
        std::istringstream ss(line);
        TracePoint p;
        if (!(ss >> p.freq_hz >> p.power_dbm)) {
            if (header_allowed) {
                header_allowed = false;
                continue;
            }
            std::ostringstream msg;
            msg << "trace parse error at line " << lineno << ": expected two numeric columns";
            throw DomainError(msg.str());
        }
        header_allowed = false;
        trace.push_back(p);
    }
    if (trace.empty()) throw DomainError("trace parse error: no data rows");
    return trace;
}

std::vector<TracePoint> parse_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open trace file: " + path);
    return parse_trace(in);
}

}  // namespace mejpa
