#pragma once

// Flat `key = value` configuration: one assignment per line, `#` starts a
// comment, values in SI units. Keys are documented in config_keys().

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sshkit/errors.hpp"
#include "sshkit/harvest.hpp"
#include "sshkit/models.hpp"
#include "sshkit/transient.hpp"

namespace sshkit {

/// File could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct KeyDoc {
    std::string_view key;
    std::string_view unit;
    std::string_view help;
};

inline const std::vector<KeyDoc>& config_keys() {
    static const std::vector<KeyDoc> keys = {
        {"technique", "-", "baseline | sshi | sshc | em_sshc"},
        {"Cp", "F", "piezo capacitance (alternative to the geometry keys)"},
        {"Rp", "ohm", "dielectric loss resistance, default inf"},
        {"s11", "m^2/N", "compliance"},
        {"d31", "C/N", "piezoelectric coupling (sign = poling)"},
        {"eps33", "F/m", "permittivity"},
        {"L1", "m", "length entering Cm = s11*L1/A1"},
        {"L2", "m", "length entering N = d31*L2/s11"},
        {"L3", "m", "thickness entering C0 = A3*eps33/L3"},
        {"A1", "m^2", "cross-section entering Cm"},
        {"A3", "m^2", "electrode area entering C0"},
        {"I0", "A", "peak source current I31"},
        {"F0", "N", "peak force (needs geometry; converted with I31 = N*Cm*dF/dt)"},
        {"f", "Hz", "excitation frequency"},
        {"phase", "rad", "excitation phase, default 0"},
        {"Rload", "ohm", "load resistance, inf = open circuit"},
        {"L", "H", "SSHI inductance"},
        {"Rs", "ohm", "inductor series resistance, default 0"},
        {"Q", "-", "inductor quality factor at 1/sqrt(L*Cp) (alternative to Rs)"},
        {"C_add", "F", "SSHC / EM-SSHC switched capacitor"},
        {"Vamp", "V", "EM source voltage amplitude"},
        {"Lm", "H", "EM coil inductance"},
        {"Rm", "ohm", "EM coil resistance, default 0"},
        {"R_series", "ohm", "EM series load resistance, default 0"},
        {"R_par", "ohm", "EM capacitor leakage resistance, default inf"},
        {"dt", "s", "integration step, 0 = auto"},
        {"cycles", "-", "excitation periods to simulate, default 200"},
        {"steady_tol", "-", "relative amplitude spread for steady state, default 1e-3"},
        {"switch_on_duration", "s", "switch-closed time (default LC half period / 10*R_on*Cp)"},
        {"R_on", "ohm", "switch on-resistance, default 0"},
        {"trigger", "-", "auto | displacement | voltage"},
        {"carry_over_vadd", "-", "true keeps C_add charge between SSHC events"},
        {"record_stride", "-", "record every n-th step in the waveform CSV, default 1"},
        {"record_cycles", "-", "record only the last n periods, 0 = all"},
        {"gross", "W", "gross harvested power for the budget"},
        {"acdc_overhead", "W", "rectifier consumption, default 60e-9"},
        {"control_overhead", "W", "switch control consumption, default 300e-9"},
        {"sweep.param", "-", "Rload | Rs | L | C_add | T"},
        {"sweep.evaluator", "-",
         "ANALYTIC_SSHI_EQ5 | ANALYTIC_SSHI_ENVELOPE | ANALYTIC_SSHC | ANALYTIC_SSHI_INTEGRATED | "
         "ORACLE_SSHI | ORACLE_SSHC"},
        {"sweep.metric", "-", "amplification | net_power"},
        {"sweep.grid", "-", "lin:<start>:<stop>:<n> | log:<start>:<stop>:<n> | v1,v2,..."},
        {"compare.tol", "-", "relative gap accepted as tracking (default 0.10 sshi, 0.05 sshc)"},
    };
    return keys;
}

inline std::string config_keys_help() {
    std::ostringstream os;
    os << "Config keys (SI units):\n";
    for (const auto& k : config_keys()) {
        os << "  " << k.key;
        for (std::size_t i = k.key.size(); i < 20; ++i)
            os << ' ';
        os << '[' << k.unit << "] " << k.help << '\n';
    }
    return os.str();
}

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return std::string(s.substr(b, e - b));
}

inline bool known_key(std::string_view key) {
    for (const auto& k : config_keys())
        if (k.key == key)
            return true;
    return false;
}

}  // namespace detail

/// Parsed key/value pairs. Later `set` calls override earlier values.
class ConfigMap {
public:
    void set(const std::string& key, const std::string& value) {
        if (!detail::known_key(key))
            throw ValidationError(key, "unknown config key");
        values_[key] = value;
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    const std::string& raw(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end())
            throw ValidationError(key, "missing required key");
        return it->second;
    }

    double number(const std::string& key) const {
        const std::string& s = raw(key);
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0' || std::isnan(v))
            throw ValidationError(key, "not a number: '" + s + "'");
        return v;
    }

    double number_or(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }

    std::optional<double> optional_number(const std::string& key) const {
        if (!has(key))
            return std::nullopt;
        return number(key);
    }

    long integer(const std::string& key, long fallback) const {
        if (!has(key))
            return fallback;
        const std::string& s = raw(key);
        char* end = nullptr;
        const long v = std::strtol(s.c_str(), &end, 10);
        if (end == s.c_str() || *end != '\0')
            throw ValidationError(key, "not an integer: '" + s + "'");
        return v;
    }

    bool boolean(const std::string& key, bool fallback) const {
        if (!has(key))
            return fallback;
        const std::string& s = raw(key);
        if (s == "true" || s == "1" || s == "yes")
            return true;
        if (s == "false" || s == "0" || s == "no")
            return false;
        throw ValidationError(key, "not a boolean: '" + s + "'");
    }

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

inline ConfigMap parse_config(std::string_view text) {
    ConfigMap cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    std::map<std::string, int> seen;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string body = detail::trim(line);
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ValidationError("line " + std::to_string(lineno), "expected 'key = value'");
        const std::string key = detail::trim(std::string_view(body).substr(0, eq));
        const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
        if (key.empty() || value.empty())
            throw ValidationError("line " + std::to_string(lineno), "empty key or value");
        if (seen.count(key))
            throw ValidationError(key, "duplicate key (first on line " +
                                           std::to_string(seen[key]) + ")");
        seen[key] = lineno;
        cfg.set(key, value);
    }
    return cfg;
}

inline ConfigMap load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

/// Applies a `key=value` override.
inline void apply_override(ConfigMap& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ValidationError(assignment, "--set expects key=value");
    const std::string key = detail::trim(std::string_view(assignment).substr(0, eq));
    const std::string value = detail::trim(std::string_view(assignment).substr(eq + 1));
    if (value.empty())
        throw ValidationError(key, "empty value");
    cfg.set(key, value);
}

/// `lin:a:b:n`, `log:a:b:n` or a comma-separated list.
inline std::vector<double> parse_grid(const std::string& spec) {
    auto to_num = [&](const std::string& s) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (s.empty() || *end != '\0' || std::isnan(v))
            throw ValidationError("grid", "bad number '" + s + "' in '" + spec + "'");
        return v;
    };
    std::vector<double> out;
    if (spec.rfind("lin:", 0) == 0 || spec.rfind("log:", 0) == 0) {
        const bool log = spec[1] == 'o';
        std::vector<std::string> parts;
        std::stringstream ss(spec.substr(4));
        std::string part;
        while (std::getline(ss, part, ':'))
            parts.push_back(part);
        if (parts.size() != 3)
            throw ValidationError("grid", "expected <kind>:<start>:<stop>:<n>");
        const double a = to_num(parts[0]);
        const double b = to_num(parts[1]);
        char* end = nullptr;
        const long n = std::strtol(parts[2].c_str(), &end, 10);
        if (*end != '\0' || n < 1)
            throw ValidationError("grid", "point count must be a positive integer");
        if (log && (!(a > 0.0) || !(b > 0.0)))
            throw ValidationError("grid", "log grid needs positive bounds");
        for (long i = 0; i < n; ++i) {
            const double u = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
            out.push_back(log ? std::exp(std::log(a) + u * (std::log(b) - std::log(a)))
                              : a + u * (b - a));
        }
        if (n > 1)
            out.back() = b;
        if (!out.empty())
            out.front() = a;
    } else {
        std::stringstream ss(spec);
        std::string part;
        while (std::getline(ss, part, ','))
            out.push_back(to_num(detail::trim(part)));
    }
    if (out.empty())
        throw ValidationError("grid", "empty grid");
    return out;
}

// Typed views of a ConfigMap. Numeric validation stays with the domain types.

inline bool has_geometry(const ConfigMap& c) {
    for (const char* k : {"s11", "d31", "eps33", "L1", "L2", "L3", "A1", "A3"})
        if (c.has(k))
            return true;
    return false;
}

inline PiezoMaterialGeometry geometry_from(const ConfigMap& c) {
    PiezoMaterialGeometry g;
    g.s11 = c.number("s11");
    g.d31 = c.number("d31");
    g.eps33 = c.number("eps33");
    g.L1 = c.number("L1");
    g.L2 = c.number("L2");
    g.L3 = c.number("L3");
    g.A1 = c.number("A1");
    g.A3 = c.number("A3");
    g.validate();
    return g;
}

inline PiezoEquivalentCircuit circuit_from(const ConfigMap& c) {
    const double rp = c.number_or("Rp", kInf);
    if (has_geometry(c)) {
        if (c.has("Cp"))
            throw ValidationError("Cp", "conflicts with the geometry keys; give one or the other");
        return derive_equivalent_circuit(geometry_from(c), rp);
    }
    return PiezoEquivalentCircuit::from_capacitance(c.number("Cp"), rp);
}

inline ExcitationSpec excitation_from(const ConfigMap& c, const PiezoEquivalentCircuit& circ) {
    const double f = c.number("f");
    const double phase = c.number_or("phase", 0.0);
    if (c.has("F0")) {
        if (c.has("I0"))
            throw ValidationError("F0", "conflicts with I0; give one or the other");
        if (!has_geometry(c))
            throw ValidationError("F0", "needs the geometry keys to convert force to current");
        return ExcitationSpec::from_force(circ, c.number("F0"), f, phase);
    }
    ExcitationSpec e{Waveform::sinusoidal, c.number("I0"), f, phase};
    e.validate();
    return e;
}

inline Load load_from(const ConfigMap& c) {
    Load l{c.number_or("Rload", kInf)};
    l.validate();
    return l;
}

inline IntegratedInductor inductor_from(const ConfigMap& c, double Cp) {
    IntegratedInductor ind{c.number("L"), 0.0};
    detail::require_positive_finite(ind.L, "L");
    if (c.has("Q")) {
        if (c.has("Rs"))
            throw ValidationError("Q", "conflicts with Rs; give one or the other");
        ind.Rs = series_resistance_for_q(ind.L, 1.0 / std::sqrt(ind.L * Cp), c.number("Q"));
    } else {
        ind.Rs = c.number_or("Rs", 0.0);
    }
    ind.validate();
    return ind;
}

inline Trigger trigger_from(const ConfigMap& c) {
    if (!c.has("trigger"))
        return Trigger::automatic;
    const std::string& s = c.raw("trigger");
    if (s == "auto")
        return Trigger::automatic;
    if (s == "displacement")
        return Trigger::displacement;
    if (s == "voltage")
        return Trigger::voltage;
    throw ValidationError("trigger", "expected auto, displacement or voltage");
}

inline SimConfig sim_config_from(const ConfigMap& c) {
    SimConfig s;
    s.dt = c.number_or("dt", 0.0);
    s.cycles = static_cast<int>(c.integer("cycles", s.cycles));
    s.steady_tol = c.number_or("steady_tol", s.steady_tol);
    s.switch_on_duration = c.optional_number("switch_on_duration");
    s.R_on = c.number_or("R_on", 0.0);
    s.trigger = trigger_from(c);
    s.carry_over_vadd = c.boolean("carry_over_vadd", false);
    const long stride = c.integer("record_stride", 1);
    if (stride < 1)
        throw ValidationError("record_stride", "must be >= 1");
    s.record_stride = static_cast<std::size_t>(stride);
    s.record_cycles = static_cast<int>(c.integer("record_cycles", 0));
    s.validate();
    return s;
}

inline SweepParam sweep_param_from(const ConfigMap& c) {
    const std::string& s = c.raw("sweep.param");
    for (auto p : {SweepParam::Rload, SweepParam::Rs, SweepParam::L, SweepParam::C_add, SweepParam::T})
        if (to_string(p) == s)
            return p;
    throw ValidationError("sweep.param", "unknown parameter '" + s + "'");
}

inline Evaluator evaluator_from(const ConfigMap& c) {
    const std::string& s = c.raw("sweep.evaluator");
    for (auto e : {Evaluator::analytic_sshi_eq5, Evaluator::analytic_sshi_envelope,
                   Evaluator::analytic_sshc, Evaluator::analytic_sshi_integrated,
                   Evaluator::oracle_sshi, Evaluator::oracle_sshc})
        if (to_string(e) == s)
            return e;
    throw ValidationError("sweep.evaluator", "unknown evaluator '" + s + "'");
}

inline SweepMetric metric_from(const ConfigMap& c) {
    if (!c.has("sweep.metric"))
        return SweepMetric::amplification;
    const std::string& s = c.raw("sweep.metric");
    if (s == "amplification")
        return SweepMetric::amplification;
    if (s == "net_power")
        return SweepMetric::net_power;
    throw ValidationError("sweep.metric", "expected amplification or net_power");
}

/// Piezo scenario; inductor and C_add are filled only when their keys exist.
inline Scenario scenario_from(const ConfigMap& c) {
    Scenario s;
    s.circuit = circuit_from(c);
    s.excitation = excitation_from(c, s.circuit);
    s.load = load_from(c);
    if (c.has("L"))
        s.inductor = inductor_from(c, s.circuit.Cp());
    if (c.has("C_add"))
        s.c_add = c.number("C_add");
    s.sim = sim_config_from(c);
    return s;
}

}  // namespace sshkit
