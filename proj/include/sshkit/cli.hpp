#pragma once

// Command-line front end. run_cli() is the whole program minus main(), so the
// test suite can drive every subcommand in-process.

#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sshkit/analytic.hpp"
#include "sshkit/compare.hpp"
#include "sshkit/config.hpp"
#include "sshkit/format.hpp"
#include "sshkit/harvest.hpp"
#include "sshkit/models.hpp"
#include "sshkit/transient.hpp"

namespace sshkit::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kIo = 3 };

struct Options {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_path;
    std::string grid;
    std::string json_path;
    std::optional<double> gross;
};

inline ConfigMap load(const Options& o) {
    ConfigMap cfg = o.config_path.empty() ? ConfigMap{} : load_config_file(o.config_path);
    for (const auto& kv : o.overrides)
        apply_override(cfg, kv);
    return cfg;
}

/// Opens `path` for writing, or returns nullptr when no path was given.
inline std::unique_ptr<std::ofstream> open_out(const std::string& path) {
    if (path.empty())
        return nullptr;
    auto f = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*f)
        throw IoError("cannot write '" + path + "'");
    return f;
}

/// Text goes to stdout and, with --out, also to the file.
inline void emit(const Options& o, std::ostream& out, const std::string& text) {
    out << text;
    if (auto f = open_out(o.out_path)) {
        *f << text;
        if (!*f)
            throw IoError("write failed for '" + o.out_path + "'");
    }
}

inline std::string line(std::string_view key, double v) {
    return std::string(key) + " = " + format_double(v) + "\n";
}

inline int cmd_derive(const Options& o, std::ostream& out) {
    const ConfigMap c = load(o);
    const auto circ = derive_equivalent_circuit(geometry_from(c), c.number_or("Rp", kInf));
    const double rebuilt = circ.N * circ.N * circ.Cm + circ.C0;
    std::string text;
    text += line("N", circ.N);
    text += line("Cm", circ.Cm);
    text += line("C0", circ.C0);
    text += line("C31", circ.C31);
    text += line("Rp", circ.Rp);
    text += "check: N^2*Cm + C0 = " + format_double(rebuilt) +
            (rebuilt == circ.C31 ? " (matches C31)\n" : " (MISMATCH)\n");
    emit(o, out, text);
    return kOk;
}

inline int cmd_analytic(const Options& o, std::ostream& out) {
    const ConfigMap c = load(o);
    const auto circ = circuit_from(c);
    const double cp = circ.Cp();
    const Load load = load_from(c);
    const double f = c.number("f");
    detail::require_positive_finite(f, "f");
    std::string text;
    text += line("Cp", cp);
    text += line("Rload", load.Rload);
    if (c.has("L")) {
        const IntegratedInductor ind = inductor_from(c, cp);
        const AnalyticParams p = sshi_params(ind.L, cp, load.Rload, 1.0 / f, ind.Rs);
        const auto a = sshi_amplification(p);
        text += line("L", ind.L);
        text += line("Rs", ind.Rs);
        text += line("T", p.T);
        text += line("omega0", p.omega0);
        text += line("lambda", p.lambda);
        text += line("Q", p.Q);
        text += line("alpha_inv", p.alpha_inv);
        text += line("alpha_rc", p.alpha_rc);
        text += line("alpha_a", p.alpha_a);
        text += "sshi_eq5 = " +
                (a.literal.defined() ? format_double(*a.literal.value) : std::string("undefined")) +
                "\n";
        text += line("sshi_envelope", *a.envelope.value);
    }
    const double ts = switch_interval(f);
    text += line("sshc_T", ts);
    text += line("sshc", *sshc_amplification(ts, load.Rload, cp).value);
    emit(o, out, text);
    return kOk;
}

inline void write_waveform_csv(std::ostream& os, const SimResult& r) {
    os << "t,Vp,IL,Vadd,switch\n";
    for (const auto& s : r.waveform)
        os << format_double(s.t) << ',' << format_double(s.Vp) << ',' << format_double(s.IL) << ','
           << format_double(s.Vadd) << ',' << (s.switch_closed ? 1 : 0) << '\n';
}

inline int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
    const ConfigMap c = load(o);
    const std::string technique = c.has("technique") ? c.raw("technique") : "sshi";
    SimConfig sim = sim_config_from(c);
    sim.record_waveform = !o.out_path.empty();

    SimResult r;
    if (technique == "em_sshc") {
        EmEquivalentCircuit em{c.number("Vamp"), c.number("f"), c.number("Lm"),
                               c.number_or("Rm", 0.0)};
        SeriesLoad load{c.number_or("R_series", 0.0)};
        SeriesSwitchCapacitor cap{c.number("C_add"), c.number_or("R_par", kInf)};
        r = simulate_em_sshc(em, load, cap, sim);
    } else {
        const auto circ = circuit_from(c);
        const auto exc = excitation_from(c, circ);
        const Load load = load_from(c);
        if (technique == "baseline")
            r = simulate_baseline(circ, exc, load, sim);
        else if (technique == "sshi")
            r = simulate_sshi(circ, exc, load, inductor_from(c, circ.Cp()), sim);
        else if (technique == "sshc")
            r = simulate_sshc(circ, exc, load, c.number("C_add"), sim);
        else
            throw ValidationError("technique", "expected baseline, sshi, sshc or em_sshc");
    }
    for (const auto& w : r.warnings)
        err << "warning: " << w << '\n';

    if (auto f = open_out(o.out_path)) {
        write_waveform_csv(*f, r);
        if (!*f)
            throw IoError("write failed for '" + o.out_path + "'");
    }
    out << "technique=" << technique << " amplification=" << format_double(r.amplification)
        << " amplitude=" << format_double(r.amplitude)
        << " baseline_amplitude=" << format_double(r.baseline_amplitude)
        << " events=" << r.events.size() << " dt=" << format_double(r.dt)
        << " converged=" << (r.converged ? "true" : "false") << '\n';
    return kOk;
}

inline std::vector<double> grid_from(const Options& o, const ConfigMap& c) {
    if (!o.grid.empty())
        return parse_grid(o.grid);
    return parse_grid(c.raw("sweep.grid"));
}

inline nlohmann::json scenario_json(const Scenario& s) {
    auto num = [](double v) -> nlohmann::json {
        if (std::isfinite(v))
            return v;
        return format_double(v);
    };
    nlohmann::json j;
    j["Cp"] = num(s.circuit.Cp());
    j["Rp"] = num(s.circuit.Rp);
    j["I0"] = num(s.excitation.amplitude);
    j["f"] = num(s.excitation.frequency);
    j["phase"] = num(s.excitation.phase);
    j["Rload"] = num(s.load.Rload);
    j["L"] = num(s.inductor.L);
    j["Rs"] = num(s.inductor.Rs);
    j["C_add"] = num(s.c_add);
    j["dt"] = num(s.sim.dt);
    j["cycles"] = s.sim.cycles;
    j["steady_tol"] = num(s.sim.steady_tol);
    j["R_on"] = num(s.sim.R_on);
    if (s.sim.switch_on_duration)
        j["switch_on_duration"] = num(*s.sim.switch_on_duration);
    return j;
}

inline void write_sweep_json(std::ostream& os, const SweepTable& t) {
    nlohmann::json j;
    j["swept"] = std::string(to_string(t.spec.swept));
    j["evaluator"] = std::string(to_string(t.spec.evaluator));
    j["metric"] = std::string(to_string(t.spec.metric));
    j["acdc_overhead"] = t.spec.acdc_overhead;
    j["control_overhead"] = t.spec.control_overhead;
    j["fixed"] = scenario_json(t.spec.fixed);
    j["rows"] = nlohmann::json::array();
    for (const auto& r : t.rows) {
        nlohmann::json row;
        row["swept_value"] = r.swept_value;
        if (std::isfinite(r.result))
            row["result"] = r.result;
        else
            row["result"] = format_double(r.result);
        row["converged"] = r.converged;
        if (!r.error.empty())
            row["error"] = r.error;
        j["rows"].push_back(row);
    }
    os << j.dump(2) << '\n';
}

inline int cmd_sweep(const Options& o, std::ostream& out) {
    const ConfigMap c = load(o);
    SweepSpec spec;
    spec.swept = sweep_param_from(c);
    spec.grid = grid_from(o, c);
    spec.evaluator = evaluator_from(c);
    spec.metric = metric_from(c);
    spec.acdc_overhead = c.number_or("acdc_overhead", kDefaultAcDcOverhead);
    spec.control_overhead = c.number_or("control_overhead", kDefaultControlOverhead);
    spec.fixed = scenario_from(c);
    const SweepTable table = run_sweep(spec);

    std::ostringstream csv;
    write_sweep_csv(csv, table);
    if (auto f = open_out(o.out_path)) {
        *f << csv.str();
        if (!*f)
            throw IoError("write failed for '" + o.out_path + "'");
    } else {
        out << csv.str();
    }
    if (auto f = open_out(o.json_path)) {
        write_sweep_json(*f, table);
        if (!*f)
            throw IoError("write failed for '" + o.json_path + "'");
    }
    return kOk;
}

inline int cmd_compare(const Options& o, std::ostream& out) {
    const ConfigMap c = load(o);
    const std::string technique = c.has("technique") ? c.raw("technique") : "sshi";
    CompareTechnique tech;
    if (technique == "sshi")
        tech = CompareTechnique::sshi;
    else if (technique == "sshc")
        tech = CompareTechnique::sshc;
    else
        throw ValidationError("technique", "compare supports sshi or sshc");
    if (tech == CompareTechnique::sshi)
        (void)c.number("L");
    else
        (void)c.number("C_add");

    const Scenario base = scenario_from(c);
    const SweepParam param = sweep_param_from(c);
    std::vector<LabeledScenario> points;
    for (double v : grid_from(o, c))
        points.push_back({v, with_parameter(base, param, v)});
    const double tol =
        c.number_or("compare.tol", tech == CompareTechnique::sshi ? 0.10 : 0.05);
    const CompareReport rep = compare(tech, points, tol);

    std::ostringstream text;
    write_compare_report(text, rep);
    out << text.str();
    if (auto f = open_out(o.out_path)) {
        write_compare_csv(*f, rep);
        if (!*f)
            throw IoError("write failed for '" + o.out_path + "'");
    }
    return kOk;
}

inline int cmd_budget(const Options& o, std::ostream& out) {
    const ConfigMap c = load(o);
    double gross = 0.0;
    if (o.gross)
        gross = *o.gross;
    else
        gross = c.number("gross");
    const PowerBudget b = power_budget(gross, c.number_or("acdc_overhead", kDefaultAcDcOverhead),
                                       c.number_or("control_overhead", kDefaultControlOverhead));
    std::string text;
    text += line("gross", b.gross);
    text += line("acdc_overhead", b.acdc_overhead);
    text += line("control_overhead", b.control_overhead);
    text += line("net", b.net);
    emit(o, out, text);
    return kOk;
}

/// Runs one command line. args[0] is the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Synchronized-switch harvesting models: closed forms and transient oracle",
                 "sshkit"};
    app.footer(config_keys_help());
    app.require_subcommand(1);

    Options opts;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "key = value parameter file");
        sub->add_option("--set", opts.overrides, "override one key (key=value), repeatable");
        sub->add_option("--out", opts.out_path, "output file");
        sub->footer(config_keys_help());
    };
    auto* derive = app.add_subcommand("derive", "equivalent circuit from material constants");
    auto* analytic = app.add_subcommand("analytic", "closed-form SSHI / SSHC amplification");
    auto* simulate = app.add_subcommand("simulate", "transient simulation, waveform CSV via --out");
    auto* compare_cmd = app.add_subcommand("compare", "closed forms against the simulator");
    auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
    auto* budget = app.add_subcommand("budget", "net power after converter overheads");
    for (auto* s : {derive, analytic, simulate, compare_cmd, sweep, budget})
        add_common(s);
    for (auto* s : {compare_cmd, sweep})
        s->add_option("--grid", opts.grid, "lin|log:<start>:<stop>:<n> or v1,v2,...");
    sweep->add_option("--json", opts.json_path, "JSON variant with the full parameter context");
    budget->add_option("--gross", opts.gross, "gross harvested power (W)");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kValidation;
    }

    try {
        if (*derive)
            return cmd_derive(opts, out);
        if (*analytic)
            return cmd_analytic(opts, out);
        if (*simulate)
            return cmd_simulate(opts, out, err);
        if (*compare_cmd)
            return cmd_compare(opts, out);
        if (*sweep)
            return cmd_sweep(opts, out);
        if (*budget)
            return cmd_budget(opts, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    }
    return kValidation;
}

}  // namespace sshkit::cli
