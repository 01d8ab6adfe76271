#pragma once

// Power budget of the harvesting chain and the parameter-sweep engine.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "sshkit/analytic.hpp"
#include "sshkit/errors.hpp"
#include "sshkit/format.hpp"
#include "sshkit/models.hpp"
#include "sshkit/transient.hpp"

namespace sshkit {

inline constexpr double kDefaultAcDcOverhead = 60e-9;
inline constexpr double kDefaultControlOverhead = 300e-9;

/// Gross harvested power minus rectifier and switch-control consumption.
/// `net` may be negative: the harvester then costs more than it yields.
struct PowerBudget {
    double gross = 0.0;
    double acdc_overhead = kDefaultAcDcOverhead;
    double control_overhead = kDefaultControlOverhead;
    double net = 0.0;
};

inline PowerBudget power_budget(double gross, double acdc_overhead = kDefaultAcDcOverhead,
                                double control_overhead = kDefaultControlOverhead) {
    detail::require_non_negative_finite(gross, "gross");
    detail::require_non_negative_finite(acdc_overhead, "acdc_overhead");
    detail::require_non_negative_finite(control_overhead, "control_overhead");
    return PowerBudget{gross, acdc_overhead, control_overhead,
                       gross - acdc_overhead - control_overhead};
}

/// Mean Vp^2/Rload over the last simulated period.
inline double mean_load_power(const SimResult& result, const Load& load) {
    load.validate();
    if (!result.converged)
        throw ValidationError("result", "simulation did not reach steady state");
    if (std::isinf(load.Rload))
        return 0.0;
    return result.mean_square / load.Rload;
}

/// Mean power of a sinusoid of the given peak amplitude into the load.
inline double mean_load_power(double amplitude, const Load& load) {
    load.validate();
    detail::require_non_negative_finite(amplitude, "amplitude");
    if (std::isinf(load.Rload))
        return 0.0;
    return amplitude * amplitude / (2.0 * load.Rload);
}

/// Steady sinusoidal Vp amplitude with no switching: I0 / |g + j*w*Cp|.
inline double baseline_amplitude(const PiezoEquivalentCircuit& c, const ExcitationSpec& e,
                                 const Load& load) {
    const double g = load.conductance() + (std::isinf(c.Rp) ? 0.0 : 1.0 / c.Rp);
    const double b = e.omega() * c.Cp();
    return e.amplitude / std::hypot(g, b);
}

/// Full parameter context of one evaluation.
struct Scenario {
    PiezoEquivalentCircuit circuit = PiezoEquivalentCircuit::from_capacitance(1e-9);
    ExcitationSpec excitation{Waveform::sinusoidal, 1e-6, 85.0, 0.0};
    Load load;
    IntegratedInductor inductor{22e-3, 0.0};
    double c_add = 1e-6;
    SimConfig sim;

    /// Time between switch events: half the excitation period.
    double switch_interval() const { return sshkit::switch_interval(excitation.frequency); }
};

enum class SweepParam { Rload, Rs, L, C_add, T };
enum class Evaluator {
    analytic_sshi_eq5,
    analytic_sshi_envelope,
    analytic_sshc,
    analytic_sshi_integrated,
    oracle_sshi,
    oracle_sshc,
};
enum class SweepMetric { amplification, net_power };

inline std::string_view to_string(SweepParam p) {
    switch (p) {
        case SweepParam::Rload: return "Rload";
        case SweepParam::Rs: return "Rs";
        case SweepParam::L: return "L";
        case SweepParam::C_add: return "C_add";
        case SweepParam::T: return "T";
    }
    return "?";
}

inline std::string_view to_string(Evaluator e) {
    switch (e) {
        case Evaluator::analytic_sshi_eq5: return "ANALYTIC_SSHI_EQ5";
        case Evaluator::analytic_sshi_envelope: return "ANALYTIC_SSHI_ENVELOPE";
        case Evaluator::analytic_sshc: return "ANALYTIC_SSHC";
        case Evaluator::analytic_sshi_integrated: return "ANALYTIC_SSHI_INTEGRATED";
        case Evaluator::oracle_sshi: return "ORACLE_SSHI";
        case Evaluator::oracle_sshc: return "ORACLE_SSHC";
    }
    return "?";
}

inline std::string_view to_string(SweepMetric m) {
    return m == SweepMetric::amplification ? "amplification" : "net_power";
}

inline bool is_oracle(Evaluator e) {
    return e == Evaluator::oracle_sshi || e == Evaluator::oracle_sshc;
}

/// Copy of `s` with one parameter replaced. Sweeping T moves the excitation
/// frequency so that switch events stay half a period apart.
inline Scenario with_parameter(Scenario s, SweepParam p, double value) {
    switch (p) {
        case SweepParam::Rload: s.load.Rload = value; break;
        case SweepParam::Rs: s.inductor.Rs = value; break;
        case SweepParam::L: s.inductor.L = value; break;
        case SweepParam::C_add: s.c_add = value; break;
        case SweepParam::T:
            detail::require_positive_finite(value, "T");
            s.excitation.frequency = 0.5 / value;
            break;
    }
    return s;
}

struct PointResult {
    double value = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
    std::string error;
};

/// Gross power delivered to the load by a sinusoid-like response of gain A.
inline double analytic_gross_power(const Scenario& s, double gain) {
    return mean_load_power(gain * baseline_amplitude(s.circuit, s.excitation, s.load), s.load);
}

inline PointResult evaluate_point(const Scenario& s, Evaluator ev,
                                  SweepMetric metric = SweepMetric::amplification,
                                  double acdc_overhead = kDefaultAcDcOverhead,
                                  double control_overhead = kDefaultControlOverhead) {
    PointResult out;
    try {
        const double cp = s.circuit.Cp();
        double gross = 0.0;
        if (is_oracle(ev)) {
            const SimResult r =
                ev == Evaluator::oracle_sshi
                    ? simulate_sshi(s.circuit, s.excitation, s.load, s.inductor, s.sim)
                    : simulate_sshc(s.circuit, s.excitation, s.load, s.c_add, s.sim);
            out.converged = r.converged;
            out.value = r.amplification;
            if (metric == SweepMetric::net_power)
                gross = std::isinf(s.load.Rload) ? 0.0 : r.mean_square / s.load.Rload;
        } else {
            Amplification a;
            switch (ev) {
                case Evaluator::analytic_sshi_eq5:
                case Evaluator::analytic_sshi_envelope: {
                    const auto both = sshi_amplification(sshi_params(
                        s.inductor.L, cp, s.load.Rload, s.excitation.period(), s.inductor.Rs));
                    a = ev == Evaluator::analytic_sshi_eq5 ? both.literal : both.envelope;
                    break;
                }
                case Evaluator::analytic_sshi_integrated:
                    a = integrated_sshi_amplification(s.inductor, cp, s.load.Rload,
                                                      s.excitation.period())
                            .envelope;
                    break;
                default:
                    a = sshc_amplification(s.switch_interval(), s.load.Rload, cp);
                    break;
            }
            out.converged = true;
            if (!a.defined()) {
                out.error = "closed form undefined (lossless loop)";
                return out;
            }
            out.value = *a.value;
            if (metric == SweepMetric::net_power)
                gross = std::isfinite(out.value) ? analytic_gross_power(s, out.value) : kInf;
        }
        if (metric == SweepMetric::net_power) {
            if (std::isinf(gross))
                out.value = kInf;
            else if (std::isnan(out.value))
                out.value = std::numeric_limits<double>::quiet_NaN();
            else
                out.value = power_budget(gross, acdc_overhead, control_overhead).net;
        }
    } catch (const std::exception& e) {
        out.value = std::numeric_limits<double>::quiet_NaN();
        out.converged = false;
        out.error = e.what();
    }
    return out;
}

struct SweepSpec {
    SweepParam swept = SweepParam::Rload;
    std::vector<double> grid;
    Scenario fixed;
    Evaluator evaluator = Evaluator::analytic_sshc;
    SweepMetric metric = SweepMetric::amplification;
    double acdc_overhead = kDefaultAcDcOverhead;
    double control_overhead = kDefaultControlOverhead;
    unsigned threads = 0;  ///< 0 = hardware concurrency

    void validate() const {
        if (grid.empty())
            throw ValidationError("grid", "must not be empty");
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (std::isnan(grid[i]))
                throw ValidationError("grid", "contains NaN");
            if (i > 0 && !(grid[i] > grid[i - 1]))
                throw ValidationError("grid", "must be strictly increasing");
        }
        // Every grid value must be valid for the swept parameter.
        for (double v : grid) {
            const Scenario s = with_parameter(fixed, swept, v);
            s.load.validate();
            s.inductor.validate();
            detail::require_positive(s.c_add, "C_add");
        }
    }
};

struct SweepRow {
    double swept_value = 0.0;
    double result = 0.0;
    Evaluator evaluator = Evaluator::analytic_sshc;
    bool converged = false;
    std::string error;
};

struct SweepTable {
    SweepSpec spec;
    std::vector<SweepRow> rows;
};

/// Evaluates every grid point independently. Points may run concurrently;
/// rows always come back in grid order and a failing point is recorded in
/// its row instead of aborting the sweep.
inline SweepTable run_sweep(const SweepSpec& spec) {
    spec.validate();
    SweepTable table;
    table.spec = spec;
    table.rows.resize(spec.grid.size());

    auto eval = [&](std::size_t i) {
        const double v = spec.grid[i];
        const PointResult r =
            evaluate_point(with_parameter(spec.fixed, spec.swept, v), spec.evaluator, spec.metric,
                           spec.acdc_overhead, spec.control_overhead);
        table.rows[i] = SweepRow{v, r.value, spec.evaluator, r.converged, r.error};
    };

    unsigned workers = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(spec.grid.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < spec.grid.size(); ++i)
            eval(i);
        return table;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < spec.grid.size(); i = next++)
                eval(i);
        });
    }
    pool.clear();
    return table;
}

inline void write_sweep_csv(std::ostream& os, const SweepTable& table) {
    os << "swept_value,result,evaluator,converged\n";
    for (const auto& r : table.rows) {
        os << format_double(r.swept_value) << ',' << format_double(r.result) << ','
           << to_string(r.evaluator) << ',' << (r.converged ? "true" : "false") << '\n';
    }
}

}  // namespace sshkit
