#pragma once

// Fixed-step time-domain simulation of the switched harvesting circuits.
// This is the brute-force reference for every closed form in analytic.hpp:
// no formula from there is used to compute a simulated value.
//
// Piezo state: Vp across Cp, IL in the switched inductor branch, Vadd on the
// SSHC storage capacitor, and q = integral of the source current, which is
// proportional to the beam displacement and drives the displacement trigger.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sshkit/errors.hpp"
#include "sshkit/models.hpp"
#include "sshkit/peaks.hpp"
#include "sshkit/rk4.hpp"

namespace sshkit {

enum class Trigger {
    automatic,     ///< displacement for SSHI / EM-SSHC, voltage for SSHC
    displacement,  ///< extrema of the integrated source (beam displacement)
    voltage,       ///< maxima of |Vp| (|I| for the EM circuit)
};

struct InitialState {
    double Vp = 0.0;
    double IL = 0.0;
    double Vadd = 0.0;
    bool switch_closed = false;
};

struct SimConfig {
    double dt = 0.0;  ///< 0 selects the largest step the guard allows
    int cycles = 200;
    double steady_tol = 1e-3;
    std::optional<double> switch_on_duration;  ///< default: LC half period / 10*R_on*Cp
    double R_on = 0.0;
    Trigger trigger = Trigger::automatic;
    bool carry_over_vadd = false;
    bool record_waveform = false;
    std::size_t record_stride = 1;
    int record_cycles = 0;  ///< record only the last N periods; 0 records all
    InitialState initial;

    void validate() const {
        if (!(dt >= 0.0) || !std::isfinite(dt))
            throw ValidationError("dt", "must be finite and >= 0 (0 = auto)");
        if (cycles < 3)
            throw ValidationError("cycles", "must be >= 3");
        detail::require_positive_finite(steady_tol, "steady_tol");
        if (switch_on_duration)
            detail::require_non_negative_finite(*switch_on_duration, "switch_on_duration");
        detail::require_non_negative_finite(R_on, "R_on");
        if (record_stride == 0)
            throw ValidationError("record_stride", "must be >= 1");
        if (record_cycles < 0)
            throw ValidationError("record_cycles", "must be >= 0");
    }
};

/// One recorded step. For the EM circuit Vp holds the coil current and IL the
/// series-capacitor voltage (the dual quantities).
struct Sample {
    double t = 0.0;
    double Vp = 0.0;
    double IL = 0.0;
    double Vadd = 0.0;
    bool switch_closed = false;
};

struct SwitchEvent {
    double t = 0.0;         ///< step at which the switch closed
    double before = 0.0;    ///< observable just before closing
    double after = 0.0;     ///< observable right after reopening
    double residual = 0.0;  ///< branch current (or capacitor voltage) cut at reopening
};

struct SimResult {
    std::vector<Sample> waveform;
    std::vector<Peak> peaks;  ///< trigger extrema that fired a switch event
    std::vector<SwitchEvent> events;
    std::vector<double> period_amplitudes;  ///< (max - min)/2 per excitation period
    double amplitude = 0.0;                 ///< last-period amplitude of this run
    double baseline_amplitude = 0.0;
    double amplification = 0.0;  ///< NaN when the baseline amplitude is zero
    double mean_square = 0.0;    ///< mean of observable^2 over the last period
    double max_residual = 0.0;
    double dt = 0.0;
    double period = 0.0;
    bool converged = false;
    std::vector<std::string> warnings;

    double inversion_ratio(std::size_t event) const {
        const auto& e = events.at(event);
        return -e.after / e.before;
    }
};

namespace detail {

inline bool steady(const std::vector<double>& amps, double tol) {
    if (amps.size() < 3)
        return false;
    const auto last = amps.end();
    const auto [lo, hi] = std::minmax_element(last - 3, last);
    return (*hi - *lo) <= tol * std::abs(*hi);
}

/// Piezo element with one optional switching network across it.
class PiezoPlant {
public:
    enum class Network { none, inductor, capacitor };
    using State = StateVector<4>;  // Vp, IL, Vadd, q

    PiezoPlant(const PiezoEquivalentCircuit& c, const ExcitationSpec& e, const Load& load)
        : cp_(c.Cp()), g_(load.conductance() + (std::isinf(c.Rp) ? 0.0 : 1.0 / c.Rp)), exc_(e) {}

    void use_inductor(double L, double loop_resistance) {
        net_ = Network::inductor;
        L_ = L;
        r_loop_ = loop_resistance;
    }

    void use_capacitor(double C_add, double R_on, bool carry_over) {
        net_ = Network::capacitor;
        c_add_ = C_add;
        r_on_ = R_on;
        carry_over_ = carry_over;
    }

    State derivative(double t, const State& y) const {
        const double i = exc_.at(t);
        const double vp = y[0];
        State d{0.0, 0.0, 0.0, i};
        if (!closed_ || net_ == Network::none) {
            d[0] = (i - g_ * vp) / cp_;
        } else if (net_ == Network::inductor) {
            d[0] = (i - g_ * vp - y[1]) / cp_;
            d[1] = (vp - r_loop_ * y[1]) / L_;
        } else if (r_on_ > 0.0) {
            const double isw = (vp - y[2]) / r_on_;
            d[0] = (i - g_ * vp - isw) / cp_;
            d[2] = std::isinf(c_add_) ? 0.0 : isw / c_add_;
        } else {
            // Ideal switch: Cp and C_add are one node.
            const double dv = std::isinf(c_add_) ? 0.0 : (i - g_ * vp) / (cp_ + c_add_);
            d[0] = dv;
            d[2] = dv;
        }
        return d;
    }

    void close(State& y) {
        closed_ = true;
        if (net_ == Network::capacitor) {
            if (!carry_over_)
                y[2] = 0.0;
            if (r_on_ == 0.0) {
                const double v = std::isinf(c_add_)
                                     ? y[2]
                                     : (cp_ * y[0] + c_add_ * y[2]) / (cp_ + c_add_);
                y[0] = v;
                y[2] = v;
            }
        }
    }

    /// Opens the switch; returns the quantity the switch interrupted.
    double open(State& y) {
        closed_ = false;
        if (net_ == Network::inductor) {
            const double residual = y[1];
            y[1] = 0.0;
            return residual;
        }
        if (net_ == Network::capacitor)
            return y[0] - y[2];
        return 0.0;
    }

    void force_closed() { closed_ = true; }
    bool closed() const noexcept { return closed_; }

    double observable(const State& y) const noexcept { return y[0]; }
    double displacement(const State& y) const noexcept { return y[3]; }

    double energy(const State& y) const noexcept {
        double e = 0.5 * cp_ * y[0] * y[0];
        if (net_ == Network::inductor)
            e += 0.5 * L_ * y[1] * y[1];
        if (net_ == Network::capacitor && std::isfinite(c_add_))
            e += 0.5 * c_add_ * y[2] * y[2];
        return e;
    }

    Sample sample(double t, const State& y) const {
        return Sample{t, y[0], y[1], y[2], closed_};
    }

    static State initial(const InitialState& s) { return State{s.Vp, s.IL, s.Vadd, 0.0}; }

private:
    double cp_;
    double g_;
    ExcitationSpec exc_;
    Network net_ = Network::none;
    double L_ = 0.0;
    double r_loop_ = 0.0;
    double c_add_ = kInf;
    double r_on_ = 0.0;
    bool carry_over_ = false;
    bool closed_ = false;
};

/// Electromagnetic generator: source + series Lm, R. The switching network is
/// a capacitor in series with the coil, normally bypassed; "closed" here means
/// the bypass is open and the capacitor is in the loop.
class EmPlant {
public:
    using State = StateVector<3>;  // I, Vc, q

    EmPlant(const EmEquivalentCircuit& em, const SeriesLoad& load) : em_(em), r_(em.Rm + load.R) {
        omega_ = 2.0 * std::numbers::pi * em.f;
    }

    void use_capacitor(const SeriesSwitchCapacitor& cap) {
        switching_ = true;
        c_ = cap.C;
        g_leak_ = std::isinf(cap.Rpar) ? 0.0 : 1.0 / cap.Rpar;
    }

    State derivative(double t, const State& y) const {
        const double v = em_.Vamp * std::sin(omega_ * t);
        State d{0.0, 0.0, v};
        if (closed_ && switching_) {
            d[0] = (v - r_ * y[0] - y[1]) / em_.Lm;
            d[1] = (y[0] - g_leak_ * y[1]) / c_;
        } else {
            d[0] = (v - r_ * y[0]) / em_.Lm;
        }
        return d;
    }

    void close(State& y) {
        closed_ = true;
        y[1] = 0.0;
    }

    double open(State& y) {
        closed_ = false;
        const double residual = y[1];
        y[1] = 0.0;
        return residual;
    }

    void force_closed() { closed_ = true; }
    bool closed() const noexcept { return closed_; }

    double observable(const State& y) const noexcept { return y[0]; }
    double displacement(const State& y) const noexcept { return y[2]; }

    double energy(const State& y) const noexcept {
        return 0.5 * em_.Lm * y[0] * y[0] + (switching_ ? 0.5 * c_ * y[1] * y[1] : 0.0);
    }

    Sample sample(double t, const State& y) const { return Sample{t, y[0], y[1], 0.0, closed_}; }

    static State initial(const InitialState& s) { return State{s.Vp, s.IL, 0.0}; }

private:
    EmEquivalentCircuit em_;
    double r_;
    double omega_;
    bool switching_ = false;
    double c_ = 0.0;
    double g_leak_ = 0.0;
    bool closed_ = false;
};

struct Timing {
    double dt = 0.0;
    double period = 0.0;
    double on_time = 0.0;     ///< switch-closed duration
    double refractory = 0.0;  ///< detector mask after each event
};

/// Picks dt (auto or checked) against the LC ring, the excitation period and
/// an optional stiff time constant.
inline double resolve_step(const SimConfig& cfg, double period, double t_lc, double tau_stiff) {
    double dt_max = period / 2000.0;
    if (t_lc > 0.0)
        dt_max = std::min(dt_max, t_lc / 200.0);
    if (tau_stiff > 0.0)
        dt_max = std::min(dt_max, tau_stiff / 10.0);
    if (cfg.dt == 0.0) {
        const double steps = std::ceil(period / dt_max - 1e-9);
        return period / steps;
    }
    if (cfg.dt > dt_max * (1.0 + 1e-12))
        throw ConfigError("dt = " + std::to_string(cfg.dt) + " s exceeds the step guard " +
                          std::to_string(dt_max) + " s");
    return cfg.dt;
}

template <class Plant>
SimResult drive(Plant& plant, const SimConfig& cfg, const Timing& timing, bool switching,
                Trigger trigger) {
    using State = typename Plant::State;
    SimResult res;
    res.dt = timing.dt;
    res.period = timing.period;

    const double dt = timing.dt;
    const double period = timing.period;
    const auto total_steps =
        static_cast<long long>(std::llround(cfg.cycles * period / dt));
    const long long on_steps =
        timing.on_time > 0.0 ? std::max(1LL, static_cast<long long>(std::llround(timing.on_time / dt)))
                             : 0;
    const double record_from =
        cfg.record_cycles > 0 ? (cfg.cycles - cfg.record_cycles) * period - 0.5 * dt : -1.0;

    State y = Plant::initial(cfg.initial);
    long long remaining_on = 0;
    if (cfg.initial.switch_closed && switching) {
        plant.force_closed();
        remaining_on = std::max(on_steps, 1LL);
    }

    PeakDetector detector(dt);
    auto deriv = [&plant](double t, const State& s) { return plant.derivative(t, s); };

    long long period_index = 0;
    double pmax = plant.observable(y);
    double pmin = pmax;
    double sum_sq = 0.0;
    long long period_samples = 0;
    SwitchEvent pending;
    bool event_pending = false;

    auto record = [&](long long n, double t) {
        if (!cfg.record_waveform || t < record_from)
            return;
        if (n % static_cast<long long>(cfg.record_stride) == 0)
            res.waveform.push_back(plant.sample(t, y));
    };
    auto finish_event = [&](double residual) {
        pending.after = plant.observable(y);
        pending.residual = residual;
        res.max_residual = std::max(res.max_residual, std::abs(residual));
        res.events.push_back(pending);
        event_pending = false;
        detector.reset_history();
    };

    record(0, 0.0);
    for (long long n = 1; n <= total_steps; ++n) {
        const double t_prev = static_cast<double>(n - 1) * dt;
        const double t = static_cast<double>(n) * dt;
        y = rk4_step(deriv, t_prev, y, dt);

        if (remaining_on > 0) {
            if (--remaining_on == 0) {
                const double residual = plant.open(y);
                if (event_pending)
                    finish_event(residual);
                else
                    detector.reset_history();
            }
        } else if (switching) {
            const double signal =
                trigger == Trigger::voltage ? plant.observable(y) : plant.displacement(y);
            if (auto peak = detector.push(t, signal)) {
                bool fire = true;
                if (trigger == Trigger::voltage) {
                    const double v = plant.observable(y);
                    fire = (peak->kind == PeakKind::maximum && v > 0.0) ||
                           (peak->kind == PeakKind::minimum && v < 0.0);
                }
                if (fire) {
                    res.peaks.push_back(*peak);
                    pending = SwitchEvent{t, plant.observable(y), 0.0, 0.0};
                    event_pending = true;
                    plant.close(y);
                    detector.mask_until(t + timing.refractory);
                    if (on_steps == 0)
                        finish_event(plant.open(y));
                    else
                        remaining_on = on_steps;
                }
            }
        }

        // Period bookkeeping: step n belongs to period floor((n - 1) * dt / period).
        const double obs = plant.observable(y);
        pmax = std::max(pmax, obs);
        pmin = std::min(pmin, obs);
        sum_sq += obs * obs;
        ++period_samples;
        const auto next_boundary = static_cast<double>(period_index + 1) * period;
        if (t >= next_boundary - 0.5 * dt) {
            res.period_amplitudes.push_back(0.5 * (pmax - pmin));
            res.mean_square = sum_sq / static_cast<double>(period_samples);
            ++period_index;
            pmax = pmin = obs;
            sum_sq = 0.0;
            period_samples = 0;
        }
        record(n, t);
    }

    if (!res.period_amplitudes.empty())
        res.amplitude = res.period_amplitudes.back();
    res.converged = steady(res.period_amplitudes, cfg.steady_tol);
    return res;
}

inline Trigger resolve_trigger(Trigger t, Trigger fallback) {
    return t == Trigger::automatic ? fallback : t;
}

/// Combines a switched run with its baseline into the reported ratio.
inline void attach_baseline(SimResult& switched, const SimResult& baseline) {
    switched.baseline_amplitude = baseline.amplitude;
    if (baseline.amplitude > 0.0) {
        switched.amplification = switched.amplitude / baseline.amplitude;
        switched.converged = switched.converged && baseline.converged;
    } else {
        switched.amplification = std::numeric_limits<double>::quiet_NaN();
        switched.converged = false;
    }
}

}  // namespace detail

/// Reference run with no switching network. Its amplitude is the
/// denominator of every amplification.
inline SimResult simulate_baseline(const PiezoEquivalentCircuit& circ, const ExcitationSpec& exc,
                                   const Load& load, const SimConfig& cfg) {
    circ.validate();
    exc.validate();
    load.validate();
    cfg.validate();
    detail::Timing timing;
    timing.period = exc.period();
    timing.dt = detail::resolve_step(cfg, timing.period, 0.0, 0.0);
    detail::PiezoPlant plant(circ, exc, load);
    SimResult r = detail::drive(plant, cfg, timing, false, Trigger::displacement);
    r.baseline_amplitude = r.amplitude;
    r.amplification = 1.0;
    return r;
}

/// SSHI: at each trigger the inductor (with Rs + R_on in series) is switched
/// across Cp for one LC half period, inverting Vp.
inline SimResult simulate_sshi(const PiezoEquivalentCircuit& circ, const ExcitationSpec& exc,
                               const Load& load, const IntegratedInductor& ind,
                               const SimConfig& cfg) {
    circ.validate();
    exc.validate();
    load.validate();
    ind.validate();
    cfg.validate();
    const double t_lc = std::numbers::pi * std::sqrt(ind.L * circ.Cp());
    detail::Timing timing;
    timing.period = exc.period();
    timing.dt = detail::resolve_step(cfg, timing.period, t_lc, 0.0);
    timing.on_time = cfg.switch_on_duration.value_or(t_lc);
    timing.refractory = std::max({timing.on_time, t_lc, 0.25 * timing.period});

    detail::PiezoPlant plant(circ, exc, load);
    plant.use_inductor(ind.L, ind.Rs + cfg.R_on);
    SimResult r = detail::drive(plant, cfg, timing, true,
                                detail::resolve_trigger(cfg.trigger, Trigger::displacement));

    SimConfig base_cfg = cfg;
    base_cfg.dt = timing.dt;
    base_cfg.record_waveform = false;
    base_cfg.initial.switch_closed = false;
    detail::PiezoPlant base_plant(circ, exc, load);
    detail::attach_baseline(r, detail::drive(base_plant, base_cfg, timing, false, Trigger::displacement));
    return r;
}

/// SSHC: at each trigger the storage capacitor C_add (emptied beforehand
/// unless carry-over is enabled) is connected across Cp through R_on.
inline SimResult simulate_sshc(const PiezoEquivalentCircuit& circ, const ExcitationSpec& exc,
                               const Load& load, double C_add, const SimConfig& cfg) {
    circ.validate();
    exc.validate();
    load.validate();
    cfg.validate();
    detail::require_positive(C_add, "C_add");
    const double cp = circ.Cp();
    const double c_series = std::isinf(C_add) ? cp : cp * C_add / (cp + C_add);
    const double tau_on = cfg.R_on * c_series;

    detail::Timing timing;
    timing.period = exc.period();
    timing.dt = detail::resolve_step(cfg, timing.period, 0.0, tau_on);
    timing.on_time = cfg.switch_on_duration.value_or(10.0 * cfg.R_on * cp);
    timing.refractory = std::max(timing.on_time, 0.25 * timing.period);

    detail::PiezoPlant plant(circ, exc, load);
    plant.use_capacitor(C_add, cfg.R_on, cfg.carry_over_vadd);
    SimResult r = detail::drive(plant, cfg, timing, true,
                                detail::resolve_trigger(cfg.trigger, Trigger::voltage));
    if (C_add < 10.0 * cp)
        r.warnings.push_back("C_add is below 10*Cp; charge transfer per event is incomplete");

    SimConfig base_cfg = cfg;
    base_cfg.dt = timing.dt;
    base_cfg.record_waveform = false;
    base_cfg.initial.switch_closed = false;
    detail::PiezoPlant base_plant(circ, exc, load);
    detail::attach_baseline(r, detail::drive(base_plant, base_cfg, timing, false, Trigger::displacement));
    return r;
}

/// EM generator with a series switched capacitor: the dual of piezo SSHI.
/// The observable (and the Vp column of the waveform) is the coil current.
inline SimResult simulate_em_sshc(const EmEquivalentCircuit& em, const SeriesLoad& load,
                                  const SeriesSwitchCapacitor& cap, const SimConfig& cfg) {
    em.validate();
    load.validate();
    cap.validate();
    cfg.validate();
    const double t_lc = std::numbers::pi * std::sqrt(em.Lm * cap.C);
    detail::Timing timing;
    timing.period = 1.0 / em.f;
    timing.dt = detail::resolve_step(cfg, timing.period, t_lc, 0.0);
    timing.on_time = cfg.switch_on_duration.value_or(t_lc);
    timing.refractory = std::max({timing.on_time, t_lc, 0.25 * timing.period});

    detail::EmPlant plant(em, load);
    plant.use_capacitor(cap);
    SimResult r = detail::drive(plant, cfg, timing, true,
                                detail::resolve_trigger(cfg.trigger, Trigger::displacement));

    SimConfig base_cfg = cfg;
    base_cfg.dt = timing.dt;
    base_cfg.record_waveform = false;
    base_cfg.initial.switch_closed = false;
    detail::EmPlant base_plant(em, load);
    detail::attach_baseline(r, detail::drive(base_plant, base_cfg, timing, false, Trigger::displacement));
    return r;
}

/// Stored energy 1/2 Cp Vp^2 + 1/2 L IL^2 + 1/2 C_add Vadd^2 of a recorded sample.
/// Pass L = 0 or C_add = 0 for absent branches.
inline double stored_energy(const Sample& s, double Cp, double L, double C_add) {
    return 0.5 * Cp * s.Vp * s.Vp + 0.5 * L * s.IL * s.IL + 0.5 * C_add * s.Vadd * s.Vadd;
}

}  // namespace sshkit
