#pragma once

// Circuit-level domain types for vibration harvesters: the piezoelectric
// equivalent circuit (current source || C31 || Rp), its electromagnetic dual
// (voltage source + series Lm, Rm), the switching inductor with its series
// resistance, and the resistive load.

#include <cmath>
#include <numbers>

#include "sshkit/errors.hpp"

namespace sshkit {

/// Material constants and characteristic dimensions of a 31-mode piezo beam.
/// s11 compliance (m^2/N), d31 coupling (C/N, sign = poling), eps33
/// permittivity (F/m), L1..L3 lengths (m), A1, A3 areas (m^2).
struct PiezoMaterialGeometry {
    double s11 = 0.0;
    double d31 = 0.0;
    double eps33 = 0.0;
    double L1 = 0.0;
    double L2 = 0.0;
    double L3 = 0.0;
    double A1 = 0.0;
    double A3 = 0.0;

    void validate() const {
        detail::require_positive_finite(s11, "s11");
        if (!(d31 != 0.0) || !std::isfinite(d31))
            throw ValidationError("d31", "must be finite and non-zero");
        detail::require_positive_finite(eps33, "eps33");
        detail::require_positive_finite(L1, "L1");
        detail::require_positive_finite(L2, "L2");
        detail::require_positive_finite(L3, "L3");
        detail::require_positive_finite(A1, "A1");
        detail::require_positive_finite(A3, "A3");
    }
};

/// Current source in parallel with C31 and the dielectric loss resistor Rp.
struct PiezoEquivalentCircuit {
    double N = 0.0;    ///< force-to-charge coupling factor (C/m)
    double Cm = 0.0;   ///< mechanical-equivalent capacitance
    double C0 = 0.0;   ///< clamped capacitance (F)
    double C31 = 0.0;  ///< total piezo capacitance Cp (F)
    double Rp = kInf;  ///< dielectric loss resistance (ohm), infinite by default

    double Cp() const noexcept { return C31; }

    void validate() const {
        detail::require_positive_finite(C31, "Cp");
        detail::require_positive(Rp, "Rp");
    }

    /// Circuit known only by its terminal capacitance.
    static PiezoEquivalentCircuit from_capacitance(double Cp, double Rp = kInf) {
        PiezoEquivalentCircuit c;
        c.C0 = Cp;
        c.C31 = Cp;
        c.Rp = Rp;
        c.validate();
        return c;
    }
};

inline PiezoEquivalentCircuit derive_equivalent_circuit(const PiezoMaterialGeometry& g,
                                                        double Rp = kInf) {
    g.validate();
    detail::require_positive(Rp, "Rp");
    PiezoEquivalentCircuit c;
    c.N = g.d31 * g.L2 / g.s11;
    c.Cm = g.s11 * g.L1 / g.A1;
    c.C0 = g.A3 * g.eps33 / g.L3;
    c.C31 = c.N * c.N * c.Cm + c.C0;
    c.Rp = Rp;
    return c;
}

enum class Waveform { sinusoidal };

/// Prescribed source: i(t) = amplitude * sin(2*pi*frequency*t + phase).
/// For the piezo this is the equivalent current I31 (A); the EM model carries
/// its own voltage amplitude.
struct ExcitationSpec {
    Waveform waveform = Waveform::sinusoidal;
    double amplitude = 0.0;
    double frequency = 0.0;
    double phase = 0.0;

    void validate() const {
        detail::require_non_negative_finite(amplitude, "amplitude");
        detail::require_positive_finite(frequency, "frequency");
        if (!std::isfinite(phase))
            throw ValidationError("phase", "must be finite");
    }

    double omega() const noexcept { return 2.0 * std::numbers::pi * frequency; }
    double period() const noexcept { return 1.0 / frequency; }
    double at(double t) const noexcept { return amplitude * std::sin(omega() * t + phase); }

    /// Source current for a force F(t) = force_peak * sin(wt + phase), using
    /// I31 = N*Cm*dF/dt. A negative N flips the source polarity.
    static ExcitationSpec from_force(const PiezoEquivalentCircuit& c, double force_peak,
                                     double frequency, double phase = 0.0) {
        detail::require_non_negative_finite(force_peak, "force");
        detail::require_positive_finite(frequency, "frequency");
        ExcitationSpec e;
        e.frequency = frequency;
        e.amplitude = std::abs(c.N) * c.Cm * e.omega() * force_peak;
        e.phase = phase + std::numbers::pi / 2 + (c.N < 0.0 ? std::numbers::pi : 0.0);
        e.validate();
        return e;
    }
};

/// Voltage source Vamp*sin(2*pi*f*t) in series with the coil Lm, Rm.
struct EmEquivalentCircuit {
    double Vamp = 0.0;
    double f = 0.0;
    double Lm = 0.0;
    double Rm = 0.0;

    void validate() const {
        detail::require_non_negative_finite(Vamp, "Vamp");
        detail::require_positive_finite(f, "f");
        detail::require_positive_finite(Lm, "Lm");
        detail::require_non_negative_finite(Rm, "Rm");
    }
};

/// Switching inductor reduced to L plus series resistance. Rs = 0 is the
/// ideal discrete inductor.
struct IntegratedInductor {
    double L = 0.0;
    double Rs = 0.0;

    void validate() const {
        detail::require_positive_finite(L, "L");
        detail::require_non_negative_finite(Rs, "Rs");
    }
};

/// Resistive load; infinite means open circuit.
struct Load {
    double Rload = kInf;

    void validate() const { detail::require_positive(Rload, "Rload"); }

    double conductance() const noexcept { return std::isinf(Rload) ? 0.0 : 1.0 / Rload; }
};

/// Q = omega0*L/Rs. Rs = 0 gives +inf.
inline double inductor_quality_factor(const IntegratedInductor& ind, double omega0) {
    ind.validate();
    detail::require_positive_finite(omega0, "omega0");
    if (ind.Rs == 0.0)
        return kInf;
    return omega0 * ind.L / ind.Rs;
}

/// Inverse of inductor_quality_factor: Rs = omega0*L/Q, Q = inf gives 0.
inline double series_resistance_for_q(double L, double omega0, double Q) {
    detail::require_positive_finite(L, "L");
    detail::require_positive_finite(omega0, "omega0");
    detail::require_positive(Q, "Q");
    if (std::isinf(Q))
        return 0.0;
    return omega0 * L / Q;
}

// Electrical duality (current <-> voltage, C <-> L, R <-> G). The mapped EM
// circuit obeys the same differential equation as the piezo SSHI circuit with
// the roles of voltage and current exchanged, so its current gain equals the
// piezo voltage gain.

/// Series capacitor network used by EM-SSHC. Rpar is its leakage resistance.
struct SeriesSwitchCapacitor {
    double C = 0.0;
    double Rpar = kInf;

    void validate() const {
        detail::require_positive_finite(C, "C_add");
        detail::require_positive(Rpar, "R_par");
    }
};

/// Load resistor in series with the EM coil. R = 0 is a short, the dual of an
/// open-circuit piezo load.
struct SeriesLoad {
    double R = 0.0;

    void validate() const { detail::require_non_negative_finite(R, "R_series"); }
};

struct EmDualMapping {
    EmEquivalentCircuit em;
    SeriesLoad load;
    SeriesSwitchCapacitor capacitor;
};

inline double dual_resistance(double r) {
    if (std::isinf(r))
        return 0.0;
    if (r == 0.0)
        return kInf;
    return 1.0 / r;
}

inline EmDualMapping em_dual_of(const PiezoEquivalentCircuit& piezo, const ExcitationSpec& exc,
                                const Load& load, const IntegratedInductor& ind) {
    piezo.validate();
    exc.validate();
    load.validate();
    ind.validate();
    EmDualMapping m;
    m.em.Vamp = exc.amplitude;
    m.em.f = exc.frequency;
    m.em.Lm = piezo.Cp();
    m.em.Rm = dual_resistance(piezo.Rp);
    m.load.R = dual_resistance(load.Rload);
    m.capacitor.C = ind.L;
    m.capacitor.Rpar = dual_resistance(ind.Rs);
    return m;
}

}  // namespace sshkit
