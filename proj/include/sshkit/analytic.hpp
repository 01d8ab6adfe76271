#pragma once

// Closed-form voltage amplification for synchronized-switch harvesting:
// SSHI (ideal and with a lossy integrated inductor) and SSHC.

#include <cmath>
#include <numbers>
#include <optional>
#include <string_view>

#include "sshkit/errors.hpp"
#include "sshkit/models.hpp"

namespace sshkit {

/// Half period of the L-Cp oscillator: the time the SSHI switch stays closed.
inline double lc_half_period(double L, double Cp) {
    detail::require_positive_finite(L, "L");
    detail::require_positive_finite(Cp, "Cp");
    return std::numbers::pi * std::sqrt(L * Cp);
}

/// Dimensionless bundle driving the SSHI gain.
///
/// `T` is the LC half period (inversion time). The load-decay factor alpha_rc
/// is evaluated over one excitation period: alpha_rc = exp(-Tm / (2 Rload Cp)),
/// i.e. the decay between two consecutive switch events half a period apart.
/// With alpha_inv = 0 the envelope then reduces to the SSHC gain.
struct AnalyticParams {
    double omega0 = 0.0;
    double lambda = 0.0;
    double Q = kInf;
    double alpha_inv = 1.0;
    double alpha_rc = 1.0;
    double alpha_a = kInf;
    double T = 0.0;
    double excitation_period = 0.0;
};

inline AnalyticParams sshi_params(double L, double Cp, double Rload, double excitation_period,
                                  double Rs = 0.0) {
    detail::require_positive_finite(L, "L");
    detail::require_positive_finite(Cp, "Cp");
    detail::require_positive(Rload, "Rload");
    detail::require_positive_finite(excitation_period, "excitation_period");
    detail::require_non_negative_finite(Rs, "Rs");

    const bool open_load = std::isinf(Rload);
    AnalyticParams p;
    p.T = lc_half_period(L, Cp);
    p.excitation_period = excitation_period;

    // Series Rs shifts the natural frequency and adds Rs/L to the damping rate.
    const double rs_over_rload = open_load ? 0.0 : Rs / Rload;
    p.omega0 = std::sqrt((1.0 + rs_over_rload) / (L * Cp));
    const double load_rate = open_load ? 0.0 : 1.0 / (Rload * Cp);
    const double damping = load_rate + Rs / L;  // 2*lambda*omega0
    p.lambda = damping / (2.0 * p.omega0);
    p.Q = p.lambda > 0.0 ? 1.0 / (2.0 * p.lambda) : kInf;
    p.alpha_inv = std::exp(-p.lambda * std::numbers::pi);
    p.alpha_rc = open_load ? 1.0 : std::exp(-excitation_period / (2.0 * Rload * Cp));

    const double loop = p.alpha_inv * p.alpha_rc;
    p.alpha_a = loop < 1.0 ? (1.0 + p.alpha_rc) / (1.0 - loop) : kInf;
    return p;
}

enum class Formula { sshi_eq5, sshi_envelope_alpha_a, sshc_eq6, sshi_integrated };

inline std::string_view to_string(Formula f) {
    switch (f) {
        case Formula::sshi_eq5: return "SSHI_EQ5";
        case Formula::sshi_envelope_alpha_a: return "SSHI_ENVELOPE_ALPHA_A";
        case Formula::sshc_eq6: return "SSHC_EQ6";
        case Formula::sshi_integrated: return "SSHI_INTEGRATED";
    }
    return "?";
}

/// Voltage gain tagged with the closed form that produced it. An empty
/// `value` means the formula is undefined for the inputs.
struct Amplification {
    std::optional<double> value;
    Formula formula = Formula::sshi_eq5;

    bool defined() const noexcept { return value.has_value(); }
};

/// Both SSHI closed forms. `literal` is A = 1 + (1 - alpha_a*alpha_inv)*alpha_rc
/// as printed; `envelope` is alpha_a itself. Neither is preferred here: the
/// transient oracle decides which tracks the steady state.
struct SshiAmplification {
    Amplification literal;
    Amplification envelope;
};

inline SshiAmplification sshi_amplification(const AnalyticParams& p) {
    SshiAmplification out;
    out.literal.formula = Formula::sshi_eq5;
    out.envelope.formula = Formula::sshi_envelope_alpha_a;
    out.envelope.value = p.alpha_a;
    if (std::isfinite(p.alpha_a))
        out.literal.value = 1.0 + (1.0 - p.alpha_a * p.alpha_inv) * p.alpha_rc;
    return out;
}

/// SSHC gain 1 + exp(-T/(Rload*Cp)), T being the interval between switch
/// events (half the excitation period).
inline Amplification sshc_amplification(double T, double Rload, double Cp) {
    if (!(T >= 0.0) || !std::isfinite(T))
        throw ValidationError("T", "must be finite and >= 0");
    detail::require_positive(Rload, "Rload");
    detail::require_positive_finite(Cp, "Cp");
    Amplification a;
    a.formula = Formula::sshc_eq6;
    if (std::isinf(Rload) || T == 0.0)
        a.value = 2.0;
    else
        a.value = 1.0 + std::exp(-T / (Rload * Cp));
    return a;
}

/// Switch interval for SSHC at excitation frequency f.
inline double switch_interval(double frequency) {
    detail::require_positive_finite(frequency, "frequency");
    return 0.5 / frequency;
}

/// SSHI with a lossy inductor: the modified omega0/damping feed the same chain.
inline SshiAmplification integrated_sshi_amplification(const IntegratedInductor& ind, double Cp,
                                                      double Rload, double excitation_period) {
    ind.validate();
    auto out = sshi_amplification(sshi_params(ind.L, Cp, Rload, excitation_period, ind.Rs));
    out.envelope.formula = Formula::sshi_integrated;
    return out;
}

}  // namespace sshkit
