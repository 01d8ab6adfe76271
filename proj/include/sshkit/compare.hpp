#pragma once

// Closed forms against the transient oracle, point by point.

#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "sshkit/analytic.hpp"
#include "sshkit/format.hpp"
#include "sshkit/harvest.hpp"
#include "sshkit/transient.hpp"

namespace sshkit {

enum class CompareTechnique { sshi, sshc };

struct ComparePoint {
    double swept_value = 0.0;
    double oracle = 0.0;
    bool converged = false;
    bool oracle_unbounded = false;  ///< lossless growth: amplitude still rising at the end
    // Closed forms; NaN where a form does not apply or is undefined.
    double eq5 = std::numeric_limits<double>::quiet_NaN();
    double envelope = std::numeric_limits<double>::quiet_NaN();
    double eq6 = std::numeric_limits<double>::quiet_NaN();
    double gap_eq5 = std::numeric_limits<double>::quiet_NaN();
    double gap_envelope = std::numeric_limits<double>::quiet_NaN();
    double gap_eq6 = std::numeric_limits<double>::quiet_NaN();
};

struct FormSummary {
    std::string name;
    double max_gap = 0.0;
    bool tracks = false;
};

struct CompareReport {
    CompareTechnique technique = CompareTechnique::sshi;
    double tolerance = 0.10;
    std::vector<ComparePoint> points;
    std::vector<FormSummary> forms;

    /// Names of closed forms whose worst gap is within tolerance.
    std::vector<std::string> tracking() const {
        std::vector<std::string> out;
        for (const auto& f : forms)
            if (f.tracks)
                out.push_back(f.name);
        return out;
    }
};

namespace detail {

/// True when the per-period amplitude is still strictly rising over the last
/// three periods, i.e. the run is growing rather than settling.
inline bool still_growing(const SimResult& r) {
    const auto& a = r.period_amplitudes;
    if (a.size() < 3)
        return false;
    const std::size_t n = a.size();
    return a[n - 1] > a[n - 2] * (1.0 + 1e-6) && a[n - 2] > a[n - 3] * (1.0 + 1e-6);
}

/// Relative gap of a closed form against the oracle. An infinite closed form
/// agrees with an oracle that is still growing without bound.
inline double relative_gap(double closed, double oracle, bool oracle_unbounded) {
    if (std::isnan(closed) || std::isnan(oracle))
        return kInf;
    if (std::isinf(closed))
        return oracle_unbounded ? 0.0 : kInf;
    if (oracle_unbounded)
        return kInf;
    return std::abs(closed - oracle) / std::abs(oracle);
}

inline FormSummary summarize(std::string name, const std::vector<ComparePoint>& pts,
                             double ComparePoint::*gap, double tol) {
    FormSummary f{std::move(name), 0.0, false};
    for (const auto& p : pts)
        f.max_gap = std::max(f.max_gap, std::isnan(p.*gap) ? kInf : p.*gap);
    f.tracks = f.max_gap <= tol;
    return f;
}

}  // namespace detail

struct LabeledScenario {
    double swept_value = 0.0;
    Scenario scenario;
};

inline ComparePoint compare_point(CompareTechnique tech, const LabeledScenario& ls) {
    const Scenario& s = ls.scenario;
    ComparePoint p;
    p.swept_value = ls.swept_value;
    const SimResult r = tech == CompareTechnique::sshi
                            ? simulate_sshi(s.circuit, s.excitation, s.load, s.inductor, s.sim)
                            : simulate_sshc(s.circuit, s.excitation, s.load, s.c_add, s.sim);
    p.oracle = r.amplification;
    p.converged = r.converged;
    p.oracle_unbounded = !r.converged && detail::still_growing(r);

    if (tech == CompareTechnique::sshi) {
        const auto a = sshi_amplification(sshi_params(s.inductor.L, s.circuit.Cp(), s.load.Rload,
                                                      s.excitation.period(), s.inductor.Rs));
        p.eq5 = a.literal.value.value_or(std::numeric_limits<double>::quiet_NaN());
        p.envelope = a.envelope.value.value_or(std::numeric_limits<double>::quiet_NaN());
        p.gap_eq5 = detail::relative_gap(p.eq5, p.oracle, p.oracle_unbounded);
        p.gap_envelope = detail::relative_gap(p.envelope, p.oracle, p.oracle_unbounded);
    } else {
        p.eq6 = *sshc_amplification(s.switch_interval(), s.load.Rload, s.circuit.Cp()).value;
        p.gap_eq6 = detail::relative_gap(p.eq6, p.oracle, p.oracle_unbounded);
    }
    return p;
}

inline CompareReport compare(CompareTechnique tech, const std::vector<LabeledScenario>& points,
                             double tolerance) {
    detail::require_positive_finite(tolerance, "compare.tol");
    CompareReport rep;
    rep.technique = tech;
    rep.tolerance = tolerance;
    for (const auto& ls : points)
        rep.points.push_back(compare_point(tech, ls));
    if (tech == CompareTechnique::sshi) {
        rep.forms.push_back(detail::summarize("SSHI_EQ5", rep.points, &ComparePoint::gap_eq5, tolerance));
        rep.forms.push_back(detail::summarize("SSHI_ENVELOPE_ALPHA_A", rep.points,
                                              &ComparePoint::gap_envelope, tolerance));
    } else {
        rep.forms.push_back(detail::summarize("SSHC_EQ6", rep.points, &ComparePoint::gap_eq6, tolerance));
    }
    return rep;
}

inline void write_compare_report(std::ostream& os, const CompareReport& rep) {
    const bool sshi = rep.technique == CompareTechnique::sshi;
    os << "technique = " << (sshi ? "sshi" : "sshc") << '\n';
    os << "tolerance = " << format_double(rep.tolerance) << '\n';
    for (const auto& p : rep.points) {
        os << "point " << format_double(p.swept_value) << ": oracle=" << format_double(p.oracle)
           << (p.oracle_unbounded ? " (unbounded)" : "")
           << " converged=" << (p.converged ? "true" : "false");
        if (sshi) {
            os << " eq5=" << format_double(p.eq5) << " gap=" << format_double(p.gap_eq5)
               << " envelope=" << format_double(p.envelope)
               << " gap=" << format_double(p.gap_envelope);
        } else {
            os << " eq6=" << format_double(p.eq6) << " gap=" << format_double(p.gap_eq6);
        }
        os << '\n';
    }
    for (const auto& f : rep.forms) {
        os << "form " << f.name << ": max_gap=" << format_double(f.max_gap)
           << (f.tracks ? " TRACKS" : " DISAGREES") << '\n';
    }
    const auto names = rep.tracking();
    os << "verdict: ";
    if (names.empty()) {
        os << "no closed form tracks the oracle within tolerance\n";
    } else {
        for (std::size_t i = 0; i < names.size(); ++i)
            os << (i ? ", " : "") << names[i];
        os << " tracks the oracle within tolerance\n";
    }
}

inline void write_compare_csv(std::ostream& os, const CompareReport& rep) {
    if (rep.technique == CompareTechnique::sshi) {
        os << "swept_value,oracle,converged,eq5,gap_eq5,envelope,gap_envelope\n";
        for (const auto& p : rep.points)
            os << format_double(p.swept_value) << ',' << format_double(p.oracle) << ','
               << (p.converged ? "true" : "false") << ',' << format_double(p.eq5) << ','
               << format_double(p.gap_eq5) << ',' << format_double(p.envelope) << ','
               << format_double(p.gap_envelope) << '\n';
    } else {
        os << "swept_value,oracle,converged,eq6,gap_eq6\n";
        for (const auto& p : rep.points)
            os << format_double(p.swept_value) << ',' << format_double(p.oracle) << ','
               << (p.converged ? "true" : "false") << ',' << format_double(p.eq6) << ','
               << format_double(p.gap_eq6) << '\n';
    }
}

}  // namespace sshkit
