#pragma once

// Causal extremum detection on a uniformly sampled signal. The same detector
// is used offline (detect_peaks) and inside the simulators, where it sees one
// sample at a time and never looks ahead.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sshkit/errors.hpp"

namespace sshkit {

enum class PeakKind { maximum, minimum };

struct Peak {
    double t = 0.0;       ///< refined extremum time
    double value = 0.0;   ///< refined extremum value
    PeakKind kind = PeakKind::maximum;
    std::size_t index = 0;  ///< sample index of the extremum (or plateau start)
};

class PeakDetector {
public:
    explicit PeakDetector(double dt, double refractory = 0.0)
        : dt_(dt), refractory_(refractory) {
        detail::require_positive_finite(dt, "dt");
        detail::require_non_negative(refractory, "refractory");
    }

    /// Feed the next sample. Returns the extremum confirmed by this sample, if any.
    /// The peak lies at least one sample in the past.
    std::optional<Peak> push(double t, double x) {
        const std::size_t index = next_index_++;
        if (history_ == 0) {
            shift(t, x, index);
            return std::nullopt;
        }

        const double d = x - x1_;
        if (d == 0.0) {
            if (plateau_len_ == 0) {
                plateau_t_ = t1_;
                plateau_x_ = x1_;
                plateau_index_ = i1_;
            }
            ++plateau_len_;
            shift(t, x, index);
            return std::nullopt;
        }

        const int sign = d > 0.0 ? 1 : -1;
        std::optional<Peak> found;
        if (last_sign_ != 0 && sign != last_sign_) {
            Peak p;
            p.kind = last_sign_ > 0 ? PeakKind::maximum : PeakKind::minimum;
            if (plateau_len_ > 0) {
                p.t = plateau_t_;
                p.value = plateau_x_;
                p.index = plateau_index_;
            } else {
                // Parabola through (x0, x1, x) centred on x1.
                const double denom = x0_ - 2.0 * x1_ + x;
                const double delta = denom != 0.0 ? 0.5 * (x0_ - x) / denom : 0.0;
                p.t = t1_ + delta * dt_;
                p.value = x1_ - 0.25 * (x0_ - x) * delta;
                p.index = i1_;
            }
            if (p.t >= masked_until_) {
                found = p;
                if (refractory_ > 0.0)
                    masked_until_ = p.t + refractory_;
            }
        }
        last_sign_ = sign;
        plateau_len_ = 0;
        shift(t, x, index);
        return found;
    }

    /// Suppress peaks whose time falls before `t`.
    void mask_until(double t) { masked_until_ = std::max(masked_until_, t); }

    /// Forget derivative history, e.g. after the signal jumped at a switch event.
    void reset_history() {
        history_ = 0;
        last_sign_ = 0;
        plateau_len_ = 0;
    }

    double refractory() const noexcept { return refractory_; }

private:
    void shift(double t, double x, std::size_t index) {
        x0_ = x1_;
        x1_ = x;
        t1_ = t;
        i1_ = index;
        ++history_;
    }

    double dt_;
    double refractory_;
    double masked_until_ = -kInf;
    std::size_t next_index_ = 0;
    std::size_t history_ = 0;
    double x0_ = 0.0;
    double x1_ = 0.0;
    double t1_ = 0.0;
    std::size_t i1_ = 0;
    int last_sign_ = 0;
    std::size_t plateau_len_ = 0;
    double plateau_t_ = 0.0;
    double plateau_x_ = 0.0;
    std::size_t plateau_index_ = 0;
};

/// All extrema of `samples` (spacing dt, first sample at t0). A non-zero
/// refractory window suppresses peaks closer than that to the previous one.
inline std::vector<Peak> detect_peaks(std::span<const double> samples, double dt, double t0 = 0.0,
                                      double refractory = 0.0) {
    PeakDetector det(dt, refractory);
    std::vector<Peak> peaks;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (auto p = det.push(t0 + static_cast<double>(i) * dt, samples[i]))
            peaks.push_back(*p);
    }
    return peaks;
}

}  // namespace sshkit
