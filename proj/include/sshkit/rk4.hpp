#pragma once

#include <array>
#include <cstddef>

namespace sshkit {

template <std::size_t N>
using StateVector = std::array<double, N>;

namespace detail {

template <std::size_t N>
StateVector<N> axpy(const StateVector<N>& y, double a, const StateVector<N>& k) {
    StateVector<N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = y[i] + a * k[i];
    return out;
}

}  // namespace detail

/// One classical fourth-order Runge-Kutta step of dy/dt = f(t, y).
template <std::size_t N, class Deriv>
StateVector<N> rk4_step(Deriv&& f, double t, const StateVector<N>& y, double h) {
    const StateVector<N> k1 = f(t, y);
    const StateVector<N> k2 = f(t + 0.5 * h, detail::axpy(y, 0.5 * h, k1));
    const StateVector<N> k3 = f(t + 0.5 * h, detail::axpy(y, 0.5 * h, k2));
    const StateVector<N> k4 = f(t + h, detail::axpy(y, h, k3));
    StateVector<N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

}  // namespace sshkit
