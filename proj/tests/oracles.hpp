// Copyright (c) the semiflow contributors
// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference implementations. Everything here is deliberately
// independent of the library code paths it cross-checks: plain power sums,
// fixed-step RK4, trapezoid quadrature, power iteration.

#pragma once

#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

using Complex = std::complex<double>;

// sum c_n z^n by explicit powers.
inline Complex eval_power_sum(const std::vector<Complex>& coeffs, Complex z) {
    Complex acc(0.0), zp(1.0);
    for (Complex c : coeffs) {
        acc += c * zp;
        zp *= z;
    }
    return acc;
}

// sum n c_n z^{n-1} by explicit powers.
inline Complex eval_derivative_sum(const std::vector<Complex>& coeffs, Complex z) {
    Complex acc(0.0), zp(1.0);
    for (std::size_t n = 1; n < coeffs.size(); ++n) {
        acc += double(n) * coeffs[n] * zp;
        zp *= z;
    }
    return acc;
}

// Classic fixed-step RK4 for dw/dt = G(w).
inline Complex rk4_flow(const std::vector<Complex>& G, Complex z0, double t_end, int steps) {
    const auto f = [&G](Complex w) { return eval_power_sum(G, w); };
    Complex w = z0;
    const double h = t_end / steps;
    for (int i = 0; i < steps; ++i) {
        const Complex k1 = f(w);
        const Complex k2 = f(w + 0.5 * h * k1);
        const Complex k3 = f(w + 0.5 * h * k2);
        const Complex k4 = f(w + h * k3);
        w += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return w;
}

// (1/2pi) Integral of g(theta) over [0, 2pi), trapezoid on a uniform grid.
inline double circle_average(const std::function<double(double)>& g, int n = 4096) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += g(2.0 * std::numbers::pi * double(j) / double(n));
    return acc / double(n);
}

// max of g over the circle: dense scan plus ternary polish.
inline double circle_max(const std::function<double(double)>& g, int n = 8192) {
    double best = -1e300, best_th = 0.0;
    for (int j = 0; j < n; ++j) {
        const double th = 2.0 * std::numbers::pi * double(j) / double(n);
        const double v = g(th);
        if (v > best) {
            best = v;
            best_th = th;
        }
    }
    double lo = best_th - 2.0 * std::numbers::pi / n, hi = best_th + 2.0 * std::numbers::pi / n;
    for (int it = 0; it < 90; ++it) {
        const double t1 = lo + (hi - lo) / 3.0, t2 = hi - (hi - lo) / 3.0;
        if (g(t1) < g(t2)) lo = t1; else hi = t2;
    }
    return std::max(best, g(0.5 * (lo + hi)));
}

// Largest singular value by power iteration on A^H A.
inline double power_iteration_norm(const Eigen::MatrixXcd& A, int iters = 600) {
    const Eigen::MatrixXcd g = A.adjoint() * A;
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(A.cols());
    v.normalize();
    double lambda = 0.0;
    for (int i = 0; i < iters; ++i) {
        v = g * v;
        lambda = v.norm();
        if (lambda == 0.0) return 0.0;
        v /= lambda;
    }
    return std::sqrt(lambda);
}

inline Complex random_in_disc(std::mt19937& rng, double radius) {
    std::uniform_real_distribution<double> u(-radius, radius);
    for (;;) {
        const Complex z(u(rng), u(rng));
        if (std::abs(z) <= radius) return z;
    }
}

inline std::vector<Complex> random_poly(std::mt19937& rng, std::size_t degree, double mag) {
    std::vector<Complex> c(degree + 1);
    for (auto& v : c) v = random_in_disc(rng, mag);
    return c;
}

}  // namespace oracles
