// Copyright (c) the semiflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "semiflow/series.hpp"

namespace semiflow {

// Closed-form semiflow families. Parameters reproduce the generator exactly:
//   LinearAB:          G(z) = a z + b, a != 0
//   QuadraticDistinct: G(z) = c (z - a)(z - b), a != b
//   QuadraticDouble:   G(z) = c (z - a)^2
//   PowerShift:        G(z) = c (z - a)^n, n >= 3
//   MonomialShift:     G(z) = c z (z^n - a), n >= 1, a != 0
struct LinearAB { Complex a, b; };
struct QuadraticDistinct { Complex c, a, b; };
struct QuadraticDouble { Complex c, a; };
struct PowerShift { Complex c, a; int n; };
struct MonomialShift { Complex c, a; int n; };
struct NumericFlow {};

using FlowVariant =
    std::variant<LinearAB, QuadraticDistinct, QuadraticDouble, PowerShift, MonomialShift,
                 NumericFlow>;

struct StepControl {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    std::size_t max_steps = 1'000'000;
    double exit_margin = 1e-9;      // |w| >= 1 - exit_margin terminates with a flag
    double dw_move_tol = 1e-8;      // numeric Denjoy-Wolff stopping movement
    double dw_t_max = 1024.0;       // horizon for the doubling search
    double dw_boundary_band = 1e-4; // |w| > 1 - band counts as a boundary limit
};

struct Trajectory {
    enum class Status { Complete, BoundaryExit, StepUnderflow };
    std::vector<double> times;
    std::vector<Complex> points;
    std::vector<double> speeds;    // 2 |G(w)| / (1 - |w|^2)
    Status status = Status::Complete;
    std::string note;

    bool boundary_exit() const { return status == Status::BoundaryExit; }
};

class SemiflowModel {
public:
    /// Pattern-matches a polynomial generator against the closed-form
    /// families; anything else integrates numerically.
    static SemiflowModel classify(const TruncatedSeries& G, double tol = 1e-12);

    /// Forces the ODE-integrator backend regardless of the symbol's shape.
    static SemiflowModel numeric(TruncatedSeries G);

    const FlowVariant& variant() const { return variant_; }
    const TruncatedSeries& generator() const { return generator_; }
    bool is_closed_form() const { return !std::holds_alternative<NumericFlow>(variant_); }
    std::string variant_name() const;

    std::optional<Complex> dw_point() const { return dw_; }
    void set_dw_point(Complex alpha) { dw_ = alpha; }

private:
    SemiflowModel(FlowVariant v, TruncatedSeries G) : variant_(std::move(v)), generator_(std::move(G)) {}
    FlowVariant variant_;
    TruncatedSeries generator_;
    std::optional<Complex> dw_;
};

/// phi_t(z). Closed forms evaluate directly (branch tracked continuously from
/// t = 0); the numeric variant integrates dw/dt = G(w). Rejects t < 0 and
/// |z| >= 1; throws std::domain_error at singular times of a closed form.
Complex evaluate_flow(const SemiflowModel& model, double t, Complex z,
                      const StepControl& ctrl = {});

/// Adaptive Dormand-Prince integration of dw/dt = G(w) from z0 up to t_end,
/// recording times, points and hyperbolic speeds at accepted steps.
Trajectory integrate_flow(const TruncatedSeries& G, double t_end, Complex z0,
                          const StepControl& ctrl = {});

struct DenjoyWolffResult {
    Complex point{0.0, 0.0};
    bool boundary = false;
    bool converged = true;
};

/// Attracting point of the semiflow. Closed forms answer in closed form (the
/// distinct-root quadratic with Re a = Re b is an automorphism and throws
/// std::domain_error); the numeric variant follows the flow from 0 with a
/// doubling time horizon.
DenjoyWolffResult denjoy_wolff(const SemiflowModel& model, const StepControl& ctrl = {});

/// Poincare distance 2 artanh |(z1 - z2)/(1 - z1 conj(z2))|.
double hyperbolic_dist(Complex z1, Complex z2);

/// max over samples (t, s, z) of |phi_{t+s}(z) - phi_t(phi_s(z))|.
double check_semigroup_law(const SemiflowModel& model,
                           std::span<const std::tuple<double, double, Complex>> samples,
                           const StepControl& ctrl = {});

/// Taylor series of phi_t through the given order; closed forms only.
TruncatedSeries flow_series(const SemiflowModel& model, double t, std::size_t order);

}  // namespace semiflow
