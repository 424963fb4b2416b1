// Copyright (c) the semiflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "semiflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace semiflow {

namespace {

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

Complex binom_pow(Complex base, int k) {
    Complex acc(1.0);
    for (int i = 0; i < k; ++i) acc *= base;
    return acc;
}

// ---------------------------------------------------------------------------
// Closed-form evaluation
// ---------------------------------------------------------------------------

Complex eval_linear(const LinearAB& p, double t, Complex z) {
    const Complex e = std::exp(p.a * t);
    return e * z + (p.b / p.a) * (e - 1.0);
}

// Both exponentials are shifted by the larger real part so the Moebius
// quotient stays finite for large t.
struct MoebiusCoeffs { Complex p, q, r, s; };

MoebiusCoeffs quad_distinct_moebius(const QuadraticDistinct& g, double t) {
    const Complex ea_exp = g.a * g.c * t;
    const Complex eb_exp = g.b * g.c * t;
    const double shift = std::max(ea_exp.real(), eb_exp.real());
    const Complex ea = std::exp(ea_exp - shift);
    const Complex eb = std::exp(eb_exp - shift);
    return {g.a * eb - g.b * ea, g.a * g.b * (ea - eb), eb - ea, g.a * ea - g.b * eb};
}

MoebiusCoeffs quad_double_moebius(const QuadraticDouble& g, double t) {
    const Complex act = g.a * g.c * t;
    return {1.0 - act, g.a * g.a * g.c * t, -g.c * t, 1.0 + act};
}

Complex eval_moebius(const MoebiusCoeffs& m, Complex z) {
    const Complex den = m.r * z + m.s;
    const double scale = std::abs(m.r) + std::abs(m.s);
    if (std::abs(den) <= 1e-15 * std::max(scale, 1.0))
        throw std::domain_error("evaluate_flow: singular time (vanishing denominator)");
    return (m.p * z + m.q) / den;
}

Complex eval_power_shift(const PowerShift& g, double t, Complex z) {
    const int m = g.n - 1;
    const Complex u = z - g.a;
    const Complex base = 1.0 - double(m) * g.c * t * binom_pow(u, m);
    // The base moves along a straight segment from 1, so the principal branch
    // is the continuous one; the segment meets 0 exactly when the endpoint
    // lands on the non-positive real axis.
    if (std::abs(base.imag()) <= 1e-14 * (1.0 + std::abs(base)) && base.real() <= 1e-14)
        throw std::domain_error("evaluate_flow: singular time (branch point reached)");
    return g.a + u * std::exp(-std::log(base) / double(m));
}

Complex eval_monomial_shift(const MonomialShift& g, double t, Complex z) {
    const int n = g.n;
    const Complex ac = g.a * g.c;
    const Complex zn = binom_pow(z, n);
    const Complex w1 = zn / g.a;
    const Complex w0 = 1.0 - w1;

    // D(s) = w0 + w1 e^{-n a c s} spirals; unwrap its argument along s.
    std::size_t steps = std::max<std::size_t>(
        16, std::size_t(std::ceil(std::abs(double(n) * ac * t) / 0.25)));
    steps = std::min<std::size_t>(steps, 1u << 20);
    for (int attempt = 0; attempt < 4; ++attempt) {
        Complex prev(1.0);
        double theta = 0.0;
        bool ok = true;
        for (std::size_t k = 1; k <= steps; ++k) {
            const double s = t * double(k) / double(steps);
            const Complex cur = w0 + w1 * std::exp(-double(n) * ac * s);
            if (!finite(cur)) throw std::domain_error("evaluate_flow: overflow along the flow");
            if (std::abs(cur) < 1e-12 * (std::abs(w0) + std::abs(w1) + 1.0))
                throw std::domain_error("evaluate_flow: singular time (branch point reached)");
            const Complex ratio = cur / prev;
            if (std::abs(ratio - 1.0) > 0.8) { ok = false; break; }
            theta += std::arg(ratio);
            prev = cur;
        }
        if (ok) {
            const Complex root = std::exp((std::log(std::abs(prev)) + Complex(0.0, theta)) / double(n));
            return z * std::exp(-ac * t) / root;
        }
        steps *= 8;
    }
    throw std::domain_error("evaluate_flow: branch tracking failed (path too close to singular)");
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)
// ---------------------------------------------------------------------------

struct DormandPrince {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

double hyperbolic_speed(const TruncatedSeries& G, Complex w) {
    const double r = std::abs(w);
    if (r >= 1.0) return std::numeric_limits<double>::infinity();
    return 2.0 * std::abs(G.eval(w)) / ((1.0 - r) * (1.0 + r));
}

}  // namespace

SemiflowModel SemiflowModel::numeric(TruncatedSeries G) {
    return SemiflowModel(NumericFlow{}, std::move(G));
}

SemiflowModel SemiflowModel::classify(const TruncatedSeries& G, double tol) {
    const double scale = std::max(G.max_abs_coeff(), 1.0);
    const double atol = tol * scale;
    const std::size_t d = G.degree(atol);

    auto matches = [&](const std::vector<Complex>& expected) {
        const std::size_t hi = std::max<std::size_t>(expected.size(), G.size());
        for (std::size_t k = 0; k < hi; ++k) {
            const Complex e = k < expected.size() ? expected[k] : Complex(0.0);
            if (std::abs(G.coeff(k) - e) > 1e-9 * scale) return false;
        }
        return true;
    };

    if (d == 1) {
        return SemiflowModel(LinearAB{G.coeff(1), G.coeff(0)}, G);
    }
    if (d == 2) {
        const Complex c = G.coeff(2);
        const Complex disc = G.coeff(1) * G.coeff(1) - 4.0 * c * G.coeff(0);
        const Complex sq = std::sqrt(disc);
        Complex r1 = (-G.coeff(1) + sq) / (2.0 * c);
        Complex r2 = (-G.coeff(1) - sq) / (2.0 * c);
        if (std::abs(r1 - r2) <= 1e-12 * (1.0 + std::abs(r1) + std::abs(r2)))
            return SemiflowModel(QuadraticDouble{c, (r1 + r2) / 2.0}, G);
        if (r2.real() < r1.real() || (r2.real() == r1.real() && r2.imag() < r1.imag()))
            std::swap(r1, r2);
        return SemiflowModel(QuadraticDistinct{c, r1, r2}, G);
    }
    if (d >= 3) {
        // c (z - a)^d, including the pure monomial a = 0.
        const Complex c = G.coeff(d);
        const Complex a = -G.coeff(d - 1) / (c * double(d));
        std::vector<Complex> expected(d + 1);
        Complex binom(1.0);
        for (std::size_t k = 0; k <= d; ++k) {
            // C(d, k) (-a)^{d-k}, built from the top
            expected[d - k] = c * binom * binom_pow(-a, int(k));
            binom *= double(d - k) / double(k + 1);
        }
        if (matches(expected)) return SemiflowModel(PowerShift{c, a, int(d)}, G);

        // c z (z^{d-1} - a): only indices 1 and d populated.
        if (std::abs(G.coeff(1)) > atol) {
            std::vector<Complex> mono(d + 1, Complex(0.0));
            mono[d] = c;
            mono[1] = G.coeff(1);
            if (matches(mono))
                return SemiflowModel(MonomialShift{c, -G.coeff(1) / c, int(d) - 1}, G);
        }
    }
    return SemiflowModel(NumericFlow{}, G);
}

std::string SemiflowModel::variant_name() const {
    struct Namer {
        std::string operator()(const LinearAB&) const { return "linear"; }
        std::string operator()(const QuadraticDistinct&) const { return "quadratic-distinct"; }
        std::string operator()(const QuadraticDouble&) const { return "quadratic-double"; }
        std::string operator()(const PowerShift&) const { return "power-shift"; }
        std::string operator()(const MonomialShift&) const { return "monomial-shift"; }
        std::string operator()(const NumericFlow&) const { return "numeric"; }
    };
    return std::visit(Namer{}, variant_);
}

Complex evaluate_flow(const SemiflowModel& model, double t, Complex z, const StepControl& ctrl) {
    if (t < 0.0) throw std::invalid_argument("evaluate_flow: t must be >= 0");
    if (std::abs(z) >= 1.0) throw std::invalid_argument("evaluate_flow: |z| must be < 1");
    if (t == 0.0) return z;

    struct Eval {
        double t;
        Complex z;
        const SemiflowModel& model;
        const StepControl& ctrl;
        Complex operator()(const LinearAB& g) const { return eval_linear(g, t, z); }
        Complex operator()(const QuadraticDistinct& g) const {
            return eval_moebius(quad_distinct_moebius(g, t), z);
        }
        Complex operator()(const QuadraticDouble& g) const {
            return eval_moebius(quad_double_moebius(g, t), z);
        }
        Complex operator()(const PowerShift& g) const { return eval_power_shift(g, t, z); }
        Complex operator()(const MonomialShift& g) const { return eval_monomial_shift(g, t, z); }
        Complex operator()(const NumericFlow&) const {
            Trajectory traj = integrate_flow(model.generator(), t, z, ctrl);
            if (traj.status == Trajectory::Status::StepUnderflow)
                throw std::runtime_error("evaluate_flow: integration failed (" + traj.note + ")");
            if (traj.status == Trajectory::Status::BoundaryExit && traj.times.back() < t)
                throw std::domain_error("evaluate_flow: trajectory exited the unit disc before t");
            return traj.points.back();
        }
    };
    return std::visit(Eval{t, z, model, ctrl}, model.variant());
}

Trajectory integrate_flow(const TruncatedSeries& G, double t_end, Complex z0,
                          const StepControl& ctrl) {
    if (std::abs(z0) >= 1.0) throw std::invalid_argument("integrate_flow: |z0| must be < 1");
    if (t_end < 0.0) throw std::invalid_argument("integrate_flow: t_end must be >= 0");

    Trajectory traj;
    auto record = [&](double t, Complex w) {
        traj.times.push_back(t);
        traj.points.push_back(w);
        traj.speeds.push_back(hyperbolic_speed(G, w));
    };

    double t = 0.0;
    Complex w = z0;
    record(t, w);
    if (t_end == 0.0) return traj;

    const auto f = [&G](Complex y) { return G.eval(y); };
    using DP = DormandPrince;

    double h = std::min({t_end, 1e-2, 0.1 / (1.0 + std::abs(f(z0)))});
    Complex k1 = f(w);
    std::size_t steps = 0;

    while (t < t_end) {
        if (++steps > ctrl.max_steps) {
            traj.status = Trajectory::Status::StepUnderflow;
            traj.note = "maximum step count exceeded";
            return traj;
        }
        h = std::min(h, t_end - t);
        if (h < 1e-14 * std::max(1.0, t_end)) {
            traj.status = Trajectory::Status::StepUnderflow;
            traj.note = "step size underflow";
            return traj;
        }

        const Complex k2 = f(w + h * (DP::a21 * k1));
        const Complex k3 = f(w + h * (DP::a31 * k1 + DP::a32 * k2));
        const Complex k4 = f(w + h * (DP::a41 * k1 + DP::a42 * k2 + DP::a43 * k3));
        const Complex k5 = f(w + h * (DP::a51 * k1 + DP::a52 * k2 + DP::a53 * k3 + DP::a54 * k4));
        const Complex k6 =
            f(w + h * (DP::a61 * k1 + DP::a62 * k2 + DP::a63 * k3 + DP::a64 * k4 + DP::a65 * k5));
        const Complex w_new =
            w + h * (DP::b1 * k1 + DP::b3 * k3 + DP::b4 * k4 + DP::b5 * k5 + DP::b6 * k6);
        const Complex k7 = f(w_new);
        const Complex err = h * (DP::e1 * k1 + DP::e3 * k3 + DP::e4 * k4 + DP::e5 * k5 +
                                 DP::e6 * k6 + DP::e7 * k7);

        if (!finite(w_new)) {
            traj.status = Trajectory::Status::StepUnderflow;
            traj.note = "non-finite state";
            return traj;
        }

        const double tol = ctrl.abs_tol + ctrl.rel_tol * std::max(std::abs(w), std::abs(w_new));
        const double err_ratio = std::abs(err) / tol;

        if (err_ratio <= 1.0) {
            // Bisect toward the circle instead of leaping far past it.
            if (std::abs(w_new) >= 1.0 - ctrl.exit_margin && h > 1e-6 * std::max(1.0, t_end)) {
                h *= 0.5;
                continue;
            }
            t += h;
            w = w_new;
            k1 = k7;    // first-same-as-last
            record(t, w);
            if (std::abs(w) >= 1.0 - ctrl.exit_margin) {
                traj.status = Trajectory::Status::BoundaryExit;
                traj.note = "trajectory reached the unit circle";
                return traj;
            }
        }
        const double factor =
            err_ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_ratio, -0.2), 0.2, 5.0);
        h *= factor;
    }
    return traj;
}

DenjoyWolffResult denjoy_wolff(const SemiflowModel& model, const StepControl& ctrl) {
    struct Visitor {
        const SemiflowModel& model;
        const StepControl& ctrl;
        DenjoyWolffResult operator()(const LinearAB& g) const { return {-g.b / g.a, false, true}; }
        DenjoyWolffResult operator()(const QuadraticDistinct& g) const {
            if (g.a.real() == g.b.real())
                throw std::domain_error(
                    "denjoy_wolff: flow is an automorphism group (equal real parts); no attracting point");
            return {g.a.real() < g.b.real() ? g.a : g.b, false, true};
        }
        DenjoyWolffResult operator()(const QuadraticDouble& g) const { return {g.a, false, true}; }
        DenjoyWolffResult operator()(const PowerShift& g) const { return {g.a, false, true}; }
        DenjoyWolffResult operator()(const MonomialShift&) const {
            return {Complex(0.0), false, true};
        }
        DenjoyWolffResult operator()(const NumericFlow&) const {
            Complex w(0.0);
            for (double leg = 1.0; leg <= ctrl.dw_t_max; leg *= 2.0) {
                Trajectory traj = integrate_flow(model.generator(), leg, w, ctrl);
                if (traj.status == Trajectory::Status::StepUnderflow)
                    throw std::runtime_error("denjoy_wolff: integration failed (" + traj.note + ")");
                const Complex w_next = traj.points.back();
                if (traj.status == Trajectory::Status::BoundaryExit)
                    return {w_next / std::abs(w_next), true, true};
                if (std::abs(w_next - w) < ctrl.dw_move_tol) {
                    if (std::abs(w_next) > 1.0 - ctrl.dw_boundary_band &&
                        std::abs(w_next) >= std::abs(w))
                        return {w_next / std::abs(w_next), true, true};
                    return {w_next, false, true};
                }
                w = w_next;
            }
            if (std::abs(w) > 1.0 - ctrl.dw_boundary_band) return {w / std::abs(w), true, false};
            return {w, false, false};
        }
    };
    return std::visit(Visitor{model, ctrl}, model.variant());
}

double hyperbolic_dist(Complex z1, Complex z2) {
    if (std::abs(z1) >= 1.0 || std::abs(z2) >= 1.0)
        throw std::invalid_argument("hyperbolic_dist: points must lie in the open disc");
    const double d = std::abs((z1 - z2) / (1.0 - z1 * std::conj(z2)));
    if (d >= 1.0) return std::numeric_limits<double>::infinity();
    return std::log((1.0 + d) / (1.0 - d));
}

double check_semigroup_law(const SemiflowModel& model,
                           std::span<const std::tuple<double, double, Complex>> samples,
                           const StepControl& ctrl) {
    double worst = 0.0;
    for (const auto& [t, s, z] : samples) {
        const Complex direct = evaluate_flow(model, t + s, z, ctrl);
        const Complex nested = evaluate_flow(model, t, evaluate_flow(model, s, z, ctrl), ctrl);
        worst = std::max(worst, std::abs(direct - nested));
    }
    return worst;
}

TruncatedSeries flow_series(const SemiflowModel& model, double t, std::size_t order) {
    if (t < 0.0) throw std::invalid_argument("flow_series: t must be >= 0");

    auto moebius_series = [order](const MoebiusCoeffs& m) {
        if (std::abs(m.s) <= std::abs(m.r))
            throw std::domain_error("flow_series: symbol pole inside the closed disc");
        const Complex kappa = -m.r / m.s;
        std::vector<Complex> c(order + 1);
        c[0] = m.q / m.s;
        Complex kpow(1.0);
        for (std::size_t k = 1; k <= order; ++k) {
            c[k] = (m.p + m.q * kappa) * kpow / m.s;
            kpow *= kappa;
        }
        return TruncatedSeries(std::move(c));
    };

    struct Visitor {
        double t;
        std::size_t order;
        decltype(moebius_series)& moebius;
        TruncatedSeries operator()(const LinearAB& g) const {
            const Complex e = std::exp(g.a * t);
            return TruncatedSeries(std::vector<Complex>{(g.b / g.a) * (e - 1.0), e});
        }
        TruncatedSeries operator()(const QuadraticDistinct& g) const {
            return moebius(quad_distinct_moebius(g, t));
        }
        TruncatedSeries operator()(const QuadraticDouble& g) const {
            return moebius(quad_double_moebius(g, t));
        }
        TruncatedSeries operator()(const PowerShift& g) const {
            const int m = g.n - 1;
            if (std::abs(g.a) >= 1.0)
                throw std::domain_error("flow_series: shift point outside the open disc");
            const Complex lambda = double(m) * g.c * t;
            // S(u) = u (1 - lambda u^m)^{-1/m}, then u = z - a.
            std::vector<Complex> s(order + 1, Complex(0.0));
            Complex beta(1.0), lpow(1.0);
            for (std::size_t j = 0; m > 0 && j * std::size_t(m) + 1 <= order; ++j) {
                s[j * std::size_t(m) + 1] = beta * lpow;
                lpow *= lambda;
                beta *= (1.0 / double(m) + double(j)) / double(j + 1);
            }
            const bool unreliable =
                std::abs(lambda) * std::pow(1.0 + std::abs(g.a), double(m)) >= 0.9;
            TruncatedSeries S(std::move(s), unreliable);
            const TruncatedSeries shift(std::vector<Complex>{-g.a, Complex(1.0)});
            TruncatedSeries out = compose(S, shift, order);
            out += TruncatedSeries::monomial(0, g.a);
            return out;
        }
        TruncatedSeries operator()(const MonomialShift& g) const {
            const int n = g.n;
            const Complex kappa = (1.0 - std::exp(-double(n) * g.a * g.c * t)) / g.a;
            const Complex front = std::exp(-g.a * g.c * t);
            std::vector<Complex> c(order + 1, Complex(0.0));
            Complex gamma(1.0), kpow(1.0);
            for (std::size_t j = 0; j * std::size_t(n) + 1 <= order; ++j) {
                c[j * std::size_t(n) + 1] = front * gamma * kpow;
                kpow *= kappa;
                gamma *= (1.0 / double(n) + double(j)) / double(j + 1);
            }
            return TruncatedSeries(std::move(c), std::abs(kappa) >= 0.999);
        }
        TruncatedSeries operator()(const NumericFlow&) const {
            throw std::invalid_argument("flow_series: closed-form model required");
        }
    };
    return std::visit(Visitor{t, order, moebius_series}, model.variant());
}

}  // namespace semiflow
