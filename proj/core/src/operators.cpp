// Copyright (c) the semiflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "semiflow/operators.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace semiflow {

namespace {

std::string complex_label(Complex w) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g%+gi", w.real(), w.imag());
    return buf;
}

}  // namespace

FiniteSection finite_section(FiniteSection::Kind kind, const TruncatedSeries& symbol,
                             std::size_t N, const WeightSequence& beta) {
    FiniteSection sec;
    sec.kind = kind;
    sec.dim = N + 1;
    sec.space = beta;
    sec.symbol = symbol;
    sec.entries = Eigen::MatrixXcd::Zero(long(N + 1), long(N + 1));

    const std::size_t W = N + symbol.trunc_order() + 32;    // window for the spill diagnostic
    double worst_spill = 0.0;

    if (kind == FiniteSection::Kind::Composition) {
        if (std::abs(symbol.coeff(0)) >= 1.0)
            throw std::invalid_argument("finite_section: composition symbol needs |phi(0)| < 1");
        TruncatedSeries power = TruncatedSeries::monomial(0, Complex(1.0));    // phi^0
        for (std::size_t j = 0; j <= N; ++j) {
            double head = 0.0, spill = 0.0;
            for (std::size_t i = 0; i <= std::min(W, power.trunc_order()); ++i) {
                const double mass = std::norm(power.coeff(i)) * beta.at_sq(i);
                if (i <= N) {
                    sec.entries(long(i), long(j)) = power.coeff(i) * beta.at(i) / beta.at(j);
                    head += mass;
                } else {
                    spill += mass;
                }
            }
            if (head + spill > 0.0) worst_spill = std::max(worst_spill, std::sqrt(spill / (head + spill)));
            if (j < N) power = multiply(power, symbol, W);
        }
    } else {
        for (std::size_t j = 1; j <= N; ++j) {
            // A z^j = j G z^{j-1}
            double head = 0.0, spill = 0.0;
            for (std::size_t g = 0; g <= symbol.trunc_order(); ++g) {
                const std::size_t i = g + j - 1;
                const double mass = double(j) * double(j) * std::norm(symbol.coeff(g)) * beta.at_sq(i);
                if (i <= N) {
                    sec.entries(long(i), long(j)) =
                        double(j) * symbol.coeff(g) * beta.at(i) / beta.at(j);
                    head += mass;
                } else {
                    spill += mass;
                }
            }
            if (head + spill > 0.0) worst_spill = std::max(worst_spill, std::sqrt(spill / (head + spill)));
        }
    }

    sec.tail_mass = worst_spill;
    sec.reliable = worst_spill <= 1e-8;
    return sec;
}

double operator_norm(const FiniteSection& section) {
    if (section.entries.size() == 0) return 0.0;
    const Eigen::MatrixXcd gram = section.entries.adjoint() * section.entries;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    return top <= 0.0 ? 0.0 : std::sqrt(top);
}

double hardy_norm_bound(Complex phi0) {
    const double r = std::abs(phi0);
    if (r >= 1.0) throw std::invalid_argument("hardy_norm_bound: |phi(0)| must be < 1");
    return std::sqrt((1.0 + r) / (1.0 - r));
}

double dirichlet_norm_bound(Complex phi0) {
    const double r = std::abs(phi0);
    if (r >= 1.0) throw std::invalid_argument("dirichlet_norm_bound: |phi(0)| must be < 1");
    const double L = std::log(1.0 / ((1.0 - r) * (1.0 + r)));
    return std::sqrt((L + 2.0 + std::sqrt(L * (4.0 + L))) / 2.0);
}

GrowthFit growth_bound_fit(const TruncatedSeries& G, const WeightSequence& beta, std::size_t N,
                           std::span<const double> t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("growth_bound_fit: empty time grid");
    for (double t : t_grid)
        if (!(t > 0.0)) throw std::invalid_argument("growth_bound_fit: grid times must be > 0");

    const SemiflowModel model = SemiflowModel::classify(G);
    GrowthFit fit;
    fit.times.assign(t_grid.begin(), t_grid.end());
    std::sort(fit.times.begin(), fit.times.end());

    fit.w_hat = -std::numeric_limits<double>::infinity();
    for (double t : fit.times) {
        const TruncatedSeries phi = flow_series(model, t, N + 48);
        const FiniteSection sec = finite_section(FiniteSection::Kind::Composition, phi, N, beta);
        const double norm = operator_norm(sec);
        fit.norms.push_back(norm);
        fit.reliable = fit.reliable && sec.reliable && !phi.tail_dropped();
        fit.w_hat = std::max(fit.w_hat, std::log(norm) / t);
    }

    const std::size_t m = std::min<std::size_t>(3, fit.times.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += fit.times[i];
        sy += fit.norms[i] - 1.0;
        sxx += fit.times[i] * fit.times[i];
        sxy += fit.times[i] * (fit.norms[i] - 1.0);
    }
    const double den = double(m) * sxx - sx * sx;
    fit.small_t_slope = den != 0.0 ? (double(m) * sxy - sx * sy) / den
                                   : (sxx > 0.0 ? sxy / sxx : 0.0);
    return fit;
}

Complex rayleigh_quotient(const TruncatedSeries& G, const TruncatedSeries& f,
                          const WeightSequence& beta) {
    if (f.max_abs_coeff() == 0.0)
        throw std::invalid_argument("rayleigh_quotient: f must be nonzero");
    const std::size_t cap = G.trunc_order() + f.trunc_order() + 1;
    const TruncatedSeries Af = apply_generator(G, f, cap);
    return weighted_inner(Af, f, beta) / weighted_inner(f, f, beta);
}

RangeProbeResult kernel_probe(const TruncatedSeries& G, Complex w, const WeightSequence& beta,
                              std::size_t N) {
    const double r = std::abs(w);
    if (!(r > 0.0) || r >= 1.0)
        throw std::invalid_argument("kernel_probe: need 0 < |w| < 1");
    if (beta.kind() != WeightSequence::Kind::Hardy && !beta.decreasing_through(N))
        throw std::invalid_argument("kernel_probe: weights must be decreasing (or Hardy)");

    const double r2 = r * r;
    double num = 0.0, den = 0.0, r2_pow = 1.0;
    for (std::size_t n = 0; n <= N; ++n) {
        const double term = r2_pow / beta.at_sq(n);
        den += term;
        num += double(n) * term;
        r2_pow *= r2;
    }

    RangeProbeResult res;
    res.probe_kind = "kernel(w=" + complex_label(w) + ")";
    res.rayleigh = (std::conj(w) * G.eval(w) / r2) * (num / den);
    res.re_part = res.rayleigh.real();
    return res;
}

double tail_threshold(std::size_t N, const WeightSequence& /*beta: decreasing*/) {
    return std::pow(0.5, 1.0 / double(2 * N + 2));
}

TruncatedSeries fN_witness(double theta, std::size_t N, double alpha_exp,
                           const WeightSequence& beta) {
    if (N < 1) throw std::invalid_argument("fN_witness: N must be >= 1");
    for (std::size_t n = 1; n <= N; ++n) {
        const double expect = std::pow(double(n), -alpha_exp);
        if (std::abs(beta.at(n) - expect) > 1e-9 * expect)
            throw std::invalid_argument("fN_witness: weights must equal n^{-alpha}");
    }
    std::vector<Complex> c(N + 1, Complex(0.0));
    const double root6 = std::sqrt(6.0);
    for (std::size_t n = 1; n <= N; ++n) {
        c[n] = root6 * std::polar(1.0, -double(n) * theta) /
               (std::numbers::pi * std::pow(double(n), 1.0 - alpha_exp));
    }
    TruncatedSeries f(std::move(c));
    return f * Complex(1.0 / weighted_norm(f, beta));
}

RangeProbeResult fN_probe(const TruncatedSeries& G, double theta, std::size_t N, double alpha_exp,
                          const WeightSequence& beta) {
    const TruncatedSeries f = fN_witness(theta, N, alpha_exp, beta);
    RangeProbeResult res;
    char buf[96];
    std::snprintf(buf, sizeof buf, "fN(theta=%g,N=%zu,alpha=%g)", theta, N, alpha_exp);
    res.probe_kind = buf;
    res.rayleigh = rayleigh_quotient(G, f, beta);
    res.re_part = res.rayleigh.real();
    return res;
}

RangeProbeResult dirichlet_shift_witness(const TruncatedSeries& f, std::size_t k,
                                         const TruncatedSeries& G) {
    if (f.max_abs_coeff() == 0.0)
        throw std::invalid_argument("dirichlet_shift_witness: f must be nonzero");

    const std::size_t deg = f.trunc_order();
    std::vector<Complex> fk(deg + k + 1, Complex(0.0));
    double norm_sq_formula = 0.0;
    for (std::size_t n = 1; n <= deg; ++n) {
        fk[n + k] = f.coeff(n) * double(n) / double(n + k);
        norm_sq_formula += std::norm(f.coeff(n)) * double(n) * double(n) / double(n + k);
    }
    const TruncatedSeries fks(std::move(fk));

    const Complex den = dirichlet_inner(fks, fks);
    if (std::abs(den.real() - norm_sq_formula) > 1e-10 * std::max(1.0, norm_sq_formula))
        throw std::logic_error("dirichlet_shift_witness: norm identity check failed");
    if (!(den.real() > 0.0))
        throw std::invalid_argument("dirichlet_shift_witness: probe collapsed to zero");

    const std::size_t cap = G.trunc_order() + fks.trunc_order() + 1;
    const TruncatedSeries Afk = apply_generator(G, fks, cap);

    RangeProbeResult res;
    res.probe_kind = "dirichlet-shift(k=" + std::to_string(k) + ")";
    res.rayleigh = dirichlet_inner(Afk, fks) / den;
    res.re_part = res.rayleigh.real();
    return res;
}

}  // namespace semiflow
