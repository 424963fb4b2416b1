// Copyright (c) the semiflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace semiflow {

using Complex = std::complex<double>;

/// Default coefficient cap for series products and compositions.
/// The CLI honours the SEMIFLOW_MAX_TRUNC environment variable and passes an
/// override to the operations that grow series.
inline constexpr std::size_t kDefaultTruncCap = 256;

/// A finitely truncated power series sum c_n z^n, n = 0..trunc_order().
///
/// All coefficients are required to be finite; operations that would exceed
/// a coefficient cap drop the tail and mark the result (tail_dropped()).
class TruncatedSeries {
public:
    TruncatedSeries() : coeffs_(1, Complex(0.0)) {}
    explicit TruncatedSeries(std::vector<Complex> coeffs, bool tail_dropped = false);

    static TruncatedSeries zero(std::size_t order);
    static TruncatedSeries monomial(std::size_t n, Complex scale = Complex(1.0));
    static TruncatedSeries from_reals(const std::vector<double>& coeffs);

    std::size_t trunc_order() const { return coeffs_.size() - 1; }
    std::size_t size() const { return coeffs_.size(); }
    std::span<const Complex> coeffs() const { return coeffs_; }

    /// Coefficient c_n; zero beyond the truncation order.
    Complex coeff(std::size_t n) const { return n < coeffs_.size() ? coeffs_[n] : Complex(0.0); }

    /// Index of the highest coefficient with |c_n| > tol (0 for the zero series).
    std::size_t degree(double tol = 0.0) const;
    bool is_zero(double tol = 0.0) const;
    double max_abs_coeff() const;

    /// True when an operation discarded coefficients beyond the cap.
    bool tail_dropped() const { return tail_dropped_; }

    Complex eval(Complex z) const;            // Horner
    TruncatedSeries derivative() const;
    TruncatedSeries truncated(std::size_t order) const;

    TruncatedSeries& operator+=(const TruncatedSeries& rhs);
    TruncatedSeries& operator-=(const TruncatedSeries& rhs);
    TruncatedSeries& operator*=(Complex scale);

    friend TruncatedSeries operator+(TruncatedSeries lhs, const TruncatedSeries& rhs) { return lhs += rhs; }
    friend TruncatedSeries operator-(TruncatedSeries lhs, const TruncatedSeries& rhs) { return lhs -= rhs; }
    friend TruncatedSeries operator*(TruncatedSeries lhs, Complex scale) { return lhs *= scale; }
    friend TruncatedSeries operator*(Complex scale, TruncatedSeries rhs) { return rhs *= scale; }

private:
    std::vector<Complex> coeffs_;
    bool tail_dropped_ = false;
};

/// Coefficient-level product truncated at `cap`.
TruncatedSeries multiply(const TruncatedSeries& a, const TruncatedSeries& b,
                         std::size_t cap = kDefaultTruncCap);

/// Taylor coefficients of f(phi(z)) through min(deg f * deg phi, cap).
/// Requires |phi(0)| < 1.
TruncatedSeries compose(const TruncatedSeries& f, const TruncatedSeries& phi,
                        std::size_t cap = kDefaultTruncCap);

/// The operator action G * f'.
TruncatedSeries apply_generator(const TruncatedSeries& G, const TruncatedSeries& f,
                                std::size_t cap = kDefaultTruncCap);

/// Weight rule n -> beta_n > 0 selecting the space H^2(beta).
///
/// Hardy:     beta_n = 1
/// Dirichlet: beta_0 = 1, beta_n = sqrt(n)
/// Bergman:   beta_n = 1/sqrt(n+1)
/// Custom:    tabulated values, extended past the table by the last entry
class WeightSequence {
public:
    enum class Kind { Hardy, Dirichlet, Bergman, Custom };

    static WeightSequence hardy() { return WeightSequence(Kind::Hardy); }
    static WeightSequence dirichlet() { return WeightSequence(Kind::Dirichlet); }
    static WeightSequence bergman() { return WeightSequence(Kind::Bergman); }
    static WeightSequence custom(std::vector<double> values);

    /// beta_0 = 1, beta_n = n^{-alpha}, tabulated through `table_size - 1`.
    static WeightSequence power_decay(double alpha, std::size_t table_size = kDefaultTruncCap + 1);

    Kind kind() const { return kind_; }
    std::string name() const;

    double at(std::size_t n) const;
    double at_sq(std::size_t n) const { double b = at(n); return b * b; }

    /// Kernel-existence flag. The named spaces have liminf beta_n^{1/n} = 1 by
    /// construction and always pass; Custom tables are checked numerically via
    /// min over n in [N/2, N] of beta_n^{1/n} >= 1 - 1e-6.
    bool kernel_admissible(std::size_t trunc_bound = kDefaultTruncCap) const;

    /// beta_{n+1} <= beta_n (+eps) for all n < N.
    bool decreasing_through(std::size_t N, double eps = 1e-12) const;

    const std::vector<double>& custom_values() const { return values_; }

private:
    explicit WeightSequence(Kind kind) : kind_(kind) {}
    Kind kind_;
    std::vector<double> values_;   // Custom only
};

/// Truncated reproducing kernel of H^2(beta) at an interior anchor point:
/// coefficient n is conj(w)^n / beta_n^2, norm_sq the matching partial sum.
struct ReproducingKernel {
    Complex anchor;
    TruncatedSeries series;
    double norm_sq = 0.0;
};

double weighted_norm(const TruncatedSeries& f, const WeightSequence& beta);
Complex weighted_inner(const TruncatedSeries& f, const TruncatedSeries& g,
                       const WeightSequence& beta);

/// <f, z g'>_{H^2} + f(0) * conj(g(0)); the Dirichlet-space inner product.
Complex dirichlet_inner(const TruncatedSeries& f, const TruncatedSeries& g);

/// Kernel truncated at order N. Rejects |w| >= 1 and weights failing the
/// kernel-existence check.
ReproducingKernel kernel_at(Complex w, const WeightSequence& beta, std::size_t N);

}  // namespace semiflow
