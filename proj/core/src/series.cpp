// Copyright (c) the semiflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "semiflow/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semiflow {

namespace {

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

}  // namespace

TruncatedSeries::TruncatedSeries(std::vector<Complex> coeffs, bool tail_dropped)
    : coeffs_(std::move(coeffs)), tail_dropped_(tail_dropped) {
    if (coeffs_.empty()) coeffs_.assign(1, Complex(0.0));
    for (Complex c : coeffs_) {
        if (!finite(c)) throw std::invalid_argument("TruncatedSeries: non-finite coefficient");
    }
}

TruncatedSeries TruncatedSeries::zero(std::size_t order) {
    return TruncatedSeries(std::vector<Complex>(order + 1, Complex(0.0)));
}

TruncatedSeries TruncatedSeries::monomial(std::size_t n, Complex scale) {
    std::vector<Complex> c(n + 1, Complex(0.0));
    c[n] = scale;
    return TruncatedSeries(std::move(c));
}

TruncatedSeries TruncatedSeries::from_reals(const std::vector<double>& coeffs) {
    std::vector<Complex> c(coeffs.begin(), coeffs.end());
    return TruncatedSeries(std::move(c));
}

std::size_t TruncatedSeries::degree(double tol) const {
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
        if (std::abs(coeffs_[i]) > tol) return i;
    }
    return 0;
}

bool TruncatedSeries::is_zero(double tol) const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [tol](Complex c) { return std::abs(c) <= tol; });
}

double TruncatedSeries::max_abs_coeff() const {
    double m = 0.0;
    for (Complex c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

Complex TruncatedSeries::eval(Complex z) const {
    Complex acc(0.0);
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * z + coeffs_[i];
    return acc;
}

TruncatedSeries TruncatedSeries::derivative() const {
    if (coeffs_.size() == 1) return TruncatedSeries();
    std::vector<Complex> d(coeffs_.size() - 1);
    for (std::size_t n = 1; n < coeffs_.size(); ++n) d[n - 1] = double(n) * coeffs_[n];
    return TruncatedSeries(std::move(d), tail_dropped_);
}

TruncatedSeries TruncatedSeries::truncated(std::size_t order) const {
    if (order >= trunc_order()) return *this;
    bool dropped = tail_dropped_;
    for (std::size_t n = order + 1; n < coeffs_.size(); ++n) {
        if (std::abs(coeffs_[n]) > 0.0) { dropped = true; break; }
    }
    std::vector<Complex> c(coeffs_.begin(), coeffs_.begin() + std::ptrdiff_t(order) + 1);
    return TruncatedSeries(std::move(c), dropped);
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Complex(0.0));
    for (std::size_t n = 0; n < rhs.coeffs_.size(); ++n) coeffs_[n] += rhs.coeffs_[n];
    tail_dropped_ = tail_dropped_ || rhs.tail_dropped_;
    return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Complex(0.0));
    for (std::size_t n = 0; n < rhs.coeffs_.size(); ++n) coeffs_[n] -= rhs.coeffs_[n];
    tail_dropped_ = tail_dropped_ || rhs.tail_dropped_;
    return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(Complex scale) {
    if (!finite(scale)) throw std::invalid_argument("TruncatedSeries: non-finite scale");
    for (Complex& c : coeffs_) c *= scale;
    return *this;
}

TruncatedSeries multiply(const TruncatedSeries& a, const TruncatedSeries& b, std::size_t cap) {
    const std::size_t full = a.trunc_order() + b.trunc_order();
    const std::size_t order = std::min(full, cap);
    std::vector<Complex> out(order + 1, Complex(0.0));
    for (std::size_t i = 0; i <= a.trunc_order(); ++i) {
        const Complex ai = a.coeff(i);
        if (ai == Complex(0.0)) continue;
        const std::size_t jmax = std::min(b.trunc_order(), order - std::min(order, i));
        if (i > order) break;
        for (std::size_t j = 0; j <= jmax; ++j) out[i + j] += ai * b.coeff(j);
    }
    bool dropped = a.tail_dropped() || b.tail_dropped() || full > cap;
    return TruncatedSeries(std::move(out), dropped);
}

TruncatedSeries compose(const TruncatedSeries& f, const TruncatedSeries& phi, std::size_t cap) {
    if (std::abs(phi.coeff(0)) >= 1.0)
        throw std::invalid_argument("compose: |phi(0)| must be < 1");
    const std::size_t full = f.trunc_order() * std::max<std::size_t>(phi.trunc_order(), 1);
    const std::size_t order = std::min(full, cap);
    // Horner in phi: result = (((f_N) phi + f_{N-1}) phi + ...) + f_0.
    TruncatedSeries acc = TruncatedSeries::zero(0);
    for (std::size_t i = f.size(); i-- > 0;) {
        acc = multiply(acc, phi, order);
        acc += TruncatedSeries::monomial(0, f.coeff(i));
    }
    bool dropped = acc.tail_dropped() || f.tail_dropped() || phi.tail_dropped() || full > cap;
    std::vector<Complex> out(acc.coeffs().begin(), acc.coeffs().end());
    out.resize(order + 1, Complex(0.0));
    return TruncatedSeries(std::move(out), dropped);
}

TruncatedSeries apply_generator(const TruncatedSeries& G, const TruncatedSeries& f,
                                std::size_t cap) {
    return multiply(G, f.derivative(), cap);
}

WeightSequence WeightSequence::custom(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("WeightSequence: empty custom table");
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("WeightSequence: weights must be positive and finite");
    }
    WeightSequence w(Kind::Custom);
    w.values_ = std::move(values);
    return w;
}

WeightSequence WeightSequence::power_decay(double alpha, std::size_t table_size) {
    std::vector<double> values(std::max<std::size_t>(table_size, 2));
    values[0] = 1.0;
    for (std::size_t n = 1; n < values.size(); ++n) values[n] = std::pow(double(n), -alpha);
    return custom(std::move(values));
}

std::string WeightSequence::name() const {
    switch (kind_) {
        case Kind::Hardy: return "hardy";
        case Kind::Dirichlet: return "dirichlet";
        case Kind::Bergman: return "bergman";
        case Kind::Custom: return "custom";
    }
    return "?";
}

double WeightSequence::at(std::size_t n) const {
    switch (kind_) {
        case Kind::Hardy: return 1.0;
        case Kind::Dirichlet: return n == 0 ? 1.0 : std::sqrt(double(n));
        case Kind::Bergman: return 1.0 / std::sqrt(double(n) + 1.0);
        case Kind::Custom: return n < values_.size() ? values_[n] : values_.back();
    }
    return 1.0;
}

bool WeightSequence::kernel_admissible(std::size_t trunc_bound) const {
    if (kind_ != Kind::Custom) return true;
    const std::size_t hi = std::min(trunc_bound, values_.size() - 1);
    const std::size_t lo = std::max<std::size_t>(hi / 2, 1);
    for (std::size_t n = lo; n <= hi; ++n) {
        if (std::pow(at(n), 1.0 / double(n)) < 1.0 - 1e-6) return false;
    }
    return true;
}

bool WeightSequence::decreasing_through(std::size_t N, double eps) const {
    for (std::size_t n = 0; n < N; ++n) {
        if (at(n + 1) > at(n) + eps) return false;
    }
    return true;
}

double weighted_norm(const TruncatedSeries& f, const WeightSequence& beta) {
    double s = 0.0;
    for (std::size_t n = 0; n <= f.trunc_order(); ++n) s += std::norm(f.coeff(n)) * beta.at_sq(n);
    return std::sqrt(s);
}

Complex weighted_inner(const TruncatedSeries& f, const TruncatedSeries& g,
                       const WeightSequence& beta) {
    const std::size_t shared = std::min(f.trunc_order(), g.trunc_order());
    Complex s(0.0);
    for (std::size_t n = 0; n <= shared; ++n) s += f.coeff(n) * std::conj(g.coeff(n)) * beta.at_sq(n);
    return s;
}

Complex dirichlet_inner(const TruncatedSeries& f, const TruncatedSeries& g) {
    // z g' has coefficient n g_n at index n.
    const std::size_t shared = std::min(f.trunc_order(), g.trunc_order());
    Complex s = f.coeff(0) * std::conj(g.coeff(0));
    for (std::size_t n = 1; n <= shared; ++n) s += f.coeff(n) * std::conj(double(n) * g.coeff(n));
    return s;
}

ReproducingKernel kernel_at(Complex w, const WeightSequence& beta, std::size_t N) {
    if (std::abs(w) >= 1.0) throw std::invalid_argument("kernel_at: |w| must be < 1");
    if (!beta.kernel_admissible(N)) throw std::invalid_argument("kernel_at: weights fail kernel-existence check");
    std::vector<Complex> c(N + 1);
    double norm_sq = 0.0;
    Complex wbar_pow(1.0);
    double r2 = std::norm(w), r2_pow = 1.0;
    for (std::size_t n = 0; n <= N; ++n) {
        const double b2 = beta.at_sq(n);
        c[n] = wbar_pow / b2;
        norm_sq += r2_pow / b2;
        wbar_pow *= std::conj(w);
        r2_pow *= r2;
    }
    return ReproducingKernel{w, TruncatedSeries(std::move(c)), norm_sq};
}

}  // namespace semiflow
