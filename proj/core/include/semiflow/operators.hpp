// Copyright (c) the semiflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

#include "semiflow/flow.hpp"
#include "semiflow/series.hpp"

namespace semiflow {

/// Compression of C_phi or of A = G d/dz to the span of the first N+1
/// orthonormal monomials z^n / beta_n. Entry (i, j) holds the i-th
/// orthonormal coefficient of the image of the j-th basis vector; its largest
/// singular value is a lower bound on the operator norm.
struct FiniteSection {
    enum class Kind { Composition, Generator };
    Kind kind = Kind::Composition;
    std::size_t dim = 0;    // N+1
    Eigen::MatrixXcd entries;
    WeightSequence space = WeightSequence::hardy();
    TruncatedSeries symbol;
    double tail_mass = 0.0;    // worst relative column mass cut off beyond N
    bool reliable = true;      // tail_mass <= 1e-8
};

FiniteSection finite_section(FiniteSection::Kind kind, const TruncatedSeries& symbol,
                             std::size_t N, const WeightSequence& beta);

/// Largest singular value of the section.
double operator_norm(const FiniteSection& section);

/// ((1 + |phi(0)|) / (1 - |phi(0)|))^{1/2}; valid for every analytic self-map.
double hardy_norm_bound(Complex phi0);

/// sqrt((L + 2 + sqrt(L (4 + L))) / 2) with L = log(1/(1 - |phi(0)|^2));
/// sharp bound for composition by univalent self-maps on the Dirichlet space.
double dirichlet_norm_bound(Complex phi0);

struct GrowthFit {
    double w_hat = 0.0;           // max over the grid of log(norm)/t
    double small_t_slope = 0.0;   // LSQ slope of (norm - 1) vs t on the three smallest t
    std::vector<double> times;
    std::vector<double> norms;
    bool reliable = true;
};

/// Finite-section norms of C_{phi_t} along the flow of G (closed-form
/// classifiable G) and the fitted quasicontractivity data.
GrowthFit growth_bound_fit(const TruncatedSeries& G, const WeightSequence& beta, std::size_t N,
                           std::span<const double> t_grid);

/// <G f', f> / <f, f> in H^2(beta). The Dirichlet weight reproduces the
/// Dirichlet inner product.
Complex rayleigh_quotient(const TruncatedSeries& G, const TruncatedSeries& f,
                          const WeightSequence& beta);

struct RangeProbeResult {
    std::string probe_kind;
    Complex rayleigh{0.0, 0.0};
    double re_part = 0.0;
};

/// Rayleigh quotient of A at the truncated normalized kernel,
///   (conj(w) G(w) / |w|^2) * (sum n |w|^{2n}/beta_n^2) / (sum |w|^{2n}/beta_n^2),
/// for decreasing weights (or Hardy). Requires 0 < |w| < 1.
RangeProbeResult kernel_probe(const TruncatedSeries& G, Complex w, const WeightSequence& beta,
                              std::size_t N);

/// Radius (1/2)^{1/(2N+2)} past which the kernel-norm tail beyond index N
/// dominates the head, for decreasing weights.
double tail_threshold(std::size_t N, const WeightSequence& beta);

/// Unit-norm probe polynomial c_N sum_{n=1}^N (sqrt(6) e^{-i n theta} / (pi n^{1-alpha})) z^n
/// for the weight beta_n = n^{-alpha} (beta_0 = 1).
TruncatedSeries fN_witness(double theta, std::size_t N, double alpha_exp,
                           const WeightSequence& beta);

/// Rayleigh quotient of A at the fN witness.
RangeProbeResult fN_probe(const TruncatedSeries& G, double theta, std::size_t N, double alpha_exp,
                          const WeightSequence& beta);

/// Probe built from f by f_k' = z^k f', f_k(0) = 0; Rayleigh quotient of A at
/// f_k in the Dirichlet space. The numerator is k-independent while
/// ||f_k||_D -> 0, so Re blows up whenever the boundary test fails.
RangeProbeResult dirichlet_shift_witness(const TruncatedSeries& f, std::size_t k,
                                         const TruncatedSeries& G);

}  // namespace semiflow
