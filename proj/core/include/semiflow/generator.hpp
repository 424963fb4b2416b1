// Copyright (c) the semiflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "semiflow/series.hpp"

namespace semiflow {

// ---------------------------------------------------------------------------
// Generation conditions for A f = G f'.
//
// (A)  Re a_1 + |conj(a_0) + a_2| + sum_{n>=3} |a_n| <= 0
// (B)  2 Re(conj(z) G(z)) + (1 - |z|^2) Re G'(z) <= 0 on the disc
// (C)  max over the unit circle of Re(conj(z) G(z)) <= 0
// ---------------------------------------------------------------------------

struct ConditionAResult {
    double value = 0.0;
    bool pass = false;
    bool marginal = false;
};

struct ConditionBResult {
    double max_value = 0.0;
    Complex arg_max{0.0, 0.0};
    bool pass = false;
    bool marginal = false;
    std::size_t points_evaluated = 0;
};

enum class BoundaryMode { Sampled, Certified };

struct ConditionCResult {
    double boundary_max = 0.0;
    double theta_max = 0.0;
    bool pass = false;
    bool marginal = false;
    std::string method;    // "sampled" | "certified"
    std::vector<std::string> notes;
};

struct RootObstructionResult {
    bool obstructed = false;
    std::vector<Complex> roots;
    double min_abs_root = 0.0;    // +inf when the root set is empty
};

enum class GenerationVerdict { Generates, DoesNotGenerate, Marginal };

struct ConditionReport {
    ConditionAResult condition_a;
    ConditionBResult condition_b;
    ConditionCResult condition_c;
    RootObstructionResult root_obstruction;
    GenerationVerdict verdict = GenerationVerdict::DoesNotGenerate;
    std::vector<std::string> notes;
};

/// Polar sampling of the open disc used by the condition-(B) cross-check.
/// After the coarse pass the argmax neighbourhood is refined; when the
/// maximiser sits on the outer rim the radial window is pushed toward 1.
struct DiscGridSpec {
    std::size_t n_radii = 100;
    std::size_t n_angles = 100;
    double r_min = 0.05;
    double r_max = 0.999;
    std::size_t refine_levels = 12;
    bool boundary_ring = true;    // extra dense ring near |z| = 1
};

/// The shifted symbol with Re(G~) = Re(conj(z) G(z)) on the unit circle:
/// (G~)_0 = a_1, (G~)_1 = a_2 + conj(a_0), (G~)_{n-1} = a_n for n >= 3.
TruncatedSeries tilde_transform(const TruncatedSeries& G);

ConditionAResult condition_a(const TruncatedSeries& G, double marginal_band = 1e-8);

ConditionBResult condition_b_grid(const TruncatedSeries& G, const DiscGridSpec& grid = {},
                                  double tol = 1e-9);

ConditionCResult condition_c(const TruncatedSeries& G,
                             BoundaryMode mode = BoundaryMode::Certified, double tol = 1e-9);

/// max over theta of Re(sum p_k e^{i k theta}). Certified mode locates the
/// critical points of the trigonometric polynomial through companion-matrix
/// roots; sampled mode scans a dense grid (2^14 points).
struct CircleMax {
    double value = 0.0;
    double theta = 0.0;
    std::string method;
    std::vector<std::string> notes;
};
CircleMax max_re_on_circle(const TruncatedSeries& poly, BoundaryMode mode);

/// All roots of a complex polynomial via the companion matrix. Coefficients
/// with magnitude below 1e-14 * max|c| are treated as zero at the top end.
std::vector<Complex> polynomial_roots(const TruncatedSeries& p);

/// Divides out the vanishing factor: G(z) = F(z) (conj(alpha) z - 1)(z - alpha).
struct BerksonPortaResult {
    TruncatedSeries factor;    // F
    double re_min = 0.0;       // min Re F over the circle (certified on the truncation)
    double theta_min = 0.0;
    bool pass = false;         // re_min >= -tol
    double residual = 0.0;     // max coefficient defect of G - F * denominator
    std::vector<std::string> notes;
};
BerksonPortaResult berkson_porta_factor(const TruncatedSeries& G, Complex alpha,
                                        std::size_t cap = kDefaultTruncCap, double tol = 1e-8);

struct ToeplitzTestResult {
    std::size_t order = 0;
    Eigen::MatrixXcd n_matrix;
    double min_eigenvalue = 0.0;
    std::vector<double> leading_minors;
    enum class Verdict { PositiveDefinite, PositiveSemiDefinite, Indefinite } verdict =
        Verdict::Indefinite;
};

/// Hermitian Toeplitz positivity test of whether f maps the disc into the
/// right half-plane: N_k = M_k + M_k^* must be PSD for every k.
std::vector<ToeplitzTestResult> caratheodory_toeplitz(const TruncatedSeries& f,
                                                      std::size_t k_max);
bool toeplitz_all_psd(const std::vector<ToeplitzTestResult>& results);

/// Polynomials with no roots in the closed unit disc cannot generate a
/// one-parameter semigroup; flags that obstruction.
RootObstructionResult root_obstruction(const TruncatedSeries& G, double tol = 1e-9);

struct AnalyzeOptions {
    DiscGridSpec grid;
    BoundaryMode boundary_mode = BoundaryMode::Certified;
    double tol = 1e-9;
    double marginal_band = 1e-8;
};

/// Runs (A), (B), (C) and the root obstruction; the decisive verdict comes
/// from the boundary test (C), with the obstruction overriding to a firm "no".
ConditionReport analyze_generator(const TruncatedSeries& G, const AnalyzeOptions& opts = {});

std::string to_string(GenerationVerdict v);

/// Generator symbol plus derived analysis artifacts.
class GeneratorSpec {
public:
    explicit GeneratorSpec(TruncatedSeries G) : G_(std::move(G)) {}

    const TruncatedSeries& symbol() const { return G_; }
    TruncatedSeries g_tilde() const { return tilde_transform(G_); }

    /// Caller-supplied Denjoy-Wolff point. Rejected when |alpha| > 1, or when
    /// alpha is interior and the (nonzero) polynomial G does not vanish there.
    void set_dw_point(Complex alpha, double tol = 1e-8);
    std::optional<Complex> dw_point() const { return dw_; }

private:
    TruncatedSeries G_;
    std::optional<Complex> dw_;
};

}  // namespace semiflow
