// Copyright (c) the semiflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "semiflow/generator.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace semiflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double condition_b_expr(const TruncatedSeries& G, const TruncatedSeries& Gp, double r,
                        double theta) {
    const Complex z = std::polar(r, theta);
    // 1 - |z|^2 as (1-r)(1+r) keeps precision for r close to 1.
    return 2.0 * std::real(std::conj(z) * G.eval(z)) +
           (1.0 - r) * (1.0 + r) * std::real(Gp.eval(z));
}

struct GridBest {
    double value = -std::numeric_limits<double>::infinity();
    double r = 0.0;
    double theta = 0.0;
};

void scan_rect(const TruncatedSeries& G, const TruncatedSeries& Gp, double r_lo, double r_hi,
               double th_lo, double th_hi, std::size_t n_r, std::size_t n_th, GridBest& best,
               std::size_t& evals, bool at_top_edge_out[1] = nullptr) {
    for (std::size_t j = 0; j < n_th; ++j) {
        const double th = n_th == 1 ? th_lo : th_lo + (th_hi - th_lo) * double(j) / double(n_th - 1);
        for (std::size_t i = 0; i < n_r; ++i) {
            const double r = n_r == 1 ? r_lo : r_lo + (r_hi - r_lo) * double(i) / double(n_r - 1);
            const double v = condition_b_expr(G, Gp, r, th);
            ++evals;
            if (v > best.value) {
                best = {v, r, th};
                if (at_top_edge_out) at_top_edge_out[0] = (i + 1 == n_r);
            }
        }
    }
}

}  // namespace

TruncatedSeries tilde_transform(const TruncatedSeries& G) {
    const std::size_t N = G.trunc_order();
    const std::size_t order = std::max<std::size_t>(N >= 1 ? N - 1 : 1, 1);
    std::vector<Complex> c(order + 1, Complex(0.0));
    c[0] = G.coeff(1);
    c[1] = G.coeff(2) + std::conj(G.coeff(0));
    for (std::size_t n = 3; n <= N; ++n) c[n - 1] = G.coeff(n);
    return TruncatedSeries(std::move(c), G.tail_dropped());
}

ConditionAResult condition_a(const TruncatedSeries& G, double marginal_band) {
    double value = std::real(G.coeff(1)) + std::abs(std::conj(G.coeff(0)) + G.coeff(2));
    for (std::size_t n = 3; n <= G.trunc_order(); ++n) value += std::abs(G.coeff(n));
    ConditionAResult res;
    res.value = value;
    res.pass = value <= 0.0;
    res.marginal = std::abs(value) <= marginal_band;
    return res;
}

ConditionBResult condition_b_grid(const TruncatedSeries& G, const DiscGridSpec& grid, double tol) {
    if (grid.n_radii == 0 || grid.n_angles == 0)
        throw std::invalid_argument("condition_b_grid: empty grid");
    if (!(grid.r_min > 0.0) || !(grid.r_max < 1.0) || grid.r_min > grid.r_max)
        throw std::invalid_argument("condition_b_grid: radii must satisfy 0 < r_min <= r_max < 1");

    const TruncatedSeries Gp = G.derivative();
    GridBest best;
    std::size_t evals = 0;

    scan_rect(G, Gp, grid.r_min, grid.r_max, 0.0, kTwoPi * (1.0 - 1.0 / double(grid.n_angles)),
              grid.n_radii, grid.n_angles, best, evals);

    double dr = (grid.r_max - grid.r_min) / double(std::max<std::size_t>(grid.n_radii - 1, 1));
    double dth = kTwoPi / double(grid.n_angles);

    if (grid.boundary_ring) {
        // Narrow positive bumps of the boundary function are easiest to see
        // on a rim very close to |z| = 1.
        GridBest ring;
        std::size_t ring_evals = 0;
        const std::size_t m = 4096;
        scan_rect(G, Gp, 1.0 - 1e-9, 1.0 - 1e-9, 0.0, kTwoPi * (1.0 - 1.0 / double(m)), 1, m, ring,
                  ring_evals);
        evals += ring_evals;
        if (ring.value > best.value) {
            best = ring;
            dr = 1e-4;
            dth = kTwoPi / double(m);
        }
    }

    const double r_cap = 1.0 - 1e-13;
    double r_lo = std::max(best.r - dr, 1e-8);
    double r_hi = std::min(best.r + dr, r_cap);
    double th_lo = best.theta - dth;
    double th_hi = best.theta + dth;
    const std::size_t m = 17;

    for (std::size_t level = 0; level < grid.refine_levels; ++level) {
        bool top_edge = false;
        scan_rect(G, Gp, r_lo, r_hi, th_lo, th_hi, m, m, best, evals, &top_edge);
        const double r_span = (r_hi - r_lo) * 2.0 / double(m - 1);
        const double th_span = (th_hi - th_lo) * 2.0 / double(m - 1);
        th_lo = best.theta - th_span;
        th_hi = best.theta + th_span;
        if (top_edge && r_hi < r_cap) {
            // Maximiser pinned to the rim: push the radial window toward 1.
            r_lo = r_hi - (r_hi - r_lo) / double(m - 1);
            r_hi = std::min(r_cap, 1.0 - (1.0 - r_hi) / 8.0);
        } else {
            r_lo = std::max(best.r - r_span, 1e-8);
            r_hi = std::min(best.r + r_span, r_cap);
        }
    }

    ConditionBResult res;
    res.max_value = best.value;
    res.arg_max = std::polar(best.r, best.theta);
    res.pass = best.value <= tol;
    res.marginal = std::abs(best.value) <= 10.0 * tol;
    res.points_evaluated = evals;
    return res;
}

std::vector<Complex> polynomial_roots(const TruncatedSeries& p) {
    const double scale = p.max_abs_coeff();
    if (scale == 0.0) throw std::invalid_argument("polynomial_roots: zero polynomial");
    const std::size_t deg = p.degree(1e-14 * scale);
    if (deg == 0) return {};

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(long(deg), long(deg));
    const Complex lead = p.coeff(deg);
    for (std::size_t i = 1; i < deg; ++i) companion(long(i), long(i - 1)) = 1.0;
    for (std::size_t i = 0; i < deg; ++i) companion(long(i), long(deg - 1)) = -p.coeff(i) / lead;

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("polynomial_roots: companion eigensolve did not converge");

    std::vector<Complex> roots(deg);
    for (std::size_t i = 0; i < deg; ++i) roots[i] = solver.eigenvalues()(long(i));
    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

CircleMax max_re_on_circle(const TruncatedSeries& poly, BoundaryMode mode) {
    const auto boundary_value = [&poly](double theta) {
        return std::real(poly.eval(std::polar(1.0, theta)));
    };

    CircleMax out;
    if (mode == BoundaryMode::Sampled) {
        const std::size_t m = 1u << 14;
        out.method = "sampled";
        out.value = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m; ++j) {
            const double th = kTwoPi * double(j) / double(m);
            const double v = boundary_value(th);
            if (v > out.value) {
                out.value = v;
                out.theta = th;
            }
        }
        // Ternary polish inside the winning cell; still evaluation-only.
        double lo = out.theta - kTwoPi / double(m), hi = out.theta + kTwoPi / double(m);
        for (int it = 0; it < 90; ++it) {
            const double t1 = lo + (hi - lo) / 3.0, t2 = hi - (hi - lo) / 3.0;
            if (boundary_value(t1) < boundary_value(t2)) lo = t1; else hi = t2;
        }
        const double mid = 0.5 * (lo + hi), polished = boundary_value(mid);
        if (polished > out.value) {
            out.value = polished;
            out.theta = mid;
        }
        return out;
    }

    const double scale = poly.max_abs_coeff();
    const std::size_t d = scale == 0.0 ? 0 : poly.degree(1e-14 * scale);
    if (d == 0) {
        out.method = "certified";
        out.value = std::real(poly.coeff(0));
        out.theta = 0.0;
        return out;
    }

    // b(theta) = Re sum p_k e^{ik theta}; b'(theta) = 0 becomes the algebraic
    // equation P(u) = 0 on |u| = 1 with
    //   P(u) = sum_k (ik/2) p_k u^{d+k} - sum_k (ik/2) conj(p_k) u^{d-k}.
    std::vector<Complex> pc(2 * d + 1, Complex(0.0));
    for (std::size_t k = 1; k <= d; ++k) {
        const Complex w = Complex(0.0, 0.5 * double(k));
        pc[d + k] += w * poly.coeff(k);
        pc[d - k] -= w * std::conj(poly.coeff(k));
    }

    std::vector<double> candidates;
    bool fell_back = false;
    try {
        for (Complex u : polynomial_roots(TruncatedSeries(std::move(pc)))) {
            if (std::abs(std::abs(u) - 1.0) < 1e-6) candidates.push_back(std::arg(u));
        }
    } catch (const std::runtime_error&) {
        fell_back = true;
    }

    if (fell_back) {
        CircleMax sampled = max_re_on_circle(poly, BoundaryMode::Sampled);
        sampled.notes.push_back("companion eigensolve failed; fell back to sampled boundary scan");
        return sampled;
    }

    // A coarse scan guards against critical points lost to root clustering.
    const std::size_t coarse = 1024;
    double coarse_best = -std::numeric_limits<double>::infinity(), coarse_theta = 0.0;
    for (std::size_t j = 0; j < coarse; ++j) {
        const double th = kTwoPi * double(j) / double(coarse);
        const double v = boundary_value(th);
        if (v > coarse_best) {
            coarse_best = v;
            coarse_theta = th;
        }
    }
    candidates.push_back(coarse_theta);

    out.method = "certified";
    out.value = -std::numeric_limits<double>::infinity();
    for (double th : candidates) {
        const double v = boundary_value(th);
        if (v > out.value) {
            out.value = v;
            out.theta = th;
        }
    }
    return out;
}

ConditionCResult condition_c(const TruncatedSeries& G, BoundaryMode mode, double tol) {
    ConditionCResult res;
    if (G.tail_dropped())
        res.notes.push_back("input carries a truncation notice; boundary extremum refers to the truncated series");
    const CircleMax m = max_re_on_circle(tilde_transform(G), mode);
    res.boundary_max = m.value;
    res.theta_max = m.theta;
    res.method = m.method;
    res.pass = m.value <= tol;
    res.marginal = std::abs(m.value) <= 10.0 * tol;
    for (const std::string& n : m.notes) res.notes.push_back(n);
    return res;
}

BerksonPortaResult berkson_porta_factor(const TruncatedSeries& G, Complex alpha, std::size_t cap,
                                        double tol) {
    const double amod = std::abs(alpha);
    if (amod > 1.0 + 1e-12)
        throw std::invalid_argument("berkson_porta_factor: |alpha| must be <= 1");
    const double scale = std::max(1.0, G.max_abs_coeff());
    const std::size_t N = G.trunc_order();

    BerksonPortaResult res;
    const bool boundary = amod >= 1.0 - 1e-12;

    if (!boundary && std::abs(G.eval(alpha)) > tol * scale)
        throw std::invalid_argument("berkson_porta_factor: alpha is not a zero of G");

    std::vector<Complex> f;
    if (!boundary && amod < 1e-14) {
        // Denominator is -z.
        f.resize(std::max<std::size_t>(N, 1));
        for (std::size_t n = 0; n + 1 <= N; ++n) f[n] = -G.coeff(n + 1);
    } else if (!boundary) {
        // Deflate the interior zero from the top, then divide by (conj(a) z - 1).
        std::vector<Complex> q(N, Complex(0.0));
        if (N >= 1) {
            q[N - 1] = G.coeff(N);
            for (std::size_t k = N - 1; k >= 1; --k) q[k - 1] = G.coeff(k) + alpha * q[k];
        }
        f.resize(cap + 1, Complex(0.0));
        const Complex abar = std::conj(alpha);
        f[0] = q.empty() ? Complex(0.0) : -q[0];
        for (std::size_t n = 1; n <= cap; ++n)
            f[n] = abar * f[n - 1] - (n < q.size() ? q[n] : Complex(0.0));
    } else {
        // |alpha| = 1: denominator equals conj(alpha) (z - alpha)^2; the pole
        // sits on the boundary so two series divisions by (z - alpha) apply.
        auto divide = [&alpha, cap](const TruncatedSeries& p) {
            std::vector<Complex> w(cap + 1, Complex(0.0));
            Complex prev(0.0);
            for (std::size_t n = 0; n <= cap; ++n) {
                w[n] = (prev - p.coeff(n)) / alpha;
                prev = w[n];
            }
            return TruncatedSeries(std::move(w));
        };
        TruncatedSeries H = divide(divide(G));
        f.assign(H.coeffs().begin(), H.coeffs().end());
        for (Complex& c : f) c *= alpha;
        res.notes.push_back("boundary Denjoy-Wolff factorization; factor series truncated at cap");
    }

    // Trim negligible tail coefficients.
    double fmax = 0.0;
    for (Complex c : f) fmax = std::max(fmax, std::abs(c));
    std::size_t last = 0;
    for (std::size_t n = 0; n < f.size(); ++n)
        if (std::abs(f[n]) > 1e-16 * std::max(fmax, 1.0)) last = n;
    if (last + 1 == f.size() && f.size() == cap + 1 && fmax > 0.0 &&
        std::abs(f.back()) > 1e-12 * fmax)
        res.notes.push_back("factor series reaches the coefficient cap; boundary minimum refers to the truncation");
    f.resize(last + 1);
    res.factor = TruncatedSeries(std::move(f));

    const TruncatedSeries denom(
        std::vector<Complex>{alpha, -(1.0 + amod * amod), std::conj(alpha)});
    const TruncatedSeries recon = multiply(res.factor, denom, cap + 2);
    // The product is exact when the factor ended below the cap; otherwise the
    // match is only guaranteed through the cap itself.
    const std::size_t check_through =
        res.factor.trunc_order() + 2 <= cap ? std::max(N, res.factor.trunc_order() + 2) : cap;
    double residual = 0.0;
    for (std::size_t n = 0; n <= check_through; ++n)
        residual = std::max(residual, std::abs(recon.coeff(n) - G.coeff(n)));
    res.residual = residual;
    if (residual > std::max(tol, 1e-7) * scale)
        throw std::invalid_argument("berkson_porta_factor: division residual above tolerance");

    TruncatedSeries neg = res.factor;
    neg *= Complex(-1.0);
    const CircleMax m = max_re_on_circle(neg, BoundaryMode::Certified);
    res.re_min = -m.value;
    res.theta_min = m.theta;
    res.pass = res.re_min >= -tol;
    for (const std::string& n : m.notes) res.notes.push_back(n);
    return res;
}

std::vector<ToeplitzTestResult> caratheodory_toeplitz(const TruncatedSeries& f,
                                                      std::size_t k_max) {
    if (k_max < 1) throw std::invalid_argument("caratheodory_toeplitz: k_max must be >= 1");
    std::vector<ToeplitzTestResult> out;
    out.reserve(k_max);
    for (std::size_t k = 1; k <= k_max; ++k) {
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(long(k), long(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i; j < k; ++j) M(long(i), long(j)) = f.coeff(j - i);
        ToeplitzTestResult r;
        r.order = k;
        r.n_matrix = M + M.adjoint();

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r.n_matrix,
                                                           Eigen::EigenvaluesOnly);
        r.min_eigenvalue = es.eigenvalues().minCoeff();

        r.leading_minors.resize(k);
        bool all_minors_positive = true;
        for (std::size_t p = 1; p <= k; ++p) {
            const double det =
                p == 1 ? r.n_matrix(0, 0).real()
                       : r.n_matrix.topLeftCorner(long(p), long(p)).determinant().real();
            r.leading_minors[p - 1] = det;
            all_minors_positive = all_minors_positive && det > 0.0;
        }

        const double inf_norm = r.n_matrix.cwiseAbs().rowwise().sum().maxCoeff();
        const double psd_tol = 1e-9 * (1.0 + inf_norm);
        if (all_minors_positive && r.min_eigenvalue > 0.0)
            r.verdict = ToeplitzTestResult::Verdict::PositiveDefinite;
        else if (r.min_eigenvalue >= -psd_tol)
            r.verdict = ToeplitzTestResult::Verdict::PositiveSemiDefinite;
        else
            r.verdict = ToeplitzTestResult::Verdict::Indefinite;
        out.push_back(std::move(r));
    }
    return out;
}

bool toeplitz_all_psd(const std::vector<ToeplitzTestResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const ToeplitzTestResult& r) {
        return r.verdict != ToeplitzTestResult::Verdict::Indefinite;
    });
}

RootObstructionResult root_obstruction(const TruncatedSeries& G, double tol) {
    if (G.max_abs_coeff() == 0.0)
        throw std::invalid_argument("root_obstruction: zero polynomial");
    RootObstructionResult res;
    res.roots = polynomial_roots(G);
    if (res.roots.empty()) {
        res.min_abs_root = std::numeric_limits<double>::infinity();
        res.obstructed = true;    // nonzero constant: vacuously no root in the closed disc
        return res;
    }
    res.min_abs_root = std::abs(res.roots.front());
    for (Complex r : res.roots) res.min_abs_root = std::min(res.min_abs_root, std::abs(r));
    res.obstructed = res.min_abs_root > 1.0 + tol;
    return res;
}

std::string to_string(GenerationVerdict v) {
    switch (v) {
        case GenerationVerdict::Generates: return "generates";
        case GenerationVerdict::DoesNotGenerate: return "does-not-generate";
        case GenerationVerdict::Marginal: return "marginal";
    }
    return "?";
}

ConditionReport analyze_generator(const TruncatedSeries& G, const AnalyzeOptions& opts) {
    ConditionReport rep;
    rep.condition_a = condition_a(G, opts.marginal_band);
    rep.condition_b = condition_b_grid(G, opts.grid, opts.tol);
    rep.condition_c = condition_c(G, opts.boundary_mode, opts.tol);

    if (G.max_abs_coeff() == 0.0) {
        rep.root_obstruction.obstructed = false;
        rep.root_obstruction.min_abs_root = 0.0;
        rep.notes.push_back("zero generator: trivial identity semigroup");
        rep.verdict = GenerationVerdict::Generates;
        return rep;
    }
    rep.root_obstruction = root_obstruction(G);

    if (rep.condition_a.marginal) rep.notes.push_back("condition (A) value within the marginal band");
    if (rep.condition_b.marginal) rep.notes.push_back("condition (B) extremum within the marginal band");
    if (rep.condition_c.marginal) rep.notes.push_back("condition (C) extremum within the marginal band");
    if (rep.condition_b.pass != rep.condition_c.pass)
        rep.notes.push_back("grid (B) and boundary (C) verdicts disagree; extremum likely boundary-degenerate");

    if (rep.root_obstruction.obstructed) {
        rep.notes.push_back("symbol has no root in the closed unit disc; not a semigroup generator");
        rep.verdict = GenerationVerdict::DoesNotGenerate;
    } else if (rep.condition_c.marginal) {
        rep.verdict = GenerationVerdict::Marginal;
    } else {
        rep.verdict = rep.condition_c.pass ? GenerationVerdict::Generates
                                           : GenerationVerdict::DoesNotGenerate;
    }
    return rep;
}

void GeneratorSpec::set_dw_point(Complex alpha, double tol) {
    if (std::abs(alpha) > 1.0 + tol)
        throw std::invalid_argument("GeneratorSpec: Denjoy-Wolff point must lie in the closed disc");
    if (std::abs(alpha) < 1.0 - tol && G_.max_abs_coeff() > 0.0) {
        if (std::abs(G_.eval(alpha)) > tol * std::max(1.0, G_.max_abs_coeff()))
            throw std::invalid_argument("GeneratorSpec: interior Denjoy-Wolff point must be a zero of G");
    }
    dw_ = alpha;
}

}  // namespace semiflow
