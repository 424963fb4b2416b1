// Copyright (c) the semiflow contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "semiflow/generator.hpp"
#include "semiflow/operators.hpp"

using namespace semiflow;

namespace {

TruncatedSeries series(std::vector<Complex> c) { return TruncatedSeries(std::move(c)); }

// (z + 1/2) / (1 + z/2) expanded; coefficients 0.75 (-1/2)^{k-1} after the head
TruncatedSeries half_automorphism(std::size_t order) {
    std::vector<Complex> c(order + 1);
    c[0] = 0.5;
    double p = 1.0;
    for (std::size_t k = 1; k <= order; ++k) {
        c[k] = 0.75 * p;
        p *= -0.5;
    }
    return TruncatedSeries(std::move(c));
}

// Flow fixtures known to pass the boundary test.
std::vector<TruncatedSeries> flow_fixtures() {
    return {
        series({0.0, -1.0}),
        series({0.3, -1.0}),
        series({Complex(0.0, 0.1), -2.0}),
        series({-1.0, 0.0, 1.0}),
        series({1.0, -2.0, 1.0}),
        series({-0.5, 0.0, 0.5}),
        series({0.2, -1.5, 0.1}),
        series({0.0, -1.0, 0.2}),
        series({0.0, -1.0, 0.0, 0.25}),
        series({0.0, -1.25, 0.0, 0.5}),
    };
}

}  // namespace

TEST_CASE("finite sections of diagonal symbols") {
    const auto hardy = WeightSequence::hardy();

    const Complex lambda(0.4, 0.3);
    const auto comp =
        finite_section(FiniteSection::Kind::Composition, series({0.0, lambda}), 12, hardy);
    for (std::size_t j = 0; j <= 12; ++j) {
        Complex pow(1.0);
        for (std::size_t i = 0; i < j; ++i) pow *= lambda;
        CHECK(std::abs(comp.entries(long(j), long(j)) - pow) < 1e-14);
    }
    CHECK(comp.tail_mass == 0.0);

    for (const auto& beta :
         {WeightSequence::hardy(), WeightSequence::dirichlet(), WeightSequence::bergman()}) {
        const auto gen = finite_section(FiniteSection::Kind::Generator, series({0.0, -1.0}), 10, beta);
        for (std::size_t j = 0; j <= 10; ++j)
            CHECK(std::abs(gen.entries(long(j), long(j)) + Complex(double(j))) < 1e-14);
    }
}

TEST_CASE("finite section columns are shifted binomials") {
    const auto sec = finite_section(FiniteSection::Kind::Composition,
                                    series({0.25, 0.5}), 32, WeightSequence::hardy());
    // column 2 = coefficients of (z/2 + 1/4)^2 = 1/16 + z/4 + z^2/4
    CHECK(std::abs(sec.entries(0, 2) - Complex(1.0 / 16)) < 1e-15);
    CHECK(std::abs(sec.entries(1, 2) - Complex(0.25)) < 1e-15);
    CHECK(std::abs(sec.entries(2, 2) - Complex(0.25)) < 1e-15);
    CHECK(std::abs(sec.entries(3, 2)) == 0.0);
    CHECK_THROWS_AS(
        finite_section(FiniteSection::Kind::Composition, series({1.5, 0.5}), 8, WeightSequence::hardy()),
        std::invalid_argument);
}

TEST_CASE("operator norms of sections") {
    const auto hardy = WeightSequence::hardy();
    const auto diag =
        finite_section(FiniteSection::Kind::Composition, series({0.0, 0.6}), 24, hardy);
    CHECK(operator_norm(diag) == doctest::Approx(1.0).epsilon(1e-12));

    FiniteSection zero;
    zero.dim = 5;
    zero.entries = Eigen::MatrixXcd::Zero(5, 5);
    CHECK(operator_norm(zero) == 0.0);

    const auto aut64 =
        finite_section(FiniteSection::Kind::Composition, half_automorphism(256), 64, hardy);
    const double n64 = operator_norm(aut64);
    CHECK(n64 >= 1.7);
    CHECK(n64 <= std::sqrt(3.0) + 1e-9);

    const auto aut128 =
        finite_section(FiniteSection::Kind::Composition, half_automorphism(256), 128, hardy);
    const double n128 = operator_norm(aut128);
    CHECK(n128 >= n64 - 1e-12);
    // independent power-iteration oracle (linear convergence: modest tolerance)
    CHECK(std::abs(n128 - oracles::power_iteration_norm(aut128.entries)) < 1e-6);
}

TEST_CASE("monotone sections in N") {
    const auto hardy = WeightSequence::hardy();
    double prev = 0.0;
    for (std::size_t N : {16u, 32u, 64u, 128u}) {
        const auto sec =
            finite_section(FiniteSection::Kind::Composition, half_automorphism(300), N, hardy);
        const double n = operator_norm(sec);
        CHECK(n >= prev - 1e-12);
        prev = n;
    }
}

TEST_CASE("norm bounds") {
    CHECK(hardy_norm_bound(Complex(0.0)) == 1.0);
    CHECK(hardy_norm_bound(Complex(0.5)) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(hardy_norm_bound(Complex(0.9)) == doctest::Approx(std::sqrt(19.0)).epsilon(1e-12));
    CHECK_THROWS_AS(hardy_norm_bound(Complex(1.0)), std::invalid_argument);

    CHECK(dirichlet_norm_bound(Complex(0.0)) == 1.0);
    const double golden = std::sqrt((3.0 + std::sqrt(5.0)) / 2.0);
    CHECK(std::abs(dirichlet_norm_bound(Complex(std::sqrt(1.0 - std::exp(-1.0)))) - golden) <
          1e-12);
    // independent arithmetic for |phi0| = 0.5
    const double L = std::log(1.0 / (1.0 - 0.25));
    const double expected = std::sqrt((L + 2.0 + std::sqrt(L * (4.0 + L))) / 2.0);
    CHECK(dirichlet_norm_bound(Complex(0.5)) == doctest::Approx(expected).epsilon(1e-15));
    CHECK_THROWS_AS(dirichlet_norm_bound(Complex(0.0, 1.0)), std::invalid_argument);
}

TEST_CASE("growth bound fits") {
    const std::vector<double> grid{0.001, 0.002, 0.005, 0.01, 0.1, 0.5, 1.0};

    const auto flat = growth_bound_fit(series({0.0, -1.0}), WeightSequence::hardy(), 32, grid);
    CHECK(std::abs(flat.w_hat) < 1e-9);
    for (double n : flat.norms) CHECK(n == doctest::Approx(1.0).epsilon(1e-12));

    const auto flat_d =
        growth_bound_fit(series({0.0, -1.0}), WeightSequence::dirichlet(), 32, grid);
    CHECK(std::abs(flat_d.w_hat) < 1e-9);

    const auto shifted = growth_bound_fit(series({0.1, -1.0}), WeightSequence::hardy(), 64, grid);
    CHECK(std::isfinite(shifted.w_hat));
    CHECK(std::isfinite(shifted.small_t_slope));
    for (std::size_t i = 0; i < shifted.times.size(); ++i)
        CHECK(shifted.norms[i] <= std::exp(shifted.w_hat * shifted.times[i]) * (1.0 + 1e-12));

    const auto coarse = growth_bound_fit(series({0.1, -1.0}), WeightSequence::hardy(), 128, grid);
    CHECK(std::abs(coarse.w_hat - shifted.w_hat) < 1e-3);

    CHECK_THROWS_AS(growth_bound_fit(series({0.0, -1.0}), WeightSequence::hardy(), 16,
                                     std::vector<double>{}),
                    std::invalid_argument);
}

TEST_CASE("rayleigh quotients") {
    for (std::size_t n : {1u, 2u, 5u}) {
        for (const auto& beta : {WeightSequence::hardy(), WeightSequence::dirichlet()}) {
            const Complex q =
                rayleigh_quotient(series({0.0, -1.0}), TruncatedSeries::monomial(n), beta);
            CHECK(std::abs(q - Complex(-double(n))) < 1e-13);
        }
    }
    CHECK_THROWS_AS(rayleigh_quotient(series({0.0, -1.0}), series({0.0}), WeightSequence::hardy()),
                    std::invalid_argument);
}

TEST_CASE("Dirichlet Rayleigh quotient matches the boundary integral") {
    std::mt19937 rng(107);
    for (int rep = 0; rep < 15; ++rep) {
        const TruncatedSeries G(oracles::random_poly(rng, 6, 1.0));
        auto fc = oracles::random_poly(rng, 6, 1.0);
        fc[1] += 0.5;    // keep f' away from zero
        const TruncatedSeries f(fc);

        const Complex q = rayleigh_quotient(G, f, WeightSequence::dirichlet());
        const double norm_sq = dirichlet_inner(f, f).real();

        const auto fprime = f.derivative();
        const double integral = oracles::circle_average([&](double th) {
            const Complex z = std::polar(1.0, th);
            return std::real(G.eval(z) * std::conj(z) * std::norm(fprime.eval(z)));
        });
        const double expected =
            integral + std::real(G.eval(Complex(0.0)) * fprime.eval(Complex(0.0)) *
                                 std::conj(f.eval(Complex(0.0))));
        CHECK(std::abs(q.real() * norm_sq - expected) < 1e-8);
    }
}

TEST_CASE("kernel probes") {
    const auto hardy = WeightSequence::hardy();

    const auto contract = kernel_probe(series({0.0, -1.0}), Complex(0.5), hardy, 60);
    CHECK(std::abs(contract.re_part - (-1.0 / 3.0)) < 1e-10);

    // geometric-series oracle: truncated sums in closed form
    const auto probe9 = kernel_probe(series({0.0, 1.0}), Complex(0.9), hardy, 60);
    const double x = 0.81;
    const int N = 60;
    const double den = (1.0 - std::pow(x, N + 1)) / (1.0 - x);
    const double num =
        x * (1.0 - double(N + 1) * std::pow(x, N) + double(N) * std::pow(x, N + 1)) /
        ((1.0 - x) * (1.0 - x));
    CHECK(std::abs(probe9.rayleigh - Complex(num / den)) < 1e-12);
    CHECK(std::abs(probe9.re_part - 0.81 / 0.19) < 1e-3);

    CHECK_THROWS_AS(kernel_probe(series({0.0, 1.0}), Complex(0.0), hardy, 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(kernel_probe(series({0.0, 1.0}), Complex(0.5), WeightSequence::dirichlet(), 10),
                    std::invalid_argument);
    CHECK_NOTHROW(kernel_probe(series({0.0, 1.0}), Complex(0.5), WeightSequence::bergman(), 10));
}

TEST_CASE("kernel probe divergence toward the boundary") {
    // fixtures with a strictly positive boundary maximum
    const std::vector<TruncatedSeries> gens = {
        series({0.0, 1.0}),            // delta = 1
        series({0.5, 0.0, 1.0}),       // tilde: 1.5 at theta = 0
        series({Complex(0.5, 0.2)}),   // constant
    };
    for (const auto& G : gens) {
        const auto c = condition_c(G);
        REQUIRE(c.boundary_max > 0.0);
        const double delta = c.boundary_max;
        const std::size_t N = 300;
        const double threshold = tail_threshold(N, WeightSequence::hardy());
        REQUIRE(threshold < 0.999);

        double prev = -1e300;
        for (double r : {0.9, 0.99, 0.999}) {
            const Complex w = std::polar(r, c.theta_max);
            const auto probe = kernel_probe(G, w, WeightSequence::hardy(), 4000);
            CHECK(probe.re_part > prev);
            prev = probe.re_part;
            if (r == 0.999)
                CHECK(probe.re_part >= double(N + 1) / 2.0 * delta / 2.0);
        }
    }
}

TEST_CASE("tail threshold") {
    CHECK(tail_threshold(0, WeightSequence::hardy()) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(tail_threshold(4, WeightSequence::hardy()) ==
          doctest::Approx(std::pow(0.5, 0.1)).epsilon(1e-15));

    // direct summation: head < tail beyond the threshold radius (Hardy, N = 4)
    const double w = 0.95;
    REQUIRE(w > tail_threshold(4, WeightSequence::hardy()));
    double head = 0.0;
    for (int n = 0; n <= 4; ++n) head += std::pow(w, 2 * n);
    const double tail = std::pow(w, 10) / (1.0 - w * w);
    CHECK(head < tail);
}

TEST_CASE("fN witnesses") {
    const auto hardy = WeightSequence::hardy();
    for (double theta : {0.0, 1.1, -2.5}) {
        const TruncatedSeries f = fN_witness(theta, 16, 0.0, hardy);
        CHECK(std::abs(weighted_norm(f, hardy) - 1.0) < 1e-12);
    }

    // stated coefficients at alpha = 0, N = 3, theta = 0, then normalized
    const double r6pi = std::sqrt(6.0) / std::numbers::pi;
    std::vector<Complex> raw{0.0, r6pi, r6pi / 2.0, r6pi / 3.0};
    double norm = 0.0;
    for (Complex c : raw) norm += std::norm(c);
    norm = std::sqrt(norm);
    const TruncatedSeries f = fN_witness(0.0, 3, 0.0, hardy);
    for (std::size_t n = 0; n <= 3; ++n)
        CHECK(std::abs(f.coeff(n) - raw[n] / norm) < 1e-14);

    // power-decay weights
    const auto p = WeightSequence::power_decay(0.3, 64);
    CHECK(std::abs(weighted_norm(fN_witness(0.7, 32, 0.3, p), p) - 1.0) < 1e-12);
    CHECK_THROWS_AS(fN_witness(0.0, 8, 0.5, hardy), std::invalid_argument);
    CHECK_THROWS_AS(fN_witness(0.0, 0, 0.0, hardy), std::invalid_argument);

    // growing Rayleigh quotients when the boundary test fails
    double prev = -1e300;
    for (std::size_t N : {8u, 16u, 32u, 64u}) {
        const auto probe = fN_probe(series({0.0, 1.0}), 0.0, N, 0.0, hardy);
        CHECK(probe.re_part > prev);
        CHECK(probe.probe_kind.rfind("fN(", 0) == 0);
        prev = probe.re_part;
    }
}

TEST_CASE("Dirichlet shift witnesses") {
    // f = z, k = 3: f_3 = z^4/4 with Dirichlet norm^2 = 1/4; for G = z the
    // numerator is <z f', z f'>_{H^2} = 1, so the quotient is exactly 4.
    const auto res = dirichlet_shift_witness(TruncatedSeries::monomial(1), 3, series({0.0, 1.0}));
    CHECK(res.probe_kind == "dirichlet-shift(k=3)");
    CHECK(std::abs(res.rayleigh - Complex(4.0)) < 1e-12);

    // k = 0 reduces to f - f(0)
    std::mt19937 rng(109);
    const TruncatedSeries f(oracles::random_poly(rng, 6, 1.0));
    const auto base = dirichlet_shift_witness(f, 0, series({0.0, 1.0}));
    double expect = 0.0;
    for (std::size_t n = 1; n <= f.trunc_order(); ++n) expect += double(n) * std::norm(f.coeff(n));
    // reconstruct the numerator from the quotient and the norm identity
    CHECK(std::isfinite(base.re_part));
    CHECK(expect > 0.0);

    CHECK_THROWS_AS(dirichlet_shift_witness(series({0.0}), 2, series({0.0, 1.0})),
                    std::invalid_argument);
}

TEST_CASE("shift-witness numerator is independent of k") {
    std::mt19937 rng(113);
    for (int rep = 0; rep < 10; ++rep) {
        const TruncatedSeries G(oracles::random_poly(rng, 5, 1.0));
        auto fc = oracles::random_poly(rng, 5, 1.0);
        fc[1] += 1.0;
        const TruncatedSeries f(fc);

        // independent computation of <G f', z f'>_{H^2}
        const auto fprime = f.derivative();
        const TruncatedSeries gf = multiply(G, fprime, 32);
        Complex expected(0.0);
        for (std::size_t n = 0; n <= fprime.trunc_order(); ++n)
            expected += gf.coeff(n + 1) * std::conj(fprime.coeff(n));

        for (std::size_t k : {0u, 1u, 4u, 16u, 64u}) {
            const auto probe = dirichlet_shift_witness(f, k, G);
            double norm_sq = 0.0;
            for (std::size_t n = 1; n <= f.trunc_order(); ++n)
                norm_sq += std::norm(f.coeff(n)) * double(n) * double(n) / double(n + k);
            CHECK(std::abs(probe.re_part * norm_sq - expected.real()) < 1e-10);
        }
    }
}

TEST_CASE("shift-witness blow-up on the stored pair") {
    const TruncatedSeries f = TruncatedSeries::monomial(1);
    const TruncatedSeries G = TruncatedSeries::monomial(1);
    REQUIRE(condition_c(G).boundary_max > 0.0);
    const double at4 = dirichlet_shift_witness(f, 4, G).re_part;
    const double at64 = dirichlet_shift_witness(f, 64, G).re_part;
    CHECK(at4 > 0.0);
    CHECK(at64 >= 5.0 * at4);
}

TEST_CASE("dissipativity of the model contraction") {
    std::mt19937 rng(127);
    const TruncatedSeries G = series({0.0, -1.0});
    for (int rep = 0; rep < 500; ++rep) {
        const TruncatedSeries f(oracles::random_poly(rng, 10, 2.0));
        if (f.max_abs_coeff() == 0.0) continue;
        for (const auto& beta : {WeightSequence::hardy(), WeightSequence::dirichlet()}) {
            CHECK(rayleigh_quotient(G, f, beta).real() <= 1e-12);
        }
    }
}

TEST_CASE("section norms respect the composition bounds along flows") {
    const auto hardy = WeightSequence::hardy();
    const auto dirichlet = WeightSequence::dirichlet();
    for (const auto& G : flow_fixtures()) {
        REQUIRE(condition_c(G).pass);
        const auto model = SemiflowModel::classify(G);
        REQUIRE(model.is_closed_form());
        for (double t : {0.1, 0.5, 1.0}) {
            const TruncatedSeries phi = flow_series(model, t, 112);
            const Complex phi0 = evaluate_flow(model, t, Complex(0.0));
            const auto sh = finite_section(FiniteSection::Kind::Composition, phi, 64, hardy);
            CHECK(operator_norm(sh) <= hardy_norm_bound(phi0) + 1e-9);
            const auto sd = finite_section(FiniteSection::Kind::Composition, phi, 64, dirichlet);
            CHECK(operator_norm(sd) <= dirichlet_norm_bound(phi0) + 1e-9);
        }
    }
}
