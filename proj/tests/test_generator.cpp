// Copyright (c) the semiflow contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "semiflow/generator.hpp"

using namespace semiflow;

namespace {

TruncatedSeries series(std::vector<Complex> c) { return TruncatedSeries(std::move(c)); }

const double kRt3 = std::sqrt(3.0);

// G(z) = -z + z^2/sqrt(3) - z^3/sqrt(3)
TruncatedSeries cubic_example() { return series({0.0, -1.0, 1.0 / kRt3, -1.0 / kRt3}); }

// Generators sampled for the equivalence suites: half unrestricted, half with
// a strongly negative linear coefficient so that passing cases appear too.
TruncatedSeries random_generator(std::mt19937& rng, std::size_t max_deg, double mag, bool biased) {
    std::uniform_int_distribution<std::size_t> degree(1, max_deg);
    auto c = oracles::random_poly(rng, degree(rng), biased ? 0.25 * mag : mag);
    if (biased) c[1] = Complex(-mag + 0.3 * c[1].real(), 0.2 * c[1].imag());
    return TruncatedSeries(c);
}

double boundary_oracle(const TruncatedSeries& G) {
    return oracles::circle_max([&G](double th) {
        const Complex z = std::polar(1.0, th);
        return std::real(std::conj(z) * G.eval(z));
    });
}

}  // namespace

TEST_CASE("tilde transform coefficients") {
    std::mt19937 rng(41);
    const auto c = oracles::random_poly(rng, 5, 2.0);
    const TruncatedSeries gt = tilde_transform(TruncatedSeries(c));
    CHECK(std::abs(gt.coeff(0) - c[1]) == 0.0);
    CHECK(std::abs(gt.coeff(1) - (c[2] + std::conj(c[0]))) == 0.0);
    for (std::size_t n = 3; n < c.size(); ++n) CHECK(std::abs(gt.coeff(n - 1) - c[n]) == 0.0);
}

TEST_CASE("condition (A) fixtures") {
    CHECK(condition_a(series({0.0})).value == 0.0);
    CHECK(condition_a(series({0.0})).pass);

    const auto neg = condition_a(series({0.0, -1.0}));
    CHECK(neg.value == doctest::Approx(-1.0));
    CHECK(neg.pass);

    const auto cubic = condition_a(cubic_example());
    CHECK(std::abs(cubic.value - (-1.0 + 2.0 / kRt3)) < 1e-12);
    CHECK(!cubic.pass);
}

TEST_CASE("condition (B) fixtures") {
    const auto neg = condition_b_grid(series({0.0, -1.0}));
    CHECK(neg.pass);
    CHECK(neg.max_value < -0.99);
    CHECK(neg.max_value > -1.01);

    const auto one = condition_b_grid(series({1.0}));
    CHECK(!one.pass);
    CHECK(one.max_value > 1.9);

    const auto cubic = condition_b_grid(cubic_example());
    CHECK(cubic.pass);
    CHECK(cubic.max_value <= 1e-9);
}

TEST_CASE("condition (C) fixtures") {
    for (BoundaryMode mode : {BoundaryMode::Certified, BoundaryMode::Sampled}) {
        const auto neg = condition_c(series({0.0, -1.0}), mode);
        CHECK(neg.boundary_max == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(neg.pass);

        const auto pos = condition_c(series({0.0, 1.0}), mode);
        CHECK(pos.boundary_max == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(!pos.pass);

        const auto cubic = condition_c(cubic_example(), mode);
        CHECK(std::abs(cubic.boundary_max - (-(1.0 - 9.0 / (8.0 * kRt3)))) < 1e-9);
        CHECK(cubic.pass);
    }
}

TEST_CASE("condition (B) grid options") {
    DiscGridSpec tiny;
    tiny.n_radii = 20;
    tiny.n_angles = 20;
    tiny.refine_levels = 4;
    tiny.boundary_ring = false;
    const auto res = condition_b_grid(series({0.0, -1.0}), tiny);
    CHECK(res.pass);
    CHECK(res.points_evaluated >= 400);

    DiscGridSpec bad;
    bad.n_radii = 0;
    CHECK_THROWS_AS(condition_b_grid(series({0.0, -1.0}), bad), std::invalid_argument);
    bad.n_radii = 10;
    bad.r_max = 1.0;
    CHECK_THROWS_AS(condition_b_grid(series({0.0, -1.0}), bad), std::invalid_argument);

    // determinism: repeated evaluation is bitwise identical
    const auto again = condition_b_grid(series({0.0, -1.0}), tiny);
    CHECK(res.max_value == again.max_value);
    CHECK(res.arg_max == again.arg_max);
}

TEST_CASE("certified and sampled boundary maxima agree") {
    std::mt19937 rng(43);
    for (int rep = 0; rep < 60; ++rep) {
        const TruncatedSeries G = random_generator(rng, 8, 2.0, rep % 2 == 0);
        const auto cert = condition_c(G, BoundaryMode::Certified);
        const auto samp = condition_c(G, BoundaryMode::Sampled);
        CHECK(std::abs(cert.boundary_max - samp.boundary_max) < 1e-8);
    }
}

TEST_CASE("boundary identity: max Re tilde(G) equals max Re(conj(z) G)") {
    std::mt19937 rng(47);
    for (int rep = 0; rep < 40; ++rep) {
        const TruncatedSeries G = random_generator(rng, 6, 2.0, rep % 2 == 0);
        const auto c = condition_c(G, BoundaryMode::Certified);
        CHECK(std::abs(c.boundary_max - boundary_oracle(G)) < 1e-10);
    }
}

TEST_CASE("(A) implies (B); (B) and (C) agree; degree <= 2 equivalence") {
    std::mt19937 rng(53);
    int a_passes = 0, b_passes = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const TruncatedSeries G = random_generator(rng, 6, 2.0, rep % 2 == 0);
        const auto a = condition_a(G);
        const auto b = condition_b_grid(G);
        const auto c = condition_c(G);

        if (a.pass) {
            ++a_passes;
            CHECK(b.pass);
        }
        if (b.pass) ++b_passes;
        if (b.pass != c.pass) CHECK(std::abs(c.boundary_max) < 1e-8);
        if (G.degree(1e-13) <= 2 && std::abs(a.value) > 1e-8) CHECK(a.pass == b.pass);
    }
    CHECK(a_passes >= 10);    // the biased half must produce real passes
    CHECK(b_passes >= a_passes);
}

TEST_CASE("Berkson-Porta factorization") {
    // G = -z, attracting point 0
    const auto triv = berkson_porta_factor(series({0.0, -1.0}), Complex(0.0));
    CHECK(triv.factor.trunc_order() == 0);
    CHECK(std::abs(triv.factor.coeff(0) - Complex(1.0)) < 1e-15);
    CHECK(triv.re_min == doctest::Approx(1.0));
    CHECK(triv.pass);

    const auto cubic = berkson_porta_factor(cubic_example(), Complex(0.0));
    CHECK(std::abs(cubic.factor.coeff(0) - Complex(1.0)) < 1e-14);
    CHECK(std::abs(cubic.factor.coeff(1) - Complex(-1.0 / kRt3)) < 1e-14);
    CHECK(std::abs(cubic.factor.coeff(2) - Complex(1.0 / kRt3)) < 1e-14);
    CHECK(std::abs(cubic.re_min - (1.0 - 9.0 / (8.0 * kRt3))) < 1e-9);
    CHECK(cubic.pass);

    // linear: G = a z + b, alpha = -b/a; check the factorization pointwise
    std::mt19937 rng(59);
    for (int rep = 0; rep < 20; ++rep) {
        const Complex a(-0.5 - std::abs(oracles::random_in_disc(rng, 1.0).real()),
                        oracles::random_in_disc(rng, 0.5).imag());
        const Complex b = oracles::random_in_disc(rng, 0.4) * std::abs(a);
        const Complex alpha = -b / a;
        if (std::abs(alpha) > 0.9) continue;
        const auto res = berkson_porta_factor(series({b, a}), alpha);
        for (int i = 0; i < 8; ++i) {
            const Complex z = oracles::random_in_disc(rng, 0.9);
            const Complex denom = (std::conj(alpha) * z - 1.0) * (z - alpha);
            CHECK(std::abs(res.factor.eval(z) * denom - (a * z + b)) < 1e-9);
        }
        // boundary minimum vs dense sampling
        const double oracle_min = -oracles::circle_max([&res](double th) {
            return -std::real(res.factor.eval(std::polar(1.0, th)));
        });
        CHECK(std::abs(res.re_min - oracle_min) < 1e-8);
    }

    CHECK_THROWS_AS(berkson_porta_factor(series({0.5, -1.0}), Complex(0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(berkson_porta_factor(series({0.0, -1.0}), Complex(2.0, 0.0)),
                    std::invalid_argument);
}

TEST_CASE("Berkson-Porta boundary attracting point") {
    // G = (z-1)^2 is the parabolic generator at 1; F must be the constant 1.
    const auto res = berkson_porta_factor(series({1.0, -2.0, 1.0}), Complex(1.0));
    CHECK(res.residual < 1e-12);
    CHECK(std::abs(res.factor.eval(Complex(0.3, 0.1)) - Complex(1.0)) < 1e-10);
    CHECK(res.pass);
}

TEST_CASE("Caratheodory-Toeplitz fixtures") {
    const auto ones = caratheodory_toeplitz(series({1.0}), 5);
    for (const auto& r : ones) {
        CHECK(r.verdict == ToeplitzTestResult::Verdict::PositiveDefinite);
        CHECK(r.min_eigenvalue == doctest::Approx(2.0));
    }
    CHECK(toeplitz_all_psd(ones));

    const auto shift = caratheodory_toeplitz(TruncatedSeries::monomial(1), 2);
    CHECK(shift[1].min_eigenvalue == doctest::Approx(-1.0));
    CHECK(shift[1].verdict == ToeplitzTestResult::Verdict::Indefinite);
    CHECK(!toeplitz_all_psd(shift));
    CHECK(std::abs(shift[1].n_matrix(0, 1) - Complex(1.0)) == 0.0);
    CHECK(std::abs(shift[1].n_matrix(1, 0) - Complex(1.0)) == 0.0);
    CHECK(std::abs(shift[1].n_matrix(0, 0)) == 0.0);
}

TEST_CASE("degree-2 reduction recovers the closed inequality") {
    std::mt19937 rng(61);
    for (int rep = 0; rep < 100; ++rep) {
        const auto c = oracles::random_poly(rng, 2, 1.5);
        const TruncatedSeries G(c);
        const double closed = std::real(c[1]) + std::abs(std::conj(c[0]) + c[2]);

        // Sylvester on the 2x2 with diagonal -Re(a1): minors -Re(a1) and
        // Re(a1)^2 - |conj(a0)+a2|^2, positive exactly when closed < 0.
        const bool sylvester_pd =
            -std::real(c[1]) > 0.0 &&
            std::real(c[1]) * std::real(c[1]) - std::norm(std::conj(c[0]) + c[2]) > 0.0;
        CHECK(sylvester_pd == (closed < 0.0));

        // The Toeplitz sections of -tilde(G) reach the same verdict as k grows.
        if (std::abs(closed) < 0.05 * (1.0 + std::abs(std::real(c[1])))) continue;
        TruncatedSeries probe = tilde_transform(G);
        probe *= Complex(-1.0);
        CHECK(toeplitz_all_psd(caratheodory_toeplitz(probe, 24)) == (closed <= 0.0));
    }
}

TEST_CASE("Toeplitz verdicts agree with the boundary-sampling oracle") {
    std::mt19937 rng(101);
    for (int rep = 0; rep < 100; ++rep) {
        auto c = oracles::random_poly(rng, 4, 1.0);
        if (rep % 2 == 0) c[0] += Complex(4.0, 0.0);    // mix in genuine half-plane maps
        const TruncatedSeries f(c);
        const double min_re = -oracles::circle_max(
            [&f](double th) { return -std::real(f.eval(std::polar(1.0, th))); });
        if (std::abs(min_re) < 1e-8) continue;
        CHECK(toeplitz_all_psd(caratheodory_toeplitz(f, 12)) == (min_re >= 0.0));
    }
}

TEST_CASE("root obstruction") {
    const auto constant = root_obstruction(series({1.0}));
    CHECK(constant.obstructed);
    CHECK(constant.roots.empty());

    const auto outside = root_obstruction(series({-2.0, 1.0}));
    CHECK(outside.obstructed);
    CHECK(outside.min_abs_root == doctest::Approx(2.0));

    const auto inside = root_obstruction(series({0.0, -1.0}));
    CHECK(!inside.obstructed);
    CHECK(inside.min_abs_root == doctest::Approx(0.0));

    CHECK_THROWS_AS(root_obstruction(series({0.0, 0.0})), std::invalid_argument);
}

TEST_CASE("polynomial roots via the companion matrix") {
    // (z - 0.5)(z + 2i)(z - 1 - i)
    const Complex r1(0.5), r2(0.0, -2.0), r3(1.0, 1.0);
    std::vector<Complex> c{-r1 * r2 * r3, r1 * r2 + r1 * r3 + r2 * r3, -(r1 + r2 + r3), 1.0};
    const auto roots = polynomial_roots(TruncatedSeries(c));
    REQUIRE(roots.size() == 3);
    double worst = 1.0;
    for (Complex expect : {r1, r2, r3}) {
        double best = 1e9;
        for (Complex got : roots) best = std::min(best, std::abs(got - expect));
        worst = std::min(worst, best);
        CHECK(best < 1e-10);
    }
    (void)worst;
}

TEST_CASE("analyze_generator combines the verdicts") {
    const auto good = analyze_generator(series({0.0, -1.0}));
    CHECK(good.verdict == GenerationVerdict::Generates);
    CHECK(good.condition_a.pass);
    CHECK(good.condition_b.pass);
    CHECK(good.condition_c.pass);
    CHECK(!good.root_obstruction.obstructed);

    const auto cubic = analyze_generator(cubic_example());
    CHECK(cubic.verdict == GenerationVerdict::Generates);
    CHECK(!cubic.condition_a.pass);

    const auto blocked = analyze_generator(series({1.0}));
    CHECK(blocked.verdict == GenerationVerdict::DoesNotGenerate);
    CHECK(blocked.root_obstruction.obstructed);

    const auto zero = analyze_generator(series({0.0}));
    CHECK(zero.verdict == GenerationVerdict::Generates);
}

TEST_CASE("GeneratorSpec Denjoy-Wolff slot") {
    GeneratorSpec spec(series({0.0, -1.0}));
    CHECK(!spec.dw_point().has_value());
    spec.set_dw_point(Complex(0.0));
    CHECK(spec.dw_point().has_value());
    CHECK_THROWS_AS(spec.set_dw_point(Complex(1.5, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(spec.set_dw_point(Complex(0.5, 0.0)), std::invalid_argument);
    const TruncatedSeries gt = spec.g_tilde();
    CHECK(std::abs(gt.coeff(0) + Complex(1.0)) == 0.0);
}
