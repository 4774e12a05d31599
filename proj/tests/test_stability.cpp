#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "vide/error.hpp"
#include "vide/stability.hpp"

using namespace vide;
using Catch::Approx;

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

TEST_CASE("analytic test solution examples", "[stability]") {
    for (double x : {0.0, 0.7, 5.0}) CHECK(analytic_test_solution({0.0, 0.0}, x) == 2.0);
    CHECK(analytic_test_solution({-2.0, 0.0}, 1.0) == Approx(1.0 + std::exp(-2.0)).epsilon(1e-15));
    CHECK(analytic_test_solution({-2.0, 0.0}, 1.0) == Approx(1.135335).epsilon(1e-6));
    CHECK(analytic_test_solution({0.0, -1.0}, std::numbers::pi) == Approx(-2.0).epsilon(1e-15));
    CHECK(analytic_test_solution({-2.0, -1.0}, 1.3) == Approx(2.0 * std::exp(-1.3)).epsilon(1e-15));
}

TEST_CASE("analytic test solution starts at 2 on both branches", "[stability]") {
    for (double lambda = -5.0; lambda <= 5.0; lambda += 1.25) {
        for (double gamma = -5.0; gamma <= 5.0; gamma += 1.25) {
            CHECK(analytic_test_solution({lambda, gamma}, 0.0) == 2.0);
        }
    }
}

TEST_CASE("analytic test solution is continuous across the double root", "[stability]") {
    const double at_root = analytic_test_solution({-2.0, -1.0}, 1.0);
    for (double e : {1e-8, 1e-10, 1e-12}) {
        CHECK(std::abs(analytic_test_solution({-2.0, -1.0 + e}, 1.0) - at_root) <= 1e-6);
        CHECK(std::abs(analytic_test_solution({-2.0, -1.0 - e}, 1.0) - at_root) <= 1e-6);
    }
}

TEST_CASE("analytic test solution satisfies the integro-differential equation", "[stability]") {
    // Relative residual with a fine trapezoid so the check exercises the formula, not quadrature.
    for (const LinearParams p : {LinearParams{-3.0, -4.0}, LinearParams{-1.0, -3.0}, LinearParams{2.0, 1.5},
                                 LinearParams{4.0, -5.0}, LinearParams{-0.5, 0.25}}) {
        for (double x : {0.5, 1.0, 2.0}) {
            const double d = 1e-5;
            const double dy = (analytic_test_solution(p, x + d) - analytic_test_solution(p, x - d)) / (2 * d);
            const std::size_t n = 200000;
            const double h = x / static_cast<double>(n);
            double integral = 0.5 * (analytic_test_solution(p, 0.0) + analytic_test_solution(p, x));
            for (std::size_t j = 1; j < n; ++j) integral += analytic_test_solution(p, static_cast<double>(j) * h);
            integral *= h;
            const double y = analytic_test_solution(p, x);
            const double residual = dy - p.lambda * (y - 1.0) - p.gamma * integral;
            CHECK(std::abs(residual) <= 1e-6 * std::max({1.0, std::abs(y), std::abs(dy)}));
        }
    }
}

TEST_CASE("implicit_P examples", "[stability]") {
    const auto origin = implicit_P_sequence(0.0, 0.0, 50);
    for (double p : origin) CHECK(p == 2.0);
    CHECK(implicit_P(0.0, 0.0, 1000) == Verdict{true, 0});
    CHECK(implicit_P_sequence(-1.0, 0.0, 1)[1] == 1.5);
    CHECK(implicit_P_sequence(-1.0, -1.0, 1)[1] == Approx(0.8).epsilon(1e-15));
}

TEST_CASE("explicit_P examples", "[stability]") {
    const auto a = explicit_P_sequence(-1.0, 0.0, 5);
    CHECK(a[1] == 1.0);
    CHECK(a[2] == 1.0);
    CHECK(explicit_P(-1.0, 0.0, 1000).stable);

    const auto b = explicit_P_sequence(-3.0, 0.0, 2);
    CHECK(b[2] == 5.0);
    CHECK(explicit_P(-3.0, 0.0, 1000) == Verdict{false, 2});

    for (double p : explicit_P_sequence(0.0, 0.0, 40)) CHECK(p == 2.0);
    CHECK(explicit_P(0.0, 0.0, 1000) == Verdict{true, 0});
    CHECK(explicit_P_sequence(-1.0, -1.0, 2)[2] == -0.5);
}

TEST_CASE("w = 0 reduces to scalar Euler", "[stability]") {
    for (int k = 0; k <= 40; ++k) {
        const double z = -4.0 + 0.1 * k;
        const auto im = implicit_P_sequence(z, 0.0, 100);
        const auto ex = explicit_P_sequence(z, 0.0, 100);
        double im_scale = 2.0, ex_scale = 2.0;
        for (std::size_t i = 1; i <= 100; ++i) {
            const double di = static_cast<double>(i);
            const double im_exact = 1.0 + std::pow(1.0 - z, -di);
            const double ex_exact = 1.0 + std::pow(1.0 + z, di);
            im_scale = std::max(im_scale, std::abs(im_exact));
            ex_scale = std::max(ex_scale, std::abs(ex_exact));
            INFO("z=" << z << " i=" << i);
            CHECK(std::abs(im[i] - im_exact) <= 8.0 * di * kEps * im_scale);
            CHECK(std::abs(ex[i] - ex_exact) <= 8.0 * di * kEps * ex_scale);
        }
    }
}

TEST_CASE("implicit denominator never shrinks in the third quadrant", "[stability]") {
    for (double z = -100.0; z <= 0.0; z += 2.5) {
        for (double w = -100.0; w <= 0.0; w += 2.5) CHECK(2.0 - 2.0 * z - w >= 2.0);
    }
}

TEST_CASE("unstable verdicts stop before values blow up", "[stability]") {
    for (double z : {-4.0, -10.0, -100.0, -1e6}) {
        for (double w : {0.0, -3.0, -1e6}) {
            const auto v = explicit_P(z, w, 1000000);
            CHECK_FALSE(v.stable);
            const auto seq = explicit_P_sequence(z, w, v.first_exceed_index);
            for (double p : seq) CHECK(std::abs(p) < 1e300);
        }
    }
}

TEST_CASE("i_max = 1 decides on P1 alone", "[stability]") {
    CHECK(implicit_P(-1.0, -1.0, 1).stable);
    CHECK(explicit_P(-5.0, 0.0, 1) == Verdict{false, 1});
    CHECK(explicit_P(-1.5, -0.1, 1).stable);
}

TEST_CASE("sweep_region small grids", "[stability]") {
    GridSpec spec;
    spec.nz = 2;
    spec.nw = 2;
    spec.i_max = 1000;
    const auto g = sweep_region(spec, Method::Implicit);
    CHECK(g.stable_count() == 4);
    CHECK(g.z_at(0) == -1.0);
    CHECK(g.z_at(1) == 0.0);
    CHECK(g.w_at(1) == 0.0);

    GridSpec e;
    e.z_min = -4.0;
    e.w_min = -4.0;
    e.nz = 9;
    e.nw = 9;
    const auto eg = sweep_region(e, Method::Explicit);
    CHECK(eg.z_at(3) == -2.5);
    CHECK(eg.w_at(8) == 0.0);
    CHECK_FALSE(eg.at(3, 8).stable);
}

TEST_CASE("sweep_region is independent of the thread count", "[stability]") {
    GridSpec spec;
    spec.z_min = -3.0;
    spec.w_min = -3.0;
    spec.nz = 37;
    spec.nw = 29;
    spec.i_max = 2000;
    for (auto method : {Method::Implicit, Method::Explicit}) {
        const auto one = sweep_region(spec, method, 1);
        for (unsigned t : {2u, 3u, 8u}) CHECK(sweep_region(spec, method, t) == one);
    }
}

TEST_CASE("sweep_region rejects rectangles outside the third quadrant", "[stability]") {
    GridSpec spec;
    spec.z_max = 0.5;
    CHECK_THROWS_AS(sweep_region(spec, Method::Implicit), DomainError);
    spec = GridSpec{};
    spec.nz = 1;
    CHECK_THROWS_AS(sweep_region(spec, Method::Implicit), DomainError);
    spec = GridSpec{};
    spec.i_max = 0;
    CHECK_THROWS_AS(sweep_region(spec, Method::Implicit), DomainError);
}

TEST_CASE("h_path examples", "[stability]") {
    const std::vector<double> h{1.0, 0.0, 0.0198};
    const auto a = h_path(-14.0, -15.0, h);
    CHECK(a.samples[0].z == -14.0);
    CHECK(a.samples[0].w == -15.0);
    CHECK(a.samples[1].z == 0.0);
    CHECK(a.samples[1].w == 0.0);

    const auto b = h_path(-100.0, -0.1, h);
    CHECK(b.samples[2].z == Approx(-1.98).epsilon(1e-12));
    CHECK(b.samples[2].w == Approx(-3.92e-5).epsilon(1e-2));
    CHECK(b.samples[2].w < 0.0);

    const std::vector<double> bad{-0.1};
    CHECK_THROWS_AS(h_path(-1.0, -1.0, bad), DomainError);
}

TEST_CASE("pair_eigenvalues examples", "[stability]") {
    SECTION("diagonal spectra pair by descending magnitude") {
        const std::vector<double> Jf{-2.0, 0.0, 0.0, -1.0};
        const std::vector<double> JK{-3.0, 0.0, 0.0, -4.0};
        const auto r = pair_eigenvalues(Jf, JK, 2, 0.5);
        REQUIRE(r.pairs.size() == 2);
        CHECK(r.pairs[0].lambda == std::complex<double>(-2.0, 0.0));
        CHECK(r.pairs[0].gamma == std::complex<double>(-4.0, 0.0));
        CHECK(r.pairs[1].lambda == std::complex<double>(-1.0, 0.0));
        CHECK(r.pairs[1].gamma == std::complex<double>(-3.0, 0.0));
        CHECK(r.pairs[0].qualifies);
        CHECK(r.pairs[0].z == Approx(-1.0));
        CHECK(r.pairs[0].w == Approx(-1.0));
        CHECK(r.pairs[1].z == Approx(-0.5));
        CHECK(r.pairs[1].w == Approx(-0.75));
    }
    SECTION("scalar case reduces to (h lambda, h^2 gamma)") {
        const std::vector<double> Jf{-7.0}, JK{-3.0};
        const auto r = pair_eigenvalues(Jf, JK, 1, 0.1);
        REQUIRE(r.pairs.size() == 1);
        CHECK(r.pairs[0].z == Approx(-0.7));
        CHECK(r.pairs[0].w == Approx(-0.03));
    }
    SECTION("imaginary eigenvalues use their magnitude") {
        const std::vector<double> Jf{0.0, 2.0, -2.0, 0.0};
        const std::vector<double> JK{-1.0, 0.0, 0.0, -1.0};
        const auto r = pair_eigenvalues(Jf, JK, 2, 1.0);
        for (const auto& p : r.pairs) {
            CHECK(std::abs(p.lambda) == Approx(2.0));
            CHECK(p.qualifies);
            CHECK(p.z == Approx(-2.0));
        }
        CHECK(r.pairs[0].lambda.imag() > r.pairs[1].lambda.imag());
    }
    SECTION("positive real parts do not qualify") {
        const std::vector<double> Jf{1.0, 0.0, 0.0, -1.0};
        const std::vector<double> JK{-1.0, 0.0, 0.0, -2.0};
        const auto r = pair_eigenvalues(Jf, JK, 2, 1.0);
        CHECK(r.pairs[0].lambda.real() == 1.0);
        CHECK_FALSE(r.pairs[0].qualifies);
        CHECK(r.pairs[1].qualifies);
    }
    SECTION("shape and stepsize are validated") {
        const std::vector<double> Jf{1.0, 0.0, 0.0, -1.0};
        const std::vector<double> JK{-1.0};
        CHECK_THROWS_AS(pair_eigenvalues(Jf, JK, 2, 1.0), DomainError);
        CHECK_THROWS_AS(pair_eigenvalues(Jf, Jf, 2, 0.0), DomainError);
    }
}
