#include <catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <vector>

#include "vide/error.hpp"
#include "vide/quadrature.hpp"

using namespace vide;

TEST_CASE("trapezoid_window exact on constants and linear t", "[quadrature]") {
    const Mesh mesh = build_mesh(0.0, 1.0, 3);  // h = 0.5
    const std::vector<double> y{7.0, -3.0, 11.0};
    const HistoryView hist(mesh, y, 2);

    CHECK(trapezoid_window([](double, double, double) { return 1.0; }, 1.0, hist) == 1.0);
    CHECK(trapezoid_window([](double, double, double t) { return t; }, 1.0, hist) == 0.5);
}

TEST_CASE("trapezoid_window on y values", "[quadrature]") {
    const Mesh mesh = build_mesh(0.0, 1.0, 2);
    const std::vector<double> y{2.0, 2.0};
    CHECK(trapezoid_window([](double, double yt, double) { return yt; }, 1.0, HistoryView(mesh, y, 1)) == 2.0);
}

TEST_CASE("trapezoid_window over a single node is zero", "[quadrature]") {
    const Mesh mesh = build_mesh(0.0, 1.0, 5);
    const std::vector<double> y{2.0};
    int calls = 0;
    const double v = trapezoid_window(
        [&](double, double, double) {
            ++calls;
            return 1.0;
        },
        0.0, HistoryView(mesh, y, 0));
    CHECK(v == 0.0);
    CHECK(calls <= 1);
}

TEST_CASE("trapezoid_window is exact for kernels affine in t", "[quadrature]") {
    const Mesh mesh = build_mesh(-1.0, 2.0, 31);
    std::vector<double> y(mesh.size(), 0.0);
    for (std::size_t k = 1; k < mesh.size(); ++k) {
        const HistoryView hist(mesh, std::span<const double>(y).first(k + 1), k);
        const double a = 0.3, b = -1.7;
        const double got = trapezoid_window([&](double, double, double t) { return a * t + b; }, 5.0, hist);
        const double t0 = mesh.node(0), t1 = mesh.node(k);
        const double exact = 0.5 * a * (t1 * t1 - t0 * t0) + b * (t1 - t0);
        const double ulp = std::nextafter(std::abs(exact), INFINITY) - std::abs(exact);
        CHECK(std::abs(got - exact) <= 4.0 * ulp * (t1 - t0) + 1e-15);
    }
}

TEST_CASE("trapezoid_window costs exactly k+1 kernel calls in ascending order", "[quadrature]") {
    const Mesh mesh = build_mesh(0.0, 10.0, 11);
    const std::vector<double> y(11, 1.0);
    for (std::size_t k = 1; k <= 10; ++k) {
        std::vector<double> ts;
        (void)trapezoid_window(
            [&](double, double, double t) {
                ts.push_back(t);
                return 1.0;
            },
            mesh.node(k), HistoryView(mesh, std::span<const double>(y).first(k + 1), k));
        REQUIRE(ts.size() == k + 1);
        for (std::size_t j = 0; j <= k; ++j) CHECK(ts[j] == mesh.node(j));
    }
}

TEST_CASE("trapezoid_window recomputes when x_eval changes", "[quadrature]") {
    const Mesh mesh = build_mesh(0.0, 1.0, 5);
    const std::vector<double> y{1.0, 2.0, 3.0};
    const HistoryView hist(mesh, y, 2);
    int calls = 0;
    const KernelFn K = [&](double x, double yt, double t) {
        ++calls;
        return std::exp(t - x) * yt;
    };
    const double a = trapezoid_window(K, mesh.node(2), hist);
    const double b = trapezoid_window(K, mesh.node(3), hist);
    CHECK(calls == 6);
    CHECK(a != b);
    CHECK(b == Catch::Approx(a * std::exp(-mesh.h())).epsilon(1e-14));
}

TEST_CASE("vector trapezoid_window applies weights per component", "[quadrature]") {
    const Mesh mesh = build_mesh(0.0, 1.0, 3);
    const std::vector<double> y{1.0, 10.0, 2.0, 20.0, 3.0, 30.0};
    const HistoryView hist(mesh, y, 2, 2);
    std::array<double, 2> out{};
    trapezoid_window(
        [](double, std::span<const double> yt, double, std::span<double> o) {
            o[0] = yt[0];
            o[1] = yt[1];
        },
        1.0, hist, out);
    CHECK(out[0] == 0.25 * (1.0 + 4.0 + 3.0));
    CHECK(out[1] == 0.25 * (10.0 + 40.0 + 30.0));
}

TEST_CASE("HistoryView validates its window", "[quadrature]") {
    const Mesh mesh = build_mesh(0.0, 1.0, 3);
    const std::vector<double> y{1.0, 2.0};
    CHECK_THROWS_AS(HistoryView(mesh, y, 2), DomainError);
    CHECK_THROWS_AS(HistoryView(mesh, std::vector<double>(4, 0.0), 3), DomainError);
    CHECK_NOTHROW(HistoryView(mesh, y, 1));
}

TEST_CASE("CompensatedSum keeps small terms", "[quadrature]") {
    CompensatedSum s;
    s.add(1e16);
    for (int i = 0; i < 1000; ++i) s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 1000.0);
}
