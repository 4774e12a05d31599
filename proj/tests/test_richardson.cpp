#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "vide/error.hpp"
#include "vide/richardson.hpp"

using namespace vide;

namespace {

double column_endpoint_error(const RichardsonTableau& tab, std::size_t k, LinearParams params) {
    const std::size_t last = tab.coarse_mesh().size() - 1;
    return std::abs(tab.value(k, last) - analytic_test_solution(params, tab.coarse_mesh().node(last)));
}

}  // namespace

TEST_CASE("tableau of the constant solution", "[richardson]") {
    const auto p = linear_test_problem({0.0, 0.0}, 0.0, 1.0);
    const auto tab = build_tableau(p, Method::Implicit, 5);
    REQUIRE(tab.base_meshes.size() == 5);
    CHECK(tab.base_meshes[0].size() == 5);
    CHECK(tab.base_meshes[4].size() == 65);
    for (std::size_t k = 1; k <= 5; ++k) {
        for (std::size_t i = 0; i < 5; ++i) CHECK(tab.value(k, i) == 2.0);
    }
    CHECK(tab.error_estimate == 0.0);
}

TEST_CASE("affine solution is reproduced to roundoff from Y2 on", "[richardson]") {
    // y' = 1 has y = x + y0; both schemes integrate it exactly.
    ScalarVIDE p;
    p.f = [](double, double) { return 1.0; };
    p.K = [](double, double, double) { return 0.0; };
    p.x_end = 1.0;
    p.y0 = 0.5;
    const auto tab = build_tableau(p, Method::Explicit, 5);
    for (std::size_t k = 2; k <= 5; ++k) {
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(std::abs(tab.value(k, i) - (0.5 + tab.coarse_mesh().node(i))) <= 1e-14);
        }
    }
}

TEST_CASE("Richardson columns gain one order each", "[richardson]") {
    const LinearParams params{-2.0, -1.0};
    const auto p = linear_test_problem(params, 0.0, 1.0);
    for (auto method : {Method::Implicit, Method::Explicit}) {
        std::vector<RichardsonTableau> tabs;
        std::size_t coarse = 9;
        for (int h = 0; h <= 4; ++h, coarse = 2 * coarse - 1) tabs.push_back(build_tableau(p, method, coarse));
        for (std::size_t k = 1; k <= 4; ++k) {
            // Least-squares slope of log2 error against the halving level 0..4.
            double sxy = 0.0, sxx = 0.0, mean = 0.0;
            for (const auto& t : tabs) mean += std::log2(column_endpoint_error(t, k, params)) / 5.0;
            for (std::size_t l = 0; l < tabs.size(); ++l) {
                const double dx = static_cast<double>(l) - 2.0;
                sxy += dx * (std::log2(column_endpoint_error(tabs[l], k, params)) - mean);
                sxx += dx * dx;
            }
            const double order = -sxy / sxx;
            INFO("column " << k << " order " << order);
            CHECK(std::abs(order - static_cast<double>(k)) <= (k == 1 ? 0.2 : 0.5));
        }
    }
}

TEST_CASE("error estimate is the max of |Y4 - Y5|", "[richardson]") {
    const auto p = linear_test_problem({-3.0, -2.0}, 0.0, 2.0);
    const auto tab = build_tableau(p, Method::Implicit, 6);
    double e = 0.0;
    for (std::size_t i = 0; i < tab.coarse_mesh().size(); ++i) e = std::max(e, std::abs(tab.value(4, i) - tab.value(5, i)));
    CHECK(tab.error_estimate == e);
    CHECK(tab.error_estimate > 0.0);
}

TEST_CASE("combine_tableau checks that meshes halve", "[richardson]") {
    const auto p = linear_test_problem({-1.0, 0.0}, 0.0, 1.0);
    std::vector<Trajectory> base;
    for (std::size_t n : {3u, 5u, 9u, 17u, 31u}) base.push_back(solve(p, build_mesh(0.0, 1.0, n), Method::Implicit));
    CHECK_THROWS_AS(combine_tableau(base), DomainError);
    base.pop_back();
    CHECK_THROWS_AS(combine_tableau(base), DomainError);
    CHECK_THROWS_AS(build_tableau(p, Method::Implicit, 1), DomainError);
}

TEST_CASE("nodes_for_tolerance on the constant solution stops at once", "[richardson]") {
    const auto p = linear_test_problem({0.0, 0.0}, 0.0, 10.0);
    const auto r = nodes_for_tolerance(p, Method::Implicit, 1e-12);
    CHECK(r.n_nodes == 17);
    CHECK(r.tableau.coarse_mesh().size() == 2);
}

TEST_CASE("nodes_for_tolerance is monotone and meets its tolerance", "[richardson]") {
    const LinearParams params{-2.0, -1.0};
    const auto p = linear_test_problem(params, 0.0, 1.0);
    std::size_t prev = 0;
    for (double eps : {1e-4, 1e-6, 1e-8}) {
        const auto r = nodes_for_tolerance(p, Method::Implicit, eps);
        CHECK(r.n_nodes >= prev);
        CHECK(r.tableau.error_estimate <= eps);
        CHECK(r.n_nodes == r.tableau.finest_mesh().size());
        double err = 0.0;
        for (std::size_t i = 0; i < r.tableau.coarse_mesh().size(); ++i) {
            err = std::max(err, std::abs(r.tableau.value(5, i) -
                                         analytic_test_solution(params, r.tableau.coarse_mesh().node(i))));
        }
        CHECK(err <= 10.0 * eps);
        prev = r.n_nodes;
    }
}

TEST_CASE("nodes_for_tolerance reports an unreachable tolerance", "[richardson]") {
    const auto p = linear_test_problem({-2.0, -1.0}, 0.0, 1.0);
    ToleranceSearchOptions opts;
    opts.node_cap = 200;
    CHECK_THROWS_AS(nodes_for_tolerance(p, Method::Implicit, 1e-14, opts), ToleranceUnreachable);
    CHECK_THROWS_AS(nodes_for_tolerance(p, Method::Implicit, 0.0), DomainError);
}

TEST_CASE("min_nodes_for_stability brackets the predicate", "[richardson]") {
    for (const char* name : {"example1", "example2"}) {
        const auto entry = registry_lookup(name);
        const auto r = min_nodes_for_stability(entry);
        INFO(name << " N=" << r.n_nodes);
        CHECK(explicit_solution_bounded(entry.problem, r.n_nodes));
        CHECK_FALSE(explicit_solution_bounded(entry.problem, r.n_nodes - 1));
        CHECK(r.h_s == 10.0 / static_cast<double>(r.n_nodes - 1));
        CHECK(r.z == r.h_s * entry.params.lambda);
        CHECK(r.w == r.h_s * r.h_s * entry.params.gamma);
    }
}

TEST_CASE("min_nodes_for_stability on example1 lands near the scalar Euler limit", "[richardson]") {
    const auto r = min_nodes_for_stability(registry_lookup("example1"));
    CHECK(r.n_nodes >= 480);
    CHECK(r.n_nodes <= 530);
    CHECK(r.z >= -2.0);
}

TEST_CASE("min_nodes_for_stability gives up at the cap", "[richardson]") {
    const auto entry = registry_lookup("example1");
    CHECK_THROWS_AS(min_nodes_for_stability(entry, 100), StabilityNotFound);
}
