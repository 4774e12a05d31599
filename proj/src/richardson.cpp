#include "vide/richardson.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vide/error.hpp"

namespace vide {

RichardsonTableau combine_tableau(std::span<const Trajectory> base) {
    if (base.size() != kRichardsonLevels) {
        throw DomainError("tableau: need exactly 5 base trajectories");
    }
    const std::size_t m = base[0].components();
    const std::size_t n = base[0].size();
    for (std::size_t l = 1; l < kRichardsonLevels; ++l) {
        if (base[l].components() != m || !(base[l].mesh() == base[l - 1].mesh().refined()) ||
            base[l].size() != base[l].mesh().size()) {
            throw DomainError("tableau: base trajectories must be successive halvings");
        }
    }
    if (base[0].size() != base[0].mesh().size()) {
        throw DomainError("tableau: incomplete base trajectory");
    }

    RichardsonTableau tab;
    tab.components = m;
    for (const auto& t : base) tab.base_meshes.push_back(t.mesh());

    // level[l] = current column restricted to the coarse nodes, from base solve l.
    std::vector<std::vector<double>> level(kRichardsonLevels, std::vector<double>(n * m));
    for (std::size_t l = 0; l < kRichardsonLevels; ++l) {
        const std::size_t stride = std::size_t{1} << l;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < m; ++c) level[l][i * m + c] = base[l](i * stride, c);
        }
    }
    tab.columns[0] = level[0];
    for (std::size_t k = 1; k < kRichardsonLevels; ++k) {
        const double factor = static_cast<double>(std::size_t{1} << k);
        for (std::size_t l = 0; l + k < kRichardsonLevels; ++l) {
            for (std::size_t e = 0; e < n * m; ++e) {
                level[l][e] = (factor * level[l + 1][e] - level[l][e]) / (factor - 1.0);
            }
        }
        tab.columns[k] = level[0];
    }

    double err = 0.0;
    for (std::size_t e = 0; e < n * m; ++e) {
        err = std::max(err, std::abs(tab.columns[3][e] - tab.columns[4][e]));
    }
    tab.error_estimate = err;
    return tab;
}

namespace {

template <typename Problem>
std::vector<Trajectory> base_solves(const Problem& problem, Method method, std::size_t coarse_nodes,
                                    const NewtonConfig& cfg) {
    if (coarse_nodes < 2) throw DomainError("tableau: coarse mesh needs at least 2 nodes");
    std::vector<Trajectory> base;
    base.reserve(kRichardsonLevels);
    Mesh mesh = build_mesh(problem.x0, problem.x_end, coarse_nodes);
    for (std::size_t l = 0; l < kRichardsonLevels; ++l) {
        base.push_back(solve(problem, mesh, method, cfg));
        mesh = mesh.refined();
    }
    return base;
}

}  // namespace

RichardsonTableau build_tableau(const ScalarVIDE& problem, Method method, std::size_t coarse_nodes,
                                const NewtonConfig& cfg) {
    return combine_tableau(base_solves(problem, method, coarse_nodes, cfg));
}

RichardsonTableau build_tableau(const SystemVIDE& problem, Method method, std::size_t coarse_nodes,
                                const NewtonConfig& cfg) {
    return combine_tableau(base_solves(problem, method, coarse_nodes, cfg));
}

namespace {

std::size_t finest_nodes(std::size_t coarse) {
    return (coarse - 1) * (std::size_t{1} << (kRichardsonLevels - 1)) + 1;
}

}  // namespace

ToleranceSearchResult nodes_for_tolerance(const ScalarVIDE& problem, Method method, double eps,
                                          const ToleranceSearchOptions& opts) {
    if (!(eps > 0.0)) throw DomainError("nodes_for_tolerance: eps must be positive");
    std::size_t coarse = opts.initial_coarse_nodes;
    if (finest_nodes(std::max<std::size_t>(coarse, 2)) > opts.node_cap) {
        throw ToleranceUnreachable("nodes_for_tolerance: initial mesh already exceeds the node cap");
    }
    auto base = base_solves(problem, method, coarse, opts.newton);
    for (;;) {
        auto tab = combine_tableau(base);
        if (tab.error_estimate <= eps) {
            return {finest_nodes(coarse), std::move(tab)};
        }
        coarse = 2 * coarse - 1;
        if (finest_nodes(coarse) > opts.node_cap) {
            throw ToleranceUnreachable("nodes_for_tolerance: error estimate " +
                                       std::to_string(tab.error_estimate) + " above " +
                                       std::to_string(eps) + " at the node cap");
        }
        // The halved ladder shares four of its five base solves with this one.
        base.erase(base.begin());
        base.push_back(solve(problem, base.back().mesh().refined(), method, opts.newton));
    }
}

bool explicit_solution_bounded(const ScalarVIDE& problem, std::size_t n_nodes, double bound) {
    const Mesh mesh = build_mesh(problem.x0, problem.x_end, n_nodes);
    bool bounded = true;
    try {
        march(problem, mesh, Method::Explicit, NewtonConfig{}, [&](std::size_t, std::span<const double> y) {
            bounded = std::abs(y[0]) <= bound;
            return bounded;
        });
    } catch (const DivergenceError&) {
        return false;
    }
    return bounded;
}

StabilitySearchResult min_nodes_for_stability(const ProblemRegistryEntry& entry, std::size_t node_cap) {
    const ScalarVIDE& problem = entry.problem;
    validate(problem);
    if (node_cap < 2) throw DomainError("min_nodes_for_stability: node cap below 2");
    const auto passes = [&](std::size_t n) { return explicit_solution_bounded(problem, n); };

    // Very coarse meshes can pass vacuously (one step of an oscillatory
    // problem need not leave the bound), so while bracketing, a node count
    // only counts as passing if its halved-step mesh passes as well.
    const auto persists = [&](std::size_t n) {
        return passes(n) && (2 * n - 1 > node_cap || passes(2 * n - 1));
    };
    std::size_t hi = 2;
    std::size_t lo = 0;  // largest node count known to fail; 0 means none tested
    while (!persists(hi)) {
        if (!passes(hi)) lo = hi;
        if (hi == node_cap) {
            throw StabilityNotFound("min_nodes_for_stability: no bounded explicit solution up to " +
                                    std::to_string(node_cap) + " nodes");
        }
        hi = std::min(2 * hi, node_cap);
    }
    if (lo != 0) {
        while (hi - lo > 1) {
            const std::size_t mid = lo + (hi - lo) / 2;
            (passes(mid) ? hi : lo) = mid;
        }
    }

    StabilitySearchResult r;
    r.n_nodes = hi;
    r.h_s = (problem.x_end - problem.x0) / static_cast<double>(hi - 1);
    r.z = r.h_s * entry.params.lambda;
    r.w = r.h_s * r.h_s * entry.params.gamma;
    return r;
}

}  // namespace vide
