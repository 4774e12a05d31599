#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "vide/mesh.hpp"
#include "vide/problem.hpp"
#include "vide/solver.hpp"
#include "vide/stability.hpp"

namespace vide {

/// Number of base solves (and extrapolation columns) in a tableau.
inline constexpr std::size_t kRichardsonLevels = 5;

/// Richardson ladder over five successive halvings of a coarse mesh.
///
/// Column k (1-based) approximates the solution to order k at the coarse
/// nodes: Y^1 is the base solve on the coarse mesh and
///   Y^{k+1}(h) = (2^k Y^k(h/2) - Y^k(h)) / (2^k - 1).
struct RichardsonTableau {
    std::vector<Mesh> base_meshes;
    std::size_t components = 1;
    /// columns[k-1] holds Y^k, row-major [coarse nodes x components].
    std::array<std::vector<double>, kRichardsonLevels> columns;
    /// max over coarse nodes and components of |Y^4 - Y^5|.
    double error_estimate = 0.0;

    [[nodiscard]] const Mesh& coarse_mesh() const noexcept { return base_meshes[0]; }
    [[nodiscard]] const Mesh& finest_mesh() const noexcept { return base_meshes.back(); }
    [[nodiscard]] double value(std::size_t column, std::size_t i, std::size_t c = 0) const {
        return columns[column - 1][i * components + c];
    }
};

/// Combines five base trajectories on meshes N, 2N-1, ..., 16N-15 nodes
/// (each the refinement of the previous). Throws DomainError otherwise.
[[nodiscard]] RichardsonTableau combine_tableau(std::span<const Trajectory> base);

/// Throws DomainError if coarse_nodes < 2; propagates solver errors.
[[nodiscard]] RichardsonTableau build_tableau(const ScalarVIDE& problem, Method method,
                                              std::size_t coarse_nodes,
                                              const NewtonConfig& cfg = {});
[[nodiscard]] RichardsonTableau build_tableau(const SystemVIDE& problem, Method method,
                                              std::size_t coarse_nodes,
                                              const NewtonConfig& cfg = {});

struct ToleranceSearchOptions {
    std::size_t initial_coarse_nodes = 2;
    /// Upper bound on the finest-level node count.
    std::size_t node_cap = 10'000'000;
    NewtonConfig newton;
};

struct ToleranceSearchResult {
    /// Finest-level node count of the accepted tableau.
    std::size_t n_nodes = 0;
    RichardsonTableau tableau;
};

/// Doubles the coarse mesh (N -> 2N-1) until error_estimate <= eps, reusing
/// the four finer base solves of the previous tableau. Throws
/// ToleranceUnreachable once the finest level would exceed node_cap.
[[nodiscard]] ToleranceSearchResult nodes_for_tolerance(const ScalarVIDE& problem, Method method,
                                                        double eps,
                                                        const ToleranceSearchOptions& opts = {});

struct StabilitySearchResult {
    std::size_t n_nodes = 0;
    double h_s = 0.0;
    double z = 0.0;
    double w = 0.0;
};

/// Stability predicate used by the node search: the plain explicit solve on
/// n_nodes nodes keeps |y_i| <= 2 at every node.
[[nodiscard]] bool explicit_solution_bounded(const ScalarVIDE& problem, std::size_t n_nodes,
                                             double bound = kDefaultBound);

/// Smallest N for which explicit_solution_bounded holds, found by doubling
/// then bisection, so N-1 fails and N passes. Throws StabilityNotFound when
/// nothing up to node_cap passes.
[[nodiscard]] StabilitySearchResult min_nodes_for_stability(const ProblemRegistryEntry& entry,
                                                            std::size_t node_cap = 1u << 20);

}  // namespace vide
