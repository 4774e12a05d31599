#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "vide/mesh.hpp"
#include "vide/newton.hpp"
#include "vide/problem.hpp"
#include "vide/quadrature.hpp"

namespace vide {

enum class Method { Implicit, Explicit };

/// |y| above this aborts a solve with DivergenceError.
inline constexpr double kDivergenceGuard = 1e150;

/// Node values of one solve, row-major [size() x components()].
class Trajectory {
public:
    Trajectory(Mesh mesh, std::size_t components, Method method);

    [[nodiscard]] const Mesh& mesh() const noexcept { return mesh_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size() / components_; }
    [[nodiscard]] std::size_t components() const noexcept { return components_; }
    [[nodiscard]] Method method() const noexcept { return method_; }

    [[nodiscard]] double operator()(std::size_t i, std::size_t c = 0) const noexcept {
        return values_[i * components_ + c];
    }
    [[nodiscard]] std::span<const double> state(std::size_t i) const noexcept {
        return std::span<const double>(values_).subspan(i * components_, components_);
    }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    /// Newton iterations per step (entry i is the step producing node i+1); empty for Explicit.
    [[nodiscard]] std::span<const int> newton_iterations() const noexcept { return newton_; }

    void push_state(std::span<const double> y);
    void push_newton(int iterations) { newton_.push_back(iterations); }

private:
    Mesh mesh_;
    std::size_t components_;
    Method method_;
    std::vector<double> values_;
    std::vector<int> newton_;
};

/// y_{i+1} from y_0..y_i (history.k() == i). Kernel and f are evaluated at x_i only.
/// Throws DivergenceError (node i+1) on a non-finite result.
[[nodiscard]] double explicit_step(const ScalarVIDE& problem, const HistoryView& history);

struct ImplicitStepResult {
    double value = 0.0;
    int iterations = 0;
};

/// Solves the implicit step equation for y_{i+1} by Newton from y_i.
[[nodiscard]] ImplicitStepResult implicit_step(const ScalarVIDE& problem, const HistoryView& history,
                                               const NewtonConfig& cfg = {});

/// Called after each node is filled; return false to stop marching early.
using NodeObserver = std::function<bool(std::size_t i, std::span<const double> y)>;

/// Marches the scheme over the mesh, calling `observer` for nodes 0..N-1.
/// The mesh interval must match the problem interval. Returns the number of
/// nodes filled (less than mesh.size() only when the observer stopped early).
std::size_t march(const ScalarVIDE& problem, const Mesh& mesh, Method method,
                  const NewtonConfig& cfg, const NodeObserver& observer);
std::size_t march(const SystemVIDE& problem, const Mesh& mesh, Method method,
                  const NewtonConfig& cfg, const NodeObserver& observer);

[[nodiscard]] Trajectory solve(const ScalarVIDE& problem, const Mesh& mesh, Method method,
                               const NewtonConfig& cfg = {});
[[nodiscard]] Trajectory solve(const SystemVIDE& problem, const Mesh& mesh, Method method,
                               const NewtonConfig& cfg = {});

}  // namespace vide
