#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vide {

using ScalarFn = std::function<double(double x, double y)>;
/// Kernel K(x, y(t), t); x is the upper limit of the memory integral.
using KernelFn = std::function<double(double x, double y, double t)>;

/// Writes m components into `out`.
using VectorFn = std::function<void(double x, std::span<const double> y, std::span<double> out)>;
using VectorKernelFn =
    std::function<void(double x, std::span<const double> y, double t, std::span<double> out)>;
/// Row-major m*m Jacobian with respect to y.
using JacobianFn = std::function<void(double x, std::span<const double> y, std::span<double> out)>;
using KernelJacobianFn =
    std::function<void(double x, std::span<const double> y, double t, std::span<double> out)>;

/// y'(x) = f(x, y) + integral_{x0}^{x} K(x, y(t), t) dt, y(x0) = y0.
///
/// Derivative callables are optional; when empty the solvers use central
/// finite differences instead.
struct ScalarVIDE {
    ScalarFn f;
    KernelFn K;
    ScalarFn df_dy;
    KernelFn dK_dy;
    ScalarFn d2f_dy2;
    KernelFn d2K_dy2;
    double x0 = 0.0;
    double x_end = 1.0;
    double y0 = 0.0;
    /// Opt-in: K does not depend on its first argument, so kernel values at
    /// past nodes may be cached and summed incrementally (O(N) solves).
    bool kernel_independent_of_x = false;
};

/// m-component first-order system with vector right-hand side and kernel.
struct SystemVIDE {
    std::size_t m = 1;
    VectorFn f;
    VectorKernelFn K;
    JacobianFn jacobian_f;
    KernelJacobianFn jacobian_K;
    double x0 = 0.0;
    double x_end = 1.0;
    std::vector<double> y0;
};

/// Throws DomainError if callables are missing or the interval is empty.
void validate(const ScalarVIDE& problem);
void validate(const SystemVIDE& problem);

/// One-component system equivalent to a scalar problem.
[[nodiscard]] SystemVIDE as_system(const ScalarVIDE& problem);

/// Rewrites y^(n) = f(x, y) + integral K(x, y(t), t) dt as an n-component
/// chain y_j' = y_{j+1} (j < n), y_n' = f(x, y_1) + integral K(x, y_1(t), t) dt.
///
/// `initial_values` holds y(x0), y'(x0), ..., y^(n-1)(x0). When df_dy/dK_dy
/// are supplied the system carries exact Jacobians.
[[nodiscard]] SystemVIDE reduce_order(std::size_t n, ScalarFn f, KernelFn K,
                                      std::vector<double> initial_values, double x0,
                                      double x_end, ScalarFn df_dy = {}, KernelFn dK_dy = {});

/// (lambda, gamma) of the linear family y' = lambda (y - 1) + gamma integral_0^x y dt.
struct LinearParams {
    double lambda = 0.0;
    double gamma = 0.0;
};

/// The linear test family with y(x0) = 2 and exact derivative callables.
[[nodiscard]] ScalarVIDE linear_test_problem(LinearParams params, double x0, double x_end);

struct ProblemRegistryEntry {
    std::string name;
    ScalarVIDE problem;
    LinearParams params;
    double x0 = 0.0;
    double x_end = 10.0;
};

/// Names: "example1", "example2", "example3" (interval [0, 10]) and "test",
/// which requires `params` and uses [x0, x_end]. Throws LookupError otherwise.
[[nodiscard]] ProblemRegistryEntry registry_lookup(std::string_view name,
                                                   std::optional<LinearParams> params = {},
                                                   double x0 = 0.0, double x_end = 10.0);

[[nodiscard]] std::vector<std::string> registry_names();

}  // namespace vide
