#pragma once

#include <functional>
#include <vector>

namespace vide {

enum class NewtonVariant { SecondOrder, ThirdOrder };

struct NewtonConfig {
    double tol = 1e-12;
    int max_iter = 50;
    NewtonVariant variant = NewtonVariant::SecondOrder;
    /// Finite-difference step is fd_step_scale * max(1, |y|).
    double fd_step_scale = 1e-8;
};

/// Throws DomainError on a non-positive tolerance, step scale or iteration cap.
void validate(const NewtonConfig& cfg);

struct NewtonResult {
    double root = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

using RealFn = std::function<double(double)>;

/// y <- y - F/F'. Stops when |F(y)| <= tol or the last update is <= tol.
/// A start that already satisfies |F| <= tol returns with 0 iterations.
/// Throws ConvergenceError after max_iter updates and SingularDerivativeError
/// when |F'| < 1e-300. If `iterates` is non-null it receives y_0, y_1, ...
NewtonResult newton_solve(const RealFn& F, const RealFn& Fprime, double y_init,
                          const NewtonConfig& cfg, std::vector<double>* iterates = nullptr);

/// Adds the -F^2 F'' / (2 F'^3) correction to every update (cubic convergence).
NewtonResult newton_third_order(const RealFn& F, const RealFn& Fprime, const RealFn& Fsecond,
                                double y_init, const NewtonConfig& cfg,
                                std::vector<double>* iterates = nullptr);

}  // namespace vide
