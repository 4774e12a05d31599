#include "vide/newton.hpp"

#include <cmath>
#include <string>

#include "vide/error.hpp"

namespace vide {

namespace {

constexpr double kTinyDerivative = 1e-300;

NewtonResult iterate(const RealFn& F, const RealFn& Fprime, const RealFn* Fsecond, double y,
                     const NewtonConfig& cfg, std::vector<double>* iterates) {
    validate(cfg);
    if (iterates) iterates->assign(1, y);

    double residual = F(y);
    if (residual == 0.0) return {y, 0, residual};

    for (int k = 1; k <= cfg.max_iter; ++k) {
        const double d1 = Fprime(y);
        if (!(std::abs(d1) >= kTinyDerivative)) {
            throw SingularDerivativeError("newton: derivative vanished at iterate " +
                                          std::to_string(k - 1));
        }
        double step = residual / d1;
        if (Fsecond) {
            step += residual * residual * (*Fsecond)(y) / (2.0 * d1 * d1 * d1);
        }
        y -= step;
        if (iterates) iterates->push_back(y);
        residual = F(y);
        if (!std::isfinite(y) || !std::isfinite(residual)) {
            throw ConvergenceError("newton: iterate became non-finite", residual, k);
        }
        if (std::abs(residual) <= cfg.tol || std::abs(step) <= cfg.tol) return {y, k, residual};
    }
    throw ConvergenceError("newton: no convergence after " + std::to_string(cfg.max_iter) +
                               " iterations (residual " + std::to_string(residual) + ")",
                           residual, cfg.max_iter);
}

}  // namespace

void validate(const NewtonConfig& cfg) {
    if (!(cfg.tol > 0.0) || !(cfg.fd_step_scale > 0.0) || cfg.max_iter < 1) {
        throw DomainError("newton: tol and fd_step_scale must be positive, max_iter >= 1");
    }
}

NewtonResult newton_solve(const RealFn& F, const RealFn& Fprime, double y_init,
                          const NewtonConfig& cfg, std::vector<double>* iterates) {
    return iterate(F, Fprime, nullptr, y_init, cfg, iterates);
}

NewtonResult newton_third_order(const RealFn& F, const RealFn& Fprime, const RealFn& Fsecond,
                                double y_init, const NewtonConfig& cfg,
                                std::vector<double>* iterates) {
    return iterate(F, Fprime, &Fsecond, y_init, cfg, iterates);
}

}  // namespace vide
