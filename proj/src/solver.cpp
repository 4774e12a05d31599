#include "vide/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "vide/error.hpp"

namespace vide {

Trajectory::Trajectory(Mesh mesh, std::size_t components, Method method)
    : mesh_(mesh), components_(components), method_(method) {
    if (components == 0) throw DomainError("trajectory: zero components");
    values_.reserve(mesh.size() * components);
}

void Trajectory::push_state(std::span<const double> y) {
    if (y.size() != components_) throw DomainError("trajectory: state size mismatch");
    values_.insert(values_.end(), y.begin(), y.end());
}

namespace {

void check_mesh(const Mesh& mesh, double x0, double x_end) {
    const double scale = std::max({std::abs(x0), std::abs(x_end), x_end - x0});
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * scale;
    if (mesh.x0() != x0 || std::abs(mesh.x_end() - x_end) > slack) {
        throw DomainError("solve: mesh interval does not match the problem interval");
    }
}

bool out_of_bounds(double v) {
    return !std::isfinite(v) || std::abs(v) > kDivergenceGuard;
}

[[noreturn]] void diverged(std::size_t node) {
    throw DivergenceError("solve: solution diverged at node " + std::to_string(node), node);
}

double fd_first(const std::function<double(double)>& g, double u, double scale) {
    const double s = scale * std::max(1.0, std::abs(u));
    return (g(u + s) - g(u - s)) / (2.0 * s);
}

double fd_second(const std::function<double(double)>& g, double u, double scale) {
    const double s = std::sqrt(scale) * std::max(1.0, std::abs(u));
    return (g(u + s) - 2.0 * g(u) + g(u - s)) / (s * s);
}

// (h/2) [K(x, y_0, x_0) + 2 sum_{j=1}^{i} K(x, y_j, x_j)]: the part of the
// implicit trapezium sum that does not involve the unknown y_{i+1}.
double known_window(const KernelFn& K, double x, const HistoryView& history) {
    const Mesh& mesh = history.mesh();
    CompensatedSum sum;
    sum.add(K(x, history.value(0), mesh.node(0)));
    for (std::size_t j = 1; j <= history.k(); ++j) {
        sum.add(2.0 * K(x, history.value(j), mesh.node(j)));
    }
    return 0.5 * mesh.h() * sum.value();
}

// Solves u = y_i + h f(x1, u) + h (known + (h/2) K(x1, u, x1)).
ImplicitStepResult solve_implicit_scalar(const ScalarVIDE& p, double x1, double y_i, double h,
                                         double known, const NewtonConfig& cfg) {
    const double half_h = 0.5 * h;
    const auto f_of = [&](double u) { return p.f(x1, u); };
    const auto K_of = [&](double u) { return p.K(x1, u, x1); };

    const RealFn F = [&](double u) { return u - y_i - h * f_of(u) - h * (known + half_h * K_of(u)); };
    const RealFn Fp = [&](double u) {
        const double fy = p.df_dy ? p.df_dy(x1, u) : fd_first(f_of, u, cfg.fd_step_scale);
        const double Ky = p.dK_dy ? p.dK_dy(x1, u, x1) : fd_first(K_of, u, cfg.fd_step_scale);
        return 1.0 - h * fy - h * half_h * Ky;
    };

    NewtonResult r;
    if (cfg.variant == NewtonVariant::ThirdOrder) {
        const RealFn Fpp = [&](double u) {
            const double fyy = p.d2f_dy2 ? p.d2f_dy2(x1, u) : fd_second(f_of, u, cfg.fd_step_scale);
            const double Kyy = p.d2K_dy2 ? p.d2K_dy2(x1, u, x1) : fd_second(K_of, u, cfg.fd_step_scale);
            return -h * fyy - h * half_h * Kyy;
        };
        r = newton_third_order(F, Fp, Fpp, y_i, cfg);
    } else {
        r = newton_solve(F, Fp, y_i, cfg);
    }
    return {r.root, r.iterations};
}

// Kernel values K(x_j, y_j, x_j) for the opt-in x-independent mode.
class KernelCache {
public:
    void push(double v) {
        if (count_ == 0) {
            first_ = v;
        } else if (count_ >= 2) {
            interior_.add(last_);
        }
        last_ = v;
        ++count_;
    }
    // (h/2)(K_0 + 2 sum_{j=1}^{k-1} K_j + K_k), k = count - 1.
    [[nodiscard]] double window(double h) const {
        if (count_ < 2) return 0.0;
        CompensatedSum s;
        s.add(first_);
        s.add(2.0 * interior_.value());
        s.add(last_);
        return 0.5 * h * s.value();
    }
    // (h/2)(K_0 + 2 sum_{j=1}^{k} K_j).
    [[nodiscard]] double known(double h) const {
        if (count_ < 2) return 0.5 * h * first_;
        CompensatedSum s;
        s.add(first_);
        s.add(2.0 * interior_.value());
        s.add(2.0 * last_);
        return 0.5 * h * s.value();
    }

private:
    double first_ = 0.0;
    double last_ = 0.0;
    CompensatedSum interior_;
    std::size_t count_ = 0;
};

std::size_t march_scalar(const ScalarVIDE& p, const Mesh& mesh, Method method,
                         const NewtonConfig& cfg, const NodeObserver& observer,
                         std::vector<int>* newton_stats) {
    validate(p);
    validate(cfg);
    check_mesh(mesh, p.x0, p.x_end);

    const std::size_t n = mesh.size();
    const double h = mesh.h();
    std::vector<double> y;
    y.reserve(n);
    y.push_back(p.y0);
    if (observer && !observer(0, std::span<const double>(y.data(), 1))) return 1;

    KernelCache cache;
    const bool incremental = p.kernel_independent_of_x;
    if (incremental) cache.push(p.K(mesh.node(0), p.y0, mesh.node(0)));

    for (std::size_t i = 0; i + 1 < n; ++i) {
        const HistoryView history(mesh, std::span<const double>(y.data(), i + 1), i);
        double next = 0.0;
        if (method == Method::Explicit) {
            if (incremental) {
                const double xi = mesh.node(i);
                next = y[i] + h * p.f(xi, y[i]) + h * cache.window(h);
            } else {
                next = explicit_step(p, history);
            }
        } else {
            const double x1 = mesh.node(i + 1);
            const double known = incremental ? cache.known(h) : known_window(p.K, x1, history);
            const auto r = solve_implicit_scalar(p, x1, y[i], h, known, cfg);
            next = r.value;
            if (newton_stats) newton_stats->push_back(r.iterations);
        }
        if (out_of_bounds(next)) diverged(i + 1);
        y.push_back(next);
        if (incremental) cache.push(p.K(mesh.node(i + 1), next, mesh.node(i + 1)));
        if (observer && !observer(i + 1, std::span<const double>(&y.back(), 1))) return i + 2;
    }
    return n;
}

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Multivariate Newton for u = y_i + h f(x1, u) + h (known + (h/2) K(x1, u, x1)).
int solve_implicit_system(const SystemVIDE& p, double x1, std::span<const double> y_i, double h,
                          std::span<const double> known, const NewtonConfig& cfg,
                          std::span<double> u_out) {
    const std::size_t m = p.m;
    const double half_h = 0.5 * h;
    Vector u = Eigen::Map<const Vector>(y_i.data(), static_cast<Eigen::Index>(m));
    Vector fv(m), kv(m), g(m);
    Matrix jac(m, m), scratch(m, m);

    const auto residual = [&](const Vector& v, Vector& out) {
        std::span<const double> vs(v.data(), m);
        p.f(x1, vs, std::span<double>(fv.data(), m));
        p.K(x1, vs, x1, std::span<double>(kv.data(), m));
        for (std::size_t c = 0; c < m; ++c) {
            out[c] = v[c] - y_i[c] - h * fv[c] - h * (known[c] + half_h * kv[c]);
        }
    };

    const auto jacobian = [&](const Vector& v) {
        std::span<const double> vs(v.data(), m);
        jac.setIdentity();
        if (p.jacobian_f) {
            p.jacobian_f(x1, vs, std::span<double>(scratch.data(), m * m));
            jac -= h * scratch;
        }
        if (p.jacobian_K) {
            p.jacobian_K(x1, vs, x1, std::span<double>(scratch.data(), m * m));
            jac -= h * half_h * scratch;
        }
        if (p.jacobian_f && p.jacobian_K) return;
        // Central differences for whichever Jacobian is missing.
        Vector plus = v, minus = v, fp(m), fm(m), kp(m), km(m);
        for (std::size_t c = 0; c < m; ++c) {
            const double s = cfg.fd_step_scale * std::max(1.0, std::abs(v[c]));
            plus[c] = v[c] + s;
            minus[c] = v[c] - s;
            std::span<const double> ps(plus.data(), m), ms(minus.data(), m);
            if (!p.jacobian_f) {
                p.f(x1, ps, std::span<double>(fp.data(), m));
                p.f(x1, ms, std::span<double>(fm.data(), m));
                jac.col(c) -= h * (fp - fm) / (2.0 * s);
            }
            if (!p.jacobian_K) {
                p.K(x1, ps, x1, std::span<double>(kp.data(), m));
                p.K(x1, ms, x1, std::span<double>(km.data(), m));
                jac.col(c) -= h * half_h * (kp - km) / (2.0 * s);
            }
            plus[c] = v[c];
            minus[c] = v[c];
        }
    };

    residual(u, g);
    int iterations = 0;
    double res_norm = g.lpNorm<Eigen::Infinity>();
    while (iterations == 0 ? res_norm > 0.0 : res_norm > cfg.tol) {
        if (iterations == cfg.max_iter) {
            throw ConvergenceError("newton: no convergence after " + std::to_string(cfg.max_iter) +
                                       " iterations (residual " + std::to_string(res_norm) + ")",
                                   res_norm, iterations);
        }
        jacobian(u);
        Eigen::PartialPivLU<Matrix> lu(jac);
        if (!(lu.rcond() > std::numeric_limits<double>::epsilon())) {
            throw SingularDerivativeError("newton: step Jacobian is singular");
        }
        const Vector delta = lu.solve(g);
        u -= delta;
        ++iterations;
        residual(u, g);
        res_norm = g.lpNorm<Eigen::Infinity>();
        if (!u.allFinite() || !std::isfinite(res_norm)) {
            throw ConvergenceError("newton: iterate became non-finite", res_norm, iterations);
        }
        if (delta.lpNorm<Eigen::Infinity>() <= cfg.tol) break;
    }
    std::copy(u.data(), u.data() + m, u_out.begin());
    return iterations;
}

std::size_t march_system(const SystemVIDE& p, const Mesh& mesh, Method method,
                         const NewtonConfig& cfg, const NodeObserver& observer,
                         std::vector<int>* newton_stats) {
    validate(p);
    validate(cfg);
    check_mesh(mesh, p.x0, p.x_end);

    const std::size_t n = mesh.size();
    const std::size_t m = p.m;
    const double h = mesh.h();
    std::vector<double> y;
    y.reserve(n * m);
    y.insert(y.end(), p.y0.begin(), p.y0.end());
    if (observer && !observer(0, std::span<const double>(y.data(), m))) return 1;

    std::vector<double> fv(m), window(m), next(m), kv(m);
    std::vector<CompensatedSum> sums(m);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const HistoryView history(mesh, std::span<const double>(y.data(), (i + 1) * m), i, m);
        const auto y_i = history.state(i);
        if (method == Method::Explicit) {
            const double xi = mesh.node(i);
            p.f(xi, y_i, fv);
            trapezoid_window(p.K, xi, history, window);
            for (std::size_t c = 0; c < m; ++c) next[c] = y_i[c] + h * fv[c] + h * window[c];
        } else {
            const double x1 = mesh.node(i + 1);
            std::fill(sums.begin(), sums.end(), CompensatedSum{});
            for (std::size_t j = 0; j <= i; ++j) {
                p.K(x1, history.state(j), mesh.node(j), kv);
                const double weight = j == 0 ? 1.0 : 2.0;
                for (std::size_t c = 0; c < m; ++c) sums[c].add(weight * kv[c]);
            }
            for (std::size_t c = 0; c < m; ++c) window[c] = 0.5 * h * sums[c].value();
            const int its = solve_implicit_system(p, x1, y_i, h, window, cfg, next);
            if (newton_stats) newton_stats->push_back(its);
        }
        if (std::any_of(next.begin(), next.end(), out_of_bounds)) diverged(i + 1);
        y.insert(y.end(), next.begin(), next.end());
        if (observer && !observer(i + 1, std::span<const double>(y.data() + (i + 1) * m, m))) {
            return i + 2;
        }
    }
    return n;
}

template <typename Problem>
Trajectory solve_any(const Problem& problem, const Mesh& mesh, Method method, const NewtonConfig& cfg,
                     std::size_t m) {
    Trajectory traj(mesh, m, method);
    std::vector<int> stats;
    const auto record = [&traj](std::size_t, std::span<const double> y) {
        traj.push_state(y);
        return true;
    };
    if constexpr (std::is_same_v<Problem, ScalarVIDE>) {
        march_scalar(problem, mesh, method, cfg, record, &stats);
    } else {
        march_system(problem, mesh, method, cfg, record, &stats);
    }
    for (int s : stats) traj.push_newton(s);
    return traj;
}

}  // namespace

double explicit_step(const ScalarVIDE& problem, const HistoryView& history) {
    const std::size_t i = history.k();
    const Mesh& mesh = history.mesh();
    const double xi = mesh.node(i);
    const double yi = history.value(i);
    const double h = mesh.h();
    const double next = yi + h * problem.f(xi, yi) + h * trapezoid_window(problem.K, xi, history);
    if (!std::isfinite(next)) diverged(i + 1);
    return next;
}

ImplicitStepResult implicit_step(const ScalarVIDE& problem, const HistoryView& history,
                                 const NewtonConfig& cfg) {
    const std::size_t i = history.k();
    const Mesh& mesh = history.mesh();
    if (i + 1 >= mesh.size()) throw DomainError("implicit_step: no node after the history");
    const double x1 = mesh.node(i + 1);
    const double known = known_window(problem.K, x1, history);
    return solve_implicit_scalar(problem, x1, history.value(i), mesh.h(), known, cfg);
}

std::size_t march(const ScalarVIDE& problem, const Mesh& mesh, Method method,
                  const NewtonConfig& cfg, const NodeObserver& observer) {
    return march_scalar(problem, mesh, method, cfg, observer, nullptr);
}

std::size_t march(const SystemVIDE& problem, const Mesh& mesh, Method method,
                  const NewtonConfig& cfg, const NodeObserver& observer) {
    return march_system(problem, mesh, method, cfg, observer, nullptr);
}

Trajectory solve(const ScalarVIDE& problem, const Mesh& mesh, Method method, const NewtonConfig& cfg) {
    return solve_any(problem, mesh, method, cfg, 1);
}

Trajectory solve(const SystemVIDE& problem, const Mesh& mesh, Method method, const NewtonConfig& cfg) {
    return solve_any(problem, mesh, method, cfg, problem.m);
}

}  // namespace vide
