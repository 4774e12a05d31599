#include "vide/vide.h"

#include <type_traits>
#include <exception>
#include <new>
#include <optional>
#include <string>
#include <variant>

#include "vide/error.hpp"
#include "vide/newton.hpp"
#include "vide/problem.hpp"
#include "vide/richardson.hpp"
#include "vide/solver.hpp"
#include "vide/stability.hpp"

struct vide_problem {
    std::variant<vide::ScalarVIDE, vide::SystemVIDE> problem;
    std::optional<vide::LinearParams> params;
    std::string name;
};

struct vide_trajectory {
    vide::Trajectory traj;
};

struct vide_stability_grid {
    vide::StabilityGrid grid;
};

struct vide_tableau {
    vide::RichardsonTableau tab;
};

namespace {

thread_local std::string g_last_error;
thread_local long long g_last_node = -1;

class CallbackError : public vide::Error {
public:
    using vide::Error::Error;
};

class InvalidArgument : public vide::Error {
public:
    using vide::Error::Error;
};

void require(bool ok, const char* what) {
    if (!ok) throw InvalidArgument(what);
}

void check_callback(int rc, const char* which) {
    if (rc != 0) {
        throw CallbackError(std::string("callback ") + which + " returned " + std::to_string(rc));
    }
}

vide_status fail(vide_status status, const char* msg) {
    g_last_error = msg;
    return status;
}

template <typename Fn>
vide_status guarded(Fn&& fn) {
    g_last_error.clear();
    g_last_node = -1;
    try {
        fn();
        return VIDE_OK;
    } catch (const InvalidArgument& e) {
        return fail(VIDE_ERR_INVALID_ARGUMENT, e.what());
    } catch (const CallbackError& e) {
        return fail(VIDE_ERR_CALLBACK, e.what());
    } catch (const vide::DomainError& e) {
        return fail(VIDE_ERR_DOMAIN, e.what());
    } catch (const vide::LookupError& e) {
        return fail(VIDE_ERR_LOOKUP, e.what());
    } catch (const vide::ConvergenceError& e) {
        return fail(VIDE_ERR_CONVERGENCE, e.what());
    } catch (const vide::SingularDerivativeError& e) {
        return fail(VIDE_ERR_SINGULAR, e.what());
    } catch (const vide::DivergenceError& e) {
        g_last_node = static_cast<long long>(e.node());
        return fail(VIDE_ERR_DIVERGENCE, e.what());
    } catch (const vide::NumericFailure& e) {
        return fail(VIDE_ERR_NUMERIC, e.what());
    } catch (const vide::ToleranceUnreachable& e) {
        return fail(VIDE_ERR_TOLERANCE_UNREACHABLE, e.what());
    } catch (const vide::StabilityNotFound& e) {
        return fail(VIDE_ERR_STABILITY_NOT_FOUND, e.what());
    } catch (const std::bad_alloc&) {
        return fail(VIDE_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(VIDE_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(VIDE_ERR_INTERNAL, "unknown exception");
    }
}

vide::Method to_method(vide_method m) {
    switch (m) {
        case VIDE_IMPLICIT: return vide::Method::Implicit;
        case VIDE_EXPLICIT: return vide::Method::Explicit;
    }
    throw InvalidArgument("unknown method");
}

vide::NewtonConfig to_config(const vide_newton_config* cfg) {
    vide::NewtonConfig c;
    if (!cfg) return c;
    c.tol = cfg->tol;
    c.max_iter = cfg->max_iter;
    c.fd_step_scale = cfg->fd_step_scale;
    switch (cfg->variant) {
        case VIDE_NEWTON_SECOND_ORDER: c.variant = vide::NewtonVariant::SecondOrder; break;
        case VIDE_NEWTON_THIRD_ORDER: c.variant = vide::NewtonVariant::ThirdOrder; break;
        default: throw InvalidArgument("unknown Newton variant");
    }
    vide::validate(c);
    return c;
}

vide::ScalarFn wrap(vide_scalar_fn fn, void* user, const char* which) {
    if (!fn) return {};
    return [fn, user, which](double x, double y) {
        double out = 0.0;
        check_callback(fn(user, x, y, &out), which);
        return out;
    };
}

vide::KernelFn wrap(vide_kernel_fn fn, void* user, const char* which) {
    if (!fn) return {};
    return [fn, user, which](double x, double y, double t) {
        double out = 0.0;
        check_callback(fn(user, x, y, t, &out), which);
        return out;
    };
}

vide::VectorFn wrap(vide_vector_fn fn, void* user, const char* which) {
    if (!fn) return {};
    return [fn, user, which](double x, std::span<const double> y, std::span<double> out) {
        check_callback(fn(user, x, y.data(), out.data()), which);
    };
}

vide::VectorKernelFn wrap(vide_vector_kernel_fn fn, void* user, const char* which) {
    if (!fn) return {};
    return [fn, user, which](double x, std::span<const double> y, double t, std::span<double> out) {
        check_callback(fn(user, x, y.data(), t, out.data()), which);
    };
}

}  // namespace

extern "C" {

const char* vide_status_string(vide_status status) {
    switch (status) {
        case VIDE_OK: return "ok";
        case VIDE_ERR_INVALID_ARGUMENT: return "invalid argument";
        case VIDE_ERR_DOMAIN: return "domain error";
        case VIDE_ERR_LOOKUP: return "lookup error";
        case VIDE_ERR_CONVERGENCE: return "Newton did not converge";
        case VIDE_ERR_SINGULAR: return "singular derivative";
        case VIDE_ERR_DIVERGENCE: return "solution diverged";
        case VIDE_ERR_NUMERIC: return "numeric failure";
        case VIDE_ERR_TOLERANCE_UNREACHABLE: return "tolerance unreachable";
        case VIDE_ERR_STABILITY_NOT_FOUND: return "no stable node count found";
        case VIDE_ERR_CALLBACK: return "callback failed";
        case VIDE_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* vide_last_error_message(void) {
    return g_last_error.c_str();
}

long long vide_last_error_node(void) {
    return g_last_node;
}

void vide_newton_config_default(vide_newton_config* cfg) {
    if (!cfg) return;
    const vide::NewtonConfig c;
    cfg->tol = c.tol;
    cfg->max_iter = c.max_iter;
    cfg->variant = VIDE_NEWTON_SECOND_ORDER;
    cfg->fd_step_scale = c.fd_step_scale;
}

vide_status vide_problem_from_registry(const char* name, const double* lambda_gamma, double x0,
                                       double x_end, vide_problem** out) {
    return guarded([&] {
        require(name && out, "name and out must be non-null");
        std::optional<vide::LinearParams> params;
        if (lambda_gamma) params = vide::LinearParams{lambda_gamma[0], lambda_gamma[1]};
        auto entry = vide::registry_lookup(name, params, x0, x_end);
        *out = new vide_problem{std::move(entry.problem), entry.params, entry.name};
    });
}

vide_status vide_problem_linear(double lambda, double gamma, double x0, double x_end, vide_problem** out) {
    return guarded([&] {
        require(out, "out must be non-null");
        const vide::LinearParams params{lambda, gamma};
        *out = new vide_problem{vide::linear_test_problem(params, x0, x_end), params, "linear"};
    });
}

vide_status vide_problem_create_scalar(vide_scalar_fn f, vide_kernel_fn K, vide_scalar_fn df_dy,
                                       vide_kernel_fn dK_dy, void* user, double x0, double x_end,
                                       double y0, vide_problem** out) {
    return guarded([&] {
        require(f && K && out, "f, K and out must be non-null");
        vide::ScalarVIDE p;
        p.f = wrap(f, user, "f");
        p.K = wrap(K, user, "K");
        p.df_dy = wrap(df_dy, user, "df_dy");
        p.dK_dy = wrap(dK_dy, user, "dK_dy");
        p.x0 = x0;
        p.x_end = x_end;
        p.y0 = y0;
        vide::validate(p);
        *out = new vide_problem{std::move(p), std::nullopt, "scalar"};
    });
}

vide_status vide_problem_create_order_n(size_t n, vide_scalar_fn f, vide_kernel_fn K, void* user,
                                        const double* initial_values, double x0, double x_end,
                                        vide_problem** out) {
    return guarded([&] {
        require(f && K && initial_values && out, "f, K, initial_values and out must be non-null");
        auto sys = vide::reduce_order(n, wrap(f, user, "f"), wrap(K, user, "K"),
                                      std::vector<double>(initial_values, initial_values + n), x0, x_end);
        *out = new vide_problem{std::move(sys), std::nullopt, "order_n"};
    });
}

vide_status vide_problem_create_system(size_t m, vide_vector_fn f, vide_vector_kernel_fn K,
                                       vide_vector_fn jacobian_f, vide_vector_kernel_fn jacobian_K,
                                       void* user, double x0, double x_end, const double* y0,
                                       vide_problem** out) {
    return guarded([&] {
        require(f && K && y0 && out, "f, K, y0 and out must be non-null");
        vide::SystemVIDE s;
        s.m = m;
        s.f = wrap(f, user, "f");
        s.K = wrap(K, user, "K");
        s.jacobian_f = wrap(jacobian_f, user, "jacobian_f");
        s.jacobian_K = wrap(jacobian_K, user, "jacobian_K");
        s.x0 = x0;
        s.x_end = x_end;
        s.y0.assign(y0, y0 + m);
        vide::validate(s);
        *out = new vide_problem{std::move(s), std::nullopt, "system"};
    });
}

vide_status vide_problem_set_kernel_independent_of_x(vide_problem* p, int enabled) {
    return guarded([&] {
        require(p, "problem must be non-null");
        auto* scalar = std::get_if<vide::ScalarVIDE>(&p->problem);
        require(scalar != nullptr, "incremental kernel mode is available for scalar problems only");
        scalar->kernel_independent_of_x = enabled != 0;
    });
}

void vide_problem_destroy(vide_problem* p) {
    delete p;
}

vide_status vide_problem_get_info(const vide_problem* p, vide_problem_info* out) {
    return guarded([&] {
        require(p && out, "problem and out must be non-null");
        std::visit(
            [&](const auto& prob) {
                out->x0 = prob.x0;
                out->x_end = prob.x_end;
                if constexpr (std::is_same_v<std::decay_t<decltype(prob)>, vide::SystemVIDE>) {
                    out->components = prob.m;
                } else {
                    out->components = 1;
                }
            },
            p->problem);
        out->has_linear_params = p->params.has_value() ? 1 : 0;
        out->lambda = p->params ? p->params->lambda : 0.0;
        out->gamma = p->params ? p->params->gamma : 0.0;
    });
}

vide_status vide_solve(const vide_problem* p, size_t n_nodes, vide_method method,
                       const vide_newton_config* cfg, vide_trajectory** out) {
    return guarded([&] {
        require(p && out, "problem and out must be non-null");
        const auto m = to_method(method);
        const auto c = to_config(cfg);
        std::visit(
            [&](const auto& prob) {
                const auto mesh = vide::build_mesh(prob.x0, prob.x_end, n_nodes);
                *out = new vide_trajectory{vide::solve(prob, mesh, m, c)};
            },
            p->problem);
    });
}

void vide_trajectory_destroy(vide_trajectory* t) {
    delete t;
}

size_t vide_trajectory_size(const vide_trajectory* t) {
    return t ? t->traj.size() : 0;
}

size_t vide_trajectory_components(const vide_trajectory* t) {
    return t ? t->traj.components() : 0;
}

double vide_trajectory_step(const vide_trajectory* t) {
    return t ? t->traj.mesh().h() : 0.0;
}

double vide_trajectory_x(const vide_trajectory* t, size_t i) {
    return t ? t->traj.mesh().node(i) : 0.0;
}

const double* vide_trajectory_values(const vide_trajectory* t) {
    return t ? t->traj.values().data() : nullptr;
}

const int* vide_trajectory_newton_iterations(const vide_trajectory* t) {
    if (!t || t->traj.method() != vide::Method::Implicit) return nullptr;
    return t->traj.newton_iterations().data();
}

vide_status vide_newton(vide_real_fn F, vide_real_fn Fprime, vide_real_fn Fsecond, void* user,
                        double y_init, const vide_newton_config* cfg, vide_newton_result* out) {
    return guarded([&] {
        require(F && Fprime && out, "F, Fprime and out must be non-null");
        const auto c = to_config(cfg);
        const vide::RealFn f = [F, user](double y) { return F(user, y); };
        const vide::RealFn fp = [Fprime, user](double y) { return Fprime(user, y); };
        vide::NewtonResult r;
        if (Fsecond) {
            const vide::RealFn fpp = [Fsecond, user](double y) { return Fsecond(user, y); };
            r = vide::newton_third_order(f, fp, fpp, y_init, c);
        } else {
            r = vide::newton_solve(f, fp, y_init, c);
        }
        *out = {r.root, r.iterations, r.residual};
    });
}

double vide_analytic_test_solution(double lambda, double gamma, double x) {
    return vide::analytic_test_solution({lambda, gamma}, x);
}

vide_status vide_stability_verdict(vide_method method, double z, double w, size_t i_max, double bound,
                                   vide_verdict* out) {
    return guarded([&] {
        require(out, "out must be non-null");
        require(i_max >= 1, "i_max must be at least 1");
        const auto v = vide::stability_verdict(to_method(method), z, w, i_max, bound);
        *out = {v.stable ? 1 : 0, v.first_exceed_index};
    });
}

void vide_grid_spec_default(vide_grid_spec* spec) {
    if (!spec) return;
    const vide::GridSpec s;
    *spec = {s.z_min, s.z_max, s.w_min, s.w_max, s.nz, s.nw, s.i_max, s.bound};
}

vide_status vide_sweep_region(const vide_grid_spec* spec, vide_method method, unsigned threads,
                              vide_stability_grid** out) {
    return guarded([&] {
        require(spec && out, "spec and out must be non-null");
        const vide::GridSpec s{spec->z_min, spec->z_max, spec->w_min, spec->w_max,
                               spec->nz,    spec->nw,    spec->i_max, spec->bound};
        *out = new vide_stability_grid{vide::sweep_region(s, to_method(method), threads)};
    });
}

void vide_stability_grid_destroy(vide_stability_grid* g) {
    delete g;
}

vide_status vide_stability_grid_get_spec(const vide_stability_grid* g, vide_grid_spec* out) {
    return guarded([&] {
        require(g && out, "grid and out must be non-null");
        const auto& s = g->grid.spec();
        *out = {s.z_min, s.z_max, s.w_min, s.w_max, s.nz, s.nw, s.i_max, s.bound};
    });
}

vide_status vide_stability_grid_cell(const vide_stability_grid* g, size_t p, size_t q, double* z,
                                     double* w, vide_verdict* verdict) {
    return guarded([&] {
        require(g != nullptr, "grid must be non-null");
        const auto& s = g->grid.spec();
        require(p < s.nz && q < s.nw, "cell index out of range");
        if (z) *z = g->grid.z_at(p);
        if (w) *w = g->grid.w_at(q);
        if (verdict) {
            const auto& v = g->grid.at(p, q);
            *verdict = {v.stable ? 1 : 0, v.first_exceed_index};
        }
    });
}

size_t vide_stability_grid_stable_count(const vide_stability_grid* g) {
    return g ? g->grid.stable_count() : 0;
}

vide_status vide_h_path(double lambda, double gamma, const double* h, size_t count, double* z, double* w) {
    return guarded([&] {
        require(count == 0 || (h && z && w), "h, z and w must be non-null");
        const auto path = vide::h_path(lambda, gamma, std::span<const double>(h, count));
        for (size_t k = 0; k < count; ++k) {
            z[k] = path.samples[k].z;
            w[k] = path.samples[k].w;
        }
    });
}

vide_status vide_pair_eigenvalues(size_t m, const double* J_f, const double* J_K, double h,
                                  vide_eigen_pair* out) {
    return guarded([&] {
        require(J_f && J_K && out, "J_f, J_K and out must be non-null");
        const auto pairing = vide::pair_eigenvalues(std::span<const double>(J_f, m * m),
                                                    std::span<const double>(J_K, m * m), m, h);
        for (size_t j = 0; j < m; ++j) {
            const auto& pr = pairing.pairs[j];
            out[j] = {pr.lambda.real(), pr.lambda.imag(), pr.gamma.real(), pr.gamma.imag(),
                      pr.qualifies ? 1 : 0, pr.z, pr.w};
        }
    });
}

vide_status vide_build_tableau(const vide_problem* p, vide_method method, size_t coarse_nodes,
                               const vide_newton_config* cfg, vide_tableau** out) {
    return guarded([&] {
        require(p && out, "problem and out must be non-null");
        const auto m = to_method(method);
        const auto c = to_config(cfg);
        std::visit([&](const auto& prob) { *out = new vide_tableau{vide::build_tableau(prob, m, coarse_nodes, c)}; },
                   p->problem);
    });
}

vide_status vide_nodes_for_tolerance(const vide_problem* p, vide_method method, double eps,
                                     size_t initial_coarse_nodes, size_t node_cap, size_t* n_nodes_out,
                                     vide_tableau** out) {
    return guarded([&] {
        require(p && n_nodes_out, "problem and n_nodes_out must be non-null");
        const auto* scalar = std::get_if<vide::ScalarVIDE>(&p->problem);
        require(scalar != nullptr, "tolerance search is available for scalar problems only");
        vide::ToleranceSearchOptions opts;
        opts.initial_coarse_nodes = initial_coarse_nodes;
        if (node_cap != 0) opts.node_cap = node_cap;
        auto r = vide::nodes_for_tolerance(*scalar, to_method(method), eps, opts);
        *n_nodes_out = r.n_nodes;
        if (out) *out = new vide_tableau{std::move(r.tableau)};
    });
}

void vide_tableau_destroy(vide_tableau* t) {
    delete t;
}

size_t vide_tableau_coarse_size(const vide_tableau* t) {
    return t ? t->tab.coarse_mesh().size() : 0;
}

size_t vide_tableau_components(const vide_tableau* t) {
    return t ? t->tab.components : 0;
}

double vide_tableau_coarse_x(const vide_tableau* t, size_t i) {
    return t ? t->tab.coarse_mesh().node(i) : 0.0;
}

double vide_tableau_error_estimate(const vide_tableau* t) {
    return t ? t->tab.error_estimate : 0.0;
}

const double* vide_tableau_column(const vide_tableau* t, size_t k) {
    if (!t || k < 1 || k > vide::kRichardsonLevels) return nullptr;
    return t->tab.columns[k - 1].data();
}

vide_status vide_min_nodes_for_stability(const vide_problem* p, size_t node_cap, vide_stability_search* out) {
    return guarded([&] {
        require(p && out, "problem and out must be non-null");
        const auto* scalar = std::get_if<vide::ScalarVIDE>(&p->problem);
        require(scalar != nullptr && p->params.has_value(),
                "stability search needs a linear (lambda, gamma) problem");
        const vide::ProblemRegistryEntry entry{p->name, *scalar, *p->params, scalar->x0, scalar->x_end};
        const auto r = vide::min_nodes_for_stability(entry, node_cap == 0 ? (1u << 20) : node_cap);
        *out = {r.n_nodes, r.h_s, r.z, r.w};
    });
}

}  // extern "C"
