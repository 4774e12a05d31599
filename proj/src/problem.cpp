#include "vide/problem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vide/error.hpp"

namespace vide {

namespace {

void check_interval(double x0, double x_end) {
    if (!std::isfinite(x0) || !std::isfinite(x_end) || !(x_end > x0)) {
        throw DomainError("problem: interval end must exceed its start");
    }
}

}  // namespace

void validate(const ScalarVIDE& problem) {
    if (!problem.f || !problem.K) {
        throw DomainError("problem: f and K are required");
    }
    check_interval(problem.x0, problem.x_end);
    if (!std::isfinite(problem.y0)) {
        throw DomainError("problem: initial value must be finite");
    }
}

void validate(const SystemVIDE& problem) {
    if (problem.m < 1) {
        throw DomainError("system: need at least one component");
    }
    if (!problem.f || !problem.K) {
        throw DomainError("system: f and K are required");
    }
    if (problem.y0.size() != problem.m) {
        throw DomainError("system: expected " + std::to_string(problem.m) +
                          " initial values, got " + std::to_string(problem.y0.size()));
    }
    check_interval(problem.x0, problem.x_end);
    if (!std::all_of(problem.y0.begin(), problem.y0.end(), [](double v) { return std::isfinite(v); })) {
        throw DomainError("system: initial values must be finite");
    }
}

SystemVIDE as_system(const ScalarVIDE& p) {
    SystemVIDE s;
    s.m = 1;
    s.f = [f = p.f](double x, std::span<const double> y, std::span<double> out) { out[0] = f(x, y[0]); };
    s.K = [K = p.K](double x, std::span<const double> y, double t, std::span<double> out) {
        out[0] = K(x, y[0], t);
    };
    if (p.df_dy) {
        s.jacobian_f = [d = p.df_dy](double x, std::span<const double> y, std::span<double> out) {
            out[0] = d(x, y[0]);
        };
    }
    if (p.dK_dy) {
        s.jacobian_K = [d = p.dK_dy](double x, std::span<const double> y, double t, std::span<double> out) {
            out[0] = d(x, y[0], t);
        };
    }
    s.x0 = p.x0;
    s.x_end = p.x_end;
    s.y0 = {p.y0};
    return s;
}

SystemVIDE reduce_order(std::size_t n, ScalarFn f, KernelFn K, std::vector<double> initial_values,
                        double x0, double x_end, ScalarFn df_dy, KernelFn dK_dy) {
    if (n < 1) {
        throw DomainError("reduce_order: order must be at least 1");
    }
    if (initial_values.size() != n) {
        throw DomainError("reduce_order: order " + std::to_string(n) + " needs " +
                          std::to_string(n) + " initial values, got " +
                          std::to_string(initial_values.size()));
    }
    if (!f || !K) {
        throw DomainError("reduce_order: f and K are required");
    }
    check_interval(x0, x_end);

    SystemVIDE s;
    s.m = n;
    s.x0 = x0;
    s.x_end = x_end;
    s.y0 = std::move(initial_values);
    s.f = [n, f = std::move(f)](double x, std::span<const double> y, std::span<double> out) {
        for (std::size_t j = 0; j + 1 < n; ++j) out[j] = y[j + 1];
        out[n - 1] = f(x, y[0]);
    };
    // Only the last component carries a memory term, and it sees y_1 alone.
    s.K = [n, K = std::move(K)](double x, std::span<const double> y, double t, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        out[n - 1] = K(x, y[0], t);
    };
    if (df_dy) {
        s.jacobian_f = [n, d = std::move(df_dy)](double x, std::span<const double> y, std::span<double> out) {
            std::fill(out.begin(), out.end(), 0.0);
            for (std::size_t j = 0; j + 1 < n; ++j) out[j * n + j + 1] = 1.0;
            out[(n - 1) * n] += d(x, y[0]);
        };
    }
    if (dK_dy) {
        s.jacobian_K = [n, d = std::move(dK_dy)](double x, std::span<const double> y, double t,
                                                 std::span<double> out) {
            std::fill(out.begin(), out.end(), 0.0);
            out[(n - 1) * n] = d(x, y[0], t);
        };
    }
    return s;
}

ScalarVIDE linear_test_problem(LinearParams params, double x0, double x_end) {
    check_interval(x0, x_end);
    const double lambda = params.lambda;
    const double gamma = params.gamma;
    ScalarVIDE p;
    p.f = [lambda](double, double y) { return lambda * (y - 1.0); };
    p.K = [gamma](double, double y, double) { return gamma * y; };
    p.df_dy = [lambda](double, double) { return lambda; };
    p.dK_dy = [gamma](double, double, double) { return gamma; };
    p.d2f_dy2 = [](double, double) { return 0.0; };
    p.d2K_dy2 = [](double, double, double) { return 0.0; };
    p.x0 = x0;
    p.x_end = x_end;
    p.y0 = 2.0;
    return p;
}

namespace {

struct NamedExample {
    const char* name;
    LinearParams params;
};

// The three linear examples, all on [0, 10].
constexpr NamedExample kExamples[] = {
    {"example1", {-100.0, -0.1}},
    {"example2", {-14.0, -15.0}},
    {"example3", {-0.1, -650.0}},
};

}  // namespace

ProblemRegistryEntry registry_lookup(std::string_view name, std::optional<LinearParams> params,
                                     double x0, double x_end) {
    if (name == "test") {
        if (!params) {
            throw LookupError("registry: \"test\" requires (lambda, gamma)");
        }
        return {"test", linear_test_problem(*params, x0, x_end), *params, x0, x_end};
    }
    for (const auto& ex : kExamples) {
        if (name == ex.name) {
            return {ex.name, linear_test_problem(ex.params, 0.0, 10.0), ex.params, 0.0, 10.0};
        }
    }
    throw LookupError("registry: unknown problem \"" + std::string(name) + "\"");
}

std::vector<std::string> registry_names() {
    std::vector<std::string> names;
    for (const auto& ex : kExamples) names.emplace_back(ex.name);
    names.emplace_back("test");
    return names;
}

}  // namespace vide
