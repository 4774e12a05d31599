#include "vide/stability.hpp"

#include <cmath>
#include <string>
#include <thread>

#include "vide/error.hpp"
#include "vide/quadrature.hpp"

namespace vide {

double analytic_test_solution(TestEquationParams params, double x) {
    const double lambda = params.lambda;
    const double disc = lambda * lambda + 4.0 * params.gamma;
    if (disc >= 0.0) {
        const double r = std::sqrt(disc);
        return std::exp(0.5 * (lambda - r) * x) + std::exp(0.5 * (lambda + r) * x);
    }
    return 2.0 * std::exp(0.5 * lambda * x) * std::cos(0.5 * std::sqrt(-disc) * x);
}

namespace {

// Equality with the bound is tolerated only at the origin, where P_i = 2.
struct BoundCheck {
    double bound;
    bool origin;

    [[nodiscard]] bool exceeded(double p) const noexcept {
        const double a = std::abs(p);
        if (!std::isfinite(a)) return true;
        return origin ? a > bound : a >= bound;
    }
};

// Drives either recursion; `emit` returns false to stop.
template <typename Emit>
void implicit_recursion(double z, double w, std::size_t count, Emit&& emit) {
    const double denom = 2.0 - 2.0 * z - w;
    CompensatedSum sum;
    sum.add(2.0);
    double prev = 2.0;
    for (std::size_t i = 1; i <= count; ++i) {
        const double p = 2.0 * (prev - z - w + w * sum.value()) / denom;
        if (!emit(i, p)) return;
        sum.add(p);
        prev = p;
    }
}

template <typename Emit>
void explicit_recursion(double z, double w, std::size_t count, Emit&& emit) {
    if (count >= 1 && !emit(1, z + 2.0)) return;
    if (count < 2) return;
    const double p2 = z * z + 0.5 * z * w + 2.0 * z + 2.0 * w + 2.0;
    if (!emit(2, p2)) return;

    const double growth = 1.0 + z + 0.5 * w;
    CompensatedSum sum;  // sum_{j=0}^{i-2} P_j
    sum.add(2.0);
    double older = z + 2.0;  // P_{i-2}
    double prev = p2;        // P_{i-1}
    for (std::size_t i = 3; i <= count; ++i) {
        sum.add(older);
        const double p = growth * prev - z - w + w * sum.value();
        if (!emit(i, p)) return;
        older = prev;
        prev = p;
    }
}

template <typename Recursion>
Verdict classify(Recursion&& recursion, double z, double w, std::size_t i_max, double bound) {
    const BoundCheck check{bound, z == 0.0 && w == 0.0};
    Verdict verdict;
    recursion(z, w, i_max, [&](std::size_t i, double p) {
        if (check.exceeded(p)) {
            verdict = {false, i};
            return false;
        }
        return true;
    });
    return verdict;
}

template <typename Recursion>
std::vector<double> sequence(Recursion&& recursion, double z, double w, std::size_t count) {
    std::vector<double> out;
    out.reserve(count + 1);
    out.push_back(2.0);
    recursion(z, w, count, [&](std::size_t, double p) {
        out.push_back(p);
        return true;
    });
    return out;
}

}  // namespace

Verdict implicit_P(double z, double w, std::size_t i_max, double bound) {
    return classify([](auto... a) { implicit_recursion(a...); }, z, w, i_max, bound);
}

Verdict explicit_P(double z, double w, std::size_t i_max, double bound) {
    return classify([](auto... a) { explicit_recursion(a...); }, z, w, i_max, bound);
}

std::vector<double> implicit_P_sequence(double z, double w, std::size_t count) {
    return sequence([](auto... a) { implicit_recursion(a...); }, z, w, count);
}

std::vector<double> explicit_P_sequence(double z, double w, std::size_t count) {
    return sequence([](auto... a) { explicit_recursion(a...); }, z, w, count);
}

Verdict stability_verdict(Method method, double z, double w, std::size_t i_max, double bound) {
    return method == Method::Implicit ? implicit_P(z, w, i_max, bound) : explicit_P(z, w, i_max, bound);
}

void validate(const GridSpec& s) {
    const bool finite = std::isfinite(s.z_min) && std::isfinite(s.z_max) && std::isfinite(s.w_min) &&
                        std::isfinite(s.w_max) && std::isfinite(s.bound);
    if (!finite) throw DomainError("grid: non-finite bounds");
    if (s.nz < 2 || s.nw < 2) throw DomainError("grid: resolution must be at least 2x2");
    if (s.i_max < 1) throw DomainError("grid: i_max must be at least 1");
    if (!(s.z_min < s.z_max) || !(s.w_min < s.w_max)) {
        throw DomainError("grid: empty or inverted rectangle");
    }
    if (s.z_max > 0.0 || s.w_max > 0.0) {
        throw DomainError("grid: rectangle must lie in the closed third quadrant");
    }
    if (!(s.bound > 0.0)) throw DomainError("grid: bound must be positive");
}

StabilityGrid::StabilityGrid(GridSpec spec, Method method)
    : spec_(spec), method_(method), verdicts_(spec.nz * spec.nw) {}

namespace {

double lattice(double lo, double hi, std::size_t k, std::size_t n) {
    // The last index lands exactly on `hi` so the origin stays the origin.
    if (k + 1 == n) return hi;
    return lo + (hi - lo) * (static_cast<double>(k) / static_cast<double>(n - 1));
}

}  // namespace

double StabilityGrid::z_at(std::size_t p) const noexcept {
    return lattice(spec_.z_min, spec_.z_max, p, spec_.nz);
}

double StabilityGrid::w_at(std::size_t q) const noexcept {
    return lattice(spec_.w_min, spec_.w_max, q, spec_.nw);
}

std::size_t StabilityGrid::stable_count() const noexcept {
    std::size_t n = 0;
    for (const auto& v : verdicts_) n += v.stable ? 1 : 0;
    return n;
}

StabilityGrid sweep_region(const GridSpec& spec, Method method, unsigned threads) {
    validate(spec);
    StabilityGrid grid(spec, method);

    const auto run_rows = [&grid, &spec, method](std::size_t first, std::size_t stride) {
        for (std::size_t q = first; q < spec.nw; q += stride) {
            const double w = grid.w_at(q);
            for (std::size_t p = 0; p < spec.nz; ++p) {
                grid.at(p, q) = stability_verdict(method, grid.z_at(p), w, spec.i_max, spec.bound);
            }
        }
    };

    const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), spec.nw);
    if (workers == 1) {
        run_rows(0, 1);
        return grid;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(run_rows, t, workers);
    pool.clear();
    return grid;
}

HPath h_path(double lambda, double gamma, std::span<const double> h_values) {
    HPath path{lambda, gamma, {}};
    path.samples.reserve(h_values.size());
    for (double h : h_values) {
        if (!(h >= 0.0) || !std::isfinite(h)) {
            throw DomainError("h_path: stepsizes must be finite and non-negative");
        }
        path.samples.push_back({h, h * lambda, h * h * gamma});
    }
    return path;
}

}  // namespace vide
