#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "vide/problem.hpp"
#include "vide/solver.hpp"

namespace vide {

// Stability of the two schemes on the linear test equation
//
//     y' = lambda (y - 1) + gamma integral_0^x y dt,   y(0) = 2,
//
// in the variables z = h lambda, w = h^2 gamma. P_i(z, w) is the numerical
// solution after i steps; a point is practically stable when |P_i| < 2 for
// every i up to a cap (|P_i| <= 2 allowed only at the origin).

using TestEquationParams = LinearParams;

/// Exact solution of the test equation. Real-root branch when
/// lambda^2 + 4 gamma >= 0, damped-cosine branch otherwise.
[[nodiscard]] double analytic_test_solution(TestEquationParams params, double x);

inline constexpr double kDefaultBound = 2.0;

struct Verdict {
    bool stable = true;
    /// First i with |P_i| >= bound; 0 when stable.
    std::size_t first_exceed_index = 0;

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Runs the implicit-scheme recursion
///   P_i = 2 (P_{i-1} - z - w + w sum_{j<i} P_j) / (2 - 2z - w),  P_0 = 2,
/// for i = 1..i_max with an O(1) running sum, stopping at the first exceedance.
[[nodiscard]] Verdict implicit_P(double z, double w, std::size_t i_max,
                                 double bound = kDefaultBound);

/// Explicit-scheme recursion: P_1 = z + 2, P_2 = z^2 + zw/2 + 2z + 2w + 2,
///   P_i = (1 + z + w/2) P_{i-1} - z - w + w sum_{j<=i-2} P_j,  i >= 3.
[[nodiscard]] Verdict explicit_P(double z, double w, std::size_t i_max,
                                 double bound = kDefaultBound);

/// P_0..P_count of either recursion, without a bound check. Values are not
/// clamped, so long unstable sequences overflow to inf.
[[nodiscard]] std::vector<double> implicit_P_sequence(double z, double w, std::size_t count);
[[nodiscard]] std::vector<double> explicit_P_sequence(double z, double w, std::size_t count);

[[nodiscard]] Verdict stability_verdict(Method method, double z, double w, std::size_t i_max,
                                        double bound = kDefaultBound);

struct GridSpec {
    double z_min = -1.0;
    double z_max = 0.0;
    double w_min = -1.0;
    double w_max = 0.0;
    std::size_t nz = 101;
    std::size_t nw = 101;
    std::size_t i_max = 10'000;
    double bound = kDefaultBound;
};

/// Throws DomainError on nz/nw < 2, i_max < 1, inverted ranges, or a
/// rectangle leaving the closed third quadrant.
void validate(const GridSpec& spec);

/// Verdict lattice. Cell (p, q) sits at z_min + p (z_max - z_min)/(nz - 1),
/// w_min + q (w_max - w_min)/(nw - 1).
class StabilityGrid {
public:
    StabilityGrid(GridSpec spec, Method method);

    [[nodiscard]] const GridSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] Method method() const noexcept { return method_; }
    [[nodiscard]] double z_at(std::size_t p) const noexcept;
    [[nodiscard]] double w_at(std::size_t q) const noexcept;
    [[nodiscard]] const Verdict& at(std::size_t p, std::size_t q) const noexcept {
        return verdicts_[q * spec_.nz + p];
    }
    Verdict& at(std::size_t p, std::size_t q) noexcept { return verdicts_[q * spec_.nz + p]; }
    [[nodiscard]] std::size_t stable_count() const noexcept;

    friend bool operator==(const StabilityGrid& a, const StabilityGrid& b) {
        return a.method_ == b.method_ && a.verdicts_ == b.verdicts_;
    }

private:
    GridSpec spec_;
    Method method_;
    std::vector<Verdict> verdicts_;
};

/// Evaluates every lattice point. `threads` > 1 splits rows across worker
/// threads; the result does not depend on the thread count.
[[nodiscard]] StabilityGrid sweep_region(const GridSpec& spec, Method method,
                                         unsigned threads = 1);

struct HPathSample {
    double h = 0.0;
    double z = 0.0;
    double w = 0.0;
};

struct HPath {
    double lambda = 0.0;
    double gamma = 0.0;
    std::vector<HPathSample> samples;
};

/// Samples (h, h lambda, h^2 gamma). Throws DomainError on negative h.
[[nodiscard]] HPath h_path(double lambda, double gamma, std::span<const double> h_values);

struct EigenPair {
    std::complex<double> lambda;
    std::complex<double> gamma;
    /// Re lambda <= 0 and Re gamma <= 0; only then are z and w meaningful.
    bool qualifies = false;
    double z = 0.0;
    double w = 0.0;
};

struct EigenPairing {
    std::vector<EigenPair> pairs;
};

/// Pairs the spectra of J_f and J_K (row-major m x m). Each spectrum is
/// sorted by descending magnitude, ties by descending real part, and paired
/// by index; qualifying pairs map to (z, w) = (-h|lambda|, -h^2|gamma|).
/// Throws DomainError on bad shapes or h <= 0, NumericFailure if the
/// eigenvalue iteration fails.
[[nodiscard]] EigenPairing pair_eigenvalues(std::span<const double> J_f,
                                            std::span<const double> J_K, std::size_t m,
                                            double h);

}  // namespace vide
