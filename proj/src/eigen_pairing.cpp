#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "vide/error.hpp"
#include "vide/stability.hpp"

namespace vide {

namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<std::complex<double>> sorted_spectrum(std::span<const double> a, std::size_t m,
                                                  const char* which) {
    const auto n = static_cast<Eigen::Index>(m);
    const Matrix mat = Eigen::Map<const Matrix>(a.data(), n, n);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(mat, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericFailure(std::string("pair_eigenvalues: eigenvalue iteration failed for ") + which);
    }
    std::vector<std::complex<double>> ev(m);
    for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = solver.eigenvalues()[i];

    // Descending magnitude, then descending real part, then descending imaginary part.
    std::sort(ev.begin(), ev.end(), [](const auto& x, const auto& y) {
        const double ax = std::abs(x), ay = std::abs(y);
        if (ax != ay) return ax > ay;
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    });
    return ev;
}

}  // namespace

EigenPairing pair_eigenvalues(std::span<const double> J_f, std::span<const double> J_K, std::size_t m,
                              double h) {
    if (m == 0 || J_f.size() != m * m || J_K.size() != m * m) {
        throw DomainError("pair_eigenvalues: Jacobians must both be m x m");
    }
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw DomainError("pair_eigenvalues: stepsize must be positive");
    }
    const auto lambdas = sorted_spectrum(J_f, m, "J_f");
    const auto gammas = sorted_spectrum(J_K, m, "J_K");

    EigenPairing out;
    out.pairs.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        EigenPair pair;
        pair.lambda = lambdas[j];
        pair.gamma = gammas[j];
        pair.qualifies = pair.lambda.real() <= 0.0 && pair.gamma.real() <= 0.0;
        if (pair.qualifies) {
            pair.z = -h * std::abs(pair.lambda);
            pair.w = -h * h * std::abs(pair.gamma);
        }
        out.pairs.push_back(pair);
    }
    return out;
}

}  // namespace vide
