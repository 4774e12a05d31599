#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "vide/mesh.hpp"
#include "vide/problem.hpp"

namespace vide {

/// Neumaier-compensated running sum. Order of add() calls fixes the result.
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            carry_ += (sum_ - t) + v;
        } else {
            carry_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/// Read-only window y_0..y_k over a mesh, `components` values per node.
class HistoryView {
public:
    /// Throws DomainError unless values.size() == (k + 1) * components and k < mesh.size().
    HistoryView(const Mesh& mesh, std::span<const double> values, std::size_t k,
                std::size_t components = 1);

    [[nodiscard]] const Mesh& mesh() const noexcept { return mesh_; }
    [[nodiscard]] std::size_t k() const noexcept { return k_; }
    [[nodiscard]] std::size_t components() const noexcept { return components_; }
    [[nodiscard]] double value(std::size_t j) const noexcept { return values_[j * components_]; }
    [[nodiscard]] std::span<const double> state(std::size_t j) const noexcept {
        return values_.subspan(j * components_, components_);
    }

private:
    Mesh mesh_;
    std::span<const double> values_;
    std::size_t k_;
    std::size_t components_;
};

/// Composite trapezium rule for integral_{x0}^{x_k} K(x_eval, y(t), t) dt on
/// the history nodes. Exactly k+1 kernel evaluations, ascending j, with
/// compensated accumulation. Returns 0 for k = 0.
[[nodiscard]] double trapezoid_window(const KernelFn& K, double x_eval, const HistoryView& history);

/// Vector form: out[c] receives the integral of component c of K.
void trapezoid_window(const VectorKernelFn& K, double x_eval, const HistoryView& history,
                      std::span<double> out);

}  // namespace vide
