#pragma once

#include <cstddef>

namespace vide {

/// Equispaced node grid x_i = x0 + i*h, i = 0..size()-1.
///
/// Nodes are always evaluated multiplicatively, never by repeated
/// addition, so every module that asks for node(i) gets the same bits.
class Mesh {
public:
    /// Throws DomainError unless h > 0 (finite) and n_nodes >= 2.
    Mesh(double x0, double h, std::size_t n_nodes);

    [[nodiscard]] double x0() const noexcept { return x0_; }
    [[nodiscard]] double h() const noexcept { return h_; }
    [[nodiscard]] std::size_t size() const noexcept { return n_nodes_; }

    [[nodiscard]] double node(std::size_t i) const noexcept {
        return x0_ + static_cast<double>(i) * h_;
    }
    [[nodiscard]] double x_end() const noexcept { return node(n_nodes_ - 1); }

    /// Halved stepsize, 2N-1 nodes. Node 2i of the result is bitwise node i of *this.
    [[nodiscard]] Mesh refined() const;

    friend bool operator==(const Mesh&, const Mesh&) = default;

private:
    double x0_;
    double h_;
    std::size_t n_nodes_;
};

/// h = (x_end - x0)/(n_nodes - 1). Throws DomainError on n_nodes < 2 or x_end <= x0.
[[nodiscard]] Mesh build_mesh(double x0, double x_end, std::size_t n_nodes);

}  // namespace vide
