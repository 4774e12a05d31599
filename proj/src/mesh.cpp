#include "vide/mesh.hpp"

#include <cmath>
#include <string>

#include "vide/error.hpp"

namespace vide {

Mesh::Mesh(double x0, double h, std::size_t n_nodes) : x0_(x0), h_(h), n_nodes_(n_nodes) {
    if (!std::isfinite(x0) || !std::isfinite(h) || h <= 0.0) {
        throw DomainError("mesh: stepsize must be finite and positive");
    }
    if (n_nodes < 2) {
        throw DomainError("mesh: need at least 2 nodes, got " + std::to_string(n_nodes));
    }
}

Mesh Mesh::refined() const {
    return Mesh(x0_, h_ / 2.0, 2 * n_nodes_ - 1);
}

Mesh build_mesh(double x0, double x_end, std::size_t n_nodes) {
    if (!std::isfinite(x0) || !std::isfinite(x_end) || !(x_end > x0)) {
        throw DomainError("mesh: interval end must exceed its start");
    }
    if (n_nodes < 2) {
        throw DomainError("mesh: need at least 2 nodes, got " + std::to_string(n_nodes));
    }
    return Mesh(x0, (x_end - x0) / static_cast<double>(n_nodes - 1), n_nodes);
}

}  // namespace vide
