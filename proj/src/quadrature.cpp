#include "vide/quadrature.hpp"

#include <algorithm>
#include <vector>

#include "vide/error.hpp"

namespace vide {

HistoryView::HistoryView(const Mesh& mesh, std::span<const double> values, std::size_t k,
                         std::size_t components)
    : mesh_(mesh), values_(values), k_(k), components_(components) {
    if (components == 0) {
        throw DomainError("history: zero components");
    }
    if (k >= mesh.size()) {
        throw DomainError("history: index past the end of the mesh");
    }
    if (values.size() != (k + 1) * components) {
        throw DomainError("history: expected (k+1)*m values");
    }
}

double trapezoid_window(const KernelFn& K, double x_eval, const HistoryView& history) {
    const std::size_t k = history.k();
    if (k == 0) return 0.0;
    const Mesh& mesh = history.mesh();

    CompensatedSum sum;
    sum.add(K(x_eval, history.value(0), mesh.node(0)));
    for (std::size_t j = 1; j < k; ++j) {
        sum.add(2.0 * K(x_eval, history.value(j), mesh.node(j)));
    }
    sum.add(K(x_eval, history.value(k), mesh.node(k)));
    return 0.5 * mesh.h() * sum.value();
}

void trapezoid_window(const VectorKernelFn& K, double x_eval, const HistoryView& history,
                      std::span<double> out) {
    const std::size_t m = history.components();
    if (out.size() != m) {
        throw DomainError("history: output size differs from component count");
    }
    const std::size_t k = history.k();
    std::fill(out.begin(), out.end(), 0.0);
    if (k == 0) return;
    const Mesh& mesh = history.mesh();

    std::vector<CompensatedSum> sums(m);
    std::vector<double> kv(m);
    for (std::size_t j = 0; j <= k; ++j) {
        K(x_eval, history.state(j), mesh.node(j), kv);
        const double weight = (j == 0 || j == k) ? 1.0 : 2.0;
        for (std::size_t c = 0; c < m; ++c) sums[c].add(weight * kv[c]);
    }
    for (std::size_t c = 0; c < m; ++c) out[c] = 0.5 * mesh.h() * sums[c].value();
}

}  // namespace vide
