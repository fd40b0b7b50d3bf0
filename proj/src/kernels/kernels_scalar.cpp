#include "tricausal/kernels.hpp"

#include <cmath>

namespace tricausal::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

double max_abs_scalar(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(x[i]));
    return m;
}

void gemv_scalar(const double* a, const double* x, double* out, std::size_t m, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) out[i] = dot_scalar(a + i * n, x, n);
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{"scalar", dot_scalar, axpy_scalar, scale_scalar, max_abs_scalar,
                                   gemv_scalar};
    return table;
}

}  // namespace tricausal::kernels
