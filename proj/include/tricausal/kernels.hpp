#pragma once

// Dense double-precision inner loops used by the simplex basis updates.
//
// Every kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2/FMA variant. The active table is chosen once at startup from CPUID;
// setting TRICAUSAL_FORCE_SCALAR=1 in the environment pins the scalar table.

#include <cstddef>
#include <span>
#include <string_view>

namespace tricausal::kernels {

struct KernelTable {
    std::string_view name;
    double (*dot)(const double* x, const double* y, std::size_t n);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // x *= alpha
    void (*scale)(double alpha, double* x, std::size_t n);
    double (*max_abs)(const double* x, std::size_t n);
    // out[i] = sum_k a[i*n + k] * x[k] for an m-by-n row-major block
    void (*gemv)(const double* a, const double* x, double* out, std::size_t m, std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when the AVX2 variant is not compiled in or the CPU lacks AVX2+FMA.
const KernelTable* avx2_table();
const KernelTable& active();

inline double dot(std::span<const double> x, std::span<const double> y) {
    return active().dot(x.data(), y.data(), x.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), x.size());
}
inline void scale(double alpha, std::span<double> x) { active().scale(alpha, x.data(), x.size()); }
inline double max_abs(std::span<const double> x) { return active().max_abs(x.data(), x.size()); }

}  // namespace tricausal::kernels
