#include "tricausal/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace tricausal::kernels {

#ifndef TRICAUSAL_HAVE_AVX2_TU
const KernelTable* avx2_table() { return nullptr; }
#endif

const KernelTable& active() {
    static const KernelTable& chosen = [&]() -> const KernelTable& {
        const char* force = std::getenv("TRICAUSAL_FORCE_SCALAR");
        if (force != nullptr && std::strcmp(force, "0") != 0) return scalar_table();
        if (const KernelTable* t = avx2_table()) return *t;
        return scalar_table();
    }();
    return chosen;
}

}  // namespace tricausal::kernels
