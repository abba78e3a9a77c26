#include "abmx/simd/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "abmx/errors.hpp"

namespace abmx::simd {

#if !defined(ABMX_HAVE_AVX2)
const KernelTable* avx2_table() { return nullptr; }
#endif

namespace {

const KernelTable* resolve(Backend b) {
    switch (b) {
    case Backend::Scalar:
        return &scalar_table();
    case Backend::Avx2:
        return avx2_table();
    case Backend::Auto:
        if (const KernelTable* t = avx2_table())
            return t;
        return &scalar_table();
    }
    return &scalar_table();
}

const KernelTable* initial_table() {
    Backend b = Backend::Auto;
    if (const char* env = std::getenv("ABMX_SIMD")) {
        if (std::strcmp(env, "scalar") == 0)
            b = Backend::Scalar;
        else if (std::strcmp(env, "avx2") == 0)
            b = Backend::Avx2;
    }
    const KernelTable* t = resolve(b);
    return t ? t : &scalar_table();
}

const KernelTable*& active_slot() {
    static const KernelTable* table = initial_table();
    return table;
}

} // namespace

const KernelTable& active() {
    return *active_slot();
}

void set_backend(Backend b) {
    const KernelTable* t = resolve(b);
    if (!t)
        throw DomainError("requested SIMD backend is not available on this CPU");
    active_slot() = t;
}

} // namespace abmx::simd
