#pragma once

#include <cstddef>
#include <cstdint>

namespace abmx::simd {

// Low-level data-parallel kernels behind the agent-manipulation operations.
// Every entry has a scalar reference implementation and (on x86-64) an AVX2
// variant producing bit-identical results; the active table is chosen once at
// startup from CPU features, overridable with ABMX_SIMD=scalar|avx2|auto or
// set_backend(). All kernels are pure integer / bitwise-select code, so the
// backends are exactly equivalent, which the test suite checks on random
// inputs.
struct KernelTable {
    const char* name;

    // ranks[i] = inclusive_prefix_sum(mask)[i] if mask[i] else 0
    void (*rank_scan)(const std::uint8_t* mask, std::int32_t* ranks, std::size_t n);

    // number of nonzero bytes
    std::int64_t (*count_true)(const std::uint8_t* mask, std::size_t n);

    // Stable partition of 0..n-1: indices of true slots first (ascending),
    // then indices of false slots (ascending). out has room for n entries.
    void (*compact_indices)(const std::uint8_t* mask, std::int32_t* out, std::size_t n);

    // row_out[i] = first j with rb[j] == ra[i], or -1 when ra[i] == 0 or no
    // such j exists. This is the all-pairs rank-match inner loop; with ranks
    // produced by rank_scan the match is unique, so first-match equals an
    // argmax reduction over the match mask.
    void (*match_first_equal)(const std::int32_t* ra, std::size_t n,
                              const std::int32_t* rb, std::size_t m,
                              std::int32_t* row_out);

    // out[i] = mask[i] ? a[i] : b[i]  (bitwise select; exact for doubles)
    void (*blend_i64)(const std::uint8_t* mask, const std::int64_t* a,
                      const std::int64_t* b, std::int64_t* out, std::size_t n);
    void (*blend_f64)(const std::uint8_t* mask, const double* a,
                      const double* b, double* out, std::size_t n);
    void (*blend_u8)(const std::uint8_t* mask, const std::uint8_t* a,
                     const std::uint8_t* b, std::uint8_t* out, std::size_t n);
};

enum class Backend { Auto, Scalar, Avx2 };

const KernelTable& scalar_table();
const KernelTable* avx2_table(); // nullptr when not compiled in or unsupported

// The table in use; resolved once (env ABMX_SIMD consulted on first call).
const KernelTable& active();

// Force a backend (mainly for tests). Throws DomainError if unavailable.
void set_backend(Backend b);

} // namespace abmx::simd
