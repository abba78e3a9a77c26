// AVX2 variants of the dispatch kernels. Compiled with -mavx2 and selected
// at runtime only when the CPU reports AVX2, see dispatch.cpp. All results
// are bit-identical to the scalar reference implementations.

#include "abmx/simd/kernels.hpp"

#if defined(ABMX_HAVE_AVX2)

#include <immintrin.h>

#include <array>
#include <cstring>

namespace abmx::simd {

namespace {

// Per 8-bit pattern: positions of set bits in ascending order (left-pack).
constexpr std::array<std::array<std::int32_t, 8>, 256> make_pack_lut() {
    std::array<std::array<std::int32_t, 8>, 256> lut{};
    for (int m = 0; m < 256; ++m) {
        int k = 0;
        for (int b = 0; b < 8; ++b)
            if (m & (1 << b))
                lut[m][k++] = b;
        for (; k < 8; ++k)
            lut[m][k] = 0;
    }
    return lut;
}

constexpr auto kPackLut = make_pack_lut();

inline __m256i load_mask8_as_epi32(const std::uint8_t* p) {
    __m128i bytes = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(p));
    return _mm256_cvtepu8_epi32(bytes);
}

// Inclusive prefix sum of the 8 int32 lanes.
inline __m256i prefix8_epi32(__m256i x) {
    x = _mm256_add_epi32(x, _mm256_slli_si256(x, 4));
    x = _mm256_add_epi32(x, _mm256_slli_si256(x, 8));
    __m256i lane_totals = _mm256_shuffle_epi32(x, _MM_SHUFFLE(3, 3, 3, 3));
    __m256i carry_hi = _mm256_permute2x128_si256(lane_totals, lane_totals, 0x08);
    return _mm256_add_epi32(x, carry_hi);
}

void rank_scan_avx2(const std::uint8_t* mask, std::int32_t* ranks, std::size_t n) {
    const __m256i zero = _mm256_setzero_si256();
    std::int32_t carry = 0;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i v = load_mask8_as_epi32(mask + i);
        __m256i truth = _mm256_cmpgt_epi32(v, zero); // -1 where nonzero
        __m256i ones = _mm256_srli_epi32(truth, 31);
        __m256i pre = _mm256_add_epi32(prefix8_epi32(ones), _mm256_set1_epi32(carry));
        __m256i out = _mm256_and_si256(pre, truth);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(ranks + i), out);
        carry = _mm256_extract_epi32(pre, 7);
    }
    for (; i < n; ++i) {
        carry += mask[i] ? 1 : 0;
        ranks[i] = mask[i] ? carry : 0;
    }
}

std::int64_t count_true_avx2(const std::uint8_t* mask, std::size_t n) {
    const __m256i zero = _mm256_setzero_si256();
    std::int64_t c = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(mask + i));
        __m256i is_zero = _mm256_cmpeq_epi8(v, zero);
        std::uint32_t bits = ~static_cast<std::uint32_t>(_mm256_movemask_epi8(is_zero));
        c += __builtin_popcount(bits);
    }
    for (; i < n; ++i)
        c += mask[i] ? 1 : 0;
    return c;
}

void compact_indices_avx2(const std::uint8_t* mask, std::int32_t* out, std::size_t n) {
    const std::size_t total_true =
        static_cast<std::size_t>(count_true_avx2(mask, n));
    const __m256i zero = _mm256_setzero_si256();
    const __m256i iota = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
    std::size_t front = 0;
    std::size_t back = total_true;
    std::size_t i = 0;
    alignas(32) std::int32_t tmp[8];
    for (; i + 8 <= n; i += 8) {
        __m256i v = load_mask8_as_epi32(mask + i);
        __m256i truth = _mm256_cmpgt_epi32(v, zero);
        const unsigned bits = static_cast<unsigned>(
            _mm256_movemask_ps(_mm256_castsi256_ps(truth)));
        __m256i idx = _mm256_add_epi32(iota, _mm256_set1_epi32(static_cast<std::int32_t>(i)));

        const unsigned pc = static_cast<unsigned>(__builtin_popcount(bits));
        __m256i sel = _mm256_permutevar8x32_epi32(
            idx, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(kPackLut[bits].data())));
        _mm256_store_si256(reinterpret_cast<__m256i*>(tmp), sel);
        std::memcpy(out + front, tmp, pc * sizeof(std::int32_t));
        front += pc;

        const unsigned rej_bits = (~bits) & 0xFFu;
        __m256i rej = _mm256_permutevar8x32_epi32(
            idx, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(kPackLut[rej_bits].data())));
        _mm256_store_si256(reinterpret_cast<__m256i*>(tmp), rej);
        std::memcpy(out + back, tmp, (8 - pc) * sizeof(std::int32_t));
        back += 8 - pc;
    }
    for (; i < n; ++i) {
        if (mask[i])
            out[front++] = static_cast<std::int32_t>(i);
        else
            out[back++] = static_cast<std::int32_t>(i);
    }
}

void match_first_equal_avx2(const std::int32_t* ra, std::size_t n,
                            const std::int32_t* rb, std::size_t m,
                            std::int32_t* row_out) {
    for (std::size_t i = 0; i < n; ++i) {
        row_out[i] = -1;
        const std::int32_t r = ra[i];
        if (r == 0)
            continue;
        const __m256i needle = _mm256_set1_epi32(r);
        std::size_t j = 0;
        bool found = false;
        for (; j + 8 <= m; j += 8) {
            __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(rb + j));
            __m256i eq = _mm256_cmpeq_epi32(v, needle);
            const unsigned bits = static_cast<unsigned>(
                _mm256_movemask_ps(_mm256_castsi256_ps(eq)));
            if (bits) {
                row_out[i] = static_cast<std::int32_t>(j + static_cast<unsigned>(__builtin_ctz(bits)));
                found = true;
                break;
            }
        }
        if (!found) {
            for (; j < m; ++j) {
                if (rb[j] == r) {
                    row_out[i] = static_cast<std::int32_t>(j);
                    break;
                }
            }
        }
    }
}

void blend_u8_avx2(const std::uint8_t* mask, const std::uint8_t* a,
                   const std::uint8_t* b, std::uint8_t* out, std::size_t n) {
    const __m256i zero = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i m = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(mask + i));
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i take_b = _mm256_cmpeq_epi8(m, zero);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i),
                            _mm256_blendv_epi8(va, vb, take_b));
    }
    for (; i < n; ++i)
        out[i] = mask[i] ? a[i] : b[i];
}

inline __m256i expand_mask4_to_epi64(const std::uint8_t* p) {
    std::uint32_t raw;
    std::memcpy(&raw, p, 4);
    __m256i wide = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(static_cast<int>(raw)));
    return _mm256_cmpeq_epi64(wide, _mm256_setzero_si256()); // all-ones where FALSE
}

void blend_i64_avx2(const std::uint8_t* mask, const std::int64_t* a,
                    const std::int64_t* b, std::int64_t* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i take_b = expand_mask4_to_epi64(mask + i);
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i),
                            _mm256_blendv_epi8(va, vb, take_b));
    }
    for (; i < n; ++i)
        out[i] = mask[i] ? a[i] : b[i];
}

void blend_f64_avx2(const std::uint8_t* mask, const double* a,
                    const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d take_b = _mm256_castsi256_pd(expand_mask4_to_epi64(mask + i));
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vb = _mm256_loadu_pd(b + i);
        _mm256_storeu_pd(out + i, _mm256_blendv_pd(va, vb, take_b));
    }
    for (; i < n; ++i)
        out[i] = mask[i] ? a[i] : b[i];
}

} // namespace

const KernelTable* avx2_table() {
    if (!__builtin_cpu_supports("avx2"))
        return nullptr;
    static const KernelTable table{
        "avx2",
        &rank_scan_avx2,
        &count_true_avx2,
        &compact_indices_avx2,
        &match_first_equal_avx2,
        &blend_i64_avx2,
        &blend_f64_avx2,
        &blend_u8_avx2,
    };
    return &table;
}

} // namespace abmx::simd

#else

namespace abmx::simd {
const KernelTable* avx2_table() { return nullptr; }
} // namespace abmx::simd

#endif
