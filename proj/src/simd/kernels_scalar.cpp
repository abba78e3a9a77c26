#include "abmx/simd/kernels.hpp"

namespace abmx::simd {

namespace {

void rank_scan_scalar(const std::uint8_t* mask, std::int32_t* ranks, std::size_t n) {
    std::int32_t running = 0;
    for (std::size_t i = 0; i < n; ++i) {
        running += mask[i] ? 1 : 0;
        ranks[i] = mask[i] ? running : 0;
    }
}

std::int64_t count_true_scalar(const std::uint8_t* mask, std::size_t n) {
    std::int64_t c = 0;
    for (std::size_t i = 0; i < n; ++i)
        c += mask[i] ? 1 : 0;
    return c;
}

void compact_indices_scalar(const std::uint8_t* mask, std::int32_t* out, std::size_t n) {
    std::size_t front = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (mask[i])
            out[front++] = static_cast<std::int32_t>(i);
    std::size_t back = front;
    for (std::size_t i = 0; i < n; ++i)
        if (!mask[i])
            out[back++] = static_cast<std::int32_t>(i);
}

void match_first_equal_scalar(const std::int32_t* ra, std::size_t n,
                              const std::int32_t* rb, std::size_t m,
                              std::int32_t* row_out) {
    for (std::size_t i = 0; i < n; ++i) {
        row_out[i] = -1;
        const std::int32_t r = ra[i];
        if (r == 0)
            continue;
        for (std::size_t j = 0; j < m; ++j) {
            if (rb[j] == r) {
                row_out[i] = static_cast<std::int32_t>(j);
                break;
            }
        }
    }
}

template <class T>
void blend_scalar(const std::uint8_t* mask, const T* a, const T* b, T* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = mask[i] ? a[i] : b[i];
}

} // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{
        "scalar",
        &rank_scan_scalar,
        &count_true_scalar,
        &compact_indices_scalar,
        &match_first_equal_scalar,
        &blend_scalar<std::int64_t>,
        &blend_scalar<double>,
        &blend_scalar<std::uint8_t>,
    };
    return table;
}

} // namespace abmx::simd
