#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <limits>
#include <random>

#include "abmx/kernels.hpp"
#include "abmx/simd/kernels.hpp"
#include "support/oracle.hpp"

using namespace abmx;

namespace {

// sizes chosen to hit empty, sub-vector, exact-vector and ragged tails
const std::size_t kSizes[] = {0, 1, 3, 7, 8, 9, 15, 16, 31, 32, 33, 64, 100, 257, 1000, 4096};

struct BackendPair {
    const simd::KernelTable& scalar = simd::scalar_table();
    const simd::KernelTable* avx2 = simd::avx2_table();
};

} // namespace

TEST_CASE("avx2 backend is reported consistently") {
    BackendPair b;
    if (b.avx2) {
        CHECK(std::string(b.avx2->name) == "avx2");
        CHECK(std::string(simd::active().name) != "");
    } else {
        MESSAGE("AVX2 unavailable; scalar-only run");
    }
    CHECK(std::string(b.scalar.name) == "scalar");
}

TEST_CASE("rank_scan: avx2 equals scalar") {
    BackendPair b;
    if (!b.avx2)
        return;
    std::mt19937_64 gen(1);
    for (const std::size_t n : kSizes) {
        for (int rep = 0; rep < 8; ++rep) {
            const Mask m = abmx_test::random_mask(gen, n);
            std::vector<std::int32_t> rs(n), rv(n);
            b.scalar.rank_scan(m.data(), rs.data(), n);
            b.avx2->rank_scan(m.data(), rv.data(), n);
            REQUIRE(rs == rv);
        }
    }
}

TEST_CASE("count_true: avx2 equals scalar") {
    BackendPair b;
    if (!b.avx2)
        return;
    std::mt19937_64 gen(2);
    for (const std::size_t n : kSizes) {
        for (int rep = 0; rep < 8; ++rep) {
            const Mask m = abmx_test::random_mask(gen, n, 0.3);
            REQUIRE(b.scalar.count_true(m.data(), n) == b.avx2->count_true(m.data(), n));
        }
    }
}

TEST_CASE("compact_indices: avx2 equals scalar") {
    BackendPair b;
    if (!b.avx2)
        return;
    std::mt19937_64 gen(3);
    for (const std::size_t n : kSizes) {
        for (int rep = 0; rep < 8; ++rep) {
            const Mask m = abmx_test::random_mask(gen, n, 0.5);
            std::vector<std::int32_t> is(n), iv(n);
            b.scalar.compact_indices(m.data(), is.data(), n);
            b.avx2->compact_indices(m.data(), iv.data(), n);
            REQUIRE(is == iv);
        }
    }
}

TEST_CASE("match_first_equal: avx2 equals scalar") {
    BackendPair b;
    if (!b.avx2)
        return;
    std::mt19937_64 gen(4);
    for (const std::size_t n : {0u, 1u, 9u, 33u, 100u}) {
        for (const std::size_t m : {0u, 1u, 8u, 31u, 100u}) {
            const Mask ma = abmx_test::random_mask(gen, n);
            const Mask mb = abmx_test::random_mask(gen, m);
            const auto ra = compute_ranks(ma);
            const auto rb = compute_ranks(mb);
            std::vector<std::int32_t> out_s(n), out_v(n);
            b.scalar.match_first_equal(ra.data(), n, rb.data(), m, out_s.data());
            b.avx2->match_first_equal(ra.data(), n, rb.data(), m, out_v.data());
            REQUIRE(out_s == out_v);
        }
    }
}

TEST_CASE("blends: avx2 equals scalar (bit patterns preserved)") {
    BackendPair b;
    if (!b.avx2)
        return;
    std::mt19937_64 gen(5);
    for (const std::size_t n : kSizes) {
        const Mask m = abmx_test::random_mask(gen, n);
        std::vector<std::int64_t> ia(n), ib(n), os(n), ov(n);
        std::vector<double> fa(n), fb(n), fs(n), fv(n);
        Mask ba(n), bb(n), bs(n), bv(n);
        for (std::size_t i = 0; i < n; ++i) {
            ia[i] = static_cast<std::int64_t>(gen());
            ib[i] = static_cast<std::int64_t>(gen());
            // include NaNs and infinities; the blend must copy bits verbatim
            switch (gen() % 4) {
            case 0: fa[i] = std::numeric_limits<double>::quiet_NaN(); break;
            case 1: fa[i] = std::numeric_limits<double>::infinity(); break;
            default: fa[i] = std::uniform_real_distribution<double>(-1, 1)(gen);
            }
            fb[i] = std::uniform_real_distribution<double>(-1, 1)(gen);
            ba[i] = static_cast<std::uint8_t>(gen());
            bb[i] = static_cast<std::uint8_t>(gen());
        }
        b.scalar.blend_i64(m.data(), ia.data(), ib.data(), os.data(), n);
        b.avx2->blend_i64(m.data(), ia.data(), ib.data(), ov.data(), n);
        REQUIRE(os == ov);
        b.scalar.blend_f64(m.data(), fa.data(), fb.data(), fs.data(), n);
        b.avx2->blend_f64(m.data(), fa.data(), fb.data(), fv.data(), n);
        REQUIRE(std::memcmp(fs.data(), fv.data(), n * sizeof(double)) == 0);
        b.scalar.blend_u8(m.data(), ba.data(), bb.data(), bs.data(), n);
        b.avx2->blend_u8(m.data(), ba.data(), bb.data(), bv.data(), n);
        REQUIRE(bs == bv);
    }
}

TEST_CASE("nonzero mask bytes all count as true") {
    BackendPair b;
    Mask m = {0, 1, 2, 0, 255, 128, 0, 7, 0, 1, 2, 0, 255, 128, 0, 7,
              0, 1, 2, 0, 255, 128, 0, 7, 0, 1, 2, 0, 255, 128, 0, 7, 9};
    const std::size_t n = m.size();
    std::vector<std::int32_t> rs(n);
    b.scalar.rank_scan(m.data(), rs.data(), n);
    CHECK(b.scalar.count_true(m.data(), n) == 21);
    if (b.avx2) {
        std::vector<std::int32_t> rv(n);
        b.avx2->rank_scan(m.data(), rv.data(), n);
        CHECK(rs == rv);
        CHECK(b.avx2->count_true(m.data(), n) == 21);
    }
}

TEST_CASE("large problems take the rank-table match path and agree with the oracle") {
    // capacity * rows above the all-pairs cutoff
    std::mt19937_64 gen(6);
    const Index capacity = 3000;
    const AgentSet set = abmx_test::random_set(gen, capacity);
    const UpdateBatch batch = abmx_test::random_batch(gen, 3000);
    const Mask target = abmx_test::random_mask(gen, static_cast<std::size_t>(capacity));

    const AgentSet rm = set_agents_rm(set, target, batch, abmx_test::copy_apply());
    const AgentSet oracle =
        abmx_test::oracle_paired_update(set, target, batch, abmx_test::copy_apply());
    REQUIRE(bitwise_equal(rm, oracle));
}

TEST_CASE("set_backend switches the active table") {
    simd::set_backend(simd::Backend::Scalar);
    CHECK(std::string(simd::active().name) == "scalar");
    if (simd::avx2_table()) {
        simd::set_backend(simd::Backend::Avx2);
        CHECK(std::string(simd::active().name) == "avx2");
    } else {
        CHECK_THROWS_AS(simd::set_backend(simd::Backend::Avx2), DomainError);
    }
    simd::set_backend(simd::Backend::Auto);
}
