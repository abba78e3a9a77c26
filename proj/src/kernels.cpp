#include "abmx/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "abmx/simd/kernels.hpp"

namespace abmx {

std::vector<std::int32_t> compute_ranks(std::span<const std::uint8_t> mask) {
    std::vector<std::int32_t> ranks(mask.size());
    simd::active().rank_scan(mask.data(), ranks.data(), mask.size());
    return ranks;
}

Index count_true(std::span<const std::uint8_t> mask) {
    return static_cast<Index>(simd::active().count_true(mask.data(), mask.size()));
}

SelectionResult compact_mask(std::span<const std::uint8_t> mask) {
    SelectionResult r;
    r.indices.resize(mask.size());
    simd::active().compact_indices(mask.data(), r.indices.data(), mask.size());
    r.count = count_true(mask);
    return r;
}

SelectionResult select_agents(const AgentSet& set, const PredicateFn& pred) {
    Mask mask(static_cast<std::size_t>(set.capacity()), 0);
    for (Index i = 0; i < set.capacity(); ++i)
        mask[static_cast<std::size_t>(i)] = pred(set, i) ? 1 : 0;
    return compact_mask(mask);
}

std::vector<double> pinned_keys(const AgentSet& set, std::span<const double> active_keys,
                                SortDirection dir) {
    if (active_keys.size() != static_cast<std::size_t>(set.capacity()))
        throw DomainError("key length must equal capacity");
    std::vector<double> keys(active_keys.begin(), active_keys.end());
    const double pin = dir == SortDirection::Ascending
                           ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
    auto act = set.active();
    for (std::size_t i = 0; i < keys.size(); ++i)
        if (!act[i])
            keys[i] = pin;
    return keys;
}

AgentSet sort_agents(const AgentSet& set, std::span<const double> key, SortDirection dir) {
    const auto n = static_cast<std::size_t>(set.capacity());
    if (key.size() != n)
        throw DomainError("key length must equal capacity");
    auto act = set.active();
    for (std::size_t i = 0; i < n; ++i)
        if (act[i] && !std::isfinite(key[i]))
            throw DomainError("non-finite sort key on an active slot");

    std::vector<Index> perm(n);
    std::iota(perm.begin(), perm.end(), Index{0});
    if (dir == SortDirection::Ascending) {
        std::stable_sort(perm.begin(), perm.end(), [&](Index a, Index b) {
            return key[static_cast<std::size_t>(a)] < key[static_cast<std::size_t>(b)];
        });
    } else {
        std::stable_sort(perm.begin(), perm.end(), [&](Index a, Index b) {
            return key[static_cast<std::size_t>(a)] > key[static_cast<std::size_t>(b)];
        });
    }
    return permute_agents(set, perm);
}

namespace {

void check_mask_length(const AgentSet& set, std::span<const std::uint8_t> mask) {
    if (mask.size() != static_cast<std::size_t>(set.capacity()))
        throw DomainError("mask length must equal capacity");
}

// Largest row count for which the all-pairs match kernel runs; bigger
// problems use the rank-table path (identical output, linear work).
constexpr std::size_t kAllPairsMaxWork = std::size_t{1} << 22;

} // namespace

// matched_row[i] = row paired with slot i, or -1. Ranks are unique, so the
// all-pairs first-match reduction and the rank-table lookup agree exactly.
std::vector<std::int32_t> detail::match_rows(std::span<const std::int32_t> slot_ranks,
                                             std::span<const std::int32_t> row_ranks) {
    std::vector<std::int32_t> matched(slot_ranks.size(), -1);
    const std::size_t n = slot_ranks.size();
    const std::size_t m = row_ranks.size();
    if (n == 0)
        return matched;
    if (m != 0 && n * m <= kAllPairsMaxWork) {
        simd::active().match_first_equal(slot_ranks.data(), n, row_ranks.data(), m,
                                         matched.data());
        return matched;
    }
    std::vector<std::int32_t> row_of_rank; // rank r lives at row_of_rank[r - 1]
    row_of_rank.reserve(64);
    for (std::size_t j = 0; j < m; ++j) {
        if (row_ranks[j] > 0)
            row_of_rank.push_back(static_cast<std::int32_t>(j));
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::int32_t r = slot_ranks[i];
        if (r > 0 && static_cast<std::size_t>(r) <= row_of_rank.size())
            matched[i] = row_of_rank[static_cast<std::size_t>(r - 1)];
    }
    return matched;
}

AgentSet set_agents_rm(const AgentSet& set, std::span<const std::uint8_t> target_mask,
                       const UpdateBatch& updates, const ApplyFn& apply) {
    check_mask_length(set, target_mask);
    const auto slot_ranks = compute_ranks(target_mask);
    const auto row_ranks = compute_ranks({updates.valid.data(), updates.valid.size()});
    const auto matched = detail::match_rows(slot_ranks, row_ranks);

    AgentSet out = set;
    for (Index i = 0; i < set.capacity(); ++i) {
        const std::int32_t row = matched[static_cast<std::size_t>(i)];
        if (row < 0)
            continue;
        StateWriter w(out, i);
        SlotView view(set, i); // parallel semantics: reads the input
        RowView rv(updates, row);
        apply(w, view, rv, slot_ranks[static_cast<std::size_t>(i)] - 1);
    }
    return out;
}

AgentSet set_agents_sci(const AgentSet& set, std::span<const std::uint8_t> target_mask,
                        const UpdateBatch& updates, const ApplyFn& apply) {
    check_mask_length(set, target_mask);
    const SelectionResult slots = compact_mask(target_mask);
    const SelectionResult rows = compact_mask({updates.valid.data(), updates.valid.size()});
    const Index r = std::min(slots.count, rows.count);

    AgentSet out = set;
    for (Index k = 0; k < r; ++k) {
        const Index slot = slots.indices[static_cast<std::size_t>(k)];
        const Index row = rows.indices[static_cast<std::size_t>(k)];
        StateWriter w(out, slot);
        SlotView view(out, slot); // sequential semantics: reads the running set
        RowView rv(updates, row);
        apply(w, view, rv, k);
    }
    return out;
}

AgentSet set_agents_mask(const AgentSet& set, std::span<const std::uint8_t> mask,
                         const SlotUpdateFn& fn) {
    check_mask_length(set, mask);
    AgentSet out = set;
    for (Index i = 0; i < set.capacity(); ++i) {
        if (!mask[static_cast<std::size_t>(i)])
            continue;
        StateWriter w(out, i);
        SlotView view(set, i);
        fn(w, view);
    }
    return out;
}

} // namespace abmx
