#pragma once

#include <functional>
#include <vector>

#include "abmx/agent_set.hpp"

namespace abmx {

// Candidate per-agent updates: a bundle of value rows plus a validity mask.
// Row count is fixed for the run like every other shape.
struct UpdateBatch {
    FieldBundle values;
    Mask valid;

    UpdateBatch(FieldBundle v, Mask m) : values(std::move(v)), valid(std::move(m)) {
        if (values.length() != valid.size())
            throw SchemaError("update batch: values and valid mask length differ");
    }
    std::size_t size() const noexcept { return valid.size(); }
};

// Read-only view of one update row.
class RowView {
public:
    RowView(const UpdateBatch& batch, Index row) : batch_(&batch), row_(row) {}
    Index row() const { return row_; }
    std::int64_t get_int(std::string_view f) const { return batch_->values.ints(f)[idx()]; }
    double get_real(std::string_view f) const { return batch_->values.reals(f)[idx()]; }
    bool get_bool(std::string_view f) const { return batch_->values.bools(f)[idx()] != 0; }

private:
    std::size_t idx() const { return static_cast<std::size_t>(row_); }
    const UpdateBatch* batch_;
    Index row_;
};

// Front-compacted index permutation: the first `count` indices are the slots
// where the predicate held (ascending), the rest are the others (ascending).
struct SelectionResult {
    std::vector<Index> indices;
    Index count = 0;
};

// ranks = inclusive-prefix-sum(mask) * mask: zero on unselected slots,
// 1..popcount(mask) in slot order on selected ones.
std::vector<std::int32_t> compute_ranks(std::span<const std::uint8_t> mask);

Index count_true(std::span<const std::uint8_t> mask);

// Stable front-compaction of a raw mask.
SelectionResult compact_mask(std::span<const std::uint8_t> mask);

namespace detail {
// matched[i] = row whose rank equals slot_ranks[i] (-1 when none). Both rank
// vectors must come from compute_ranks (the pairing operations only accept
// masks publicly; ranks with duplicates would make matches ambiguous).
std::vector<std::int32_t> match_rows(std::span<const std::int32_t> slot_ranks,
                                     std::span<const std::int32_t> row_ranks);
} // namespace detail

using PredicateFn = std::function<bool(const AgentSet&, Index)>;

// Evaluates the predicate on every slot (placeholders included; predicates
// normally consult `active`) and stably compacts the satisfying indices to
// the front.
SelectionResult select_agents(const AgentSet& set, const PredicateFn& pred);

enum class SortDirection { Ascending, Descending };

// Stable sort of all columns by the key. Keys of active slots must be
// finite; +/-infinity is reserved for pinning placeholders at the tail (see
// pinned_keys).
AgentSet sort_agents(const AgentSet& set, std::span<const double> key, SortDirection dir);

// Copies `active_keys` and overwrites placeholder slots with +inf
// (ascending) or -inf (descending) so they sort to the tail.
std::vector<double> pinned_keys(const AgentSet& set, std::span<const double> active_keys,
                                SortDirection dir);

// Applies one update row to one slot. Receives the slot to write (state
// columns only), a read view of the slot, the matched update row, and the
// pair index k (0-based rank of the pair). RM passes a view of the input
// set; SCI passes a view of the running output set, which is what makes
// order-dependent apply functions possible there.
using ApplyFn =
    std::function<void(StateWriter&, const SlotView&, const RowView&, Index pair_index)>;

// Rank-match: label selected slots and valid rows with matching
// cumulative-sum ranks and give row k to slot k. Fully parallel semantics;
// exactly min(popcount(target_mask), popcount(updates.valid)) slots change.
AgentSet set_agents_rm(const AgentSet& set, std::span<const std::uint8_t> target_mask,
                       const UpdateBatch& updates, const ApplyFn& apply);

// Sort-count-iterate: stable front-compaction of both index arrays, then a
// bounded sequential loop of r = min(p, q) iterations. Iteration k sees the
// effects of iterations < k. Identical to set_agents_rm whenever the apply
// function reads only its own slot and row.
AgentSet set_agents_sci(const AgentSet& set, std::span<const std::uint8_t> target_mask,
                        const UpdateBatch& updates, const ApplyFn& apply);

using SlotUpdateFn = std::function<void(StateWriter&, const SlotView&)>;

// Independent, non-conflicting per-slot updates where the mask is true.
AgentSet set_agents_mask(const AgentSet& set, std::span<const std::uint8_t> mask,
                         const SlotUpdateFn& fn);

} // namespace abmx
