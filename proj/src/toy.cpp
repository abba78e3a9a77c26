#include "abmx/toy.hpp"

#include <sstream>

#include "abmx/kernels.hpp"

namespace abmx {

namespace {

AgentSet wrap_values(const std::vector<std::int64_t>& a) {
    const auto n = a.size();
    FieldBundle state(n);
    state.add("value", Column::of(std::vector<std::int64_t>(a)));
    AgentSet set(static_cast<Index>(n), std::move(state), FieldBundle(n));
    auto act = set.active_mut();
    auto ids = set.ids_mut();
    for (std::size_t i = 0; i < n; ++i) {
        act[i] = 1;
        ids[i] = static_cast<std::int64_t>(i);
    }
    set.set_num_active(static_cast<Index>(n));
    set.set_next_id(static_cast<std::int64_t>(n));
    return set;
}

std::vector<std::int64_t> values_of(const AgentSet& set) {
    auto s = set.state().ints("value");
    return {s.begin(), s.end()};
}

} // namespace

ToyResult run_toy(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    AgentSet set = wrap_values(a);

    Mask even_mask(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        even_mask[i] = (a[i] % 2 == 0) ? 1 : 0;

    FieldBundle rows(b.size());
    rows.add("value", Column::of(std::vector<std::int64_t>(b)));
    Mask odd_mask(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        odd_mask[i] = (b[i] % 2 != 0) ? 1 : 0;
    UpdateBatch updates(std::move(rows), std::move(odd_mask));

    const ApplyFn copy_value = [](StateWriter& w, const SlotView&, const RowView& row, Index) {
        w.set_int("value", row.get_int("value"));
    };

    ToyResult r;
    r.rank_match = values_of(set_agents_rm(set, even_mask, updates, copy_value));
    r.sort_count_iterate = values_of(set_agents_sci(set, even_mask, updates, copy_value));
    return r;
}

std::string format_int_list(const std::vector<std::int64_t>& v) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            os << ", ";
        os << v[i];
    }
    os << ']';
    return os.str();
}

} // namespace abmx
