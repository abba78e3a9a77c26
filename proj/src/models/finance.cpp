#include "abmx/models/finance.hpp"

#include <algorithm>
#include <cmath>

namespace abmx::models {

namespace {

constexpr std::uint64_t kTraderCreate = 22;

struct SortedSide {
    std::vector<Index> slots;       // book slots in fill priority order
    std::vector<double> price;      // price per sorted entry
    std::vector<std::int64_t> cum;  // cumulative share sum
};

SortedSide sorted_side(const Book& book, std::int64_t side) {
    auto act = book.orders.active();
    auto sides = book.orders.state().ints("side");
    auto prices = book.orders.state().reals("price");
    auto placed = book.orders.state().ints("placed");
    auto qty = book.orders.state().ints("qty");
    auto ids = book.orders.ids();

    SortedSide s;
    for (std::size_t i = 0; i < act.size(); ++i)
        if (act[i] && sides[i] == side)
            s.slots.push_back(static_cast<Index>(i));

    const bool desc = side == kSideBuy;
    std::stable_sort(s.slots.begin(), s.slots.end(), [&](Index a, Index b) {
        const auto ia = static_cast<std::size_t>(a), ib = static_cast<std::size_t>(b);
        if (prices[ia] != prices[ib])
            return desc ? prices[ia] > prices[ib] : prices[ia] < prices[ib];
        if (placed[ia] != placed[ib])
            return placed[ia] < placed[ib];
        return ids[ia] < ids[ib];
    });

    s.price.reserve(s.slots.size());
    s.cum.reserve(s.slots.size());
    std::int64_t running = 0;
    for (Index slot : s.slots) {
        const auto i = static_cast<std::size_t>(slot);
        running += qty[i];
        s.price.push_back(prices[i]);
        s.cum.push_back(running);
    }
    return s;
}

} // namespace

double quantize_price(double raw) {
    double p = std::round(raw / kPriceTick) * kPriceTick;
    if (p < kPriceTick)
        p = kPriceTick;
    return p;
}

Book Book::empty(Index capacity, Index book_id, double init_price) {
    const auto n = static_cast<std::size_t>(capacity);
    FieldBundle state(n);
    state.add("trader", Column::ints(n));
    state.add("side", Column::ints(n));
    state.add("price", Column::reals(n));
    state.add("qty", Column::ints(n));
    state.add("placed", Column::ints(n));
    Book b{AgentSet(capacity, std::move(state), FieldBundle(n)), quantize_price(init_price),
           book_id, 0, {}};
    return b;
}

Book place_orders(const AgentSet& traders, const Book& book, RngState stream, std::int64_t t) {
    const auto n_traders = static_cast<std::size_t>(traders.capacity());
    auto t_act = traders.active();
    auto deltas = traders.params().reals("delta");
    auto qmaxs = traders.params().ints("qmax");
    auto p_orders = traders.params().reals("p_order");

    FieldBundle vals(n_traders);
    vals.add("trader", Column::ints(n_traders));
    vals.add("side", Column::ints(n_traders));
    vals.add("price", Column::reals(n_traders));
    vals.add("qty", Column::ints(n_traders));
    Mask valid(n_traders, 0);
    auto v_trader = vals.ints("trader");
    auto v_side = vals.ints("side");
    auto v_price = vals.reals("price");
    auto v_qty = vals.ints("qty");

    for (std::size_t i = 0; i < n_traders; ++i) {
        if (!t_act[i])
            continue;
        const std::uint64_t base = 4 * static_cast<std::uint64_t>(i);
        if (!stream.bernoulli(base, p_orders[i]))
            continue;
        const std::int64_t side = stream.uniform_int(base + 1, 0, 2);
        const double eps = -deltas[i] + 2.0 * deltas[i] * stream.uniform_double(base + 2);
        const std::int64_t qty = stream.uniform_int(base + 3, 1, qmaxs[i] + 1);
        v_trader[i] = static_cast<std::int64_t>(i);
        v_side[i] = side;
        v_price[i] = quantize_price(book.last_price * (1.0 + eps));
        v_qty[i] = qty;
        valid[i] = 1;
    }

    UpdateBatch rows(std::move(vals), std::move(valid));
    const ApplyFn write_order = [t](StateWriter& w, const SlotView&, const RowView& row, Index) {
        w.set_int("trader", row.get_int("trader"));
        w.set_int("side", row.get_int("side"));
        w.set_real("price", row.get_real("price"));
        w.set_int("qty", row.get_int("qty"));
        w.set_int("placed", t);
    };
    SpawnOutcome o = spawn_agents(book.orders, rows, write_order);

    Book out = book;
    out.orders = std::move(o.set);
    out.dropped_this_step = o.dropped;
    return out;
}

std::pair<Book, TradeSummary> match_book(const Book& book) {
    const SortedSide buys = sorted_side(book, kSideBuy);
    const SortedSide sells = sorted_side(book, kSideSell);

    TradeSummary summary;
    if (buys.slots.empty() || sells.slots.empty()) {
        Book out = book;
        out.last_trades = summary;
        return {out, summary};
    }

    // executed volume: best min(C_buy[i], C_sell[j]) over crossing pairs;
    // sells are ascending, so per i the deepest feasible j is an upper bound
    std::int64_t volume = 0;
    for (std::size_t i = 0; i < buys.slots.size(); ++i) {
        const auto it = std::upper_bound(sells.price.begin(), sells.price.end(), buys.price[i]);
        const std::size_t feasible = static_cast<std::size_t>(it - sells.price.begin());
        if (feasible == 0)
            continue;
        volume = std::max(volume, std::min(buys.cum[i], sells.cum[feasible - 1]));
    }
    if (volume == 0) {
        Book out = book;
        out.last_trades = summary;
        return {out, summary};
    }

    // marginal orders: the ones holding the volume-th unit on each side
    const auto marginal = [volume](const SortedSide& s) {
        return static_cast<std::size_t>(
            std::lower_bound(s.cum.begin(), s.cum.end(), volume) - s.cum.begin());
    };
    const double clearing =
        (buys.price[marginal(buys)] + sells.price[marginal(sells)]) / 2.0;

    Book out = book;
    auto qty = out.orders.state_mut().ints("qty");
    auto traders = out.orders.state().ints("trader");
    Mask exhausted(static_cast<std::size_t>(out.orders.capacity()), 0);

    const auto fill_side = [&](const SortedSide& s, std::int64_t side) {
        std::int64_t remaining = volume;
        for (Index slot : s.slots) {
            if (remaining == 0)
                break;
            const auto i = static_cast<std::size_t>(slot);
            const std::int64_t f = std::min(qty[i], remaining);
            qty[i] -= f;
            remaining -= f;
            if (qty[i] == 0)
                exhausted[i] = 1;
            summary.fills.push_back(
                {traders[i], side, f, static_cast<double>(f) * clearing});
        }
    };
    fill_side(buys, kSideBuy);
    fill_side(sells, kSideSell);

    out.orders = remove_agents(out.orders, exhausted);
    out.last_price = clearing;
    summary.volume = volume;
    summary.clearing_price = clearing;
    out.last_trades = summary;
    return {out, summary};
}

MarketState init_market(const FinanceConfig& cfg, RngState seed) {
    AgentSchema schema;
    schema.state.push_back(FieldInit::const_real("cash", 0.0));
    for (Index k = 0; k < cfg.books; ++k)
        schema.state.push_back(FieldInit::const_int("holdings_" + std::to_string(k), 0));
    schema.params = {
        FieldInit::const_real("delta", cfg.delta),
        FieldInit::const_int("qmax", cfg.qmax),
        FieldInit::const_real("p_order", cfg.p_order),
    };
    MarketState s{
        create_agents(cfg.traders, cfg.traders, schema, seed.split(kTraderCreate)),
        {},
    };
    s.books.reserve(static_cast<std::size_t>(cfg.books));
    for (Index k = 0; k < cfg.books; ++k)
        s.books.push_back(Book::empty(cfg.book_capacity, k, cfg.init_price));
    return s;
}

MarketState step_market(const MarketState& in, const FinanceConfig& cfg, RngState seed,
                        std::int64_t t) {
    MarketState s = in;
    const RngState place_root =
        seed.split(StreamTag::FinancePlace).split(static_cast<std::uint64_t>(t));

    for (auto& book : s.books)
        book = place_orders(s.traders, book, place_root.split(static_cast<std::uint64_t>(book.book_id)), t);

    // books match independently; settlement folds summaries in book order
    auto cash = s.traders.state_mut().reals("cash");
    for (auto& book : s.books) {
        auto [matched, summary] = match_book(book);
        book = std::move(matched);
        auto holdings =
            s.traders.state_mut().ints("holdings_" + std::to_string(book.book_id));
        for (const Fill& f : summary.fills) {
            const auto i = static_cast<std::size_t>(f.trader);
            if (f.side == kSideBuy) {
                cash[i] -= f.amount;
                holdings[i] += f.qty;
            } else {
                cash[i] += f.amount;
                holdings[i] -= f.qty;
            }
        }
    }

    // cancel resting orders that have outlived max_order_age
    for (auto& book : s.books) {
        auto act = book.orders.active();
        auto placed = book.orders.state().ints("placed");
        Mask kill(act.size(), 0);
        for (std::size_t i = 0; i < act.size(); ++i)
            if (act[i] && t - placed[i] >= cfg.max_order_age)
                kill[i] = 1;
        book.orders = remove_agents(book.orders, kill);
    }
    return s;
}

FinanceModel::FinanceModel(const FinanceConfig& cfg, RngState seed)
    : cfg_(cfg), seed_(seed), state_(init_market(cfg, seed)) {}

void FinanceModel::step(std::int64_t t) {
    state_ = step_market(state_, cfg_, seed_, t);
}

void FinanceModel::collect_metrics(std::vector<std::vector<double>>& rows) const {
    for (const Book& b : state_.books) {
        auto act = b.orders.active();
        auto sides = b.orders.state().ints("side");
        std::int64_t n_buys = 0, n_sells = 0;
        for (std::size_t i = 0; i < act.size(); ++i) {
            if (!act[i])
                continue;
            (sides[i] == kSideBuy ? n_buys : n_sells) += 1;
        }
        rows.push_back({static_cast<double>(b.book_id), b.last_price,
                        static_cast<double>(n_buys), static_cast<double>(n_sells),
                        static_cast<double>(b.last_trades.volume),
                        static_cast<double>(b.dropped_this_step)});
    }
}

ModelDescriptor FinanceModel::descriptor(const FinanceConfig& cfg) {
    return ModelDescriptor{
        "finance",
        {"book_id", "price", "n_active_buys", "n_active_sells", "volume", "orders_dropped"},
        [cfg](Index, RngState seed) { return std::make_unique<FinanceModel>(cfg, seed); },
    };
}

} // namespace abmx::models
