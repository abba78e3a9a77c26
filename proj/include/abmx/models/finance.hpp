#pragma once

#include "abmx/batch.hpp"
#include "abmx/lifecycle.hpp"

namespace abmx::models {

// Noisy traders posting limit orders into fixed-capacity books, cleared once
// per step by a uniform-price batch auction: sort both sides by price, take
// cumulative share sums, execute the largest crossing volume, fill in
// price-time priority and print the midpoint of the marginal prices.
struct FinanceConfig {
    Index books = 5;
    Index traders = 10;
    Index book_capacity = 1000;
    double p_order = 0.5;
    double delta = 0.05; // relative price noise amplitude
    std::int64_t qmax = 10;
    std::int64_t max_order_age = 20; // steps a resting order may survive
    double init_price = 100.0;
};

// Prices live on a dyadic tick grid so every qty * price transfer and the
// midpoint clearing price are exact doubles; conservation checks then hold
// bitwise.
inline constexpr double kPriceTick = 0x1p-7;
double quantize_price(double raw);

inline constexpr std::int64_t kSideBuy = 0;
inline constexpr std::int64_t kSideSell = 1;

struct Fill {
    std::int64_t trader = 0;
    std::int64_t side = kSideBuy;
    std::int64_t qty = 0;
    double amount = 0.0; // qty * clearing price, exact on the grid
};

struct TradeSummary {
    std::int64_t volume = 0;
    double clearing_price = 0.0;
    std::vector<Fill> fills;
};

struct Book {
    AgentSet orders; // state: trader, side, price, qty, placed
    double last_price = 0.0;
    Index book_id = 0;
    Index dropped_this_step = 0;
    TradeSummary last_trades;

    static Book empty(Index capacity, Index book_id, double init_price);
};

// Per-trader placement into one book; the row index equals the trader slot.
// Stream: seed.split(FinancePlace).split(t).split(book); trader i consumes
// draws 4i (place?), 4i+1 (side), 4i+2 (epsilon), 4i+3 (qty).
Book place_orders(const AgentSet& traders, const Book& book, RngState stream, std::int64_t t);

// Uniform-price batch auction; pure in the book.
std::pair<Book, TradeSummary> match_book(const Book& book);

struct MarketState {
    AgentSet traders; // state: cash, holdings_<k>; params: delta, qmax
    std::vector<Book> books;
};

MarketState init_market(const FinanceConfig& cfg, RngState seed);

// place into every book, match every book, settle fills against traders in
// book order, cancel orders older than max_order_age.
MarketState step_market(const MarketState& in, const FinanceConfig& cfg, RngState seed,
                        std::int64_t t);

class FinanceModel final : public Model {
public:
    FinanceModel(const FinanceConfig& cfg, RngState seed);

    void step(std::int64_t t) override;
    void collect_metrics(std::vector<std::vector<double>>& rows) const override;

    const MarketState& market() const { return state_; }

    static ModelDescriptor descriptor(const FinanceConfig& cfg);

private:
    FinanceConfig cfg_;
    RngState seed_;
    MarketState state_;
};

} // namespace abmx::models
