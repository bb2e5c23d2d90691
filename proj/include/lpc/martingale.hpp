#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpc/bits.hpp"
#include "lpc/rational.hpp"

namespace lpc {

/// Declared step-cost model: cost of one capital query at prefix length L.
/// Purely declarative -- nothing is timed; a mixture compares it against its
/// step budget to decide whether a member has blown its allowance.
using CostFn = std::function<std::int64_t(std::size_t)>;

struct SavingsState {
    Rational savings;  // banked, never decreases
    Rational working;  // still in play; reported value is savings + working
};

namespace detail {
class Strategy;
class State;
} // namespace detail

class Evaluator;

/// An exact betting strategy d: {0,1}* -> Q with d(lambda) <= 1 and
/// 2*d(w) = d(w0) + d(w1) for every w. Immutable; copies share the
/// descriptor. Evaluation is a pure function of (descriptor, word).
class Martingale {
public:
    explicit Martingale(std::shared_ptr<const detail::Strategy> impl)
        : impl_(std::move(impl)) {}

    Rational eval(const BitString& w) const;
    Evaluator evaluator() const;

    std::string name() const;
    nlohmann::json to_json() const;

    const std::optional<CostFn>& declared_cost() const;

    std::shared_ptr<const detail::Strategy> impl() const { return impl_; }

private:
    std::shared_ptr<const detail::Strategy> impl_;
};

/// Incremental cursor over one word. advance() appends a bit; child_value()
/// quotes the capital one bit ahead without moving. Copying an Evaluator
/// deep-copies its state, so branches can be explored independently.
class Evaluator {
public:
    explicit Evaluator(std::unique_ptr<detail::State> st);
    Evaluator(const Evaluator& other);
    Evaluator& operator=(const Evaluator& other);
    Evaluator(Evaluator&&) noexcept;
    Evaluator& operator=(Evaluator&&) noexcept;
    ~Evaluator();

    void advance(int bit);
    Rational value() const;
    Rational child_value(int bit) const;
    std::size_t position() const { return position_; }

    /// Savings ledger of the top-level strategy, when it is a savings
    /// transform.
    std::optional<SavingsState> savings_state() const;

private:
    std::unique_ptr<detail::State> state_;
    std::size_t position_ = 0;
};

/// The even strategy: capital 1 on every word.
Martingale uniform();

/// Bets fraction beta of capital on 1: d(w1) = 2*beta*d(w),
/// d(w0) = 2*(1-beta)*d(w). Requires 0 < beta < 1.
Martingale bias_bettor(const Rational& beta);

/// Adaptive frequency bettor: d(w.b) = 2*d(w)*(count_b(w) + 1/2)/(|w| + 1).
Martingale kt_bettor();

/// Stakes the entire capital on `bit` every round: d(w.bit) = 2*d(w) and
/// d(w.other) = 0. The one shipped strategy whose capital can reach zero,
/// which the codec must reject and a mixture must absorb.
Martingale all_in_bettor(int bit);

/// Test hook: behaves as `inner` but deliberately breaks fairness exactly
/// once, at prefix length violate_at, by adding 1 on the 0-branch.
/// Requires violate_at >= 1.
Martingale faulty_wrapper(Martingale inner, std::size_t violate_at);

/// Test hook: same strategy with a declared step-cost model attached.
Martingale with_declared_cost(Martingale inner, CostFn cost);

struct MixtureConfig {
    /// Ordered family M_1..M_k. Member i carries fixed weight 2^-i and
    /// activates at prefix length 2^i; the implicit even-betting tail gets
    /// the remaining 2^-k, so the weights sum to exactly 1 at lambda.
    std::vector<Martingale> members;
    /// Optional monotone step budget t(L). A member whose declared cost
    /// exceeds t at some length is frozen from that point on, exactly like a
    /// member caught breaking fairness.
    std::optional<CostFn> budget;
};

/// Weighted mixture with activation and freezing. For 2^n <= |x| < 2^{n+1}
/// and m = min(n, k):
///
///   d(x) = sum_{i=1..m} 2^-i * M'_i(x) + 2^-m,        d(x) = 1 for |x| < 2
///
/// where M'_i normalizes member i's capital by its value at length 2^i.
/// A member caught misbehaving (unfair bet, negative capital, bad root, or
/// budget overrun) at index j is frozen: M'_i stays 1 if j < 2^i, else it
/// keeps the normalized ratio it had at j. The result is an exact martingale
/// regardless of how members misbehave, and dominates every well-behaved
/// member: d(w) >= 2^-i * M_i(w)/M_i(w restricted to 2^i) for |w| > 2^i.
Martingale mixture(MixtureConfig cfg);

/// Savings-account transform. State per prefix: banked s (starts 0) and
/// working capital c (starts inner(lambda)). Per bit, c scales by the
/// inner strategy's betting ratio (unchanged while the inner capital is 0);
/// whenever c reaches 2, half of it is banked irrevocably. The reported
/// value s + c is again an exact martingale, s is nondecreasing along any
/// word, and s grows beyond every bound exactly on words where the inner
/// capital's limsup is infinite.
Martingale savings_transform(Martingale inner);

/// Capital along every prefix: element j is m(w restricted to j), so the
/// list has |w| + 1 entries.
std::vector<Rational> capital_trace(const Martingale& m, const BitString& w);

/// CSV with columns (prefix_length, numerator, denominator, decimal_approx).
void write_capital_trace_csv(const std::string& path,
                             const std::vector<Rational>& trace);

struct Violation {
    enum class Kind { RootValue, Negativity, Fairness };
    Kind kind;
    BitString word;  // shortest, then lexicographically first, offender
};

struct ValidationReport {
    bool passed = false;
    std::uint64_t words_checked = 0;
    std::optional<Violation> first_violation;
    std::string summary() const;
};

/// Exhaustively checks d(lambda) <= 1, nonnegativity and exact fairness over
/// all words shorter than `depth` (so it enumerates 2^depth - 1 fairness
/// equations). Violations are report content, not errors.
ValidationReport validate_martingale(const Martingale& m, unsigned depth);

/// Strategy spec files: {"kind": "uniform"|"bias"|"kt"|"mixture"|"savings"
/// |"allin"|"faulty", ...}. Mixtures list members in order M_1..M_k.
Martingale martingale_from_json(const nlohmann::json& j);
Martingale load_martingale(const std::string& path);

} // namespace lpc
