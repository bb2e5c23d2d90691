#include "lpc/martingale.hpp"

#include <fstream>
#include <sstream>

namespace lpc {

namespace detail {

class State {
public:
    virtual ~State() = default;
    virtual std::unique_ptr<State> clone() const = 0;
    virtual void advance(int bit) = 0;
    virtual const Rational& value() const = 0;
    virtual Rational child_value(int bit) const = 0;
    virtual std::optional<SavingsState> savings_state() const { return std::nullopt; }
};

class Strategy {
public:
    virtual ~Strategy() = default;
    virtual std::unique_ptr<State> start() const = 0;
    virtual std::string name() const = 0;
    virtual nlohmann::json to_json() const = 0;
    virtual const std::optional<CostFn>& declared_cost() const {
        static const std::optional<CostFn> none;
        return none;
    }
};

namespace {

// ---------------------------------------------------------------- uniform

class UniformState final : public State {
public:
    std::unique_ptr<State> clone() const override { return std::make_unique<UniformState>(*this); }
    void advance(int) override {}
    const Rational& value() const override { return one_; }
    Rational child_value(int) const override { return one_; }

private:
    Rational one_{1};
};

class UniformStrategy final : public Strategy {
public:
    std::unique_ptr<State> start() const override { return std::make_unique<UniformState>(); }
    std::string name() const override { return "uniform"; }
    nlohmann::json to_json() const override { return {{"kind", "uniform"}}; }
};

// ------------------------------------------------------------------ bias

class BiasState final : public State {
public:
    BiasState(Rational up, Rational down) : up_(std::move(up)), down_(std::move(down)) {}
    std::unique_ptr<State> clone() const override { return std::make_unique<BiasState>(*this); }
    void advance(int bit) override { value_ *= bit ? up_ : down_; }
    const Rational& value() const override { return value_; }
    Rational child_value(int bit) const override { return value_ * (bit ? up_ : down_); }

private:
    Rational up_, down_;  // 2*beta and 2*(1-beta)
    Rational value_{1};
};

class BiasStrategy final : public Strategy {
public:
    explicit BiasStrategy(Rational beta) : beta_(std::move(beta)) {}
    std::unique_ptr<State> start() const override {
        return std::make_unique<BiasState>(Rational(2) * beta_, Rational(2) * (Rational(1) - beta_));
    }
    std::string name() const override { return "bias(" + beta_.to_string() + ")"; }
    nlohmann::json to_json() const override {
        return {{"kind", "bias"}, {"beta", beta_.to_string()}};
    }

private:
    Rational beta_;
};

// -------------------------------------------------------------------- kt

class KtState final : public State {
public:
    std::unique_ptr<State> clone() const override { return std::make_unique<KtState>(*this); }
    void advance(int bit) override {
        value_ = child_value(bit);
        ++counts_[bit];
    }
    const Rational& value() const override { return value_; }
    Rational child_value(int bit) const override {
        std::int64_t len = counts_[0] + counts_[1];
        return value_ * Rational(2 * counts_[bit] + 1, len + 1);
    }

private:
    Rational value_{1};
    std::int64_t counts_[2] = {0, 0};
};

class KtStrategy final : public Strategy {
public:
    std::unique_ptr<State> start() const override { return std::make_unique<KtState>(); }
    std::string name() const override { return "kt"; }
    nlohmann::json to_json() const override { return {{"kind", "kt"}}; }
};

// ---------------------------------------------------------------- all-in

class AllInState final : public State {
public:
    explicit AllInState(int bit) : bit_(bit) {}
    std::unique_ptr<State> clone() const override { return std::make_unique<AllInState>(*this); }
    void advance(int bit) override { value_ = child_value(bit); }
    const Rational& value() const override { return value_; }
    Rational child_value(int bit) const override {
        return bit == bit_ ? Rational(2) * value_ : Rational(0);
    }

private:
    int bit_;
    Rational value_{1};
};

class AllInStrategy final : public Strategy {
public:
    explicit AllInStrategy(int bit) : bit_(bit) {}
    std::unique_ptr<State> start() const override { return std::make_unique<AllInState>(bit_); }
    std::string name() const override { return "allin(" + std::to_string(bit_) + ")"; }
    nlohmann::json to_json() const override { return {{"kind", "allin"}, {"bit", bit_}}; }

private:
    int bit_;
};

// ---------------------------------------------------------------- faulty

class FaultyState final : public State {
public:
    FaultyState(std::unique_ptr<State> inner, std::size_t violate_at)
        : inner_(std::move(inner)), violate_at_(violate_at) {
        cache_ = inner_->value();
    }
    FaultyState(const FaultyState& o)
        : inner_(o.inner_->clone()),
          violate_at_(o.violate_at_),
          position_(o.position_),
          bonus_(o.bonus_),
          cache_(o.cache_) {}

    std::unique_ptr<State> clone() const override { return std::make_unique<FaultyState>(*this); }

    void advance(int bit) override {
        inner_->advance(bit);
        if (position_ == violate_at_ && bit == 0) bonus_ = 1;
        ++position_;
        cache_ = inner_->value() + Rational(bonus_);
    }
    const Rational& value() const override { return cache_; }
    Rational child_value(int bit) const override {
        int b = bonus_;
        if (position_ == violate_at_ && bit == 0) b = 1;
        return inner_->child_value(bit) + Rational(b);
    }

private:
    std::unique_ptr<State> inner_;
    std::size_t violate_at_;
    std::size_t position_ = 0;
    int bonus_ = 0;  // latched once the 0-branch at violate_at is taken
    Rational cache_;
};

class FaultyStrategy final : public Strategy {
public:
    FaultyStrategy(Martingale inner, std::size_t violate_at)
        : inner_(std::move(inner)), violate_at_(violate_at) {}
    std::unique_ptr<State> start() const override {
        return std::make_unique<FaultyState>(inner_.impl()->start(), violate_at_);
    }
    std::string name() const override {
        return "faulty(" + inner_.name() + "," + std::to_string(violate_at_) + ")";
    }
    nlohmann::json to_json() const override {
        return {{"kind", "faulty"},
                {"inner", inner_.to_json()},
                {"violate_at", violate_at_}};
    }

private:
    Martingale inner_;
    std::size_t violate_at_;
};

// ----------------------------------------------------------- cost overlay

class CostedStrategy final : public Strategy {
public:
    CostedStrategy(Martingale inner, CostFn cost)
        : inner_(std::move(inner)), cost_(std::move(cost)) {}
    std::unique_ptr<State> start() const override { return inner_.impl()->start(); }
    std::string name() const override { return inner_.name(); }
    nlohmann::json to_json() const override { return inner_.to_json(); }
    const std::optional<CostFn>& declared_cost() const override { return cost_; }

private:
    Martingale inner_;
    std::optional<CostFn> cost_;
};

// --------------------------------------------------------------- mixture

struct MemberSlot {
    std::unique_ptr<State> st;  // released once frozen
    Rational value;             // raw capital at the current prefix
    std::optional<Rational> activation;  // raw capital at length 2^i
    bool frozen = false;
    Rational frozen_share;  // M'_i to report forever once frozen
    const CostFn* cost = nullptr;

    MemberSlot() = default;
    MemberSlot(const MemberSlot& o)
        : st(o.st ? o.st->clone() : nullptr),
          value(o.value),
          activation(o.activation),
          frozen(o.frozen),
          frozen_share(o.frozen_share),
          cost(o.cost) {}
};

class MixtureStrategy;

class MixtureState final : public State {
public:
    MixtureState(const MixtureStrategy* cfg, std::vector<MemberSlot> slots);
    MixtureState(const MixtureState&) = default;

    std::unique_ptr<State> clone() const override { return std::make_unique<MixtureState>(*this); }
    void advance(int bit) override;
    const Rational& value() const override { return cache_; }
    Rational child_value(int bit) const override;

private:
    // Violation scan for member i at the current prefix length. Children of
    // the prefix are quoted from the member itself, so the check costs two
    // closed-form evaluations and no cloning.
    void check_member(std::size_t i);
    Rational mix(const std::vector<Rational>& shares, std::size_t length) const;
    Rational share_of(std::size_t i) const;

    const MixtureStrategy* cfg_;
    std::vector<MemberSlot> slots_;
    std::size_t position_ = 0;
    Rational cache_{1};
};

class MixtureStrategy final : public Strategy {
public:
    explicit MixtureStrategy(MixtureConfig cfg) : cfg_(std::move(cfg)) {}

    std::unique_ptr<State> start() const override {
        std::vector<MemberSlot> slots(cfg_.members.size());
        for (std::size_t i = 0; i < slots.size(); ++i) {
            slots[i].st = cfg_.members[i].impl()->start();
            slots[i].value = slots[i].st->value();
            if (cfg_.members[i].declared_cost())
                slots[i].cost = &*cfg_.members[i].declared_cost();
        }
        return std::make_unique<MixtureState>(this, std::move(slots));
    }
    std::string name() const override {
        std::string s = "mixture[";
        for (std::size_t i = 0; i < cfg_.members.size(); ++i) {
            if (i) s += ",";
            s += cfg_.members[i].name();
        }
        return s + "]";
    }
    nlohmann::json to_json() const override {
        nlohmann::json members = nlohmann::json::array();
        for (const auto& m : cfg_.members) members.push_back(m.to_json());
        return {{"kind", "mixture"}, {"members", members}};
    }

    std::size_t family_size() const { return cfg_.members.size(); }
    const std::optional<CostFn>& budget() const { return cfg_.budget; }

private:
    MixtureConfig cfg_;
};

// Activation length of member i (0-based slot index): 2^(i+1).
std::size_t activation_length(std::size_t slot) { return std::size_t{1} << (slot + 1); }

MixtureState::MixtureState(const MixtureStrategy* cfg, std::vector<MemberSlot> slots)
    : cfg_(cfg), slots_(std::move(slots)) {
    for (std::size_t i = 0; i < slots_.size(); ++i) check_member(i);
}

void MixtureState::check_member(std::size_t i) {
    auto& slot = slots_[i];
    if (slot.frozen) return;
    bool bad = false;
    if (cfg_->budget() && slot.cost && (*slot.cost)(position_) > (*cfg_->budget())(position_))
        bad = true;
    if (!bad && position_ == 0 && slot.value != Rational(1)) bad = true;
    if (!bad) {
        Rational c0 = slot.st->child_value(0);
        Rational c1 = slot.st->child_value(1);
        if (c0.sign() < 0 || c1.sign() < 0) bad = true;
        else if (c0 + c1 != Rational(2) * slot.value) bad = true;
    }
    if (bad) {
        slot.frozen = true;
        if (position_ < activation_length(i)) {
            slot.frozen_share = Rational(1);
        } else if (!slot.activation || slot.activation->is_zero()) {
            slot.frozen_share = Rational(0);
        } else {
            slot.frozen_share = slot.value / *slot.activation;
        }
        slot.st.reset();
    }
}

Rational MixtureState::share_of(std::size_t i) const {
    const auto& slot = slots_[i];
    if (slot.frozen) return slot.frozen_share;
    if (!slot.activation || slot.activation->is_zero()) return Rational(0);
    return slot.value / *slot.activation;
}

Rational MixtureState::mix(const std::vector<Rational>& shares, std::size_t length) const {
    if (length < 2) return Rational(1);
    std::size_t n = 0;
    while ((std::size_t{2} << n) <= length) ++n;  // n = floor(log2(length))
    std::size_t m = std::min(n, slots_.size());
    Rational total = Rational::pow2(-static_cast<long>(m));
    for (std::size_t i = 0; i < m; ++i)
        total += Rational::pow2(-static_cast<long>(i + 1)) * shares[i];
    return total;
}

void MixtureState::advance(int bit) {
    ++position_;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        auto& slot = slots_[i];
        if (slot.frozen) continue;
        slot.st->advance(bit);
        slot.value = slot.st->value();
        if (position_ == activation_length(i)) slot.activation = slot.value;
        check_member(i);
    }
    std::vector<Rational> shares(slots_.size());
    for (std::size_t i = 0; i < shares.size(); ++i) shares[i] = share_of(i);
    cache_ = mix(shares, position_);
}

Rational MixtureState::child_value(int bit) const {
    std::size_t child_len = position_ + 1;
    std::vector<Rational> shares(slots_.size());
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        const auto& slot = slots_[i];
        if (slot.frozen) {
            shares[i] = slot.frozen_share;
            continue;
        }
        // A violation first visible at the child freezes the member at an
        // index >= its activation length whenever the member participates in
        // the child's sum, and the frozen ratio then coincides with the
        // normalized ratio computed here. So no violation scan is needed.
        if (child_len == activation_length(i)) {
            shares[i] = slot.st->child_value(bit).is_zero() ? Rational(0) : Rational(1);
        } else if (!slot.activation || slot.activation->is_zero()) {
            shares[i] = Rational(0);
        } else {
            shares[i] = slot.st->child_value(bit) / *slot.activation;
        }
    }
    return mix(shares, child_len);
}

// --------------------------------------------------------------- savings

class SavingsStateImpl final : public State {
public:
    explicit SavingsStateImpl(std::unique_ptr<State> inner)
        : inner_(std::move(inner)), working_(inner_->value()) {
        cache_ = savings_ + working_;
    }
    SavingsStateImpl(const SavingsStateImpl& o)
        : inner_(o.inner_->clone()),
          savings_(o.savings_),
          working_(o.working_),
          cache_(o.cache_) {}

    std::unique_ptr<State> clone() const override {
        return std::make_unique<SavingsStateImpl>(*this);
    }

    void advance(int bit) override {
        const Rational& base = inner_->value();
        if (!base.is_zero()) {
            working_ = working_ * inner_->child_value(bit) / base;
        }
        inner_->advance(bit);
        if (working_ >= Rational(2)) {
            Rational half = working_ / Rational(2);
            savings_ += half;
            working_ = half;
        }
        cache_ = savings_ + working_;
    }

    const Rational& value() const override { return cache_; }

    Rational child_value(int bit) const override {
        const Rational& base = inner_->value();
        if (base.is_zero()) return cache_;
        return savings_ + working_ * inner_->child_value(bit) / base;
    }

    std::optional<SavingsState> savings_state() const override {
        return SavingsState{savings_, working_};
    }

private:
    std::unique_ptr<State> inner_;
    Rational savings_{0};
    Rational working_;
    Rational cache_;
};

class SavingsStrategy final : public Strategy {
public:
    explicit SavingsStrategy(Martingale inner) : inner_(std::move(inner)) {}
    std::unique_ptr<State> start() const override {
        return std::make_unique<SavingsStateImpl>(inner_.impl()->start());
    }
    std::string name() const override { return "savings(" + inner_.name() + ")"; }
    nlohmann::json to_json() const override {
        return {{"kind", "savings"}, {"inner", inner_.to_json()}};
    }

private:
    Martingale inner_;
};

} // namespace

} // namespace detail

// ------------------------------------------------------------ public API

Evaluator::Evaluator(std::unique_ptr<detail::State> st) : state_(std::move(st)) {}
Evaluator::Evaluator(const Evaluator& other)
    : state_(other.state_->clone()), position_(other.position_) {}
Evaluator& Evaluator::operator=(const Evaluator& other) {
    if (this != &other) {
        state_ = other.state_->clone();
        position_ = other.position_;
    }
    return *this;
}
Evaluator::Evaluator(Evaluator&&) noexcept = default;
Evaluator& Evaluator::operator=(Evaluator&&) noexcept = default;
Evaluator::~Evaluator() = default;

void Evaluator::advance(int bit) {
    state_->advance(bit ? 1 : 0);
    ++position_;
}

Rational Evaluator::value() const { return state_->value(); }
Rational Evaluator::child_value(int bit) const { return state_->child_value(bit ? 1 : 0); }
std::optional<SavingsState> Evaluator::savings_state() const { return state_->savings_state(); }

Rational Martingale::eval(const BitString& w) const {
    Evaluator ev = evaluator();
    for (int b : w) ev.advance(b);
    return ev.value();
}

Evaluator Martingale::evaluator() const { return Evaluator(impl_->start()); }
std::string Martingale::name() const { return impl_->name(); }
nlohmann::json Martingale::to_json() const { return impl_->to_json(); }
const std::optional<CostFn>& Martingale::declared_cost() const { return impl_->declared_cost(); }

Martingale uniform() {
    return Martingale(std::make_shared<detail::UniformStrategy>());
}

Martingale bias_bettor(const Rational& beta) {
    if (!(Rational(0) < beta && beta < Rational(1)))
        throw ParameterError("bias bettor: beta must satisfy 0 < beta < 1");
    return Martingale(std::make_shared<detail::BiasStrategy>(beta));
}

Martingale kt_bettor() {
    return Martingale(std::make_shared<detail::KtStrategy>());
}

Martingale all_in_bettor(int bit) {
    if (bit != 0 && bit != 1) throw ParameterError("all-in bettor: bit must be 0 or 1");
    return Martingale(std::make_shared<detail::AllInStrategy>(bit));
}

Martingale faulty_wrapper(Martingale inner, std::size_t violate_at) {
    if (violate_at < 1) throw ParameterError("faulty wrapper: violate_at must be >= 1");
    return Martingale(std::make_shared<detail::FaultyStrategy>(std::move(inner), violate_at));
}

Martingale with_declared_cost(Martingale inner, CostFn cost) {
    return Martingale(
        std::make_shared<detail::CostedStrategy>(std::move(inner), std::move(cost)));
}

Martingale mixture(MixtureConfig cfg) {
    if (cfg.members.empty()) throw ParameterError("mixture: family must be nonempty");
    return Martingale(std::make_shared<detail::MixtureStrategy>(std::move(cfg)));
}

Martingale savings_transform(Martingale inner) {
    return Martingale(std::make_shared<detail::SavingsStrategy>(std::move(inner)));
}

std::vector<Rational> capital_trace(const Martingale& m, const BitString& w) {
    std::vector<Rational> trace;
    trace.reserve(w.size() + 1);
    Evaluator ev = m.evaluator();
    trace.push_back(ev.value());
    for (int b : w) {
        ev.advance(b);
        trace.push_back(ev.value());
    }
    return trace;
}

void write_capital_trace_csv(const std::string& path, const std::vector<Rational>& trace) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ParseError("cannot write file: " + path);
    out << "prefix_length,numerator,denominator,decimal_approx\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        std::ostringstream dec;
        dec.precision(15);
        dec << trace[i].to_double();
        out << i << "," << trace[i].numerator().str() << ","
            << trace[i].denominator().str() << "," << dec.str() << "\n";
    }
}

std::string ValidationReport::summary() const {
    if (passed) return "pass (" + std::to_string(words_checked) + " words checked)";
    std::string kind;
    switch (first_violation->kind) {
        case Violation::Kind::RootValue: kind = "root value > 1"; break;
        case Violation::Kind::Negativity: kind = "negative capital"; break;
        case Violation::Kind::Fairness: kind = "fairness"; break;
    }
    return "violation (" + kind + ") first at length " +
           std::to_string(first_violation->word.size()) + ", word '" +
           first_violation->word.to_string() + "'";
}

namespace {

// Depth-first enumeration of all words of a fixed length, in lexicographic
// order, reusing evaluator state along the path.
template <typename Fn>
bool scan_level(Evaluator& ev, BitString& word, std::size_t remaining, const Fn& visit) {
    if (remaining == 0) return visit(ev, word);
    for (int b = 0; b < 2; ++b) {
        Evaluator child = ev;
        child.advance(b);
        word.push_back(b);
        if (!scan_level(child, word, remaining - 1, visit)) return false;
        word = word.slice(0, word.size() - 1);
    }
    return true;
}

} // namespace

ValidationReport validate_martingale(const Martingale& m, unsigned depth) {
    if (depth > 24) throw ParameterError("validate: depth too large to enumerate");
    ValidationReport report;

    if (m.eval(BitString()) > Rational(1)) {
        report.first_violation = Violation{Violation::Kind::RootValue, BitString()};
        return report;
    }

    for (unsigned level = 0; level < depth; ++level) {
        Evaluator root = m.evaluator();
        BitString word;
        bool ok = scan_level(root, word, level, [&](Evaluator& ev, const BitString& w) {
            ++report.words_checked;
            Rational v = ev.value();
            if (v.sign() < 0) {
                report.first_violation = Violation{Violation::Kind::Negativity, w};
                return false;
            }
            Rational c0 = ev.child_value(0);
            Rational c1 = ev.child_value(1);
            if (c0.sign() < 0 || c1.sign() < 0) {
                report.first_violation = Violation{Violation::Kind::Negativity, w};
                return false;
            }
            if (c0 + c1 != Rational(2) * v) {
                report.first_violation = Violation{Violation::Kind::Fairness, w};
                return false;
            }
            return true;
        });
        if (!ok) return report;
    }
    report.passed = true;
    return report;
}

namespace {

void require_keys(const nlohmann::json& j, std::initializer_list<const char*> keys) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : keys)
            if (it.key() == k) known = true;
        if (!known) throw ParseError("martingale spec: unknown field '" + it.key() + "'");
    }
}

} // namespace

Martingale martingale_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ParseError("martingale spec: expected object with 'kind'");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "uniform") {
        require_keys(j, {"kind"});
        return uniform();
    }
    if (kind == "bias") {
        require_keys(j, {"kind", "beta"});
        return bias_bettor(Rational::from_string(j.at("beta").get<std::string>()));
    }
    if (kind == "kt") {
        require_keys(j, {"kind"});
        return kt_bettor();
    }
    if (kind == "allin") {
        require_keys(j, {"kind", "bit"});
        return all_in_bettor(j.at("bit").get<int>());
    }
    if (kind == "mixture") {
        require_keys(j, {"kind", "members"});
        MixtureConfig cfg;
        for (const auto& member : j.at("members")) cfg.members.push_back(martingale_from_json(member));
        return mixture(std::move(cfg));
    }
    if (kind == "savings") {
        require_keys(j, {"kind", "inner"});
        return savings_transform(martingale_from_json(j.at("inner")));
    }
    if (kind == "faulty") {
        require_keys(j, {"kind", "inner", "violate_at"});
        return faulty_wrapper(martingale_from_json(j.at("inner")),
                              j.at("violate_at").get<std::size_t>());
    }
    throw ParseError("martingale spec: unknown kind '" + kind + "'");
}

Martingale load_martingale(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open martingale spec: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError("martingale spec: bad JSON in " + path + ": " + e.what());
    }
    return martingale_from_json(j);
}

} // namespace lpc
