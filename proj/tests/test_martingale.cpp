#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lpc/martingale.hpp"

using namespace lpc;

namespace {

Rational eval(const Martingale& m, const std::string& w) {
    return m.eval(BitString::from_string(w));
}

// Exhaustive fairness scan by direct evaluation, independent of the
// evaluator's child_value path.
bool fair_to_depth(const Martingale& m, unsigned depth) {
    for (unsigned len = 0; len < depth; ++len) {
        for (std::uint64_t word = 0; word < (std::uint64_t{1} << len); ++word) {
            BitString w;
            for (unsigned p = 0; p < len; ++p)
                w.push_back(static_cast<int>((word >> (len - 1 - p)) & 1));
            BitString w0 = w, w1 = w;
            w0.push_back(0);
            w1.push_back(1);
            if (m.eval(w0) + m.eval(w1) != Rational(2) * m.eval(w)) return false;
            if (m.eval(w).sign() < 0) return false;
        }
    }
    return true;
}

// Fast deep scan reusing evaluator state along the tree; checks fairness of
// the quoted child capitals at every node up to the given length.
bool fair_tree(const Evaluator& ev, unsigned remaining) {
    if (ev.child_value(0) + ev.child_value(1) != Rational(2) * ev.value()) return false;
    if (remaining == 0) return true;
    for (int b = 0; b < 2; ++b) {
        Evaluator child = ev;
        child.advance(b);
        if (!fair_tree(child, remaining - 1)) return false;
    }
    return true;
}

bool fair_tree(const Martingale& m, unsigned depth) {
    Evaluator root = m.evaluator();
    return fair_tree(root, depth);
}

Martingale sample_mixture() {
    MixtureConfig cfg;
    cfg.members = {kt_bettor(), bias_bettor(Rational(2, 3)), bias_bettor(Rational(1, 3))};
    return mixture(std::move(cfg));
}

} // namespace

TEST_CASE("uniform strategy") {
    Martingale m = uniform();
    CHECK(eval(m, "") == Rational(1));
    CHECK(eval(m, "0110") == Rational(1));
    CHECK(eval(m, "010") + eval(m, "011") == Rational(2));
}

TEST_CASE("bias bettor recurrence") {
    Martingale m = bias_bettor(Rational(3, 4));
    CHECK(eval(m, "11") == Rational(9, 4));
    CHECK(eval(m, "10") == Rational(3, 4));
    CHECK(eval(m, "1") == Rational(3, 2));
    Martingale half = bias_bettor(Rational(1, 2));
    CHECK(eval(half, "0110") == Rational(1));
    CHECK(eval(half, "111") == Rational(1));
    CHECK_THROWS_AS(bias_bettor(Rational(1)), ParameterError);
    CHECK_THROWS_AS(bias_bettor(Rational(0)), ParameterError);
    CHECK_THROWS_AS(bias_bettor(Rational(5, 4)), ParameterError);
}

TEST_CASE("kt bettor recurrence") {
    Martingale m = kt_bettor();
    CHECK(eval(m, "1") == Rational(1));
    CHECK(eval(m, "11") == Rational(3, 2));
    // fairness at a specific word
    CHECK(eval(m, "1010") + eval(m, "1011") == Rational(2) * eval(m, "101"));
    CHECK(fair_to_depth(m, 8));
}

TEST_CASE("evaluator child values match full evaluation") {
    for (const Martingale& m :
         {uniform(), bias_bettor(Rational(2, 3)), kt_bettor(), savings_transform(kt_bettor()),
          sample_mixture(), savings_transform(sample_mixture())}) {
        Evaluator ev = m.evaluator();
        BitString w = BitString::from_string("1011001110");
        BitString prefix;
        for (int b : w) {
            BitString p0 = prefix, p1 = prefix;
            p0.push_back(0);
            p1.push_back(1);
            CHECK(ev.child_value(0) == m.eval(p0));
            CHECK(ev.child_value(1) == m.eval(p1));
            ev.advance(b);
            prefix.push_back(b);
            CHECK(ev.value() == m.eval(prefix));
        }
    }
}

TEST_CASE("all-in bettor doubles or busts") {
    Martingale m = all_in_bettor(1);
    CHECK(eval(m, "11") == Rational(4));
    CHECK(eval(m, "110") == Rational(0));
    CHECK(eval(m, "1101") == Rational(0));
    CHECK(fair_to_depth(m, 7));
    CHECK_THROWS_AS(all_in_bettor(2), ParameterError);
}

TEST_CASE("mixture absorbs a member whose activation capital is zero") {
    // A member with zero capital at its activation length keeps share 0 from
    // then on. Mass is lost exactly at that boundary, so the mixture is a
    // supermartingale there and an exact martingale everywhere else; with
    // strictly positive members (all the codec-facing strategies) the case
    // never arises.
    MixtureConfig cfg;
    cfg.members = {all_in_bettor(1), uniform()};
    Martingale m = mixture(std::move(cfg));
    for (unsigned len = 0; len < 9; ++len) {
        for (std::uint64_t word = 0; word < (std::uint64_t{1} << len); ++word) {
            BitString w;
            for (unsigned p = 0; p < len; ++p)
                w.push_back(static_cast<int>((word >> (len - 1 - p)) & 1));
            BitString w0 = w, w1 = w;
            w0.push_back(0);
            w1.push_back(1);
            CHECK(m.eval(w0) + m.eval(w1) <= Rational(2) * m.eval(w));
        }
    }
    // the drop happens exactly where the all-in member dies at activation
    CHECK(eval(m, "0") == Rational(1));
    CHECK(eval(m, "00") + eval(m, "01") == Rational(1));
    // and the zero share is pinned afterwards: 1/2 * 0 + 1/4 * 1 + 1/4
    CHECK(eval(m, "0011") == Rational(1, 2));
    auto report = validate_martingale(m, 10);
    CHECK_FALSE(report.passed);
    CHECK(report.first_violation->kind == Violation::Kind::Fairness);
    CHECK(report.first_violation->word.to_string() == "0");
    // on the surviving branch the mixture stays exactly fair
    CHECK(eval(m, "110") + eval(m, "111") == Rational(2) * eval(m, "11"));
}

TEST_CASE("mixture of uniforms is uniform") {
    MixtureConfig cfg;
    cfg.members = {uniform(), uniform()};
    Martingale m = mixture(std::move(cfg));
    CHECK(eval(m, "1010") == Rational(1));
    CHECK(eval(m, "") == Rational(1));
    CHECK(eval(m, "1111111") == Rational(1));
}

TEST_CASE("mixture formula with one biased member") {
    MixtureConfig cfg;
    cfg.members = {bias_bettor(Rational(3, 4))};
    Martingale m = mixture(std::move(cfg));
    // activation at length 2: value is (1/2) * M(x)/M(x|2) + 1/2
    CHECK(eval(m, "111") == Rational(5, 4));
    // boundary fairness across the activation length
    CHECK(eval(m, "10") + eval(m, "11") == Rational(2) * eval(m, "1"));
    CHECK(eval(m, "1") == Rational(1));
    CHECK(fair_to_depth(m, 8));
}

TEST_CASE("mixture dominance over well-behaved members") {
    Martingale m = sample_mixture();
    MixtureConfig cfg;
    cfg.members = {kt_bettor(), bias_bettor(Rational(2, 3)), bias_bettor(Rational(1, 3))};
    std::vector<Martingale> members = cfg.members;

    for (std::uint64_t seed : {11u, 22u, 33u, 44u}) {
        BitString w = seeded_bits(seed, 40);
        for (std::size_t i = 0; i < members.size(); ++i) {
            std::size_t activation = std::size_t{1} << (i + 1);
            Rational at_activation = members[i].eval(w.slice(0, activation));
            if (at_activation.is_zero()) continue;
            Rational lhs = m.eval(w);
            Rational rhs =
                Rational::pow2(-static_cast<long>(i + 1)) * members[i].eval(w) / at_activation;
            CHECK(lhs >= rhs);
        }
    }
}

TEST_CASE("faulty wrapper breaks fairness exactly once") {
    Martingale m = faulty_wrapper(uniform(), 3);
    // untouched below the violation index
    for (unsigned len = 0; len < 3; ++len)
        for (std::uint64_t word = 0; word < (std::uint64_t{1} << len); ++word) {
            BitString w;
            for (unsigned p = 0; p < len; ++p)
                w.push_back(static_cast<int>((word >> (len - 1 - p)) & 1));
            BitString w0 = w, w1 = w;
            w0.push_back(0);
            w1.push_back(1);
            CHECK(m.eval(w0) + m.eval(w1) == Rational(2) * m.eval(w));
        }
    // violated at length 3
    BitString w = BitString::from_string("000");
    BitString w0 = w, w1 = w;
    w0.push_back(0);
    w1.push_back(1);
    CHECK(m.eval(w0) + m.eval(w1) != Rational(2) * m.eval(w));
    CHECK_THROWS_AS(faulty_wrapper(uniform(), 0), ParameterError);
}

TEST_CASE("mixture with a faulty member stays an exact martingale") {
    MixtureConfig cfg;
    cfg.members = {faulty_wrapper(uniform(), 3), kt_bettor()};
    Martingale m = mixture(std::move(cfg));
    CHECK(fair_to_depth(m, 9));  // from-scratch evaluations
    CHECK(fair_tree(m, 16));     // evaluator walk through length 16
    CHECK(validate_martingale(m, 10).passed);
}

TEST_CASE("mixture freezes a member that blows its step budget") {
    MixtureConfig cfg;
    // member 0 declares a cost that crosses the budget at length 5
    cfg.members = {with_declared_cost(bias_bettor(Rational(3, 4)),
                                      [](std::size_t len) {
                                          return static_cast<std::int64_t>(len <= 4 ? len : 1000);
                                      }),
                   kt_bettor()};
    cfg.budget = [](std::size_t len) { return static_cast<std::int64_t>(10 * (len + 1)); };
    Martingale m = mixture(std::move(cfg));
    CHECK(validate_martingale(m, 9).passed);

    // frozen share: after length 5 the first member's contribution is pinned
    // at its normalized ratio at the violation index
    Martingale biased = bias_bettor(Rational(3, 4));
    BitString ones5 = BitString::ones(5);
    Rational frozen = biased.eval(ones5) / biased.eval(ones5.slice(0, 2));
    BitString ones9 = BitString::ones(9);
    Martingale kt = kt_bettor();
    Rational expected = Rational(1, 2) * frozen +
                        Rational(1, 4) * kt.eval(ones9) / kt.eval(ones9.slice(0, 4)) +
                        Rational(1, 4);
    CHECK(m.eval(ones9) == expected);
}

TEST_CASE("savings transform of uniform never banks") {
    Martingale m = savings_transform(uniform());
    Evaluator ev = m.evaluator();
    for (int i = 0; i < 20; ++i) {
        CHECK(ev.value() == Rational(1));
        auto st = ev.savings_state();
        REQUIRE(st.has_value());
        CHECK(st->savings == Rational(0));
        ev.advance(i % 2);
    }
}

TEST_CASE("savings bank grows on a winning streak and is monotone") {
    Martingale m = savings_transform(bias_bettor(Rational(3, 4)));
    Evaluator ev = m.evaluator();
    Rational last_savings(0);
    for (int i = 0; i < 2000; ++i) {
        ev.advance(1);
        auto st = ev.savings_state();
        REQUIRE(st.has_value());
        CHECK(st->savings >= last_savings);
        CHECK(st->savings + st->working == ev.value());
        last_savings = st->savings;
    }
    CHECK(last_savings > Rational(100));
}

TEST_CASE("savings transfers stop when the inner strategy keeps losing") {
    Martingale m = savings_transform(bias_bettor(Rational(3, 4)));
    Evaluator ev = m.evaluator();
    std::vector<Rational> savings;
    for (int i = 0; i < 2000; ++i) {
        ev.advance(0);  // halves the biased bettor every step
        savings.push_back(ev.savings_state()->savings);
    }
    for (std::size_t i = 1000; i < savings.size(); ++i) CHECK(savings[i] == savings[1000 - 1]);
}

TEST_CASE("savings output is an exact martingale") {
    CHECK(fair_to_depth(savings_transform(kt_bettor()), 11));
    CHECK(fair_to_depth(savings_transform(bias_bettor(Rational(3, 4))), 8));
}

TEST_CASE("capital trace") {
    CHECK(capital_trace(uniform(), BitString::from_string("010")) ==
          std::vector<Rational>{1, 1, 1, 1});
    CHECK(capital_trace(bias_bettor(Rational(3, 4)), BitString::from_string("11")) ==
          std::vector<Rational>{Rational(1), Rational(3, 2), Rational(9, 4)});
    CHECK(capital_trace(kt_bettor(), seeded_bits(5, 9)).size() == 10);
}

TEST_CASE("validate martingale reports the first violation") {
    CHECK(validate_martingale(uniform(), 8).passed);
    auto report = validate_martingale(faulty_wrapper(uniform(), 3), 8);
    CHECK_FALSE(report.passed);
    REQUIRE(report.first_violation.has_value());
    CHECK(report.first_violation->word.size() == 3);
    CHECK(report.first_violation->word.to_string() == "000");
    CHECK(report.first_violation->kind == Violation::Kind::Fairness);

    MixtureConfig cfg;
    cfg.members = {kt_bettor(), bias_bettor(Rational(2, 3))};
    CHECK(validate_martingale(mixture(std::move(cfg)), 10).passed);
}

TEST_CASE("fairness holds at activation boundaries on long prefixes") {
    Martingale m = sample_mixture();
    for (std::size_t boundary : {2u, 4u, 8u, 16u, 32u}) {
        BitString w = seeded_bits(boundary, boundary - 1);
        BitString w0 = w, w1 = w;
        w0.push_back(0);
        w1.push_back(1);
        CHECK(m.eval(w0) + m.eval(w1) == Rational(2) * m.eval(w));
    }
}

TEST_CASE("martingale specs round-trip through JSON") {
    Martingale m = savings_transform(sample_mixture());
    nlohmann::json j = m.to_json();
    Martingale back = martingale_from_json(j);
    CHECK(back.to_json() == j);
    CHECK(back.eval(seeded_bits(3, 30)) == m.eval(seeded_bits(3, 30)));

    CHECK_THROWS_AS(martingale_from_json({{"kind", "unknown"}}), ParseError);
    CHECK_THROWS_AS(martingale_from_json({{"kind", "uniform"}, {"extra", 1}}), ParseError);
    CHECK_THROWS_AS(martingale_from_json(nlohmann::json::array()), ParseError);

    Martingale f = martingale_from_json(
        {{"kind", "faulty"}, {"inner", {{"kind", "uniform"}}}, {"violate_at", 3}});
    CHECK_FALSE(validate_martingale(f, 8).passed);
}

TEST_CASE("capital trace CSV is written with exact fractions") {
    auto path = (std::filesystem::temp_directory_path() / "lpc_trace_test.csv").string();
    write_capital_trace_csv(path, capital_trace(bias_bettor(Rational(3, 4)),
                                                BitString::from_string("11")));
    std::ifstream in(path);
    std::string header, row0, row1, row2;
    std::getline(in, header);
    std::getline(in, row0);
    std::getline(in, row1);
    std::getline(in, row2);
    CHECK(header == "prefix_length,numerator,denominator,decimal_approx");
    CHECK(row1.rfind("1,3,2,", 0) == 0);
    CHECK(row2.rfind("2,9,4,", 0) == 0);
    std::remove(path.c_str());
}
