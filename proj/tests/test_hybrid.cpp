#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "lpc/oracle.hpp"

using namespace lpc;

namespace {

BitString bits(const std::string& s) { return BitString::from_string(s); }

// 5*sqrt(m) comparison without floating point: holds iff lhs <= 0 or
// lhs^2 <= 25 m.
bool within_five_sqrt(const Rational& lhs, std::uint64_t m) {
    if (lhs.sign() <= 0) return true;
    return lhs * lhs <= Rational(25) * Rational(BigInt(m));
}

unsigned chunks_for(std::uint64_t m) {
    unsigned floor_log2 = 0;
    while ((std::uint64_t{2} << floor_log2) <= m) ++floor_log2;
    return floor_log2 / 2;
}

} // namespace

TEST_CASE("prefix code hand values") {
    CHECK(prefix_encode(bits("1")) == bits("11011"));
    CHECK(prefix_encode(BitString()) == bits("01"));
    auto [word, used] = prefix_decode(bits("01"));
    CHECK(word == BitString());
    CHECK(used == 2);
}

TEST_CASE("prefix code inverts and ignores trailing bits") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        for (std::size_t len : {std::size_t{0}, std::size_t{1}, std::size_t{5}, std::size_t{31},
                                std::size_t{64}, std::size_t{200}}) {
            BitString w = seeded_bits(seed, len);
            BitString coded = prefix_encode(w);
            CHECK(coded.size() <= len + 2 * std::log2(static_cast<double>(len) + 1) + 4);
            BitString stream = coded + seeded_bits(seed + 1, 16);
            auto [word, used] = prefix_decode(stream);
            CHECK(word == w);
            CHECK(used == coded.size());
        }
    }
}

TEST_CASE("prefix code image is prefix-free through length 6") {
    std::vector<BitString> codes;
    for (std::size_t len = 0; len <= 6; ++len)
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
            BitString w;
            for (std::size_t p = 0; p < len; ++p)
                w.push_back(static_cast<int>((v >> (len - 1 - p)) & 1));
            codes.push_back(prefix_encode(w));
        }
    for (std::size_t a = 0; a < codes.size(); ++a)
        for (std::size_t b = 0; b < codes.size(); ++b) {
            if (a == b) continue;
            bool is_prefix = codes[a].size() <= codes[b].size() &&
                             codes[b].slice(0, codes[a].size()) == codes[a];
            CHECK_FALSE(is_prefix);
        }
}

TEST_CASE("prefix code rejects malformed headers") {
    CHECK_THROWS_AS(prefix_decode(bits("10")), DecodeError);
    CHECK_THROWS_AS(prefix_decode(bits("11")), DecodeError);      // truncated header
    CHECK_THROWS_AS(prefix_decode(bits("1101")), DecodeError);    // payload shorter than length
    CHECK_THROWS_AS(prefix_decode(bits("000101")), DecodeError);  // leading zero length digit
}

TEST_CASE("program methods reproduce their words") {
    CHECK(udec(literal_program(bits("0110"))).output == bits("0110"));
    CHECK(udec(runlength_program(8, bits("0"))).output == bits("00000000"));
    CHECK(udec(runlength_program(0, BitString())).output == BitString());
    CHECK(udec(runlength_program(3, bits("01"))).output == bits("010101"));
    BitString sample = champernowne(47);
    CHECK(udec(lz_program(sample)).output == sample);
    // consumed length is exactly the program length even with a suffix
    BitString program = literal_program(bits("10"));
    UdecResult r = udec(program + bits("1111"));
    CHECK(r.consumed == program.size());
}

TEST_CASE("program rejects malformed streams") {
    // a method tag must be exactly two bits
    BitString bad = prefix_encode(bits("0"));
    CHECK_THROWS_AS(udec(bad), DecodeError);
    CHECK_THROWS_AS(udec(bits("01")), DecodeError);  // empty tag
    CHECK_THROWS_AS(udec(BitString()), DecodeError);
    // replay with a machine id other than 0
    BitString foreign = replay_program(3, 4, bits("0101"));
    CHECK_THROWS_AS(udec(foreign), DecodeError);
}

TEST_CASE("describers are total and invertible") {
    std::vector<Describer> describers = {literal_describer(), runlength_describer(),
                                         lz_describer()};
    for (const auto& d : describers) {
        std::size_t checked = 0;
        for (std::uint64_t seed = 0; seed < 992; ++seed) {
            BitString x = seeded_bits(seed, seed % 61);
            CHECK(udec(d.describe(x)).output == x);
            ++checked;
        }
        for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{40}, std::size_t{256}}) {
            CHECK(udec(d.describe(BitString::zeros(n))).output == BitString::zeros(n));
            CHECK(udec(d.describe(champernowne(n))).output == champernowne(n));
            checked += 2;
        }
        CHECK(checked >= 1000);
    }
}

TEST_CASE("run-length describer finds the shortest period") {
    BitString periodic = bits("010101");
    BitString program = runlength_describer().describe(periodic);
    CHECK(program == runlength_program(3, bits("01")));
    // strongly compressible words get short programs
    BitString zeros = BitString::zeros(10000);
    CHECK(runlength_describer().describe(zeros).size() < 60);
    CHECK(udec(runlength_describer().describe(zeros)).output == zeros);
}

TEST_CASE("checkpoint schedule selection") {
    CHECK(checkpoint_schedule({4, 25, 900, 1000000}) ==
          std::vector<std::uint64_t>{4, 25, 900, 1000000});
    CHECK(checkpoint_schedule({4, 10, 25}) == std::vector<std::uint64_t>{4, 25});
    CHECK(checkpoint_schedule({7}) == std::vector<std::uint64_t>{7});
    CHECK_THROWS_AS(checkpoint_schedule({}), ScheduleError);
    CHECK_THROWS_AS(checkpoint_schedule({5, 5}), ParameterError);
    CHECK_THROWS_AS(checkpoint_schedule({9, 2}), ParameterError);

    // squared-growth invariant on a long selection
    std::vector<std::uint64_t> candidates;
    for (std::uint64_t v = 2; v < 2'000'000'000ULL; v = v * 3 / 2 + 1) candidates.push_back(v);
    auto chosen = checkpoint_schedule(candidates);
    std::uint64_t sum = 0;
    for (auto m : chosen) {
        CHECK(BigInt(sum) * BigInt(sum) <= BigInt(m));
        sum += m;
    }
}

TEST_CASE("oracle layout matches the hand-worked block arithmetic") {
    BitSource X = seeded_source(3);
    OracleBuild built = build_oracle(X, {4, 25}, literal_describer());
    REQUIRE(built.layout.blocks.size() == 2);
    CHECK(built.layout.blocks[0].raw_bits == 3);   // one chunk of length 1 plus two flags
    CHECK(built.layout.blocks[1].raw_bits == 6);   // chunks 1+2, three flags
    for (const auto& block : built.layout.blocks) {
        // |v_i| = 2^l + l <= 2*sqrt(m_i) + 2
        Rational lhs(static_cast<std::int64_t>(block.raw_bits) - 2);
        CHECK((lhs.sign() <= 0 ||
               lhs * lhs <= Rational(4) * Rational(BigInt(block.checkpoint))));
    }
    // programs reproduce the exact prefixes
    std::size_t offset = built.layout.blocks[0].raw_bits;
    UdecResult p1 = udec(built.oracle, offset);
    CHECK(p1.output == X.prefix(4));
    offset += p1.consumed + built.layout.blocks[1].raw_bits;
    UdecResult p2 = udec(built.oracle, offset);
    CHECK(p2.output == X.prefix(25));
}

TEST_CASE("compressible sources get short programs") {
    // at m = 25 the self-delimiting overhead still dominates: 8 tag bits,
    // 13 for the count, 5 for the unit
    OracleBuild small = build_oracle(zeros_source(), {4, 25}, runlength_describer());
    CHECK(small.layout.blocks[1].program_bits == 26);
    // one checkpoint later the program is far below the prefix length
    OracleBuild larger = build_oracle(zeros_source(), {4, 64}, runlength_describer());
    CHECK(larger.layout.blocks[1].program_bits < 64);
    OracleBuild big = build_oracle(zeros_source(), {4, 16, 400, 176400}, runlength_describer());
    CHECK(big.layout.blocks[3].program_bits < 50);
    Rational last_rate(BigInt(big.layout.blocks[3].program_bits), BigInt(176400));
    CHECK(last_rate < Rational(1, 1000));
}

TEST_CASE("oracle decode round-trips at and between checkpoints") {
    BitSource X = seeded_source(11);
    OracleBuild built = build_oracle(X, {4, 25, 900}, literal_describer());
    BitSource Y = word_source(built.oracle);

    for (std::uint64_t n = 1; n <= 900; n += (n < 30 ? 1 : 37)) {
        OracleDecode run = decode_oracle(Y, n);
        CHECK(run.prefix == X.prefix(static_cast<std::size_t>(n)));
        CHECK(run.used == run.answers.size());
    }
    OracleDecode full = decode_oracle(Y, 900);
    CHECK(full.used <= built.layout.bits_through(3));
    CHECK_THROWS_AS(decode_oracle(Y, 901), RangeError);
}

TEST_CASE("intermediate reads stay inside the raw chunks") {
    BitSource X = seeded_source(5);
    OracleBuild built = build_oracle(X, {4, 25, 900}, literal_describer());
    BitSource Y = word_source(built.oracle);

    // chunk coverage of block i: (m_{i-1}, m_{i-1} + 2^l - 1]
    struct Window {
        std::uint64_t lo, hi;
        std::size_t block;
    };
    std::vector<Window> windows;
    std::uint64_t prev = 0;
    for (std::size_t i = 0; i < built.layout.blocks.size(); ++i) {
        std::uint64_t m = built.layout.blocks[i].checkpoint;
        std::uint64_t coverage = (std::uint64_t{1} << chunks_for(m)) - 1;
        windows.push_back({prev + 1, prev + coverage, i});
        prev = m;
    }
    for (const auto& w : windows) {
        for (std::uint64_t n = w.lo; n <= w.hi; ++n) {
            OracleDecode run = decode_oracle(Y, n);
            // never touches the program of its own block
            CHECK(run.used <= built.layout.bits_through(w.block) +
                                  built.layout.blocks[w.block].raw_bits);
            CHECK(run.prefix == X.prefix(static_cast<std::size_t>(n)));
        }
    }
}

TEST_CASE("oracle use accounting chain") {
    for (auto describer : {literal_describer(), runlength_describer(), lz_describer()}) {
        for (const BitSource& X : {seeded_source(100), zeros_source()}) {
            OracleBuild built = build_oracle(X, {4, 25, 900}, describer);
            Rational s = built.layout.max_rate();
            BitSource Y = word_source(built.oracle);
            for (std::size_t i = 1; i <= built.layout.blocks.size(); ++i) {
                std::uint64_t m = built.layout.blocks[i - 1].checkpoint;
                OracleDecode run = decode_oracle(Y, m);
                CHECK(run.used <= built.layout.bits_through(i));
                // bits_through(i) <= s*m_i + 5*sqrt(m_i)
                Rational excess = Rational(BigInt(built.layout.bits_through(i))) -
                                  s * Rational(BigInt(m));
                CHECK(within_five_sqrt(excess, m));
            }
        }
    }
}

TEST_CASE("schedule growth keeps prefix sums under the square root") {
    auto chosen = checkpoint_schedule({4, 25, 900, 1000000});
    std::uint64_t sum = 0;
    for (auto m : chosen) {
        CHECK(BigInt(sum) * BigInt(sum) <= BigInt(m));
        sum += m;
    }
}

TEST_CASE("replay programs reproduce recorded runs") {
    BitSource X = seeded_source(21);
    OracleBuild built = build_oracle(X, {4, 25}, literal_describer());
    OracleDecode run = decode_oracle(word_source(built.oracle), 25);

    BitString replay = reduction_to_description(run);
    CHECK(udec(replay).output == X.prefix(25));

    // deterministic assembly
    CHECK(reduction_to_description(run) == replay);

    // length bound: |replay| - |answers| <= 2 log2 |answers| + 2 log2 n + 24
    double overhead = static_cast<double>(replay.size()) - static_cast<double>(run.answers.size());
    CHECK(overhead <= 2 * std::log2(double(run.answers.size())) + 2 * std::log2(25.0) + 24);
}

TEST_CASE("replay length bound holds across runs") {
    BitSource X = champernowne_source();
    OracleBuild built = build_oracle(X, {9, 100, 12000}, lz_describer());
    for (std::uint64_t n : {2u, 9u, 55u, 100u, 7000u, 12000u}) {
        OracleDecode run = decode_oracle(word_source(built.oracle), n);
        BitString replay = reduction_to_description(run);
        CHECK(udec(replay).output == X.prefix(static_cast<std::size_t>(n)));
        double overhead =
            static_cast<double>(replay.size()) - static_cast<double>(run.answers.size());
        CHECK(overhead <=
              2 * std::log2(double(run.answers.size()) + 1) + 2 * std::log2(double(n)) + 24);
    }
}

TEST_CASE("pipeline on a compressible source reaches a low composed rate") {
    PipelineResult r =
        run_pipeline(zeros_source(), checkpoint_schedule({4, 16, 400, 176400}),
                     runlength_describer(), uniform());
    REQUIRE(!r.checkpoints.empty());
    const auto& last = r.checkpoints.back();
    CHECK(last.checkpoint == 176400);
    CHECK(last.ratio <= 0.1);
    // the embedded oracle is tiny compared to the data it reproduces
    CHECK(r.codeword.size() < 1000);
}

TEST_CASE("pipeline on incompressible input stays near rate one") {
    PipelineResult r =
        run_pipeline(seeded_source(42), checkpoint_schedule({4, 16, 400, 176400}),
                     literal_describer(), uniform());
    const auto& last = r.checkpoints.back();
    CHECK(last.checkpoint == 176400);
    CHECK(last.ratio >= 1.0);
    CHECK(last.ratio <= 1.3);
}

TEST_CASE("layout sidecar round-trips") {
    OracleBuild built = build_oracle(seeded_source(8), {4, 25}, literal_describer());
    auto path = (std::filesystem::temp_directory_path() / "lpc_layout_test.json").string();
    write_layout_json(path, built.layout);
    OracleLayout back = read_layout_json(path);
    CHECK(back.describer == built.layout.describer);
    REQUIRE(back.blocks.size() == built.layout.blocks.size());
    for (std::size_t i = 0; i < back.blocks.size(); ++i) {
        CHECK(back.blocks[i].checkpoint == built.layout.blocks[i].checkpoint);
        CHECK(back.blocks[i].raw_bits == built.layout.blocks[i].raw_bits);
        CHECK(back.blocks[i].program_bits == built.layout.blocks[i].program_bits);
    }
    std::remove(path.c_str());
}
