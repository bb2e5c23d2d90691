#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "lpc/bitio.hpp"
#include "lpc/bits.hpp"
#include "lpc/bitsource.hpp"
#include "lpc/rational.hpp"

using namespace lpc;

namespace {

// Small deterministic generator for property tests.
struct Gen {
    std::uint64_t state;
    explicit Gen(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t x = state;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    Rational rational() {
        std::int64_t den = range(1, 1000);
        return Rational(range(-1000, 1000), den);
    }
};

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("rational construction reduces and normalizes") {
    CHECK(Rational(4, 8) == Rational(1, 2));
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK(Rational(3, -6).denominator() == 2);
    CHECK(Rational(3, -6).numerator() == -1);
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(0, 7).denominator() == 1);
    CHECK_THROWS_AS(Rational(1, 0), ParameterError);
}

TEST_CASE("rational string parsing") {
    CHECK(Rational::from_string("3/4") == Rational(3, 4));
    CHECK(Rational::from_string("-3/6") == Rational(-1, 2));
    CHECK(Rational::from_string("7") == Rational(7));
    CHECK(Rational::from_string("0.01") == Rational(1, 100));
    CHECK(Rational::from_string("-0.5") == Rational(-1, 2));
    CHECK_THROWS_AS(Rational::from_string("x/y"), ParseError);
    CHECK_THROWS_AS(Rational::from_string("1/0"), ParameterError);
}

TEST_CASE("rational field algebra is exact") {
    Gen gen(2024);
    for (int i = 0; i < 200; ++i) {
        Rational a = gen.rational(), b = gen.rational();
        CHECK((a + b) - b == a);
        CHECK(a * b == b * a);
        if (!a.is_zero()) CHECK(a * (Rational(1) / a) == Rational(1));
        // trichotomy
        int relations = (a < b) + (a == b) + (a > b);
        CHECK(relations == 1);
    }
}

TEST_CASE("rational floor and pow2") {
    CHECK(Rational(7, 2).floor() == 3);
    CHECK(Rational(-7, 2).floor() == -4);
    CHECK(Rational(6, 3).floor() == 2);
    CHECK(Rational::pow2(3) == Rational(8));
    CHECK(Rational::pow2(-3) == Rational(1, 8));
    CHECK(Rational::pow2(0) == Rational(1));
}

TEST_CASE("bit string slicing") {
    BitString w = BitString::from_string("0110");
    CHECK(w.slice(1, 3).to_string() == "11");
    CHECK(w.slice(2, 2).to_string() == "");
    CHECK(w.slice(0, 4) == w);
    CHECK_THROWS_AS(w.slice(2, 5), BoundsError);
    CHECK_THROWS_AS(w.slice(3, 2), BoundsError);
}

TEST_CASE("slice concatenation rebuilds the word") {
    Gen gen(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t len = static_cast<std::size_t>(gen.range(0, 64));
        BitString w = seeded_bits(gen.next(), len);
        std::size_t cut = static_cast<std::size_t>(gen.range(0, static_cast<std::int64_t>(len)));
        CHECK(w.slice(0, cut) + w.slice(cut, len) == w);
    }
}

TEST_CASE("seeded bits are deterministic and prefix consistent") {
    CHECK(seeded_bits(42, 0).size() == 0);
    CHECK(seeded_bits(7, 64) == seeded_bits(7, 64));
    BitString shorter = seeded_bits(42, 8), longer = seeded_bits(42, 16);
    CHECK(longer.slice(0, 8) == shorter);
    // different seeds disagree somewhere on a long prefix
    CHECK(seeded_bits(1, 128) != seeded_bits(2, 128));
}

TEST_CASE("sources support random access and prefixes") {
    BitSource s = seeded_source(42);
    BitString p = s.prefix(100);
    for (std::size_t i = 0; i < 100; ++i) CHECK(s.read(i) == p[i]);
    CHECK_FALSE(s.length().has_value());

    BitSource w = word_source(BitString::from_string("0110"));
    CHECK(w.length() == 4);
    CHECK(w.read(3) == 0);
    CHECK_THROWS_AS(w.read(4), RangeError);
}

TEST_CASE("champernowne sequence") {
    CHECK(champernowne(10).to_string() == "1101110010");
    CHECK(champernowne(0).size() == 0);
    // prefix consistency between generator and random-access source
    BitString p = champernowne(300);
    BitSource src = champernowne_source();
    for (std::size_t i = 0; i < 300; ++i) CHECK(src.read(i) == p[i]);
}

TEST_CASE("oscillating sequence follows the factorial blocks") {
    CHECK(oscillating_bits(6).to_string() == "010000");
    // block [5040, 40320) is all ones
    BitString x = oscillating_bits(40320);
    std::uint64_t block_ones = 0;
    for (std::size_t i = 5040; i < 40320; ++i) block_ones += x[i];
    CHECK(block_ones == 40320 - 5040);
    // brute-force ones count up to 9!
    BitString y = oscillating_bits(362880);
    std::uint64_t ones = 0;
    for (int b : y) ones += b;
    CHECK(ones == 35899);
    // source and generator agree
    BitSource src = oscillating_source();
    for (std::size_t i : {0u, 1u, 2u, 5u, 6u, 23u, 24u, 5039u, 5040u})
        CHECK(src.read(i) == y[i]);
}

TEST_CASE("ascii and packed bit files round-trip") {
    Gen gen(99);
    for (std::size_t len : {std::size_t{0}, std::size_t{1}, std::size_t{7}, std::size_t{8},
                            std::size_t{9}, std::size_t{200}}) {
        BitString bits = seeded_bits(gen.next(), len);
        std::string ap = temp_path("lpc_ascii_test.bits");
        std::string pp = temp_path("lpc_packed_test.bits");
        write_bits_ascii(ap, bits);
        write_bits_packed(pp, bits);
        CHECK(read_bits_ascii(ap) == bits);
        CHECK(read_bits_packed(pp) == bits);
        CHECK(read_bit_file(ap) == bits);
        CHECK(read_bit_file(pp) == bits);
        std::remove(ap.c_str());
        std::remove(pp.c_str());
    }
}

TEST_CASE("checksum distinguishes length and single flips") {
    BitString a = BitString::from_string("0101");
    BitString b = BitString::from_string("01010");
    CHECK(bit_checksum(a) != bit_checksum(b));
    BitString c = BitString::from_string("0111");
    CHECK(bit_checksum(a) != bit_checksum(c));
    CHECK(bit_checksum(a) == bit_checksum(BitString::from_string("0101")));
}

TEST_CASE("sidecar round-trips") {
    std::string path = temp_path("lpc_sidecar_test.bits");
    Sidecar s{12, 34, 56, 78};
    write_sidecar(path, s);
    CHECK(sidecar_exists(path));
    Sidecar r = read_sidecar(path);
    CHECK(r.payload_bits == 12);
    CHECK(r.payload_checksum == 34);
    CHECK(r.codeword_bits == 56);
    CHECK(r.codeword_checksum == 78);
    std::remove((path + ".sum").c_str());
}
