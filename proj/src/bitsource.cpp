#include "lpc/bitsource.hpp"

#include <array>

#include "lpc/bitio.hpp"

namespace lpc {

namespace {

struct ConstSource final : BitSource::Impl {
    int bit;
    explicit ConstSource(int b) : bit(b) {}
    int read(std::uint64_t) const override { return bit; }
    std::string describe() const override { return bit ? "ones" : "zeros"; }
};

struct SeededSource final : BitSource::Impl {
    std::uint64_t seed;
    explicit SeededSource(std::uint64_t s) : seed(s) {}
    int read(std::uint64_t i) const override { return seeded_bit_at(seed, i); }
    std::string describe() const override { return "seeded:" + std::to_string(seed); }
};

struct WordSource final : BitSource::Impl {
    BitString word;
    explicit WordSource(BitString w) : word(std::move(w)) {}
    int read(std::uint64_t i) const override { return word[static_cast<std::size_t>(i)]; }
    std::optional<std::uint64_t> length() const override { return word.size(); }
    std::string describe() const override { return "word[" + std::to_string(word.size()) + "]"; }
};

// Cumulative bit count through all numbers of bit-length <= l is
// (l-1)*2^l + 1.
std::uint64_t champ_cumulative(unsigned l) {
    if (l == 0) return 0;
    return (static_cast<std::uint64_t>(l) - 1) * (1ULL << l) + 1;
}

struct ChampernowneSource final : BitSource::Impl {
    int read(std::uint64_t i) const override {
        unsigned l = 1;
        while (champ_cumulative(l) <= i) ++l;
        std::uint64_t offset = i - champ_cumulative(l - 1);
        std::uint64_t number = (1ULL << (l - 1)) + offset / l;
        unsigned pos = static_cast<unsigned>(offset % l);  // 0 = leading bit
        return static_cast<int>((number >> (l - 1 - pos)) & 1u);
    }
    std::string describe() const override { return "champernowne"; }
};

struct OscillatingSource final : BitSource::Impl {
    int read(std::uint64_t i) const override {
        if (i == 0) return 0;
        std::uint64_t fact = 1;
        unsigned k = 1;
        // find k with k! <= i < (k+1)!
        while (fact * (k + 1) <= i) {
            fact *= (k + 1);
            ++k;
        }
        return k % 2 == 1 ? 1 : 0;
    }
    std::string describe() const override { return "oscillating"; }
};

} // namespace

BitSource zeros_source() { return BitSource(std::make_shared<ConstSource>(0)); }
BitSource ones_source() { return BitSource(std::make_shared<ConstSource>(1)); }
BitSource seeded_source(std::uint64_t seed) {
    return BitSource(std::make_shared<SeededSource>(seed));
}
BitSource word_source(BitString word) {
    return BitSource(std::make_shared<WordSource>(std::move(word)));
}
BitSource champernowne_source() { return BitSource(std::make_shared<ChampernowneSource>()); }
BitSource oscillating_source() { return BitSource(std::make_shared<OscillatingSource>()); }

BitString champernowne(std::size_t n) {
    // Sequential generation; random access via the source would redo the
    // block search per bit.
    BitString out;
    std::uint64_t number = 1;
    while (out.size() < n) {
        std::uint64_t v = number;
        unsigned l = 0;
        for (std::uint64_t t = v; t; t >>= 1) ++l;
        for (unsigned p = 0; p < l && out.size() < n; ++p)
            out.push_back(static_cast<int>((v >> (l - 1 - p)) & 1u));
        ++number;
    }
    return out;
}

BitString oscillating_bits(std::size_t n) {
    BitString out;
    if (n == 0) return out;
    out.push_back(0);
    std::uint64_t fact = 1;  // k!
    unsigned k = 1;
    while (out.size() < n) {
        std::uint64_t next = fact * (k + 1);
        int bit = k % 2 == 1 ? 1 : 0;
        for (std::uint64_t i = fact; i < next && out.size() < n; ++i) out.push_back(bit);
        fact = next;
        ++k;
    }
    return out;
}

BitSource parse_source(const std::string& text) {
    if (text == "zeros") return zeros_source();
    if (text == "ones") return ones_source();
    if (text == "champernowne") return champernowne_source();
    if (text == "oscillating") return oscillating_source();
    if (text.rfind("seeded:", 0) == 0) {
        return seeded_source(std::stoull(text.substr(7)));
    }
    return word_source(read_bit_file(text));
}

} // namespace lpc
