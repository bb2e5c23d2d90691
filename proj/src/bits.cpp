#include "lpc/bits.hpp"

namespace lpc {

BitString BitString::from_string(std::string_view s) {
    BitString r;
    r.bits_.reserve(s.size());
    for (char c : s) {
        if (c == '0') r.bits_.push_back(0);
        else if (c == '1') r.bits_.push_back(1);
        else throw ParseError(std::string("bit string: unexpected character '") + c + "'");
    }
    return r;
}

BitString BitString::zeros(std::size_t n) {
    return BitString(std::vector<std::uint8_t>(n, 0));
}

BitString BitString::ones(std::size_t n) {
    return BitString(std::vector<std::uint8_t>(n, 1));
}

BitString BitString::slice(std::size_t from, std::size_t to) const {
    if (from > to || to > bits_.size()) throw BoundsError("slice out of range");
    return BitString(std::vector<std::uint8_t>(bits_.begin() + from, bits_.begin() + to));
}

std::string BitString::to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (auto b : bits_) s.push_back(b ? '1' : '0');
    return s;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

int seeded_bit_at(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t word = splitmix64(seed ^ splitmix64(index >> 6));
    return static_cast<int>((word >> (index & 63)) & 1u);
}

BitString seeded_bits(std::uint64_t seed, std::size_t n) {
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < n; ++i)
        bits[i] = static_cast<std::uint8_t>(seeded_bit_at(seed, i));
    return BitString(std::move(bits));
}

} // namespace lpc
