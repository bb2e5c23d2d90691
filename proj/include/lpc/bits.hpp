#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lpc/errors.hpp"

namespace lpc {

/// Finite word over {0,1}. Indexing is 0-based; slicing is half-open
/// [from, to). Sources that quote the inclusive convention x[n:m] map to
/// slice(n, m+1) -- that adapter is applied exactly once, at the call sites
/// that need it, never inside this class.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

    /// From text of '0'/'1' characters.
    static BitString from_string(std::string_view s);
    /// n zero bits.
    static BitString zeros(std::size_t n);
    /// n one bits.
    static BitString ones(std::size_t n);

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    int operator[](std::size_t i) const { return bits_[i]; }
    int at(std::size_t i) const {
        if (i >= bits_.size()) throw BoundsError("bit index out of range");
        return bits_[i];
    }

    void push_back(int bit) { bits_.push_back(bit ? 1 : 0); }
    void append(const BitString& other) {
        bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
    }

    BitString slice(std::size_t from, std::size_t to) const;

    friend BitString operator+(const BitString& a, const BitString& b) {
        BitString r = a;
        r.append(b);
        return r;
    }

    bool operator==(const BitString& other) const = default;

    std::string to_string() const;

    auto begin() const { return bits_.begin(); }
    auto end() const { return bits_.end(); }

private:
    std::vector<std::uint8_t> bits_;
};

/// w[from..to), bounds-checked.
inline BitString slice(const BitString& w, std::size_t from, std::size_t to) {
    return w.slice(from, to);
}

/// Deterministic pseudorandom word. Bit i is drawn from a splitmix64 stream
/// keyed by the seed, so the mapping (seed, i) -> bit is a pure function:
/// identical across calls, runs and platforms, and prefix-consistent in n.
BitString seeded_bits(std::uint64_t seed, std::size_t n);

/// Random access into the same stream: bit i of seeded_bits(seed, i+1).
int seeded_bit_at(std::uint64_t seed, std::uint64_t index);

} // namespace lpc
