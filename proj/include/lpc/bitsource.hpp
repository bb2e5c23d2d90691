#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "lpc/bits.hpp"

namespace lpc {

/// A deterministic, randomly addressable bit sequence. Infinite generators
/// report no length; finite sources throw RangeError past the end. Values are
/// immutable, so copies share state and are safe to read concurrently.
class BitSource {
public:
    struct Impl {
        virtual ~Impl() = default;
        virtual int read(std::uint64_t index) const = 0;
        virtual std::optional<std::uint64_t> length() const { return std::nullopt; }
        virtual std::string describe() const = 0;
    };

    explicit BitSource(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    int read(std::uint64_t index) const {
        auto len = impl_->length();
        if (len && index >= *len) throw RangeError("bit source: read past end");
        return impl_->read(index);
    }

    BitString prefix(std::size_t n) const {
        BitString r;
        for (std::size_t i = 0; i < n; ++i) r.push_back(read(i));
        return r;
    }

    std::optional<std::uint64_t> length() const { return impl_->length(); }
    std::string describe() const { return impl_->describe(); }

private:
    std::shared_ptr<const Impl> impl_;
};

BitSource zeros_source();
BitSource ones_source();
BitSource seeded_source(std::uint64_t seed);
BitSource word_source(BitString word);

/// Concatenation of the binary expansions of 1, 2, 3, ... -- the standard
/// base-2 normal sequence used as a normal-input witness.
BitSource champernowne_source();
BitString champernowne(std::size_t n);

/// Bit 0 is 0; positions in [k!, (k+1)!) are all ones for odd k and all
/// zeroes for even k. The ones-frequency of prefixes oscillates between
/// limits 0 and 1, so it has no limiting symbol frequency.
BitSource oscillating_source();
BitString oscillating_bits(std::size_t n);

/// Parses "seeded:<n>", "zeros", "ones", "champernowne", "oscillating",
/// or a path to a bit file.
BitSource parse_source(const std::string& text);

} // namespace lpc
