#pragma once

#include <cstdint>
#include <utility>

#include "lpc/bits.hpp"
#include "lpc/bitsource.hpp"
#include "lpc/rational.hpp"

namespace lpc {

/// Sequential consumer with an exact count of bits taken; the stream layer
/// reads through one of these so oracle-use accounting is never estimated.
class BitReader {
public:
    virtual ~BitReader() = default;
    int next() {
        int b = read_impl();
        ++count_;
        return b;
    }
    std::uint64_t bits_read() const { return count_; }

private:
    virtual int read_impl() = 0;
    std::uint64_t count_ = 0;
};

class StringBitReader final : public BitReader {
public:
    explicit StringBitReader(const BitString& bits, std::size_t offset = 0)
        : bits_(&bits), pos_(offset) {}

private:
    int read_impl() override {
        if (pos_ >= bits_->size()) throw DecodeError("bit reader: stream exhausted");
        return (*bits_)[pos_++];
    }
    const BitString* bits_;
    std::size_t pos_;
};

class SourceBitReader final : public BitReader {
public:
    explicit SourceBitReader(const BitSource& source) : source_(source) {}

private:
    int read_impl() override { return source_.read(pos_++); }
    BitSource source_;
    std::uint64_t pos_ = 0;
};

/// Self-delimiting code for bit words. Layout: |w| in binary with every bit
/// doubled, the terminator "01", then w itself. The image is prefix-free and
/// |encoded| = |w| + 2*bitlen(|w|) + 2 <= |w| + 2*log2(|w| + 1) + 4.
BitString prefix_encode(const BitString& w);

/// Reads one codeword from the reader, leaving it positioned just past it.
BitString prefix_decode_stream(BitReader& reader);

/// Convenience over a materialized stream: payload plus bits consumed.
std::pair<BitString, std::size_t> prefix_decode(const BitString& stream, std::size_t offset = 0);

/// Binary digits of n, most significant first; empty for n = 0.
BitString binary_digits(const BigInt& n);
/// Value of a plain big-endian digit string (empty -> 0).
BigInt digits_value(const BitString& w);

} // namespace lpc
