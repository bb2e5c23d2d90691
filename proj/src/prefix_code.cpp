#include "lpc/prefix_code.hpp"

namespace lpc {

BitString binary_digits(const BigInt& n) {
    if (n < 0) throw ParameterError("binary digits: negative value");
    BitString out;
    if (n == 0) return out;
    unsigned bits = 0;
    for (BigInt t = n; t > 0; t >>= 1) ++bits;
    for (unsigned p = 0; p < bits; ++p)
        out.push_back(static_cast<int>((n >> (bits - 1 - p)) & 1));
    return out;
}

BigInt digits_value(const BitString& w) {
    BigInt v = 0;
    for (int b : w) v = (v << 1) | b;
    return v;
}

BitString prefix_encode(const BitString& w) {
    BitString out;
    for (int b : binary_digits(BigInt(w.size()))) {
        out.push_back(b);
        out.push_back(b);
    }
    out.push_back(0);
    out.push_back(1);
    out.append(w);
    return out;
}

BitString prefix_decode_stream(BitReader& reader) {
    BitString length_bits;
    for (;;) {
        int a = reader.next();
        int b = reader.next();
        if (a == b) {
            length_bits.push_back(a);
        } else if (a == 0 && b == 1) {
            break;
        } else {
            throw DecodeError("prefix code: malformed length header pair '10'");
        }
    }
    if (!length_bits.empty() && length_bits[0] == 0)
        throw DecodeError("prefix code: length has a leading zero digit");
    BigInt len = digits_value(length_bits);
    BitString payload;
    for (BigInt t = 0; t < len; ++t) payload.push_back(reader.next());
    return payload;
}

std::pair<BitString, std::size_t> prefix_decode(const BitString& stream, std::size_t offset) {
    StringBitReader reader(stream, offset);
    try {
        BitString payload = prefix_decode_stream(reader);
        return {std::move(payload), static_cast<std::size_t>(reader.bits_read())};
    } catch (const RangeError&) {
        throw DecodeError("prefix code: stream ended inside codeword");
    }
}

} // namespace lpc
