#include "lpc/program.hpp"

#include <map>
#include <optional>
#include <vector>

#include "lpc/oracle.hpp"

namespace lpc {

namespace {

BitString method_tag(Method m) {
    BitString tag;
    int v = static_cast<int>(m);
    tag.push_back((v >> 1) & 1);
    tag.push_back(v & 1);
    return tag;
}

BitString with_tag(Method m, const BitString& payload) {
    BitString out = prefix_encode(method_tag(m));
    out.append(payload);
    return out;
}

} // namespace

BitString literal_program(const BitString& x) {
    return with_tag(Method::Literal, prefix_encode(x));
}

BitString runlength_program(const BigInt& count, const BitString& unit) {
    if (count < 0) throw ParameterError("run length: negative count");
    BitString payload = prefix_encode(binary_digits(count));
    payload.append(prefix_encode(unit));
    return with_tag(Method::RunLength, payload);
}

namespace {

struct LzToken {
    std::size_t prev = 0;
    std::optional<int> bit;
};

std::vector<LzToken> lz_parse(const BitString& x) {
    std::map<std::string, std::size_t> dict{{"", 0}};
    std::vector<LzToken> tokens;
    std::string cur;
    for (int b : x) {
        std::string ext = cur + (b ? '1' : '0');
        auto it = dict.find(ext);
        if (it != dict.end()) {
            cur = std::move(ext);
        } else {
            tokens.push_back({dict.at(cur), b});
            dict.emplace(std::move(ext), dict.size());
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back({dict.at(cur), std::nullopt});
    return tokens;
}

} // namespace

BitString lz_program(const BitString& x) {
    std::vector<LzToken> tokens = lz_parse(x);
    bool partial = !tokens.empty() && !tokens.back().bit.has_value();
    BitString payload = prefix_encode(binary_digits(BigInt(tokens.size())));
    payload.push_back(partial ? 1 : 0);
    for (const auto& t : tokens) {
        payload.append(prefix_encode(binary_digits(BigInt(t.prev))));
        if (t.bit) payload.push_back(*t.bit);
    }
    return with_tag(Method::Lz, payload);
}

BitString replay_program(std::uint64_t machine_id, std::uint64_t n, const BitString& answers) {
    BitString payload = prefix_encode(binary_digits(BigInt(machine_id)));
    payload.append(prefix_encode(binary_digits(BigInt(n))));
    payload.append(prefix_encode(answers));
    return with_tag(Method::Replay, payload);
}

UdecResult udec_stream(BitReader& reader) {
    std::uint64_t start = reader.bits_read();
    BitString tag = prefix_decode_stream(reader);
    if (tag.size() != 2) throw DecodeError("program: malformed method tag");
    int id = (tag[0] << 1) | tag[1];

    BitString output;
    switch (static_cast<Method>(id)) {
        case Method::Literal: {
            output = prefix_decode_stream(reader);
            break;
        }
        case Method::RunLength: {
            BigInt count = digits_value(prefix_decode_stream(reader));
            BitString unit = prefix_decode_stream(reader);
            for (BigInt r = 0; r < count; ++r) output.append(unit);
            break;
        }
        case Method::Lz: {
            BigInt token_count = digits_value(prefix_decode_stream(reader));
            int partial = reader.next();
            std::vector<BitString> phrases{BitString()};
            for (BigInt t = 0; t < token_count; ++t) {
                BigInt prev = digits_value(prefix_decode_stream(reader));
                if (prev >= phrases.size())
                    throw DecodeError("program: LZ token references unknown phrase");
                BitString phrase = phrases[static_cast<std::size_t>(prev)];
                bool last = (t == token_count - 1);
                if (last && partial) {
                    output.append(phrase);
                } else {
                    phrase.push_back(reader.next());
                    output.append(phrase);
                    phrases.push_back(std::move(phrase));
                }
            }
            break;
        }
        case Method::Replay: {
            BigInt machine = digits_value(prefix_decode_stream(reader));
            BigInt n = digits_value(prefix_decode_stream(reader));
            BitString answers = prefix_decode_stream(reader);
            if (machine != 0)
                throw DecodeError("program: machine id " + machine.str() + " is not replayable");
            output = replay_block_decoder(n.convert_to<std::uint64_t>(), answers);
            break;
        }
        default:
            throw DecodeError("program: unknown method tag");
    }
    return {std::move(output), static_cast<std::size_t>(reader.bits_read() - start)};
}

UdecResult udec(const BitString& stream, std::size_t offset) {
    StringBitReader reader(stream, offset);
    return udec_stream(reader);
}

Describer literal_describer() {
    return Describer("literal", [](const BitString& x) { return literal_program(x); });
}

Describer runlength_describer() {
    return Describer("runlength", [](const BitString& x) {
        if (x.empty()) return runlength_program(0, BitString());
        std::size_t n = x.size();
        for (std::size_t p = 1; p <= n; ++p) {
            if (n % p != 0) continue;
            bool periodic = true;
            for (std::size_t j = p; j < n && periodic; ++j)
                if (x[j] != x[j - p]) periodic = false;
            if (periodic) return runlength_program(BigInt(n / p), x.slice(0, p));
        }
        return runlength_program(1, x);  // unreachable: p = n always matches
    });
}

Describer lz_describer() {
    return Describer("lz", [](const BitString& x) { return lz_program(x); });
}

Describer parse_describer(const std::string& name) {
    if (name == "literal") return literal_describer();
    if (name == "runlength") return runlength_describer();
    if (name == "lz") return lz_describer();
    throw ParseError("unknown describer: " + name);
}

} // namespace lpc
