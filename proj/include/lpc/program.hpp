#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "lpc/prefix_code.hpp"

namespace lpc {

/// Self-delimiting program words executed by a fixed tiny VM. Layout:
/// prefix-encoded 2-bit method tag, then a per-method payload. Every program
/// deterministically reproduces exactly one bit word, and the set of valid
/// programs is prefix-free.
enum class Method : int {
    Literal = 0,    // payload: enc(x)
    RunLength = 1,  // payload: enc(count digits) . enc(unit)
    Lz = 2,         // payload: enc(token count digits) . partial flag . tokens
    Replay = 3,     // payload: enc(machine id) . enc(n digits) . enc(answer bits)
};

BitString literal_program(const BitString& x);
BitString runlength_program(const BigInt& count, const BitString& unit);
BitString lz_program(const BitString& x);
BitString replay_program(std::uint64_t machine_id, std::uint64_t n, const BitString& answers);

struct UdecResult {
    BitString output;
    std::size_t consumed = 0;
};

/// Runs the program at `offset`. Replay programs re-execute the registered
/// block-oracle decoder (machine id 0), feeding the recorded answer bits as
/// the oracle; any other id is rejected. Throws DecodeError on unknown tags
/// or malformed payloads.
UdecResult udec(const BitString& stream, std::size_t offset = 0);

/// Same, consuming exactly one program from a reader.
UdecResult udec_stream(BitReader& reader);

/// A total rule producing a self-delimiting description of any word;
/// udec(describe(x)) == x always. Description lengths stand in for the
/// compressibility of the word.
class Describer {
public:
    Describer(std::string name, std::function<BitString(const BitString&)> fn)
        : name_(std::move(name)), fn_(std::move(fn)) {}

    const std::string& name() const { return name_; }
    BitString describe(const BitString& x) const { return fn_(x); }

private:
    std::string name_;
    std::function<BitString(const BitString&)> fn_;
};

Describer literal_describer();
/// Shortest-period run-length description; degenerates to count 1 on
/// aperiodic words.
Describer runlength_describer();
/// Incremental dictionary parse (LZ78-style tokens).
Describer lz_describer();

/// "literal" | "runlength" | "lz".
Describer parse_describer(const std::string& name);

} // namespace lpc
