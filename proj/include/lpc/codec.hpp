#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lpc/bitsource.hpp"
#include "lpc/martingale.hpp"

namespace lpc {

/// Stage parameters. Stage i consumes i payload bits and emits a block of
/// block_len bits chosen so the reference strategy's capital grows by a
/// factor strictly below delta across the block.
struct StageParams {
    std::size_t index = 0;     // i >= 1
    Rational delta;            // 1 + 1/i^2
    std::size_t block_len = 0; // ceil(i + log2(1 + i^2))

    static StageParams for_stage(std::size_t i);
};

/// ceil(log2(m)) for m >= 1, computed in integers.
unsigned ceil_log2(const BigInt& m);

/// Cumulative payload bits through stage i: i(i+1)/2.
std::uint64_t payload_cumulative(std::size_t i);
/// Cumulative codeword bits through stage i: sum of block lengths.
std::uint64_t codeword_cumulative(std::size_t i);
/// Least stage i with payload_cumulative(i) >= n (n >= 1).
std::size_t stage_covering(std::uint64_t n);
/// Exact product of (1 + 1/j^2) for j = 1..i; every boundary capital stays
/// strictly below it.
Rational capital_bound(std::size_t i);
/// sqrt(2n) * log2(2n); codeword_cumulative(i) stays within this of
/// payload_cumulative(i) at every stage boundary.
double redundancy_margin(std::uint64_t n);

struct StageRecord {
    std::size_t stage = 0;
    Rational delta;
    std::size_t block_len = 0;
    std::uint64_t payload_cum = 0;   // n_i
    std::uint64_t codeword_cum = 0;  // k_i
    BitString input;                 // payload consumed this stage (padded in the last)
    BitString block;                 // emitted/decoded block
    Rational capital;                // capital at the stage boundary
    std::uint64_t evals = 0;         // capital queries made this stage
    std::size_t padding = 0;         // zero bits appended to reach length i
};

struct CodewordTrace {
    std::vector<StageRecord> stages;
    std::uint64_t requested_bits = 0;
    std::uint64_t evals = 0;

    const StageRecord& last() const { return stages.back(); }
};

/// Per-step hook (stage, step, lower bound for the 0-branch); lets tests
/// assert that encoder and decoder derive identical exact counts.
using StepObserver = std::function<void(std::size_t, std::size_t, const Rational&)>;

/// Numeric index of a payload word: big-endian value plus 1, in
/// [1, 2^|x|]. Rejects the empty word.
BigInt value_index(const BitString& x);
/// Inverse: the width-bit word whose value_index is val.
BitString index_to_bits(const BigInt& val, std::size_t width);

/// Half-open-from-the-left interval (start, end] of candidate payload
/// values. The decoder narrows one of these per block bit; a valid codeword
/// leaves exactly one integer inside.
struct Interval {
    Rational start;
    Rational end;

    BigInt integer_count() const {
        BigInt lo = start.floor(), hi = end.floor();
        return hi > lo ? hi - lo : BigInt(0);
    }
    /// The unique integer when integer_count() == 1.
    BigInt the_integer() const { return end.floor(); }
};

/// Exact lower bound on the number of ell-length extensions of y after w
/// that keep d's capital below delta * d(w):
///
///   N(w, y, ell, delta) = 2^(ell - |y|) * (1 - d(wy) / (d(w) * delta))
///
/// May be negative or zero off the chosen path; additive over sibling
/// branches: N(w, y0) + N(w, y1) = N(w, y) exactly.
Rational count_bound(const Martingale& d, const BitString& w, const BitString& y,
                     std::size_t ell, const Rational& delta);

/// One encoding stage: embeds x (|x| = i >= 1) into a block of length
/// block_len by binary search over the count bounds. The emitted block is a
/// losing path: d(w.block) < delta_i * d(w) exactly.
BitString encode_stage(const Martingale& d, const BitString& w, const BitString& x);

/// One decoding stage: narrows the interval (0, 2^i] per block bit and
/// returns the unique payload word, or throws InvalidCodewordError when no
/// unique word exists (corrupted or foreign codeword).
BitString decode_stage(const Martingale& d, const BitString& w, const BitString& block,
                       std::size_t i);

struct EncodeResult {
    BitString codeword;
    CodewordTrace trace;
};

struct DecodeResult {
    BitString payload;
    std::uint64_t oracle_use = 0;  // distinct codeword positions read
    CodewordTrace trace;
};

/// Embeds the first n bits of X stage-wise. The final stage pads the payload
/// with zero bits up to the stage size; the trace records the padding.
/// Requires a strictly positive martingale.
EncodeResult encode(const Martingale& d, const BitSource& X, std::uint64_t n,
                    const StepObserver& observer = nullptr);

/// Recovers the first n payload bits from a codeword produced with the same
/// martingale, reporting how many codeword bits were read.
DecodeResult decode(const Martingale& d, const BitSource& R, std::uint64_t n,
                    const StepObserver& observer = nullptr);

/// CSV columns: stage, delta_num, delta_den, ell, n_i, k_i, capital_num,
/// capital_den, evals.
void write_codeword_trace_csv(const std::string& path, const CodewordTrace& trace);

} // namespace lpc
