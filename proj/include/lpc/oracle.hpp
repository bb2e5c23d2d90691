#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpc/bitsource.hpp"
#include "lpc/codec.hpp"
#include "lpc/program.hpp"

namespace lpc {

/// Per-checkpoint accounting of a block oracle Y = v_1.p_1.v_2.p_2...,
/// where v_i carries flagged raw chunks covering the start of block i and
/// p_i is a program reproducing the whole prefix through checkpoint i.
struct OracleBlock {
    std::uint64_t checkpoint = 0;  // m_i
    std::size_t raw_bits = 0;      // |v_i|
    std::size_t program_bits = 0;  // |p_i|
};

struct OracleLayout {
    std::vector<OracleBlock> blocks;
    std::string describer;

    /// max over blocks of |p_i| / m_i, the measured description rate s.
    Rational max_rate() const;
    /// sum over blocks j <= i of |v_j| + |p_j|.
    std::uint64_t bits_through(std::size_t i) const;
    std::uint64_t total_bits() const { return bits_through(blocks.size()); }
};

/// Greedy checkpoint selection: m_1 is the least candidate, then each m_i is
/// the least candidate at least (sum of earlier checkpoints)^2. Stops when
/// candidates run out; throws ScheduleError when none can be selected.
/// The squared growth guarantees sqrt(m_i) >= m_1 + ... + m_{i-1}.
std::vector<std::uint64_t> checkpoint_schedule(const std::vector<std::uint64_t>& candidates);

struct OracleBuild {
    BitString oracle;  // Y
    OracleLayout layout;
};

/// Lays out Y block-wise. Block i starts with v_i: a 0 flag then a chunk of
/// 2^j source bits, for j = 0..l_i-1 with l_i = floor(log2(m_i)/2), then a
/// closing 1 flag. Chunk j holds X[m_{i-1}+2^j-1 .. m_{i-1}+2^{j+1}-1), so
/// the chunks cover [m_{i-1}, m_{i-1}+2^{l_i}-1) contiguously and
/// |v_i| = 2^{l_i} + l_i <= 2*sqrt(m_i). After the chunks comes the
/// describer's program for the full prefix X restricted to m_i.
OracleBuild build_oracle(const BitSource& X, const std::vector<std::uint64_t>& schedule,
                         const Describer& describer);

struct OracleDecode {
    BitString prefix;          // first n bits of X
    std::uint64_t used = 0;    // oracle bits read
    BitString answers;         // those bits, in read order
    std::uint64_t machine_id = 0;
    std::uint64_t n = 0;
};

/// Streams Y without any layout knowledge: a 0 flag copies the next 2^j raw
/// bits into a chunk buffer, a 1 flag runs a program and replaces the
/// decoded prefix (clearing the buffer). Returns as soon as n bits are
/// known. Reads are strictly sequential, so `used` equals the rightmost
/// position read plus one. Throws RangeError past the encoded range.
OracleDecode decode_oracle(const BitSource& Y, std::uint64_t n);

/// Packages a recorded decoder run as a self-delimiting replay program;
/// running it re-executes the block decoder against the recorded answers.
/// Output length exceeds |answers| by at most
/// 2*log2(|answers|) + 2*log2(n) + 24 bits.
BitString reduction_to_description(const OracleDecode& run);

/// Machine 0 of the replay registry: the block-oracle decoder fed by a
/// finite answer word.
BitString replay_block_decoder(std::uint64_t n, const BitString& answers);

void write_layout_json(const std::string& path, const OracleLayout& layout);
OracleLayout read_layout_json(const std::string& path);

struct DecodeReportRow {
    std::uint64_t n = 0;
    std::uint64_t used = 0;
    double ratio = 0.0;
};

/// CSV columns: n, used, ratio.
void write_decode_report_csv(const std::string& path, const std::vector<DecodeReportRow>& rows);

struct PipelineCheckpoint {
    std::uint64_t checkpoint = 0;    // m_i
    std::uint64_t oracle_bits = 0;   // bits of Y the block decoder touches
    std::uint64_t composed_use = 0;  // codeword bits needed for those Y bits
    double ratio = 0.0;              // composed_use / checkpoint
};

struct PipelineResult {
    BitString codeword;  // the embedded oracle
    OracleLayout layout;
    CodewordTrace trace;
    std::vector<PipelineCheckpoint> checkpoints;
};

/// Composition of the two reductions: builds the block oracle Y for X, embeds
/// Y as a codeword via the stage codec under d, and reports, per checkpoint,
/// how many codeword bits suffice to reproduce X up to it. The round trip
/// through both layers is verified before returning.
PipelineResult run_pipeline(const BitSource& X, const std::vector<std::uint64_t>& schedule,
                            const Describer& describer, const Martingale& d);

} // namespace lpc
