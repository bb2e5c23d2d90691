#include "lpc/codec.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace lpc {

unsigned ceil_log2(const BigInt& m) {
    if (m < 1) throw ParameterError("ceil_log2: argument must be >= 1");
    if (m == 1) return 0;
    BigInt t = m - 1;
    unsigned bits = 0;
    while (t > 0) {
        t >>= 1;
        ++bits;
    }
    return bits;
}

StageParams StageParams::for_stage(std::size_t i) {
    if (i < 1) throw ParameterError("stage index must be >= 1");
    StageParams p;
    p.index = i;
    BigInt sq = BigInt(i) * BigInt(i);
    p.delta = Rational(sq + 1, sq);
    p.block_len = i + ceil_log2(sq + 1);
    return p;
}

std::uint64_t payload_cumulative(std::size_t i) {
    return static_cast<std::uint64_t>(i) * (i + 1) / 2;
}

std::uint64_t codeword_cumulative(std::size_t i) {
    std::uint64_t total = 0;
    for (std::size_t j = 1; j <= i; ++j) total += StageParams::for_stage(j).block_len;
    return total;
}

std::size_t stage_covering(std::uint64_t n) {
    std::size_t i = 1;
    while (payload_cumulative(i) < n) ++i;
    return i;
}

Rational capital_bound(std::size_t i) {
    Rational prod(1);
    for (std::size_t j = 1; j <= i; ++j) {
        BigInt sq = BigInt(j) * BigInt(j);
        prod *= Rational(sq + 1, sq);
    }
    return prod;
}

double redundancy_margin(std::uint64_t n) {
    double two_n = 2.0 * static_cast<double>(n);
    return std::sqrt(two_n) * std::log2(two_n);
}

BigInt value_index(const BitString& x) {
    if (x.empty()) throw ParameterError("value index: empty word");
    BigInt v = 0;
    for (int b : x) v = (v << 1) | b;
    return v + 1;
}

BitString index_to_bits(const BigInt& val, std::size_t width) {
    if (val < 1 || val > (BigInt(1) << width))
        throw ParameterError("index out of range for width");
    BigInt v = val - 1;
    BitString x;
    for (std::size_t p = 0; p < width; ++p) {
        unsigned shift = static_cast<unsigned>(width - 1 - p);
        x.push_back(static_cast<int>((v >> shift) & 1));
    }
    return x;
}

namespace {

Rational bound_from_capitals(const Rational& cap_wy, const Rational& cap_w,
                             const Rational& delta, std::size_t ell, std::size_t y_len) {
    return Rational::pow2(static_cast<long>(ell) - static_cast<long>(y_len)) *
           (Rational(1) - cap_wy / (cap_w * delta));
}

// Shared stage walker: the encoder chooses bits, the decoder replays them.
// `cur` sits at the end of w on entry and at the end of w.block on exit.
struct StageContext {
    Evaluator& cur;
    Rational capital_w;  // d(w), strictly positive
    const StageParams& params;
    const StepObserver& observer;
    std::uint64_t evals = 0;

    Rational zero_branch_bound(std::size_t step, const Rational& delta) {
        Rational cap = cur.child_value(0);
        ++evals;
        return bound_from_capitals(cap, capital_w, delta, params.block_len, step + 1);
    }
};

} // namespace

Rational count_bound(const Martingale& d, const BitString& w, const BitString& y,
                     std::size_t ell, const Rational& delta) {
    if (y.size() > ell) throw ParameterError("count bound: |y| must be <= ell");
    if (!(delta > Rational(1))) throw ParameterError("count bound: delta must exceed 1");
    Rational cap_w = d.eval(w);
    if (!(cap_w > Rational(0)))
        throw PositivityError("count bound: martingale capital is zero at w");
    Rational cap_wy = d.eval(w + y);
    return bound_from_capitals(cap_wy, cap_w, delta, ell, y.size());
}

namespace {

BitString run_encode_stage(StageContext& ctx, const BitString& x) {
    const std::size_t i = ctx.params.index;
    const Rational& delta = ctx.params.delta;
    const BigInt val = value_index(x);

    // At least 2^i losing blocks exist before the first bit is fixed.
    Rational initial = bound_from_capitals(ctx.cur.value(), ctx.capital_w, delta,
                                           ctx.params.block_len, 0);
    if (initial < Rational(BigInt(1) << i))
        throw std::logic_error("stage setup: initial count bound below 2^i");

    Rational left(0);  // cumulative bound of blocks lexicographically below
    Rational val_r{BigInt(val)};
    BitString block;
    for (std::size_t j = 0; j < ctx.params.block_len; ++j) {
        Rational n0 = ctx.zero_branch_bound(j, delta);
        if (ctx.observer) ctx.observer(i, j, n0);
        int bit;
        if (val_r <= left + n0) {
            bit = 0;
        } else {
            bit = 1;
            left += n0;
        }
        block.push_back(bit);
        ctx.cur.advance(bit);

        Rational on_path = bound_from_capitals(ctx.cur.value(), ctx.capital_w, delta,
                                               ctx.params.block_len, j + 1);
        if (!(left < val_r && val_r <= left + on_path))
            throw std::logic_error("stage invariant: value index left the interval");
        if (!(on_path > Rational(0)))
            throw std::logic_error("stage invariant: on-path count bound not positive");
    }

    if (!(ctx.cur.value() < delta * ctx.capital_w))
        throw std::logic_error("stage postcondition: block is not a losing path");
    return block;
}

struct DecodedStage {
    BitString payload;
    BitString block;
};

DecodedStage run_decode_stage(StageContext& ctx, const BitSource& R, std::uint64_t offset) {
    const std::size_t i = ctx.params.index;
    const Rational& delta = ctx.params.delta;

    Interval window{Rational(0), Rational(BigInt(1) << i)};
    BitString block;
    for (std::size_t j = 0; j < ctx.params.block_len; ++j) {
        int bit = R.read(offset + j);
        Rational n0 = ctx.zero_branch_bound(j, delta);
        if (ctx.observer) ctx.observer(i, j, n0);
        if (bit == 0) {
            window.end = window.start + n0;
        } else {
            window.start += n0;
        }
        block.push_back(bit);
        ctx.cur.advance(bit);
    }

    if (window.integer_count() != 1 || window.the_integer() < 1 ||
        window.the_integer() > (BigInt(1) << i))
        throw InvalidCodewordError("stage " + std::to_string(i) +
                                   ": decoded interval has no unique payload value");
    return {index_to_bits(window.the_integer(), i), std::move(block)};
}

Rational stage_start_capital(const Evaluator& cur, std::size_t stage) {
    Rational cap = cur.value();
    if (!(cap > Rational(0)))
        throw PositivityError("codec: martingale capital is zero entering stage " +
                              std::to_string(stage));
    return cap;
}

} // namespace

BitString encode_stage(const Martingale& d, const BitString& w, const BitString& x) {
    if (x.empty()) throw ParameterError("encode stage: payload must be nonempty");
    Evaluator cur = d.evaluator();
    for (int b : w) cur.advance(b);
    StageParams params = StageParams::for_stage(x.size());
    StepObserver none;
    StageContext ctx{cur, stage_start_capital(cur, params.index), params, none};
    return run_encode_stage(ctx, x);
}

BitString decode_stage(const Martingale& d, const BitString& w, const BitString& block,
                       std::size_t i) {
    StageParams params = StageParams::for_stage(i);
    if (block.size() != params.block_len)
        throw ParameterError("decode stage: block length mismatch");
    Evaluator cur = d.evaluator();
    for (int b : w) cur.advance(b);
    StepObserver none;
    StageContext ctx{cur, stage_start_capital(cur, i), params, none};
    return run_decode_stage(ctx, word_source(w + block), w.size()).payload;
}

EncodeResult encode(const Martingale& d, const BitSource& X, std::uint64_t n,
                    const StepObserver& observer) {
    if (n < 1) throw ParameterError("encode: payload length must be >= 1");
    EncodeResult result;
    result.trace.requested_bits = n;

    Evaluator cur = d.evaluator();
    if (d.eval(BitString()) > Rational(1))
        throw ParameterError("encode: initial capital exceeds 1");

    std::uint64_t consumed = 0;
    for (std::size_t i = 1; consumed < n; ++i) {
        StageParams params = StageParams::for_stage(i);
        StageRecord rec;
        rec.stage = i;
        rec.delta = params.delta;
        rec.block_len = params.block_len;

        BitString x;
        for (std::size_t j = 0; j < i; ++j) {
            if (consumed + j < n) {
                x.push_back(X.read(consumed + j));
            } else {
                x.push_back(0);
                ++rec.padding;
            }
        }
        consumed += i;

        StageContext ctx{cur, stage_start_capital(cur, i), params, observer};
        rec.input = x;
        rec.block = run_encode_stage(ctx, x);
        rec.capital = cur.value();
        rec.evals = ctx.evals;
        rec.payload_cum = payload_cumulative(i);
        rec.codeword_cum = codeword_cumulative(i);
        result.codeword.append(rec.block);
        result.trace.evals += ctx.evals;
        result.trace.stages.push_back(std::move(rec));
    }
    return result;
}

DecodeResult decode(const Martingale& d, const BitSource& R, std::uint64_t n,
                    const StepObserver& observer) {
    if (n < 1) throw ParameterError("decode: payload length must be >= 1");
    DecodeResult result;
    result.trace.requested_bits = n;

    Evaluator cur = d.evaluator();
    BitString payload;
    std::uint64_t offset = 0;
    for (std::size_t i = 1; payload.size() < n; ++i) {
        StageParams params = StageParams::for_stage(i);
        StageContext ctx{cur, stage_start_capital(cur, i), params, observer};
        DecodedStage stage = run_decode_stage(ctx, R, offset);
        offset += params.block_len;

        StageRecord rec;
        rec.stage = i;
        rec.delta = params.delta;
        rec.block_len = params.block_len;
        rec.input = stage.payload;
        rec.block = std::move(stage.block);
        rec.capital = cur.value();
        rec.evals = ctx.evals;
        rec.payload_cum = payload_cumulative(i);
        rec.codeword_cum = codeword_cumulative(i);
        payload.append(rec.input);
        result.trace.evals += ctx.evals;
        result.trace.stages.push_back(std::move(rec));
    }

    result.oracle_use = offset;  // reads are sequential, so count = rightmost + 1
    result.payload = payload.slice(0, static_cast<std::size_t>(n));
    return result;
}

void write_codeword_trace_csv(const std::string& path, const CodewordTrace& trace) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ParseError("cannot write file: " + path);
    out << "stage,delta_num,delta_den,ell,n_i,k_i,capital_num,capital_den,evals\n";
    for (const auto& s : trace.stages) {
        out << s.stage << "," << s.delta.numerator().str() << ","
            << s.delta.denominator().str() << "," << s.block_len << "," << s.payload_cum
            << "," << s.codeword_cum << "," << s.capital.numerator().str() << ","
            << s.capital.denominator().str() << "," << s.evals << "\n";
    }
}

} // namespace lpc
