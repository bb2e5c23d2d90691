#include "lpc/oracle.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lpc {

Rational OracleLayout::max_rate() const {
    Rational best(0);
    for (const auto& b : blocks) {
        Rational rate(BigInt(b.program_bits), BigInt(b.checkpoint));
        if (rate > best) best = rate;
    }
    return best;
}

std::uint64_t OracleLayout::bits_through(std::size_t i) const {
    std::uint64_t total = 0;
    for (std::size_t j = 0; j < i && j < blocks.size(); ++j)
        total += blocks[j].raw_bits + blocks[j].program_bits;
    return total;
}

std::vector<std::uint64_t> checkpoint_schedule(const std::vector<std::uint64_t>& candidates) {
    for (std::size_t i = 1; i < candidates.size(); ++i)
        if (candidates[i] <= candidates[i - 1])
            throw ParameterError("schedule: candidates must be strictly ascending");

    std::vector<std::uint64_t> chosen;
    std::uint64_t sum = 0;
    std::size_t pos = 0;
    for (;;) {
        std::uint64_t need = sum * sum;
        while (pos < candidates.size() && candidates[pos] < need) ++pos;
        if (pos == candidates.size()) break;
        chosen.push_back(candidates[pos]);
        sum += candidates[pos];
        ++pos;
    }
    if (chosen.empty()) throw ScheduleError("schedule: no checkpoint could be selected");
    return chosen;
}

namespace {

unsigned chunk_count(std::uint64_t m) {
    unsigned floor_log2 = 0;
    while ((std::uint64_t{2} << floor_log2) <= m) ++floor_log2;
    return floor_log2 / 2;  // floor(log2(m)/2)
}

void validate_schedule(const std::vector<std::uint64_t>& schedule) {
    if (schedule.empty()) throw ScheduleError("schedule: empty");
    std::uint64_t sum = 0;
    for (auto m : schedule) {
        if (m < 1) throw ParameterError("schedule: checkpoints must be >= 1");
        if (m < sum * sum)
            throw ParameterError("schedule: checkpoint below the squared-growth floor");
        sum += m;
    }
}

} // namespace

OracleBuild build_oracle(const BitSource& X, const std::vector<std::uint64_t>& schedule,
                         const Describer& describer) {
    validate_schedule(schedule);
    OracleBuild out;
    out.layout.describer = describer.name();

    std::uint64_t prev = 0;
    for (auto m : schedule) {
        unsigned chunks = chunk_count(m);
        BitString v;
        for (unsigned j = 0; j < chunks; ++j) {
            v.push_back(0);
            std::uint64_t from = prev + (std::uint64_t{1} << j) - 1;
            std::uint64_t to = prev + (std::uint64_t{2} << j) - 1;
            for (std::uint64_t p = from; p < to; ++p) v.push_back(X.read(p));
        }
        v.push_back(1);

        BitString program = describer.describe(X.prefix(static_cast<std::size_t>(m)));
        out.layout.blocks.push_back(
            {m, v.size(), program.size()});
        out.oracle.append(v);
        out.oracle.append(program);
        prev = m;
    }
    return out;
}

namespace {

class RecordingReader final : public BitReader {
public:
    explicit RecordingReader(const BitSource& source) : source_(source) {}
    const BitString& record() const { return record_; }

private:
    int read_impl() override {
        int b = source_.read(pos_++);
        record_.push_back(b);
        return b;
    }
    BitSource source_;
    std::uint64_t pos_ = 0;
    BitString record_;
};

} // namespace

OracleDecode decode_oracle(const BitSource& Y, std::uint64_t n) {
    RecordingReader reader(Y);
    BitString decoded;  // output of the last program run
    BitString result;

    bool done = n == 0;
    while (!done) {
        BitString buffered;  // raw chunks of the current block
        for (unsigned j = 0;; ++j) {
            int flag = reader.next();
            if (flag == 0) {
                std::uint64_t len = std::uint64_t{1} << j;
                for (std::uint64_t t = 0; t < len; ++t) buffered.push_back(reader.next());
                if (decoded.size() + buffered.size() >= n) {
                    result = decoded + buffered;
                    done = true;
                    break;
                }
            } else {
                UdecResult programmed = udec_stream(reader);
                decoded = std::move(programmed.output);
                if (decoded.size() >= n) {
                    result = decoded;
                    done = true;
                }
                break;  // buffered chunks are superseded by the program output
            }
        }
    }

    OracleDecode out;
    out.prefix = n == 0 ? BitString() : result.slice(0, static_cast<std::size_t>(n));
    out.used = reader.bits_read();
    out.answers = reader.record();
    out.machine_id = 0;
    out.n = n;
    return out;
}

BitString reduction_to_description(const OracleDecode& run) {
    return replay_program(run.machine_id, run.n, run.answers);
}

BitString replay_block_decoder(std::uint64_t n, const BitString& answers) {
    try {
        return decode_oracle(word_source(answers), n).prefix;
    } catch (const RangeError&) {
        throw DecodeError("replay: recorded answers end before the target length");
    }
}

void write_layout_json(const std::string& path, const OracleLayout& layout) {
    nlohmann::json blocks = nlohmann::json::array();
    nlohmann::json checkpoints = nlohmann::json::array();
    for (const auto& b : layout.blocks) {
        checkpoints.push_back(b.checkpoint);
        blocks.push_back({{"checkpoint", b.checkpoint},
                          {"raw_bits", b.raw_bits},
                          {"program_bits", b.program_bits}});
    }
    Rational rate = layout.max_rate();
    nlohmann::json j{{"checkpoints", checkpoints},
                     {"blocks", blocks},
                     {"describer", layout.describer},
                     {"max_rate", rate.to_fraction_string()},
                     {"max_rate_decimal", rate.to_double()}};
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ParseError("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

OracleLayout read_layout_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open layout file: " + path);
    nlohmann::json j;
    in >> j;
    OracleLayout layout;
    layout.describer = j.at("describer").get<std::string>();
    for (const auto& b : j.at("blocks")) {
        layout.blocks.push_back({b.at("checkpoint").get<std::uint64_t>(),
                                 b.at("raw_bits").get<std::size_t>(),
                                 b.at("program_bits").get<std::size_t>()});
    }
    return layout;
}

void write_decode_report_csv(const std::string& path, const std::vector<DecodeReportRow>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ParseError("cannot write file: " + path);
    out << "n,used,ratio\n";
    for (const auto& r : rows) {
        std::ostringstream dec;
        dec.precision(15);
        dec << r.ratio;
        out << r.n << "," << r.used << "," << dec.str() << "\n";
    }
}

PipelineResult run_pipeline(const BitSource& X, const std::vector<std::uint64_t>& schedule,
                            const Describer& describer, const Martingale& d) {
    PipelineResult out;
    OracleBuild built = build_oracle(X, schedule, describer);
    out.layout = built.layout;

    EncodeResult embedded = encode(d, word_source(built.oracle), built.oracle.size());
    out.codeword = std::move(embedded.codeword);
    out.trace = std::move(embedded.trace);

    // Full round trip through both layers before reporting anything.
    DecodeResult recovered = decode(d, word_source(out.codeword), built.oracle.size());
    if (recovered.payload != built.oracle)
        throw InvalidCodewordError("pipeline: embedded oracle failed to round-trip");

    for (const auto& block : out.layout.blocks) {
        OracleDecode run = decode_oracle(word_source(recovered.payload), block.checkpoint);
        if (run.prefix != X.prefix(static_cast<std::size_t>(block.checkpoint)))
            throw InvalidCodewordError("pipeline: oracle decode mismatch at checkpoint");
        std::uint64_t composed = codeword_cumulative(stage_covering(run.used));
        out.checkpoints.push_back({block.checkpoint, run.used, composed,
                                   static_cast<double>(composed) /
                                       static_cast<double>(block.checkpoint)});
    }
    return out;
}

} // namespace lpc
