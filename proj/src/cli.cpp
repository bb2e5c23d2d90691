#include "lpc/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "lpc/bitio.hpp"
#include "lpc/codec.hpp"
#include "lpc/freq.hpp"
#include "lpc/martingale.hpp"
#include "lpc/oracle.hpp"

namespace lpc {

namespace {

std::vector<std::uint64_t> parse_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoull(item));
    }
    if (out.empty()) throw ParseError("expected a comma-separated list of counts");
    return out;
}

Rational default_tolerance(const std::string& fallback) {
    if (const char* env = std::getenv("KGC_DEFAULT_TOLERANCE"))
        return Rational::from_string(env);
    return Rational::from_string(fallback);
}

struct SourceOptions {
    std::string source;
    std::string input;
    std::optional<std::uint64_t> seed;

    BitSource resolve() const {
        if (!input.empty()) return word_source(read_bit_file(input));
        if (source.empty()) throw ParseError("no --source or --input given");
        if (source == "seeded") {
            if (!seed) throw ParseError("--source seeded requires --seed");
            return seeded_source(*seed);
        }
        return parse_source(source);
    }
};

void add_source_options(CLI::App* cmd, SourceOptions& opts, bool input_too = true) {
    cmd->add_option("--source", opts.source,
                    "zeros | ones | seeded:<n> | champernowne | oscillating | <bit file>");
    if (input_too) cmd->add_option("--input", opts.input, "bit file input");
    cmd->add_option("--seed", opts.seed, "seed for --source seeded");
}

Transducer resolve_transducer(const std::string& spec) {
    if (spec.rfind("builtin:", 0) == 0) return Transducer::builtin(spec.substr(8));
    return Transducer::load(spec);
}

std::vector<std::uint64_t> resolve_schedule(const std::string& checkpoints,
                                            const std::string& schedule) {
    if (!schedule.empty()) return parse_list(schedule);
    if (!checkpoints.empty()) return checkpoint_schedule(parse_list(checkpoints));
    throw ParseError("need --checkpoints (candidates) or --schedule (exact)");
}

// ------------------------------------------------------------------ encode

int cmd_encode(const SourceOptions& src, std::uint64_t n, const std::string& martingale_path,
               const std::string& output, const std::string& trace_path) {
    Martingale d = load_martingale(martingale_path);
    BitSource X = src.resolve();
    if (n == 0) {
        auto len = X.length();
        if (!len) throw ParseError("--n is required for infinite sources");
        n = *len;
    }

    EncodeResult result = encode(d, X, n);
    write_bits_ascii(output, result.codeword);

    Sidecar sidecar;
    sidecar.payload_bits = n;
    sidecar.payload_checksum = bit_checksum(X.prefix(static_cast<std::size_t>(n)));
    sidecar.codeword_bits = result.codeword.size();
    sidecar.codeword_checksum = bit_checksum(result.codeword);
    write_sidecar(output, sidecar);

    if (!trace_path.empty()) write_codeword_trace_csv(trace_path, result.trace);

    const auto& last = result.trace.last();
    std::cout << "encoded " << n << " payload bits into " << result.codeword.size()
              << " codeword bits over " << result.trace.stages.size() << " stages\n";
    std::cout << "stage summary: n_i=" << last.payload_cum << " k_i=" << last.codeword_cum
              << " padding=" << last.padding << " evals=" << result.trace.evals << "\n";
    std::cout << "boundary capital " << last.capital.to_double() << " (< "
              << capital_bound(last.stage).to_double() << " exact bound holds: "
              << (last.capital < capital_bound(last.stage) ? "yes" : "NO") << ")\n";
    return last.capital < capital_bound(last.stage) ? 0 : 1;
}

// ------------------------------------------------------------------ decode

int cmd_decode(const std::string& input, std::uint64_t n, const std::string& martingale_path,
               const std::string& output) {
    Martingale d = load_martingale(martingale_path);
    BitString codeword = read_bit_file(input);

    std::optional<Sidecar> sidecar;
    if (sidecar_exists(input)) {
        sidecar = read_sidecar(input);
        if (sidecar->codeword_bits != codeword.size() ||
            sidecar->codeword_checksum != bit_checksum(codeword)) {
            std::cerr << "codeword checksum mismatch: file is corrupted\n";
            return 1;
        }
        if (n == 0) n = sidecar->payload_bits;
    }
    if (n == 0) throw ParseError("--n is required without a sidecar");

    DecodeResult result = decode(d, word_source(codeword), n);
    write_bits_ascii(output, result.payload);

    if (sidecar && sidecar->payload_bits == n &&
        sidecar->payload_checksum != bit_checksum(result.payload)) {
        std::cerr << "payload checksum mismatch: decoded data does not match the sidecar\n";
        return 1;
    }

    std::size_t last_stage = result.trace.last().stage;
    double margin = redundancy_margin(payload_cumulative(last_stage));
    bool bound_ok = true;
    for (const auto& s : result.trace.stages) {
        if (static_cast<double>(s.codeword_cum) >
            static_cast<double>(s.payload_cum) + redundancy_margin(s.payload_cum))
            bound_ok = false;
    }
    std::cout << "decoded " << n << " payload bits, oracle use u_n = " << result.oracle_use
              << "\n";
    std::cout << "redundancy: u_n - n = " << (result.oracle_use - n)
              << ", stage bound n_i + sqrt(2 n_i) log2(2 n_i) = "
              << (static_cast<double>(payload_cumulative(last_stage)) + margin)
              << (bound_ok ? " holds" : " VIOLATED") << "\n";
    return bound_ok ? 0 : 1;
}

// ------------------------------------------------------------------ hybrid

int cmd_hybrid(const SourceOptions& src, const std::string& describer_name,
               const std::string& checkpoints, const std::string& schedule,
               const std::string& output, const std::string& layout_path,
               const std::string& report_path) {
    BitSource X = src.resolve();
    Describer describer = parse_describer(describer_name);
    std::vector<std::uint64_t> chosen = resolve_schedule(checkpoints, schedule);

    OracleBuild built = build_oracle(X, chosen, describer);
    if (!output.empty()) write_bits_ascii(output, built.oracle);
    if (!layout_path.empty()) write_layout_json(layout_path, built.layout);

    bool ok = true;
    std::vector<DecodeReportRow> rows;
    for (std::size_t i = 0; i < built.layout.blocks.size(); ++i) {
        const auto& block = built.layout.blocks[i];
        OracleDecode run = decode_oracle(word_source(built.oracle), block.checkpoint);
        if (run.prefix != X.prefix(static_cast<std::size_t>(block.checkpoint))) ok = false;
        if (run.used > built.layout.bits_through(i + 1)) ok = false;
        rows.push_back({block.checkpoint, run.used,
                        static_cast<double>(run.used) / static_cast<double>(block.checkpoint)});
    }
    if (!report_path.empty()) write_decode_report_csv(report_path, rows);

    Rational s = built.layout.max_rate();
    std::cout << "oracle: " << built.oracle.size() << " bits over " << chosen.size()
              << " checkpoints, describer " << describer.name() << "\n";
    std::cout << "measured description rate s = " << s.to_double() << " ("
              << s.to_fraction_string() << ")\n";
    const auto& last_block = built.layout.blocks.back();
    Rational last_rate(BigInt(last_block.program_bits), BigInt(last_block.checkpoint));
    std::cout << "last checkpoint rate |p_r|/m_r = " << last_rate.to_double() << "\n";
    for (const auto& r : rows)
        std::cout << "  n=" << r.n << " used=" << r.used << " ratio=" << r.ratio << "\n";
    std::cout << "round trips and accounting " << (ok ? "pass" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------- pipeline

int cmd_pipeline(const SourceOptions& src, const std::string& describer_name,
                 const std::string& checkpoints, const std::string& schedule,
                 const std::string& martingale_path, const std::string& output,
                 const std::string& report_path) {
    BitSource X = src.resolve();
    Describer describer = parse_describer(describer_name);
    std::vector<std::uint64_t> chosen = resolve_schedule(checkpoints, schedule);
    Martingale d = martingale_path.empty() ? uniform() : load_martingale(martingale_path);

    PipelineResult result = run_pipeline(X, chosen, describer, d);
    if (!output.empty()) write_bits_ascii(output, result.codeword);

    std::vector<DecodeReportRow> rows;
    for (const auto& cp : result.checkpoints)
        rows.push_back({cp.checkpoint, cp.composed_use, cp.ratio});
    if (!report_path.empty()) write_decode_report_csv(report_path, rows);

    std::cout << "pipeline: codeword " << result.codeword.size() << " bits, oracle "
              << result.layout.total_bits() << " bits, s = "
              << result.layout.max_rate().to_double() << "\n";
    for (const auto& cp : result.checkpoints)
        std::cout << "  n=" << cp.checkpoint << " oracle_use=" << cp.oracle_bits
                  << " composed_use=" << cp.composed_use << " ratio=" << cp.ratio << "\n";
    return 0;
}

// ---------------------------------------------------------------------- fs

void machine_report(const Transducer& T, const BitSource& source, std::uint64_t steps,
                    const std::string& report_path, const Rational& tolerance,
                    bool tolerance_is_check, int& status) {
    RunStats stats = run(T, source, steps);
    PiEstimate est = estimate_pi_from_stats(T, stats);
    std::cout << "run: " << steps << " input symbols -> " << stats.output.size()
              << " output symbols\n";
    std::cout << "transition residual = " << est.residual.to_double() << "\n";

    std::optional<StateDistribution> analytic;
    try {
        analytic = stationary_distribution(T);
    } catch (const AmbiguousChainError& e) {
        std::cout << "analytic stationary distribution unavailable: " << e.what() << "\n";
    }

    Rational pi_gap(0);
    if (analytic) {
        for (std::size_t q = 0; q < T.state_count(); ++q) {
            Rational diff = est.pi.weights[q] - analytic->weights[q];
            if (diff.sign() < 0) diff = -diff;
            if (diff > pi_gap) pi_gap = diff;
            std::cout << "  pi[" << T.states()[q] << "]: empirical "
                      << est.pi.weights[q].to_double() << ", analytic "
                      << analytic->weights[q].to_double() << "\n";
        }
        std::cout << "max state gap = " << pi_gap.to_double() << "\n";
    }

    Rational freq_gap(0);
    std::vector<FrequencyRow> rows;
    if (analytic && !stats.output.empty()) {
        SymbolDistribution predicted = predicted_output_frequency(T, *analytic);
        for (const auto& [sym, p] : predicted) {
            std::uint64_t hits = 0;
            for (char c : stats.output)
                if (c == sym) ++hits;
            Rational empirical(BigInt(hits), BigInt(stats.output.size()));
            Rational diff = empirical - p;
            if (diff.sign() < 0) diff = -diff;
            if (diff > freq_gap) freq_gap = diff;
            std::cout << "  p('" << sym << "'): empirical " << empirical.to_double()
                      << ", predicted " << p.to_double() << "\n";
            rows.push_back({steps, sym, empirical.to_double(), p.to_double()});
        }
        std::cout << "max symbol gap = " << freq_gap.to_double() << "\n";
    }
    if (!report_path.empty()) write_frequency_csv(report_path, rows);

    if (tolerance_is_check) {
        bool ok = est.residual <= tolerance && pi_gap <= tolerance &&
                  freq_gap <= tolerance + tolerance;  // symbol gap allowance is 2x
        std::cout << "tolerance check (" << tolerance.to_double() << "): "
                  << (ok ? "pass" : "FAIL") << "\n";
        if (!ok) status = 1;
    }
}

int cmd_fs(const std::string& transducer_spec, const SourceOptions& src, std::uint64_t steps,
           const std::string& checkpoints, const std::string& report_path,
           const std::string& tolerance_text) {
    BitSource source = src.resolve();
    int status = 0;

    if (!checkpoints.empty()) {
        Rational gap = tolerance_text.empty() ? default_tolerance("0.5")
                                              : Rational::from_string(tolerance_text);
        auto points = parse_list(checkpoints);
        ConvergenceReport report = [&] {
            if (transducer_spec.empty()) return convergence_report(source, points, gap);
            Transducer T = resolve_transducer(transducer_spec);
            RunStats stats = run_until_output(T, source, points.back());
            return convergence_report(stats.output, points, gap);
        }();
        for (const auto& row : report.rows) {
            std::cout << "n=" << row.n;
            for (const auto& [sym, p] : row.freq)
                std::cout << "  P('" << sym << "')=" << p.to_double();
            std::cout << "\n";
        }
        std::cout << report.summary() << "\n";
        if (!report_path.empty()) {
            std::vector<FrequencyRow> rows;
            for (const auto& row : report.rows)
                for (const auto& [sym, p] : row.freq)
                    rows.push_back({row.n, sym, p.to_double(), 0.0});
            write_frequency_csv(report_path, rows);
        }
        return status;
    }

    if (transducer_spec.empty()) throw ParseError("fs: need --transducer or --checkpoints");
    if (steps == 0) throw ParseError("fs: --steps is required for machine analysis");
    Transducer T = resolve_transducer(transducer_spec);
    bool check = !tolerance_text.empty() || std::getenv("KGC_DEFAULT_TOLERANCE") != nullptr;
    Rational tolerance = tolerance_text.empty() ? default_tolerance("0.01")
                                                : Rational::from_string(tolerance_text);
    machine_report(T, source, steps, report_path, tolerance, check, status);
    return status;
}

// ---------------------------------------------------------------- validate

int cmd_validate(const std::string& martingale_path, unsigned depth, const SourceOptions& src,
                 std::uint64_t steps, const std::string& trace_path) {
    Martingale d = load_martingale(martingale_path);
    ValidationReport report = validate_martingale(d, depth);
    std::cout << "validate " << d.name() << " to depth " << depth << ": " << report.summary()
              << "\n";

    if (!trace_path.empty()) {
        if (steps == 0) throw ParseError("validate: --steps is required with --trace");
        BitSource source = src.resolve();
        write_capital_trace_csv(trace_path,
                                capital_trace(d, source.prefix(static_cast<std::size_t>(steps))));
    }
    return report.passed ? 0 : 1;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"embedding codec for betting-strategy-avoiding sequences"};
    app.require_subcommand(1);

    // encode
    auto* enc = app.add_subcommand("encode", "embed payload bits into a codeword");
    SourceOptions enc_src;
    add_source_options(enc, enc_src);
    std::uint64_t enc_n = 0;
    std::string enc_martingale, enc_output, enc_trace;
    enc->add_option("--n", enc_n, "payload bits to embed");
    enc->add_option("--martingale", enc_martingale, "martingale spec JSON")->required();
    enc->add_option("--output", enc_output, "codeword bit file")->required();
    enc->add_option("--trace", enc_trace, "stage trace CSV");

    // decode
    auto* dec = app.add_subcommand("decode", "recover payload bits from a codeword");
    std::string dec_input, dec_martingale, dec_output;
    std::uint64_t dec_n = 0;
    dec->add_option("--input", dec_input, "codeword bit file")->required();
    dec->add_option("--martingale", dec_martingale, "martingale spec JSON")->required();
    dec->add_option("--n", dec_n, "payload bits to recover");
    dec->add_option("--output", dec_output, "payload bit file")->required();

    // hybrid
    auto* hyb = app.add_subcommand("hybrid", "build and audit a block oracle");
    SourceOptions hyb_src;
    add_source_options(hyb, hyb_src);
    std::string hyb_describer = "literal", hyb_checkpoints, hyb_schedule;
    std::string hyb_output, hyb_layout, hyb_report;
    hyb->add_option("--describer", hyb_describer, "literal | runlength | lz");
    hyb->add_option("--checkpoints", hyb_checkpoints, "candidate checkpoints (comma separated)");
    hyb->add_option("--schedule", hyb_schedule, "exact checkpoint schedule (comma separated)");
    hyb->add_option("--output", hyb_output, "oracle bit file");
    hyb->add_option("--layout", hyb_layout, "layout sidecar JSON");
    hyb->add_option("--report", hyb_report, "decode report CSV");

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "embed a block oracle as a codeword");
    SourceOptions pipe_src;
    add_source_options(pipe, pipe_src);
    std::string pipe_describer = "literal", pipe_checkpoints, pipe_schedule;
    std::string pipe_martingale, pipe_output, pipe_report;
    pipe->add_option("--describer", pipe_describer, "literal | runlength | lz");
    pipe->add_option("--checkpoints", pipe_checkpoints, "candidate checkpoints");
    pipe->add_option("--schedule", pipe_schedule, "exact checkpoint schedule");
    pipe->add_option("--martingale", pipe_martingale, "martingale spec JSON (default uniform)");
    pipe->add_option("--output", pipe_output, "codeword bit file");
    pipe->add_option("--report", pipe_report, "composed-use report CSV");

    // fs
    auto* fs = app.add_subcommand("fs", "finite-state frequency analysis");
    SourceOptions fs_src;
    add_source_options(fs, fs_src);
    std::string fs_transducer, fs_checkpoints, fs_report, fs_tolerance;
    std::uint64_t fs_steps = 0;
    fs->add_option("--transducer", fs_transducer, "transducer JSON or builtin:<name>");
    fs->add_option("--steps", fs_steps, "input symbols to run");
    fs->add_option("--checkpoints", fs_checkpoints, "prefix lengths for convergence report");
    fs->add_option("--report", fs_report, "frequency report CSV");
    fs->add_option("--tolerance", fs_tolerance, "agreement tolerance / oscillation gap");

    // validate
    auto* val = app.add_subcommand("validate", "exhaustive martingale contract check");
    SourceOptions val_src;
    add_source_options(val, val_src);
    std::string val_martingale, val_trace;
    unsigned val_depth = 10;
    std::uint64_t val_steps = 0;
    val->add_option("--martingale", val_martingale, "martingale spec JSON")->required();
    val->add_option("--depth", val_depth, "exhaustive scan depth (default 10)");
    val->add_option("--steps", val_steps, "prefix length for --trace");
    val->add_option("--trace", val_trace, "capital trace CSV over --source");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (enc->parsed()) return cmd_encode(enc_src, enc_n, enc_martingale, enc_output, enc_trace);
        if (dec->parsed()) return cmd_decode(dec_input, dec_n, dec_martingale, dec_output);
        if (hyb->parsed())
            return cmd_hybrid(hyb_src, hyb_describer, hyb_checkpoints, hyb_schedule, hyb_output,
                              hyb_layout, hyb_report);
        if (pipe->parsed())
            return cmd_pipeline(pipe_src, pipe_describer, pipe_checkpoints, pipe_schedule,
                                pipe_martingale, pipe_output, pipe_report);
        if (fs->parsed())
            return cmd_fs(fs_transducer, fs_src, fs_steps, fs_checkpoints, fs_report,
                          fs_tolerance);
        if (val->parsed())
            return cmd_validate(val_martingale, val_depth, val_src, val_steps, val_trace);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

} // namespace lpc
