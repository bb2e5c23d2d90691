#include "lpc/freq.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace lpc {

Rational block_freq(std::string_view u, std::string_view w) {
    if (u.empty()) throw ParameterError("block frequency: empty block");
    if (w.size() % u.size() != 0)
        throw ParameterError("block frequency: |w| must be divisible by |u|");
    std::size_t k = w.size() / u.size();
    if (k == 0) throw ParameterError("block frequency: empty word");
    std::uint64_t hits = 0;
    for (std::size_t i = 0; i < k; ++i)
        if (w.substr(i * u.size(), u.size()) == u) ++hits;
    return Rational(BigInt(hits), BigInt(k));
}

Rational block_freq(const BitString& u, const BitString& w) {
    return block_freq(u.to_string(), w.to_string());
}

PiEstimate estimate_pi_from_stats(const Transducer& T, const RunStats& stats) {
    if (stats.input_len == 0) throw ParameterError("estimate: run length must be >= 1");
    BigInt m(stats.input_len);
    Rational sigma(static_cast<std::int64_t>(T.input_alphabet().size()));

    PiEstimate est;
    est.pi.weights.resize(T.state_count());
    est.residual = Rational(0);
    for (std::size_t q = 0; q < T.state_count(); ++q)
        est.pi.weights[q] = Rational(BigInt(stats.state_total(q)), m);
    for (std::size_t q = 0; q < T.state_count(); ++q) {
        for (std::size_t s = 0; s < T.input_alphabet().size(); ++s) {
            Rational cell(BigInt(stats.count(q, s)), m);
            Rational diff = cell - est.pi.weights[q] / sigma;
            if (diff.sign() < 0) diff = -diff;
            if (diff > est.residual) est.residual = diff;
        }
    }
    return est;
}

PiEstimate estimate_pi(const Transducer& T, const BitSource& source, std::uint64_t m) {
    return estimate_pi_from_stats(T, run(T, source, m));
}

namespace {

// Strongly connected components of the one-step reachability graph,
// restricted to states reachable from the start state.
struct SccResult {
    std::vector<int> component;      // -1 for unreachable states
    std::size_t component_count = 0;
};

SccResult scc_reachable(const Transducer& T) {
    std::size_t n = T.state_count();
    std::size_t sigma = T.input_alphabet().size();

    std::vector<bool> reachable(n, false);
    std::vector<std::size_t> stack{T.start_state()};
    reachable[T.start_state()] = true;
    while (!stack.empty()) {
        std::size_t q = stack.back();
        stack.pop_back();
        for (std::size_t s = 0; s < sigma; ++s) {
            std::size_t r = T.next_state(q, s);
            if (!reachable[r]) {
                reachable[r] = true;
                stack.push_back(r);
            }
        }
    }

    // Iterative Tarjan.
    SccResult res;
    res.component.assign(n, -1);
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> scc_stack;
    int next_index = 0;

    struct Frame {
        std::size_t state;
        std::size_t edge;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (!reachable[root] || index[root] != -1) continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = next_index++;
        scc_stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.edge < sigma) {
                std::size_t target = T.next_state(f.state, f.edge++);
                if (index[target] == -1) {
                    index[target] = low[target] = next_index++;
                    scc_stack.push_back(target);
                    on_stack[target] = true;
                    frames.push_back({target, 0});
                } else if (on_stack[target]) {
                    low[f.state] = std::min(low[f.state], index[target]);
                }
            } else {
                if (low[f.state] == index[f.state]) {
                    for (;;) {
                        std::size_t w = scc_stack.back();
                        scc_stack.pop_back();
                        on_stack[w] = false;
                        res.component[w] = static_cast<int>(res.component_count);
                        if (w == f.state) break;
                    }
                    ++res.component_count;
                }
                std::size_t child = f.state;
                frames.pop_back();
                if (!frames.empty())
                    low[frames.back().state] = std::min(low[frames.back().state], low[child]);
            }
        }
    }
    return res;
}

// Exact Gaussian elimination; the system is square with a unique solution
// for an irreducible recurrent class.
std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> a,
                                   std::vector<Rational> b) {
    std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col].is_zero()) ++pivot;
        if (pivot == n) throw std::logic_error("stationary solve: singular system");
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col].is_zero()) continue;
            Rational factor = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
            b[row] -= factor * b[col];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

} // namespace

StateDistribution stationary_distribution(const Transducer& T) {
    std::size_t n = T.state_count();
    std::size_t sigma = T.input_alphabet().size();
    SccResult scc = scc_reachable(T);

    // A component is recurrent when no edge leaves it.
    std::vector<bool> leaves(scc.component_count, false);
    for (std::size_t q = 0; q < n; ++q) {
        if (scc.component[q] < 0) continue;
        for (std::size_t s = 0; s < sigma; ++s) {
            std::size_t r = T.next_state(q, s);
            if (scc.component[r] != scc.component[q])
                leaves[static_cast<std::size_t>(scc.component[q])] = true;
        }
    }
    std::vector<int> recurrent;
    for (std::size_t c = 0; c < scc.component_count; ++c)
        if (!leaves[c]) recurrent.push_back(static_cast<int>(c));
    if (recurrent.size() != 1)
        throw AmbiguousChainError(
            "stationary distribution: the uniform-input chain has " +
            std::to_string(recurrent.size()) + " recurrent classes");

    std::vector<std::size_t> members;
    for (std::size_t q = 0; q < n; ++q)
        if (scc.component[q] == recurrent[0]) members.push_back(q);

    // Balance equations pi P = pi on the class; the last one is redundant
    // and replaced by normalization sum pi = 1.
    std::size_t c = members.size();
    Rational inv_sigma(1, static_cast<std::int64_t>(sigma));
    std::vector<std::vector<Rational>> a(c, std::vector<Rational>(c, Rational(0)));
    std::vector<Rational> b(c, Rational(0));
    std::vector<std::size_t> pos(n, SIZE_MAX);
    for (std::size_t i = 0; i < c; ++i) pos[members[i]] = i;

    for (std::size_t i = 0; i + 1 < c; ++i) {
        a[i][i] -= Rational(1);
        for (std::size_t jj = 0; jj < c; ++jj) {
            std::size_t q = members[jj];
            for (std::size_t s = 0; s < sigma; ++s) {
                if (pos[T.next_state(q, s)] == i) a[i][jj] += inv_sigma;
            }
        }
    }
    for (std::size_t jj = 0; jj < c; ++jj) a[c - 1][jj] = Rational(1);
    b[c - 1] = Rational(1);

    std::vector<Rational> solution = solve_linear(std::move(a), std::move(b));
    StateDistribution pi;
    pi.weights.assign(n, Rational(0));
    for (std::size_t i = 0; i < c; ++i) pi.weights[members[i]] = solution[i];
    return pi;
}

SymbolDistribution predicted_output_frequency(const Transducer& T,
                                              const StateDistribution& pi) {
    if (pi.weights.size() != T.state_count())
        throw ParameterError("predicted frequency: distribution size mismatch");
    SymbolDistribution counts;
    for (char a : T.output_alphabet()) counts[a] = Rational(0);
    Rational total(0);
    for (std::size_t q = 0; q < T.state_count(); ++q) {
        for (std::size_t s = 0; s < T.input_alphabet().size(); ++s) {
            const std::string& word = T.output(q, s);
            total += Rational(static_cast<std::int64_t>(word.size())) * pi.weights[q];
            for (char a : word) counts[a] += pi.weights[q];
        }
    }
    if (total.is_zero())
        throw DegenerateOutputError("predicted frequency: machine is output-silent");
    for (auto& [sym, w] : counts) w /= total;
    return counts;
}

namespace {

ConvergenceReport report_from_prefix(std::string_view sequence,
                                     const std::vector<std::uint64_t>& checkpoints,
                                     const Rational& gap_threshold) {
    if (checkpoints.empty()) throw ParameterError("convergence report: no checkpoints");
    for (std::size_t i = 1; i < checkpoints.size(); ++i)
        if (checkpoints[i] <= checkpoints[i - 1])
            throw ParameterError("convergence report: checkpoints must be ascending");
    if (checkpoints.back() > sequence.size())
        throw ParameterError("convergence report: sequence shorter than last checkpoint");

    std::vector<char> symbols;
    for (char ch : sequence.substr(0, static_cast<std::size_t>(checkpoints.back())))
        if (std::find(symbols.begin(), symbols.end(), ch) == symbols.end())
            symbols.push_back(ch);
    std::sort(symbols.begin(), symbols.end());

    ConvergenceReport report;
    report.gap_threshold = gap_threshold;
    std::map<char, std::uint64_t> counts;
    std::uint64_t consumed = 0;
    for (auto n : checkpoints) {
        for (; consumed < n; ++consumed) ++counts[sequence[static_cast<std::size_t>(consumed)]];
        ConvergenceRow row;
        row.n = n;
        for (char sym : symbols) row.freq[sym] = Rational(BigInt(counts[sym]), BigInt(n));
        report.rows.push_back(std::move(row));
    }

    std::size_t tail_start = checkpoints.size() - (checkpoints.size() + 1) / 2;
    for (char sym : symbols) {
        Rational lo = report.rows[tail_start].freq[sym];
        Rational hi = lo;
        for (std::size_t i = tail_start; i < report.rows.size(); ++i) {
            const Rational& v = report.rows[i].freq[sym];
            if (v < lo) lo = v;
            if (v > hi) hi = v;
        }
        report.tail_range[sym] = {lo, hi};
        if (hi - lo > gap_threshold) {
            report.oscillation_flagged = true;
            report.flagged_symbols.push_back(sym);
        }
    }
    return report;
}

} // namespace

ConvergenceReport convergence_report(std::string_view sequence,
                                     const std::vector<std::uint64_t>& checkpoints,
                                     const Rational& gap_threshold) {
    return report_from_prefix(sequence, checkpoints, gap_threshold);
}

ConvergenceReport convergence_report(const BitSource& X,
                                     const std::vector<std::uint64_t>& checkpoints,
                                     const Rational& gap_threshold) {
    if (checkpoints.empty()) throw ParameterError("convergence report: no checkpoints");
    std::string prefix =
        X.prefix(static_cast<std::size_t>(checkpoints.back())).to_string();
    return report_from_prefix(prefix, checkpoints, gap_threshold);
}

std::string ConvergenceReport::summary() const {
    std::ostringstream out;
    if (oscillation_flagged) {
        out << "oscillation flagged (gap > " << gap_threshold.to_double() << ") for:";
        for (char sym : flagged_symbols) {
            const auto& [lo, hi] = tail_range.at(sym);
            out << " '" << sym << "' range [" << lo.to_double() << ", " << hi.to_double()
                << "]";
        }
    } else {
        out << "no oscillation flagged (gap threshold " << gap_threshold.to_double() << ")";
    }
    return out.str();
}

void write_frequency_csv(const std::string& path, const std::vector<FrequencyRow>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ParseError("cannot write file: " + path);
    out << "n,symbol,empirical,predicted\n";
    for (const auto& r : rows) {
        std::ostringstream line;
        line.precision(15);
        line << r.n << "," << r.symbol << "," << r.empirical << "," << r.predicted;
        out << line.str() << "\n";
    }
}

} // namespace lpc
