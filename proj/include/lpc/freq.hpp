#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lpc/transducer.hpp"

namespace lpc {

/// Fraction of disjoint aligned |u|-blocks of w equal to u; requires |w|
/// divisible by |u|. Exact.
Rational block_freq(std::string_view u, std::string_view w);
Rational block_freq(const BitString& u, const BitString& w);

/// Exact distribution over the machine's states, aligned with
/// Transducer::states().
struct StateDistribution {
    std::vector<Rational> weights;
};

/// Exact distribution over output symbols.
using SymbolDistribution = std::map<char, Rational>;

struct PiEstimate {
    StateDistribution pi;  // occupation frequencies, counts / m
    Rational residual;     // max over (q,u) of |N(q,u)/m - pi(q)/|Sigma||
};

/// Empirical stationary estimate from a run of length m. Under the limit law
/// for normal inputs every transition count N(q,u)/m approaches
/// pi(q)/|Sigma|; the residual measures how far this run is from that.
PiEstimate estimate_pi(const Transducer& T, const BitSource& source, std::uint64_t m);
PiEstimate estimate_pi_from_stats(const Transducer& T, const RunStats& stats);

/// Exact stationary distribution of the chain induced by uniform input
/// symbols, P(q -> q') = |{u : delta(q,u) = q'}| / |Sigma|, restricted to
/// states reachable from the start state. Requires a unique recurrent class
/// (otherwise AmbiguousChainError); transient states get weight zero.
StateDistribution stationary_distribution(const Transducer& T);

/// Long-run output symbol frequencies implied by a state distribution:
///
///   p(a) = sum_{q,u} #_a(tau(q,u)) pi(q) / sum_{q,u} |tau(q,u)| pi(q)
///
/// Exact; the weights sum to exactly 1. Throws DegenerateOutputError when
/// the machine emits nothing under pi.
SymbolDistribution predicted_output_frequency(const Transducer& T,
                                              const StateDistribution& pi);

struct ConvergenceRow {
    std::uint64_t n = 0;
    std::map<char, Rational> freq;  // exact P(a, prefix of length n)
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    /// Per symbol, (min, max) of P over the tail half of the checkpoints
    /// (the last ceil(k/2) of them).
    std::map<char, std::pair<Rational, Rational>> tail_range;
    Rational gap_threshold;
    bool oscillation_flagged = false;
    std::vector<char> flagged_symbols;

    std::string summary() const;
};

/// Symbol frequencies of prefixes at each checkpoint, with an oscillation
/// flag raised when some symbol's tail-half range exceeds the gap threshold.
ConvergenceReport convergence_report(std::string_view sequence,
                                     const std::vector<std::uint64_t>& checkpoints,
                                     const Rational& gap_threshold);
ConvergenceReport convergence_report(const BitSource& X,
                                     const std::vector<std::uint64_t>& checkpoints,
                                     const Rational& gap_threshold);

struct FrequencyRow {
    std::uint64_t n = 0;
    char symbol = 0;
    double empirical = 0.0;
    double predicted = 0.0;
};

/// CSV columns: n, symbol, empirical, predicted.
void write_frequency_csv(const std::string& path, const std::vector<FrequencyRow>& rows);

} // namespace lpc
