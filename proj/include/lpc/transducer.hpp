#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lpc/bitsource.hpp"
#include "lpc/rational.hpp"

namespace lpc {

/// Deterministic finite-state transducer (Q, Sigma, Gamma, q0, delta, tau).
/// Symbols are single characters; delta and tau are total on Q x Sigma,
/// enforced at construction and on load.
class Transducer {
public:
    struct Transition {
        std::string state;
        char in_symbol;
        std::string next_state;
        std::string out_word;
    };

    Transducer(std::vector<std::string> states, std::vector<char> input_alphabet,
               std::vector<char> output_alphabet, const std::string& start,
               const std::vector<Transition>& transitions);

    static Transducer from_json(const nlohmann::json& j);
    static Transducer load(const std::string& path);
    nlohmann::json to_json() const;

    /// identity, eraser, doubling, flip, parity, ab, alternator11, branch12,
    /// pair_emitter11.
    static Transducer builtin(const std::string& name);
    static std::vector<std::string> builtin_names();

    std::size_t state_count() const { return states_.size(); }
    const std::vector<std::string>& states() const { return states_; }
    const std::vector<char>& input_alphabet() const { return input_; }
    const std::vector<char>& output_alphabet() const { return output_; }
    std::size_t start_state() const { return start_; }

    std::size_t symbol_index(char a) const;
    std::size_t next_state(std::size_t q, std::size_t sym) const { return next_[q][sym]; }
    const std::string& output(std::size_t q, std::size_t sym) const { return out_[q][sym]; }

    /// Longest single-transition output.
    std::size_t max_output_len() const;

private:
    Transducer() = default;

    std::vector<std::string> states_;
    std::vector<char> input_;
    std::vector<char> output_;
    std::size_t start_ = 0;
    std::vector<std::vector<std::size_t>> next_;  // [state][symbol index]
    std::vector<std::vector<std::string>> out_;
};

/// Everything a single run accumulates: the output word, where the machine
/// stopped, and how often each transition (q, u) fired. The counts partition
/// the input length, and the output length is the count-weighted sum of
/// transition output lengths.
struct RunStats {
    std::uint64_t input_len = 0;
    std::size_t end_state = 0;
    std::string output;
    std::vector<std::vector<std::uint64_t>> counts;  // [state][symbol index]

    std::uint64_t count(std::size_t q, std::size_t sym) const { return counts[q][sym]; }
    std::uint64_t state_total(std::size_t q) const;
};

/// Folds the word through the machine. Symbols outside Sigma are an error.
RunStats run(const Transducer& T, std::string_view input);

/// Same, feeding the first m bits of a source as '0'/'1' symbols.
RunStats run(const Transducer& T, const BitSource& source, std::uint64_t m);

/// Feeds source bits until the output holds at least n symbols (n may be 0).
/// The run stops at the least such input length, so the output overshoots n
/// by less than the machine's longest single-transition output.
RunStats run_until_output(const Transducer& T, const BitSource& source, std::uint64_t n);

} // namespace lpc
