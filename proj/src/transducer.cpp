#include "lpc/transducer.hpp"

#include <algorithm>
#include <fstream>
#include <map>

namespace lpc {

namespace {

std::size_t find_state(const std::vector<std::string>& states, const std::string& name) {
    auto it = std::find(states.begin(), states.end(), name);
    if (it == states.end()) throw ParseError("transducer: unknown state '" + name + "'");
    return static_cast<std::size_t>(it - states.begin());
}

} // namespace

Transducer::Transducer(std::vector<std::string> states, std::vector<char> input_alphabet,
                       std::vector<char> output_alphabet, const std::string& start,
                       const std::vector<Transition>& transitions)
    : states_(std::move(states)), input_(std::move(input_alphabet)),
      output_(std::move(output_alphabet)) {
    if (states_.empty()) throw ParseError("transducer: no states");
    if (input_.empty()) throw ParseError("transducer: empty input alphabet");
    start_ = find_state(states_, start);

    next_.assign(states_.size(), std::vector<std::size_t>(input_.size(), SIZE_MAX));
    out_.assign(states_.size(), std::vector<std::string>(input_.size()));
    for (const auto& t : transitions) {
        std::size_t q = find_state(states_, t.state);
        std::size_t sym = symbol_index(t.in_symbol);
        if (next_[q][sym] != SIZE_MAX)
            throw ParseError("transducer: duplicate transition for (" + t.state + ", " +
                             std::string(1, t.in_symbol) + ")");
        for (char c : t.out_word)
            if (std::find(output_.begin(), output_.end(), c) == output_.end())
                throw ParseError("transducer: output word uses symbol outside the alphabet");
        next_[q][sym] = find_state(states_, t.next_state);
        out_[q][sym] = t.out_word;
    }
    for (std::size_t q = 0; q < states_.size(); ++q)
        for (std::size_t s = 0; s < input_.size(); ++s)
            if (next_[q][s] == SIZE_MAX)
                throw ParseError("transducer: missing transition for (" + states_[q] + ", " +
                                 std::string(1, input_[s]) + ")");
}

std::size_t Transducer::symbol_index(char a) const {
    auto it = std::find(input_.begin(), input_.end(), a);
    if (it == input_.end())
        throw ParameterError("transducer: input symbol '" + std::string(1, a) +
                             "' outside the alphabet");
    return static_cast<std::size_t>(it - input_.begin());
}

std::size_t Transducer::max_output_len() const {
    std::size_t best = 0;
    for (const auto& row : out_)
        for (const auto& w : row) best = std::max(best, w.size());
    return best;
}

namespace {

std::vector<char> chars_from_json(const nlohmann::json& arr, const char* what) {
    std::vector<char> out;
    for (const auto& s : arr) {
        std::string v = s.get<std::string>();
        if (v.size() != 1)
            throw ParseError(std::string("transducer: ") + what + " symbols must be single characters");
        out.push_back(v[0]);
    }
    return out;
}

} // namespace

Transducer Transducer::from_json(const nlohmann::json& j) {
    std::vector<std::string> states;
    for (const auto& s : j.at("states")) states.push_back(s.get<std::string>());
    auto input = chars_from_json(j.at("input_alphabet"), "input");
    auto output = chars_from_json(j.at("output_alphabet"), "output");
    std::vector<Transition> transitions;
    for (const auto& t : j.at("transitions")) {
        std::string in = t.at("in_symbol").get<std::string>();
        if (in.size() != 1) throw ParseError("transducer: in_symbol must be one character");
        transitions.push_back({t.at("state").get<std::string>(), in[0],
                               t.at("next_state").get<std::string>(),
                               t.at("out_word").get<std::string>()});
    }
    return Transducer(std::move(states), std::move(input), std::move(output),
                      j.at("start").get<std::string>(), transitions);
}

Transducer Transducer::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open transducer file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError("transducer: bad JSON in " + path + ": " + e.what());
    }
    return from_json(j);
}

nlohmann::json Transducer::to_json() const {
    nlohmann::json states = nlohmann::json::array();
    for (const auto& s : states_) states.push_back(s);
    nlohmann::json input = nlohmann::json::array();
    for (char c : input_) input.push_back(std::string(1, c));
    nlohmann::json output = nlohmann::json::array();
    for (char c : output_) output.push_back(std::string(1, c));
    nlohmann::json transitions = nlohmann::json::array();
    for (std::size_t q = 0; q < states_.size(); ++q)
        for (std::size_t s = 0; s < input_.size(); ++s)
            transitions.push_back({{"state", states_[q]},
                                   {"in_symbol", std::string(1, input_[s])},
                                   {"next_state", states_[next_[q][s]]},
                                   {"out_word", out_[q][s]}});
    return {{"states", states},
            {"input_alphabet", input},
            {"output_alphabet", output},
            {"start", states_[start_]},
            {"transitions", transitions}};
}

namespace {

std::vector<std::string> numbered_states(std::size_t n) {
    std::vector<std::string> states;
    for (std::size_t i = 0; i < n; ++i) states.push_back("q" + std::to_string(i));
    return states;
}

using TransitionFn = std::string (*)(std::size_t, char);

Transducer make_machine(std::size_t n, std::vector<char> gamma,
                        std::size_t (*delta)(std::size_t, char),
                        std::string (*tau)(std::size_t, char)) {
    auto states = numbered_states(n);
    std::vector<Transducer::Transition> tr;
    for (std::size_t q = 0; q < n; ++q)
        for (char u : {'0', '1'})
            tr.push_back({states[q], u, states[delta(q, u)], tau(q, u)});
    return Transducer(states, {'0', '1'}, std::move(gamma), states[0], tr);
}

} // namespace

Transducer Transducer::builtin(const std::string& name) {
    if (name == "identity")
        return make_machine(
            1, {'0', '1'}, [](std::size_t, char) { return std::size_t{0}; },
            [](std::size_t, char u) { return std::string(1, u); });
    if (name == "eraser")
        return make_machine(
            1, {'0', '1'}, [](std::size_t, char) { return std::size_t{0}; },
            [](std::size_t, char) { return std::string(); });
    if (name == "doubling")
        return make_machine(
            1, {'0', '1'}, [](std::size_t, char) { return std::size_t{0}; },
            [](std::size_t, char u) { return std::string(2, u); });
    if (name == "flip")
        return make_machine(
            2, {'0', '1'}, [](std::size_t q, char) { return 1 - q; },
            [](std::size_t, char u) { return std::string(1, u); });
    if (name == "parity")
        return make_machine(
            2, {'0', '1'}, [](std::size_t q, char u) { return u == '1' ? 1 - q : q; },
            [](std::size_t, char u) { return std::string(1, u); });
    if (name == "ab")
        return make_machine(
            1, {'a', 'b'}, [](std::size_t, char) { return std::size_t{0}; },
            [](std::size_t, char u) { return u == '0' ? std::string("a") : std::string("ab"); });
    if (name == "alternator11")
        return make_machine(
            11, {'0', '1'}, [](std::size_t q, char) { return (q + 1) % 11; },
            [](std::size_t q, char u) {
                bool swap = q % 2 == 1;
                char c = swap ? (u == '0' ? '1' : '0') : u;
                return std::string(1, c);
            });
    if (name == "branch12")
        return make_machine(
            12, {'a', 'b'},
            [](std::size_t q, char u) {
                if (q == 11) return u == '0' ? std::size_t{0} : std::size_t{6};
                return q + 1;
            },
            [](std::size_t q, char) { return q < 6 ? std::string("a") : std::string("ab"); });
    if (name == "pair_emitter11")
        return make_machine(
            11, {'a', 'b'}, [](std::size_t q, char) { return (q + 1) % 11; },
            [](std::size_t, char u) { return u == '0' ? std::string("ab") : std::string("abb"); });
    throw ParseError("unknown builtin transducer: " + name);
}

std::vector<std::string> Transducer::builtin_names() {
    return {"identity", "eraser",       "doubling", "flip",         "parity",
            "ab",       "alternator11", "branch12", "pair_emitter11"};
}

std::uint64_t RunStats::state_total(std::size_t q) const {
    std::uint64_t total = 0;
    for (auto c : counts[q]) total += c;
    return total;
}

RunStats run(const Transducer& T, std::string_view input) {
    RunStats stats;
    stats.counts.assign(T.state_count(),
                        std::vector<std::uint64_t>(T.input_alphabet().size(), 0));
    std::size_t q = T.start_state();
    for (char a : input) {
        std::size_t sym = T.symbol_index(a);
        ++stats.counts[q][sym];
        stats.output += T.output(q, sym);
        q = T.next_state(q, sym);
    }
    stats.input_len = input.size();
    stats.end_state = q;
    return stats;
}

RunStats run(const Transducer& T, const BitSource& source, std::uint64_t m) {
    RunStats stats;
    stats.counts.assign(T.state_count(),
                        std::vector<std::uint64_t>(T.input_alphabet().size(), 0));
    std::size_t q = T.start_state();
    for (std::uint64_t i = 0; i < m; ++i) {
        char a = source.read(i) ? '1' : '0';
        std::size_t sym = T.symbol_index(a);
        ++stats.counts[q][sym];
        stats.output += T.output(q, sym);
        q = T.next_state(q, sym);
    }
    stats.input_len = m;
    stats.end_state = q;
    return stats;
}

RunStats run_until_output(const Transducer& T, const BitSource& source, std::uint64_t n) {
    RunStats stats;
    stats.counts.assign(T.state_count(),
                        std::vector<std::uint64_t>(T.input_alphabet().size(), 0));
    std::size_t q = T.start_state();
    std::uint64_t i = 0;
    while (stats.output.size() < n) {
        char a = source.read(i++) ? '1' : '0';
        std::size_t sym = T.symbol_index(a);
        ++stats.counts[q][sym];
        stats.output += T.output(q, sym);
        q = T.next_state(q, sym);
    }
    stats.input_len = i;
    stats.end_state = q;
    return stats;
}

} // namespace lpc
