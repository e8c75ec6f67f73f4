#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "zpa/expr.hpp"
#include "zpa/word.hpp"

namespace zpa {

// State labels are flat integer sequences so that serial compositions can
// concatenate the component labels.
struct State {
    std::vector<mpz_class> parts;

    State() = default;
    explicit State(mpz_class single) { parts.push_back(std::move(single)); }

    bool operator==(const State&) const = default;
    std::string to_string() const;
};

/**
 * A letter transducer over the alphabet {0..p-1}: feeding a symbol from a
 * state yields one output symbol and a successor state. Machines are
 * immutable descriptions; run is pure given (machine, state, word).
 */
class Automaton {
public:
    virtual ~Automaton() = default;

    virtual unsigned prime() const = 0;
    virtual State initial_state() const = 0;
    virtual State next(std::uint32_t symbol, const State& s) const = 0;
    virtual std::uint32_t output(std::uint32_t symbol, const State& s) const = 0;

    // Number of label parts a state of this machine carries.
    virtual std::size_t state_arity() const { return 1; }

    // Transforms a length-n input word into the length-n output word,
    // consuming letter 0 first.
    Word run(const State& from, const Word& w) const;
    Word run(const Word& w) const { return run(initial_state(), w); }
};

// Table-driven machine. Tables are indexed [symbol][state].
class FiniteAutomaton final : public Automaton {
public:
    FiniteAutomaton(unsigned p, std::size_t states, std::size_t initial,
                    std::vector<std::vector<std::size_t>> transition,
                    std::vector<std::vector<std::uint32_t>> output);

    // The binary odometer: two states {identity, carry}, started carrying.
    static FiniteAutomaton adding_machine();

    // Single state, echoes its input.
    static FiniteAutomaton identity_machine(unsigned p);

    // {"p":., "states":N, "initial":s0, "S":[[..]], "O":[[..]]};
    // row index = symbol, column index = state.
    static FiniteAutomaton from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    std::size_t state_count() const { return n_states_; }
    std::size_t initial_index() const { return initial_; }
    std::size_t next_index(std::uint32_t symbol, std::size_t s) const;
    std::uint32_t output_at(std::uint32_t symbol, std::size_t s) const;

    // BFS closure under the transition tables, ascending indices.
    std::vector<std::size_t> reachable_states() const;

    unsigned prime() const override { return p_; }
    State initial_state() const override { return State(mpz_class(static_cast<unsigned long>(initial_))); }
    State next(std::uint32_t symbol, const State& s) const override;
    std::uint32_t output(std::uint32_t symbol, const State& s) const override;

private:
    unsigned p_;
    std::size_t n_states_;
    std::size_t initial_;
    std::vector<std::vector<std::size_t>> transition_;
    std::vector<std::vector<std::uint32_t>> output_;
};

// Counter-state machine that ignores its input and emits a fixed symbol
// sequence; state s emits seq(s). Exhausting a finite sequence is an error.
class ConstantAutomaton final : public Automaton {
public:
    using Sequence = std::function<std::optional<std::uint32_t>(std::uint64_t)>;

    ConstantAutomaton(unsigned p, Sequence seq);
    ConstantAutomaton(unsigned p, std::vector<std::uint32_t> seq);

    unsigned prime() const override { return p_; }
    State initial_state() const override { return State(mpz_class(0)); }
    State next(std::uint32_t symbol, const State& s) const override;
    std::uint32_t output(std::uint32_t symbol, const State& s) const override;

private:
    unsigned p_;
    Sequence seq_;
};

/**
 * The lazy machine realizing a 1-Lipschitz expression. States are labeled by
 * the shortlex rank of the input consumed so far (rank 0 = empty word =
 * initial state): feeding r in state i moves to rank(r concat word(i)), and
 * the emitted symbol is digit len(word(i)) of the expression evaluated at
 * the consumed input, one digit beyond that length.
 *
 * State tables are never materialized. An optional bounded memo caches
 * (state, symbol) steps; entries are idempotent, so concurrent lookups and
 * stores may interleave freely and results are identical with the memo on
 * or off.
 */
class FunctionAutomaton final : public Automaton {
public:
    explicit FunctionAutomaton(Expr source, std::size_t memo_bytes = 1 << 20);

    const Expr& source() const { return source_; }

    unsigned prime() const override { return source_->prime(); }
    State initial_state() const override { return State(mpz_class(0)); }
    State next(std::uint32_t symbol, const State& s) const override;
    std::uint32_t output(std::uint32_t symbol, const State& s) const override;

private:
    struct Step {
        mpz_class next_rank;
        std::uint32_t out;
    };

    Step step(std::uint32_t symbol, const mpz_class& rank) const;
    Step compute_step(std::uint32_t symbol, const mpz_class& rank) const;

    Expr source_;
    std::size_t memo_entry_limit_;
    mutable std::mutex memo_mutex_;
    mutable std::unordered_map<std::string, Step> memo_;
};

// Serial composition: the input feeds a, a's output feeds b; the machine
// function is f_b after f_a. Pair states are built on demand.
class SerialAutomaton final : public Automaton {
public:
    SerialAutomaton(std::shared_ptr<const Automaton> a, std::shared_ptr<const Automaton> b);

    unsigned prime() const override { return a_->prime(); }
    std::size_t state_arity() const override { return a_->state_arity() + b_->state_arity(); }
    State initial_state() const override;
    State next(std::uint32_t symbol, const State& s) const override;
    std::uint32_t output(std::uint32_t symbol, const State& s) const override;

private:
    std::pair<State, State> split(const State& s) const;

    std::shared_ptr<const Automaton> a_, b_;
};

std::shared_ptr<const Automaton> compose_serial(std::shared_ptr<const Automaton> a,
                                                std::shared_ptr<const Automaton> b);

// States reachable by input words of length <= depth, in BFS discovery order.
std::vector<State> reachable_states_up_to(const Automaton& a, unsigned depth);

// Moore diagram in DOT form, vertices in BFS discovery order, edges labeled
// "(symbol,output)". Deterministic byte-for-byte.
std::string export_dot(const Automaton& a, unsigned depth);

// Full diagram of a finite machine.
std::string export_dot(const FiniteAutomaton& a);

} // namespace zpa
