#include "zpa/automaton.hpp"

#include <deque>
#include <map>
#include <sstream>

#include "zpa/errors.hpp"
#include "zpa/numutil.hpp"

namespace zpa {

std::string State::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += "|";
        s += parts[i].get_str();
    }
    return s;
}

Word Automaton::run(const State& from, const Word& w) const {
    if (w.prime() != prime())
        throw input_error("word alphabet does not match the machine");
    std::vector<std::uint32_t> out(w.length());
    State s = from;
    for (std::size_t i = 0; i < w.length(); ++i) {
        std::uint32_t r = w.letter(i);
        out[i] = output(r, s);
        s = next(r, s);
    }
    return Word(prime(), std::move(out));
}

FiniteAutomaton::FiniteAutomaton(unsigned p, std::size_t states, std::size_t initial,
                                 std::vector<std::vector<std::size_t>> transition,
                                 std::vector<std::vector<std::uint32_t>> output)
    : p_(p), n_states_(states), initial_(initial),
      transition_(std::move(transition)), output_(std::move(output)) {
    require_prime(p_);
    if (n_states_ == 0) throw input_error("machine needs at least one state");
    if (initial_ >= n_states_) throw input_error("initial state out of range");
    if (transition_.size() != p_ || output_.size() != p_)
        throw input_error("transition/output tables need one row per symbol");
    for (unsigned r = 0; r < p_; ++r) {
        if (transition_[r].size() != n_states_ || output_[r].size() != n_states_)
            throw input_error("transition/output tables need one column per state");
        for (std::size_t s = 0; s < n_states_; ++s) {
            if (transition_[r][s] >= n_states_) throw input_error("transition target out of range");
            if (output_[r][s] >= p_) throw input_error("output symbol out of range");
        }
    }
}

FiniteAutomaton FiniteAutomaton::adding_machine() {
    // state 1 = carry pending, state 0 = copy the rest
    return FiniteAutomaton(2, 2, 1,
                           {{0, 0}, {0, 1}},  // S(r,s) = r*s mod 2
                           {{0, 1}, {1, 0}}); // O(r,s) = r+s mod 2
}

FiniteAutomaton FiniteAutomaton::identity_machine(unsigned p) {
    std::vector<std::vector<std::size_t>> t(p, std::vector<std::size_t>(1, 0));
    std::vector<std::vector<std::uint32_t>> o(p, std::vector<std::uint32_t>(1));
    for (unsigned r = 0; r < p; ++r) o[r][0] = r;
    return FiniteAutomaton(p, 1, 0, std::move(t), std::move(o));
}

FiniteAutomaton FiniteAutomaton::from_json(const nlohmann::json& j) {
    try {
        unsigned p = j.at("p").get<unsigned>();
        std::size_t n = j.at("states").get<std::size_t>();
        std::size_t s0 = j.at("initial").get<std::size_t>();
        auto tr = j.at("S").get<std::vector<std::vector<std::size_t>>>();
        auto out = j.at("O").get<std::vector<std::vector<std::uint32_t>>>();
        return FiniteAutomaton(p, n, s0, std::move(tr), std::move(out));
    } catch (const nlohmann::json::exception& err) {
        throw input_error(std::string("malformed machine JSON: ") + err.what());
    }
}

nlohmann::json FiniteAutomaton::to_json() const {
    return nlohmann::json{{"p", p_}, {"states", n_states_}, {"initial", initial_},
                          {"S", transition_}, {"O", output_}};
}

std::size_t FiniteAutomaton::next_index(std::uint32_t symbol, std::size_t s) const {
    if (symbol >= p_ || s >= n_states_) throw input_error("invalid symbol or state index");
    return transition_[symbol][s];
}

std::uint32_t FiniteAutomaton::output_at(std::uint32_t symbol, std::size_t s) const {
    if (symbol >= p_ || s >= n_states_) throw input_error("invalid symbol or state index");
    return output_[symbol][s];
}

std::vector<std::size_t> FiniteAutomaton::reachable_states() const {
    std::vector<bool> seen(n_states_, false);
    std::deque<std::size_t> queue{initial_};
    seen[initial_] = true;
    while (!queue.empty()) {
        std::size_t s = queue.front();
        queue.pop_front();
        for (unsigned r = 0; r < p_; ++r) {
            std::size_t t = transition_[r][s];
            if (!seen[t]) { seen[t] = true; queue.push_back(t); }
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < n_states_; ++s)
        if (seen[s]) out.push_back(s);
    return out;
}

namespace {

std::size_t state_index(const State& s, std::size_t limit) {
    if (s.parts.size() != 1 || s.parts[0] < 0 ||
        s.parts[0] >= static_cast<unsigned long>(limit))
        throw input_error("invalid state index " + s.to_string());
    return s.parts[0].get_ui();
}

} // namespace

State FiniteAutomaton::next(std::uint32_t symbol, const State& s) const {
    return State(mpz_class(static_cast<unsigned long>(next_index(symbol, state_index(s, n_states_)))));
}

std::uint32_t FiniteAutomaton::output(std::uint32_t symbol, const State& s) const {
    return output_at(symbol, state_index(s, n_states_));
}

ConstantAutomaton::ConstantAutomaton(unsigned p, Sequence seq)
    : p_(p), seq_(std::move(seq)) {
    require_prime(p_);
    if (!seq_) throw input_error("constant machine needs a sequence");
}

ConstantAutomaton::ConstantAutomaton(unsigned p, std::vector<std::uint32_t> seq)
    : ConstantAutomaton(p, [v = std::move(seq)](std::uint64_t i) -> std::optional<std::uint32_t> {
          if (i >= v.size()) return std::nullopt;
          return v[i];
      }) {}

State ConstantAutomaton::next(std::uint32_t, const State& s) const {
    if (s.parts.size() != 1 || s.parts[0] < 0) throw input_error("invalid counter state");
    return State(mpz_class(s.parts[0] + 1));
}

std::uint32_t ConstantAutomaton::output(std::uint32_t, const State& s) const {
    if (s.parts.size() != 1 || s.parts[0] < 0) throw input_error("invalid counter state");
    auto v = seq_(s.parts[0].get_ui());
    if (!v) throw input_error("sequence too short for requested word length");
    if (*v >= p_) throw input_error("sequence symbol out of range");
    return *v;
}

FunctionAutomaton::FunctionAutomaton(Expr source, std::size_t memo_bytes)
    : source_(std::move(source)) {
    if (!source_) throw input_error("empty expression");
    // rough per-entry footprint: key string + two small mpz + map node
    memo_entry_limit_ = memo_bytes / 128;
}

FunctionAutomaton::Step FunctionAutomaton::compute_step(std::uint32_t symbol,
                                                        const mpz_class& rank) const {
    unsigned p = prime();
    Word consumed = shortlex_unrank(rank, p);
    Word letter(p, {symbol});
    Word extended = concat(letter, consumed);
    unsigned n = static_cast<unsigned>(consumed.length());
    mpz_class y = eval_mod(source_, extended.value(), n + 1);
    mpz_class q = y / pow_int(p, n); // top digit of a (n+1)-digit value
    return Step{shortlex_rank(extended), static_cast<std::uint32_t>(q.get_ui())};
}

FunctionAutomaton::Step FunctionAutomaton::step(std::uint32_t symbol,
                                                const mpz_class& rank) const {
    if (memo_entry_limit_ == 0) return compute_step(symbol, rank);
    std::string key = rank.get_str(62) + ':' + static_cast<char>('0' + symbol);
    {
        std::lock_guard<std::mutex> lock(memo_mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    Step st = compute_step(symbol, rank);
    {
        std::lock_guard<std::mutex> lock(memo_mutex_);
        if (memo_.size() < memo_entry_limit_) memo_.emplace(std::move(key), st);
    }
    return st;
}

State FunctionAutomaton::next(std::uint32_t symbol, const State& s) const {
    if (s.parts.size() != 1 || s.parts[0] < 0) throw input_error("invalid state label");
    return State(step(symbol, s.parts[0]).next_rank);
}

std::uint32_t FunctionAutomaton::output(std::uint32_t symbol, const State& s) const {
    if (s.parts.size() != 1 || s.parts[0] < 0) throw input_error("invalid state label");
    return step(symbol, s.parts[0]).out;
}

SerialAutomaton::SerialAutomaton(std::shared_ptr<const Automaton> a,
                                 std::shared_ptr<const Automaton> b)
    : a_(std::move(a)), b_(std::move(b)) {
    if (!a_ || !b_) throw input_error("composition needs two machines");
    if (a_->prime() != b_->prime())
        throw input_error("cannot compose machines over different alphabets");
}

std::pair<State, State> SerialAutomaton::split(const State& s) const {
    std::size_t na = a_->state_arity();
    if (s.parts.size() != na + b_->state_arity())
        throw input_error("composite state has wrong arity");
    State sa, sb;
    sa.parts.assign(s.parts.begin(), s.parts.begin() + static_cast<long>(na));
    sb.parts.assign(s.parts.begin() + static_cast<long>(na), s.parts.end());
    return {std::move(sa), std::move(sb)};
}

State SerialAutomaton::initial_state() const {
    State s = a_->initial_state();
    State t = b_->initial_state();
    s.parts.insert(s.parts.end(), t.parts.begin(), t.parts.end());
    return s;
}

State SerialAutomaton::next(std::uint32_t symbol, const State& s) const {
    auto [sa, sb] = split(s);
    std::uint32_t mid = a_->output(symbol, sa);
    State na = a_->next(symbol, sa);
    State nb = b_->next(mid, sb);
    na.parts.insert(na.parts.end(), nb.parts.begin(), nb.parts.end());
    return na;
}

std::uint32_t SerialAutomaton::output(std::uint32_t symbol, const State& s) const {
    auto [sa, sb] = split(s);
    return b_->output(a_->output(symbol, sa), sb);
}

std::shared_ptr<const Automaton> compose_serial(std::shared_ptr<const Automaton> a,
                                                std::shared_ptr<const Automaton> b) {
    return std::make_shared<SerialAutomaton>(std::move(a), std::move(b));
}

std::vector<State> reachable_states_up_to(const Automaton& a, unsigned depth) {
    std::vector<State> order{a.initial_state()};
    std::map<std::string, std::size_t> seen{{order[0].to_string(), 0}};
    std::size_t frontier_begin = 0;
    for (unsigned d = 0; d < depth; ++d) {
        std::size_t frontier_end = order.size();
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
            State s = order[i];
            for (std::uint32_t r = 0; r < a.prime(); ++r) {
                State t = a.next(r, s);
                auto key = t.to_string();
                if (!seen.contains(key)) {
                    seen.emplace(key, order.size());
                    order.push_back(std::move(t));
                }
            }
        }
        frontier_begin = frontier_end;
        if (frontier_begin == order.size()) break; // closed early
    }
    return order;
}

namespace {

std::string dot_of(const Automaton& a, std::optional<unsigned> depth) {
    std::vector<State> order{a.initial_state()};
    std::map<std::string, std::size_t> index{{order[0].to_string(), 0}};
    struct Edge { std::size_t from, to; std::uint32_t sym, out; };
    std::vector<Edge> edges;

    std::size_t frontier_begin = 0;
    for (unsigned d = 0; !depth || d < *depth; ++d) {
        std::size_t frontier_end = order.size();
        if (frontier_begin == frontier_end) break;
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
            State s = order[i];
            for (std::uint32_t r = 0; r < a.prime(); ++r) {
                std::uint32_t o = a.output(r, s);
                State t = a.next(r, s);
                auto key = t.to_string();
                auto it = index.find(key);
                std::size_t ti;
                if (it == index.end()) {
                    ti = order.size();
                    index.emplace(key, ti);
                    order.push_back(std::move(t));
                } else {
                    ti = it->second;
                }
                edges.push_back({i, ti, r, o});
            }
        }
        frontier_begin = frontier_end;
    }

    std::ostringstream os;
    os << "digraph automaton {\n";
    os << "  rankdir=LR;\n";
    for (std::size_t i = 0; i < order.size(); ++i)
        os << "  s" << i << " [label=\"" << order[i].to_string() << "\""
           << (i == 0 ? ", shape=doublecircle" : "") << "];\n";
    for (const auto& e : edges)
        os << "  s" << e.from << " -> s" << e.to
           << " [label=\"(" << e.sym << "," << e.out << ")\"];\n";
    os << "}\n";
    return os.str();
}

} // namespace

std::string export_dot(const Automaton& a, unsigned depth) { return dot_of(a, depth); }

std::string export_dot(const FiniteAutomaton& a) { return dot_of(a, std::nullopt); }

} // namespace zpa
