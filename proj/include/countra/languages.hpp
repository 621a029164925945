#pragma once
// Concrete languages and the prefix-arity machinery:
//   - canonical machines: a^n b^n, a^m b^2m, one-sided Dyck, and the
//     small fixtures used by the threshold and semilinear suites
//   - prefix-arity grammars L_m, the arity-sum decider and its guarded
//     variant, machine compilations of both, and a recursive-descent check
//   - boolean prefix expressions, prefix functions, and the configuration
//     census that contrasts machine state growth with function growth

#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "countra/machine.hpp"

namespace countra {

// --------------------------------------------------------------------------
// Canonical machines.

// Accepts a^n b^n: count up on a, down on b, detour to a dead state when an
// a follows the first b. Acceptance requires counter zero in q0 or q1.
inline CounterMachine anbn_machine() {
    Alphabet alpha({"a", "b"});
    CounterMachine m(alpha, 3, 1);
    const Symbol a = 0, b = 1;
    for (std::uint32_t mask = 0; mask < 2; ++mask) {
        m.set_update(a, 0, mask, {UpdateAction::add(1)});
        m.set_transition(a, 0, mask, 0);
        m.set_update(b, 0, mask, {UpdateAction::add(-1)});
        m.set_transition(b, 0, mask, 1);
        m.set_update(b, 1, mask, {UpdateAction::add(-1)});
        m.set_transition(b, 1, mask, 1);
        m.set_update(a, 1, mask, {UpdateAction::add(0)});
        m.set_transition(a, 1, mask, 2);
        for (Symbol s = 0; s < 2; ++s) {
            m.set_update(s, 2, mask, {UpdateAction::add(0)});
            m.set_transition(s, 2, mask, 2);
        }
    }
    m.add_accept(0, 0);
    m.add_accept(1, 0);
    return m;
}

// Accepts a^m b^{2m} with a single counter: +2 per a, -1 per b; guard states
// reject symbols that arrive out of order.
inline CounterMachine amb2m_machine() {
    Alphabet alpha({"a", "b"});
    CounterMachine m(alpha, 3, 1);
    const Symbol a = 0, b = 1;
    for (std::uint32_t mask = 0; mask < 2; ++mask) {
        m.set_update(a, 0, mask, {UpdateAction::add(2)});
        m.set_transition(a, 0, mask, 0);
        m.set_update(b, 0, mask, {UpdateAction::add(-1)});
        m.set_transition(b, 0, mask, 1);
        m.set_update(b, 1, mask, {UpdateAction::add(-1)});
        m.set_transition(b, 1, mask, 1);
        m.set_update(a, 1, mask, {UpdateAction::add(0)});
        m.set_transition(a, 1, mask, 2);
        for (Symbol s = 0; s < 2; ++s) {
            m.set_update(s, 2, mask, {UpdateAction::add(0)});
            m.set_transition(s, 2, mask, 2);
        }
    }
    m.add_accept(0, 0);
    m.add_accept(1, 0);
    return m;
}

// The two-counter companion: counter 1 counts a's down through the first
// half of the b block while counter 2 counts those b's, then counter 2 is
// drained through the second half. All updates are +-1. The b that observes
// (counter1 = 0, counter2 > 0) both switches to the draining state and
// consumes one unit, otherwise the halves would misalign.
inline CounterMachine amb2m_incremental_machine() {
    Alphabet alpha({"a", "b"});
    CounterMachine m(alpha, 3, 2);
    const Symbol a = 0, b = 1;
    const State fill = 0, drain = 1, dead = 2;
    const auto plus = [](Counter x, Counter y) {
        return std::vector<UpdateAction>{UpdateAction::add(x), UpdateAction::add(y)};
    };
    for (std::uint32_t mask = 0; mask < 4; ++mask) {
        const bool c1_nonzero = mask & 1u;
        const bool c2_nonzero = mask & 2u;
        // fill: a's allowed until any b arrived; b moves a-count to b-count.
        if (!c2_nonzero) {
            m.set_update(a, fill, mask, plus(1, 0));
            m.set_transition(a, fill, mask, fill);
        } else {
            m.set_update(a, fill, mask, plus(0, 0));
            m.set_transition(a, fill, mask, dead);
        }
        if (c1_nonzero) {
            m.set_update(b, fill, mask, plus(-1, 1));
            m.set_transition(b, fill, mask, fill);
        } else if (c2_nonzero) {
            m.set_update(b, fill, mask, plus(0, -1));
            m.set_transition(b, fill, mask, drain);
        } else {
            m.set_update(b, fill, mask, plus(0, 0));
            m.set_transition(b, fill, mask, dead);  // b before any a
        }
        m.set_update(b, drain, mask, plus(0, -1));
        m.set_transition(b, drain, mask, drain);
        m.set_update(a, drain, mask, plus(0, 0));
        m.set_transition(a, drain, mask, dead);
        for (Symbol s = 0; s < 2; ++s) {
            m.set_update(s, dead, mask, plus(0, 0));
            m.set_transition(s, dead, mask, dead);
        }
    }
    m.add_accept(fill, 0);
    m.add_accept(drain, 0);
    return m;
}

// Balanced parentheses: a closing symbol with the counter already at zero is
// a permanent failure, which the zero-check can see before the step.
inline CounterMachine dyck1_machine() {
    Alphabet alpha({"(", ")"});
    CounterMachine m(alpha, 2, 1);
    const Symbol open = 0, close = 1;
    for (std::uint32_t mask = 0; mask < 2; ++mask) {
        m.set_update(open, 0, mask, {UpdateAction::add(1)});
        m.set_transition(open, 0, mask, 0);
        if (mask & 1u) {
            m.set_update(close, 0, mask, {UpdateAction::add(-1)});
            m.set_transition(close, 0, mask, 0);
        } else {
            m.set_update(close, 0, mask, {UpdateAction::add(0)});
            m.set_transition(close, 0, mask, 1);
        }
        for (Symbol s = 0; s < 2; ++s) {
            m.set_update(s, 1, mask, {UpdateAction::add(0)});
            m.set_transition(s, 1, mask, 1);
        }
    }
    m.add_accept(0, 0);
    return m;
}

// One-state threshold machine accepting strings whose final #a - #b is at
// most `bound`.
inline CounterMachine threshold_leq_machine(Counter bound) {
    Alphabet alpha({"a", "b"});
    CounterMachine m(alpha, 1, 1, std::vector<Counter>{bound});
    m.set_uniform_update(0, {UpdateAction::add(1)});
    m.set_uniform_update(1, {UpdateAction::add(-1)});
    m.set_uniform_transition(0, 0);
    m.set_uniform_transition(1, 0);
    m.add_accept(0, 1);  // pattern bit 1 means c <= bound
    return m;
}

// Stateless simplified machine accepting strings with #a = #b, any order.
inline CounterMachine eq_ab_machine() {
    Alphabet alpha({"a", "b"});
    CounterMachine m(alpha, 1, 1);
    m.set_uniform_update(0, {UpdateAction::add(1)});
    m.set_uniform_update(1, {UpdateAction::add(-1)});
    m.set_uniform_transition(0, 0);
    m.set_uniform_transition(1, 0);
    m.add_accept(0, 0);
    return m;
}

// Stateless simplified machine with a reset: accepts strings with no a after
// the last r (the r token wipes the count).
inline CounterMachine reset_qscl_machine() {
    Alphabet alpha({"a", "r"});
    CounterMachine m(alpha, 1, 1);
    m.set_uniform_update(0, {UpdateAction::add(1)});
    m.set_uniform_update(1, {UpdateAction::reset()});
    m.set_uniform_transition(0, 0);
    m.set_uniform_transition(1, 0);
    m.add_accept(0, 0);
    return m;
}

// --------------------------------------------------------------------------
// Single-counter arithmetic of the two-counter linear-combination argument:
// a machine adding u_a per a and u_b per b reaches m*u_a + l*u_b on a^m b^l.

inline Counter scl_counter_decomposition(Counter u_a, Counter u_b, std::uint64_t m, std::uint64_t l) {
    return checked_add(checked_mul(u_a, static_cast<Counter>(m)),
                       checked_mul(u_b, static_cast<Counter>(l)));
}

// --------------------------------------------------------------------------
// Prefix-arity grammars: a token inventory with one arity per token; a token
// of arity r must be followed by exactly r complete expressions.

class GrammarLm {
public:
    GrammarLm(std::vector<std::pair<std::string, std::uint32_t>> inventory)
        : inventory_(std::move(inventory)) {
        if (inventory_.empty()) throw ContractError("grammar inventory must be non-empty");
        bool has_value = false;
        std::vector<std::string> tokens;
        for (const auto& [tok, arity] : inventory_) {
            tokens.push_back(tok);
            if (arity == 0) has_value = true;
            if (arity > 30) throw ContractError("token arity out of range");
            if (arity > max_arity_) max_arity_ = arity;
        }
        if (!has_value) throw ContractError("grammar needs at least one arity-0 token");
        if (max_arity_ == 0) throw ContractError("grammar needs at least one operator token");
        alphabet_ = Alphabet(std::move(tokens));
        arities_.resize(inventory_.size());
        for (std::size_t i = 0; i < inventory_.size(); ++i) arities_[i] = inventory_[i].second;
    }

    const Alphabet& alphabet() const { return alphabet_; }
    std::uint32_t max_arity() const { return max_arity_; }
    const std::vector<std::pair<std::string, std::uint32_t>>& inventory() const { return inventory_; }

    std::uint32_t arity(Symbol s) const { return arities_[s]; }
    std::uint32_t arity_of(std::string_view token) const { return arities_[alphabet_.index_of(token)]; }

private:
    std::vector<std::pair<std::string, std::uint32_t>> inventory_;
    std::vector<std::uint32_t> arities_;
    std::uint32_t max_arity_ = 0;
    Alphabet alphabet_;
};

inline GrammarLm boolean_grammar() {
    return GrammarLm({{"0", 0}, {"1", 0}, {"∧", 2}, {"∨", 2}});
}

// The arity-sum decider: start at 0, add arity(x_t) - 1 per token, accept
// exactly when the final value is -1. Deliberately no mid-string guard; see
// lm_decide_guarded for the variant that also rejects early dips.
inline bool lm_decide(const GrammarLm& g, const Word& w) {
    Counter c = 0;
    for (Symbol s : w) {
        if (s >= g.alphabet().size()) throw InputError("symbol outside the grammar inventory");
        c = checked_add(c, static_cast<Counter>(g.arity(s)) - 1);
    }
    return c == -1;
}

// Same sum test, but a prefix reaching -1 before the last token means a
// complete expression ended early, so the string cannot be well-formed.
inline bool lm_decide_guarded(const GrammarLm& g, const Word& w) {
    Counter c = 0;
    bool ok = true;
    for (std::size_t t = 0; t < w.size(); ++t) {
        if (w[t] >= g.alphabet().size()) throw InputError("symbol outside the grammar inventory");
        c = checked_add(c, static_cast<Counter>(g.arity(w[t])) - 1);
        if (t + 1 < w.size() && c < 0) ok = false;
    }
    return ok && c == -1;
}

inline bool lm_decide(const GrammarLm& g, std::span<const std::string> tokens) {
    return lm_decide(g, to_word(g.alphabet(), tokens));
}

inline bool lm_decide_guarded(const GrammarLm& g, std::span<const std::string> tokens) {
    return lm_decide_guarded(g, to_word(g.alphabet(), tokens));
}

// Recursive-descent recognizer for the same grammar: one expression is a
// token followed by arity-many expressions; the whole input must be exactly
// one expression.
inline bool grammar_accepts(const GrammarLm& g, const Word& w) {
    // Iterative descent: `need` counts expressions still owed.
    std::uint64_t need = 1;
    for (std::size_t t = 0; t < w.size(); ++t) {
        if (need == 0) return false;  // a complete parse ended before the input did
        if (w[t] >= g.alphabet().size()) throw InputError("symbol outside the grammar inventory");
        need = need - 1 + g.arity(w[t]);
    }
    return need == 0 && !w.empty();
}

inline bool grammar_accepts(const GrammarLm& g, std::span<const std::string> tokens) {
    return grammar_accepts(g, to_word(g.alphabet(), tokens));
}

// --------------------------------------------------------------------------
// Machine compilations. The running value c of the arity-sum decider ends at
// -1, which a zero-check cannot see directly, so the machine tracks c + 1:
// the first token adds its full arity (absorbing the +1 offset) and each
// later token adds arity - 1. Acceptance is then "counter reads zero after
// at least one token".

inline CounterMachine lm_machine(const GrammarLm& g) {
    CounterMachine m(g.alphabet(), 2, 1);
    for (Symbol s = 0; s < g.alphabet().size(); ++s) {
        const Counter a = static_cast<Counter>(g.arity(s));
        for (std::uint32_t mask = 0; mask < 2; ++mask) {
            m.set_update(s, 0, mask, {UpdateAction::add(a)});
            m.set_transition(s, 0, mask, 1);
            m.set_update(s, 1, mask, {UpdateAction::add(a - 1)});
            m.set_transition(s, 1, mask, 1);
        }
    }
    m.add_accept(1, 0);
    return m;
}

// The guarded compilation adds a dead state entered when a token arrives
// while the shifted counter already reads zero (i.e. c hit -1 mid-string).
inline CounterMachine lm_machine_guarded(const GrammarLm& g) {
    CounterMachine m(g.alphabet(), 3, 1);
    for (Symbol s = 0; s < g.alphabet().size(); ++s) {
        const Counter a = static_cast<Counter>(g.arity(s));
        for (std::uint32_t mask = 0; mask < 2; ++mask) {
            m.set_update(s, 0, mask, {UpdateAction::add(a)});
            m.set_transition(s, 0, mask, 1);
            if (mask == 0) {
                m.set_update(s, 1, mask, {UpdateAction::add(0)});
                m.set_transition(s, 1, mask, 2);
            } else {
                m.set_update(s, 1, mask, {UpdateAction::add(a - 1)});
                m.set_transition(s, 1, mask, 1);
            }
            m.set_update(s, 2, mask, {UpdateAction::add(0)});
            m.set_transition(s, 2, mask, 2);
        }
    }
    m.add_accept(1, 0);
    return m;
}

// --------------------------------------------------------------------------
// Boolean prefix expressions over the inventory {0, 1, AND, OR}.

using BoolExpr = std::vector<std::string>;

namespace detail {

enum class BoolTok : std::uint8_t { kFalse, kTrue, kAnd, kOr };

inline std::vector<BoolTok> bool_tokens(std::span<const std::string> tokens) {
    std::vector<BoolTok> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (t == "0") out.push_back(BoolTok::kFalse);
        else if (t == "1") out.push_back(BoolTok::kTrue);
        else if (t == "∧") out.push_back(BoolTok::kAnd);
        else if (t == "∨") out.push_back(BoolTok::kOr);
        else throw InputError("token '" + t + "' is not part of the boolean inventory");
    }
    return out;
}

// Right-to-left stack evaluation of a prefix expression. Returns nullopt for
// ill-formed input. Equivalent to recursive descent but immune to deep
// nesting.
inline std::optional<int> eval_prefix(std::span<const BoolTok> code) {
    std::vector<int> stack;
    for (std::size_t i = code.size(); i-- > 0;) {
        switch (code[i]) {
            case BoolTok::kFalse: stack.push_back(0); break;
            case BoolTok::kTrue: stack.push_back(1); break;
            case BoolTok::kAnd:
            case BoolTok::kOr: {
                if (stack.size() < 2) return std::nullopt;
                const int lhs = stack.back();
                stack.pop_back();
                const int rhs = stack.back();
                stack.pop_back();
                stack.push_back(code[i] == BoolTok::kAnd ? (lhs & rhs) : (lhs | rhs));
                break;
            }
        }
    }
    if (stack.size() != 1) return std::nullopt;
    return stack.back();
}

}  // namespace detail

// Evaluates a well-formed boolean prefix expression to 0 or 1; ill-formed
// input is a parse error.
inline int bool_eval(std::span<const std::string> tokens) {
    const auto code = detail::bool_tokens(tokens);
    const auto v = detail::eval_prefix(code);
    if (!v) throw ParseError("not a well-formed boolean prefix expression");
    return *v;
}

inline int bool_eval(const BoolExpr& e) { return bool_eval(std::span<const std::string>(e)); }

// --------------------------------------------------------------------------
// Prefix functions: an operator-only prefix of p binary connectives denotes
// a function of p + 1 boolean arguments, obtained by appending every value
// suffix and evaluating. Argument 1 is the most significant index bit.

struct PrefixFunction {
    std::uint32_t arity = 0;
    std::vector<std::uint8_t> table;  // 1 << arity entries

    friend bool operator==(const PrefixFunction&, const PrefixFunction&) = default;
};

inline PrefixFunction prefix_function(std::span<const std::string> ops) {
    const std::uint32_t p = static_cast<std::uint32_t>(ops.size());
    if (p + 1 > 22) throw ResourceError("prefix too long for truth-table enumeration");
    auto code = detail::bool_tokens(ops);
    for (const auto t : code) {
        if (t != detail::BoolTok::kAnd && t != detail::BoolTok::kOr) {
            throw InputError("prefix function requires operator tokens only");
        }
    }
    PrefixFunction f;
    f.arity = p + 1;
    f.table.resize(1u << f.arity);
    code.resize(p + f.arity);
    for (std::uint32_t v = 0; v < (1u << f.arity); ++v) {
        for (std::uint32_t j = 0; j < f.arity; ++j) {
            const bool bit = (v >> (f.arity - 1 - j)) & 1u;
            code[p + j] = bit ? detail::BoolTok::kTrue : detail::BoolTok::kFalse;
        }
        const auto r = detail::eval_prefix(code);
        if (!r) throw ContractError("operator prefix plus value suffix failed to parse");
        f.table[v] = static_cast<std::uint8_t>(*r);
    }
    return f;
}

inline PrefixFunction prefix_function(const std::vector<std::string>& ops) {
    return prefix_function(std::span<const std::string>(ops));
}

// --------------------------------------------------------------------------
// Configuration census: for each prefix length p, how many distinct machine
// configurations can operator-only prefixes reach, versus how many distinct
// prefix functions those prefixes denote. The machine side is polynomial in
// p, the function side doubles with every operator.

struct CensusRow {
    std::uint32_t p = 0;
    std::uint64_t reachable_configs = 0;
    std::uint64_t distinct_functions = 0;
};

struct CensusReport {
    std::vector<CensusRow> rows;
    std::optional<std::uint32_t> truncated_at;  // set when the guard clamped max_p
};

inline constexpr std::uint32_t kCensusGuard = 12;

inline CensusReport config_census(const CounterMachine& machine, const GrammarLm& grammar,
                                  std::uint32_t max_p, std::uint32_t guard = kCensusGuard) {
    // The function side is specific to the two boolean connectives; require
    // them in both the grammar and the machine alphabet.
    const std::vector<std::string> op_tokens = {"∧", "∨"};
    std::vector<Symbol> machine_ops;
    for (const auto& t : op_tokens) {
        if (grammar.arity_of(t) != 2) {
            throw InputError("census grammar must give '" + t + "' arity 2");
        }
        machine_ops.push_back(machine.alphabet().index_of(t));
    }

    CensusReport report;
    std::uint32_t effective = max_p;
    if (effective > guard) {
        effective = guard;
        report.truncated_at = guard;
    }

    std::vector<std::string> ops;
    Word word;
    for (std::uint32_t p = 0; p <= effective; ++p) {
        std::unordered_set<Configuration, ConfigurationHash> configs;
        std::unordered_set<std::string> functions;
        // 2^p operator prefixes, encoded by the bits of `choice`.
        for (std::uint64_t choice = 0; choice < (1ull << p); ++choice) {
            ops.clear();
            word.clear();
            for (std::uint32_t j = 0; j < p; ++j) {
                const std::uint32_t pick = (choice >> j) & 1u;
                ops.push_back(op_tokens[pick]);
                word.push_back(machine_ops[pick]);
            }
            Configuration cfg = initial_configuration(machine);
            for (Symbol s : word) cfg = step(machine, cfg, s);
            configs.insert(std::move(cfg));
            const PrefixFunction f = prefix_function(ops);
            functions.emplace(f.table.begin(), f.table.end());
        }
        report.rows.push_back({p, configs.size(), functions.size()});
    }
    return report;
}

inline std::string census_table(const CensusReport& report) {
    std::string out = "  p  reachable_configs  distinct_functions\n";
    for (const auto& row : report.rows) {
        char buf[80];
        std::snprintf(buf, sizeof buf, "%3u  %17llu  %18llu\n", row.p,
                      static_cast<unsigned long long>(row.reachable_configs),
                      static_cast<unsigned long long>(row.distinct_functions));
        out += buf;
    }
    if (report.truncated_at) {
        out += "(truncated at the p = " + std::to_string(*report.truncated_at) + " resource guard)\n";
    }
    return out;
}

}  // namespace countra
