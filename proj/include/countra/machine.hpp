#pragma once
// Core model for real-time counter machines: alphabet, update actions,
// zero-check patterns, the machine table itself, execution semantics and
// variant classification.
//
// A machine reads one input symbol per step. Both the counter update and the
// state transition are chosen by the zero-check pattern of the counters
// *before* the step; acceptance looks at (state, pattern) after the last
// symbol. Counters are exact signed 64-bit integers and every arithmetic
// step is overflow-checked.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace countra {

// --------------------------------------------------------------------------
// Error taxonomy. The CLI maps these onto exit codes, so keep them distinct.

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller broke an API precondition (sizes, ranges, alphabet mismatch).
struct ContractError : Error {
    using Error::Error;
};

// Bad user-supplied data: unknown symbol, malformed token stream.
struct InputError : Error {
    using Error::Error;
};

// Malformed file content (JSON machines, grammars, LSTM weights).
struct ParseError : Error {
    using Error::Error;
};

// Operation is defined only for a machine variant the argument is not in.
struct UnsupportedVariantError : Error {
    using Error::Error;
};

// An enumeration or table-size guard tripped.
struct ResourceError : Error {
    using Error::Error;
};

// Signed 64-bit counter arithmetic overflowed; results would be silently
// wrong, so this is a hard error rather than a saturation.
struct OverflowError : Error {
    using Error::Error;
};

using Counter = std::int64_t;
using State = std::uint32_t;
using Symbol = std::uint32_t;  // index into an Alphabet
using Word = std::vector<Symbol>;

inline Counter checked_add(Counter a, Counter b) {
    Counter r;
    if (__builtin_add_overflow(a, b, &r)) {
        throw OverflowError("counter overflow: " + std::to_string(a) + " + " + std::to_string(b));
    }
    return r;
}

inline Counter checked_mul(Counter a, Counter b) {
    Counter r;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw OverflowError("counter overflow: " + std::to_string(a) + " * " + std::to_string(b));
    }
    return r;
}

// --------------------------------------------------------------------------
// Alphabet: an ordered list of distinct, non-empty tokens. The order is
// significant; Parikh vectors and serialized tables follow it.

class Alphabet {
public:
    Alphabet() = default;

    explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
        if (symbols_.empty()) throw ContractError("alphabet must be non-empty");
        for (Symbol i = 0; i < symbols_.size(); ++i) {
            if (symbols_[i].empty()) throw ContractError("alphabet tokens must be non-empty");
            if (!index_.emplace(symbols_[i], i).second) {
                throw ContractError("duplicate alphabet token '" + symbols_[i] + "'");
            }
        }
    }

    std::uint32_t size() const { return static_cast<std::uint32_t>(symbols_.size()); }

    const std::string& symbol(Symbol i) const {
        if (i >= symbols_.size()) throw ContractError("symbol index out of range");
        return symbols_[i];
    }

    const std::vector<std::string>& symbols() const { return symbols_; }

    std::optional<Symbol> find(std::string_view token) const {
        auto it = index_.find(std::string(token));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    Symbol index_of(std::string_view token) const {
        if (auto i = find(token)) return *i;
        throw InputError("unknown symbol '" + std::string(token) + "'");
    }

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.symbols_ == b.symbols_; }

private:
    std::vector<std::string> symbols_;
    std::map<std::string, Symbol, std::less<>> index_;
};

// --------------------------------------------------------------------------
// One counter's worth of update: either add a constant or reset to zero.

struct UpdateAction {
    bool is_reset = false;
    Counter amount = 0;  // ignored when is_reset

    static UpdateAction add(Counter m) { return UpdateAction{false, m}; }
    static UpdateAction reset() { return UpdateAction{true, 0}; }

    Counter apply(Counter c) const { return is_reset ? 0 : checked_add(c, amount); }

    friend bool operator==(const UpdateAction&, const UpdateAction&) = default;
};

inline std::string to_string(const UpdateAction& a) {
    if (a.is_reset) return "x0";
    return (a.amount >= 0 ? "+" : "") + std::to_string(a.amount);
}

// --------------------------------------------------------------------------
// Zero-check pattern over k counters. Bit i is 0 when counter i "reads zero"
// and 1 otherwise. For plain machines "reads zero" means the value is 0; a
// threshold machine instead sets bit i to 1 exactly when c_i <= m_i.

struct ZeroPattern {
    std::uint32_t bits = 0;
    std::uint32_t width = 0;

    bool bit(std::uint32_t i) const { return (bits >> i) & 1u; }

    // Counter 0 is the first character.
    std::string str() const {
        std::string s(width, '0');
        for (std::uint32_t i = 0; i < width; ++i) {
            if (bit(i)) s[i] = '1';
        }
        return s;
    }

    friend bool operator==(const ZeroPattern&, const ZeroPattern&) = default;
};

struct Configuration {
    State state = 0;
    std::vector<Counter> counters;

    friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct ConfigurationHash {
    std::size_t operator()(const Configuration& c) const {
        std::size_t h = c.state * 0x9e3779b97f4a7c15ULL;
        for (Counter v : c.counters) {
            h ^= std::hash<Counter>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

// --------------------------------------------------------------------------
// The machine proper. Tables are dense and total over
// alphabet x states x zero-patterns; state 0 is the initial state and all
// counters start at 0. An optional threshold profile (one bound per counter)
// switches the pattern semantics from zero-checks to c <= m predicates.

class CounterMachine {
public:
    CounterMachine() = default;

    CounterMachine(Alphabet alphabet, State num_states, std::uint32_t num_counters,
                   std::optional<std::vector<Counter>> thresholds = std::nullopt)
        : alphabet_(std::move(alphabet)), num_states_(num_states), num_counters_(num_counters),
          thresholds_(std::move(thresholds)) {
        if (num_states_ == 0) throw ContractError("machine needs at least one state");
        if (num_counters_ > kMaxCounters) {
            throw ResourceError("too many counters (" + std::to_string(num_counters_) +
                                "); zero-pattern table would need 2^k entries");
        }
        if (thresholds_ && thresholds_->size() != num_counters_) {
            throw ContractError("threshold profile must list exactly one bound per counter");
        }
        num_patterns_ = 1u << num_counters_;
        const std::uint64_t cells =
            std::uint64_t(alphabet_.size()) * num_states_ * num_patterns_;
        if (cells > kMaxTableCells || cells * std::max<std::uint64_t>(num_counters_, 1) > kMaxTableActions) {
            throw ResourceError("machine table too large (" + std::to_string(cells) + " cells)");
        }
        updates_.assign(cells * num_counters_, UpdateAction::add(0));
        transitions_.assign(cells, 0);
        accept_.assign(std::uint64_t(num_states_) * num_patterns_, 0);
    }

    const Alphabet& alphabet() const { return alphabet_; }
    State num_states() const { return num_states_; }
    std::uint32_t num_counters() const { return num_counters_; }
    std::uint32_t num_patterns() const { return num_patterns_; }
    bool is_threshold() const { return thresholds_.has_value(); }
    const std::optional<std::vector<Counter>>& thresholds() const { return thresholds_; }

    std::span<const UpdateAction> update(Symbol s, State q, std::uint32_t mask) const {
        return {updates_.data() + cell(s, q, mask) * num_counters_, num_counters_};
    }

    State transition(Symbol s, State q, std::uint32_t mask) const {
        return transitions_[cell(s, q, mask)];
    }

    bool accepting(State q, std::uint32_t mask) const {
        check_state_mask(q, mask);
        return accept_[std::uint64_t(q) * num_patterns_ + mask] != 0;
    }

    void set_update(Symbol s, State q, std::uint32_t mask, std::span<const UpdateAction> actions) {
        if (actions.size() != num_counters_) {
            throw ContractError("update vector must have one action per counter");
        }
        std::size_t base = cell(s, q, mask) * num_counters_;
        for (std::uint32_t i = 0; i < num_counters_; ++i) updates_[base + i] = actions[i];
    }

    void set_update(Symbol s, State q, std::uint32_t mask, std::initializer_list<UpdateAction> actions) {
        set_update(s, q, mask, std::span<const UpdateAction>(actions.begin(), actions.size()));
    }

    void set_transition(Symbol s, State q, std::uint32_t mask, State next) {
        if (next >= num_states_) throw ContractError("transition target out of range");
        transitions_[cell(s, q, mask)] = next;
    }

    // Convenience for tables that do not consult state or pattern.
    void set_uniform_update(Symbol s, std::span<const UpdateAction> actions) {
        for (State q = 0; q < num_states_; ++q) {
            for (std::uint32_t m = 0; m < num_patterns_; ++m) set_update(s, q, m, actions);
        }
    }

    void set_uniform_update(Symbol s, std::initializer_list<UpdateAction> actions) {
        set_uniform_update(s, std::span<const UpdateAction>(actions.begin(), actions.size()));
    }

    void set_uniform_transition(Symbol s, State next) {
        for (State q = 0; q < num_states_; ++q) {
            for (std::uint32_t m = 0; m < num_patterns_; ++m) set_transition(s, q, m, next);
        }
    }

    void add_accept(State q, std::uint32_t mask) {
        check_state_mask(q, mask);
        accept_[std::uint64_t(q) * num_patterns_ + mask] = 1;
    }

    friend bool operator==(const CounterMachine& a, const CounterMachine& b) {
        return a.alphabet_ == b.alphabet_ && a.num_states_ == b.num_states_ &&
               a.num_counters_ == b.num_counters_ && a.updates_ == b.updates_ &&
               a.transitions_ == b.transitions_ && a.accept_ == b.accept_ &&
               a.thresholds_ == b.thresholds_;
    }

    static constexpr std::uint32_t kMaxCounters = 24;
    static constexpr std::uint64_t kMaxTableCells = 1ull << 24;
    static constexpr std::uint64_t kMaxTableActions = 1ull << 26;

private:
    std::size_t cell(Symbol s, State q, std::uint32_t mask) const {
        if (s >= alphabet_.size()) throw ContractError("symbol index out of range");
        check_state_mask(q, mask);
        return (std::size_t(s) * num_states_ + q) * num_patterns_ + mask;
    }

    void check_state_mask(State q, std::uint32_t mask) const {
        if (q >= num_states_) throw ContractError("state index out of range");
        if (mask >= num_patterns_) throw ContractError("zero-pattern out of range");
    }

    Alphabet alphabet_;
    State num_states_ = 1;
    std::uint32_t num_counters_ = 0;
    std::uint32_t num_patterns_ = 1;
    std::vector<UpdateAction> updates_;     // [cell * k + counter]
    std::vector<State> transitions_;        // [cell]
    std::vector<char> accept_;              // [state * patterns + mask]
    std::optional<std::vector<Counter>> thresholds_;
};

// --------------------------------------------------------------------------
// Execution.

inline ZeroPattern mask_of(const CounterMachine& m, std::span<const Counter> counters) {
    if (counters.size() != m.num_counters()) {
        throw ContractError("counter vector length does not match the machine");
    }
    ZeroPattern p{0, m.num_counters()};
    if (m.is_threshold()) {
        const auto& th = *m.thresholds();
        for (std::uint32_t i = 0; i < counters.size(); ++i) {
            if (counters[i] <= th[i]) p.bits |= 1u << i;
        }
    } else {
        for (std::uint32_t i = 0; i < counters.size(); ++i) {
            if (counters[i] != 0) p.bits |= 1u << i;
        }
    }
    return p;
}

inline Configuration initial_configuration(const CounterMachine& m) {
    return Configuration{0, std::vector<Counter>(m.num_counters(), 0)};
}

// One step: the pre-step pattern selects both the update and the transition.
inline Configuration step(const CounterMachine& m, const Configuration& cfg, Symbol s) {
    if (cfg.state >= m.num_states() || cfg.counters.size() != m.num_counters()) {
        throw ContractError("configuration does not belong to this machine");
    }
    const ZeroPattern mask = mask_of(m, cfg.counters);
    const auto actions = m.update(s, cfg.state, mask.bits);
    Configuration out;
    out.counters.resize(m.num_counters());
    for (std::uint32_t i = 0; i < m.num_counters(); ++i) {
        out.counters[i] = actions[i].apply(cfg.counters[i]);
    }
    out.state = m.transition(s, cfg.state, mask.bits);
    return out;
}

inline bool accepts(const CounterMachine& m, const Word& w) {
    Configuration cfg = initial_configuration(m);
    for (Symbol s : w) cfg = step(m, cfg, s);
    return m.accepting(cfg.state, mask_of(m, cfg.counters).bits);
}

// All |w| + 1 configurations, starting from <q0, 0>.
inline std::vector<Configuration> run_trace(const CounterMachine& m, const Word& w) {
    std::vector<Configuration> trace;
    trace.reserve(w.size() + 1);
    trace.push_back(initial_configuration(m));
    for (Symbol s : w) trace.push_back(step(m, trace.back(), s));
    return trace;
}

inline Word to_word(const Alphabet& a, std::span<const std::string> tokens) {
    Word w;
    w.reserve(tokens.size());
    for (const auto& t : tokens) w.push_back(a.index_of(t));
    return w;
}

inline bool accepts(const CounterMachine& m, std::span<const std::string> tokens) {
    return accepts(m, to_word(m.alphabet(), tokens));
}

// --------------------------------------------------------------------------
// Trace rendering in the arrow style used by the run command:
//   <0, q0> -a-> <1, q0> ... with the counters printed before the state.

inline std::string render_configuration(const CounterMachine&, const Configuration& c) {
    std::ostringstream os;
    os << "⟨";
    for (std::uint32_t i = 0; i < c.counters.size(); ++i) {
        if (i) os << ' ';
        os << c.counters[i];
    }
    if (!c.counters.empty()) os << ", ";
    os << 'q' << c.state << "⟩";
    return os.str();
}

inline std::string render_trace(const CounterMachine& m, const Word& w,
                                const std::vector<Configuration>& trace, bool accepted) {
    if (trace.size() != w.size() + 1) throw ContractError("trace length must be |input| + 1");
    std::ostringstream os;
    os << render_configuration(m, trace[0]);
    for (std::size_t t = 0; t < w.size(); ++t) {
        os << " →" << m.alphabet().symbol(w[t]) << ' ' << render_configuration(m, trace[t + 1]);
    }
    os << (accepted ? " ∈ F" : " ∉ F");
    return os.str();
}

// --------------------------------------------------------------------------
// Variant classification. Each flag is true exactly when its violation list
// is empty; the lists carry human-readable witnesses from the table.

struct VariantReport {
    bool is_simplified = false;
    bool is_incremental = false;
    bool is_stateless = false;
    bool is_threshold = false;
    std::vector<std::string> simplified_violations;
    std::vector<std::string> incremental_violations;
    std::vector<std::string> stateless_violations;
    std::vector<std::string> threshold_violations;
};

namespace detail {

// Collects at most `cap` witnesses but keeps the true count.
class ViolationList {
public:
    explicit ViolationList(std::size_t cap = 8) : cap_(cap) {}

    void add(const std::string& s) {
        ++total_;
        if (items_.size() < cap_) items_.push_back(s);
    }

    std::vector<std::string> take() {
        if (total_ > items_.size()) {
            items_.push_back("... and " + std::to_string(total_ - items_.size()) + " more");
        }
        return std::move(items_);
    }

    bool empty() const { return total_ == 0; }

private:
    std::size_t cap_;
    std::size_t total_ = 0;
    std::vector<std::string> items_;
};

inline std::string describe_entry(const CounterMachine& m, Symbol s, State q, std::uint32_t mask) {
    std::ostringstream os;
    os << "u(" << m.alphabet().symbol(s) << ", q" << q << ", mask \""
       << ZeroPattern{mask, m.num_counters()}.str() << "\")";
    return os.str();
}

inline std::string describe_actions(std::span<const UpdateAction> acts) {
    std::string s = "[";
    for (std::size_t i = 0; i < acts.size(); ++i) {
        if (i) s += ", ";
        s += to_string(acts[i]);
    }
    return s + "]";
}

}  // namespace detail

inline VariantReport classify(const CounterMachine& m) {
    VariantReport r;
    detail::ViolationList simplified, incremental, stateless, threshold;

    if (m.num_states() > 1) {
        stateless.add("num_states = " + std::to_string(m.num_states()) + " (want 1)");
    }
    if (!m.is_threshold()) {
        threshold.add("no threshold profile");
    }

    for (Symbol s = 0; s < m.alphabet().size(); ++s) {
        // The simplified form conditions updates on the symbol alone, with
        // every action in {-1, +0, +1, x0}; compare all cells against the
        // (q0, all-zero pattern) reference vector.
        const auto ref = m.update(s, 0, 0);
        for (State q = 0; q < m.num_states(); ++q) {
            for (std::uint32_t mask = 0; mask < m.num_patterns(); ++mask) {
                const auto acts = m.update(s, q, mask);
                for (std::uint32_t i = 0; i < m.num_counters(); ++i) {
                    if (!acts[i].is_reset && (acts[i].amount > 1 || acts[i].amount < -1)) {
                        incremental.add(detail::describe_entry(m, s, q, mask) + "[" +
                                        std::to_string(i) + "] = " + to_string(acts[i]));
                        simplified.add(detail::describe_entry(m, s, q, mask) + "[" +
                                       std::to_string(i) + "] = " + to_string(acts[i]) +
                                       " outside {-1, +0, +1, x0}");
                    }
                }
                if ((q != 0 || mask != 0) &&
                    !std::equal(acts.begin(), acts.end(), ref.begin(), ref.end())) {
                    simplified.add(detail::describe_entry(m, s, q, mask) + " = " +
                                   detail::describe_actions(acts) + " differs from " +
                                   detail::describe_entry(m, s, 0, 0) + " = " +
                                   detail::describe_actions(ref));
                }
            }
        }
    }

    r.is_simplified = simplified.empty();
    r.is_incremental = incremental.empty();
    r.is_stateless = stateless.empty();
    r.is_threshold = threshold.empty();
    r.simplified_violations = simplified.take();
    r.incremental_violations = incremental.take();
    r.stateless_violations = stateless.take();
    r.threshold_violations = threshold.take();
    return r;
}

}  // namespace countra
