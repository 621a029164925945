#pragma once
// Parikh images and the compiled form of simplified stateless machine
// languages: membership depends only on which counters read zero at the end,
// and each counter's final value is a linear function of the symbol counts
// in the suffix after its last reset token. decompose_qscl extracts that
// structure; semilinear_member evaluates it from Parikh arithmetic alone,
// without stepping the machine, so the two sides can be differenced.

#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "countra/enumerate.hpp"
#include "countra/machine.hpp"

namespace countra {

using ParikhVector = std::vector<std::uint64_t>;

inline ParikhVector parikh(const Alphabet& a, const Word& w) {
    ParikhVector v(a.size(), 0);
    for (Symbol s : w) {
        if (s >= a.size()) throw InputError("symbol outside the alphabet");
        ++v[s];
    }
    return v;
}

inline ParikhVector parikh(const Alphabet& a, std::span<const std::string> tokens) {
    return parikh(a, to_word(a, tokens));
}

// --------------------------------------------------------------------------
// One counter of a decomposed machine: symbols in `reset_symbols` wipe the
// counter, every other symbol adds its coefficient. The final value is
// therefore coefficients . Parikh(suffix after the last reset symbol).

struct CounterCondition {
    std::vector<Counter> coefficients;  // one per alphabet symbol; 0 for reset symbols
    std::vector<Symbol> reset_symbols;
};

// One accepting zero-check pattern, with the per-counter value conditions
// that realize it. Bit i of `mask` set means counter i must end nonzero.
struct SemilinearTerm {
    std::uint32_t mask = 0;
};

struct QsclDecomposition {
    Alphabet alphabet;
    std::vector<CounterCondition> counters;
    std::vector<SemilinearTerm> terms;  // the language is the union over terms
};

inline QsclDecomposition decompose_qscl(const CounterMachine& m) {
    const VariantReport v = classify(m);
    if (!v.is_stateless) {
        throw UnsupportedVariantError("decomposition needs a stateless machine: " +
                                      v.stateless_violations.front());
    }
    if (!v.is_simplified) {
        throw UnsupportedVariantError("decomposition needs a simplified machine: " +
                                      v.simplified_violations.front());
    }
    if (m.is_threshold()) {
        throw UnsupportedVariantError("decomposition reads zero-checks, not threshold checks");
    }

    QsclDecomposition d;
    d.alphabet = m.alphabet();
    d.counters.resize(m.num_counters());
    for (std::uint32_t i = 0; i < m.num_counters(); ++i) {
        d.counters[i].coefficients.assign(m.alphabet().size(), 0);
    }
    for (Symbol s = 0; s < m.alphabet().size(); ++s) {
        const auto actions = m.update(s, 0, 0);  // simplified: any cell is representative
        for (std::uint32_t i = 0; i < m.num_counters(); ++i) {
            if (actions[i].is_reset) {
                d.counters[i].reset_symbols.push_back(s);
            } else {
                d.counters[i].coefficients[s] = actions[i].amount;
            }
        }
    }
    for (std::uint32_t mask = 0; mask < m.num_patterns(); ++mask) {
        if (m.accepting(0, mask)) d.terms.push_back({mask});
    }
    return d;
}

// Final value of one decomposed counter on `w`, computed from the Parikh
// image of the suffix after the last reset symbol (the whole word when no
// reset symbol occurs).
inline Counter condition_value(const QsclDecomposition& d, const CounterCondition& cond,
                               const Word& w) {
    std::size_t suffix_start = 0;
    for (std::size_t t = w.size(); t-- > 0;) {
        bool is_reset = false;
        for (Symbol z : cond.reset_symbols) {
            if (w[t] == z) {
                is_reset = true;
                break;
            }
        }
        if (is_reset) {
            suffix_start = t + 1;
            break;
        }
    }
    const Word suffix(w.begin() + static_cast<std::ptrdiff_t>(suffix_start), w.end());
    const ParikhVector psi = parikh(d.alphabet, suffix);
    Counter value = 0;
    for (Symbol s = 0; s < d.alphabet.size(); ++s) {
        value = checked_add(value, checked_mul(cond.coefficients[s], static_cast<Counter>(psi[s])));
    }
    return value;
}

inline bool semilinear_member(const QsclDecomposition& d, const Word& w) {
    if (d.terms.empty()) return false;
    std::uint32_t final_mask = 0;
    for (std::uint32_t i = 0; i < d.counters.size(); ++i) {
        if (condition_value(d, d.counters[i], w) != 0) final_mask |= 1u << i;
    }
    for (const auto& term : d.terms) {
        if (term.mask == final_mask) return true;
    }
    return false;
}

inline bool semilinear_member(const QsclDecomposition& d, std::span<const std::string> tokens) {
    return semilinear_member(d, to_word(d.alphabet, tokens));
}

inline DiffReport verify_decomposition(const CounterMachine& m, const QsclDecomposition& d,
                                       std::uint32_t max_len,
                                       std::uint64_t cap = kDefaultEnumCap) {
    if (!(m.alphabet() == d.alphabet)) {
        throw ContractError("decomposition alphabet does not match the machine");
    }
    return difftest_oracle(m, [&](const Word& w) { return semilinear_member(d, w); }, max_len, cap);
}

// --------------------------------------------------------------------------
// The reset-free, accept-all-zero special case is a plain homogeneous linear
// system on the Parikh image: w is in the language iff row . Parikh(w) == 0
// for every row.

struct LinearConstraintSet {
    Alphabet alphabet;
    std::vector<std::vector<Counter>> rows;
};

inline std::optional<LinearConstraintSet> to_linear_constraints(const QsclDecomposition& d) {
    if (d.terms.size() != 1 || d.terms.front().mask != 0) return std::nullopt;
    for (const auto& c : d.counters) {
        if (!c.reset_symbols.empty()) return std::nullopt;
    }
    LinearConstraintSet out;
    out.alphabet = d.alphabet;
    for (const auto& c : d.counters) out.rows.push_back(c.coefficients);
    return out;
}

inline bool satisfies(const LinearConstraintSet& lcs, const ParikhVector& psi) {
    if (psi.size() != lcs.alphabet.size()) throw ContractError("Parikh vector length mismatch");
    for (const auto& row : lcs.rows) {
        Counter v = 0;
        for (Symbol s = 0; s < lcs.alphabet.size(); ++s) {
            v = checked_add(v, checked_mul(row[s], static_cast<Counter>(psi[s])));
        }
        if (v != 0) return false;
    }
    return true;
}

// --------------------------------------------------------------------------
// Reporting.

inline nlohmann::ordered_json decomposition_json(const QsclDecomposition& d) {
    nlohmann::ordered_json j;
    j["alphabet"] = d.alphabet.symbols();
    j["counters"] = nlohmann::ordered_json::array();
    for (const auto& c : d.counters) {
        nlohmann::ordered_json jc;
        jc["coefficients"] = c.coefficients;
        auto resets = nlohmann::ordered_json::array();
        for (Symbol z : c.reset_symbols) resets.push_back(d.alphabet.symbol(z));
        jc["reset_symbols"] = std::move(resets);
        j["counters"].push_back(std::move(jc));
    }
    j["accepting_masks"] = nlohmann::ordered_json::array();
    for (const auto& term : d.terms) {
        j["accepting_masks"].push_back(ZeroPattern{term.mask,
                                                   static_cast<std::uint32_t>(d.counters.size())}.str());
    }
    if (const auto lcs = to_linear_constraints(d)) {
        j["linear_constraints"] = nlohmann::ordered_json::array();
        for (const auto& row : lcs->rows) j["linear_constraints"].push_back(row);
    }
    return j;
}

inline std::string render_decomposition(const QsclDecomposition& d) {
    std::ostringstream os;
    const std::uint32_t k = static_cast<std::uint32_t>(d.counters.size());
    for (std::uint32_t i = 0; i < k; ++i) {
        const auto& c = d.counters[i];
        os << "counter " << i << ": value = ";
        bool first = true;
        for (Symbol s = 0; s < d.alphabet.size(); ++s) {
            if (c.coefficients[s] == 0) continue;
            if (!first) os << ' ';
            if (c.coefficients[s] >= 0) os << '+';
            os << c.coefficients[s] << "*#" << d.alphabet.symbol(s);
            first = false;
        }
        if (first) os << '0';
        if (!c.reset_symbols.empty()) {
            os << " over the suffix after the last ";
            for (std::size_t z = 0; z < c.reset_symbols.size(); ++z) {
                if (z) os << '/';
                os << d.alphabet.symbol(c.reset_symbols[z]);
            }
        }
        os << '\n';
    }
    os << "accepts when the nonzero pattern is one of:";
    for (const auto& term : d.terms) os << " \"" << ZeroPattern{term.mask, k}.str() << '"';
    os << '\n';
    return os.str();
}

}  // namespace countra
