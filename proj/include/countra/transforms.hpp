#pragma once
// Language-preserving machine transforms:
//   to_incremental        counter updates larger than +-1 folded into a
//                         remainder ring held in the state
//   to_stateless          states compiled into one-hot counter blocks
//   threshold_to_general  c <= m predicates replaced by plain zero-checks
//   general_to_threshold  the converse embedding via a <= -1 / <= 0 pair
//   combine               m-ary product machine with a boolean acceptance
//                         table, plus the usual set-operation wrappers
//
// Every transform is certified by exhaustive differential testing in the
// suite; none of them is trusted on construction.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "countra/machine.hpp"

namespace countra {

// --------------------------------------------------------------------------
// to_incremental. Counter c_i is represented as d_i * c'_i + r_i where the
// remainder r_i in [0, d_i) lives in the state and c'_i is the new counter
// (floor division, so the remainder stays non-negative for negative values
// too: c = -1, d = 3 gives c' = -1, r = 2). Adding m with |m| <= d_i moves
// the ring by at most one carry, so the new machine only ever adds -1/+0/+1.

struct RingCounterPlan {
    std::vector<Counter> moduli;  // per source counter, >= 1
    State source_states = 1;

    std::uint64_t ring_count() const {
        std::uint64_t n = 1;
        for (Counter d : moduli) n *= static_cast<std::uint64_t>(d);
        return n;
    }

    State encode(State q, std::span<const Counter> rem) const {
        std::uint64_t idx = 0, stride = 1;
        for (std::size_t i = 0; i < moduli.size(); ++i) {
            idx += static_cast<std::uint64_t>(rem[i]) * stride;
            stride *= static_cast<std::uint64_t>(moduli[i]);
        }
        return static_cast<State>(std::uint64_t(q) * ring_count() + idx);
    }

    std::pair<State, std::vector<Counter>> decode(State flat) const {
        const std::uint64_t ring = ring_count();
        State q = static_cast<State>(flat / ring);
        std::uint64_t idx = flat % ring;
        std::vector<Counter> rem(moduli.size());
        for (std::size_t i = 0; i < moduli.size(); ++i) {
            rem[i] = static_cast<Counter>(idx % static_cast<std::uint64_t>(moduli[i]));
            idx /= static_cast<std::uint64_t>(moduli[i]);
        }
        return {q, std::move(rem)};
    }
};

inline RingCounterPlan make_ring_plan(const CounterMachine& m) {
    RingCounterPlan plan;
    plan.source_states = m.num_states();
    plan.moduli.assign(m.num_counters(), 1);
    for (Symbol s = 0; s < m.alphabet().size(); ++s) {
        for (State q = 0; q < m.num_states(); ++q) {
            for (std::uint32_t mask = 0; mask < m.num_patterns(); ++mask) {
                const auto acts = m.update(s, q, mask);
                for (std::uint32_t i = 0; i < m.num_counters(); ++i) {
                    if (!acts[i].is_reset) {
                        const Counter mag = acts[i].amount < 0 ? -acts[i].amount : acts[i].amount;
                        if (mag > plan.moduli[i]) plan.moduli[i] = mag;
                    }
                }
            }
        }
    }
    return plan;
}

inline CounterMachine to_incremental(const CounterMachine& m) {
    if (m.is_threshold()) {
        throw UnsupportedVariantError(
            "to_incremental expects zero-check semantics; apply threshold_to_general first");
    }
    const RingCounterPlan plan = make_ring_plan(m);
    const std::uint64_t ring = plan.ring_count();
    const std::uint64_t states64 = std::uint64_t(m.num_states()) * ring;
    if (states64 > (1ull << 22)) {
        throw ResourceError("ring-counter state space too large (" + std::to_string(states64) + ")");
    }
    const std::uint32_t k = m.num_counters();
    CounterMachine out(m.alphabet(), static_cast<State>(states64), k);

    std::vector<UpdateAction> acts(k);
    std::vector<Counter> new_rem(k);
    for (State flat = 0; flat < out.num_states(); ++flat) {
        const auto [q, rem] = plan.decode(flat);
        for (std::uint32_t mask = 0; mask < out.num_patterns(); ++mask) {
            // Source counter reads zero exactly when both the ring counter
            // and the in-state remainder do.
            std::uint32_t src_mask = 0;
            for (std::uint32_t i = 0; i < k; ++i) {
                if (((mask >> i) & 1u) || rem[i] != 0) src_mask |= 1u << i;
            }
            for (Symbol s = 0; s < m.alphabet().size(); ++s) {
                const auto src_acts = m.update(s, q, src_mask);
                for (std::uint32_t i = 0; i < k; ++i) {
                    if (src_acts[i].is_reset) {
                        acts[i] = UpdateAction::reset();
                        new_rem[i] = 0;
                    } else {
                        const Counter t = rem[i] + src_acts[i].amount;
                        const Counter carry = t >= plan.moduli[i] ? 1 : (t < 0 ? -1 : 0);
                        acts[i] = UpdateAction::add(carry);
                        new_rem[i] = t - carry * plan.moduli[i];
                    }
                }
                out.set_update(s, flat, mask, acts);
                out.set_transition(s, flat, mask, plan.encode(m.transition(s, q, src_mask), new_rem));
            }
            if (m.accepting(q, src_mask)) out.add_accept(flat, mask);
        }
    }
    return out;
}

// --------------------------------------------------------------------------
// to_stateless. State q_i becomes a block of |Q| extra counters holding the
// one-hot vector w(i); w(0) is the all-zero vector so the initial state needs
// no setup. A transition i -> j adds w(j) - w(i) to the block, and acceptance
// pairs each accepting (q_i, pattern) with the block pattern of w(i).

inline CounterMachine to_stateless(const CounterMachine& m) {
    if (m.is_threshold()) {
        throw UnsupportedVariantError(
            "to_stateless expects zero-check semantics; apply threshold_to_general first");
    }
    const std::uint32_t k = m.num_counters();
    const State q_count = m.num_states();
    const std::uint32_t k2 = k + q_count;
    CounterMachine out(m.alphabet(), 1, k2);

    // Zero-pattern of the state block for w(i).
    const auto state_pattern = [&](State i) -> std::uint32_t {
        return i == 0 ? 0u : (1u << i);
    };
    // Inverse: which state does a block pattern encode? Returns false for
    // patterns no reachable configuration produces.
    const auto decode_state = [&](std::uint32_t block, State& i) -> bool {
        if (block == 0) {
            i = 0;
            return true;
        }
        if ((block & (block - 1)) != 0) return false;  // more than one bit
        std::uint32_t pos = 0;
        while (!((block >> pos) & 1u)) ++pos;
        if (pos == 0) return false;  // counter for q0 never leaves zero
        i = pos;
        return true;
    };

    std::vector<UpdateAction> acts(k2);
    for (std::uint32_t mask = 0; mask < out.num_patterns(); ++mask) {
        const std::uint32_t orig = mask & ((1u << k) - 1u);
        const std::uint32_t block = mask >> k;
        State src;
        const bool live = decode_state(block, src);
        for (Symbol s = 0; s < m.alphabet().size(); ++s) {
            if (!live) {
                for (auto& a : acts) a = UpdateAction::add(0);
            } else {
                const auto src_acts = m.update(s, src, orig);
                const State dst = m.transition(s, src, orig);
                for (std::uint32_t i = 0; i < k; ++i) acts[i] = src_acts[i];
                for (State l = 0; l < q_count; ++l) {
                    Counter delta = 0;
                    if (l == src && src != 0) delta -= 1;
                    if (l == dst && dst != 0) delta += 1;
                    acts[k + l] = UpdateAction::add(delta);
                }
            }
            out.set_update(s, 0, mask, acts);
            out.set_transition(s, 0, mask, 0);
        }
    }
    for (State q = 0; q < q_count; ++q) {
        for (std::uint32_t orig = 0; orig < (1u << k); ++orig) {
            if (m.accepting(q, orig)) out.add_accept(0, orig | (state_pattern(q) << k));
        }
    }
    return out;
}

// --------------------------------------------------------------------------
// threshold_to_general. Each counter with bound m is re-based onto a ring
// counter c' with modulus d = max(1, |m|+1, largest update magnitude) and a
// remainder window [lo, lo + d) with lo = min(0, m) held in the state, so
// c = d*c' + r. The window is positioned so that the threshold predicate
// only ever needs c' <= 0 or c' <= -1:
//     c <= m  <=>  c' < 0,           when r > m
//     c <= m  <=>  c' < 0 or c' = 0, when r <= m
// c' < 0 is tracked as one state bit per counter, which stays sound because
// ring deltas are +-1 and the bit is refreshed whenever the zero-check shows
// c' = 0 (a stale bit at c' = 0 is never consulted without the check).

struct ThresholdStateInfo {
    State source_state = 0;
    std::vector<Counter> remainders;  // actual r_i, window-based
    std::vector<bool> negative;       // tracked sign bit per counter
};

struct ThresholdPlan {
    std::vector<Counter> thresholds;
    std::vector<Counter> moduli;
    std::vector<Counter> window_lo;
    State source_states = 1;
    std::uint32_t num_counters = 0;
    State init_flat = 0;  // flat index of (q0, r = 0, non-negative) before the swap

    std::uint64_t rem_count() const {
        std::uint64_t n = 1;
        for (Counter d : moduli) n *= static_cast<std::uint64_t>(d);
        return n;
    }

    std::uint64_t state_count() const {
        return std::uint64_t(source_states) * rem_count() << num_counters;
    }

    // States 0 and init_flat trade places so that state 0 stays initial.
    State relabel(State s) const {
        if (s == 0) return init_flat;
        if (s == init_flat) return 0;
        return s;
    }

    State encode(State q, std::span<const Counter> rem, std::uint32_t neg_bits) const {
        std::uint64_t idx = 0, stride = 1;
        for (std::size_t i = 0; i < moduli.size(); ++i) {
            idx += static_cast<std::uint64_t>(rem[i] - window_lo[i]) * stride;
            stride *= static_cast<std::uint64_t>(moduli[i]);
        }
        const std::uint64_t flat =
            ((std::uint64_t(q) * rem_count() + idx) << num_counters) | neg_bits;
        return relabel(static_cast<State>(flat));
    }

    ThresholdStateInfo decode(State flat) const {
        const std::uint64_t raw = relabel(flat);
        ThresholdStateInfo info;
        const std::uint32_t neg_bits = raw & ((1u << num_counters) - 1u);
        std::uint64_t idx = raw >> num_counters;
        info.source_state = static_cast<State>(idx / rem_count());
        idx %= rem_count();
        info.remainders.resize(num_counters);
        info.negative.resize(num_counters);
        for (std::uint32_t i = 0; i < num_counters; ++i) {
            info.remainders[i] =
                window_lo[i] + static_cast<Counter>(idx % static_cast<std::uint64_t>(moduli[i]));
            idx /= static_cast<std::uint64_t>(moduli[i]);
            info.negative[i] = (neg_bits >> i) & 1u;
        }
        return info;
    }
};

inline ThresholdPlan make_threshold_plan(const CounterMachine& m) {
    if (!m.is_threshold()) {
        throw UnsupportedVariantError("machine has no threshold profile");
    }
    ThresholdPlan plan;
    plan.thresholds = *m.thresholds();
    plan.source_states = m.num_states();
    plan.num_counters = m.num_counters();
    plan.moduli.resize(m.num_counters());
    plan.window_lo.resize(m.num_counters());
    for (std::uint32_t i = 0; i < m.num_counters(); ++i) {
        const Counter mth = plan.thresholds[i];
        const Counter mag = mth < 0 ? -mth : mth;
        plan.moduli[i] = std::max<Counter>(1, checked_add(mag, 1));
        plan.window_lo[i] = std::min<Counter>(0, mth);
    }
    for (Symbol s = 0; s < m.alphabet().size(); ++s) {
        for (State q = 0; q < m.num_states(); ++q) {
            for (std::uint32_t mask = 0; mask < m.num_patterns(); ++mask) {
                const auto acts = m.update(s, q, mask);
                for (std::uint32_t i = 0; i < m.num_counters(); ++i) {
                    if (!acts[i].is_reset) {
                        const Counter mag = acts[i].amount < 0 ? -acts[i].amount : acts[i].amount;
                        if (mag > plan.moduli[i]) plan.moduli[i] = mag;
                    }
                }
            }
        }
    }
    if (plan.state_count() > (1ull << 22)) {
        throw ResourceError("threshold elimination state space too large (" +
                            std::to_string(plan.state_count()) + ")");
    }
    // Pre-swap flat index of the initial configuration (q0, r = 0, non-negative).
    {
        std::uint64_t idx = 0, stride = 1;
        for (std::uint32_t i = 0; i < m.num_counters(); ++i) {
            idx += static_cast<std::uint64_t>(0 - plan.window_lo[i]) * stride;
            stride *= static_cast<std::uint64_t>(plan.moduli[i]);
        }
        plan.init_flat = static_cast<State>(idx << plan.num_counters);
    }
    return plan;
}

inline CounterMachine threshold_to_general(const CounterMachine& m) {
    if (!m.is_threshold()) return m;  // already on zero-check semantics
    const ThresholdPlan plan = make_threshold_plan(m);
    const std::uint32_t k = m.num_counters();
    CounterMachine out(m.alphabet(), static_cast<State>(plan.state_count()), k);

    std::vector<UpdateAction> acts(k);
    std::vector<Counter> new_rem(k);
    for (State flat = 0; flat < out.num_states(); ++flat) {
        const ThresholdStateInfo info = plan.decode(flat);
        for (std::uint32_t mask = 0; mask < out.num_patterns(); ++mask) {
            // Reconstruct the source threshold pattern: bit i set iff c <= m_i.
            std::uint32_t src_mask = 0;
            for (std::uint32_t i = 0; i < k; ++i) {
                const bool ring_nonzero = (mask >> i) & 1u;
                const bool ring_negative = info.negative[i] && ring_nonzero;
                const bool le = info.remainders[i] <= plan.thresholds[i]
                                    ? (ring_negative || !ring_nonzero)
                                    : ring_negative;
                if (le) src_mask |= 1u << i;
            }
            for (Symbol s = 0; s < m.alphabet().size(); ++s) {
                const auto src_acts = m.update(s, info.source_state, src_mask);
                std::uint32_t neg_bits = 0;
                for (std::uint32_t i = 0; i < k; ++i) {
                    const bool ring_nonzero = (mask >> i) & 1u;
                    if (src_acts[i].is_reset) {
                        acts[i] = UpdateAction::reset();
                        new_rem[i] = 0;
                        // ring counter lands on 0: sign bit non-negative
                    } else {
                        const Counter t = info.remainders[i] + src_acts[i].amount;
                        const Counter lo = plan.window_lo[i];
                        const Counter carry = t >= lo + plan.moduli[i] ? 1 : (t < lo ? -1 : 0);
                        acts[i] = UpdateAction::add(carry);
                        new_rem[i] = t - carry * plan.moduli[i];
                        const bool neg =
                            ring_nonzero ? info.negative[i] : (carry < 0);
                        if (neg) neg_bits |= 1u << i;
                    }
                }
                out.set_update(s, flat, mask, acts);
                out.set_transition(
                    s, flat, mask,
                    plan.encode(m.transition(s, info.source_state, src_mask), new_rem, neg_bits));
            }
            if (m.accepting(info.source_state, src_mask)) out.add_accept(flat, mask);
        }
    }
    return out;
}

// The converse embedding: a plain machine becomes a threshold machine by
// duplicating every counter into a (<= 0, <= -1) pair updated identically;
// the original zero-check bit is 0 exactly when the pair reads (1, 0).
inline CounterMachine general_to_threshold(const CounterMachine& m) {
    if (m.is_threshold()) {
        throw UnsupportedVariantError("machine already has a threshold profile");
    }
    const std::uint32_t k = m.num_counters();
    if (2 * k > CounterMachine::kMaxCounters) {
        throw ResourceError("counter duplication exceeds the counter limit");
    }
    std::vector<Counter> profile(2 * k);
    for (std::uint32_t i = 0; i < k; ++i) {
        profile[i] = 0;
        profile[k + i] = -1;
    }
    CounterMachine out(m.alphabet(), m.num_states(), 2 * k, profile);

    const auto source_mask = [&](std::uint32_t tm) -> std::uint32_t {
        std::uint32_t b = 0;
        for (std::uint32_t i = 0; i < k; ++i) {
            const bool le0 = (tm >> i) & 1u;
            const bool lem1 = (tm >> (k + i)) & 1u;
            if (!(le0 && !lem1)) b |= 1u << i;  // zero iff c <= 0 and not c <= -1
        }
        return b;
    };

    std::vector<UpdateAction> acts(2 * k);
    for (State q = 0; q < m.num_states(); ++q) {
        for (std::uint32_t tm = 0; tm < out.num_patterns(); ++tm) {
            const std::uint32_t b = source_mask(tm);
            for (Symbol s = 0; s < m.alphabet().size(); ++s) {
                const auto src_acts = m.update(s, q, b);
                for (std::uint32_t i = 0; i < k; ++i) {
                    acts[i] = src_acts[i];
                    acts[k + i] = src_acts[i];
                }
                out.set_update(s, q, tm, acts);
                out.set_transition(s, q, tm, m.transition(s, q, b));
            }
            if (m.accepting(q, b)) out.add_accept(q, tm);
        }
    }
    return out;
}

// --------------------------------------------------------------------------
// combine: the m-ary product machine. States multiply, counters concatenate,
// and acceptance applies a boolean table to the members' accept verdicts.

struct BooleanCombinator {
    std::uint32_t arity = 0;
    std::vector<std::uint8_t> table;  // 1 << arity entries; bit j of the index
                                      // is machine j's membership verdict

    bool eval(std::uint32_t member_bits) const { return table[member_bits] != 0; }

    void validate() const {
        if (arity == 0 || arity > 16) throw ContractError("combinator arity out of range");
        if (table.size() != (1ull << arity)) {
            throw ContractError("combinator table must have 2^arity entries");
        }
    }

    // Positional bit string, e.g. "0111" is binary union: position j gives
    // the verdict for membership assignment j.
    static BooleanCombinator from_string(std::string_view bits) {
        BooleanCombinator c;
        std::uint32_t a = 0;
        while ((1ull << (a + 1)) <= bits.size()) ++a;
        if (bits.empty() || (1ull << a) != bits.size()) {
            throw InputError("combinator table length must be a power of two");
        }
        c.arity = a;
        for (char ch : bits) {
            if (ch != '0' && ch != '1') throw InputError("combinator table must be 0/1 characters");
            c.table.push_back(ch == '1');
        }
        c.validate();
        return c;
    }

    static BooleanCombinator not_op() { return from_string("10"); }
    static BooleanCombinator and_op() { return from_string("0001"); }
    static BooleanCombinator or_op() { return from_string("0111"); }
    static BooleanCombinator diff_op() { return from_string("0100"); }     // in A, not in B
    static BooleanCombinator symdiff_op() { return from_string("0110"); }
};

inline CounterMachine combine(std::span<const CounterMachine> machines,
                              const BooleanCombinator& p) {
    p.validate();
    if (machines.empty()) throw ContractError("combine needs at least one machine");
    if (p.arity != machines.size()) {
        throw ContractError("combinator arity " + std::to_string(p.arity) + " does not match " +
                            std::to_string(machines.size()) + " machines");
    }
    const Alphabet& alpha = machines[0].alphabet();
    bool any_threshold = false, all_threshold = true;
    std::uint64_t states64 = 1;
    std::uint32_t k2 = 0;
    for (const auto& m : machines) {
        if (!(m.alphabet() == alpha)) throw ContractError("combine requires a shared alphabet");
        any_threshold |= m.is_threshold();
        all_threshold &= m.is_threshold();
        states64 *= m.num_states();
        k2 += m.num_counters();
    }
    if (any_threshold && !all_threshold) {
        throw UnsupportedVariantError(
            "cannot combine threshold and zero-check machines; convert one side first");
    }
    if (states64 > (1ull << 22)) {
        throw ResourceError("product state space too large (" + std::to_string(states64) + ")");
    }

    std::optional<std::vector<Counter>> profile;
    if (all_threshold) {
        profile.emplace();
        for (const auto& m : machines) {
            profile->insert(profile->end(), m.thresholds()->begin(), m.thresholds()->end());
        }
    }
    CounterMachine out(alpha, static_cast<State>(states64), k2, std::move(profile));

    const std::size_t n = machines.size();
    std::vector<std::uint32_t> counter_off(n);
    for (std::size_t j = 1; j < n; ++j) {
        counter_off[j] = counter_off[j - 1] + machines[j - 1].num_counters();
    }
    // Member 0 owns the most significant digit of the flat state index.
    std::vector<std::uint64_t> stride(n, 1);
    for (std::size_t j = n; j-- > 1;) stride[j - 1] = stride[j] * machines[j].num_states();

    std::vector<State> qs(n);
    std::vector<std::uint32_t> member_mask(n);
    std::vector<UpdateAction> acts(k2);
    for (State flat = 0; flat < out.num_states(); ++flat) {
        std::uint64_t rest = flat;
        for (std::size_t j = 0; j < n; ++j) {
            qs[j] = static_cast<State>(rest / stride[j]);
            rest %= stride[j];
        }
        for (std::uint32_t mask = 0; mask < out.num_patterns(); ++mask) {
            for (std::size_t j = 0; j < n; ++j) {
                member_mask[j] =
                    (mask >> counter_off[j]) & ((1u << machines[j].num_counters()) - 1u);
            }
            for (Symbol s = 0; s < alpha.size(); ++s) {
                std::uint64_t next = 0;
                for (std::size_t j = 0; j < n; ++j) {
                    const auto ja = machines[j].update(s, qs[j], member_mask[j]);
                    std::copy(ja.begin(), ja.end(), acts.begin() + counter_off[j]);
                    next += stride[j] * machines[j].transition(s, qs[j], member_mask[j]);
                }
                out.set_update(s, flat, mask, acts);
                out.set_transition(s, flat, mask, static_cast<State>(next));
            }
            std::uint32_t member_bits = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (machines[j].accepting(qs[j], member_mask[j])) member_bits |= 1u << j;
            }
            if (p.eval(member_bits)) out.add_accept(flat, mask);
        }
    }
    return out;
}

inline CounterMachine combine(std::initializer_list<CounterMachine> machines,
                              const BooleanCombinator& p) {
    return combine(std::span<const CounterMachine>(machines.begin(), machines.size()), p);
}

inline CounterMachine complement_of(const CounterMachine& m) {
    return combine(std::span<const CounterMachine>(&m, 1), BooleanCombinator::not_op());
}

inline CounterMachine union_of(const CounterMachine& a, const CounterMachine& b) {
    return combine({a, b}, BooleanCombinator::or_op());
}

inline CounterMachine intersection_of(const CounterMachine& a, const CounterMachine& b) {
    return combine({a, b}, BooleanCombinator::and_op());
}

inline CounterMachine difference_of(const CounterMachine& a, const CounterMachine& b) {
    return combine({a, b}, BooleanCombinator::diff_op());
}

inline CounterMachine symmetric_difference_of(const CounterMachine& a, const CounterMachine& b) {
    return combine({a, b}, BooleanCombinator::symdiff_op());
}

}  // namespace countra
