#pragma once
// Seeded random machines for the certification corpus. Determinism matters
// more than distribution quality here, so sampling uses plain modulo on
// mt19937_64 output instead of std::uniform_int_distribution, whose mapping
// is implementation-defined.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "countra/machine.hpp"

namespace countra {

struct MachineGenOptions {
    std::vector<std::string> alphabet = {"a", "b"};
    State num_states = 2;
    std::uint32_t num_counters = 1;
    Counter max_amount = 2;           // add amounts are drawn from [-max, +max]
    std::uint32_t reset_percent = 10; // chance an action is x0 instead of an add
    std::uint32_t accept_percent = 30;
};

inline CounterMachine random_machine(const MachineGenOptions& opt, std::uint64_t seed) {
    if (opt.max_amount < 0) throw ContractError("max_amount must be non-negative");
    std::mt19937_64 rng(seed);
    CounterMachine m(Alphabet(opt.alphabet), opt.num_states, opt.num_counters);

    const auto draw_action = [&]() {
        if (rng() % 100 < opt.reset_percent) return UpdateAction::reset();
        const Counter span = 2 * opt.max_amount + 1;
        return UpdateAction::add(static_cast<Counter>(rng() % span) - opt.max_amount);
    };

    std::vector<UpdateAction> actions(opt.num_counters);
    for (Symbol s = 0; s < m.alphabet().size(); ++s) {
        for (State q = 0; q < opt.num_states; ++q) {
            for (std::uint32_t mask = 0; mask < m.num_patterns(); ++mask) {
                for (auto& a : actions) a = draw_action();
                m.set_update(s, q, mask, actions);
                m.set_transition(s, q, mask, static_cast<State>(rng() % opt.num_states));
            }
        }
    }

    bool any_accept = false;
    for (State q = 0; q < opt.num_states; ++q) {
        for (std::uint32_t mask = 0; mask < m.num_patterns(); ++mask) {
            if (rng() % 100 < opt.accept_percent) {
                m.add_accept(q, mask);
                any_accept = true;
            }
        }
    }
    if (!any_accept) {
        m.add_accept(static_cast<State>(rng() % opt.num_states),
                     static_cast<std::uint32_t>(rng() % m.num_patterns()));
    }
    return m;
}

// One-state machine whose updates depend on the symbol alone, with every
// action in {-1, +0, +1, x0}: the shape the semilinear decomposition takes.
inline CounterMachine random_qscl_machine(const std::vector<std::string>& alphabet,
                                          std::uint32_t num_counters, std::uint64_t seed,
                                          std::uint32_t reset_percent = 20,
                                          std::uint32_t accept_percent = 40) {
    std::mt19937_64 rng(seed);
    CounterMachine m(Alphabet(alphabet), 1, num_counters);
    std::vector<UpdateAction> actions(num_counters);
    for (Symbol s = 0; s < m.alphabet().size(); ++s) {
        for (auto& a : actions) {
            if (rng() % 100 < reset_percent) a = UpdateAction::reset();
            else a = UpdateAction::add(static_cast<Counter>(rng() % 3) - 1);
        }
        m.set_uniform_update(s, actions);
        m.set_uniform_transition(s, 0);
    }
    bool any_accept = false;
    for (std::uint32_t mask = 0; mask < m.num_patterns(); ++mask) {
        if (rng() % 100 < accept_percent) {
            m.add_accept(0, mask);
            any_accept = true;
        }
    }
    if (!any_accept) m.add_accept(0, static_cast<std::uint32_t>(rng() % m.num_patterns()));
    return m;
}

}  // namespace countra
