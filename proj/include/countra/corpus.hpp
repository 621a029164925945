#pragma once
// A fixed, named collection of machines: the hand-built language recognizers
// plus a few seeded random tables. The certification suite runs every
// transform over this list, and the export command writes it out as JSON.

#include <string>
#include <utility>
#include <vector>

#include "countra/generate.hpp"
#include "countra/languages.hpp"
#include "countra/machine.hpp"

namespace countra {

inline std::vector<std::pair<std::string, CounterMachine>> standard_corpus() {
    std::vector<std::pair<std::string, CounterMachine>> out;
    out.emplace_back("anbn", anbn_machine());
    out.emplace_back("amb2m", amb2m_machine());
    out.emplace_back("amb2m_incremental", amb2m_incremental_machine());
    out.emplace_back("dyck1", dyck1_machine());
    out.emplace_back("prefix_arity1", lm_machine(GrammarLm({{"v", 0}, {"u", 1}})));
    out.emplace_back("prefix_arity2", lm_machine(GrammarLm({{"v", 0}, {"b", 2}})));
    out.emplace_back("prefix_arity3", lm_machine(GrammarLm({{"v", 0}, {"t", 3}})));

    MachineGenOptions two_letter;
    two_letter.alphabet = {"a", "b"};
    two_letter.num_states = 3;
    two_letter.num_counters = 2;
    two_letter.max_amount = 3;
    out.emplace_back("random1", random_machine(two_letter, 1001));
    out.emplace_back("random2", random_machine(two_letter, 1002));

    MachineGenOptions three_letter;
    three_letter.alphabet = {"a", "b", "c"};
    three_letter.num_states = 2;
    three_letter.num_counters = 2;
    three_letter.max_amount = 2;
    out.emplace_back("random3", random_machine(three_letter, 2001));
    out.emplace_back("random4", random_machine(three_letter, 2002));
    return out;
}

}  // namespace countra
