// Builds the one-counter a^n b^n machine in code and walks a few inputs,
// printing the full configuration sequence for each.

#include <iostream>
#include <string>
#include <vector>

#include "countra/countra.hpp"

int main() {
    using namespace countra;

    const CounterMachine m = anbn_machine();
    const std::vector<std::string> inputs = {"", "ab", "aabb", "aaba", "abb", "ba"};

    for (const auto& text : inputs) {
        const Word w = to_word(m.alphabet(), split_tokens(text, ""));
        const auto trace = run_trace(m, w);
        const Configuration& last = trace.back();
        const bool accepted = m.accepting(last.state, mask_of(m, last.counters).bits);
        std::cout << '"' << text << "\": " << render_trace(m, w, trace, accepted) << '\n';
    }
    return 0;
}
