// Takes the a^m b^2m machine through the variant-restriction pipeline and
// checks at each stage, by brute force over short words, that the language
// never changed.

#include <iostream>

#include "countra/countra.hpp"

namespace {

void report(const char* label, const countra::CounterMachine& before,
            const countra::CounterMachine& after) {
    const countra::DiffReport diff = countra::difftest(before, after, 10);
    std::cout << label << ": " << after.num_states() << " states, " << after.num_counters()
              << " counters; " << diff.tested << " words checked, "
              << (diff.agree() ? "language preserved" : "LANGUAGE CHANGED") << '\n';
}

}  // namespace

int main() {
    using namespace countra;

    const CounterMachine base = amb2m_machine();
    std::cout << "base machine: " << base.num_states() << " states, " << base.num_counters()
              << " counter(s)\n";

    const CounterMachine inc = to_incremental(base);
    report("incremental updates only", base, inc);

    const CounterMachine flat = to_stateless(inc);
    report("single state", base, flat);

    const CounterMachine th = general_to_threshold(base);
    report("threshold comparisons", base, th);

    const CounterMachine back = threshold_to_general(th);
    report("back to zero-checks", base, back);

    const VariantReport v = classify(flat);
    std::cout << "final classification: simplified=" << (v.is_simplified ? "yes" : "no")
              << " incremental=" << (v.is_incremental ? "yes" : "no")
              << " stateless=" << (v.is_stateless ? "yes" : "no") << '\n';
    return 0;
}
