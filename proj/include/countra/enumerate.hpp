#pragma once
// Exhaustive word enumeration (shortlex) and the differential-test harness
// that certifies transform outputs against their sources.

#include <cstdint>
#include <string>
#include <vector>

#include "countra/machine.hpp"

namespace countra {

inline constexpr std::uint64_t kDefaultEnumCap = 5'000'000;

// Number of words of length 0..max_len over an alphabet of the given size.
inline std::uint64_t count_words(std::uint32_t alphabet_size, int max_len) {
    std::uint64_t total = 0, layer = 1;
    for (int l = 0; l <= max_len; ++l) {
        total += layer;
        if (layer > (1ull << 40) || total > (1ull << 40)) return 1ull << 40;  // saturate
        layer *= alphabet_size;
    }
    return total;
}

// Calls fn for every word of length 0..max_len in shortlex order.
template <typename Fn>
void for_each_word(std::uint32_t alphabet_size, int max_len, Fn&& fn) {
    Word w;
    fn(static_cast<const Word&>(w));
    if (alphabet_size == 0) return;
    for (int len = 1; len <= max_len; ++len) {
        w.assign(len, 0);
        while (true) {
            fn(static_cast<const Word&>(w));
            int pos = len - 1;
            while (pos >= 0 && w[pos] == alphabet_size - 1) {
                w[pos] = 0;
                --pos;
            }
            if (pos < 0) break;
            ++w[pos];
        }
    }
}

struct DiffEntry {
    Word word;
    bool verdict_a = false;
    bool verdict_b = false;
};

struct DiffReport {
    std::uint64_t tested = 0;
    int max_len = 0;
    std::vector<DiffEntry> counterexamples;

    bool agree() const { return counterexamples.empty(); }
};

namespace detail {

inline void guard_enumeration(std::uint32_t alphabet_size, int max_len, std::uint64_t cap) {
    const std::uint64_t n = count_words(alphabet_size, max_len);
    if (n > cap) {
        throw ResourceError("enumeration of " + std::to_string(n) + " words exceeds the guard of " +
                            std::to_string(cap) + " (raise COUNTRA_MAX_ENUM to override)");
    }
}

}  // namespace detail

// Compares a machine against any membership predicate on words.
template <typename Pred>
DiffReport difftest_oracle(const CounterMachine& a, Pred&& oracle, int max_len,
                           std::uint64_t enum_cap = kDefaultEnumCap) {
    detail::guard_enumeration(a.alphabet().size(), max_len, enum_cap);
    DiffReport report;
    report.max_len = max_len;
    for_each_word(a.alphabet().size(), max_len, [&](const Word& w) {
        ++report.tested;
        const bool va = accepts(a, w);
        const bool vb = oracle(w);
        if (va != vb) report.counterexamples.push_back({w, va, vb});
    });
    return report;
}

inline DiffReport difftest(const CounterMachine& a, const CounterMachine& b, int max_len,
                           std::uint64_t enum_cap = kDefaultEnumCap) {
    if (!(a.alphabet() == b.alphabet())) {
        throw InputError("difftest requires both machines to share an alphabet");
    }
    return difftest_oracle(a, [&](const Word& w) { return accepts(b, w); }, max_len, enum_cap);
}

inline std::string render_word(const Alphabet& a, const Word& w) {
    if (w.empty()) return "ε";
    std::string out;
    for (Symbol s : w) out += a.symbol(s);
    return out;
}

}  // namespace countra
