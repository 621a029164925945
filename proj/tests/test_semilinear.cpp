#include <catch2/catch_amalgamated.hpp>

#include "countra/generate.hpp"
#include "countra/languages.hpp"
#include "countra/semilinear.hpp"
#include "oracles.hpp"

using namespace countra;

TEST_CASE("parikh counts tokens in alphabet order") {
    const Alphabet alpha({"a", "b"});
    REQUIRE(parikh(alpha, std::vector<std::string>{"a", "b", "a", "a"}) ==
            ParikhVector{3, 1});
    REQUIRE(parikh(alpha, Word{}) == ParikhVector{0, 0});
    REQUIRE_THROWS_AS(parikh(alpha, Word{5}), InputError);
}

TEST_CASE("decomposition extracts coefficients, resets, and accepting masks") {
    const QsclDecomposition d = decompose_qscl(eq_ab_machine());
    REQUIRE(d.counters.size() == 1);
    REQUIRE(d.counters[0].coefficients == std::vector<Counter>{1, -1});
    REQUIRE(d.counters[0].reset_symbols.empty());
    REQUIRE(d.terms.size() == 1);
    REQUIRE(d.terms[0].mask == 0);

    const QsclDecomposition r = decompose_qscl(reset_qscl_machine());
    REQUIRE(r.counters[0].reset_symbols == std::vector<Symbol>{1});
    REQUIRE(r.counters[0].coefficients[0] == 1);
}

TEST_CASE("decomposition evaluates membership through suffix Parikh images") {
    const CounterMachine m = reset_qscl_machine();
    const QsclDecomposition d = decompose_qscl(m);
    const DiffReport report = verify_decomposition(m, d, 9);
    REQUIRE(report.agree());
    REQUIRE(report.tested == count_words(2, 9));
}

TEST_CASE("decomposition requires the simplified stateless shape") {
    REQUIRE_THROWS_AS(decompose_qscl(anbn_machine()), UnsupportedVariantError);
    REQUIRE_THROWS_AS(decompose_qscl(threshold_leq_machine(1)), UnsupportedVariantError);

    // one state but the update consults the zero pattern
    CounterMachine peek(Alphabet({"a"}), 1, 1);
    peek.set_update(0, 0, 0, {UpdateAction::add(1)});
    peek.set_update(0, 0, 1, {UpdateAction::add(0)});
    peek.set_transition(0, 0, 0, 0);
    peek.set_transition(0, 0, 1, 0);
    peek.add_accept(0, 0);
    REQUIRE_THROWS_AS(decompose_qscl(peek), UnsupportedVariantError);
}

TEST_CASE("randomized machines verify against their decompositions") {
    const std::vector<std::vector<std::string>> alphabets = {{"a", "b"}, {"a", "b", "c"}};
    for (std::uint64_t seed = 0; seed < 24; ++seed) {
        const auto& alpha = alphabets[seed % alphabets.size()];
        const std::uint32_t k = 1 + (seed / alphabets.size()) % 2;
        const CounterMachine m = random_qscl_machine(alpha, k, 4000 + seed);
        const QsclDecomposition d = decompose_qscl(m);
        const DiffReport report = verify_decomposition(m, d, 6);
        CAPTURE(seed, alpha.size(), k);
        if (!report.agree()) {
            CAPTURE(render_word(m.alphabet(), report.counterexamples.front().word));
        }
        REQUIRE(report.agree());
    }
}

TEST_CASE("verify_decomposition rejects mismatched alphabets") {
    const QsclDecomposition d = decompose_qscl(eq_ab_machine());
    REQUIRE_THROWS_AS(verify_decomposition(reset_qscl_machine(), d, 4), ContractError);
}

TEST_CASE("reset-free all-zero acceptance exports linear constraints") {
    const QsclDecomposition d = decompose_qscl(eq_ab_machine());
    const auto lcs = to_linear_constraints(d);
    REQUIRE(lcs.has_value());
    REQUIRE(lcs->rows == std::vector<std::vector<Counter>>{{1, -1}});
    REQUIRE(satisfies(*lcs, ParikhVector{4, 4}));
    REQUIRE(!satisfies(*lcs, ParikhVector{4, 3}));

    // a reset disqualifies the plain linear form
    REQUIRE(!to_linear_constraints(decompose_qscl(reset_qscl_machine())).has_value());

    // so does accepting a nonzero pattern
    CounterMachine nz = eq_ab_machine();
    nz.add_accept(0, 1);
    REQUIRE(!to_linear_constraints(decompose_qscl(nz)).has_value());
}

TEST_CASE("decomposition reports carry the structure") {
    const QsclDecomposition d = decompose_qscl(eq_ab_machine());
    const auto j = decomposition_json(d);
    REQUIRE(j.at("counters")[0].at("coefficients") == nlohmann::ordered_json::array({1, -1}));
    REQUIRE(j.contains("linear_constraints"));

    const std::string text = render_decomposition(d);
    REQUIRE(text.find("+1*#a") != std::string::npos);
    REQUIRE(text.find("-1*#b") != std::string::npos);
    REQUIRE(text.find("\"0\"") != std::string::npos);

    const auto jr = decomposition_json(decompose_qscl(reset_qscl_machine()));
    REQUIRE(!jr.contains("linear_constraints"));
    REQUIRE(jr.at("counters")[0].at("reset_symbols") == nlohmann::ordered_json::array({"r"}));
}
