#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "countra/languages.hpp"
#include "countra/slstm.hpp"

using namespace countra;

namespace {

std::vector<std::string> ab_string(const std::string& chars) {
    std::vector<std::string> tokens;
    for (char c : chars) tokens.emplace_back(1, c);
    return tokens;
}

}  // namespace

TEST_CASE("saturated activations use strict positivity") {
    REQUIRE(sat_step(Rat(0)) == Rat(0));
    REQUIRE(sat_step(Rat(1, 1000)) == Rat(1));
    REQUIRE(sat_step(Rat(-3)) == Rat(0));
    REQUIRE(sat_sign(Rat(0)) == Rat(-1));
    REQUIRE(sat_sign(Rat(2, 7)) == Rat(1));
    REQUIRE(sat_sign(Rat(-1, 9)) == Rat(-1));
}

TEST_CASE("counting network decides a^n b^n") {
    const SaturatedLstm net = counting_lstm();
    REQUIRE(lstm_accepts(net, ab_string("")));
    REQUIRE(lstm_accepts(net, ab_string("ab")));
    REQUIRE(lstm_accepts(net, ab_string("aabb")));
    REQUIRE(lstm_accepts(net, ab_string("aaaabbbb")));
    REQUIRE(!lstm_accepts(net, ab_string("a")));
    REQUIRE(!lstm_accepts(net, ab_string("b")));
    REQUIRE(!lstm_accepts(net, ab_string("aab")));
    REQUIRE(!lstm_accepts(net, ab_string("abb")));
    REQUIRE(!lstm_accepts(net, ab_string("ba")));
    REQUIRE(!lstm_accepts(net, ab_string("aabbb")));
    REQUIRE(!lstm_accepts(net, ab_string("aaabb")));
}

TEST_CASE("counting network matches the counter machine on the a^i b^j slice") {
    const SaturatedLstm net = counting_lstm();
    const CounterMachine m = anbn_machine();
    for (int i = 0; i <= 14; ++i) {
        for (int j = 0; i + j <= 14; ++j) {
            std::vector<std::string> tokens(i, "a");
            tokens.insert(tokens.end(), j, "b");
            CAPTURE(i, j);
            REQUIRE(lstm_accepts(net, tokens) == accepts(m, tokens));
        }
    }
}

TEST_CASE("gates stay boolean and cells stay integral under fuzzing") {
    const SaturatedLstm net = counting_lstm();
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t len = rng() % 24;
        std::vector<std::string> tokens;
        for (std::size_t t = 0; t < len; ++t) tokens.push_back(rng() % 2 ? "a" : "b");
        LstmState state = initial_state(net);
        for (const auto& trace : lstm_run(net, tokens, state)) {
            for (std::uint32_t r = 0; r < net.hidden_dim; ++r) {
                REQUIRE((trace.f[r] == Rat(0) || trace.f[r] == Rat(1)));
                REQUIRE((trace.i[r] == Rat(0) || trace.i[r] == Rat(1)));
                REQUIRE((trace.o[r] == Rat(0) || trace.o[r] == Rat(1)));
                REQUIRE((trace.c_tilde[r] == Rat(1) || trace.c_tilde[r] == Rat(-1)));
                REQUIRE(trace.c[r].denominator() == 1);
                REQUIRE(trace.h[r].denominator() == 1);
            }
        }
    }
}

TEST_CASE("rational pre-activations cancel exactly") {
    // thirds that would never cancel in floating point
    SaturatedLstm net = counting_lstm();
    net.W_c[0][0] = Rat(1, 3);
    net.W_c[0][1] = Rat(1, 3);
    net.U_c[0][0] = Rat(0);
    LstmState state = initial_state(net);
    // pre-activation of cell 0 on "a": 1/3 * 1 + 1/3 * 0 = 1/3 > 0
    lstm_step(net, state, net.embed("a"));
    REQUIRE(state.c[0] == Rat(1));
    // now make it cancel: x = (1, 0) with W row (1/3, 1/3) minus via U on h
    net.U_c[0][0] = Rat(-1, 3);
    state = initial_state(net);
    state.h[0] = Rat(1);
    const auto t = lstm_step(net, state, net.embed("a"));
    REQUIRE(t.c_tilde[0] == Rat(-1));  // sign(1/3 - 1/3) = sign(0) = -1
}

TEST_CASE("network validation catches shape mistakes") {
    SaturatedLstm net = counting_lstm();
    net.w_y.pop_back();
    REQUIRE_THROWS_AS(net.validate(), ContractError);

    SaturatedLstm bad_embed = counting_lstm();
    bad_embed.embedding["c"] = {Rat(1)};
    REQUIRE_THROWS_AS(bad_embed.validate(), ContractError);

    REQUIRE_THROWS_AS(counting_lstm().embed("z"), InputError);
}

TEST_CASE("weights round-trip through JSON") {
    const SaturatedLstm net = counting_lstm();
    const auto j = save_lstm(net);
    const SaturatedLstm back = load_lstm(j);
    REQUIRE(save_lstm(back) == j);
    REQUIRE(lstm_accepts(back, ab_string("aabb")));
    REQUIRE(!lstm_accepts(back, ab_string("aab")));
}

TEST_CASE("weight files are validated while loading") {
    auto j = save_lstm(counting_lstm());
    j["weights"].erase("W_f");
    REQUIRE_THROWS_AS(load_lstm(j), ParseError);

    auto bad_rat = save_lstm(counting_lstm());
    bad_rat["weights"]["b_y"] = nlohmann::ordered_json::array({1, 0});
    REQUIRE_THROWS_AS(load_lstm(bad_rat), ParseError);

    auto bad_shape = save_lstm(counting_lstm());
    bad_shape["weights"]["w_y"] = nlohmann::ordered_json::array();
    REQUIRE_THROWS_AS(load_lstm(bad_shape), ParseError);

    REQUIRE_THROWS_AS(load_lstm_file("missing_weights.json"), InputError);
}

TEST_CASE("step traces render for inspection") {
    const SaturatedLstm net = counting_lstm();
    LstmState state = initial_state(net);
    const auto t = lstm_step(net, state, net.embed("a"));
    const std::string line = render_lstm_step(t);
    REQUIRE(line.find("c=[1 0]") != std::string::npos);
    REQUIRE(line.find("f=[1 1]") != std::string::npos);
}
