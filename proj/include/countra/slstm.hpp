#pragma once
// Saturated LSTM over exact rationals. The activations are the limits of
// the usual ones under weight scaling: step(x) = 1 for x > 0 and 0
// otherwise, sign(x) = 1 for x > 0 and -1 otherwise. With gates pinned to
// {0, 1} and candidate values to {-1, +1}, the cell vector behaves as a bank
// of integer counters:
//
//   f = step(W_f x + U_f h)        (forget)
//   i = step(W_i x + U_i h)        (input)
//   o = step(W_o x + U_o h)        (output)
//   c~ = sign(W_c x + U_c h)
//   c' = f . c + i . c~            (elementwise)
//   h' = o . c'
//   y  = step(w_y . h' + b_y)      (accept iff y = 1 after the last symbol)
//
// Exact rational arithmetic keeps the step/sign comparisons free of rounding
// questions, so "the cell stays integral" is a checkable invariant instead
// of a numerical accident.

#include <cstdint>
#include <fstream>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <boost/rational.hpp>
#include <nlohmann/json.hpp>

#include "countra/machine.hpp"

namespace countra {

using Rat = boost::rational<long long>;
using RatVector = std::vector<Rat>;
using RatMatrix = std::vector<RatVector>;  // row-major

inline Rat sat_step(const Rat& x) { return x > Rat(0) ? Rat(1) : Rat(0); }
inline Rat sat_sign(const Rat& x) { return x > Rat(0) ? Rat(1) : Rat(-1); }

struct SaturatedLstm {
    std::uint32_t input_dim = 0;
    std::uint32_t hidden_dim = 0;
    RatMatrix W_f, U_f, W_i, U_i, W_o, U_o, W_c, U_c;  // W_*: hidden x input, U_*: hidden x hidden
    RatVector w_y;
    Rat b_y = Rat(0);
    std::map<std::string, RatVector> embedding;  // token -> input vector

    void validate() const {
        if (input_dim == 0 || hidden_dim == 0) {
            throw ContractError("lstm dimensions must be positive");
        }
        const auto check = [&](const RatMatrix& m, std::uint32_t cols, const char* name) {
            if (m.size() != hidden_dim) {
                throw ContractError(std::string(name) + " must have hidden_dim rows");
            }
            for (const auto& row : m) {
                if (row.size() != cols) {
                    throw ContractError(std::string(name) + " row width does not match");
                }
            }
        };
        check(W_f, input_dim, "W_f");
        check(W_i, input_dim, "W_i");
        check(W_o, input_dim, "W_o");
        check(W_c, input_dim, "W_c");
        check(U_f, hidden_dim, "U_f");
        check(U_i, hidden_dim, "U_i");
        check(U_o, hidden_dim, "U_o");
        check(U_c, hidden_dim, "U_c");
        if (w_y.size() != hidden_dim) throw ContractError("w_y must have hidden_dim entries");
        if (embedding.empty()) throw ContractError("lstm needs at least one token embedding");
        for (const auto& [token, vec] : embedding) {
            if (token.empty()) throw ContractError("embedding tokens must be non-empty");
            if (vec.size() != input_dim) {
                throw ContractError("embedding for '" + token + "' must have input_dim entries");
            }
        }
    }

    const RatVector& embed(const std::string& token) const {
        const auto it = embedding.find(token);
        if (it == embedding.end()) throw InputError("no embedding for token '" + token + "'");
        return it->second;
    }
};

struct LstmState {
    RatVector c, h;
};

inline LstmState initial_state(const SaturatedLstm& net) {
    return LstmState{RatVector(net.hidden_dim, Rat(0)), RatVector(net.hidden_dim, Rat(0))};
}

// Everything one step computes, for invariant checks and traces.
struct LstmStepTrace {
    RatVector f, i, o, c_tilde, c, h;
};

namespace detail {

inline RatVector affine(const RatMatrix& W, const RatVector& x, const RatMatrix& U,
                        const RatVector& h) {
    RatVector out(W.size(), Rat(0));
    for (std::size_t r = 0; r < W.size(); ++r) {
        Rat acc(0);
        for (std::size_t j = 0; j < x.size(); ++j) acc += W[r][j] * x[j];
        for (std::size_t j = 0; j < h.size(); ++j) acc += U[r][j] * h[j];
        out[r] = acc;
    }
    return out;
}

inline RatVector map(RatVector v, Rat (*fn)(const Rat&)) {
    for (auto& x : v) x = fn(x);
    return v;
}

}  // namespace detail

inline LstmStepTrace lstm_step(const SaturatedLstm& net, LstmState& state, const RatVector& x) {
    if (x.size() != net.input_dim) throw ContractError("input vector has the wrong dimension");
    LstmStepTrace t;
    t.f = detail::map(detail::affine(net.W_f, x, net.U_f, state.h), sat_step);
    t.i = detail::map(detail::affine(net.W_i, x, net.U_i, state.h), sat_step);
    t.o = detail::map(detail::affine(net.W_o, x, net.U_o, state.h), sat_step);
    t.c_tilde = detail::map(detail::affine(net.W_c, x, net.U_c, state.h), sat_sign);
    t.c.resize(net.hidden_dim);
    t.h.resize(net.hidden_dim);
    for (std::uint32_t r = 0; r < net.hidden_dim; ++r) {
        t.c[r] = t.f[r] * state.c[r] + t.i[r] * t.c_tilde[r];
        t.h[r] = t.o[r] * t.c[r];
    }
    state.c = t.c;
    state.h = t.h;
    return t;
}

inline int lstm_output(const SaturatedLstm& net, const LstmState& state) {
    Rat acc = net.b_y;
    for (std::uint32_t r = 0; r < net.hidden_dim; ++r) acc += net.w_y[r] * state.h[r];
    return sat_step(acc) == Rat(1) ? 1 : 0;
}

inline std::vector<LstmStepTrace> lstm_run(const SaturatedLstm& net,
                                           std::span<const std::string> tokens, LstmState& state) {
    std::vector<LstmStepTrace> traces;
    traces.reserve(tokens.size());
    for (const auto& tok : tokens) traces.push_back(lstm_step(net, state, net.embed(tok)));
    return traces;
}

inline bool lstm_accepts(const SaturatedLstm& net, std::span<const std::string> tokens) {
    LstmState state = initial_state(net);
    for (const auto& tok : tokens) lstm_step(net, state, net.embed(tok));
    return lstm_output(net, state) == 1;
}

// --------------------------------------------------------------------------
// A two-cell network recognizing a^n b^n. Cell 0 integrates +1 per a and -1
// per b. Cell 1 stays at 0 until a step arrives that can no longer lead to
// an accepting completion (a b read with cell 0 already at or below zero, or
// an a read with cell 0 negative); from then on it increments every step,
// which both remembers the failure and keeps the decision margin growing.
// The output reads step(-c0 - 2*c1 + 1): accept exactly when c0 = c1 = 0.

inline SaturatedLstm counting_lstm() {
    SaturatedLstm net;
    net.input_dim = 2;
    net.hidden_dim = 2;
    const auto R = [](long long v) { return Rat(v); };
    net.W_f = {{R(1), R(1)}, {R(1), R(1)}};
    net.U_f = {{R(0), R(0)}, {R(0), R(0)}};
    net.W_i = {{R(1), R(1)}, {R(0), R(1)}};
    net.U_i = {{R(0), R(0)}, {R(-1), R(100)}};
    net.W_o = {{R(1), R(1)}, {R(1), R(1)}};
    net.U_o = {{R(0), R(0)}, {R(0), R(0)}};
    net.W_c = {{R(1), R(-1)}, {R(1), R(1)}};
    net.U_c = {{R(0), R(0)}, {R(0), R(0)}};
    net.w_y = {R(-1), R(-2)};
    net.b_y = R(1);
    net.embedding["a"] = {R(1), R(0)};
    net.embedding["b"] = {R(0), R(1)};
    net.validate();
    return net;
}

// --------------------------------------------------------------------------
// JSON weights. A rational is [numerator, denominator] (denominator > 0);
// a bare integer is accepted on input as n/1.

namespace detail {

inline Rat rat_from_json(const nlohmann::ordered_json& j) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
        const long long num = j[0].get<long long>();
        const long long den = j[1].get<long long>();
        if (den <= 0) throw ParseError("rational denominator must be positive");
        return Rat(num, den);
    }
    throw ParseError("a rational must be an integer or a [numerator, denominator] pair");
}

inline nlohmann::ordered_json rat_to_json(const Rat& r) {
    return nlohmann::ordered_json::array({r.numerator(), r.denominator()});
}

inline RatVector vector_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_array()) throw ParseError("expected an array of rationals");
    RatVector v;
    for (const auto& e : j) v.push_back(rat_from_json(e));
    return v;
}

inline RatMatrix matrix_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_array()) throw ParseError("expected an array of rows");
    RatMatrix m;
    for (const auto& row : j) m.push_back(vector_from_json(row));
    return m;
}

inline nlohmann::ordered_json vector_to_json(const RatVector& v) {
    auto j = nlohmann::ordered_json::array();
    for (const auto& r : v) j.push_back(rat_to_json(r));
    return j;
}

inline nlohmann::ordered_json matrix_to_json(const RatMatrix& m) {
    auto j = nlohmann::ordered_json::array();
    for (const auto& row : m) j.push_back(vector_to_json(row));
    return j;
}

}  // namespace detail

inline SaturatedLstm load_lstm(const nlohmann::ordered_json& j) {
    if (!j.is_object()) throw ParseError("lstm document must be a JSON object");
    SaturatedLstm net;
    const auto field = [&](const char* key) -> const nlohmann::ordered_json& {
        const auto it = j.find(key);
        if (it == j.end()) throw ParseError(std::string("missing key \"") + key + '"');
        return *it;
    };
    net.input_dim = field("input_dim").get<std::uint32_t>();
    net.hidden_dim = field("hidden_dim").get<std::uint32_t>();
    const auto& weights = field("weights");
    const auto wfield = [&](const char* key) -> const nlohmann::ordered_json& {
        const auto it = weights.find(key);
        if (it == weights.end()) throw ParseError(std::string("missing weight \"") + key + '"');
        return *it;
    };
    net.W_f = detail::matrix_from_json(wfield("W_f"));
    net.U_f = detail::matrix_from_json(wfield("U_f"));
    net.W_i = detail::matrix_from_json(wfield("W_i"));
    net.U_i = detail::matrix_from_json(wfield("U_i"));
    net.W_o = detail::matrix_from_json(wfield("W_o"));
    net.U_o = detail::matrix_from_json(wfield("U_o"));
    net.W_c = detail::matrix_from_json(wfield("W_c"));
    net.U_c = detail::matrix_from_json(wfield("U_c"));
    net.w_y = detail::vector_from_json(wfield("w_y"));
    net.b_y = detail::rat_from_json(wfield("b_y"));
    const auto& emb = field("embedding");
    if (!emb.is_object()) throw ParseError("\"embedding\" must map tokens to vectors");
    for (const auto& [token, vec] : emb.items()) {
        net.embedding[token] = detail::vector_from_json(vec);
    }
    try {
        net.validate();
    } catch (const ContractError& e) {
        throw ParseError(e.what());
    }
    return net;
}

inline nlohmann::ordered_json save_lstm(const SaturatedLstm& net) {
    nlohmann::ordered_json j;
    j["input_dim"] = net.input_dim;
    j["hidden_dim"] = net.hidden_dim;
    auto& w = j["weights"];
    w["W_f"] = detail::matrix_to_json(net.W_f);
    w["U_f"] = detail::matrix_to_json(net.U_f);
    w["W_i"] = detail::matrix_to_json(net.W_i);
    w["U_i"] = detail::matrix_to_json(net.U_i);
    w["W_o"] = detail::matrix_to_json(net.W_o);
    w["U_o"] = detail::matrix_to_json(net.U_o);
    w["W_c"] = detail::matrix_to_json(net.W_c);
    w["U_c"] = detail::matrix_to_json(net.U_c);
    w["w_y"] = detail::vector_to_json(net.w_y);
    w["b_y"] = detail::rat_to_json(net.b_y);
    auto emb = nlohmann::ordered_json::object();
    for (const auto& [token, vec] : net.embedding) emb[token] = detail::vector_to_json(vec);
    j["embedding"] = std::move(emb);
    return j;
}

inline SaturatedLstm load_lstm_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "' for reading");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return load_lstm(nlohmann::ordered_json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline std::string render_lstm_step(const LstmStepTrace& t) {
    const auto vec = [](const RatVector& v) {
        std::ostringstream os;
        os << '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) os << ' ';
            os << v[i].numerator();
            if (v[i].denominator() != 1) os << '/' << v[i].denominator();
        }
        os << ']';
        return os.str();
    };
    std::ostringstream os;
    os << "f=" << vec(t.f) << " i=" << vec(t.i) << " o=" << vec(t.o) << " c~=" << vec(t.c_tilde)
       << " c=" << vec(t.c) << " h=" << vec(t.h);
    return os.str();
}

}  // namespace countra
