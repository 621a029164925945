#pragma once
// JSON persistence for counter machines.
//
// Layout:
//   {
//     "alphabet": ["a", "b"],
//     "num_states": 2,
//     "num_counters": 1,
//     "thresholds": [3],                  (only for threshold machines)
//     "updates": [
//       {"symbol": "a", "default": true, "actions": ["+1"]},
//       {"symbol": "b", "state": 0, "mask": "1", "actions": ["-1"]}
//     ],
//     "transitions": [ ... same keying with "next": <state> ... ],
//     "accept": [{"state": 0, "mask": "0"}]
//   }
//
// A mask is a string of '0'/'1' with one character per counter, counter 0
// first. Actions are "+m", "-m", or "x0". A record with "default": true
// covers every (state, mask) cell of its symbol that no specific record
// claims; two records for the same cell are an error, as is a cell no record
// covers.

#include <cstdint>
#include <charconv>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "countra/machine.hpp"

namespace countra {

using Json = nlohmann::ordered_json;

namespace detail {

inline UpdateAction parse_action(const std::string& text) {
    if (text == "x0") return UpdateAction::reset();
    if (text.size() < 2 || (text[0] != '+' && text[0] != '-')) {
        throw ParseError("bad action '" + text + "' (expected +m, -m, or x0)");
    }
    Counter value = 0;
    const char* first = text.data() + 1;
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError("bad action '" + text + "' (expected +m, -m, or x0)");
    }
    return UpdateAction::add(text[0] == '-' ? -value : value);
}

inline std::string mask_to_string(std::uint32_t mask, std::uint32_t num_counters) {
    std::string s(num_counters, '0');
    for (std::uint32_t i = 0; i < num_counters; ++i) {
        if ((mask >> i) & 1u) s[i] = '1';
    }
    return s;
}

inline std::uint32_t parse_mask(const std::string& text, std::uint32_t num_counters) {
    if (text.size() != num_counters) {
        throw ParseError("mask '" + text + "' needs exactly one character per counter");
    }
    std::uint32_t mask = 0;
    for (std::uint32_t i = 0; i < num_counters; ++i) {
        if (text[i] == '1') mask |= 1u << i;
        else if (text[i] != '0') throw ParseError("mask '" + text + "' may only contain 0 and 1");
    }
    return mask;
}

inline const Json& require(const Json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing key \"") + key + '"');
    return *it;
}

// Parsed documents store non-negative integers as unsigned, but documents
// assembled in code may carry them as signed; accept both.
inline bool is_nonneg_int(const Json& j) {
    return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

// Shared walk over "updates"/"transitions": resolves default records against
// specific ones and hands every covered cell to `apply(symbol, state, mask,
// payload)`.
template <typename Apply>
void load_rule_array(const Json& arr, const char* section, const Alphabet& alpha,
                     std::uint32_t num_states, std::uint32_t num_counters, const char* payload_key,
                     Apply&& apply) {
    if (!arr.is_array()) throw ParseError(std::string("\"") + section + "\" must be an array");
    const std::uint32_t patterns = 1u << num_counters;
    const std::size_t cells = static_cast<std::size_t>(alpha.size()) * num_states * patterns;
    std::vector<char> covered(cells, 0);
    std::map<Symbol, const Json*> defaults;

    const auto cell_of = [&](Symbol s, State q, std::uint32_t mask) {
        return (static_cast<std::size_t>(s) * num_states + q) * patterns + mask;
    };

    for (const auto& rec : arr) {
        if (!rec.is_object()) throw ParseError(std::string("\"") + section + "\" entries must be objects");
        const auto& sym_field = require(rec, "symbol");
        if (!sym_field.is_string()) throw ParseError("\"symbol\" must be a string");
        const auto found = alpha.find(sym_field.get<std::string>());
        if (!found) {
            throw ParseError("record names symbol '" + sym_field.get<std::string>() +
                             "', which is not in the alphabet");
        }
        const Symbol s = *found;
        (void)require(rec, payload_key);
        if (rec.value("default", false)) {
            if (rec.contains("state") || rec.contains("mask")) {
                throw ParseError("a default record cannot also name a state or mask");
            }
            if (!defaults.emplace(s, &rec).second) {
                throw ParseError("two default records for symbol '" + alpha.symbol(s) + "' in \"" +
                                 section + '"');
            }
            continue;
        }
        const auto& state_field = require(rec, "state");
        if (!detail::is_nonneg_int(state_field)) throw ParseError("\"state\" must be a non-negative integer");
        const std::uint64_t q64 = state_field.get<std::uint64_t>();
        if (q64 >= num_states) throw ParseError("state " + std::to_string(q64) + " out of range");
        const State q = static_cast<State>(q64);
        const auto& mask_field = require(rec, "mask");
        if (!mask_field.is_string()) throw ParseError("\"mask\" must be a string of 0/1");
        const std::uint32_t mask = parse_mask(mask_field.get<std::string>(), num_counters);
        if (covered[cell_of(s, q, mask)]) {
            throw ParseError("duplicate record for symbol '" + alpha.symbol(s) + "', state " +
                             std::to_string(q) + ", mask \"" + mask_to_string(mask, num_counters) +
                             "\" in \"" + section + '"');
        }
        covered[cell_of(s, q, mask)] = 1;
        apply(s, q, mask, rec.at(payload_key));
    }

    for (Symbol s = 0; s < alpha.size(); ++s) {
        const auto def = defaults.find(s);
        for (State q = 0; q < num_states; ++q) {
            for (std::uint32_t mask = 0; mask < patterns; ++mask) {
                if (covered[cell_of(s, q, mask)]) continue;
                if (def == defaults.end()) {
                    throw ParseError("no \"" + std::string(section) + "\" record covers symbol '" +
                                     alpha.symbol(s) + "', state " + std::to_string(q) + ", mask \"" +
                                     mask_to_string(mask, num_counters) + '"');
                }
                apply(s, q, mask, def->second->at(payload_key));
            }
        }
    }
}

}  // namespace detail

inline CounterMachine load_machine(const Json& j) {
    if (!j.is_object()) throw ParseError("machine document must be a JSON object");
    const auto& alpha_field = detail::require(j, "alphabet");
    if (!alpha_field.is_array()) throw ParseError("\"alphabet\" must be an array of strings");
    std::vector<std::string> tokens;
    for (const auto& t : alpha_field) {
        if (!t.is_string()) throw ParseError("\"alphabet\" must be an array of strings");
        tokens.push_back(t.get<std::string>());
    }
    Alphabet alpha(std::move(tokens));

    const auto& states_field = detail::require(j, "num_states");
    const auto& counters_field = detail::require(j, "num_counters");
    if (!detail::is_nonneg_int(states_field) || !detail::is_nonneg_int(counters_field)) {
        throw ParseError("\"num_states\" and \"num_counters\" must be non-negative integers");
    }
    const std::uint64_t num_states = states_field.get<std::uint64_t>();
    const std::uint64_t num_counters = counters_field.get<std::uint64_t>();

    std::optional<std::vector<Counter>> thresholds;
    if (const auto it = j.find("thresholds"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) throw ParseError("\"thresholds\" must be an array of integers");
        thresholds.emplace();
        for (const auto& v : *it) {
            if (!v.is_number_integer()) throw ParseError("\"thresholds\" must be an array of integers");
            thresholds->push_back(v.get<Counter>());
        }
    }

    CounterMachine m(std::move(alpha), static_cast<std::uint32_t>(num_states),
                     static_cast<std::uint32_t>(num_counters), std::move(thresholds));

    detail::load_rule_array(
        detail::require(j, "updates"), "updates", m.alphabet(), m.num_states(), m.num_counters(),
        "actions", [&](Symbol s, State q, std::uint32_t mask, const Json& payload) {
            if (!payload.is_array()) throw ParseError("\"actions\" must be an array of action strings");
            std::vector<UpdateAction> actions;
            for (const auto& a : payload) {
                if (!a.is_string()) throw ParseError("\"actions\" must be an array of action strings");
                actions.push_back(detail::parse_action(a.get<std::string>()));
            }
            if (actions.size() != m.num_counters()) {
                throw ParseError("an \"actions\" array needs exactly one entry per counter");
            }
            m.set_update(s, q, mask, actions);
        });

    detail::load_rule_array(
        detail::require(j, "transitions"), "transitions", m.alphabet(), m.num_states(),
        m.num_counters(), "next", [&](Symbol s, State q, std::uint32_t mask, const Json& payload) {
            if (!detail::is_nonneg_int(payload)) throw ParseError("\"next\" must be a non-negative integer");
            const std::uint64_t next = payload.get<std::uint64_t>();
            if (next >= m.num_states()) {
                throw ParseError("next state " + std::to_string(next) + " out of range");
            }
            m.set_transition(s, q, mask, static_cast<State>(next));
        });

    const auto& accept_field = detail::require(j, "accept");
    if (!accept_field.is_array()) throw ParseError("\"accept\" must be an array");
    for (const auto& rec : accept_field) {
        if (!rec.is_object()) throw ParseError("\"accept\" entries must be objects");
        const auto& state_field = detail::require(rec, "state");
        if (!detail::is_nonneg_int(state_field)) throw ParseError("\"state\" must be a non-negative integer");
        const std::uint64_t q = state_field.get<std::uint64_t>();
        if (q >= m.num_states()) throw ParseError("accept state " + std::to_string(q) + " out of range");
        const auto& mask_field = detail::require(rec, "mask");
        if (!mask_field.is_string()) throw ParseError("\"mask\" must be a string of 0/1");
        m.add_accept(static_cast<State>(q),
                     detail::parse_mask(mask_field.get<std::string>(), m.num_counters()));
    }
    return m;
}

inline Json save_machine(const CounterMachine& m) {
    Json j = Json::object();
    j["alphabet"] = Json::array();
    for (Symbol s = 0; s < m.alphabet().size(); ++s) j["alphabet"].push_back(m.alphabet().symbol(s));
    j["num_states"] = m.num_states();
    j["num_counters"] = m.num_counters();
    if (m.thresholds()) j["thresholds"] = *m.thresholds();

    const std::uint32_t patterns = 1u << m.num_counters();

    const auto actions_json = [&](Symbol s, State q, std::uint32_t mask) {
        Json arr = Json::array();
        for (const UpdateAction& a : m.update(s, q, mask)) arr.push_back(to_string(a));
        return arr;
    };

    // Per symbol, emit the most common payload as the default record and the
    // rest as explicit exceptions, scanning cells in a fixed order so the
    // output is reproducible.
    const auto emit_rules = [&](const char* payload_key, auto&& payload_of) {
        Json arr = Json::array();
        for (Symbol s = 0; s < m.alphabet().size(); ++s) {
            std::map<std::string, std::uint32_t> freq;
            for (State q = 0; q < m.num_states(); ++q) {
                for (std::uint32_t mask = 0; mask < patterns; ++mask) {
                    ++freq[payload_of(s, q, mask).dump()];
                }
            }
            std::string best;
            std::uint32_t best_count = 0;
            for (const auto& [key, count] : freq) {
                if (count > best_count) {
                    best = key;
                    best_count = count;
                }
            }
            Json def = Json::object();
            def["symbol"] = m.alphabet().symbol(s);
            def["default"] = true;
            def[payload_key] = Json::parse(best);
            arr.push_back(std::move(def));
            for (State q = 0; q < m.num_states(); ++q) {
                for (std::uint32_t mask = 0; mask < patterns; ++mask) {
                    Json payload = payload_of(s, q, mask);
                    if (payload.dump() == best) continue;
                    Json rec = Json::object();
                    rec["symbol"] = m.alphabet().symbol(s);
                    rec["state"] = q;
                    rec["mask"] = detail::mask_to_string(mask, m.num_counters());
                    rec[payload_key] = std::move(payload);
                    arr.push_back(std::move(rec));
                }
            }
        }
        return arr;
    };

    j["updates"] = emit_rules("actions", actions_json);
    j["transitions"] =
        emit_rules("next", [&](Symbol s, State q, std::uint32_t mask) {
            return Json(m.transition(s, q, mask));
        });

    j["accept"] = Json::array();
    for (State q = 0; q < m.num_states(); ++q) {
        for (std::uint32_t mask = 0; mask < patterns; ++mask) {
            if (!m.accepting(q, mask)) continue;
            Json rec = Json::object();
            rec["state"] = q;
            rec["mask"] = detail::mask_to_string(mask, m.num_counters());
            j["accept"].push_back(std::move(rec));
        }
    }
    return j;
}

inline Json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

inline CounterMachine load_machine_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "' for reading");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_machine(parse_json_text(text, path));
}

inline void save_machine_file(const CounterMachine& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open '" + path + "' for writing");
    out << save_machine(m).dump(2) << '\n';
    if (!out) throw InputError("failed while writing '" + path + "'");
}

}  // namespace countra
