// countra: command-line front end for the counter machine library.
//
// Exit codes:
//   0  success (for run/lstm: the input was accepted)
//   1  input rejected, or a differential test found a counterexample
//   2  command-line usage error
//   3  bad input data (unreadable files, malformed JSON, unknown symbols,
//      unsupported machine variants, counter overflow)
//   4  a resource guard tripped (enumeration or state-space size); raise
//      COUNTRA_MAX_ENUM to enlarge the enumeration budget

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "countra/countra.hpp"

namespace {

using namespace countra;

constexpr int kExitReject = 1;
constexpr int kExitBadInput = 3;
constexpr int kExitResource = 4;

std::uint64_t enum_cap() {
    if (const char* v = std::getenv("COUNTRA_MAX_ENUM")) {
        char* end = nullptr;
        const unsigned long long parsed = std::strtoull(v, &end, 10);
        if (end && *end == '\0' && parsed > 0) return parsed;
        throw InputError("COUNTRA_MAX_ENUM must be a positive integer");
    }
    return kDefaultEnumCap;
}

void write_or_print(const Json& doc, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << doc.dump(2) << '\n';
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw InputError("cannot open '" + out_path + "' for writing");
        out << doc.dump(2) << '\n';
    }
}

struct RunOptions {
    std::string machine_path;
    std::string input;
    std::string sep;
    bool trace = false;
    bool json = false;
};

int cmd_run(const RunOptions& opt) {
    const CounterMachine m = load_machine_file(opt.machine_path);
    const auto tokens = split_tokens(opt.input, opt.sep);
    const Word w = to_word(m.alphabet(), tokens);
    const auto trace = run_trace(m, w);
    const Configuration& last = trace.back();
    const bool accepted = m.accepting(last.state, mask_of(m, last.counters).bits);

    if (opt.json) {
        Json doc;
        doc["input"] = tokens;
        doc["accepted"] = accepted;
        doc["final_state"] = last.state;
        doc["final_counters"] = last.counters;
        if (opt.trace) {
            auto arr = Json::array();
            for (const auto& cfg : trace) arr.push_back(render_configuration(m, cfg));
            doc["trace"] = std::move(arr);
        }
        std::cout << doc.dump(2) << '\n';
    } else {
        if (opt.trace) std::cout << render_trace(m, w, trace, accepted) << '\n';
        std::cout << (accepted ? "accept" : "reject") << '\n';
    }
    return accepted ? 0 : kExitReject;
}

struct TransformOptions {
    std::string machine_path;
    std::string kind;
    std::string out_path;
};

int cmd_transform(const TransformOptions& opt) {
    const CounterMachine src = load_machine_file(opt.machine_path);
    CounterMachine result;
    if (opt.kind == "incremental") {
        result = to_incremental(src);
    } else if (opt.kind == "stateless") {
        result = to_stateless(src);
    } else if (opt.kind == "threshold") {
        result = general_to_threshold(src);
    } else if (opt.kind == "dethreshold") {
        if (!src.is_threshold()) {
            std::cerr << "note: machine already uses zero-checks; copied unchanged\n";
        }
        result = threshold_to_general(src);
    } else {
        throw InputError("unknown transform '" + opt.kind + "'");
    }
    std::cerr << "states: " << src.num_states() << " -> " << result.num_states()
              << ", counters: " << src.num_counters() << " -> " << result.num_counters()
              << (result.is_threshold() ? ", threshold profile attached" : "") << '\n';
    write_or_print(save_machine(result), opt.out_path);
    return 0;
}

struct CombineOptions {
    std::vector<std::string> machine_paths;
    std::string op = "and";
    std::string table;
    std::string out_path;
};

int cmd_combine(const CombineOptions& opt) {
    std::vector<CounterMachine> machines;
    for (const auto& path : opt.machine_paths) machines.push_back(load_machine_file(path));

    BooleanCombinator comb;
    if (!opt.table.empty()) {
        comb = BooleanCombinator::from_string(opt.table);
    } else if (opt.op == "not") {
        comb = BooleanCombinator::not_op();
    } else if (opt.op == "and") {
        comb = BooleanCombinator::and_op();
    } else if (opt.op == "or") {
        comb = BooleanCombinator::or_op();
    } else if (opt.op == "diff") {
        comb = BooleanCombinator::diff_op();
    } else if (opt.op == "symdiff") {
        comb = BooleanCombinator::symdiff_op();
    } else {
        throw InputError("unknown operation '" + opt.op + "'");
    }
    const CounterMachine result =
        combine(std::span<const CounterMachine>(machines.data(), machines.size()), comb);
    std::cerr << "product: " << result.num_states() << " states, " << result.num_counters()
              << " counters\n";
    write_or_print(save_machine(result), opt.out_path);
    return 0;
}

struct DifftestOptions {
    std::string path_a;
    std::string path_b;
    int max_len = 8;
};

int cmd_difftest(const DifftestOptions& opt) {
    const CounterMachine a = load_machine_file(opt.path_a);
    const CounterMachine b = load_machine_file(opt.path_b);
    const DiffReport report = difftest(a, b, opt.max_len, enum_cap());
    std::cout << "tested " << report.tested << " words up to length " << report.max_len << '\n';
    if (report.agree()) {
        std::cout << "languages agree\n";
        return 0;
    }
    std::cout << report.counterexamples.size() << " counterexamples, first ones:\n";
    for (std::size_t i = 0; i < report.counterexamples.size() && i < 5; ++i) {
        const auto& ce = report.counterexamples[i];
        std::cout << "  \"" << render_word(a.alphabet(), ce.word) << "\"  first machine "
                  << (ce.verdict_a ? "accepts" : "rejects") << ", second "
                  << (ce.verdict_b ? "accepts" : "rejects") << '\n';
    }
    return kExitReject;
}

struct CensusOptions {
    std::string machine_path;
    std::uint32_t max_p = 10;
};

int cmd_census(const CensusOptions& opt) {
    const GrammarLm grammar = boolean_grammar();
    const CounterMachine machine =
        opt.machine_path.empty() ? lm_machine(grammar) : load_machine_file(opt.machine_path);
    const CensusReport report = config_census(machine, grammar, opt.max_p);
    std::cout << census_table(report);
    return report.truncated_at ? kExitResource : 0;
}

struct SemilinearOptions {
    std::string machine_path;
    int verify_len = 0;
    bool json = false;
};

int cmd_semilinear(const SemilinearOptions& opt) {
    const CounterMachine m = load_machine_file(opt.machine_path);
    const QsclDecomposition d = decompose_qscl(m);
    if (opt.json) {
        std::cout << decomposition_json(d).dump(2) << '\n';
    } else {
        std::cout << render_decomposition(d);
    }
    if (opt.verify_len > 0) {
        const DiffReport report = verify_decomposition(m, d, opt.verify_len, enum_cap());
        std::cout << "verified against " << report.tested << " words up to length "
                  << report.max_len << '\n';
        if (!report.agree()) {
            const auto& ce = report.counterexamples.front();
            std::cout << "MISMATCH on \"" << render_word(m.alphabet(), ce.word)
                      << "\": machine " << (ce.verdict_a ? "accepts" : "rejects")
                      << ", decomposition " << (ce.verdict_b ? "accepts" : "rejects") << '\n';
            return kExitReject;
        }
        std::cout << "decomposition matches the machine\n";
    }
    return 0;
}

struct LstmOptions {
    std::string weights_path;
    std::string input;
    std::string sep;
    bool trace = false;
};

int cmd_lstm(const LstmOptions& opt) {
    const SaturatedLstm net =
        opt.weights_path.empty() ? counting_lstm() : load_lstm_file(opt.weights_path);
    const auto tokens = split_tokens(opt.input, opt.sep);
    LstmState state = initial_state(net);
    const auto traces = lstm_run(net, tokens, state);
    if (opt.trace) {
        for (std::size_t t = 0; t < traces.size(); ++t) {
            std::cout << tokens[t] << ": " << render_lstm_step(traces[t]) << '\n';
        }
    }
    const bool accepted = lstm_output(net, state) == 1;
    std::cout << (accepted ? "accept" : "reject") << '\n';
    return accepted ? 0 : kExitReject;
}

int cmd_classify(const std::string& machine_path) {
    const CounterMachine m = load_machine_file(machine_path);
    const VariantReport report = classify(m);
    const auto show = [](const char* name, bool flag, const std::vector<std::string>& why) {
        std::cout << name << ": " << (flag ? "yes" : "no") << '\n';
        for (const auto& line : why) std::cout << "    " << line << '\n';
    };
    show("simplified", report.is_simplified, report.simplified_violations);
    show("incremental", report.is_incremental, report.incremental_violations);
    show("stateless", report.is_stateless, report.stateless_violations);
    show("threshold", report.is_threshold, report.threshold_violations);
    return 0;
}

int cmd_export(const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, machine] : standard_corpus()) {
        const std::string path = dir + "/" + name + ".json";
        save_machine_file(machine, path);
        std::cout << "wrote " << path << '\n';
    }
    const std::string lstm_path = dir + "/counting_lstm.json";
    std::ofstream out(lstm_path, std::ios::binary);
    if (!out) throw InputError("cannot open '" + lstm_path + "' for writing");
    out << save_lstm(counting_lstm()).dump(2) << '\n';
    std::cout << "wrote " << lstm_path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"real-time counter machine toolkit"};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto* run = app.add_subcommand("run", "run a machine on an input string");
    run->add_option("-m,--machine", run_opt.machine_path, "machine JSON file")->required();
    run->add_option("input", run_opt.input, "input string (may be empty)");
    run->add_option("--sep", run_opt.sep,
                    "token separator; default splits into UTF-8 code points");
    run->add_flag("--trace", run_opt.trace, "print the configuration sequence");
    run->add_flag("--json", run_opt.json, "machine-readable output");

    TransformOptions tr_opt;
    auto* tr = app.add_subcommand("transform", "rewrite a machine into a restricted variant");
    tr->add_option("-m,--machine", tr_opt.machine_path, "machine JSON file")->required();
    tr->add_option("-k,--kind", tr_opt.kind, "incremental | stateless | threshold | dethreshold")
        ->required();
    tr->add_option("-o,--out", tr_opt.out_path, "output file (default: stdout)");

    CombineOptions cb_opt;
    auto* cb = app.add_subcommand("combine", "product machine over a boolean table");
    cb->add_option("machines", cb_opt.machine_paths, "machine JSON files")->required();
    cb->add_option("--op", cb_opt.op, "not | and | or | diff | symdiff (default and)");
    cb->add_option("--table", cb_opt.table,
                   "explicit 2^m-bit acceptance table; bit j of the index is machine j");
    cb->add_option("-o,--out", cb_opt.out_path, "output file (default: stdout)");

    DifftestOptions dt_opt;
    auto* dt = app.add_subcommand("difftest", "exhaustively compare two machines");
    dt->add_option("first", dt_opt.path_a, "machine JSON file")->required();
    dt->add_option("second", dt_opt.path_b, "machine JSON file")->required();
    dt->add_option("--max-len", dt_opt.max_len, "maximum word length (default 8)");

    CensusOptions cs_opt;
    auto* cs = app.add_subcommand("census",
                                  "configurations vs denoted functions over operator prefixes");
    cs->add_option("-m,--machine", cs_opt.machine_path,
                   "machine JSON file (default: the arity-sum machine)");
    cs->add_option("--max-p", cs_opt.max_p, "largest prefix length (default 10)");

    SemilinearOptions sl_opt;
    auto* sl = app.add_subcommand("semilinear", "decompose a simplified stateless machine");
    sl->add_option("-m,--machine", sl_opt.machine_path, "machine JSON file")->required();
    sl->add_option("--verify-len", sl_opt.verify_len,
                   "also difference the decomposition against the machine up to this length");
    sl->add_flag("--json", sl_opt.json, "machine-readable output");

    LstmOptions lstm_opt;
    auto* ls = app.add_subcommand("lstm", "run a saturated network on an input string");
    ls->add_option("-w,--weights", lstm_opt.weights_path,
                   "weight JSON file (default: the built-in counting network)");
    ls->add_option("input", lstm_opt.input, "input string (may be empty)");
    ls->add_option("--sep", lstm_opt.sep,
                   "token separator; default splits into UTF-8 code points");
    ls->add_flag("--trace", lstm_opt.trace, "print gate and cell values per step");

    std::string classify_path;
    auto* cl = app.add_subcommand("classify", "report which restricted variants a machine is in");
    cl->add_option("-m,--machine", classify_path, "machine JSON file")->required();

    std::string export_dir;
    auto* ex = app.add_subcommand("export", "write the built-in machine collection as JSON");
    ex->add_option("-d,--dir", export_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(run_opt);
        if (tr->parsed()) return cmd_transform(tr_opt);
        if (cb->parsed()) return cmd_combine(cb_opt);
        if (dt->parsed()) return cmd_difftest(dt_opt);
        if (cs->parsed()) return cmd_census(cs_opt);
        if (sl->parsed()) return cmd_semilinear(sl_opt);
        if (ls->parsed()) return cmd_lstm(lstm_opt);
        if (cl->parsed()) return cmd_classify(classify_path);
        if (ex->parsed()) return cmd_export(export_dir);
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitResource;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInput;
    }
    return 0;
}
