#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "privalog/corpus.hpp"
#include "privalog/datastore.hpp"
#include "privalog/frontend.hpp"
#include "privalog/pipeline.hpp"
#include "privalog/prune.hpp"

namespace fs = std::filesystem;
using namespace privalog;

namespace {

// exit codes: 0 pass, 1 mismatch, 2 usage, 3 compile error, 4 runtime error
constexpr int kExitPass = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCompile = 3;
constexpr int kExitRuntime = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Value parse_arg_value(const std::string& text) {
    if (!text.empty()) {
        char* end = nullptr;
        long long i = std::strtoll(text.c_str(), &end, 10);
        if (end == text.c_str() + text.size()) return Value::integer(i);
        double d = std::strtod(text.c_str(), &end);
        if (end == text.c_str() + text.size()) return Value::real(d);
    }
    return Value::str(text);
}

ClientArgs parse_args(const std::vector<std::string>& kvs) {
    ClientArgs out;
    for (const auto& kv : kvs) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("--arg expects name=value, got '" + kv + "'");
        out.emplace(kv.substr(0, eq), parse_arg_value(kv.substr(eq + 1)));
    }
    return out;
}

void print_rulebase(const RuleBase& rb, std::ostream& os) {
    os << "% unfolding " << (rb.fixpoint ? "reached fixpoint" : "stopped at the bound")
       << " after " << rb.iterations << " productive iteration(s)\n";
    for (const auto& [pred, rules] : rb.rules) {
        if (rules.empty()) continue;
        os << "% " << pred << ": " << rules.size() << " rule(s)\n";
        for (const auto& r : rules) os << pretty_print(r) << "\n";
    }
    if (!rb.pruned.empty()) os << "% pruned " << rb.pruned.size() << " unsatisfiable rule(s)\n";
    for (const auto& w : rb.warnings) os << "% warning: " << w << "\n";
}

std::string value_text(const Value& v) {
    switch (v.kind()) {
        case Value::Kind::Int: return std::to_string(v.as_int());
        case Value::Kind::Float: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", v.as_float());
            return buf;
        }
        case Value::Kind::Str: return "'" + v.as_str() + "'";
        default: return "<garbage>";
    }
}

int cmd_compile(const std::string& source_path, const std::string& out_path,
                const CompileOptions& opts, bool dump_adorned, bool dump_dnf,
                bool dump_rulebase, const std::string& emit_secrec,
                const std::string& emit_smtlib) {
    CompileResult c = compile(read_file(source_path), opts);
    if (dump_adorned) std::cout << pretty_print(c.adorned.program);
    if (dump_dnf) std::cout << pretty_print(c.dnf.program);
    if (dump_rulebase) print_rulebase(c.rulebase, std::cout);
    for (const auto& w : c.rulebase.warnings) std::cerr << "warning: " << w << "\n";

    if (!emit_secrec.empty()) {
        std::ofstream out(emit_secrec);
        out << ir::to_secrec(c.program);
    }
    if (!emit_smtlib.empty()) {
        fs::create_directories(emit_smtlib);
        int idx = 0;
        for (const auto& rule : c.rulebase.goal_rules()) {
            std::ofstream out(fs::path(emit_smtlib) /
                              ("rule_" + std::to_string(idx++) + ".smt2"));
            out << to_smtlib(rule);
        }
    }
    std::string out_file = out_path.empty()
                               ? fs::path(source_path).replace_extension(".ir").string()
                               : out_path;
    std::ofstream out(out_file);
    out << ir::to_text(c.program);
    std::cerr << "wrote " << out_file << "\n";
    return kExitPass;
}

int cmd_run(const std::string& ir_path, const std::string& db_dir,
            const std::vector<std::string>& arg_kvs, uint64_t seed,
            const std::string& leak_path) {
    ir::CoreProgram prog = ir::from_text(read_file(ir_path));
    Database db = load_database(db_dir, prog.tables);
    sim::RunResult result = sim::run(prog, db, parse_args(arg_kvs), seed);
    for (const auto& [label, col] : result.published) {
        std::cout << label << " =";
        for (size_t i = 0; i < col.size(); ++i) {
            switch (col.type) {
                case ir::Type::Int: std::cout << " " << col.i[i]; break;
                case ir::Type::Float: {
                    char buf[40];
                    std::snprintf(buf, sizeof(buf), "%.17g", col.f[i]);
                    std::cout << " " << buf;
                    break;
                }
                case ir::Type::Bool: std::cout << " " << static_cast<int>(col.b[i]); break;
            }
        }
        std::cout << "\n";
    }
    if (!leak_path.empty()) {
        std::ofstream out(leak_path);
        out << sim::leak_to_json(result.leak);
    }
    return kExitPass;
}

int cmd_eval_ref(const std::string& source_path, const std::string& db_dir,
                 const std::vector<std::string>& arg_kvs, int max_iter) {
    CompileOptions opts;
    opts.max_unfold = max_iter;
    CompileResult c = compile(read_file(source_path), opts);
    Database db;
    if (!db_dir.empty()) db = load_database(db_dir, c.parsed.schemas);
    Answer ans = reference_answers(c, db, parse_args(arg_kvs), max_iter);

    if (ans.aggregate.has_value() || ans.empty_aggregate) {
        const std::string& name = c.parsed.goal.aggregation->result_var;
        if (ans.empty_aggregate)
            std::cout << name << " = (empty)\n";
        else
            std::cout << name << " = " << value_text(*ans.aggregate) << "\n";
        return kExitPass;
    }
    bool header = false;
    for (size_t i = 0; i < ans.columns.size(); ++i) {
        if (!ans.published[i]) continue;
        std::cout << (header ? "\t" : "") << ans.columns[i];
        header = true;
    }
    std::cout << "\n";
    for (const auto& row : ans.published_rows()) {
        for (size_t i = 0; i < row.size(); ++i) std::cout << (i ? "\t" : "") << value_text(row[i]);
        std::cout << "\n";
    }
    return kExitPass;
}

int cmd_check(const std::string& source_path, const std::string& db_dir,
              const std::vector<std::string>& arg_kvs, uint64_t seed,
              const CompileOptions& opts) {
    CompileResult c = compile(read_file(source_path), opts);
    Database db;
    if (!db_dir.empty()) db = load_database(db_dir, c.parsed.schemas);
    CheckReport report = check(c, db, parse_args(arg_kvs), seed);
    if (report.pass) {
        std::cout << "PASS: published set matches the reference evaluation\n";
        return kExitPass;
    }
    std::cout << "FAIL: published set differs from the reference evaluation\n"
              << report.detail;
    return kExitMismatch;
}

int cmd_gen_corpus(uint64_t seed, int count, const std::string& out_dir) {
    for (int i = 0; i < count; ++i) {
        CorpusFixture fx = generate_fixture(seed + static_cast<uint64_t>(i));
        char name[32];
        std::snprintf(name, sizeof(name), "case_%04d", i);
        fs::path dir = fs::path(out_dir) / name;
        fs::create_directories(dir);
        std::ofstream(dir / "program.pl") << fx.source;
        save_database(dir / "db", fx.db);
        nlohmann::json ja = nlohmann::json::object();
        for (const auto& [k, v] : fx.args) {
            if (v.kind() == Value::Kind::Int)
                ja[k] = v.as_int();
            else if (v.kind() == Value::Kind::Float)
                ja[k] = v.as_float();
            else
                ja[k] = v.as_str();
        }
        std::ofstream(dir / "args.json") << nlohmann::json{{"args", ja}}.dump(2) << "\n";
    }
    std::cerr << "wrote " << count << " fixtures under " << out_dir << "\n";
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PrivaLog compiler and simulated secure-backend harness"};
    app.require_subcommand(1);

    std::string source, out, db_dir, leak_path, emit_secrec, emit_smtlib, corpus_dir;
    std::vector<std::string> arg_kvs;
    uint64_t seed = 0;
    int max_unfold = 10;
    int count = 200;
    bool no_prune = false, dump_adorned = false, dump_dnf = false, dump_rulebase = false;

    auto* compile_cmd = app.add_subcommand("compile", "compile a PrivaLog program to core IR");
    compile_cmd->add_option("program", source)->required();
    compile_cmd->add_option("-o,--output", out, "output IR path (default: <program>.ir)");
    compile_cmd->add_option("--max-unfold", max_unfold, "rulebase iteration bound");
    compile_cmd->add_flag("--no-prune", no_prune, "keep unsatisfiable rules");
    compile_cmd->add_flag("--dump-adorned", dump_adorned);
    compile_cmd->add_flag("--dump-dnf", dump_dnf);
    compile_cmd->add_flag("--dump-rulebase", dump_rulebase);
    compile_cmd->add_option("--emit-secrec", emit_secrec, "write a SecreC-flavored rendering");
    compile_cmd->add_option("--emit-smtlib", emit_smtlib,
                            "write per-rule SMT-LIB2 constraints into a directory");

    auto* run_cmd = app.add_subcommand("run", "execute compiled IR on the simulated backend");
    run_cmd->add_option("program", source)->required();
    run_cmd->add_option("--db", db_dir, "database directory")->required();
    run_cmd->add_option("--arg", arg_kvs, "client argument name=value");
    run_cmd->add_option("--seed", seed, "shuffle seed");
    run_cmd->add_option("--leak-log", leak_path, "write the observation log as JSON lines");

    auto* ref_cmd = app.add_subcommand("eval-ref", "reference relational evaluation");
    ref_cmd->add_option("program", source)->required();
    ref_cmd->add_option("--db", db_dir, "database directory");
    ref_cmd->add_option("--arg", arg_kvs, "client argument name=value");
    ref_cmd->add_option("--max-iter", max_unfold, "bottom-up iteration bound");

    auto* check_cmd = app.add_subcommand("check", "compile, run, and compare with the reference");
    check_cmd->add_option("program", source)->required();
    check_cmd->add_option("--db", db_dir, "database directory");
    check_cmd->add_option("--arg", arg_kvs, "client argument name=value");
    check_cmd->add_option("--seed", seed, "shuffle seed");
    check_cmd->add_option("--max-unfold", max_unfold, "rulebase iteration bound");
    check_cmd->add_flag("--no-prune", no_prune);

    auto* gen_cmd = app.add_subcommand("gen-corpus", "emit random differential-test fixtures");
    gen_cmd->add_option("--seed", seed, "generator seed");
    gen_cmd->add_option("--count", count, "number of fixtures");
    gen_cmd->add_option("--out", corpus_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    CompileOptions opts;
    opts.max_unfold = max_unfold;
    opts.prune = !no_prune;

    try {
        if (compile_cmd->parsed())
            return cmd_compile(source, out, opts, dump_adorned, dump_dnf, dump_rulebase,
                               emit_secrec, emit_smtlib);
        if (run_cmd->parsed()) return cmd_run(source, db_dir, arg_kvs, seed, leak_path);
        if (ref_cmd->parsed()) return cmd_eval_ref(source, db_dir, arg_kvs, max_unfold);
        if (check_cmd->parsed()) return cmd_check(source, db_dir, arg_kvs, seed, opts);
        if (gen_cmd->parsed()) return cmd_gen_corpus(seed, count, corpus_dir);
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitCompile;
    } catch (const ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitCompile;
    } catch (const TransformError& e) {
        std::cerr << e.what() << "\n";
        return kExitCompile;
    } catch (const CompileError& e) {
        std::cerr << e.what() << "\n";
        return kExitCompile;
    } catch (const ir::IrError& e) {
        std::cerr << e.what() << "\n";
        return kExitCompile;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
