#include <cmath>
#include <sstream>

#include "privalog/crc32.hpp"
#include "privalog/frontend.hpp"
#include "privalog/pipeline.hpp"
#include "privalog/prune.hpp"

namespace privalog {

CompileResult compile(const std::string& source, const CompileOptions& opts) {
    CompileResult out;
    out.parsed = parse(source);
    out.desugared = desugar_heads(out.parsed);
    out.adorned = split_eq(adorn(out.desugared));
    out.dnf = to_ordered_dnf(out.adorned);

    UnfoldOptions uo;
    uo.max_iter = opts.max_unfold;
    uo.prune = opts.prune;
    out.rulebase = unfold_program(out.dnf, uo);

    // duplicate EDB atoms sharing a primary key merge into equalities
    auto& goal_rules = out.rulebase.rules[out.rulebase.goal.target];
    for (auto& rule : goal_rules) {
        std::set<std::string> head_bound;
        auto it = out.rulebase.patterns.find(rule.head);
        if (it != out.rulebase.patterns.end()) {
            for (size_t i = 0; i < rule.head_args.size(); ++i)
                if (it->second[i] == 'b' && rule.head_args[i]->is_var())
                    head_bound.insert(rule.head_args[i]->name);
        }
        Clause merged = merge_primary_keys(rule, out.rulebase.schemas, head_bound);
        if (auto simplified = simplify_rule(merged)) rule = std::move(*simplified);
    }

    out.program = generate(out.rulebase);
    return out;
}

Answer reference_answers(const CompileResult& c, const Database& db, const ClientArgs& args,
                         int max_iter) {
    try {
        return eval_program(c.parsed, db, args, max_iter);
    } catch (const EvalError&) {
        // not bottom-up evaluable (recursive with bound arguments): evaluate
        // the inlined rulebase under the goal bindings instead
        return eval_goal_rules(c.rulebase.goal_rules(), c.rulebase.goal, db, args);
    }
}

std::set<std::vector<Value>> published_set(const sim::RunResult& run) {
    std::set<std::vector<Value>> out;
    if (run.published.empty()) return out;
    size_t n = run.published[0].second.size();
    for (size_t row = 0; row < n; ++row) {
        std::vector<Value> tuple;
        for (const auto& [label, col] : run.published) {
            switch (col.type) {
                case ir::Type::Int: tuple.push_back(Value::integer(col.i[row])); break;
                case ir::Type::Float:
                    tuple.push_back(std::isnan(col.f[row]) ? Value::garbage()
                                                           : Value::real(col.f[row]));
                    break;
                case ir::Type::Bool: tuple.push_back(Value::integer(col.b[row])); break;
            }
        }
        out.insert(std::move(tuple));
    }
    return out;
}

std::set<std::vector<Value>> comparable_reference(const Answer& ans) {
    std::set<std::vector<Value>> out;
    for (const auto& row : ans.published_rows()) {
        std::vector<Value> tuple;
        tuple.reserve(row.size());
        for (const auto& v : row) {
            if (v.kind() == Value::Kind::Str)
                tuple.push_back(Value::integer(static_cast<int64_t>(crc32(v.as_str()))));
            else
                tuple.push_back(v);
        }
        out.insert(std::move(tuple));
    }
    return out;
}

namespace {

bool value_match(const Value& a, const Value& b) {
    if (a.is_garbage() || b.is_garbage()) return a.is_garbage() && b.is_garbage();
    if (a.kind() == Value::Kind::Int && b.kind() == Value::Kind::Int)
        return a.as_int() == b.as_int();
    if (a.is_numeric() && b.is_numeric()) return float_eq(a.to_double(), b.to_double());
    return a == b;
}

bool tuple_match(const std::vector<Value>& a, const std::vector<Value>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!value_match(a[i], b[i])) return false;
    return true;
}

std::string dump_rows(const std::set<std::vector<Value>>& rows, size_t limit = 10) {
    std::ostringstream os;
    size_t shown = 0;
    for (const auto& row : rows) {
        if (shown++ >= limit) {
            os << "  ... (" << rows.size() << " total)\n";
            break;
        }
        os << "  (";
        for (size_t i = 0; i < row.size(); ++i) os << (i ? ", " : "") << row[i].repr();
        os << ")\n";
    }
    if (rows.empty()) os << "  (empty)\n";
    return os.str();
}

} // namespace

bool rows_match(const std::set<std::vector<Value>>& sim_rows,
                const std::set<std::vector<Value>>& ref_rows) {
    if (sim_rows.size() != ref_rows.size()) return false;
    std::vector<const std::vector<Value>*> pool;
    for (const auto& r : ref_rows) pool.push_back(&r);
    std::vector<bool> used(pool.size(), false);
    for (const auto& s : sim_rows) {
        bool matched = false;
        for (size_t i = 0; i < pool.size() && !matched; ++i) {
            if (used[i] || !tuple_match(s, *pool[i])) continue;
            used[i] = true;
            matched = true;
        }
        if (!matched) return false;
    }
    return true;
}

CheckReport check(const CompileResult& c, const Database& db, const ClientArgs& args,
                  uint64_t seed) {
    sim::RunResult run = sim::run(c.program, db, args, seed);
    Answer ref = reference_answers(c, db, args);

    CheckReport report;
    std::ostringstream detail;

    if (c.parsed.goal.aggregation) {
        if (run.published.size() != 1 || run.published[0].second.size() != 1) {
            report.detail = "expected a single published aggregate";
            return report;
        }
        const sim::TypedCol& col = run.published[0].second;
        Value sim_value = col.type == ir::Type::Int
                              ? Value::integer(col.i[0])
                              : (std::isnan(col.f[0]) ? Value::garbage() : Value::real(col.f[0]));
        AggKind kind = c.parsed.goal.aggregation->kind;
        if (ref.empty_aggregate) {
            // min/max over nothing publishes the masking sentinel
            bool sentinel =
                col.type == ir::Type::Int
                    ? (col.i[0] == (kind == AggKind::Min ? INT64_MAX : INT64_MIN))
                    : std::isinf(col.f[0]);
            report.pass = sentinel;
            if (!sentinel)
                detail << "reference aggregate is empty; published " << sim_value.repr() << "\n";
        } else {
            report.pass = value_match(sim_value, *ref.aggregate);
            if (!report.pass)
                detail << "aggregate mismatch: published " << sim_value.repr() << ", reference "
                       << ref.aggregate->repr() << "\n";
        }
        report.detail = detail.str();
        return report;
    }

    auto sim_rows = published_set(run);
    auto ref_rows = comparable_reference(ref);
    report.pass = rows_match(sim_rows, ref_rows);
    if (!report.pass) {
        detail << "published set (" << sim_rows.size() << " rows):\n" << dump_rows(sim_rows);
        detail << "reference set (" << ref_rows.size() << " rows):\n" << dump_rows(ref_rows);
        report.detail = detail.str();
    }
    return report;
}

} // namespace privalog
