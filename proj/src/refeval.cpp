#include <algorithm>
#include <functional>

#include "privalog/refeval.hpp"

namespace privalog {

std::set<std::vector<Value>> Answer::published_rows() const {
    std::set<std::vector<Value>> out;
    for (const auto& row : rows) {
        std::vector<Value> proj;
        for (size_t i = 0; i < row.size(); ++i)
            if (published[i]) proj.push_back(row[i]);
        out.insert(std::move(proj));
    }
    return out;
}

Value eval_term(const TermPtr& t, const Env& row) {
    switch (t->kind) {
        case Term::Kind::Var: {
            auto it = row.find(t->name);
            if (it == row.end()) throw EvalError("unbound variable " + t->name);
            return it->second;
        }
        case Term::Kind::IntConst: return Value::integer(t->ival);
        case Term::Kind::FloatConst: return Value::real(t->fval);
        case Term::Kind::StrConst: return Value::str(t->sval);
        case Term::Kind::Bin:
            return apply_arith(t->op, eval_term(t->lhs, row), eval_term(t->rhs, row));
        case Term::Kind::Sqrt: return apply_sqrt(eval_term(t->lhs, row));
        case Term::Kind::Hole: throw EvalError("unexpanded hole in term");
        case Term::Kind::ClientArg: throw EvalError("client argument @" + t->name + " in term");
    }
    throw EvalError("bad term");
}

namespace {

bool values_match(const Value& a, const Value& b) { return apply_cmp(CmpOp::Eq, a, b); }

// Ground predicate-free formula as a boolean under one row.
bool eval_ground(const FormulaPtr& f, const Env& row) {
    switch (f->kind) {
        case Formula::Kind::True: return true;
        case Formula::Kind::False: return false;
        case Formula::Kind::Cmp: {
            CmpOp op = f->cmp;
            if (op == CmpOp::Unify || op == CmpOp::Is || op == CmpOp::Assign) op = CmpOp::Eq;
            return apply_cmp(op, eval_term(f->lhs, row), eval_term(f->rhs, row));
        }
        case Formula::Kind::Not: return !eval_ground(f->sub, row);
        case Formula::Kind::And:
            for (const auto& s : f->subs)
                if (!eval_ground(s, row)) return false;
            return true;
        case Formula::Kind::Or:
            for (const auto& s : f->subs)
                if (eval_ground(s, row)) return true;
            return false;
        case Formula::Kind::Atom: throw EvalError("predicate inside ground formula");
    }
    return false;
}

struct BodyEvaluator {
    const Database& db;
    const std::map<std::string, Relation>& idb;

    std::vector<Env> eval(const FormulaPtr& f, std::vector<Env> envs) const {
        switch (f->kind) {
            case Formula::Kind::True: return envs;
            case Formula::Kind::False: return {};
            case Formula::Kind::Atom: return eval_atom(f, std::move(envs));
            case Formula::Kind::Cmp: return eval_cmp(f, std::move(envs));
            case Formula::Kind::Not: return eval_not(f, std::move(envs));
            case Formula::Kind::And: {
                for (const auto& s : f->subs) {
                    envs = eval(s, std::move(envs));
                    if (envs.empty()) return envs;
                }
                return envs;
            }
            case Formula::Kind::Or: return eval_or(f, std::move(envs));
        }
        return {};
    }

private:
    // rows of predicate p as value tuples
    std::vector<std::vector<Value>> pred_rows(const std::string& pred) const {
        auto t = db.tables.find(pred);
        if (t != db.tables.end()) return t->second.rows;
        auto r = idb.find(pred);
        if (r == idb.end()) throw EvalError("unknown predicate " + pred);
        return {r->second.rows.begin(), r->second.rows.end()};
    }

    std::vector<Env> eval_atom(const FormulaPtr& f, std::vector<Env> envs) const {
        std::vector<std::vector<Value>> rows = pred_rows(f->pred);
        std::vector<Env> out;
        std::set<Env> seen;
        for (const auto& env : envs) {
            for (const auto& row : rows) {
                if (row.size() != f->args.size())
                    throw EvalError("arity mismatch on " + f->pred);
                Env next = env;
                bool ok = true;
                for (size_t i = 0; i < row.size() && ok; ++i) {
                    const TermPtr& arg = f->args[i];
                    if (arg->kind == Term::Kind::Hole) continue; // matches anything
                    if (arg->is_var()) {
                        auto it = next.find(arg->name);
                        if (it == next.end())
                            next.emplace(arg->name, row[i]);
                        else
                            ok = values_match(it->second, row[i]);
                    } else {
                        ok = values_match(eval_term(arg, next), row[i]);
                    }
                }
                if (ok && seen.insert(next).second) out.push_back(std::move(next));
            }
        }
        return out;
    }

    std::vector<Env> eval_cmp(const FormulaPtr& f, std::vector<Env> envs) const {
        CmpOp op = f->cmp;
        std::vector<Env> out;
        for (auto& env : envs) {
            if (op == CmpOp::Eq) {
                // equality over the universal relation constrains an unbound
                // variable to the other side's value; realized as a binding
                bool l_unbound = f->lhs->is_var() && !env.count(f->lhs->name);
                bool r_unbound = f->rhs->is_var() && !env.count(f->rhs->name);
                if (l_unbound != r_unbound) {
                    const TermPtr& target = l_unbound ? f->lhs : f->rhs;
                    const TermPtr& source = l_unbound ? f->rhs : f->lhs;
                    Env next = env;
                    next.emplace(target->name, eval_term(source, env));
                    out.push_back(std::move(next));
                    continue;
                }
            }
            if (op == CmpOp::Unify || op == CmpOp::Is || op == CmpOp::Assign) {
                bool l_unbound = f->lhs->is_var() && !env.count(f->lhs->name);
                bool r_unbound = f->rhs->is_var() && !env.count(f->rhs->name);
                if (l_unbound && r_unbound)
                    throw EvalError("unification of two unbound variables " + f->lhs->name +
                                    " = " + f->rhs->name);
                if (l_unbound) {
                    Env next = env;
                    next.emplace(f->lhs->name, eval_term(f->rhs, env));
                    out.push_back(std::move(next));
                    continue;
                }
                if (r_unbound && op != CmpOp::Is) {
                    Env next = env;
                    next.emplace(f->rhs->name, eval_term(f->lhs, env));
                    out.push_back(std::move(next));
                    continue;
                }
                if (values_match(eval_term(f->lhs, env), eval_term(f->rhs, env)))
                    out.push_back(std::move(env));
                continue;
            }
            if (apply_cmp(op, eval_term(f->lhs, env), eval_term(f->rhs, env)))
                out.push_back(std::move(env));
        }
        return out;
    }

    std::vector<Env> eval_not(const FormulaPtr& f, std::vector<Env> envs) const {
        const FormulaPtr& sub = f->sub;
        if (sub->kind == Formula::Kind::Atom) {
            // anti-join: keep rows no tuple of the relation matches
            std::vector<std::vector<Value>> rows = pred_rows(sub->pred);
            std::vector<Env> out;
            for (auto& env : envs) {
                std::vector<Value> key;
                key.reserve(sub->args.size());
                for (const auto& arg : sub->args) key.push_back(eval_term(arg, env));
                bool hit = false;
                for (const auto& row : rows) {
                    bool all = true;
                    for (size_t i = 0; i < row.size() && all; ++i)
                        all = values_match(key[i], row[i]);
                    if (all) {
                        hit = true;
                        break;
                    }
                }
                if (!hit) out.push_back(std::move(env));
            }
            return out;
        }
        std::vector<Env> out;
        for (auto& env : envs)
            if (!eval_ground(sub, env)) out.push_back(std::move(env));
        return out;
    }

    std::vector<Env> eval_or(const FormulaPtr& f, std::vector<Env> envs) const {
        // vars bound by every branch survive; branch-local vars are projected
        // away (and later use of them fails as unbound)
        std::set<std::string> incoming;
        if (!envs.empty())
            for (const auto& [k, v] : envs.front()) incoming.insert(k);
        std::vector<std::vector<Env>> branch_results;
        for (const auto& s : f->subs) branch_results.push_back(eval(s, envs));

        std::optional<std::set<std::string>> common_new;
        for (const auto& res : branch_results) {
            if (res.empty()) continue;
            std::set<std::string> added;
            for (const auto& [k, v] : res.front())
                if (!incoming.count(k)) added.insert(k);
            if (!common_new) {
                common_new = added;
            } else {
                std::set<std::string> inter;
                std::set_intersection(common_new->begin(), common_new->end(), added.begin(),
                                      added.end(), std::inserter(inter, inter.begin()));
                common_new = inter;
            }
        }
        std::set<std::string> keep = incoming;
        if (common_new) keep.insert(common_new->begin(), common_new->end());

        std::set<Env> seen;
        std::vector<Env> out;
        for (auto& res : branch_results) {
            for (auto& env : res) {
                Env proj;
                for (const auto& [k, v] : env)
                    if (keep.count(k)) proj.emplace(k, v);
                if (seen.insert(proj).second) out.push_back(std::move(proj));
            }
        }
        return out;
    }
};

} // namespace

Relation eval_rule(const Clause& rule, const Database& db,
                   const std::map<std::string, Relation>& idb, const Env& input_bindings) {
    BodyEvaluator be{db, idb};
    std::vector<Env> envs = be.eval(rule.body, {input_bindings});
    Relation out;
    out.arity = rule.head_args.size();
    for (const auto& env : envs) {
        std::vector<Value> row;
        row.reserve(rule.head_args.size());
        for (const auto& h : rule.head_args) row.push_back(eval_term(h, env));
        out.rows.insert(std::move(row));
    }
    return out;
}

namespace {

void check_semipositive(const ProgramAst& p) {
    std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& f) {
        if (!f) return;
        switch (f->kind) {
            case Formula::Kind::Not:
                if (f->sub->kind == Formula::Kind::Atom && !p.is_edb(f->sub->pred))
                    throw EvalError("negation on IDB predicate " + f->sub->pred +
                                    " (program not semipositive)");
                walk(f->sub);
                break;
            case Formula::Kind::And:
            case Formula::Kind::Or:
                for (const auto& s : f->subs) walk(s);
                break;
            default: break;
        }
    };
    for (const auto& c : p.clauses) walk(c.body);
}

Value client_value(const GoalInput& in, const ClientArgs& args) {
    if (!in.is_client_arg) return eval_term(in.value, {});
    auto it = args.find(in.arg_name);
    if (it == args.end()) throw EvalError("missing client argument " + in.arg_name);
    return it->second;
}

Answer select_goal(const Goal& goal, const Relation& rel, const ClientArgs& args) {
    Answer ans;
    for (const auto& out : goal.outputs) {
        ans.columns.push_back(out.var);
        ans.published.push_back(out.published);
    }
    std::vector<std::pair<int, Value>> filters;
    for (const auto& in : goal.inputs) filters.emplace_back(in.pos, client_value(in, args));

    for (const auto& row : rel.rows) {
        bool ok = true;
        for (const auto& [pos, v] : filters)
            if (!values_match(row[pos], v)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        std::vector<Value> proj;
        proj.reserve(goal.outputs.size());
        for (const auto& out : goal.outputs) proj.push_back(row[out.pos]);
        ans.rows.insert(std::move(proj));
    }

    if (goal.aggregation) {
        size_t col = 0;
        for (size_t i = 0; i < goal.outputs.size(); ++i)
            if (goal.outputs[i].var == goal.aggregation->over_var) col = i;
        bool empty = false;
        ans.aggregate = aggregate(ans.rows, col, goal.aggregation->kind, empty);
        ans.empty_aggregate = empty;
    }
    return ans;
}

} // namespace

Answer eval_program(const ProgramAst& p, const Database& db, const ClientArgs& args,
                    int max_iter) {
    check_semipositive(p);

    std::map<std::string, Relation> idb;
    for (const auto& c : p.clauses) {
        Relation& r = idb[c.head];
        r.arity = c.head_args.size();
    }

    bool fixpoint = false;
    for (int iter = 0; iter < max_iter && !fixpoint; ++iter) {
        std::map<std::string, Relation> next = idb;
        for (const auto& c : p.clauses) {
            Relation derived = eval_rule(c, db, idb, {});
            next[c.head].rows.insert(derived.rows.begin(), derived.rows.end());
        }
        fixpoint = true;
        for (const auto& [pred, rel] : next)
            fixpoint &= (rel.rows == idb[pred].rows);
        idb = std::move(next);
    }

    Answer ans = select_goal(p.goal, idb.at(p.goal.target), args);
    ans.fixpoint = fixpoint;
    return ans;
}

Answer eval_goal_rules(const std::vector<Clause>& goal_rules, const Goal& goal,
                       const Database& db, const ClientArgs& args) {
    std::map<std::string, Relation> empty_idb;
    Relation combined;
    combined.arity = goal.target_args.size();
    for (const auto& rule : goal_rules) {
        Env inputs;
        for (const auto& in : goal.inputs) {
            const TermPtr& hv = rule.head_args[in.pos];
            if (!hv->is_var()) throw EvalError("non-variable head argument in goal rule");
            inputs.emplace(hv->name, client_value(in, args));
        }
        Relation r = eval_rule(rule, db, empty_idb, inputs);
        combined.rows.insert(r.rows.begin(), r.rows.end());
    }
    // rows carry all head positions; selection re-checks inputs (head vars may
    // also appear elsewhere) and projects outputs
    return select_goal(goal, combined, args);
}

Value aggregate(const std::set<std::vector<Value>>& rows, size_t column, AggKind kind,
                bool& empty_out) {
    empty_out = false;
    if (kind == AggKind::Count) return Value::integer(static_cast<int64_t>(rows.size()));

    if (kind == AggKind::Sum) {
        bool any_float = false, poisoned = false;
        int64_t isum = 0;
        double fsum = 0;
        for (const auto& row : rows) {
            const Value& v = row[column];
            if (v.is_garbage()) {
                poisoned = true;
                continue;
            }
            if (v.kind() == Value::Kind::Float) any_float = true;
            if (v.kind() == Value::Kind::Int)
                isum = static_cast<int64_t>(static_cast<uint64_t>(isum) +
                                            static_cast<uint64_t>(v.as_int()));
            else
                fsum += v.to_double();
        }
        if (poisoned) return Value::garbage();
        if (any_float) return Value::real(fsum + static_cast<double>(isum));
        return Value::integer(isum);
    }

    // min / max skip garbage entries
    std::optional<Value> best;
    for (const auto& row : rows) {
        const Value& v = row[column];
        if (v.is_garbage()) continue;
        if (!best) {
            best = v;
            continue;
        }
        bool better = apply_cmp(kind == AggKind::Min ? CmpOp::Lt : CmpOp::Gt, v, *best);
        if (better) best = v;
    }
    if (!best) {
        empty_out = true;
        return Value::garbage();
    }
    return *best;
}

} // namespace privalog
