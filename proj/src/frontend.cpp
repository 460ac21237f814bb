#include <functional>
#include <map>

#include "privalog/frontend.hpp"
#include "privalog/names.hpp"

namespace privalog {

std::set<std::string> all_program_vars(const ProgramAst& p) {
    std::set<std::string> vars;
    for (const auto& c : p.clauses) {
        for (const auto& t : c.head_args) collect_vars(t, vars);
        collect_vars(c.body, vars);
    }
    for (const auto& t : p.goal.target_args) collect_vars(t, vars);
    return vars;
}

namespace {

bool term_is_ground(const TermPtr& t) {
    if (t->kind == Term::Kind::Hole || t->kind == Term::Kind::ClientArg) return false;
    return term_vars(t).empty();
}

// EDB-targeting goals, repeated goal variables and ground compound arguments
// are folded into a synthetic wrapper rule so the rest of the pipeline only
// ever sees an IDB goal with distinct variable/constant/@arg positions.
bool needs_fold(const ProgramAst& p, const Goal& g) {
    if (p.is_edb(g.target)) return true;
    std::set<std::string> seen;
    for (const auto& t : g.target_args) {
        if (t->is_var() && !seen.insert(t->name).second) return true;
        if (t->kind == Term::Kind::Bin || t->kind == Term::Kind::Sqrt) return true;
    }
    return false;
}

void fold_goal(ProgramAst& p, std::set<std::string>& hole_vars) {
    FreshNamer namer(all_program_vars(p));
    Goal& g = p.goal;

    std::string wrapper = "goal_" + g.target;
    while (p.has_rules(wrapper) || p.is_edb(wrapper)) wrapper += "_";

    Clause rule;
    rule.head = wrapper;
    std::vector<TermPtr> body_args;
    std::vector<TermPtr> new_goal_args;
    std::set<std::string> seen;
    for (const auto& t : g.target_args) {
        switch (t->kind) {
            case Term::Kind::Var:
                body_args.push_back(t);
                if (seen.insert(t->name).second) {
                    rule.head_args.push_back(t);
                    new_goal_args.push_back(t);
                }
                break;
            case Term::Kind::Hole: {
                std::string v = namer.fresh();
                hole_vars.insert(v);
                body_args.push_back(Term::var(v));
                rule.head_args.push_back(Term::var(v));
                new_goal_args.push_back(Term::var(v));
                break;
            }
            case Term::Kind::ClientArg: {
                std::string v = namer.fresh("W");
                body_args.push_back(Term::var(v));
                rule.head_args.push_back(Term::var(v));
                new_goal_args.push_back(t);
                break;
            }
            default:
                if (!term_is_ground(t))
                    throw ValidationError("goal argument is a non-ground expression");
                body_args.push_back(t); // baked constant / ground expression
                break;
        }
    }
    rule.body = Formula::atom(g.target, std::move(body_args));
    p.clauses.push_back(std::move(rule));
    g.target = wrapper;
    g.target_args = std::move(new_goal_args);
}

} // namespace

void desugar_goal(ProgramAst& p) {
    std::set<std::string> hole_vars;
    // `_` in goal args participates in the answer set but is never published
    {
        FreshNamer namer(all_program_vars(p));
        for (auto& t : p.goal.target_args) {
            if (t->kind == Term::Kind::Hole) {
                std::string v = namer.fresh();
                hole_vars.insert(v);
                t = Term::var(v);
            }
        }
    }
    if (needs_fold(p, p.goal)) fold_goal(p, hole_vars);

    Goal& g = p.goal;
    g.inputs.clear();
    g.outputs.clear();
    for (size_t i = 0; i < g.target_args.size(); ++i) {
        const TermPtr& t = g.target_args[i];
        switch (t->kind) {
            case Term::Kind::Var: {
                GoalOutput out;
                out.pos = static_cast<int>(i);
                out.var = t->name;
                out.published = hole_vars.count(t->name) == 0;
                g.outputs.push_back(std::move(out));
                break;
            }
            case Term::Kind::ClientArg: {
                GoalInput in;
                in.pos = static_cast<int>(i);
                in.is_client_arg = true;
                in.arg_name = t->name;
                g.inputs.push_back(std::move(in));
                break;
            }
            case Term::Kind::IntConst:
            case Term::Kind::FloatConst:
            case Term::Kind::StrConst: {
                GoalInput in;
                in.pos = static_cast<int>(i);
                in.value = t;
                g.inputs.push_back(std::move(in));
                break;
            }
            default:
                throw ValidationError("goal arguments must be variables, constants or @args");
        }
    }
    if (g.aggregation) {
        bool over_found = false;
        for (const auto& out : g.outputs) over_found |= (out.var == g.aggregation->over_var);
        if (!over_found)
            throw ValidationError("aggregation variable " + g.aggregation->over_var +
                                  " is not a free goal argument");
        // only the aggregate value is published
        for (auto& out : g.outputs) out.published = false;
    }
}

void validate(const ProgramAst& p) {
    std::map<std::string, size_t> idb_arity;
    for (const auto& c : p.clauses) {
        if (p.is_edb(c.head))
            throw ValidationError("predicate " + c.head +
                                  " is table-declared; facts/rules for it are not allowed "
                                  "(provide rows via the database)");
        auto [it, inserted] = idb_arity.emplace(c.head, c.head_args.size());
        if (!inserted && it->second != c.head_args.size())
            throw ValidationError("inconsistent arity for predicate " + c.head);
    }

    auto check_atom = [&](const std::string& pred, size_t arity) {
        if (const SchemaDecl* s = p.find_schema(pred)) {
            if (s->columns.size() != arity)
                throw ValidationError("arity mismatch for " + pred + ": schema has " +
                                      std::to_string(s->columns.size()) + " columns, atom has " +
                                      std::to_string(arity));
            return;
        }
        auto it = idb_arity.find(pred);
        if (it == idb_arity.end())
            throw ValidationError("unknown predicate " + pred);
        if (it->second != arity)
            throw ValidationError("arity mismatch for " + pred);
    };

    std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& f) {
        if (!f) return;
        switch (f->kind) {
            case Formula::Kind::Atom: check_atom(f->pred, f->args.size()); break;
            case Formula::Kind::Not: walk(f->sub); break;
            case Formula::Kind::And:
            case Formula::Kind::Or:
                for (const auto& s : f->subs) walk(s);
                break;
            case Formula::Kind::Cmp: {
                bool ordering = f->cmp == CmpOp::Lt || f->cmp == CmpOp::Le ||
                                f->cmp == CmpOp::Ge || f->cmp == CmpOp::Gt;
                if (ordering && (f->lhs->kind == Term::Kind::StrConst ||
                                 f->rhs->kind == Term::Kind::StrConst))
                    throw ValidationError("ordering comparison on string constant");
                break;
            }
            default: break;
        }
    };
    for (const auto& c : p.clauses) walk(c.body);

    check_atom(p.goal.target, p.goal.target_args.size());
    if (!p.has_rules(p.goal.target))
        throw ValidationError("goal predicate " + p.goal.target + " has no rules");

    for (const auto& s : p.schemas) {
        if (s.primary_key && (*s.primary_key < 0 ||
                              *s.primary_key >= static_cast<int>(s.columns.size())))
            throw ValidationError("primary key index out of range for " + s.pred);
    }
}

} // namespace privalog
