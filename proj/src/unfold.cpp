#include <algorithm>
#include <functional>

#include "privalog/frontend.hpp"
#include "privalog/prune.hpp"
#include "privalog/unfold.hpp"
#include "privalog/value.hpp"

namespace privalog {

// ---------------------------------------------------------------------------
// canonical form
// ---------------------------------------------------------------------------

namespace {

void walk_terms(const FormulaPtr& f, const std::function<void(const TermPtr&)>& fn) {
    switch (f->kind) {
        case Formula::Kind::Atom:
            for (const auto& a : f->args) fn(a);
            break;
        case Formula::Kind::Cmp:
            fn(f->lhs);
            fn(f->rhs);
            break;
        case Formula::Kind::Not: walk_terms(f->sub, fn); break;
        case Formula::Kind::And:
        case Formula::Kind::Or:
            for (const auto& s : f->subs) walk_terms(s, fn);
            break;
        default: break;
    }
}

void order_vars(const TermPtr& t, std::vector<std::string>& order, std::set<std::string>& seen) {
    if (!t) return;
    switch (t->kind) {
        case Term::Kind::Var:
            if (seen.insert(t->name).second) order.push_back(t->name);
            break;
        case Term::Kind::Bin:
            order_vars(t->lhs, order, seen);
            order_vars(t->rhs, order, seen);
            break;
        case Term::Kind::Sqrt: order_vars(t->lhs, order, seen); break;
        default: break;
    }
}

} // namespace

std::string canonical_key(const Clause& c) {
    std::vector<std::string> order;
    std::set<std::string> seen;
    for (const auto& h : c.head_args) order_vars(h, order, seen);
    for (const auto& lit : conjuncts(c.body))
        walk_terms(lit, [&](const TermPtr& t) { order_vars(t, order, seen); });

    Clause renamed = c;
    for (size_t i = 0; i < order.size(); ++i) {
        TermPtr repl = Term::var("v" + std::to_string(i));
        for (auto& h : renamed.head_args) h = substitute(h, order[i], repl);
        renamed.body = substitute(renamed.body, order[i], repl);
    }
    return pretty_print(renamed);
}

// ---------------------------------------------------------------------------
// simplification: copy propagation, constant folding, dead assignment removal
// ---------------------------------------------------------------------------

namespace {

std::optional<Value> const_value(const TermPtr& t) {
    switch (t->kind) {
        case Term::Kind::IntConst: return Value::integer(t->ival);
        case Term::Kind::FloatConst: return Value::real(t->fval);
        case Term::Kind::StrConst: return Value::str(t->sval);
        default: return std::nullopt;
    }
}

TermPtr term_of_value(const Value& v) {
    switch (v.kind()) {
        case Value::Kind::Int: return Term::int_const(v.as_int());
        case Value::Kind::Float: return Term::float_const(v.as_float());
        case Value::Kind::Str: return Term::str_const(v.as_str());
        default: return nullptr; // garbage never folds
    }
}

TermPtr fold_term(const TermPtr& t) {
    switch (t->kind) {
        case Term::Kind::Bin: {
            TermPtr l = fold_term(t->lhs), r = fold_term(t->rhs);
            auto lv = const_value(l), rv = const_value(r);
            if (lv && rv) {
                if (TermPtr folded = term_of_value(apply_arith(t->op, *lv, *rv))) return folded;
            }
            return (l == t->lhs && r == t->rhs) ? t : Term::bin(t->op, l, r);
        }
        case Term::Kind::Sqrt: {
            TermPtr l = fold_term(t->lhs);
            if (auto lv = const_value(l)) {
                if (TermPtr folded = term_of_value(apply_sqrt(*lv))) return folded;
            }
            return l == t->lhs ? t : Term::sqrt(l);
        }
        default: return t;
    }
}

TermPtr apply_subst_term(const TermPtr& t, const std::map<std::string, TermPtr>& sub) {
    switch (t->kind) {
        case Term::Kind::Var: {
            auto it = sub.find(t->name);
            return it == sub.end() ? t : it->second;
        }
        case Term::Kind::Bin: {
            TermPtr l = apply_subst_term(t->lhs, sub), r = apply_subst_term(t->rhs, sub);
            return (l == t->lhs && r == t->rhs) ? t : Term::bin(t->op, l, r);
        }
        case Term::Kind::Sqrt: {
            TermPtr l = apply_subst_term(t->lhs, sub);
            return l == t->lhs ? t : Term::sqrt(l);
        }
        default: return t;
    }
}

FormulaPtr apply_subst(const FormulaPtr& f, const std::map<std::string, TermPtr>& sub) {
    switch (f->kind) {
        case Formula::Kind::Atom: {
            std::vector<TermPtr> args;
            for (const auto& a : f->args) args.push_back(fold_term(apply_subst_term(a, sub)));
            return Formula::atom(f->pred, std::move(args));
        }
        case Formula::Kind::Cmp:
            return Formula::comparison(f->cmp, fold_term(apply_subst_term(f->lhs, sub)),
                                       fold_term(apply_subst_term(f->rhs, sub)));
        case Formula::Kind::Not: return Formula::negate(apply_subst(f->sub, sub));
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::vector<FormulaPtr> subs;
            for (const auto& s : f->subs) subs.push_back(apply_subst(s, sub));
            return f->kind == Formula::Kind::And ? Formula::conj(std::move(subs))
                                                 : Formula::disj(std::move(subs));
        }
        default: return f;
    }
}

// true -> literal drops; false -> rule dies; nullopt -> keep
std::optional<bool> ground_truth(const FormulaPtr& f) {
    switch (f->kind) {
        case Formula::Kind::True: return true;
        case Formula::Kind::False: return false;
        case Formula::Kind::Cmp: {
            if (f->cmp == CmpOp::Assign || f->cmp == CmpOp::Unify || f->cmp == CmpOp::Is)
                return std::nullopt;
            auto lv = const_value(f->lhs), rv = const_value(f->rhs);
            if (lv && rv) return apply_cmp(f->cmp, *lv, *rv);
            return std::nullopt;
        }
        case Formula::Kind::Not: {
            auto s = ground_truth(f->sub);
            if (s) return !*s;
            return std::nullopt;
        }
        case Formula::Kind::Or: {
            bool all_const = true;
            for (const auto& s : f->subs) {
                auto v = ground_truth(s);
                if (v && *v) return true;
                all_const &= v.has_value();
            }
            if (all_const) return false;
            return std::nullopt;
        }
        case Formula::Kind::And: {
            bool all_const = true;
            for (const auto& s : f->subs) {
                auto v = ground_truth(s);
                if (v && !*v) return false;
                all_const &= v.has_value();
            }
            if (all_const) return true;
            return std::nullopt;
        }
        default: return std::nullopt;
    }
}

size_t count_var_uses(const std::string& v, const std::vector<FormulaPtr>& lits, size_t from) {
    size_t n = 0;
    for (size_t i = from; i < lits.size(); ++i) {
        auto vs = formula_vars(lits[i]);
        n += vs.count(v);
    }
    return n;
}

} // namespace

std::optional<Clause> simplify_rule(const Clause& c) {
    std::set<std::string> head_vars;
    for (const auto& h : c.head_args) collect_vars(h, head_vars);

    std::vector<FormulaPtr> lits = conjuncts(c.body);
    std::map<std::string, TermPtr> sub;
    std::vector<FormulaPtr> out;
    for (size_t i = 0; i < lits.size(); ++i) {
        FormulaPtr lit = apply_subst(lits[i], sub);
        if (lit->kind == Formula::Kind::Cmp && lit->cmp == CmpOp::Assign && lit->lhs->is_var()) {
            const std::string& v = lit->lhs->name;
            const TermPtr& rhs = lit->rhs;
            bool needed_by_head = head_vars.count(v) != 0;
            size_t later_uses = count_var_uses(v, lits, i + 1);
            bool simple = rhs->is_var() || rhs->is_const();
            if (!needed_by_head && later_uses == 0) continue; // dead assignment
            if (simple || (!needed_by_head && later_uses == 1)) {
                sub[v] = rhs;
                if (needed_by_head) out.push_back(lit);
                continue;
            }
            out.push_back(lit);
            continue;
        }
        auto truth = ground_truth(lit);
        if (truth) {
            if (*truth) continue;
            return std::nullopt; // body is identically false
        }
        out.push_back(lit);
    }

    // dead-assignment elimination, backward
    std::set<std::string> needed = head_vars;
    std::vector<FormulaPtr> kept;
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
        const FormulaPtr& lit = *it;
        if (lit->kind == Formula::Kind::Cmp && lit->cmp == CmpOp::Assign && lit->lhs->is_var() &&
            !needed.count(lit->lhs->name)) {
            continue;
        }
        if (lit->kind == Formula::Kind::Cmp && lit->cmp == CmpOp::Assign && lit->lhs->is_var()) {
            needed.erase(lit->lhs->name);
            collect_vars(lit->rhs, needed);
        } else {
            collect_vars(lit, needed);
        }
        kept.push_back(lit);
    }
    std::reverse(kept.begin(), kept.end());

    Clause simplified;
    simplified.head = c.head;
    simplified.head_args = c.head_args; // head variables must stay variables
    simplified.body = kept.empty() ? Formula::truth() : Formula::conj(std::move(kept));
    return simplified;
}

// ---------------------------------------------------------------------------
// unfolding
// ---------------------------------------------------------------------------

namespace {

Clause rename_all_vars(const Clause& c, FreshNamer& namer, std::map<std::string, TermPtr>& theta) {
    std::set<std::string> vars;
    for (const auto& h : c.head_args) collect_vars(h, vars);
    collect_vars(c.body, vars);
    theta.clear();
    for (const auto& v : vars) theta.emplace(v, Term::var(namer.fresh()));
    Clause out = c;
    for (auto& h : out.head_args) h = apply_subst_term(h, theta);
    out.body = apply_subst(out.body, theta);
    return out;
}

} // namespace

std::vector<std::vector<FormulaPtr>> unfold_body(const std::vector<FormulaPtr>& lits,
                                                 const std::set<std::string>& bound,
                                                 const RuleBase& rb, FreshNamer& namer,
                                                 size_t branch_cap, bool* truncated) {
    struct Branch {
        std::vector<FormulaPtr> lits;
        std::set<std::string> bound;
    };
    std::vector<Branch> branches{{{}, bound}};

    for (const auto& lit : lits) {
        if (lit->kind == Formula::Kind::True) continue;
        if (lit->kind == Formula::Kind::False) return {};
        bool idb_atom = lit->kind == Formula::Kind::Atom && rb.patterns.count(lit->pred) != 0;
        if (!idb_atom) {
            for (auto& br : branches) {
                br.lits.push_back(lit);
                collect_vars(lit, br.bound);
            }
            continue;
        }

        const std::string& pattern = rb.patterns.at(lit->pred);
        auto rules_it = rb.rules.find(lit->pred);
        if (rules_it == rb.rules.end() || rules_it->second.empty()) return {};

        std::vector<Branch> next;
        for (const auto& br : branches) {
            if (next.size() >= branch_cap) {
                if (truncated) *truncated = true;
                break;
            }
            for (const Clause& def : rules_it->second) {
                if (next.size() >= branch_cap) {
                    if (truncated) *truncated = true;
                    break;
                }
                std::map<std::string, TermPtr> theta;
                Clause fresh = rename_all_vars(def, namer, theta);

                // bound positions: substitute the caller's term for the head
                // variable; free positions: equate after the spliced body
                std::map<std::string, TermPtr> head_sub;
                std::vector<std::pair<TermPtr, TermPtr>> equalities; // caller arg, head var
                for (size_t i = 0; i < lit->args.size(); ++i) {
                    const TermPtr& hv = fresh.head_args[i];
                    if (!hv->is_var())
                        throw TransformError("non-variable head argument in rulebase rule " +
                                             def.head);
                    if (pattern[i] == 'b')
                        head_sub[hv->name] = lit->args[i];
                    else
                        equalities.emplace_back(lit->args[i], hv);
                }

                Branch nb = br;
                FormulaPtr spliced = apply_subst(fresh.body, head_sub);
                for (const auto& l : conjuncts(spliced)) {
                    nb.lits.push_back(l);
                    collect_vars(l, nb.bound);
                }
                for (const auto& [arg, hv] : equalities) {
                    // a repeated output variable is an assignment on its first
                    // occurrence and a comparison afterwards
                    bool fresh_var = arg->is_var() && !nb.bound.count(arg->name);
                    FormulaPtr eq =
                        Formula::comparison(fresh_var ? CmpOp::Assign : CmpOp::Eq, arg, hv);
                    nb.lits.push_back(eq);
                    collect_vars(eq, nb.bound);
                }
                next.push_back(std::move(nb));
            }
        }
        branches = std::move(next);
        if (branches.empty()) return {};
    }

    std::vector<std::vector<FormulaPtr>> out;
    out.reserve(branches.size());
    for (auto& br : branches) out.push_back(std::move(br.lits));
    return out;
}

RuleBase unfold_program(const AdornedProgram& p, const UnfoldOptions& opts) {
    RuleBase rb;
    rb.patterns = p.patterns;
    rb.schemas = p.program.schemas;
    rb.goal = p.program.goal;
    rb.warnings = p.warnings;

    for (const auto& s : p.program.schemas) {
        Clause t;
        t.head = s.pred;
        for (size_t i = 0; i < s.columns.size(); ++i)
            t.head_args.push_back(Term::var("X" + std::to_string(i)));
        t.body = Formula::truth();
        rb.edb_trivial.push_back(std::move(t));
    }
    for (const auto& [name, pat] : rb.patterns) rb.rules[name]; // ensure entries

    FreshNamer namer(all_program_vars(p.program));
    std::map<std::string, std::set<std::string>> canon; // pred -> canonical keys
    size_t total_rules = 0;

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        // one rulebase application: every original rule re-expanded against
        // the previous snapshot
        std::map<std::string, std::vector<Clause>> fresh_rules;
        bool truncated = false;
        for (const auto& c : p.program.clauses) {
            std::set<std::string> bound = p.head_bound(c);
            auto bodies =
                unfold_body(conjuncts(c.body), bound, rb, namer, opts.max_rules, &truncated);
            for (auto& body : bodies) {
                Clause nc;
                nc.head = c.head;
                nc.head_args = c.head_args;
                nc.body = body.empty() ? Formula::truth() : Formula::conj(std::move(body));
                std::optional<Clause> simplified = simplify_rule(nc);
                if (!simplified) {
                    rb.pruned.push_back(std::move(nc));
                    continue;
                }
                if (opts.prune && check_consistent(*simplified) == Sat::Unsat) {
                    rb.pruned.push_back(std::move(*simplified));
                    continue;
                }
                fresh_rules[c.head].push_back(std::move(*simplified));
            }
        }

        bool changed = false;
        for (auto& [pred, rules] : fresh_rules) {
            for (auto& r : rules) {
                std::string key = canonical_key(r);
                if (canon[pred].insert(key).second) {
                    rb.rules[pred].push_back(std::move(r));
                    ++total_rules;
                    changed = true;
                }
            }
        }
        if (truncated) {
            rb.warnings.push_back(
                "expansion branch cap reached; some combinations were dropped");
        }
        if (!changed) {
            rb.fixpoint = !truncated;
            break;
        }
        rb.iterations = iter + 1;
        if (total_rules > opts.max_rules) {
            rb.warnings.push_back("rulebase size cap reached (" +
                                  std::to_string(total_rules) + " rules); stopping early");
            break;
        }
    }
    if (!rb.fixpoint)
        rb.warnings.push_back(
            "iteration bound reached before fixpoint; answers are a sound under-approximation");

    // dedupe pruned rules for reporting
    std::set<std::string> pruned_keys;
    std::vector<Clause> pruned;
    for (auto& c : rb.pruned)
        if (pruned_keys.insert(canonical_key(c)).second) pruned.push_back(std::move(c));
    rb.pruned = std::move(pruned);
    return rb;
}

} // namespace privalog
