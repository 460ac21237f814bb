#include <algorithm>
#include <deque>
#include <functional>

#include "privalog/names.hpp"
#include "privalog/transform.hpp"

namespace privalog {

std::set<std::string> AdornedProgram::head_bound(const Clause& c) const {
    std::set<std::string> out;
    auto it = patterns.find(c.head);
    if (it == patterns.end()) return out;
    const std::string& pat = it->second;
    for (size_t i = 0; i < c.head_args.size() && i < pat.size(); ++i)
        if (pat[i] == 'b' && c.head_args[i]->is_var()) out.insert(c.head_args[i]->name);
    return out;
}

std::string goal_pattern(const Goal& g) {
    std::string pat(g.target_args.size(), 'f');
    for (const auto& in : g.inputs) pat[in.pos] = 'b';
    return pat;
}

std::vector<std::set<std::string>> bound_sets(const Clause& c,
                                              const std::set<std::string>& initial) {
    std::vector<std::set<std::string>> out;
    out.push_back(initial);
    std::set<std::string> b = initial;
    for (const auto& lit : conjuncts(c.body)) {
        collect_vars(lit, b);
        out.push_back(b);
    }
    return out;
}

// ---------------------------------------------------------------------------
// desugar_heads
// ---------------------------------------------------------------------------

ProgramAst desugar_heads(const ProgramAst& p) {
    ProgramAst out = p;
    FreshNamer namer(all_program_vars(p));
    for (auto& c : out.clauses) {
        std::vector<FormulaPtr> front, back;
        std::set<std::string> seen;
        for (auto& arg : c.head_args) {
            if (arg->kind == Term::Kind::Hole) {
                arg = Term::var(namer.fresh());
                seen.insert(arg->name);
                continue;
            }
            if (arg->is_var() && seen.insert(arg->name).second) continue;
            std::string v = namer.fresh("X");
            FormulaPtr eq = Formula::comparison(CmpOp::Unify, Term::var(v), arg);
            if (term_vars(arg).empty() || arg->is_var())
                front.push_back(eq);
            else
                back.push_back(eq);
            arg = Term::var(v);
            seen.insert(v);
        }
        if (front.empty() && back.empty()) continue;
        std::vector<FormulaPtr> lits = std::move(front);
        for (const auto& l : conjuncts(c.body)) lits.push_back(l);
        for (auto& l : back) lits.push_back(std::move(l));
        c.body = lits.empty() ? Formula::truth() : Formula::conj(std::move(lits));
    }
    // holes inside bodies become fresh free variables as well
    std::function<FormulaPtr(const FormulaPtr&)> defresh = [&](const FormulaPtr& f) -> FormulaPtr {
        if (!f) return f;
        std::function<TermPtr(const TermPtr&)> dt = [&](const TermPtr& t) -> TermPtr {
            if (!t) return t;
            switch (t->kind) {
                case Term::Kind::Hole: return Term::var(namer.fresh());
                case Term::Kind::Bin: return Term::bin(t->op, dt(t->lhs), dt(t->rhs));
                case Term::Kind::Sqrt: return Term::sqrt(dt(t->lhs));
                default: return t;
            }
        };
        switch (f->kind) {
            case Formula::Kind::Atom: {
                std::vector<TermPtr> args;
                for (const auto& a : f->args) args.push_back(dt(a));
                return Formula::atom(f->pred, std::move(args));
            }
            case Formula::Kind::Cmp:
                return Formula::comparison(f->cmp, dt(f->lhs), dt(f->rhs));
            case Formula::Kind::Not: return Formula::negate(defresh(f->sub));
            case Formula::Kind::And:
            case Formula::Kind::Or: {
                std::vector<FormulaPtr> subs;
                for (const auto& s : f->subs) subs.push_back(defresh(s));
                return f->kind == Formula::Kind::And ? Formula::conj(std::move(subs))
                                                     : Formula::disj(std::move(subs));
            }
            default: return f;
        }
    };
    for (auto& c : out.clauses) c.body = defresh(c.body);
    return out;
}

// ---------------------------------------------------------------------------
// adorn
// ---------------------------------------------------------------------------

namespace {

struct Adorner {
    const ProgramAst& src;
    AdornedProgram result;
    std::set<std::string> existing_preds;
    std::map<std::pair<std::string, std::string>, std::string> done; // (pred,pattern) -> name
    std::deque<std::pair<std::string, std::string>> queue;

    explicit Adorner(const ProgramAst& p) : src(p) {
        for (const auto& c : p.clauses) existing_preds.insert(c.head);
        for (const auto& s : p.schemas) existing_preds.insert(s.pred);
    }

    std::string request(const std::string& pred, const std::string& pattern) {
        auto key = std::make_pair(pred, pattern);
        auto it = done.find(key);
        if (it != done.end()) return it->second;
        std::string name = pred + "_" + pattern;
        while (existing_preds.count(name)) name += "_a";
        done.emplace(key, name);
        result.patterns.emplace(name, pattern);
        queue.push_back(key);
        return name;
    }

    FormulaPtr adorn_formula(const FormulaPtr& f, std::set<std::string>& bound) {
        switch (f->kind) {
            case Formula::Kind::Atom: {
                FormulaPtr out = f;
                if (!src.is_edb(f->pred)) {
                    std::string pattern;
                    for (const auto& arg : f->args) {
                        std::set<std::string> vs = term_vars(arg);
                        bool is_bound = std::includes(bound.begin(), bound.end(),
                                                      vs.begin(), vs.end());
                        pattern += is_bound ? 'b' : 'f';
                    }
                    out = Formula::atom(request(f->pred, pattern), f->args);
                }
                collect_vars(f, bound);
                return out;
            }
            case Formula::Kind::Cmp:
                collect_vars(f, bound);
                return f;
            case Formula::Kind::Not: {
                const FormulaPtr& sub = f->sub;
                if (sub->kind == Formula::Kind::Atom) {
                    if (!src.is_edb(sub->pred))
                        throw TransformError("negation applies to IDB predicate " + sub->pred);
                } else if (has_atom(sub)) {
                    throw TransformError("negated sub-formula contains a predicate");
                }
                for (const auto& v : formula_vars(sub))
                    if (!bound.count(v))
                        throw TransformError("free variable " + v + " under negation");
                return f;
            }
            case Formula::Kind::And: {
                std::vector<FormulaPtr> subs;
                for (const auto& s : f->subs) subs.push_back(adorn_formula(s, bound));
                return Formula::conj(std::move(subs));
            }
            case Formula::Kind::Or: {
                std::vector<FormulaPtr> subs;
                for (const auto& s : f->subs) {
                    std::set<std::string> branch_bound = bound;
                    subs.push_back(adorn_formula(s, branch_bound));
                }
                collect_vars(f, bound);
                return Formula::disj(std::move(subs));
            }
            default: return f;
        }
    }

    static bool has_atom(const FormulaPtr& f) {
        switch (f->kind) {
            case Formula::Kind::Atom: return true;
            case Formula::Kind::Not: return has_atom(f->sub);
            case Formula::Kind::And:
            case Formula::Kind::Or:
                for (const auto& s : f->subs)
                    if (has_atom(s)) return true;
                return false;
            default: return false;
        }
    }

    void run() {
        result.program.schemas = src.schemas;
        result.program.goal = src.goal;
        result.program.goal.target = request(src.goal.target, goal_pattern(src.goal));

        std::vector<Clause> adorned;
        while (!queue.empty()) {
            auto [pred, pattern] = queue.front();
            queue.pop_front();
            std::string name = done.at({pred, pattern});
            for (const auto& c : src.clauses) {
                if (c.head != pred) continue;
                Clause ac;
                ac.head = name;
                ac.head_args = c.head_args;
                std::set<std::string> bound;
                for (size_t i = 0; i < c.head_args.size(); ++i)
                    if (pattern[i] == 'b') collect_vars(c.head_args[i], bound);
                ac.body = adorn_formula(c.body, bound);
                adorned.push_back(std::move(ac));
            }
        }
        // deterministic output order: adorned name sorts by (predicate, pattern)
        std::stable_sort(adorned.begin(), adorned.end(),
                         [](const Clause& a, const Clause& b) { return a.head < b.head; });
        result.program.clauses = std::move(adorned);

        for (const auto& c : src.clauses) {
            bool reachable = false;
            for (const auto& [key, name] : done) reachable |= (key.first == c.head);
            if (!reachable)
                result.warnings.push_back("dropping rule for unreachable predicate " + c.head);
        }
    }
};

} // namespace

AdornedProgram adorn(const ProgramAst& p) {
    Adorner a(p);
    a.run();
    return a.result;
}

// ---------------------------------------------------------------------------
// split_eq
// ---------------------------------------------------------------------------

namespace {

bool vars_subset(const std::set<std::string>& vs, const std::set<std::string>& bound) {
    return std::includes(bound.begin(), bound.end(), vs.begin(), vs.end());
}

struct EqSplitter {
    Clause rewrite(const Clause& c, std::set<std::string> bound) const {
        Clause out;
        out.head = c.head;
        out.head_args = c.head_args;
        std::vector<FormulaPtr> lits = conjuncts(c.body);
        std::vector<FormulaPtr> result;
        std::vector<FormulaPtr> tail; // re-added unifications of head variables
        for (size_t i = 0; i < lits.size(); ++i) {
            FormulaPtr rewritten = rewrite_literal(lits[i], bound, lits, i, out, tail);
            if (rewritten) {
                collect_vars(rewritten, bound);
                result.push_back(std::move(rewritten));
            }
        }
        for (auto& t : tail) {
            collect_vars(t, bound);
            result.push_back(std::move(t));
        }
        for (const auto& h : out.head_args)
            for (const auto& v : term_vars(h))
                if (!bound.count(v))
                    throw TransformError("head variable " + v + " of " + out.head +
                                         " is never bound in the body");
        out.body = result.empty() ? Formula::truth() : Formula::conj(std::move(result));
        return out;
    }

    FormulaPtr rewrite_literal(const FormulaPtr& lit, std::set<std::string>& bound,
                               std::vector<FormulaPtr>& rest, size_t idx, Clause& clause,
                               std::vector<FormulaPtr>& tail) const {
        switch (lit->kind) {
            case Formula::Kind::Cmp: {
                if (lit->cmp == CmpOp::Unify || lit->cmp == CmpOp::Is)
                    return rewrite_equation(lit, bound, rest, idx, clause, tail);
                if (lit->cmp != CmpOp::Assign && !vars_subset(formula_vars(lit), bound))
                    throw TransformError("comparison over unbound variable");
                return lit;
            }
            case Formula::Kind::Atom: {
                for (const auto& arg : lit->args) {
                    if (arg->is_var() || arg->is_const()) continue;
                    if (!vars_subset(term_vars(arg), bound))
                        throw TransformError("non-ground expression in argument of " + lit->pred);
                }
                return lit;
            }
            case Formula::Kind::Or: {
                std::vector<FormulaPtr> subs;
                for (const auto& s : lit->subs) {
                    std::set<std::string> branch = bound;
                    std::vector<FormulaPtr> branch_lits = conjuncts(s);
                    std::vector<FormulaPtr> branch_out;
                    std::vector<FormulaPtr> no_tail;
                    for (size_t j = 0; j < branch_lits.size(); ++j) {
                        FormulaPtr r = rewrite_literal(branch_lits[j], branch, branch_lits, j,
                                                       clause, no_tail);
                        if (r) {
                            collect_vars(r, branch);
                            branch_out.push_back(std::move(r));
                        }
                    }
                    if (!no_tail.empty())
                        throw TransformError("head unification inside disjunction");
                    subs.push_back(branch_out.empty() ? Formula::truth()
                                                      : Formula::conj(std::move(branch_out)));
                }
                return Formula::disj(std::move(subs));
            }
            default: return lit;
        }
    }

    FormulaPtr rewrite_equation(const FormulaPtr& lit, const std::set<std::string>& bound,
                                std::vector<FormulaPtr>& rest, size_t idx, Clause& clause,
                                std::vector<FormulaPtr>& tail) const {
        const TermPtr& l = lit->lhs;
        const TermPtr& r = lit->rhs;
        bool l_free_var = l->is_var() && !bound.count(l->name);
        bool r_free_var = r->is_var() && !bound.count(r->name);

        if (l_free_var && r_free_var) {
            // both free: the same variable in the entire computation
            const std::string keep = l->name;
            const std::string drop = r->name;
            if (keep == drop) return nullptr;
            for (size_t j = idx + 1; j < rest.size(); ++j)
                rest[j] = substitute(rest[j], drop, Term::var(keep));
            bool drop_in_head = false;
            for (const auto& h : clause.head_args)
                drop_in_head |= (h->is_var() && h->name == drop);
            if (drop_in_head)
                tail.push_back(
                    Formula::comparison(CmpOp::Assign, Term::var(drop), Term::var(keep)));
            return nullptr;
        }
        if (l_free_var || r_free_var) {
            const TermPtr& target = l_free_var ? l : r;
            const TermPtr& source = l_free_var ? r : l;
            if (!vars_subset(term_vars(source), bound))
                throw TransformError("assignment to " + target->name +
                                     " has a non-ground right-hand side");
            return Formula::comparison(CmpOp::Assign, target, source);
        }
        if (!vars_subset(formula_vars(lit), bound))
            throw TransformError("equation over unbound variables");
        return Formula::comparison(CmpOp::Eq, l, r);
    }
};

} // namespace

AdornedProgram split_eq(const AdornedProgram& p) {
    AdornedProgram out;
    out.patterns = p.patterns;
    out.warnings = p.warnings;
    out.program.schemas = p.program.schemas;
    out.program.goal = p.program.goal;
    EqSplitter splitter;
    for (const auto& c : p.program.clauses)
        out.program.clauses.push_back(splitter.rewrite(c, p.head_bound(c)));
    return out;
}

Clause classify_equations(const Clause& c, const std::set<std::string>& head_bound) {
    return EqSplitter{}.rewrite(c, head_bound);
}

} // namespace privalog
