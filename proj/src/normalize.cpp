#include <algorithm>

#include "privalog/transform.hpp"

namespace privalog {

namespace {

// Negation normal form: De Morgan + double negation elimination. Negations
// end up directly on atoms, comparisons or predicate-free leaves; comparison
// operators are not flipped (complement semantics differ on garbage values).
FormulaPtr to_nnf(const FormulaPtr& f, bool negated) {
    switch (f->kind) {
        case Formula::Kind::True: return negated ? Formula::falsity() : f;
        case Formula::Kind::False: return negated ? Formula::truth() : f;
        case Formula::Kind::Atom:
        case Formula::Kind::Cmp: return negated ? Formula::negate(f) : f;
        case Formula::Kind::Not: return to_nnf(f->sub, !negated);
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::vector<FormulaPtr> subs;
            subs.reserve(f->subs.size());
            for (const auto& s : f->subs) subs.push_back(to_nnf(s, negated));
            bool conj = (f->kind == Formula::Kind::And) != negated;
            return conj ? Formula::conj(std::move(subs)) : Formula::disj(std::move(subs));
        }
    }
    return f;
}

using Branch = std::vector<FormulaPtr>;

bool contains_atom(const FormulaPtr& f) {
    switch (f->kind) {
        case Formula::Kind::Atom: return true;
        case Formula::Kind::Not: return contains_atom(f->sub);
        case Formula::Kind::And:
        case Formula::Kind::Or:
            for (const auto& s : f->subs)
                if (contains_atom(s)) return true;
            return false;
        default: return false;
    }
}

// A disjunction may stay a single literal only when it is evaluable as an
// expression: predicate-free with every variable already bound.
bool is_ground(const FormulaPtr& f, const std::set<std::string>& bound) {
    if (contains_atom(f)) return false;
    for (const auto& v : formula_vars(f))
        if (!bound.count(v)) return false;
    return true;
}

// Branches of an NNF formula. Distributivity applies only where a disjunction
// contains a free variable; ground disjunctions stay single literals. Literal
// order within each branch follows the source order.
std::vector<Branch> dnf(const FormulaPtr& f, const std::set<std::string>& bound) {
    switch (f->kind) {
        case Formula::Kind::True: return {Branch{}};
        case Formula::Kind::False: return {};
        case Formula::Kind::Atom:
        case Formula::Kind::Cmp:
        case Formula::Kind::Not: return {Branch{f}};
        case Formula::Kind::And: {
            std::vector<Branch> acc{Branch{}};
            for (const auto& s : f->subs) {
                std::vector<Branch> next;
                for (const auto& prefix : acc) {
                    std::set<std::string> b = bound;
                    for (const auto& lit : prefix) collect_vars(lit, b);
                    for (const auto& suffix : dnf(s, b)) {
                        Branch merged = prefix;
                        merged.insert(merged.end(), suffix.begin(), suffix.end());
                        next.push_back(std::move(merged));
                    }
                }
                acc = std::move(next);
            }
            return acc;
        }
        case Formula::Kind::Or: {
            if (is_ground(f, bound)) return {Branch{f}};
            std::vector<Branch> acc;
            for (const auto& s : f->subs)
                for (auto& br : dnf(s, bound)) acc.push_back(std::move(br));
            return acc;
        }
    }
    return {};
}

} // namespace

std::vector<std::vector<FormulaPtr>> dnf_branches(const FormulaPtr& body,
                                                  const std::set<std::string>& bound) {
    return dnf(to_nnf(body, false), bound);
}

AdornedProgram to_ordered_dnf(const AdornedProgram& p) {
    AdornedProgram out;
    out.patterns = p.patterns;
    out.warnings = p.warnings;
    out.program.schemas = p.program.schemas;
    out.program.goal = p.program.goal;
    for (const auto& c : p.program.clauses) {
        auto branches = dnf_branches(c.body, p.head_bound(c));
        for (auto& br : branches) {
            Clause nc;
            nc.head = c.head;
            nc.head_args = c.head_args;
            nc.body = br.empty() ? Formula::truth() : Formula::conj(std::move(br));
            out.program.clauses.push_back(std::move(nc));
        }
    }
    return out;
}

} // namespace privalog
