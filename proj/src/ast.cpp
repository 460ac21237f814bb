#include "privalog/ast.hpp"

namespace privalog {

const char* to_string(ArithOp op) {
    switch (op) {
        case ArithOp::Add: return "+";
        case ArithOp::Sub: return "-";
        case ArithOp::Mul: return "*";
        case ArithOp::Div: return "/";
        case ArithOp::Pow: return "^";
    }
    return "?";
}

const char* to_string(CmpOp op) {
    switch (op) {
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "=<";
        case CmpOp::Eq: return "=:=";
        case CmpOp::Ne: return "=/=";
        case CmpOp::Ge: return ">=";
        case CmpOp::Gt: return ">";
        case CmpOp::Unify: return "=";
        case CmpOp::Is: return "is";
        case CmpOp::Assign: return "=";
    }
    return "?";
}

const char* to_string(PrivacyType p) {
    return p == PrivacyType::Public ? "public" : "private";
}

const char* to_string(DataType t) {
    switch (t) {
        case DataType::Int: return "int";
        case DataType::Float: return "float";
        case DataType::String: return "string";
    }
    return "?";
}

const char* to_string(AggKind k) {
    switch (k) {
        case AggKind::Min: return "min";
        case AggKind::Max: return "max";
        case AggKind::Sum: return "sum";
        case AggKind::Count: return "count";
    }
    return "?";
}

TermPtr Term::var(std::string n) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Var;
    t->name = std::move(n);
    return t;
}

TermPtr Term::hole() {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Hole;
    return t;
}

TermPtr Term::int_const(int64_t v) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::IntConst;
    t->ival = v;
    return t;
}

TermPtr Term::float_const(double v) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::FloatConst;
    t->fval = v;
    return t;
}

TermPtr Term::str_const(std::string v) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::StrConst;
    t->sval = std::move(v);
    return t;
}

TermPtr Term::client_arg(std::string n) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::ClientArg;
    t->name = std::move(n);
    return t;
}

TermPtr Term::bin(ArithOp o, TermPtr l, TermPtr r) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Bin;
    t->op = o;
    t->lhs = std::move(l);
    t->rhs = std::move(r);
    return t;
}

TermPtr Term::sqrt(TermPtr x) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Sqrt;
    t->lhs = std::move(x);
    return t;
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Term::Kind::Var:
        case Term::Kind::ClientArg: return a->name == b->name;
        case Term::Kind::Hole: return false; // each hole is distinct
        case Term::Kind::IntConst: return a->ival == b->ival;
        case Term::Kind::FloatConst: return a->fval == b->fval;
        case Term::Kind::StrConst: return a->sval == b->sval;
        case Term::Kind::Bin:
            return a->op == b->op && term_equal(a->lhs, b->lhs) && term_equal(a->rhs, b->rhs);
        case Term::Kind::Sqrt: return term_equal(a->lhs, b->lhs);
    }
    return false;
}

void collect_vars(const TermPtr& t, std::set<std::string>& out) {
    if (!t) return;
    switch (t->kind) {
        case Term::Kind::Var: out.insert(t->name); break;
        case Term::Kind::Bin:
            collect_vars(t->lhs, out);
            collect_vars(t->rhs, out);
            break;
        case Term::Kind::Sqrt: collect_vars(t->lhs, out); break;
        default: break;
    }
}

std::set<std::string> term_vars(const TermPtr& t) {
    std::set<std::string> s;
    collect_vars(t, s);
    return s;
}

TermPtr substitute(const TermPtr& t, const std::string& var, const TermPtr& replacement) {
    if (!t) return t;
    switch (t->kind) {
        case Term::Kind::Var: return t->name == var ? replacement : t;
        case Term::Kind::Bin: {
            TermPtr l = substitute(t->lhs, var, replacement);
            TermPtr r = substitute(t->rhs, var, replacement);
            if (l == t->lhs && r == t->rhs) return t;
            return Term::bin(t->op, l, r);
        }
        case Term::Kind::Sqrt: {
            TermPtr l = substitute(t->lhs, var, replacement);
            return l == t->lhs ? t : Term::sqrt(l);
        }
        default: return t;
    }
}

FormulaPtr Formula::truth() {
    auto f = std::make_shared<Formula>();
    f->kind = Kind::True;
    return f;
}

FormulaPtr Formula::falsity() {
    auto f = std::make_shared<Formula>();
    f->kind = Kind::False;
    return f;
}

FormulaPtr Formula::atom(std::string p, std::vector<TermPtr> a) {
    auto f = std::make_shared<Formula>();
    f->kind = Kind::Atom;
    f->pred = std::move(p);
    f->args = std::move(a);
    return f;
}

FormulaPtr Formula::comparison(CmpOp op, TermPtr l, TermPtr r) {
    auto f = std::make_shared<Formula>();
    f->kind = Kind::Cmp;
    f->cmp = op;
    f->lhs = std::move(l);
    f->rhs = std::move(r);
    return f;
}

FormulaPtr Formula::negate(FormulaPtr x) {
    auto f = std::make_shared<Formula>();
    f->kind = Kind::Not;
    f->sub = std::move(x);
    return f;
}

FormulaPtr Formula::conj(std::vector<FormulaPtr> fs) {
    if (fs.empty()) return truth();
    if (fs.size() == 1) return fs[0];
    auto f = std::make_shared<Formula>();
    f->kind = Kind::And;
    f->subs = std::move(fs);
    return f;
}

FormulaPtr Formula::disj(std::vector<FormulaPtr> fs) {
    if (fs.size() == 1) return fs[0];
    auto f = std::make_shared<Formula>();
    f->kind = Kind::Or;
    f->subs = std::move(fs);
    return f;
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Formula::Kind::True:
        case Formula::Kind::False: return true;
        case Formula::Kind::Atom: {
            if (a->pred != b->pred || a->args.size() != b->args.size()) return false;
            for (size_t i = 0; i < a->args.size(); ++i)
                if (!term_equal(a->args[i], b->args[i])) return false;
            return true;
        }
        case Formula::Kind::Cmp:
            return a->cmp == b->cmp && term_equal(a->lhs, b->lhs) && term_equal(a->rhs, b->rhs);
        case Formula::Kind::Not: return formula_equal(a->sub, b->sub);
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            if (a->subs.size() != b->subs.size()) return false;
            for (size_t i = 0; i < a->subs.size(); ++i)
                if (!formula_equal(a->subs[i], b->subs[i])) return false;
            return true;
        }
    }
    return false;
}

void collect_vars(const FormulaPtr& f, std::set<std::string>& out) {
    if (!f) return;
    switch (f->kind) {
        case Formula::Kind::Atom:
            for (const auto& t : f->args) collect_vars(t, out);
            break;
        case Formula::Kind::Cmp:
            collect_vars(f->lhs, out);
            collect_vars(f->rhs, out);
            break;
        case Formula::Kind::Not: collect_vars(f->sub, out); break;
        case Formula::Kind::And:
        case Formula::Kind::Or:
            for (const auto& s : f->subs) collect_vars(s, out);
            break;
        default: break;
    }
}

std::set<std::string> formula_vars(const FormulaPtr& f) {
    std::set<std::string> s;
    collect_vars(f, s);
    return s;
}

FormulaPtr substitute(const FormulaPtr& f, const std::string& var, const TermPtr& replacement) {
    if (!f) return f;
    switch (f->kind) {
        case Formula::Kind::Atom: {
            std::vector<TermPtr> args;
            args.reserve(f->args.size());
            bool changed = false;
            for (const auto& t : f->args) {
                TermPtr t2 = substitute(t, var, replacement);
                changed |= (t2 != t);
                args.push_back(t2);
            }
            return changed ? Formula::atom(f->pred, std::move(args)) : f;
        }
        case Formula::Kind::Cmp: {
            TermPtr l = substitute(f->lhs, var, replacement);
            TermPtr r = substitute(f->rhs, var, replacement);
            if (l == f->lhs && r == f->rhs) return f;
            return Formula::comparison(f->cmp, l, r);
        }
        case Formula::Kind::Not: {
            FormulaPtr s = substitute(f->sub, var, replacement);
            return s == f->sub ? f : Formula::negate(s);
        }
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::vector<FormulaPtr> subs;
            subs.reserve(f->subs.size());
            bool changed = false;
            for (const auto& s : f->subs) {
                FormulaPtr s2 = substitute(s, var, replacement);
                changed |= (s2 != s);
                subs.push_back(s2);
            }
            if (!changed) return f;
            return f->kind == Formula::Kind::And ? Formula::conj(std::move(subs))
                                                 : Formula::disj(std::move(subs));
        }
        default: return f;
    }
}

std::vector<FormulaPtr> conjuncts(const FormulaPtr& f) {
    std::vector<FormulaPtr> out;
    if (!f) return out;
    if (f->kind == Formula::Kind::And) {
        for (const auto& s : f->subs) {
            auto inner = conjuncts(s);
            out.insert(out.end(), inner.begin(), inner.end());
        }
    } else if (f->kind != Formula::Kind::True) {
        out.push_back(f);
    }
    return out;
}

const SchemaDecl* ProgramAst::find_schema(const std::string& pred) const {
    for (const auto& s : schemas)
        if (s.pred == pred) return &s;
    return nullptr;
}

bool ProgramAst::has_rules(const std::string& pred) const {
    for (const auto& c : clauses)
        if (c.head == pred) return true;
    return false;
}

} // namespace privalog
