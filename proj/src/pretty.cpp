#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "privalog/frontend.hpp"

namespace privalog {

namespace {

int arith_prec(ArithOp op) {
    switch (op) {
        case ArithOp::Add:
        case ArithOp::Sub: return 1;
        case ArithOp::Mul:
        case ArithOp::Div: return 2;
        case ArithOp::Pow: return 3;
    }
    return 0;
}

std::string float_repr(double v) {
    char buf[64];
    // shortest representation that round-trips; always keep a decimal point
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double parsed = std::strtod(buf, nullptr);
    for (int prec = 1; prec < 17; ++prec) {
        char probe[64];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
        if (std::strtod(probe, nullptr) == parsed) {
            std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
            break;
        }
    }
    std::string s = buf;
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
        s += ".0";
    return s;
}

bool needs_quotes(const std::string& s) {
    if (s.empty()) return true;
    if (!std::islower(static_cast<unsigned char>(s[0]))) return true;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return true;
    // bare atoms that collide with keywords must stay quoted
    return s == "true" || s == "false" || s == "is" || s == "key" || s == "goal" ||
           s == "sqrt" || s == "min" || s == "max" || s == "sum" || s == "count";
}

void print_term(std::ostringstream& os, const TermPtr& t, int parent_prec) {
    switch (t->kind) {
        case Term::Kind::Var: os << t->name; break;
        case Term::Kind::Hole: os << "_"; break;
        case Term::Kind::IntConst: os << t->ival; break;
        case Term::Kind::FloatConst: os << float_repr(t->fval); break;
        case Term::Kind::StrConst:
            if (needs_quotes(t->sval)) {
                os << '\'';
                for (char c : t->sval) {
                    if (c == '\'' || c == '\\') os << '\\';
                    os << c;
                }
                os << '\'';
            } else {
                os << t->sval;
            }
            break;
        case Term::Kind::ClientArg: os << '@' << t->name; break;
        case Term::Kind::Sqrt:
            os << "sqrt(";
            print_term(os, t->lhs, 0);
            os << ")";
            break;
        case Term::Kind::Bin: {
            int prec = arith_prec(t->op);
            bool paren = prec < parent_prec;
            if (paren) os << "(";
            print_term(os, t->lhs, t->op == ArithOp::Pow ? prec + 1 : prec);
            os << " " << to_string(t->op) << " ";
            print_term(os, t->rhs, t->op == ArithOp::Pow ? prec : prec + 1);
            if (paren) os << ")";
            break;
        }
    }
}

void print_formula(std::ostringstream& os, const FormulaPtr& f, bool parenthesize) {
    switch (f->kind) {
        case Formula::Kind::True: os << "true"; break;
        case Formula::Kind::False: os << "false"; break;
        case Formula::Kind::Atom: {
            os << f->pred << "(";
            for (size_t i = 0; i < f->args.size(); ++i) {
                if (i) os << ", ";
                print_term(os, f->args[i], 0);
            }
            os << ")";
            break;
        }
        case Formula::Kind::Cmp:
            print_term(os, f->lhs, 0);
            os << " " << to_string(f->cmp) << " ";
            print_term(os, f->rhs, 0);
            break;
        case Formula::Kind::Not:
            os << "\\+ ";
            print_formula(os, f->sub, true);
            break;
        case Formula::Kind::And: {
            if (parenthesize) os << "(";
            for (size_t i = 0; i < f->subs.size(); ++i) {
                if (i) os << ", ";
                print_formula(os, f->subs[i], true);
            }
            if (parenthesize) os << ")";
            break;
        }
        case Formula::Kind::Or: {
            os << "(";
            for (size_t i = 0; i < f->subs.size(); ++i) {
                if (i) os << "; ";
                // conjunctions inside a disjunct need no extra parens: ',' binds tighter
                print_formula(os, f->subs[i], f->subs[i]->kind == Formula::Kind::Or);
            }
            os << ")";
            break;
        }
    }
}

} // namespace

std::string pretty_print(const TermPtr& t) {
    std::ostringstream os;
    print_term(os, t, 0);
    return os.str();
}

std::string pretty_print(const FormulaPtr& f) {
    std::ostringstream os;
    print_formula(os, f, false);
    return os.str();
}

std::string pretty_print(const Clause& c) {
    std::ostringstream os;
    os << c.head << "(";
    for (size_t i = 0; i < c.head_args.size(); ++i) {
        if (i) os << ", ";
        print_term(os, c.head_args[i], 0);
    }
    os << ")";
    if (c.body && c.body->kind != Formula::Kind::True) {
        os << " :-\n    ";
        auto lits = conjuncts(c.body);
        if (lits.empty()) {
            print_formula(os, c.body, false);
        } else {
            for (size_t i = 0; i < lits.size(); ++i) {
                if (i) os << ",\n    ";
                print_formula(os, lits[i], true);
            }
        }
    }
    os << ".";
    return os.str();
}

std::string pretty_print(const ProgramAst& p) {
    std::ostringstream os;
    for (const auto& s : p.schemas) {
        os << ":-type(" << s.pred << "(";
        for (size_t i = 0; i < s.columns.size(); ++i) {
            if (i) os << ", ";
            os << s.columns[i].name << " : " << to_string(s.columns[i].ptype) << " "
               << to_string(s.columns[i].dtype);
            if (s.primary_key && *s.primary_key == static_cast<int>(i)) os << " key";
        }
        os << ")).\n";
    }
    if (!p.schemas.empty()) os << "\n";
    for (const auto& c : p.clauses) os << pretty_print(c) << "\n";
    if (!p.clauses.empty()) os << "\n";

    os << "?-";
    auto print_target = [&] {
        os << p.goal.target << "(";
        for (size_t i = 0; i < p.goal.target_args.size(); ++i) {
            if (i) os << ", ";
            print_term(os, p.goal.target_args[i], 0);
        }
        os << ")";
    };
    if (p.goal.aggregation) {
        os << to_string(p.goal.aggregation->kind) << "(";
        print_target();
        os << ", " << p.goal.aggregation->over_var << ", " << p.goal.aggregation->result_var
           << ")";
    } else {
        print_target();
    }
    os << ".\n";
    return os.str();
}

} // namespace privalog
