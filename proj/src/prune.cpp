#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>

#include "privalog/frontend.hpp"
#include "privalog/prune.hpp"

namespace privalog {

namespace {

// ---------------------------------------------------------------------------
// exact rationals with overflow detection
// ---------------------------------------------------------------------------

struct Rat {
    int64_t num = 0;
    int64_t den = 1; // > 0
    bool valid = true;

    static Rat invalid() {
        Rat r;
        r.valid = false;
        return r;
    }
    static Rat of(int64_t n) { return Rat{n, 1, true}; }

    static Rat make(__int128 n, __int128 d) {
        if (d == 0) return invalid();
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX) return invalid();
        return Rat{static_cast<int64_t>(n), static_cast<int64_t>(d), true};
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    Rat operator+(const Rat& o) const {
        if (!valid || !o.valid) return invalid();
        return make(static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den,
                    static_cast<__int128>(den) * o.den);
    }
    Rat operator-(const Rat& o) const {
        if (!valid || !o.valid) return invalid();
        return make(static_cast<__int128>(num) * o.den - static_cast<__int128>(o.num) * den,
                    static_cast<__int128>(den) * o.den);
    }
    Rat operator*(const Rat& o) const {
        if (!valid || !o.valid) return invalid();
        return make(static_cast<__int128>(num) * o.num, static_cast<__int128>(den) * o.den);
    }
    Rat operator/(const Rat& o) const {
        if (!valid || !o.valid || o.num == 0) return invalid();
        return make(static_cast<__int128>(num) * o.den, static_cast<__int128>(den) * o.num);
    }
    Rat operator-() const { return valid ? Rat{-num, den, true} : invalid(); }

    int cmp(const Rat& o) const {
        __int128 l = static_cast<__int128>(num) * o.den;
        __int128 r = static_cast<__int128>(o.num) * den;
        return l < r ? -1 : (l > r ? 1 : 0);
    }
    bool operator<(const Rat& o) const { return cmp(o) < 0; }
    bool operator<=(const Rat& o) const { return cmp(o) <= 0; }
    bool operator==(const Rat& o) const { return cmp(o) == 0; }
    bool is_zero() const { return num == 0; }
};

std::optional<Rat> rat_from_double(double d) {
    if (!std::isfinite(d)) return std::nullopt;
    if (d == 0.0) return Rat::of(0);
    int exp = 0;
    double m = std::frexp(d, &exp); // d = m * 2^exp, |m| in [0.5, 1)
    int64_t mant = static_cast<int64_t>(std::ldexp(m, 53));
    exp -= 53;
    __int128 num = mant, den = 1;
    while (exp > 0) {
        num *= 2;
        --exp;
        if (num > INT64_MAX || num < INT64_MIN) return std::nullopt;
    }
    while (exp < 0) {
        den *= 2;
        ++exp;
        if (den > INT64_MAX) return std::nullopt;
    }
    Rat r = Rat::make(num, den);
    if (!r.valid) return std::nullopt;
    return r;
}

// ---------------------------------------------------------------------------
// linear expressions over variables and opaque subterms
// ---------------------------------------------------------------------------

struct LinExpr {
    std::map<std::string, Rat> coeffs;
    Rat constant = Rat::of(0);
    bool valid = true;
    bool divides_by_zero = false; // a literal constant zero denominator

    static LinExpr invalid() {
        LinExpr e;
        e.valid = false;
        return e;
    }
};

LinExpr lin_add(const LinExpr& a, const LinExpr& b, int sign) {
    if (!a.valid || !b.valid) return LinExpr::invalid();
    LinExpr out = a;
    out.divides_by_zero = a.divides_by_zero || b.divides_by_zero;
    Rat s = Rat::of(sign);
    for (const auto& [v, c] : b.coeffs) {
        Rat merged = (out.coeffs.count(v) ? out.coeffs[v] : Rat::of(0)) + c * s;
        if (!merged.valid) return LinExpr::invalid();
        if (merged.is_zero())
            out.coeffs.erase(v);
        else
            out.coeffs[v] = merged;
    }
    out.constant = out.constant + b.constant * s;
    if (!out.constant.valid) return LinExpr::invalid();
    return out;
}

LinExpr lin_scale(const LinExpr& a, const Rat& k) {
    if (!a.valid || !k.valid) return LinExpr::invalid();
    LinExpr out;
    out.divides_by_zero = a.divides_by_zero;
    for (const auto& [v, c] : a.coeffs) {
        Rat scaled = c * k;
        if (!scaled.valid) return LinExpr::invalid();
        if (!scaled.is_zero()) out.coeffs[v] = scaled;
    }
    out.constant = a.constant * k;
    if (!out.constant.valid) return LinExpr::invalid();
    return out;
}

struct Linearizer {
    std::map<std::string, int64_t> string_codes;
    bool saw_opaque = false;

    // distinct strings get distinct codes far outside small-integer ranges
    Rat string_code(const std::string& s) {
        auto it = string_codes.find(s);
        if (it == string_codes.end())
            it = string_codes.emplace(s, 1000000007 + int64_t(string_codes.size())).first;
        return Rat::of(it->second);
    }

    LinExpr opaque(const TermPtr& t) {
        saw_opaque = true;
        LinExpr e;
        e.coeffs.emplace("!" + pretty_print(t), Rat::of(1));
        return e;
    }

    LinExpr run(const TermPtr& t) {
        switch (t->kind) {
            case Term::Kind::Var: {
                LinExpr e;
                e.coeffs.emplace(t->name, Rat::of(1));
                return e;
            }
            case Term::Kind::IntConst: {
                LinExpr e;
                e.constant = Rat::of(t->ival);
                return e;
            }
            case Term::Kind::FloatConst: {
                auto r = rat_from_double(t->fval);
                if (!r) return opaque(t);
                LinExpr e;
                e.constant = *r;
                return e;
            }
            case Term::Kind::StrConst: {
                LinExpr e;
                e.constant = string_code(t->sval);
                return e;
            }
            case Term::Kind::Bin: {
                switch (t->op) {
                    case ArithOp::Add: return lin_add(run(t->lhs), run(t->rhs), +1);
                    case ArithOp::Sub: return lin_add(run(t->lhs), run(t->rhs), -1);
                    case ArithOp::Mul: {
                        LinExpr l = run(t->lhs), r = run(t->rhs);
                        if (l.valid && l.coeffs.empty()) return lin_scale(r, l.constant);
                        if (r.valid && r.coeffs.empty()) return lin_scale(l, r.constant);
                        return opaque(t);
                    }
                    case ArithOp::Div: {
                        LinExpr r = run(t->rhs);
                        if (r.valid && r.coeffs.empty()) {
                            if (r.constant.is_zero()) {
                                LinExpr e;
                                e.divides_by_zero = true;
                                return e;
                            }
                            return lin_scale(run(t->lhs), Rat::of(1) / r.constant);
                        }
                        return opaque(t);
                    }
                    case ArithOp::Pow: return opaque(t);
                }
                return opaque(t);
            }
            default: return opaque(t); // sqrt, holes
        }
    }
};

// ---------------------------------------------------------------------------
// interval propagation
// ---------------------------------------------------------------------------

struct Bound {
    std::optional<Rat> value;
    bool open = false;
};

struct Interval {
    Bound lo, hi;

    bool empty() const {
        if (!lo.value || !hi.value) return false;
        int c = lo.value->cmp(*hi.value);
        if (c > 0) return true;
        return c == 0 && (lo.open || hi.open);
    }
};

enum class Rel { LeZero, LtZero, EqZero };

struct Constraint {
    LinExpr expr;
    Rel rel;
};

struct Checker {
    std::vector<Constraint> constraints;
    std::map<std::string, Interval> intervals;
    bool has_opaque = false;
    bool has_ignored = false;
    bool has_edb = false;
    bool proven_unsat = false;

    void add(const LinExpr& e, Rel rel) {
        if (!e.valid) {
            has_ignored = true;
            return;
        }
        if (e.divides_by_zero) {
            // a comparison over a constant zero-division is garbage: always false
            proven_unsat = true;
            return;
        }
        if (e.coeffs.empty()) {
            int c = e.constant.cmp(Rat::of(0));
            bool ok = rel == Rel::LeZero ? c <= 0 : (rel == Rel::LtZero ? c < 0 : c == 0);
            if (!ok) proven_unsat = true;
            return;
        }
        constraints.push_back({e, rel});
        for (const auto& [v, c] : e.coeffs) intervals[v];
    }

    // tightens x's interval from constraint expr rel 0; returns true on change
    bool tighten(const Constraint& con, const std::string& var) {
        const Rat& c = con.expr.coeffs.at(var);
        // rest bounds
        Rat acc_lo = con.expr.constant, acc_hi = con.expr.constant;
        bool lo_ok = true, hi_ok = true, lo_open = false, hi_open = false;
        for (const auto& [v, k] : con.expr.coeffs) {
            if (v == var) continue;
            const Interval& iv = intervals.at(v);
            const Bound& contrib_lo = k.num > 0 ? iv.lo : iv.hi;
            const Bound& contrib_hi = k.num > 0 ? iv.hi : iv.lo;
            if (lo_ok) {
                if (!contrib_lo.value) {
                    lo_ok = false;
                } else {
                    acc_lo = acc_lo + k * *contrib_lo.value;
                    lo_open |= contrib_lo.open;
                    lo_ok &= acc_lo.valid;
                }
            }
            if (hi_ok) {
                if (!contrib_hi.value) {
                    hi_ok = false;
                } else {
                    acc_hi = acc_hi + k * *contrib_hi.value;
                    hi_open |= contrib_hi.open;
                    hi_ok &= acc_hi.valid;
                }
            }
        }

        bool changed = false;
        Interval& target = intervals.at(var);
        // c*x + rest REL 0, i.e. x <= (-rest)/c for c > 0 (flip for c < 0);
        // both directions use rest's LOWER bound; the equality also bounds
        // the other side from rest's UPPER bound
        bool strict = con.rel == Rel::LtZero;
        if (lo_ok) {
            Rat nb = (-acc_lo) / c;
            if (nb.valid) {
                if (c.num > 0)
                    changed |= apply_hi(target, nb, strict || lo_open);
                else
                    changed |= apply_lo(target, nb, strict || lo_open);
            }
        }
        if (con.rel == Rel::EqZero && hi_ok) {
            Rat nb = (-acc_hi) / c;
            if (nb.valid) {
                if (c.num > 0)
                    changed |= apply_lo(target, nb, hi_open);
                else
                    changed |= apply_hi(target, nb, hi_open);
            }
        }
        return changed;
    }

    static bool apply_lo(Interval& iv, const Rat& v, bool open) {
        if (!iv.lo.value || *iv.lo.value < v || (*iv.lo.value == v && open && !iv.lo.open)) {
            iv.lo = {v, open};
            return true;
        }
        return false;
    }
    static bool apply_hi(Interval& iv, const Rat& v, bool open) {
        if (!iv.hi.value || v < *iv.hi.value || (*iv.hi.value == v && open && !iv.hi.open)) {
            iv.hi = {v, open};
            return true;
        }
        return false;
    }

    Sat solve() {
        if (proven_unsat) return Sat::Unsat;
        for (int pass = 0; pass < 64; ++pass) {
            bool changed = false;
            for (const auto& con : constraints)
                for (const auto& [v, c] : con.expr.coeffs) changed |= tighten(con, v);
            for (const auto& [v, iv] : intervals)
                if (iv.empty()) return Sat::Unsat;
            if (!changed) break;
        }
        if (has_opaque || has_ignored || has_edb) return Sat::Unknown;

        // exhibit a model from the final intervals and verify it exactly
        std::map<std::string, Rat> model;
        for (const auto& [v, iv] : intervals) {
            Rat pick = Rat::of(0);
            if (iv.lo.value && iv.hi.value) {
                pick = (*iv.lo.value + *iv.hi.value) * Rat{1, 2, true};
                if (*iv.lo.value == *iv.hi.value) pick = *iv.lo.value;
            } else if (iv.lo.value) {
                pick = iv.lo.open ? *iv.lo.value + Rat::of(1) : *iv.lo.value;
            } else if (iv.hi.value) {
                pick = iv.hi.open ? *iv.hi.value - Rat::of(1) : *iv.hi.value;
            }
            if (!pick.valid) return Sat::Unknown;
            model.emplace(v, pick);
        }
        for (const auto& con : constraints) {
            Rat total = con.expr.constant;
            for (const auto& [v, c] : con.expr.coeffs) {
                total = total + c * model.at(v);
                if (!total.valid) return Sat::Unknown;
            }
            int c = total.cmp(Rat::of(0));
            bool ok = con.rel == Rel::LeZero ? c <= 0
                                             : (con.rel == Rel::LtZero ? c < 0 : c == 0);
            if (!ok) return Sat::Unknown;
        }
        return Sat::Satisfiable;
    }
};

} // namespace

Sat check_consistent(const std::vector<FormulaPtr>& body_literals) {
    Linearizer lz;
    Checker ck;
    for (const auto& lit : body_literals) {
        switch (lit->kind) {
            case Formula::Kind::Atom: ck.has_edb = true; break;
            case Formula::Kind::True: break;
            case Formula::Kind::False: ck.proven_unsat = true; break;
            case Formula::Kind::Cmp: {
                LinExpr diff = lin_add(lz.run(lit->lhs), lz.run(lit->rhs), -1);
                switch (lit->cmp) {
                    case CmpOp::Lt: ck.add(diff, Rel::LtZero); break;
                    case CmpOp::Le: ck.add(diff, Rel::LeZero); break;
                    case CmpOp::Gt: ck.add(lin_scale(diff, Rat::of(-1)), Rel::LtZero); break;
                    case CmpOp::Ge: ck.add(lin_scale(diff, Rat::of(-1)), Rel::LeZero); break;
                    case CmpOp::Eq:
                    case CmpOp::Assign:
                    case CmpOp::Unify:
                    case CmpOp::Is: ck.add(diff, Rel::EqZero); break;
                    case CmpOp::Ne: ck.has_ignored = true; break;
                }
                break;
            }
            default: ck.has_ignored = true; break; // negations, disjunctions
        }
    }
    ck.has_opaque = lz.saw_opaque;
    return ck.solve();
}

Sat check_consistent(const Clause& rule) { return check_consistent(conjuncts(rule.body)); }

RuleBase prune_rulebase(RuleBase rb) {
    for (auto& [pred, rules] : rb.rules) {
        std::vector<Clause> kept;
        for (auto& r : rules) {
            if (check_consistent(r) == Sat::Unsat)
                rb.pruned.push_back(std::move(r));
            else
                kept.push_back(std::move(r));
        }
        rules = std::move(kept);
    }
    return rb;
}

// ---------------------------------------------------------------------------
// primary key merging
// ---------------------------------------------------------------------------

namespace {

const SchemaDecl* schema_of(const std::vector<SchemaDecl>& schemas, const std::string& pred) {
    for (const auto& s : schemas)
        if (s.pred == pred) return &s;
    return nullptr;
}

} // namespace

Clause merge_primary_keys(const Clause& rule, const std::vector<SchemaDecl>& schemas,
                          const std::set<std::string>& head_bound) {
    std::vector<FormulaPtr> lits = conjuncts(rule.body);
    bool any = true;
    while (any) {
        any = false;
        for (size_t i = 0; i < lits.size() && !any; ++i) {
            if (lits[i]->kind != Formula::Kind::Atom) continue;
            const SchemaDecl* s = schema_of(schemas, lits[i]->pred);
            if (!s || !s->primary_key) continue;
            size_t key = static_cast<size_t>(*s->primary_key);
            for (size_t j = i + 1; j < lits.size() && !any; ++j) {
                if (lits[j]->kind != Formula::Kind::Atom || lits[j]->pred != lits[i]->pred)
                    continue;
                if (!term_equal(lits[i]->args[key], lits[j]->args[key])) continue;
                // replace the second occurrence with pairwise equalities
                std::vector<FormulaPtr> eqs;
                for (size_t col = 0; col < lits[j]->args.size(); ++col) {
                    if (col == key) continue;
                    eqs.push_back(Formula::comparison(CmpOp::Unify, lits[j]->args[col],
                                                      lits[i]->args[col]));
                }
                lits.erase(lits.begin() + static_cast<long>(j));
                lits.insert(lits.begin() + static_cast<long>(j), eqs.begin(), eqs.end());
                any = true;
            }
        }
    }
    Clause out;
    out.head = rule.head;
    out.head_args = rule.head_args;
    out.body = lits.empty() ? Formula::truth() : Formula::conj(std::move(lits));
    return classify_equations(out, head_bound);
}

std::string to_smtlib(const Clause& rule) {
    std::ostringstream os;
    os << "; consistency constraints for " << rule.head << "\n";
    os << "(set-logic QF_NRA)\n";
    std::set<std::string> vars;
    for (const auto& lit : conjuncts(rule.body))
        if (lit->kind == Formula::Kind::Cmp) collect_vars(lit, vars);
    for (const auto& v : vars) os << "(declare-const " << v << " Real)\n";

    std::function<void(const TermPtr&)> term = [&](const TermPtr& t) {
        switch (t->kind) {
            case Term::Kind::Var: os << t->name; break;
            case Term::Kind::IntConst: os << t->ival; break;
            case Term::Kind::FloatConst: os << t->fval; break;
            case Term::Kind::StrConst: os << int64_t(1000000007) << " ; string"; break;
            case Term::Kind::Bin:
                os << "(" << to_string(t->op) << " ";
                term(t->lhs);
                os << " ";
                term(t->rhs);
                os << ")";
                break;
            case Term::Kind::Sqrt:
                os << "(^ ";
                term(t->lhs);
                os << " 0.5)";
                break;
            default: os << "0"; break;
        }
    };
    for (const auto& lit : conjuncts(rule.body)) {
        if (lit->kind != Formula::Kind::Cmp) continue;
        const char* op = nullptr;
        switch (lit->cmp) {
            case CmpOp::Lt: op = "<"; break;
            case CmpOp::Le: op = "<="; break;
            case CmpOp::Gt: op = ">"; break;
            case CmpOp::Ge: op = ">="; break;
            case CmpOp::Ne: op = "distinct"; break;
            default: op = "="; break;
        }
        os << "(assert (" << op << " ";
        term(lit->lhs);
        os << " ";
        term(lit->rhs);
        os << "))\n";
    }
    os << "(check-sat)\n";
    return os.str();
}

} // namespace privalog
