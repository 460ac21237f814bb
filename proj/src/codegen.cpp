#include <map>
#include <optional>
#include <set>

#include "privalog/codegen.hpp"
#include "privalog/frontend.hpp"

namespace privalog {

namespace {

using ir::ArgKind;
using ir::BinOp;
using ir::Decl;
using ir::Dom;
using ir::Expr;
using ir::ExprPtr;
using ir::FoldKind;
using ir::RelOp;
using ir::Stmt;
using ir::Type;

struct VarInfo {
    Type type = Type::Int;
    Dom dom = Dom::Public;
    bool is_string = false;
    bool known = false;
};

Type column_ir_type(const SchemaColumn& c) {
    return c.dtype == DataType::Float ? Type::Float : Type::Int;
}

Dom column_dom(const SchemaColumn& c) {
    return c.ptype == PrivacyType::Private ? Dom::Private : Dom::Public;
}

RelOp rel_of(CmpOp op) {
    switch (op) {
        case CmpOp::Lt: return RelOp::Lt;
        case CmpOp::Le: return RelOp::Le;
        case CmpOp::Eq: return RelOp::Eq;
        case CmpOp::Ne: return RelOp::Ne;
        case CmpOp::Ge: return RelOp::Ge;
        case CmpOp::Gt: return RelOp::Gt;
        default: throw CompileError("unresolved =/is reached the code generator");
    }
}

BinOp bin_of(ArithOp op) {
    switch (op) {
        case ArithOp::Add: return BinOp::Add;
        case ArithOp::Sub: return BinOp::Sub;
        case ArithOp::Mul: return BinOp::Mul;
        case ArithOp::Div: return BinOp::Div;
        case ArithOp::Pow: return BinOp::Pow;
    }
    throw CompileError("bad arithmetic operator");
}

// Typed expression under construction.
struct TExpr {
    ExprPtr e;
    Type type;
    Dom dom;
    bool is_string = false;
};

struct RuleCompiler {
    const RuleBase& rb;
    const Clause& rule;
    std::map<std::string, VarInfo>& types; // var types for this rule (pre-computed)
    std::vector<Stmt> body;
    std::map<std::string, bool> bound; // IR-declared rule variables

    // literal atom index -> join group name, filled in order of positive atoms
    std::map<size_t, std::string> atom_group;

    const SchemaDecl& schema(const std::string& pred) const {
        for (const auto& s : rb.schemas)
            if (s.pred == pred) return s;
        throw CompileError("unknown table " + pred + " referenced by " + rule.head);
    }

    TExpr promote_float(TExpr t) {
        if (t.type == Type::Int) {
            t.e = Expr::to_float(t.e);
            t.type = Type::Float;
        }
        return t;
    }

    void unify_numeric(TExpr& a, TExpr& b) {
        if (a.is_string != b.is_string)
            throw CompileError("string compared with number in " + rule.head);
        if (a.type == b.type) return;
        a = promote_float(a);
        b = promote_float(b);
    }

    TExpr build_term(const TermPtr& t) {
        switch (t->kind) {
            case Term::Kind::Var: {
                const VarInfo& vi = types.at(t->name);
                return {Expr::var(t->name), vi.type, vi.dom, vi.is_string};
            }
            case Term::Kind::IntConst:
                return {Expr::const_int(t->ival), Type::Int, Dom::Public, false};
            case Term::Kind::FloatConst:
                return {Expr::const_float(t->fval), Type::Float, Dom::Public, false};
            case Term::Kind::StrConst:
                return {Expr::const_str(t->sval), Type::Int, Dom::Public, true};
            case Term::Kind::Bin: {
                TExpr l = build_term(t->lhs);
                TExpr r = build_term(t->rhs);
                if (l.is_string || r.is_string)
                    throw CompileError("arithmetic on string in " + rule.head);
                if (t->op == ArithOp::Div || t->op == ArithOp::Pow) {
                    l = promote_float(l);
                    r = promote_float(r);
                } else {
                    unify_numeric(l, r);
                }
                Type rt = (t->op == ArithOp::Div || t->op == ArithOp::Pow) ? Type::Float : l.type;
                return {Expr::bin_op(bin_of(t->op), l.e, r.e), rt, ir::join_dom(l.dom, r.dom),
                        false};
            }
            case Term::Kind::Sqrt: {
                TExpr a = promote_float(build_term(t->lhs));
                if (a.is_string) throw CompileError("sqrt of string");
                return {Expr::sqrt(a.e), Type::Float, a.dom, false};
            }
            default: throw CompileError("unexpected term in rule body of " + rule.head);
        }
    }

    TExpr build_cmp(CmpOp op, const TermPtr& lt, const TermPtr& rt) {
        TExpr l = build_term(lt);
        TExpr r = build_term(rt);
        if (l.is_string || r.is_string) {
            if (op != CmpOp::Eq && op != CmpOp::Ne)
                throw CompileError("ordering comparison on strings in " + rule.head);
            if (l.is_string != r.is_string)
                throw CompileError("string compared with number in " + rule.head);
        } else {
            unify_numeric(l, r);
        }
        return {Expr::cmp(rel_of(op), l.e, r.e), Type::Bool, ir::join_dom(l.dom, r.dom), false};
    }

    // predicate-free ground formula as a boolean expression
    TExpr build_bool(const FormulaPtr& f) {
        switch (f->kind) {
            case Formula::Kind::True:
                return {Expr::const_bool(true), Type::Bool, Dom::Public, false};
            case Formula::Kind::False:
                return {Expr::const_bool(false), Type::Bool, Dom::Public, false};
            case Formula::Kind::Cmp: {
                CmpOp op = f->cmp;
                if (op == CmpOp::Assign || op == CmpOp::Unify || op == CmpOp::Is) op = CmpOp::Eq;
                return build_cmp(op, f->lhs, f->rhs);
            }
            case Formula::Kind::Not: {
                TExpr a = build_bool(f->sub);
                return {Expr::negate(a.e), Type::Bool, a.dom, false};
            }
            case Formula::Kind::And:
            case Formula::Kind::Or: {
                TExpr acc = build_bool(f->subs[0]);
                BinOp op = f->kind == Formula::Kind::And ? BinOp::And : BinOp::Or;
                for (size_t i = 1; i < f->subs.size(); ++i) {
                    TExpr next = build_bool(f->subs[i]);
                    acc = {Expr::bin_op(op, acc.e, next.e), Type::Bool,
                           ir::join_dom(acc.dom, next.dom), false};
                }
                return acc;
            }
            default:
                throw CompileError("predicate inside expression formula in " + rule.head);
        }
    }

    void declare(const std::string& name, Dom dom, Type type) {
        body.push_back(Stmt::make_decl({name, dom, type}));
        bound[name] = true;
    }

    void compile(ir::Function& fn, const Goal& goal, const std::vector<Type>& input_types,
                 const std::vector<Type>& output_types) {
        // parameters: head variables at goal input positions
        for (size_t i = 0; i < goal.inputs.size(); ++i) {
            const auto& in = goal.inputs[static_cast<size_t>(i)];
            const TermPtr& hv = rule.head_args[in.pos];
            VarInfo& vi = types.at(hv->name);
            vi.type = input_types[i]; // unified across rules
            fn.params.push_back({hv->name, vi.dom, vi.type});
            bound[hv->name] = true;
        }

        std::vector<FormulaPtr> lits = conjuncts(rule.body);

        // join of all positively referenced tables, in literal order
        std::vector<std::string> groups, tables;
        for (size_t k = 0; k < lits.size(); ++k) {
            if (lits[k]->kind != Formula::Kind::Atom) continue;
            std::string g = "$R" + std::to_string(groups.size() + 1);
            atom_group[k] = g;
            groups.push_back(g);
            tables.push_back(lits[k]->pred);
        }
        if (!groups.empty()) body.push_back(Stmt::join(groups, tables));

        std::vector<TExpr> bits;
        for (size_t k = 0; k < lits.size(); ++k) {
            const FormulaPtr& lit = lits[k];
            switch (lit->kind) {
                case Formula::Kind::Atom: emit_atom(k, lit, bits); break;
                case Formula::Kind::Not:
                    if (lit->sub->kind == Formula::Kind::Atom)
                        emit_negated_atom(k, lit->sub, bits);
                    else
                        emit_bit(k, build_bool(lit), bits);
                    break;
                case Formula::Kind::Cmp: {
                    if (lit->cmp == CmpOp::Assign) {
                        emit_assign(lit);
                        break;
                    }
                    emit_bit(k, build_bool(lit), bits);
                    break;
                }
                case Formula::Kind::Or: emit_bit(k, build_bool(lit), bits); break;
                case Formula::Kind::True: break;
                case Formula::Kind::False:
                    emit_bit(k, {Expr::const_bool(false), Type::Bool, Dom::Public, false}, bits);
                    break;
                default: throw CompileError("unexpected literal in inlined rule " + rule.head);
            }
        }

        // b = b1 & ... & bm
        TExpr b;
        if (bits.empty()) {
            b = {Expr::const_bool(true), Type::Bool, Dom::Public, false};
        } else {
            b = bits[0];
            for (size_t i = 1; i < bits.size(); ++i)
                b = {Expr::bin_op(BinOp::And, b.e, bits[i].e), Type::Bool,
                     ir::join_dom(b.dom, bits[i].dom), false};
        }
        declare("$b", b.dom, Type::Bool);
        body.push_back(Stmt::assign("$b", b.e));
        fn.returns.push_back({"$b", b.dom, Type::Bool});

        // outputs: head variables at goal output positions, promoted to the
        // unified column types
        for (size_t i = 0; i < goal.outputs.size(); ++i) {
            const auto& out = goal.outputs[i];
            const TermPtr& hv = rule.head_args[out.pos];
            const VarInfo& vi = types.at(hv->name);
            if (!bound.count(hv->name))
                throw CompileError("output " + hv->name + " never bound in " + rule.head);
            std::string ret = hv->name;
            if (vi.type == Type::Int && output_types[i] == Type::Float) {
                ret = "$fc" + std::to_string(i);
                declare(ret, vi.dom, Type::Float);
                body.push_back(Stmt::assign(ret, Expr::to_float(Expr::var(hv->name))));
            }
            fn.returns.push_back({ret, vi.dom, output_types[i]});
        }
        fn.body = std::move(body);
    }

    void emit_assign(const FormulaPtr& lit) {
        TExpr e = build_term(lit->rhs);
        const std::string& v = lit->lhs->name;
        VarInfo& vi = types.at(v);
        vi.dom = e.dom;
        vi.type = e.type;
        vi.is_string = e.is_string;
        declare(v, e.dom, e.type);
        body.push_back(Stmt::assign(v, e.e));
    }

    void emit_bit(size_t k, TExpr e, std::vector<TExpr>& bits) {
        std::string name = "$b" + std::to_string(k + 1);
        declare(name, e.dom, Type::Bool);
        body.push_back(Stmt::assign(name, e.e));
        bits.push_back({Expr::var(name), Type::Bool, e.dom, false});
    }

    void emit_atom(size_t k, const FormulaPtr& lit, std::vector<TExpr>& bits) {
        const SchemaDecl& s = schema(lit->pred);
        const std::string& group = atom_group.at(k);
        std::optional<TExpr> acc;
        for (size_t i = 0; i < lit->args.size(); ++i) {
            const SchemaColumn& col = s.columns[i];
            const TermPtr& arg = lit->args[i];
            TExpr colref{Expr::column(group, static_cast<int>(i)), column_ir_type(col),
                         column_dom(col), col.dtype == DataType::String};
            if (arg->is_var() && !bound.count(arg->name)) {
                // binding occurrence: z = R_k[i]
                VarInfo& vi = types.at(arg->name);
                vi.dom = colref.dom;
                vi.type = colref.type;
                vi.is_string = colref.is_string;
                declare(arg->name, colref.dom, colref.type);
                body.push_back(Stmt::assign(arg->name, colref.e));
                continue;
            }
            TExpr key = build_term(arg);
            if (key.is_string != colref.is_string)
                throw CompileError("string/number mismatch matching column " + col.name);
            if (!key.is_string) unify_numeric(key, colref);
            TExpr cmp{Expr::cmp(RelOp::Eq, key.e, colref.e), Type::Bool,
                      ir::join_dom(key.dom, colref.dom), false};
            if (!acc)
                acc = cmp;
            else
                acc = TExpr{Expr::bin_op(BinOp::And, acc->e, cmp.e), Type::Bool,
                            ir::join_dom(acc->dom, cmp.dom), false};
        }
        if (acc) emit_bit(k, *acc, bits);
    }

    void emit_negated_atom(size_t k, const FormulaPtr& atom, std::vector<TExpr>& bits) {
        const SchemaDecl& s = schema(atom->pred);
        std::vector<ExprPtr> keys;
        Dom dom = Dom::Public;
        for (size_t i = 0; i < atom->args.size(); ++i) {
            TExpr key = build_term(atom->args[i]);
            const SchemaColumn& col = s.columns[i];
            if (key.is_string != (col.dtype == DataType::String))
                throw CompileError("string/number mismatch in negated atom " + atom->pred);
            if (!key.is_string && key.type != column_ir_type(col)) {
                if (column_ir_type(col) == Type::Float)
                    key = promote_float(key);
                else
                    throw CompileError("key type mismatch in negated atom " + atom->pred);
            }
            dom = ir::join_dom(dom, key.dom);
            if (col.ptype == PrivacyType::Private) dom = Dom::Private;
            keys.push_back(key.e);
        }
        TExpr e{Expr::negate(Expr::in_table(atom->pred, std::move(keys))), Type::Bool, dom, false};
        emit_bit(k, e, bits);
    }
};

// ---------------------------------------------------------------------------
// per-rule variable typing
// ---------------------------------------------------------------------------

struct RuleTyping {
    const RuleBase& rb;
    const Clause& rule;
    std::map<std::string, VarInfo> info;

    const SchemaDecl* schema(const std::string& pred) const {
        for (const auto& s : rb.schemas)
            if (s.pred == pred) return &s;
        return nullptr;
    }

    void set(const std::string& v, Type t, bool is_string, Dom dom) {
        VarInfo& vi = info[v];
        if (!vi.known) {
            vi = {t, dom, is_string, true};
            return;
        }
        if (vi.is_string != is_string)
            throw CompileError("variable " + v + " used as both string and number");
        if (vi.type == Type::Int && t == Type::Float) vi.type = Type::Float;
        vi.dom = ir::join_dom(vi.dom, dom);
    }

    // type of a term if derivable from already-known variables
    std::optional<VarInfo> term_type(const TermPtr& t) const {
        switch (t->kind) {
            case Term::Kind::Var: {
                auto it = info.find(t->name);
                if (it == info.end() || !it->second.known) return std::nullopt;
                return it->second;
            }
            case Term::Kind::IntConst: return VarInfo{Type::Int, Dom::Public, false, true};
            case Term::Kind::FloatConst: return VarInfo{Type::Float, Dom::Public, false, true};
            case Term::Kind::StrConst: return VarInfo{Type::Int, Dom::Public, true, true};
            case Term::Kind::Bin: {
                auto l = term_type(t->lhs), r = term_type(t->rhs);
                if (!l || !r) return std::nullopt;
                if (l->is_string || r->is_string)
                    throw CompileError("arithmetic on string in " + rule.head);
                Type ty = (t->op == ArithOp::Div || t->op == ArithOp::Pow ||
                           l->type == Type::Float || r->type == Type::Float)
                              ? Type::Float
                              : Type::Int;
                return VarInfo{ty, ir::join_dom(l->dom, r->dom), false, true};
            }
            case Term::Kind::Sqrt: {
                auto l = term_type(t->lhs);
                if (!l) return std::nullopt;
                return VarInfo{Type::Float, l->dom, false, true};
            }
            default: return std::nullopt;
        }
    }

    // constrain a bare unknown variable from the opposite comparison side
    void constrain(const TermPtr& unknown_side, const TermPtr& other) {
        if (!unknown_side->is_var()) return;
        auto it = info.find(unknown_side->name);
        if (it != info.end() && it->second.known) return;
        auto o = term_type(other);
        if (o) set(unknown_side->name, o->type, o->is_string, o->dom);
    }

    void walk(const FormulaPtr& f) {
        switch (f->kind) {
            case Formula::Kind::Atom: {
                const SchemaDecl* s = schema(f->pred);
                if (!s) throw CompileError("unknown table " + f->pred);
                for (size_t i = 0; i < f->args.size(); ++i) {
                    const SchemaColumn& col = s->columns[i];
                    // compound arguments rely on expression promotion instead
                    if (f->args[i]->is_var())
                        set(f->args[i]->name, column_ir_type(col),
                            col.dtype == DataType::String, column_dom(col));
                }
                break;
            }
            case Formula::Kind::Cmp: {
                if (f->cmp == CmpOp::Assign) {
                    auto rhs = term_type(f->rhs);
                    if (rhs) set(f->lhs->name, rhs->type, rhs->is_string, rhs->dom);
                    break;
                }
                constrain(f->lhs, f->rhs);
                constrain(f->rhs, f->lhs);
                break;
            }
            case Formula::Kind::Not: walk(f->sub); break;
            case Formula::Kind::And:
            case Formula::Kind::Or:
                for (const auto& s : f->subs) walk(s);
                break;
            default: break;
        }
    }

    void run() {
        // a few passes until stable; defaults to int for anything untyped
        for (int pass = 0; pass < 4; ++pass)
            for (const auto& lit : conjuncts(rule.body)) walk(lit);
        std::set<std::string> all;
        for (const auto& h : rule.head_args) collect_vars(h, all);
        collect_vars(rule.body, all);
        for (const auto& v : all)
            if (!info[v].known) info[v] = {Type::Int, Dom::Public, false, true};
    }
};

} // namespace

ir::CoreProgram generate(const RuleBase& rb) {
    ir::CoreProgram prog;
    prog.tables = rb.schemas;
    const Goal& goal = rb.goal;
    const std::vector<Clause>& rules = rb.goal_rules();

    // per-rule typing, then goal-position type unification across rules
    std::vector<std::map<std::string, VarInfo>> typing;
    for (const auto& r : rules) {
        RuleTyping t{rb, r, {}};
        t.run();
        typing.push_back(std::move(t.info));
    }

    auto unify_positions = [&](auto&& position_of, size_t count, const char* what) {
        std::vector<Type> out(count, Type::Int);
        std::vector<bool> strings(count, false);
        std::vector<bool> seen(count, false);
        for (size_t r = 0; r < rules.size(); ++r) {
            for (size_t i = 0; i < count; ++i) {
                int pos = position_of(i);
                const TermPtr& hv = rules[r].head_args[pos];
                const VarInfo& vi = typing[r].at(hv->name);
                if (!seen[i]) {
                    out[i] = vi.type;
                    strings[i] = vi.is_string;
                    seen[i] = true;
                    continue;
                }
                if (strings[i] != vi.is_string)
                    throw CompileError(std::string(what) +
                                       " typed as both string and number across rules");
                if (vi.type == Type::Float) out[i] = Type::Float;
            }
        }
        return std::make_pair(out, strings);
    };
    auto [input_types, input_strings] = unify_positions(
        [&](size_t i) { return goal.inputs[i].pos; }, goal.inputs.size(), "goal input");
    auto [output_types, output_strings] = unify_positions(
        [&](size_t i) { return goal.outputs[i].pos; }, goal.outputs.size(), "goal output");

    // a float goal constant makes its position float-typed regardless of the
    // column it is matched against
    for (size_t i = 0; i < goal.inputs.size(); ++i) {
        const GoalInput& in = goal.inputs[i];
        if (!in.is_client_arg && in.value->kind == Term::Kind::FloatConst) {
            if (input_strings[i]) throw CompileError("float goal constant for a string position");
            input_types[i] = Type::Float;
        }
    }

    if (goal.aggregation && goal.aggregation->kind != AggKind::Count) {
        for (size_t i = 0; i < goal.outputs.size(); ++i)
            if (goal.outputs[i].var == goal.aggregation->over_var && output_strings[i])
                throw CompileError("aggregation over a string column");
    }

    // functions, one per goal rule
    for (size_t r = 0; r < rules.size(); ++r) {
        ir::Function fn;
        fn.name = rules[r].head + "_r" + std::to_string(r);
        RuleCompiler rc{rb, rules[r], typing[r], {}, {}, {}};
        rc.compile(fn, goal, input_types, output_types);
        prog.functions.push_back(std::move(fn));
    }

    // main
    std::vector<Stmt> main;
    std::vector<ExprPtr> call_args;
    for (size_t i = 0; i < goal.inputs.size(); ++i) {
        const GoalInput& in = goal.inputs[i];
        std::string x = "$x" + std::to_string(in.pos);
        main.push_back(Stmt::make_decl({x, Dom::Public, input_types[i]}));
        ExprPtr value;
        if (in.is_client_arg) {
            ArgKind kind = input_strings[i] ? ArgKind::Str
                           : input_types[i] == Type::Float ? ArgKind::Float
                                                           : ArgKind::Int;
            value = Expr::argument(in.arg_name, kind);
        } else {
            switch (in.value->kind) {
                case Term::Kind::IntConst:
                    value = Expr::const_int(in.value->ival);
                    if (input_types[i] == Type::Float) value = Expr::to_float(value);
                    break;
                case Term::Kind::FloatConst: value = Expr::const_float(in.value->fval); break;
                case Term::Kind::StrConst:
                    if (!input_strings[i])
                        throw CompileError("string goal constant for a numeric position");
                    value = Expr::const_str(in.value->sval);
                    break;
                default: throw CompileError("unsupported goal constant");
            }
        }
        main.push_back(Stmt::assign(x, value));
        call_args.push_back(Expr::var(x));
    }

    size_t n_out = goal.outputs.size();
    std::vector<std::vector<ExprPtr>> out_parts(n_out);
    std::vector<ExprPtr> bit_parts;
    std::vector<Dom> out_doms(n_out, Dom::Public);
    Dom bits_dom = Dom::Public;
    for (size_t r = 0; r < prog.functions.size(); ++r) {
        const ir::Function& fn = prog.functions[r];
        std::vector<std::string> targets;
        std::string bname = "$b_" + std::to_string(r);
        targets.push_back(bname);
        bits_dom = ir::join_dom(bits_dom, fn.returns[0].dom);
        for (size_t i = 0; i < n_out; ++i) {
            std::string yname = "$y" + std::to_string(i) + "_" + std::to_string(r);
            targets.push_back(yname);
            out_doms[i] = ir::join_dom(out_doms[i], fn.returns[i + 1].dom);
            out_parts[i].push_back(Expr::var(yname));
        }
        bit_parts.push_back(Expr::var(bname));
        main.push_back(Stmt::call(std::move(targets), fn.name, call_args));
    }

    auto add_assign = [&](const std::string& name, Dom dom, Type type, ExprPtr e) {
        main.push_back(Stmt::make_decl({name, dom, type}));
        main.push_back(Stmt::assign(name, std::move(e)));
    };

    add_assign("$cat_b", bits_dom, Type::Bool, Expr::concat(std::move(bit_parts)));
    for (size_t i = 0; i < n_out; ++i)
        add_assign("$cat_y" + std::to_string(i), out_doms[i], output_types[i],
                   Expr::concat(std::move(out_parts[i])));

    // joint shuffle of the bits and every output column
    std::vector<std::string> shuffle_src{"$cat_b"}, shuffle_dst{"$s_b"};
    for (size_t i = 0; i < n_out; ++i) {
        shuffle_src.push_back("$cat_y" + std::to_string(i));
        shuffle_dst.push_back("$s_y" + std::to_string(i));
    }
    main.push_back(Stmt::shuffle(shuffle_dst, shuffle_src));

    // unique zeroes the bits of duplicate (bit, outputs) tuples
    std::vector<ExprPtr> uniq_args{Expr::var("$s_b")};
    for (size_t i = 0; i < n_out; ++i) uniq_args.push_back(Expr::var("$s_y" + std::to_string(i)));
    Dom udom = bits_dom;
    for (size_t i = 0; i < n_out; ++i) udom = ir::join_dom(udom, out_doms[i]);
    add_assign("$u", udom, Type::Bool, Expr::unique(std::move(uniq_args)));

    if (goal.aggregation) {
        size_t over = 0;
        for (size_t i = 0; i < n_out; ++i)
            if (goal.outputs[i].var == goal.aggregation->over_var) over = i;
        FoldKind kind;
        switch (goal.aggregation->kind) {
            case AggKind::Min: kind = FoldKind::Min; break;
            case AggKind::Max: kind = FoldKind::Max; break;
            case AggKind::Sum: kind = FoldKind::Sum; break;
            case AggKind::Count: kind = FoldKind::Count; break;
            default: kind = FoldKind::Min; break;
        }
        Type agg_type = kind == FoldKind::Count ? Type::Int : output_types[over];
        add_assign("$agg", ir::join_dom(out_doms[over], udom), agg_type,
                   Expr::fold_op(kind, Expr::var("$s_y" + std::to_string(over)), Expr::var("$u")));
        add_assign("$pagg", Dom::Public, agg_type, Expr::declassify(Expr::var("$agg")));
        main.push_back(Stmt::publish(goal.aggregation->result_var, Expr::var("$pagg")));
    } else {
        add_assign("$pb", Dom::Public, Type::Bool, Expr::declassify(Expr::var("$u")));
        for (size_t i = 0; i < n_out; ++i) {
            if (!goal.outputs[i].published) continue;
            main.push_back(Stmt::publish(
                goal.outputs[i].var,
                Expr::filter(Expr::var("$s_y" + std::to_string(i)), Expr::var("$pb"))));
        }
    }

    prog.main_body = std::move(main);
    ir::audit(prog);
    return prog;
}

} // namespace privalog
