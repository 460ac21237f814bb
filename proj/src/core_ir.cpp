#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "privalog/core_ir.hpp"

namespace privalog::ir {

const char* to_string(Dom d) { return d == Dom::Public ? "public" : "private"; }
const char* to_string(Type t) {
    switch (t) {
        case Type::Bool: return "bool";
        case Type::Int: return "int";
        case Type::Float: return "float";
    }
    return "?";
}

namespace {

const char* bin_name(BinOp op) {
    switch (op) {
        case BinOp::Add: return "add";
        case BinOp::Sub: return "sub";
        case BinOp::Mul: return "mul";
        case BinOp::Div: return "div";
        case BinOp::Pow: return "pow";
        case BinOp::And: return "and";
        case BinOp::Or: return "or";
    }
    return "?";
}

const char* rel_name(RelOp op) {
    switch (op) {
        case RelOp::Lt: return "lt";
        case RelOp::Le: return "le";
        case RelOp::Eq: return "eq";
        case RelOp::Ne: return "ne";
        case RelOp::Ge: return "ge";
        case RelOp::Gt: return "gt";
    }
    return "?";
}

const char* fold_name(FoldKind k) {
    switch (k) {
        case FoldKind::Min: return "min";
        case FoldKind::Max: return "max";
        case FoldKind::Sum: return "sum";
        case FoldKind::Count: return "count";
    }
    return "?";
}

const char* arg_kind_name(ArgKind k) {
    switch (k) {
        case ArgKind::Int: return "int";
        case ArgKind::Float: return "float";
        case ArgKind::Str: return "str";
    }
    return "?";
}

std::string float_text(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

// ---------------------------------------------------------------------------
// factories
// ---------------------------------------------------------------------------

static std::shared_ptr<Expr> mk(Expr::Kind k) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    return e;
}

ExprPtr Expr::var(std::string n) {
    auto e = mk(Kind::Var);
    e->name = std::move(n);
    return e;
}
ExprPtr Expr::const_int(int64_t v) {
    auto e = mk(Kind::ConstInt);
    e->ival = v;
    return e;
}
ExprPtr Expr::const_float(double v) {
    auto e = mk(Kind::ConstFloat);
    e->fval = v;
    return e;
}
ExprPtr Expr::const_str(std::string v) {
    auto e = mk(Kind::ConstStr);
    e->sval = std::move(v);
    return e;
}
ExprPtr Expr::const_bool(bool v) {
    auto e = mk(Kind::ConstBool);
    e->bval = v;
    return e;
}
ExprPtr Expr::column(std::string group, int idx) {
    auto e = mk(Kind::Column);
    auto* p = e.get();
    p->name = std::move(group);
    p->col = idx;
    return e;
}
ExprPtr Expr::negate(ExprPtr x) {
    auto e = mk(Kind::Not);
    e->args = {std::move(x)};
    return e;
}
ExprPtr Expr::bin_op(BinOp op, ExprPtr l, ExprPtr r) {
    auto e = mk(Kind::Bin);
    auto* p = e.get();
    p->bin = op;
    p->args = {std::move(l), std::move(r)};
    return e;
}
ExprPtr Expr::cmp(RelOp op, ExprPtr l, ExprPtr r) {
    auto e = mk(Kind::Cmp);
    auto* p = e.get();
    p->rel = op;
    p->args = {std::move(l), std::move(r)};
    return e;
}
ExprPtr Expr::sqrt(ExprPtr x) {
    auto e = mk(Kind::Sqrt);
    e->args = {std::move(x)};
    return e;
}
ExprPtr Expr::to_float(ExprPtr x) {
    auto e = mk(Kind::ToFloat);
    e->args = {std::move(x)};
    return e;
}
ExprPtr Expr::in_table(std::string table, std::vector<ExprPtr> keys) {
    auto e = mk(Kind::In);
    auto* p = e.get();
    p->name = std::move(table);
    p->args = std::move(keys);
    return e;
}
ExprPtr Expr::declassify(ExprPtr x) {
    auto e = mk(Kind::Declassify);
    e->args = {std::move(x)};
    return e;
}
ExprPtr Expr::argument(std::string key, ArgKind kind) {
    auto e = mk(Kind::Argument);
    auto* p = e.get();
    p->name = std::move(key);
    p->arg_kind = kind;
    return e;
}
ExprPtr Expr::concat(std::vector<ExprPtr> parts) {
    auto e = mk(Kind::Concat);
    e->args = std::move(parts);
    return e;
}
ExprPtr Expr::unique(std::vector<ExprPtr> parts) {
    auto e = mk(Kind::Unique);
    e->args = std::move(parts);
    return e;
}
ExprPtr Expr::fold_op(FoldKind k, ExprPtr values, ExprPtr bits) {
    auto e = mk(Kind::Fold);
    auto* p = e.get();
    p->fold = k;
    p->args = {std::move(values), std::move(bits)};
    return e;
}
ExprPtr Expr::filter(ExprPtr values, ExprPtr bits) {
    auto e = mk(Kind::Filter);
    e->args = {std::move(values), std::move(bits)};
    return e;
}

Stmt Stmt::make_decl(Decl d) {
    Stmt s;
    s.kind = Kind::Decl;
    s.decl = std::move(d);
    return s;
}
Stmt Stmt::assign(std::string name, ExprPtr e) {
    Stmt s;
    s.kind = Kind::Assign;
    s.target = std::move(name);
    s.expr = std::move(e);
    return s;
}
Stmt Stmt::join(std::vector<std::string> groups, std::vector<std::string> tables) {
    Stmt s;
    s.kind = Kind::Join;
    s.targets = std::move(groups);
    s.tables = std::move(tables);
    return s;
}
Stmt Stmt::call(std::vector<std::string> targets, std::string func, std::vector<ExprPtr> args) {
    Stmt s;
    s.kind = Kind::Call;
    s.targets = std::move(targets);
    s.func = std::move(func);
    s.args = std::move(args);
    return s;
}
Stmt Stmt::shuffle(std::vector<std::string> targets, std::vector<std::string> sources) {
    Stmt s;
    s.kind = Kind::Shuffle;
    s.targets = std::move(targets);
    s.sources = std::move(sources);
    return s;
}
Stmt Stmt::publish(std::string label, ExprPtr e) {
    Stmt s;
    s.kind = Kind::Publish;
    s.label = std::move(label);
    s.expr = std::move(e);
    return s;
}

// ---------------------------------------------------------------------------
// text serialization
// ---------------------------------------------------------------------------

namespace {

void quote_string(std::ostringstream& os, const std::string& s) {
    os << '"';
    for (char c : s) {
        if (c == '"' || c == '\\') os << '\\';
        os << c;
    }
    os << '"';
}

void write_expr(std::ostringstream& os, const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Var: os << e->name; return;
        case Expr::Kind::ConstInt: os << "( ci " << e->ival << " )"; return;
        case Expr::Kind::ConstFloat: os << "( cf " << float_text(e->fval) << " )"; return;
        case Expr::Kind::ConstStr:
            os << "( cs ";
            quote_string(os, e->sval);
            os << " )";
            return;
        case Expr::Kind::ConstBool: os << "( cb " << (e->bval ? "true" : "false") << " )"; return;
        case Expr::Kind::Column: os << "( col " << e->name << " " << e->col << " )"; return;
        case Expr::Kind::Not:
            os << "( not ";
            write_expr(os, e->args[0]);
            os << " )";
            return;
        case Expr::Kind::Bin:
            os << "( " << bin_name(e->bin) << " ";
            write_expr(os, e->args[0]);
            os << " ";
            write_expr(os, e->args[1]);
            os << " )";
            return;
        case Expr::Kind::Cmp:
            os << "( " << rel_name(e->rel) << " ";
            write_expr(os, e->args[0]);
            os << " ";
            write_expr(os, e->args[1]);
            os << " )";
            return;
        case Expr::Kind::Sqrt:
            os << "( sqrt ";
            write_expr(os, e->args[0]);
            os << " )";
            return;
        case Expr::Kind::ToFloat:
            os << "( tofloat ";
            write_expr(os, e->args[0]);
            os << " )";
            return;
        case Expr::Kind::In: {
            os << "( in " << e->name;
            for (const auto& a : e->args) {
                os << " ";
                write_expr(os, a);
            }
            os << " )";
            return;
        }
        case Expr::Kind::Declassify:
            os << "( declassify ";
            write_expr(os, e->args[0]);
            os << " )";
            return;
        case Expr::Kind::Argument:
            os << "( arg ";
            quote_string(os, e->name);
            os << " " << arg_kind_name(e->arg_kind) << " )";
            return;
        case Expr::Kind::Concat: {
            os << "( concat";
            for (const auto& a : e->args) {
                os << " ";
                write_expr(os, a);
            }
            os << " )";
            return;
        }
        case Expr::Kind::Unique: {
            os << "( unique";
            for (const auto& a : e->args) {
                os << " ";
                write_expr(os, a);
            }
            os << " )";
            return;
        }
        case Expr::Kind::Fold:
            os << "( fold " << fold_name(e->fold) << " ";
            write_expr(os, e->args[0]);
            os << " ";
            write_expr(os, e->args[1]);
            os << " )";
            return;
        case Expr::Kind::Filter:
            os << "( filter ";
            write_expr(os, e->args[0]);
            os << " ";
            write_expr(os, e->args[1]);
            os << " )";
            return;
    }
}

void write_stmt(std::ostringstream& os, const Stmt& s, const char* indent) {
    os << indent;
    switch (s.kind) {
        case Stmt::Kind::Decl:
            os << "decl " << s.decl.name << " " << to_string(s.decl.dom) << " "
               << to_string(s.decl.type);
            break;
        case Stmt::Kind::Assign:
            os << s.target << " = ";
            write_expr(os, s.expr);
            break;
        case Stmt::Kind::Join: {
            os << "join (";
            for (const auto& t : s.targets) os << " " << t;
            os << " ) (";
            for (const auto& t : s.tables) os << " " << t;
            os << " )";
            break;
        }
        case Stmt::Kind::Call: {
            os << "call (";
            for (const auto& t : s.targets) os << " " << t;
            os << " ) " << s.func << " (";
            for (const auto& a : s.args) {
                os << " ";
                write_expr(os, a);
            }
            os << " )";
            break;
        }
        case Stmt::Kind::Shuffle: {
            os << "shuffle (";
            for (const auto& t : s.targets) os << " " << t;
            os << " ) (";
            for (const auto& t : s.sources) os << " " << t;
            os << " )";
            break;
        }
        case Stmt::Kind::Publish:
            os << "publish ";
            quote_string(os, s.label);
            os << " ";
            write_expr(os, s.expr);
            break;
    }
    os << "\n";
}

void write_decl_group(std::ostringstream& os, const std::vector<Decl>& ds) {
    os << "(";
    for (const auto& d : ds)
        os << " ( " << d.name << " " << to_string(d.dom) << " " << to_string(d.type) << " )";
    os << " )";
}

} // namespace

std::string to_text(const CoreProgram& p) {
    std::ostringstream os;
    os << "privalog-ir 1\n";
    for (const auto& t : p.tables) {
        os << "table " << t.pred;
        for (size_t i = 0; i < t.columns.size(); ++i) {
            const auto& c = t.columns[i];
            os << " ( " << c.name << " " << privalog::to_string(c.ptype) << " "
               << privalog::to_string(c.dtype);
            if (t.primary_key && *t.primary_key == static_cast<int>(i)) os << " key";
            os << " )";
        }
        os << "\n";
    }
    for (const auto& f : p.functions) {
        os << "func " << f.name << " params ";
        write_decl_group(os, f.params);
        os << " returns ";
        write_decl_group(os, f.returns);
        os << "\n";
        for (const auto& s : f.body) write_stmt(os, s, "  ");
        os << "end\n";
    }
    os << "main\n";
    for (const auto& s : p.main_body) write_stmt(os, s, "  ");
    os << "end\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// text parsing
// ---------------------------------------------------------------------------

namespace {

struct TokenStream {
    std::vector<std::string> toks;
    size_t pos = 0;

    explicit TokenStream(const std::string& text) {
        size_t i = 0;
        while (i < text.size()) {
            char c = text[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                continue;
            }
            if (c == '#') {
                while (i < text.size() && text[i] != '\n') ++i;
                continue;
            }
            if (c == '(' || c == ')' || c == '=') {
                toks.push_back(std::string(1, c));
                ++i;
                continue;
            }
            if (c == '"') {
                std::string s = "\"";
                ++i;
                while (i < text.size() && text[i] != '"') {
                    if (text[i] == '\\' && i + 1 < text.size()) ++i;
                    s += text[i++];
                }
                ++i;
                toks.push_back(std::move(s));
                continue;
            }
            std::string t;
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
                   text[i] != '(' && text[i] != ')' && text[i] != '=')
                t += text[i++];
            toks.push_back(std::move(t));
        }
    }

    bool done() const { return pos >= toks.size(); }
    const std::string& peek() const {
        static const std::string end = "<eof>";
        return pos < toks.size() ? toks[pos] : end;
    }
    std::string next() {
        if (done()) throw IrError("unexpected end of input");
        return toks[pos++];
    }
    void expect(const std::string& t) {
        std::string got = next();
        if (got != t) throw IrError("expected '" + t + "', got '" + got + "'");
    }
};

Dom parse_dom(const std::string& s) {
    if (s == "public") return Dom::Public;
    if (s == "private") return Dom::Private;
    throw IrError("bad domain " + s);
}

Type parse_type(const std::string& s) {
    if (s == "bool") return Type::Bool;
    if (s == "int") return Type::Int;
    if (s == "float") return Type::Float;
    throw IrError("bad type " + s);
}

std::string unquote(const std::string& s) {
    if (s.empty() || s[0] != '"') throw IrError("expected string literal, got " + s);
    return s.substr(1);
}

ExprPtr parse_expr(TokenStream& ts) {
    std::string t = ts.next();
    if (t != "(") return Expr::var(t); // bare token = variable reference
    std::string op = ts.next();
    ExprPtr result;
    if (op == "ci") {
        result = Expr::const_int(std::stoll(ts.next()));
    } else if (op == "cf") {
        result = Expr::const_float(std::strtod(ts.next().c_str(), nullptr));
    } else if (op == "cs") {
        result = Expr::const_str(unquote(ts.next()));
    } else if (op == "cb") {
        result = Expr::const_bool(ts.next() == "true");
    } else if (op == "col") {
        std::string group = ts.next();
        result = Expr::column(group, std::stoi(ts.next()));
    } else if (op == "not") {
        result = Expr::negate(parse_expr(ts));
    } else if (op == "sqrt") {
        result = Expr::sqrt(parse_expr(ts));
    } else if (op == "tofloat") {
        result = Expr::to_float(parse_expr(ts));
    } else if (op == "declassify") {
        result = Expr::declassify(parse_expr(ts));
    } else if (op == "arg") {
        std::string key = unquote(ts.next());
        std::string kind = ts.next();
        ArgKind k = kind == "str" ? ArgKind::Str : (kind == "float" ? ArgKind::Float : ArgKind::Int);
        result = Expr::argument(key, k);
    } else if (op == "in") {
        std::string table = ts.next();
        std::vector<ExprPtr> keys;
        while (ts.peek() != ")") keys.push_back(parse_expr(ts));
        result = Expr::in_table(table, std::move(keys));
    } else if (op == "concat" || op == "unique") {
        std::vector<ExprPtr> parts;
        while (ts.peek() != ")") parts.push_back(parse_expr(ts));
        result = op == "concat" ? Expr::concat(std::move(parts)) : Expr::unique(std::move(parts));
    } else if (op == "fold") {
        std::string k = ts.next();
        FoldKind fk = k == "min"   ? FoldKind::Min
                      : k == "max" ? FoldKind::Max
                      : k == "sum" ? FoldKind::Sum
                                   : FoldKind::Count;
        ExprPtr v = parse_expr(ts);
        ExprPtr b = parse_expr(ts);
        result = Expr::fold_op(fk, v, b);
    } else if (op == "filter") {
        ExprPtr v = parse_expr(ts);
        ExprPtr b = parse_expr(ts);
        result = Expr::filter(v, b);
    } else {
        static const std::map<std::string, BinOp> bins = {
            {"add", BinOp::Add}, {"sub", BinOp::Sub}, {"mul", BinOp::Mul}, {"div", BinOp::Div},
            {"pow", BinOp::Pow}, {"and", BinOp::And}, {"or", BinOp::Or}};
        static const std::map<std::string, RelOp> rels = {
            {"lt", RelOp::Lt}, {"le", RelOp::Le}, {"eq", RelOp::Eq},
            {"ne", RelOp::Ne}, {"ge", RelOp::Ge}, {"gt", RelOp::Gt}};
        auto bi = bins.find(op);
        if (bi != bins.end()) {
            ExprPtr l = parse_expr(ts);
            ExprPtr r = parse_expr(ts);
            result = Expr::bin_op(bi->second, l, r);
        } else {
            auto ri = rels.find(op);
            if (ri == rels.end()) throw IrError("unknown expression op " + op);
            ExprPtr l = parse_expr(ts);
            ExprPtr r = parse_expr(ts);
            result = Expr::cmp(ri->second, l, r);
        }
    }
    ts.expect(")");
    return result;
}

std::vector<std::string> parse_name_group(TokenStream& ts) {
    ts.expect("(");
    std::vector<std::string> out;
    while (ts.peek() != ")") out.push_back(ts.next());
    ts.expect(")");
    return out;
}

std::vector<Decl> parse_decl_group(TokenStream& ts) {
    ts.expect("(");
    std::vector<Decl> out;
    while (ts.peek() != ")") {
        ts.expect("(");
        Decl d;
        d.name = ts.next();
        d.dom = parse_dom(ts.next());
        d.type = parse_type(ts.next());
        ts.expect(")");
        out.push_back(std::move(d));
    }
    ts.expect(")");
    return out;
}

std::vector<Stmt> parse_body(TokenStream& ts) {
    std::vector<Stmt> out;
    while (ts.peek() != "end") {
        std::string t = ts.next();
        if (t == "decl") {
            Decl d;
            d.name = ts.next();
            d.dom = parse_dom(ts.next());
            d.type = parse_type(ts.next());
            out.push_back(Stmt::make_decl(std::move(d)));
        } else if (t == "join") {
            auto groups = parse_name_group(ts);
            auto tables = parse_name_group(ts);
            out.push_back(Stmt::join(std::move(groups), std::move(tables)));
        } else if (t == "call") {
            auto targets = parse_name_group(ts);
            std::string func = ts.next();
            ts.expect("(");
            std::vector<ExprPtr> args;
            while (ts.peek() != ")") args.push_back(parse_expr(ts));
            ts.expect(")");
            out.push_back(Stmt::call(std::move(targets), std::move(func), std::move(args)));
        } else if (t == "shuffle") {
            auto targets = parse_name_group(ts);
            auto sources = parse_name_group(ts);
            out.push_back(Stmt::shuffle(std::move(targets), std::move(sources)));
        } else if (t == "publish") {
            std::string label = unquote(ts.next());
            out.push_back(Stmt::publish(std::move(label), parse_expr(ts)));
        } else {
            ts.expect("=");
            out.push_back(Stmt::assign(std::move(t), parse_expr(ts)));
        }
    }
    ts.expect("end");
    return out;
}

} // namespace

CoreProgram from_text(const std::string& text) {
    TokenStream ts(text);
    ts.expect("privalog-ir");
    ts.expect("1");
    CoreProgram p;
    while (!ts.done()) {
        std::string t = ts.next();
        if (t == "table") {
            SchemaDecl s;
            s.pred = ts.next();
            while (ts.peek() == "(") {
                ts.expect("(");
                SchemaColumn c;
                c.name = ts.next();
                c.ptype = ts.next() == "private" ? PrivacyType::Private : PrivacyType::Public;
                std::string dt = ts.next();
                c.dtype = dt == "string" ? DataType::String
                                         : (dt == "float" ? DataType::Float : DataType::Int);
                if (ts.peek() == "key") {
                    ts.next();
                    s.primary_key = static_cast<int>(s.columns.size());
                }
                ts.expect(")");
                s.columns.push_back(std::move(c));
            }
            p.tables.push_back(std::move(s));
        } else if (t == "func") {
            Function f;
            f.name = ts.next();
            ts.expect("params");
            f.params = parse_decl_group(ts);
            ts.expect("returns");
            f.returns = parse_decl_group(ts);
            f.body = parse_body(ts);
            p.functions.push_back(std::move(f));
        } else if (t == "main") {
            p.main_body = parse_body(ts);
        } else {
            throw IrError("unexpected top-level token " + t);
        }
    }
    return p;
}

// ---------------------------------------------------------------------------
// audit
// ---------------------------------------------------------------------------

namespace {

struct AuditScope {
    const CoreProgram& prog;
    std::map<std::string, Decl> vars;
    std::map<std::string, const SchemaDecl*> groups; // join column groups
    bool in_main;
    int* declassify_count;

    const SchemaDecl* table(const std::string& name) const {
        for (const auto& t : prog.tables)
            if (t.pred == name) return &t;
        throw IrError("unknown table " + name);
    }

    static Type column_type(const SchemaColumn& c) {
        switch (c.dtype) {
            case DataType::Int: return Type::Int;
            case DataType::Float: return Type::Float;
            case DataType::String: return Type::Int; // hash column
        }
        return Type::Int;
    }

    std::pair<Dom, Type> infer(const ExprPtr& e, std::optional<Type> hint = {}) {
        switch (e->kind) {
            case Expr::Kind::Var: {
                auto it = vars.find(e->name);
                if (it == vars.end()) throw IrError("use of undeclared variable " + e->name);
                return {it->second.dom, it->second.type};
            }
            case Expr::Kind::ConstInt: return {Dom::Public, Type::Int};
            case Expr::Kind::ConstFloat: return {Dom::Public, Type::Float};
            case Expr::Kind::ConstStr: return {Dom::Public, Type::Int};
            case Expr::Kind::ConstBool: return {Dom::Public, Type::Bool};
            case Expr::Kind::Column: {
                auto it = groups.find(e->name);
                if (it == groups.end()) throw IrError("column read before join: " + e->name);
                const SchemaDecl* s = it->second;
                if (e->col < 0 || e->col >= static_cast<int>(s->columns.size()))
                    throw IrError("column index out of range on " + e->name);
                const auto& c = s->columns[static_cast<size_t>(e->col)];
                return {c.ptype == PrivacyType::Private ? Dom::Private : Dom::Public,
                        column_type(c)};
            }
            case Expr::Kind::Not: {
                auto [d, t] = infer(e->args[0]);
                if (t != Type::Bool) throw IrError("! applied to non-bool");
                return {d, t};
            }
            case Expr::Kind::Bin: {
                auto [dl, tl] = infer(e->args[0]);
                auto [dr, tr] = infer(e->args[1]);
                Dom d = join_dom(dl, dr);
                switch (e->bin) {
                    case BinOp::And:
                    case BinOp::Or:
                        if (tl != Type::Bool || tr != Type::Bool)
                            throw IrError("boolean operator on non-bool");
                        return {d, Type::Bool};
                    case BinOp::Div:
                    case BinOp::Pow:
                        if (tl != Type::Float || tr != Type::Float)
                            throw IrError("div/pow require float operands");
                        return {d, Type::Float};
                    default:
                        if (tl != tr || tl == Type::Bool)
                            throw IrError("arithmetic operand type mismatch");
                        return {d, tl};
                }
            }
            case Expr::Kind::Cmp: {
                auto [dl, tl] = infer(e->args[0]);
                auto [dr, tr] = infer(e->args[1]);
                if (tl != tr || tl == Type::Bool) throw IrError("comparison type mismatch");
                return {join_dom(dl, dr), Type::Bool};
            }
            case Expr::Kind::Sqrt: {
                auto [d, t] = infer(e->args[0]);
                if (t != Type::Float) throw IrError("sqrt requires float");
                return {d, Type::Float};
            }
            case Expr::Kind::ToFloat: {
                auto [d, t] = infer(e->args[0]);
                if (t != Type::Int) throw IrError("tofloat requires int");
                return {d, Type::Float};
            }
            case Expr::Kind::In: {
                const SchemaDecl* s = table(e->name);
                if (e->args.size() != s->columns.size())
                    throw IrError("in: key arity mismatch for " + e->name);
                Dom d = Dom::Public;
                for (size_t i = 0; i < e->args.size(); ++i) {
                    auto [ad, at] = infer(e->args[i]);
                    if (at != column_type(s->columns[i]))
                        throw IrError("in: key type mismatch on " + e->name);
                    d = join_dom(d, ad);
                    if (s->columns[i].ptype == PrivacyType::Private) d = Dom::Private;
                }
                return {d, Type::Bool};
            }
            case Expr::Kind::Declassify: {
                if (!in_main) throw IrError("declassify outside main");
                ++*declassify_count;
                auto [d, t] = infer(e->args[0]);
                (void)d;
                return {Dom::Public, t};
            }
            case Expr::Kind::Argument: {
                if (!in_main) throw IrError("argument outside main");
                Type t = e->arg_kind == ArgKind::Float ? Type::Float : Type::Int;
                return {Dom::Public, t};
            }
            case Expr::Kind::Concat: {
                if (!in_main) throw IrError("concat outside main");
                if (e->args.empty()) {
                    if (!hint) throw IrError("empty concat needs a typed target");
                    return {Dom::Public, *hint};
                }
                auto [d, t] = infer(e->args[0]);
                for (size_t i = 1; i < e->args.size(); ++i) {
                    auto [di, ti] = infer(e->args[i]);
                    if (ti != t) throw IrError("concat type mismatch");
                    d = join_dom(d, di);
                }
                return {d, t};
            }
            case Expr::Kind::Unique: {
                if (!in_main) throw IrError("unique outside main");
                if (e->args.empty()) throw IrError("unique needs a bit vector");
                auto [d, t] = infer(e->args[0]);
                if (t != Type::Bool) throw IrError("unique: first argument must be the bits");
                for (size_t i = 1; i < e->args.size(); ++i) d = join_dom(d, infer(e->args[i]).first);
                return {d, Type::Bool};
            }
            case Expr::Kind::Fold: {
                if (!in_main) throw IrError("fold outside main");
                auto [dv, tv] = infer(e->args[0]);
                auto [db, tb] = infer(e->args[1]);
                if (tb != Type::Bool) throw IrError("fold bits must be bool");
                Type t = e->fold == FoldKind::Count ? Type::Int : tv;
                return {join_dom(dv, db), t};
            }
            case Expr::Kind::Filter: {
                if (!in_main) throw IrError("filter outside main");
                auto [dv, tv] = infer(e->args[0]);
                auto [db, tb] = infer(e->args[1]);
                if (tb != Type::Bool) throw IrError("filter bits must be bool");
                if (db == Dom::Private) throw IrError("filter by private bits");
                return {dv, tv};
            }
        }
        throw IrError("bad expression");
    }

    void declare(const Decl& d) {
        if (!vars.emplace(d.name, d).second) throw IrError("redeclaration of " + d.name);
    }

    void run(const std::vector<Stmt>& body) {
        bool saw_join = false;
        for (const auto& s : body) {
            switch (s.kind) {
                case Stmt::Kind::Decl: declare(s.decl); break;
                case Stmt::Kind::Assign: {
                    auto it = vars.find(s.target);
                    if (it == vars.end())
                        throw IrError("assignment to undeclared variable " + s.target);
                    auto [d, t] = infer(s.expr, it->second.type);
                    if (t != it->second.type)
                        throw IrError("type mismatch assigning to " + s.target);
                    if (d == Dom::Private && it->second.dom == Dom::Public)
                        throw IrError("private value flows into public variable " + s.target);
                    break;
                }
                case Stmt::Kind::Join: {
                    if (in_main) throw IrError("join in main");
                    if (saw_join) throw IrError("multiple joins in one function");
                    saw_join = true;
                    if (s.targets.size() != s.tables.size())
                        throw IrError("join group/table count mismatch");
                    for (size_t i = 0; i < s.targets.size(); ++i)
                        groups.emplace(s.targets[i], table(s.tables[i]));
                    break;
                }
                case Stmt::Kind::Call: {
                    if (!in_main) throw IrError("call outside main");
                    const Function* callee = nullptr;
                    for (const auto& f : prog.functions)
                        if (f.name == s.func) callee = &f;
                    if (!callee) throw IrError("call to unknown function " + s.func);
                    if (s.args.size() != callee->params.size())
                        throw IrError("call arity mismatch on " + s.func);
                    for (size_t i = 0; i < s.args.size(); ++i) {
                        auto [d, t] = infer(s.args[i]);
                        (void)d;
                        if (t != callee->params[i].type)
                            throw IrError("call argument type mismatch on " + s.func);
                    }
                    if (s.targets.size() != callee->returns.size())
                        throw IrError("call target count mismatch on " + s.func);
                    for (size_t i = 0; i < s.targets.size(); ++i) {
                        Decl d = callee->returns[i];
                        d.name = s.targets[i];
                        declare(d);
                    }
                    break;
                }
                case Stmt::Kind::Shuffle: {
                    if (!in_main) throw IrError("shuffle outside main");
                    if (s.targets.size() != s.sources.size())
                        throw IrError("shuffle target/source mismatch");
                    for (size_t i = 0; i < s.sources.size(); ++i) {
                        auto it = vars.find(s.sources[i]);
                        if (it == vars.end())
                            throw IrError("shuffle of undeclared " + s.sources[i]);
                        Decl d = it->second;
                        d.name = s.targets[i];
                        declare(d);
                    }
                    break;
                }
                case Stmt::Kind::Publish: {
                    if (!in_main) throw IrError("publish outside main");
                    infer(s.expr);
                    break;
                }
            }
        }
    }
};

} // namespace

void audit(const CoreProgram& p) {
    int declassify_count = 0;
    for (const auto& f : p.functions) {
        AuditScope scope{p, {}, {}, false, &declassify_count};
        for (const auto& d : f.params) scope.declare(d);
        scope.run(f.body);
        for (const auto& r : f.returns) {
            auto it = scope.vars.find(r.name);
            if (it == scope.vars.end())
                throw IrError("function " + f.name + " never defines return " + r.name);
            if (it->second.type != r.type)
                throw IrError("return type mismatch in " + f.name + " for " + r.name);
        }
    }
    AuditScope scope{p, {}, {}, true, &declassify_count};
    scope.run(p.main_body);
    if (declassify_count != 1)
        throw IrError("expected exactly one declassify, found " +
                      std::to_string(declassify_count));
}

// ---------------------------------------------------------------------------
// SecreC-flavored rendering (documentation only)
// ---------------------------------------------------------------------------

namespace {

void secrec_expr(std::ostringstream& os, const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Var: os << e->name; break;
        case Expr::Kind::ConstInt: os << e->ival; break;
        case Expr::Kind::ConstFloat: os << float_text(e->fval); break;
        case Expr::Kind::ConstStr: os << "crc32(\"" << e->sval << "\")"; break;
        case Expr::Kind::ConstBool: os << (e->bval ? "true" : "false"); break;
        case Expr::Kind::Column: os << e->name << "[" << e->col << "]"; break;
        case Expr::Kind::Not:
            os << "!(";
            secrec_expr(os, e->args[0]);
            os << ")";
            break;
        case Expr::Kind::Bin: {
            static const char* ops[] = {"+", "-", "*", "/", "^", "&", "|"};
            os << "(";
            secrec_expr(os, e->args[0]);
            os << " " << ops[static_cast<int>(e->bin)] << " ";
            secrec_expr(os, e->args[1]);
            os << ")";
            break;
        }
        case Expr::Kind::Cmp: {
            static const char* ops[] = {"<", "<=", "==", "!=", ">=", ">"};
            os << "(";
            secrec_expr(os, e->args[0]);
            os << " " << ops[static_cast<int>(e->rel)] << " ";
            secrec_expr(os, e->args[1]);
            os << ")";
            break;
        }
        case Expr::Kind::Sqrt:
        case Expr::Kind::ToFloat:
        case Expr::Kind::Declassify: {
            const char* n = e->kind == Expr::Kind::Sqrt
                                ? "sqrt"
                                : (e->kind == Expr::Kind::ToFloat ? "(float)" : "declassify");
            os << n << "(";
            secrec_expr(os, e->args[0]);
            os << ")";
            break;
        }
        case Expr::Kind::Argument:
            os << "argument(\"" << e->name << "\")";
            break;
        default: {
            static const std::map<Expr::Kind, const char*> names = {
                {Expr::Kind::In, "in"},         {Expr::Kind::Concat, "cat"},
                {Expr::Kind::Unique, "unique"}, {Expr::Kind::Fold, "fold"},
                {Expr::Kind::Filter, "filter"}};
            os << names.at(e->kind);
            if (e->kind == Expr::Kind::In) os << "_" << e->name;
            if (e->kind == Expr::Kind::Fold) os << "_" << fold_name(e->fold);
            os << "(";
            for (size_t i = 0; i < e->args.size(); ++i) {
                if (i) os << ", ";
                secrec_expr(os, e->args[i]);
            }
            os << ")";
            break;
        }
    }
}

void secrec_stmt(std::ostringstream& os, const Stmt& s, const char* indent) {
    os << indent;
    switch (s.kind) {
        case Stmt::Kind::Decl:
            os << to_string(s.decl.dom) << " " << to_string(s.decl.type) << " " << s.decl.name
               << ";";
            break;
        case Stmt::Kind::Assign:
            os << s.target << " = ";
            secrec_expr(os, s.expr);
            os << ";";
            break;
        case Stmt::Kind::Join: {
            os << "(";
            for (size_t i = 0; i < s.targets.size(); ++i)
                os << (i ? ", " : "") << s.targets[i];
            os << ") = join(";
            for (size_t i = 0; i < s.tables.size(); ++i)
                os << (i ? ", " : "") << "getTable(\"" << s.tables[i] << "\")";
            os << ");";
            break;
        }
        case Stmt::Kind::Call: {
            os << "(";
            for (size_t i = 0; i < s.targets.size(); ++i)
                os << (i ? ", " : "") << s.targets[i];
            os << ") = " << s.func << "(";
            for (size_t i = 0; i < s.args.size(); ++i) {
                if (i) os << ", ";
                secrec_expr(os, s.args[i]);
            }
            os << ");";
            break;
        }
        case Stmt::Kind::Shuffle: {
            os << "(";
            for (size_t i = 0; i < s.targets.size(); ++i)
                os << (i ? ", " : "") << s.targets[i];
            os << ") = shuffle(";
            for (size_t i = 0; i < s.sources.size(); ++i)
                os << (i ? ", " : "") << s.sources[i];
            os << ");";
            break;
        }
        case Stmt::Kind::Publish:
            os << "publish(\"" << s.label << "\", ";
            secrec_expr(os, s.expr);
            os << ");";
            break;
    }
    os << "\n";
}

} // namespace

std::string to_secrec(const CoreProgram& p) {
    std::ostringstream os;
    os << "import shared3p;\n\n";
    for (const auto& f : p.functions) {
        os << "template <domain D>\n";
        os << "(";
        for (size_t i = 0; i < f.returns.size(); ++i) {
            const auto& r = f.returns[i];
            os << (i ? ", " : "") << to_string(r.dom) << " " << to_string(r.type) << " " << r.name;
        }
        os << ") " << f.name << "(";
        for (size_t i = 0; i < f.params.size(); ++i) {
            const auto& d = f.params[i];
            os << (i ? ", " : "") << to_string(d.dom) << " " << to_string(d.type) << " " << d.name;
        }
        os << ") {\n";
        for (const auto& s : f.body) secrec_stmt(os, s, "    ");
        os << "    return (";
        for (size_t i = 0; i < f.returns.size(); ++i) os << (i ? ", " : "") << f.returns[i].name;
        os << ");\n}\n\n";
    }
    os << "void main() {\n";
    for (const auto& s : p.main_body) secrec_stmt(os, s, "    ");
    os << "}\n";
    return os.str();
}

} // namespace privalog::ir
