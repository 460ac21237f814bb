#include <cctype>
#include <cstdlib>
#include <map>

#include "privalog/frontend.hpp"

namespace privalog {

namespace {

enum class Tok {
    LowerIdent, UpperIdent, Hole, Int, Float, Quoted, AtArg,
    LParen, RParen, LBracket, RBracket, Comma, Dot, Semicolon, Colon,
    Implies,   // :-
    Query,     // ?-
    NotOp,     // \+
    Plus, Minus, Star, Slash, Caret,
    Lt, Le, Ge, Gt, EqColon, NeSlash, Unify, Is,
    End
};

struct Token {
    Tok kind;
    std::string text;
    int64_t ival = 0;
    double fval = 0;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return cur_; }
    Token next() {
        Token t = cur_;
        advance();
        return t;
    }

private:
    void advance() {
        skip_ws();
        cur_.line = line_;
        cur_.col = col_;
        if (pos_ >= src_.size()) {
            cur_.kind = Tok::End;
            cur_.text.clear();
            return;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            lex_number();
            return;
        }
        if (c == '\'') {
            lex_quoted();
            return;
        }
        if (c == '@') {
            get();
            std::string name = lex_ident_chars();
            if (name.empty()) fail("expected name after '@'");
            cur_.kind = Tok::AtArg;
            cur_.text = name;
            return;
        }
        if (c == '_' || std::isalpha(static_cast<unsigned char>(c))) {
            std::string name = lex_ident_chars();
            if (name == "_") {
                cur_.kind = Tok::Hole;
            } else if (name == "is") {
                cur_.kind = Tok::Is;
            } else if (std::isupper(static_cast<unsigned char>(name[0])) || name[0] == '_') {
                cur_.kind = Tok::UpperIdent;
            } else {
                cur_.kind = Tok::LowerIdent;
            }
            cur_.text = name;
            return;
        }
        get();
        switch (c) {
            case '(': cur_.kind = Tok::LParen; return;
            case ')': cur_.kind = Tok::RParen; return;
            case '[': cur_.kind = Tok::LBracket; return;
            case ']': cur_.kind = Tok::RBracket; return;
            case ',': cur_.kind = Tok::Comma; return;
            case '.': cur_.kind = Tok::Dot; return;
            case ';': cur_.kind = Tok::Semicolon; return;
            case '+': cur_.kind = Tok::Plus; return;
            case '-': cur_.kind = Tok::Minus; return;
            case '*': cur_.kind = Tok::Star; return;
            case '/': cur_.kind = Tok::Slash; return;
            case '^': cur_.kind = Tok::Caret; return;
            case ':':
                cur_.kind = match('-') ? Tok::Implies : Tok::Colon;
                return;
            case '?':
                if (match('-')) { cur_.kind = Tok::Query; return; }
                fail("expected '-' after '?'");
                return;
            case '\\':
                if (match('+')) { cur_.kind = Tok::NotOp; return; }
                fail("expected '+' after '\\'");
                return;
            case '<': cur_.kind = Tok::Lt; return;
            case '>':
                cur_.kind = match('=') ? Tok::Ge : Tok::Gt;
                return;
            case '=':
                if (match('<')) { cur_.kind = Tok::Le; return; }
                if (match(':')) {
                    if (match('=')) { cur_.kind = Tok::EqColon; return; }
                    fail("expected '=' after '=:'");
                    return;
                }
                if (match('/') || match('\\')) {
                    if (match('=')) { cur_.kind = Tok::NeSlash; return; }
                    fail("expected '=' in disequality operator");
                    return;
                }
                cur_.kind = Tok::Unify;
                return;
            default: fail(std::string("unexpected character '") + c + "'");
        }
    }

    void lex_number() {
        size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) get();
        bool is_float = false;
        if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
            std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
            is_float = true;
            get();
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) get();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            size_t save = pos_;
            get();
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) get();
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                is_float = true;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    get();
            } else {
                pos_ = save;
            }
        }
        std::string text = src_.substr(start, pos_ - start);
        cur_.text = text;
        if (is_float) {
            cur_.kind = Tok::Float;
            cur_.fval = std::strtod(text.c_str(), nullptr);
        } else {
            cur_.kind = Tok::Int;
            cur_.ival = std::strtoll(text.c_str(), nullptr, 10);
        }
    }

    void lex_quoted() {
        get(); // opening quote
        std::string out;
        while (true) {
            if (pos_ >= src_.size()) fail("unterminated quoted atom");
            char c = src_[pos_];
            get();
            if (c == '\\' && pos_ < src_.size()) {
                char e = src_[pos_];
                get();
                switch (e) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case '\\': out += '\\'; break;
                    case '\'': out += '\''; break;
                    default: out += e; break;
                }
                continue;
            }
            if (c == '\'') break;
            out += c;
        }
        cur_.kind = Tok::Quoted;
        cur_.text = out;
    }

    std::string lex_ident_chars() {
        size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            get();
        return src_.substr(start, pos_ - start);
    }

    void skip_ws() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n') get();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                get();
            } else {
                break;
            }
        }
    }

    char get() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    bool match(char c) {
        if (pos_ < src_.size() && src_[pos_] == c) {
            get();
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(line_, col_, msg); }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token cur_;
};

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) {}

    ProgramAst parse_program() {
        ProgramAst prog;
        bool have_goal = false;
        while (lex_.peek().kind != Tok::End) {
            if (lex_.peek().kind == Tok::Implies) {
                lex_.next();
                parse_directive(prog);
            } else if (lex_.peek().kind == Tok::Query) {
                lex_.next();
                if (have_goal) fail("multiple goals in program");
                prog.goal = parse_query_goal();
                have_goal = true;
            } else {
                Token head = lex_.next();
                if (head.kind != Tok::LowerIdent) fail("expected predicate name");
                expect(Tok::LParen, "'('");
                if (head.text == "goal" && lex_.peek().kind == Tok::LBracket) {
                    if (have_goal) fail("multiple goals in program");
                    prog.goal = parse_listform_goal();
                    have_goal = true;
                } else {
                    prog.clauses.push_back(parse_clause_rest(head.text));
                }
            }
        }
        if (!have_goal) fail("program has no goal");
        return prog;
    }

private:
    void parse_directive(ProgramAst& prog) {
        Token t = expect(Tok::LowerIdent, "directive name");
        if (t.text != "type") fail("unknown directive '" + t.text + "'");
        expect(Tok::LParen, "'('");
        SchemaDecl decl;
        decl.pred = expect(Tok::LowerIdent, "relation name").text;
        expect(Tok::LParen, "'('");
        while (true) {
            SchemaColumn col;
            Token name = lex_.next();
            if (name.kind != Tok::LowerIdent && name.kind != Tok::UpperIdent)
                fail("expected column name");
            col.name = name.text;
            expect(Tok::Colon, "':'");
            Token pt = expect(Tok::LowerIdent, "privacy type");
            if (pt.text == "public") col.ptype = PrivacyType::Public;
            else if (pt.text == "private") col.ptype = PrivacyType::Private;
            else fail("unknown privacy type '" + pt.text + "'");
            Token dt = expect(Tok::LowerIdent, "data type");
            if (dt.text == "int") col.dtype = DataType::Int;
            else if (dt.text == "float") col.dtype = DataType::Float;
            else if (dt.text == "string") col.dtype = DataType::String;
            else fail("unknown data type '" + dt.text + "'");
            if (lex_.peek().kind == Tok::LowerIdent && lex_.peek().text == "key") {
                lex_.next();
                if (decl.primary_key) fail("multiple primary keys on " + decl.pred);
                decl.primary_key = static_cast<int>(decl.columns.size());
            }
            decl.columns.push_back(std::move(col));
            if (lex_.peek().kind == Tok::Comma) {
                lex_.next();
                continue;
            }
            break;
        }
        expect(Tok::RParen, "')'");
        expect(Tok::RParen, "')'");
        expect(Tok::Dot, "'.'");
        for (size_t i = 0; i < decl.columns.size(); ++i)
            for (size_t j = i + 1; j < decl.columns.size(); ++j)
                if (decl.columns[i].name == decl.columns[j].name)
                    fail("duplicate column name '" + decl.columns[i].name + "' in " + decl.pred);
        prog.schemas.push_back(std::move(decl));
    }

    // Fig.3 surface form: goal([In1,...],[Out1,...]) :- p(V1,...,Vn).
    // Input variables bind client arguments by their (lowercased) name.
    Goal parse_listform_goal() {
        Goal g;
        std::vector<std::string> ins = parse_var_list();
        expect(Tok::Comma, "','");
        std::vector<std::string> outs = parse_var_list();
        expect(Tok::RParen, "')'");
        expect(Tok::Implies, "':-'");
        Token pred = expect(Tok::LowerIdent, "goal predicate");
        g.target = pred.text;
        expect(Tok::LParen, "'('");
        g.target_args = parse_term_list();
        expect(Tok::RParen, "')'");
        expect(Tok::Dot, "'.'");
        for (auto& arg : g.target_args) {
            if (!arg->is_var() && arg->kind != Term::Kind::Hole)
                fail("list-form goal arguments must be variables");
        }
        // rewrite input variables to client-arg terms; output set is checked
        // during desugaring
        for (const std::string& in : ins) {
            bool found = false;
            for (auto& arg : g.target_args) {
                if (arg->is_var() && arg->name == in) {
                    arg = Term::client_arg(in);
                    found = true;
                }
            }
            if (!found) fail("goal input variable " + in + " not used in target");
        }
        for (const std::string& out : outs) {
            bool found = false;
            for (auto& arg : g.target_args)
                found |= (arg->is_var() && arg->name == out);
            if (!found) fail("goal output variable " + out + " not used in target");
        }
        return g;
    }

    std::vector<std::string> parse_var_list() {
        expect(Tok::LBracket, "'['");
        std::vector<std::string> out;
        if (lex_.peek().kind != Tok::RBracket) {
            out.push_back(expect(Tok::UpperIdent, "variable").text);
            while (lex_.peek().kind == Tok::Comma) {
                lex_.next();
                out.push_back(expect(Tok::UpperIdent, "variable").text);
            }
        }
        expect(Tok::RBracket, "']'");
        return out;
    }

    Goal parse_query_goal() {
        Goal g;
        Token first = lex_.next();
        if (first.kind != Tok::LowerIdent) fail("expected predicate or aggregation in goal");
        static const std::map<std::string, AggKind> aggs = {
            {"min", AggKind::Min}, {"max", AggKind::Max},
            {"sum", AggKind::Sum}, {"count", AggKind::Count}};
        auto it = aggs.find(first.text);
        if (it != aggs.end() && lex_.peek().kind == Tok::LParen) {
            // could still be a predicate named min(...) — aggregations have the
            // shape agg(pred(...), Var, Out), so look for a nested atom.
            lex_.next();
            Token inner = lex_.next();
            if (inner.kind == Tok::LowerIdent && lex_.peek().kind == Tok::LParen) {
                g.target = inner.text;
                lex_.next();
                g.target_args = parse_term_list();
                expect(Tok::RParen, "')'");
                expect(Tok::Comma, "','");
                Aggregation agg;
                agg.kind = it->second;
                agg.over_var = expect(Tok::UpperIdent, "aggregation variable").text;
                expect(Tok::Comma, "','");
                agg.result_var = expect(Tok::UpperIdent, "result variable").text;
                expect(Tok::RParen, "')'");
                expect(Tok::Dot, "'.'");
                g.aggregation = agg;
                return g;
            }
            fail("expected predicate inside aggregation goal");
        }
        g.target = first.text;
        expect(Tok::LParen, "'('");
        g.target_args = parse_term_list();
        expect(Tok::RParen, "')'");
        expect(Tok::Dot, "'.'");
        return g;
    }

    // Called with the head name consumed and '(' already eaten.
    Clause parse_clause_rest(std::string head) {
        Clause c;
        c.head = std::move(head);
        c.head_args = parse_term_list();
        expect(Tok::RParen, "')'");
        if (lex_.peek().kind == Tok::Dot) {
            lex_.next();
            c.body = Formula::truth();
            return c;
        }
        expect(Tok::Implies, "':-' or '.'");
        c.body = parse_formula();
        expect(Tok::Dot, "'.'");
        return c;
    }

    FormulaPtr parse_formula() { return parse_or(); }

    FormulaPtr parse_or() {
        std::vector<FormulaPtr> subs{parse_and()};
        while (lex_.peek().kind == Tok::Semicolon) {
            lex_.next();
            subs.push_back(parse_and());
        }
        return subs.size() == 1 ? subs[0] : Formula::disj(std::move(subs));
    }

    FormulaPtr parse_and() {
        std::vector<FormulaPtr> subs{parse_unary()};
        while (lex_.peek().kind == Tok::Comma) {
            lex_.next();
            subs.push_back(parse_unary());
        }
        return subs.size() == 1 ? subs[0] : Formula::conj(std::move(subs));
    }

    FormulaPtr parse_unary() {
        if (lex_.peek().kind == Tok::NotOp) {
            lex_.next();
            return Formula::negate(parse_unary());
        }
        if (lex_.peek().kind == Tok::LParen) {
            lex_.next();
            FormulaPtr f = parse_formula();
            expect(Tok::RParen, "')'");
            return f;
        }
        return parse_atom_or_cmp();
    }

    FormulaPtr parse_atom_or_cmp() {
        if (lex_.peek().kind == Tok::LowerIdent) {
            Token id = lex_.next();
            if (id.text == "true" && lex_.peek().kind != Tok::LParen) return Formula::truth();
            if (id.text == "false" && lex_.peek().kind != Tok::LParen) return Formula::falsity();
            if (id.text == "sqrt" && lex_.peek().kind == Tok::LParen) {
                // sqrt(...) in comparison position: parse as term expression
                lex_.next();
                TermPtr inner = parse_term();
                expect(Tok::RParen, "')'");
                TermPtr lhs = finish_term(Term::sqrt(inner));
                return parse_cmp_rest(lhs);
            }
            if (lex_.peek().kind == Tok::LParen) {
                lex_.next();
                std::vector<TermPtr> args = parse_term_list();
                expect(Tok::RParen, "')'");
                if (is_cmp_start(lex_.peek().kind))
                    fail("predicate application cannot be compared");
                return Formula::atom(id.text, std::move(args));
            }
            // bare lowercase ident = string constant in a comparison
            TermPtr lhs = finish_term(Term::str_const(id.text));
            return parse_cmp_rest(lhs);
        }
        TermPtr lhs = parse_term();
        return parse_cmp_rest(lhs);
    }

    FormulaPtr parse_cmp_rest(TermPtr lhs) {
        Tok k = lex_.peek().kind;
        CmpOp op;
        switch (k) {
            case Tok::Lt: op = CmpOp::Lt; break;
            case Tok::Le: op = CmpOp::Le; break;
            case Tok::EqColon: op = CmpOp::Eq; break;
            case Tok::NeSlash: op = CmpOp::Ne; break;
            case Tok::Ge: op = CmpOp::Ge; break;
            case Tok::Gt: op = CmpOp::Gt; break;
            case Tok::Unify: op = CmpOp::Unify; break;
            case Tok::Is: op = CmpOp::Is; break;
            default: fail("expected comparison operator"); return nullptr;
        }
        lex_.next();
        TermPtr rhs = parse_term();
        return Formula::comparison(op, lhs, rhs);
    }

    static bool is_cmp_start(Tok k) {
        switch (k) {
            case Tok::Lt: case Tok::Le: case Tok::EqColon: case Tok::NeSlash:
            case Tok::Ge: case Tok::Gt: case Tok::Unify: case Tok::Is:
                return true;
            default: return false;
        }
    }

    std::vector<TermPtr> parse_term_list() {
        std::vector<TermPtr> out;
        if (lex_.peek().kind == Tok::RParen) return out;
        out.push_back(parse_term());
        while (lex_.peek().kind == Tok::Comma) {
            lex_.next();
            out.push_back(parse_term());
        }
        return out;
    }

    // Precedence: additive < multiplicative < power (right-assoc) < unary.
    TermPtr parse_term() { return parse_additive(); }

    TermPtr parse_additive() {
        TermPtr t = parse_multiplicative();
        while (true) {
            Tok k = lex_.peek().kind;
            if (k == Tok::Plus || k == Tok::Minus) {
                lex_.next();
                TermPtr r = parse_multiplicative();
                t = Term::bin(k == Tok::Plus ? ArithOp::Add : ArithOp::Sub, t, r);
            } else {
                return t;
            }
        }
    }

    TermPtr parse_multiplicative() {
        TermPtr t = parse_power();
        while (true) {
            Tok k = lex_.peek().kind;
            if (k == Tok::Star || k == Tok::Slash) {
                lex_.next();
                TermPtr r = parse_power();
                t = Term::bin(k == Tok::Star ? ArithOp::Mul : ArithOp::Div, t, r);
            } else {
                return t;
            }
        }
    }

    TermPtr parse_power() {
        TermPtr t = parse_primary_term();
        if (lex_.peek().kind == Tok::Caret) {
            lex_.next();
            TermPtr r = parse_power(); // right-associative
            return Term::bin(ArithOp::Pow, t, r);
        }
        return t;
    }

    TermPtr parse_primary_term() {
        Token t = lex_.next();
        switch (t.kind) {
            case Tok::UpperIdent: return Term::var(t.text);
            case Tok::Hole: return Term::hole();
            case Tok::Int: return Term::int_const(t.ival);
            case Tok::Float: return Term::float_const(t.fval);
            case Tok::Quoted: return Term::str_const(t.text);
            case Tok::AtArg: return Term::client_arg(t.text);
            case Tok::Minus: {
                TermPtr inner = parse_primary_term();
                if (inner->kind == Term::Kind::IntConst) return Term::int_const(-inner->ival);
                if (inner->kind == Term::Kind::FloatConst) return Term::float_const(-inner->fval);
                return Term::bin(ArithOp::Sub, Term::int_const(0), inner);
            }
            case Tok::LParen: {
                TermPtr inner = parse_term();
                expect(Tok::RParen, "')'");
                return inner;
            }
            case Tok::LowerIdent:
                if (t.text == "sqrt" && lex_.peek().kind == Tok::LParen) {
                    lex_.next();
                    TermPtr inner = parse_term();
                    expect(Tok::RParen, "')'");
                    return Term::sqrt(inner);
                }
                return Term::str_const(t.text);
            default:
                fail("expected term");
                return nullptr;
        }
    }

    TermPtr finish_term(TermPtr primary) {
        // continue parsing operators after an already-consumed primary
        TermPtr t = primary;
        if (lex_.peek().kind == Tok::Caret) {
            lex_.next();
            t = Term::bin(ArithOp::Pow, t, parse_power());
        }
        while (true) {
            Tok k = lex_.peek().kind;
            if (k == Tok::Star || k == Tok::Slash) {
                lex_.next();
                t = Term::bin(k == Tok::Star ? ArithOp::Mul : ArithOp::Div, t, parse_power());
            } else {
                break;
            }
        }
        while (true) {
            Tok k = lex_.peek().kind;
            if (k == Tok::Plus || k == Tok::Minus) {
                lex_.next();
                t = Term::bin(k == Tok::Plus ? ArithOp::Add : ArithOp::Sub, t,
                              parse_multiplicative());
            } else {
                break;
            }
        }
        return t;
    }

    Token expect(Tok kind, const std::string& what) {
        Token t = lex_.next();
        if (t.kind != kind) fail("expected " + what);
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(lex_.peek().line, lex_.peek().col, msg);
    }

    Lexer lex_;
};

} // namespace

ProgramAst parse_raw(const std::string& source) {
    Parser p(source);
    return p.parse_program();
}

ProgramAst parse(const std::string& source) {
    ProgramAst prog = parse_raw(source);
    desugar_goal(prog);
    validate(prog);
    return prog;
}

} // namespace privalog
