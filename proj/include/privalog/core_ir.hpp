#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "privalog/ast.hpp"

namespace privalog::ir {

struct IrError : std::runtime_error {
    explicit IrError(const std::string& msg) : std::runtime_error("ir error: " + msg) {}
};

enum class Dom { Public, Private };
enum class Type { Bool, Int, Float };

const char* to_string(Dom d);
const char* to_string(Type t);

inline Dom join_dom(Dom a, Dom b) {
    return (a == Dom::Private || b == Dom::Private) ? Dom::Private : Dom::Public;
}

struct Decl {
    std::string name;
    Dom dom = Dom::Public;
    Type type = Type::Int;
};

enum class BinOp { Add, Sub, Mul, Div, Pow, And, Or };
enum class RelOp { Lt, Le, Eq, Ne, Ge, Gt };
enum class FoldKind { Min, Max, Sum, Count };
enum class ArgKind { Int, Float, Str };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Fig.-1-style expression grammar extended with the blackbox calls the
// vectorized pipeline needs: column reads, table membership, declassify,
// argument, concat, unique, fold, filter, sqrt/pow and int->float conversion.
struct Expr {
    enum class Kind {
        Var, ConstInt, ConstFloat, ConstStr, ConstBool,
        Column, Not, Bin, Cmp, Sqrt, ToFloat,
        In, Declassify, Argument, Concat, Unique, Fold, Filter
    };

    Kind kind;
    std::string name;   // Var; Column group; In/Argument: table or argument key
    int64_t ival = 0;
    double fval = 0.0;
    std::string sval;   // ConstStr (hashed at run time)
    bool bval = false;
    int col = 0;        // Column index
    BinOp bin = BinOp::Add;
    RelOp rel = RelOp::Eq;
    FoldKind fold = FoldKind::Min;
    ArgKind arg_kind = ArgKind::Int;
    std::vector<ExprPtr> args;

    static ExprPtr var(std::string n);
    static ExprPtr const_int(int64_t v);
    static ExprPtr const_float(double v);
    static ExprPtr const_str(std::string v);
    static ExprPtr const_bool(bool v);
    static ExprPtr column(std::string group, int idx);
    static ExprPtr negate(ExprPtr e);
    static ExprPtr bin_op(BinOp op, ExprPtr l, ExprPtr r);
    static ExprPtr cmp(RelOp op, ExprPtr l, ExprPtr r);
    static ExprPtr sqrt(ExprPtr e);
    static ExprPtr to_float(ExprPtr e);
    static ExprPtr in_table(std::string table, std::vector<ExprPtr> keys);
    static ExprPtr declassify(ExprPtr e);
    static ExprPtr argument(std::string key, ArgKind kind);
    static ExprPtr concat(std::vector<ExprPtr> parts);
    static ExprPtr unique(std::vector<ExprPtr> parts); // (bit, cols...) -> bit
    static ExprPtr fold_op(FoldKind k, ExprPtr values, ExprPtr bits);
    static ExprPtr filter(ExprPtr values, ExprPtr bits);
};

struct Stmt {
    enum class Kind { Decl, Assign, Join, Call, Shuffle, Publish };

    Kind kind;
    Decl decl;                        // Decl
    std::string target;               // Assign
    ExprPtr expr;                     // Assign
    std::vector<std::string> targets; // Join (column groups), Call, Shuffle
    std::vector<std::string> tables;  // Join
    std::string func;                 // Call
    std::vector<ExprPtr> args;        // Call
    std::vector<std::string> sources; // Shuffle (joint permutation)
    std::string label;                // Publish

    static Stmt make_decl(Decl d);
    static Stmt assign(std::string name, ExprPtr e);
    static Stmt join(std::vector<std::string> groups, std::vector<std::string> tables);
    static Stmt call(std::vector<std::string> targets, std::string func,
                     std::vector<ExprPtr> args);
    static Stmt shuffle(std::vector<std::string> targets, std::vector<std::string> sources);
    static Stmt publish(std::string label, ExprPtr e);
};

/// One function per goal-matching rule: bound arguments in, a satisfiability
/// bit plus the free-argument columns out. The returns are read at body end
/// (the return is implicitly the last statement).
struct Function {
    std::string name;
    std::vector<Decl> params;
    std::vector<Decl> returns;
    std::vector<Stmt> body;
};

struct CoreProgram {
    std::vector<SchemaDecl> tables;
    std::vector<Function> functions;
    std::vector<Stmt> main_body;
};

std::string to_text(const CoreProgram& p);
CoreProgram from_text(const std::string& text);

/// Static checks: declaration before use, no private-to-public assignment
/// outside declassify, exactly one declassify and it lives in main, every
/// function returns its declared names, join precedes column reads.
void audit(const CoreProgram& p);

/// Cosmetic SecreC-flavored rendering for documentation.
std::string to_secrec(const CoreProgram& p);

} // namespace privalog::ir
