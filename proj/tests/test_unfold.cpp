#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "privalog/frontend.hpp"
#include "privalog/prune.hpp"
#include "privalog/refeval.hpp"
#include "privalog/unfold.hpp"

using namespace privalog;

namespace {

AdornedProgram prepare(const std::string& src) {
    return split_eq(adorn(desugar_heads(parse(src))));
}

RuleBase unfold_src(const std::string& src, int max_iter = 10, bool prune = true) {
    UnfoldOptions opts;
    opts.max_iter = max_iter;
    opts.prune = prune;
    return unfold_program(to_ordered_dnf(prepare(src)), opts);
}

} // namespace

TEST_CASE("unfold_body: true and false bodies") {
    RuleBase rb;
    FreshNamer namer;
    auto t = unfold_body({Formula::truth()}, {}, rb, namer);
    REQUIRE(t.size() == 1);
    CHECK(t[0].empty());
    auto f = unfold_body({Formula::falsity()}, {}, rb, namer);
    CHECK(f.empty());
}

TEST_CASE("unfold_body: IDB atom with no rules kills the branch") {
    RuleBase rb;
    rb.patterns["p_f"] = "f";
    FreshNamer namer;
    auto out = unfold_body({Formula::atom("p_f", {Term::var("X")})}, {}, rb, namer);
    CHECK(out.empty());
}

TEST_CASE("unfold_body: atom replaced per rule with bound substitution and free equations") {
    RuleBase rb;
    rb.patterns["p_bf"] = "bf";
    Clause def;
    def.head = "p_bf";
    def.head_args = {Term::var("A"), Term::var("B")};
    def.body = Formula::conj({Formula::comparison(CmpOp::Eq, Term::var("A"), Term::int_const(0)),
                              Formula::comparison(CmpOp::Assign, Term::var("B"),
                                                  Term::int_const(7))});
    rb.rules["p_bf"].push_back(def);

    FreshNamer namer;
    std::set<std::string> bound{"X"};
    auto out = unfold_body({Formula::atom("p_bf", {Term::var("X"), Term::var("Y")})}, bound, rb,
                           namer);
    REQUIRE(out.size() == 1);
    const auto& lits = out[0];
    REQUIRE(lits.size() == 3);
    // bound head var A substituted by caller's X
    CHECK(lits[0]->kind == Formula::Kind::Cmp);
    CHECK(lits[0]->lhs->name == "X");
    // free position equated after the body
    CHECK(lits[2]->cmp == CmpOp::Assign);
    CHECK(lits[2]->lhs->name == "Y");
}

TEST_CASE("unfold_body: two inlined copies never share fresh variables") {
    RuleBase rb;
    rb.patterns["q_f"] = "f";
    Clause def;
    def.head = "q_f";
    def.head_args = {Term::var("A")};
    def.body = Formula::conj({Formula::comparison(CmpOp::Assign, Term::var("T"),
                                                  Term::int_const(1)),
                              Formula::comparison(CmpOp::Assign, Term::var("A"), Term::var("T"))});
    rb.rules["q_f"].push_back(def);

    FreshNamer namer;
    auto out = unfold_body({Formula::atom("q_f", {Term::var("X")}),
                            Formula::atom("q_f", {Term::var("Y")})},
                           {}, rb, namer);
    REQUIRE(out.size() == 1);
    // collect introduced (non X/Y) variables per copy: first three literals
    // come from the first copy, the rest from the second
    std::set<std::string> first, second;
    for (size_t i = 0; i < out[0].size(); ++i) {
        std::set<std::string> vs = formula_vars(out[0][i]);
        vs.erase("X");
        vs.erase("Y");
        (i < 3 ? first : second).insert(vs.begin(), vs.end());
    }
    for (const auto& v : first) CHECK(second.count(v) == 0);
}

TEST_CASE("unfold_program: two-level program reaches fixpoint in 2 iterations") {
    RuleBase rb = unfold_src(":-type(e(v : public int)).\n"
                             "a(X) :- e(X).\n"
                             "b(X) :- a(X), X > 0.\n"
                             "?-b(X).");
    CHECK(rb.fixpoint);
    CHECK(rb.iterations == 2);
    REQUIRE(rb.goal_rules().size() == 1);
    // goal rule is EDB-only
    for (const auto& lit : conjuncts(rb.goal_rules()[0].body))
        if (lit->kind == Formula::Kind::Atom) CHECK(lit->pred == "e");
}

TEST_CASE("unfold_program: program with no IDB bodies is identity at fixpoint 1") {
    RuleBase rb = unfold_src(":-type(e(v : public int)).\n"
                             "a(X) :- e(X), X > 2.\n"
                             "?-a(X).");
    CHECK(rb.fixpoint);
    CHECK(rb.iterations == 1);
    REQUIRE(rb.goal_rules().size() == 1);
    auto lits = conjuncts(rb.goal_rules()[0].body);
    REQUIRE(lits.size() == 2);
    CHECK(lits[0]->pred == "e");
}

TEST_CASE("unfold_program: EDB schemas become trivial rules, never inlined") {
    RuleBase rb = unfold_src(":-type(e(v : public int)).\n"
                             "a(X) :- e(X).\n"
                             "?-a(X).");
    REQUIRE(rb.edb_trivial.size() == 1);
    CHECK(rb.edb_trivial[0].head == "e");
    CHECK(rb.edb_trivial[0].body->kind == Formula::Kind::True);
    // the goal rule still references the EDB atom
    CHECK(conjuncts(rb.goal_rules()[0].body)[0]->pred == "e");
}

TEST_CASE("unfold_program: ship pipeline reaches fixpoint and preserves semantics") {
    auto p = parse(fixtures::kShipSource);
    Database db = fixtures::ship_db();
    Answer reference = eval_program(p, db, {});

    RuleBase rb = unfold_src(fixtures::kShipSource);
    CHECK(rb.fixpoint);
    Answer unfolded = eval_goal_rules(rb.goal_rules(), rb.goal, db, {});
    CHECK(unfolded.rows == reference.rows);
    REQUIRE(unfolded.aggregate.has_value());
    CHECK(unfolded.aggregate->as_float() ==
          doctest::Approx(fixtures::alfa_alma_time()).epsilon(1e-9));

    // no IDB atoms remain anywhere
    for (const auto& [pred, rules] : rb.rules)
        for (const auto& r : rules)
            for (const auto& lit : conjuncts(r.body))
                if (lit->kind == Formula::Kind::Atom) CHECK(rb.patterns.count(lit->pred) == 0);
}

TEST_CASE("unfold_program: fib publishes oracle values up to the bound") {
    for (int k : {0, 1, 2, 5, 8, 10}) {
        std::string src = "fib(0, 1).\nfib(1, 1).\n"
                          "fib(N, F) :- N > 1, N1 is N - 1, N2 is N - 2, fib(N1, F1), "
                          "fib(N2, F2), F is F1 + F2.\n?-fib(" +
                          std::to_string(k) + ", F).";
        RuleBase rb = unfold_src(src, 10);
        CHECK(!rb.fixpoint); // recursive: the bound stops the iteration
        Answer a = eval_goal_rules(rb.goal_rules(), rb.goal, {}, {});
        REQUIRE(a.rows.size() == 1);
        CHECK(a.rows.begin()->at(0).as_int() == fixtures::fib_oracle(k));
    }
    // beyond the bound the under-approximation loses the answer
    RuleBase rb = unfold_src("fib(0, 1).\nfib(1, 1).\n"
                             "fib(N, F) :- N > 1, N1 is N - 1, N2 is N - 2, fib(N1, F1), "
                             "fib(N2, F2), F is F1 + F2.\n?-fib(11, F).",
                             10);
    Answer a = eval_goal_rules(rb.goal_rules(), rb.goal, {}, {});
    CHECK(a.rows.empty());
}

TEST_CASE("unfold_program: answers monotone in the unfold bound") {
    std::string src = "fib(0, 1).\nfib(1, 1).\n"
                      "fib(N, F) :- N > 1, N1 is N - 1, N2 is N - 2, fib(N1, F1), "
                      "fib(N2, F2), F is F1 + F2.\n?-fib(6, F).";
    std::set<std::vector<Value>> prev;
    for (int m = 1; m <= 8; ++m) {
        RuleBase rb = unfold_src(src, m);
        Answer a = eval_goal_rules(rb.goal_rules(), rb.goal, {}, {});
        CHECK(std::includes(a.rows.begin(), a.rows.end(), prev.begin(), prev.end()));
        prev = a.rows;
    }
}

TEST_CASE("check_consistent: contradictions prove unsat, satisfiable fib branch survives") {
    auto mk = [](CmpOp op, const char* v, int64_t c) {
        return Formula::comparison(op, Term::var(v), Term::int_const(c));
    };
    // X > 2 and X < 1
    CHECK(check_consistent({mk(CmpOp::Gt, "X", 2), mk(CmpOp::Lt, "X", 1)}) == Sat::Unsat);
    CHECK(check_consistent({Formula::truth()}) == Sat::Satisfiable);

    // X =:= 2, X - 1 =:= 1, X - 2 =:= 0 — brute-force oracle over a small range
    std::vector<FormulaPtr> branch{
        mk(CmpOp::Eq, "X", 2),
        Formula::comparison(CmpOp::Eq, Term::bin(ArithOp::Sub, Term::var("X"), Term::int_const(1)),
                            Term::int_const(1)),
        Formula::comparison(CmpOp::Eq, Term::bin(ArithOp::Sub, Term::var("X"), Term::int_const(2)),
                            Term::int_const(0))};
    bool oracle_sat = false;
    for (int64_t x = -100; x <= 100; ++x) {
        Env env{{"X", Value::integer(x)}};
        bool all = true;
        for (const auto& lit : branch) {
            CmpOp op = lit->cmp;
            all &= apply_cmp(op, eval_term(lit->lhs, env), eval_term(lit->rhs, env));
        }
        oracle_sat |= all;
    }
    CHECK(oracle_sat);
    CHECK(check_consistent(branch) == Sat::Satisfiable);
}

TEST_CASE("check_consistent: chained assignments refute across literals") {
    // N1 = N - 1, N1 =:= 0, N > 1  — forces N = 1 and N > 1
    std::vector<FormulaPtr> branch{
        Formula::comparison(CmpOp::Assign, Term::var("N1"),
                            Term::bin(ArithOp::Sub, Term::var("N"), Term::int_const(1))),
        Formula::comparison(CmpOp::Eq, Term::var("N1"), Term::int_const(0)),
        Formula::comparison(CmpOp::Gt, Term::var("N"), Term::int_const(1))};
    CHECK(check_consistent(branch) == Sat::Unsat);
}

TEST_CASE("check_consistent: EDB atoms and opaque terms stay unknown") {
    std::vector<FormulaPtr> with_atom{Formula::atom("t", {Term::var("X")}),
                                      Formula::comparison(CmpOp::Gt, Term::var("X"),
                                                          Term::int_const(0))};
    CHECK(check_consistent(with_atom) == Sat::Unknown);
    // sqrt is opaque
    std::vector<FormulaPtr> with_sqrt{Formula::comparison(
        CmpOp::Gt, Term::sqrt(Term::var("X")), Term::int_const(0))};
    CHECK(check_consistent(with_sqrt) == Sat::Unknown);
    // but opaque equal subterms still refute: sqrt(X) > 1 and sqrt(X) < 0
    std::vector<FormulaPtr> refuted{
        Formula::comparison(CmpOp::Gt, Term::sqrt(Term::var("X")), Term::int_const(1)),
        Formula::comparison(CmpOp::Lt, Term::sqrt(Term::var("X")), Term::int_const(0))};
    CHECK(check_consistent(refuted) == Sat::Unsat);
}

TEST_CASE("prune: unsatisfiable fib branches are dropped and empty on reference eval") {
    RuleBase rb = unfold_src(fixtures::kFibSource, 3);
    CHECK(!rb.pruned.empty());
    for (const auto& dead : rb.pruned) {
        // a pruned goal rule must contribute nothing
        if (dead.head != rb.goal.target) continue;
        Answer a = eval_goal_rules({dead}, rb.goal, {}, {});
        CHECK(a.rows.empty());
    }
}

TEST_CASE("prune: rulebase without arithmetic is unchanged") {
    RuleBase rb = unfold_src(":-type(e(v : public int)).\na(X) :- e(X).\n?-a(X).");
    RuleBase pruned = prune_rulebase(rb);
    CHECK(pruned.goal_rules().size() == rb.goal_rules().size());
}

TEST_CASE("prune: disabling the checker keeps unsatisfiable branches") {
    RuleBase with = unfold_src(fixtures::kFibSource, 4, true);
    RuleBase without = unfold_src(fixtures::kFibSource, 4, false);
    CHECK(without.goal_rules().size() > with.goal_rules().size());
}

TEST_CASE("merge_primary_keys: duplicate ship atoms merge into equalities") {
    auto p = prepare(fixtures::kShipSource);
    // build a rule with two ship atoms sharing the key variable
    auto raw = parse(":-type(ship(name : public string key, x : public int, y : public int,"
                     " speed : public int, ct : private string, ca : private int)).\n"
                     "q(S, X1, CT) :- ship(S, X1, Y1, Sp, C1, A1), ship(S, X2, Y2, Sp2, CT, CA).\n"
                     "?-q(S, X, C).");
    auto ap = split_eq(adorn(desugar_heads(raw)));
    const Clause& rule = ap.program.clauses[0];
    Clause merged = merge_primary_keys(rule, raw.schemas, ap.head_bound(rule));
    int atoms = 0;
    for (const auto& lit : conjuncts(merged.body))
        atoms += (lit->kind == Formula::Kind::Atom);
    CHECK(atoms == 1);

    // semantics preserved when the key really is unique
    Database db = fixtures::ship_db();
    std::map<std::string, Relation> no_idb;
    Relation before = eval_rule(rule, db, no_idb, {});
    Relation after = eval_rule(merged, db, no_idb, {});
    CHECK(before.rows == after.rows);
}

TEST_CASE("merge_primary_keys: no shared key leaves the rule alone") {
    auto raw = parse(":-type(ship(name : public string key, ca : private int)).\n"
                     "q(A, B) :- ship(S1, A), ship(S2, B).\n"
                     "?-q(A, B).");
    auto ap = split_eq(adorn(desugar_heads(raw)));
    const Clause& rule = ap.program.clauses[0];
    Clause merged = merge_primary_keys(rule, raw.schemas, ap.head_bound(rule));
    int atoms = 0;
    for (const auto& lit : conjuncts(merged.body))
        atoms += (lit->kind == Formula::Kind::Atom);
    CHECK(atoms == 2);
}

TEST_CASE("merge_primary_keys: divergence documented on duplicated-key data") {
    // when the "key" is not actually unique, merging legitimately changes the
    // answer set — the precondition fails
    auto raw = parse(":-type(t(k : public int key, v : public int)).\n"
                     "q(A, B) :- t(K, A), t(K, B).\n"
                     "?-q(A, B).");
    auto ap = split_eq(adorn(desugar_heads(raw)));
    const Clause& rule = ap.program.clauses[0];
    Clause merged = merge_primary_keys(rule, raw.schemas, ap.head_bound(rule));

    Database db;
    Table t;
    t.schema.pred = "t";
    t.schema.columns = {{"k", PrivacyType::Public, DataType::Int},
                        {"v", PrivacyType::Public, DataType::Int}};
    t.schema.primary_key = 0;
    t.rows = {{Value::integer(1), Value::integer(10)},
              {Value::integer(1), Value::integer(20)}}; // duplicated key!
    t.finalize();
    db.tables.emplace("t", std::move(t));

    std::map<std::string, Relation> no_idb;
    Relation before = eval_rule(rule, db, no_idb, {});
    Relation after = eval_rule(merged, db, no_idb, {});
    CHECK(before.rows.size() == 4); // cross pairs
    CHECK(after.rows.size() == 2);  // merged forces both atoms onto one row
    CHECK(before.rows != after.rows);
}

TEST_CASE("to_smtlib renders constraints") {
    auto rb = unfold_src(fixtures::kFibSource, 3);
    REQUIRE(!rb.goal_rules().empty());
    std::string smt = to_smtlib(rb.goal_rules()[0]);
    CHECK(smt.find("(set-logic") != std::string::npos);
    CHECK(smt.find("(check-sat)") != std::string::npos);
}
