#include <doctest.h>

#include "fixtures.hpp"
#include "gen.hpp"
#include "pdl/parser.hpp"
#include "pdl/traces.hpp"

using namespace pdl;

namespace {

Sequent S(const char* s) { return parse_sequent(s); }
Item I(const char* s) { return parse_item(s); }
Program G(const char* s) { return parse_program(s); }
TraceValue T(const char* x, std::vector<Program> spine, const char* focus, const char* phi) {
  return TraceValue{Label{x}, std::move(spine), G(focus), parse_formula(phi)};
}

bool contains_loop_node(const Lasso& l, NodeId n) {
  for (NodeId m : l.loop)
    if (m == n) return true;
  return false;
}

}  // namespace

TEST_CASE("trace values of sequents") {
  CHECK(trace_values_of(S("|- x: [a*]p")) == std::set<TraceValue>{T("x", {}, "a", "p")});
  CHECK(trace_values_of(S("|- x: [a][(a*)*]p")) == std::set<TraceValue>{T("x", {G("a")}, "a*", "p")});
  CHECK(trace_values_of(S("|- x: p")).empty());
  CHECK(trace_values_of(S("x: [a*]p |- ")).empty());
  CHECK(trace_values_of(S("|- x: [a*][b*]p")) ==
        std::set<TraceValue>{T("x", {}, "a", "[b*]p"), T("x", {G("a*")}, "b", "p")});
  CHECK(T("x", {G("a")}, "b", "p").as_formula() == parse_formula("[a][b*]p"));
}

TEST_CASE("trace pair clauses") {
  auto star = make_rule(RuleKind::StarR, I("x: [a*]p"));
  auto right = trace_pairs(S("|- x: [a*]p"), star, 1, S("|- x: [a][a*]p"));
  CHECK(right == std::set<TracePair>{{T("x", {}, "a", "p"), T("x", {G("a")}, "a", "p"), true}});
  auto left = trace_pairs(S("|- x: [a*]p"), star, 0, S("|- x: p"));
  CHECK(left.empty());

  auto wr = trace_pairs(S("|- x: [a*]p, x: q"), make_rule(RuleKind::WR, I("x: [a*]p")), 0, S("|- x: q"));
  CHECK(wr.empty());
  auto keep = trace_pairs(S("|- x: [a*]p, x: q"), make_rule(RuleKind::WR, I("x: q")), 0, S("|- x: [a*]p"));
  CHECK(keep == std::set<TracePair>{{T("x", {}, "a", "p"), T("x", {}, "a", "p"), false}});

  auto sub = trace_pairs(S("|- y: [a*]p"), subst_rule(Label{"x"}, Label{"y"}), 0, S("|- x: [a*]p"));
  CHECK(sub == std::set<TracePair>{{T("y", {}, "a", "p"), T("x", {}, "a", "p"), false}});

  auto box = trace_pairs(S("|- x: [a][b*]p"), box_right(I("x: [a][b*]p"), Label{"y"}), 0, S("x -a-> y |- y: [b*]p"));
  CHECK(box == std::set<TracePair>{{T("x", {G("a")}, "b", "p"), T("y", {}, "b", "p"), false}});

  auto seq = trace_pairs(S("|- x: [a;b][c*]p"), make_rule(RuleKind::SeqR, I("x: [a;b][c*]p")), 0, S("|- x: [a][b][c*]p"));
  CHECK(seq == std::set<TracePair>{{T("x", {G("a;b")}, "c", "p"), T("x", {G("a"), G("b")}, "c", "p"), false}});
  CHECK(trace_pairs(S("|- x: [a;b*]p"), make_rule(RuleKind::SeqR, I("x: [a;b*]p")), 0, S("|- x: [a][b*]p")).empty());

  auto test = trace_pairs(S("|- x: [q?][a*]p"), make_rule(RuleKind::TestR, I("x: [q?][a*]p")), 0, S("x: q |- x: [a*]p"));
  CHECK(test == std::set<TracePair>{{T("x", {G("q?")}, "a", "p"), T("x", {}, "a", "p"), false}});

  auto ch = make_rule(RuleKind::ChoiceR, I("x: [a+b][c*]p"));
  CHECK(trace_pairs(S("|- x: [a+b][c*]p"), ch, 1, S("|- x: [b][c*]p")) ==
        std::set<TracePair>{{T("x", {G("a+b")}, "c", "p"), T("x", {G("b")}, "c", "p"), false}});
}

TEST_CASE("only principal star-right pairs into the right premise progress") {
  gen::Rng r(4);
  gen::Alphabet a;
  a.tests = true;
  int seen = 0;
  for (int i = 0; i < 3000; ++i) {
    auto smp = gen::rule_instance(r, a);
    if (!smp) continue;
    auto prem = apply_rule(smp->conclusion, smp->rule);
    for (std::size_t k = 0; k < prem.size(); ++k)
      for (const auto& tp : trace_pairs(smp->conclusion, smp->rule, k, prem[k]))
        if (tp.progressing) {
          ++seen;
          CHECK(smp->rule.kind == RuleKind::StarR);
          CHECK(k == 1);
          CHECK(tp.from.spine.empty());
        }
  }
  CHECK(seen > 0);
}

TEST_CASE("gtc on fixtures") {
  auto fig2 = fixtures::load("fig2.proof.json");
  auto g2 = check_gtc(fig2);
  CHECK(g2.accepted);
  CHECK(gtc_oracle(fig2, 20, 40).verdict == OracleResult::Verdict::Accepted);

  auto fig3 = fixtures::load("fig3.proof.json");
  CHECK(check_gtc(fig3).accepted);
  CHECK(gtc_oracle(fig3, 20, 40).verdict == OracleResult::Verdict::Accepted);

  auto bad = fixtures::load("invalid_preproof.json");
  auto gb = check_gtc(bad);
  CHECK_FALSE(gb.accepted);
  REQUIRE(gb.witness.has_value());
  CHECK(!gb.witness->loop.empty());
  CHECK((contains_loop_node(*gb.witness, 1) || contains_loop_node(*gb.witness, 3)));
  CHECK(gtc_oracle(bad, 2, 2).verdict == OracleResult::Verdict::Rejected);

  CyclicPreProof tree;
  tree.root = tree.add_open(S("x: p |- x: p"));
  tree.expand(tree.root, make_rule(RuleKind::Ax, I("x: p")));
  CHECK(check_gtc(tree).accepted);
  CHECK(gtc_oracle(tree, 1, 1).verdict == OracleResult::Verdict::Accepted);
}

TEST_CASE("fig2 cycle carries one trace progressing once per lap") {
  auto p = fixtures::load("fig2.proof.json");
  // around the loop 2 -> 4 -> ... -> 9 -> 2, starting from the blue value
  std::vector<std::pair<NodeId, int>> lap{{2, 1}, {4, 0}, {5, 0}, {6, 0}, {7, 0}, {8, 0}, {9, -1}};
  std::set<TraceValue> cur{T("x", {}, "a", "[a*]p")};
  int progress = 0;
  for (auto [n, k] : lap) {
    std::set<TraceValue> next;
    for (const auto& tp : trace_pairs(p, n, k).pairs)
      if (cur.count(tp.from)) {
        next.insert(tp.to);
        if (tp.progressing) ++progress;
      }
    cur = next;
  }
  CHECK(cur.count(T("x", {}, "a", "[a*]p")));
  CHECK(progress == 1);
}

TEST_CASE("check_gtc agrees with the lasso oracle on random pre-proofs") {
  gen::Rng r(99);
  int made = 0, accepted = 0;
  for (int i = 0; i < 20000 && made < 150; ++i) {
    auto p = gen::cyclic_preproof(r, 8);
    if (!p) continue;
    ++made;
    bool fast = check_gtc(*p).accepted;
    auto slow = gtc_oracle(*p, p->nodes.size(), 10000);
    REQUIRE(slow.verdict != OracleResult::Verdict::Inconclusive);
    CHECK(fast == (slow.verdict == OracleResult::Verdict::Accepted));
    if (fast) ++accepted;
  }
  CHECK(made == 150);
  CHECK(accepted > 0);
  CHECK(accepted < made);
}
