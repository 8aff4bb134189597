#include <doctest.h>

#include "gen.hpp"
#include "pdl/parser.hpp"
#include "pdl/schemata.hpp"
#include "pdl/traces.hpp"

using namespace pdl;

namespace {

Formula F(const char* s) { return parse_formula(s); }
Program G(const char* s) { return parse_program(s); }
const Label X{"x"};

bool valid(const CyclicPreProof& p) { return check_pre_proof(p).empty() && check_gtc(p).accepted; }

bool has_rule(const CyclicPreProof& p, RuleKind k) {
  for (const auto& [id, n] : p.nodes)
    if (n.rule.kind == k) return true;
  return false;
}

}  // namespace

TEST_CASE("necessitation, atomic case") {
  auto d = build_necessitation(G("a"), {labelled("x", F("q"))}, X, F("p"));
  CHECK(check_pre_proof(d, true).empty());
  CHECK(d.at(d.root).sequent == parse_sequent("x: [a]q |- x: [a]p"));
  auto leaves = d.open_leaves();
  REQUIRE(leaves.size() == 1);
  CHECK(d.at(leaves[0]).sequent == parse_sequent("x: q |- x: p"));
  CHECK(has_rule(d, RuleKind::Subst));
  CHECK(has_rule(d, RuleKind::BoxR));
  CHECK(has_rule(d, RuleKind::BoxL));
}

TEST_CASE("necessitation, choice and star cases") {
  auto c = build_necessitation(G("b+c"), {}, X, F("p"));
  CHECK(check_pre_proof(c, true).empty());
  auto cl = c.open_leaves();
  CHECK(cl.size() == 2);
  for (NodeId l : cl) CHECK(c.at(l).sequent == parse_sequent("|- x: p"));

  auto s = build_necessitation(G("a*"), {labelled("x", F("q"))}, X, F("p"));
  CHECK(check_pre_proof(s, true).empty());
  CHECK(check_gtc(s).accepted);
  CHECK(s.open_leaves().size() == 1);
  auto buds = s.buds();
  REQUIRE_FALSE(buds.empty());
  for (NodeId b : buds) CHECK(*s.at(b).companion == s.root);
}

TEST_CASE("necessitation rejects mixed labels") {
  CHECK_THROWS_AS(build_necessitation(G("a"), {labelled("y", F("q"))}, X, F("p")), MultiLabelGamma);
}

TEST_CASE("axiom instances") {
  auto a4 = derive_axiom(4, {G("a"), G("b"), F("p"), std::nullopt});
  CHECK(valid(a4));
  CHECK(a4.buds().empty());
  CHECK(a4.at(a4.root).sequent.consequent == ItemSet{labelled("x", iff(F("[a;b]p"), F("[a][b]p")))});

  auto a6 = derive_axiom(6, {G("a"), std::nullopt, F("p"), std::nullopt});
  CHECK(valid(a6));
  REQUIRE_FALSE(a6.buds().empty());
  for (NodeId b : a6.buds()) CHECK(a6.at(*a6.at(b).companion).rule.kind == RuleKind::StarR);

  auto a5 = derive_axiom(5, {std::nullopt, std::nullopt, F("p"), F("q")});
  CHECK(valid(a5));
  CHECK(has_rule(a5, RuleKind::TestL));
  CHECK(has_rule(a5, RuleKind::TestR));
  CHECK(a5.at(a5.root).sequent.consequent == ItemSet{labelled("x", iff(F("[q?]p"), F("q -> p")))});

  CHECK_THROWS_AS(derive_axiom(5, {G("a"), std::nullopt, F("p"), std::nullopt}), BadParams);
  CHECK_THROWS_AS(derive_axiom(8, {G("a"), G("b"), F("p"), F("q")}), BadParams);
  CHECK_THROWS_AS(derive_axiom(0, {}), BadParams);
}

TEST_CASE("axioms across random parameters") {
  gen::Rng r(12);
  gen::Alphabet a;
  a.tests = true;
  for (int id = 1; id <= kAxiomCount; ++id)
    for (int i = 0; i < 6; ++i) {
      AxiomParams ps{gen::program(r, r.between(1, 4), a), gen::program(r, r.between(1, 4), a),
                     gen::formula(r, r.between(1, 6), a), gen::formula(r, r.between(1, 6), a)};
      auto p = derive_axiom(id, ps);
      INFO("axiom ", id, ": ", to_string(axiom_formula(id, ps)));
      CHECK(valid(p));
      CHECK(p.at(p.root).sequent.consequent == ItemSet{labelled("x", axiom_formula(id, ps))});
    }
}

TEST_CASE("propositional prover") {
  CyclicPreProof p;
  p.root = p.add_open(parse_sequent("|- x: (p -> q) -> (q -> r) -> p -> r"));
  CHECK(prove_propositional(p, p.root));
  CHECK(check_pre_proof(p).empty());

  CyclicPreProof q;
  q.root = q.add_open(parse_sequent("|- x: p -> q"));
  CHECK_FALSE(prove_propositional(q, q.root));
}

TEST_CASE("hilbert translation") {
  HilbertProof one{{HilbertStep::axiom_instance(3, {G("a"), G("b"), F("p"), std::nullopt})}};
  auto p1 = hilbert_to_cyclic(one);
  CHECK(valid(p1));

  // p, p -> (p | q), MP
  HilbertProof mp{{HilbertStep::tautology(F("p -> p")), HilbertStep::tautology(F("(p -> p) -> (q -> q)")),
                   HilbertStep::modus_ponens(0, 1)}};
  CHECK(hilbert_theorems(mp).back() == F("q -> q"));
  auto p2 = hilbert_to_cyclic(mp);
  CHECK(valid(p2));
  CHECK(has_rule(p2, RuleKind::Cut));
  CHECK(p2.at(p2.root).sequent.consequent == ItemSet{labelled("x", F("q -> q"))});

  HilbertProof nec{{HilbertStep::tautology(F("p -> p")), HilbertStep::necessitation(0, G("a"))}};
  auto p3 = hilbert_to_cyclic(nec);
  CHECK(valid(p3));
  CHECK(p3.at(p3.root).sequent.consequent == ItemSet{labelled("x", F("[a](p -> p)"))});

  HilbertProof bad{{HilbertStep::modus_ponens(0, 1)}};
  CHECK_THROWS_AS(hilbert_theorems(bad), IllFormedHilbertProof);
  HilbertProof notaut{{HilbertStep::tautology(F("p -> q"))}};
  CHECK_THROWS_AS(hilbert_to_cyclic(notaut), IllFormedHilbertProof);
  HilbertProof mismatch{{HilbertStep::tautology(F("p -> p")), HilbertStep::tautology(F("q -> q")),
                         HilbertStep::modus_ponens(0, 1)}};
  CHECK_THROWS_AS(hilbert_theorems(mismatch), IllFormedHilbertProof);
}
