#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "gen.hpp"
#include "pdl/kernel.hpp"
#include "pdl/parser.hpp"
#include "pdl/schemata.hpp"
#include "pdl/semantics.hpp"

using namespace pdl;

namespace {

Sequent S(const char* s) { return parse_sequent(s); }
Item I(const char* s) { return parse_item(s); }

std::vector<CyclicPreProof> fixture_set() {
  std::vector<CyclicPreProof> out{fixtures::load("fig2.proof.json"), fixtures::load("fig3.proof.json"),
                                  fixtures::load("invalid_preproof.json")};
  for (int id = 1; id <= 6; ++id) out.push_back(derive_axiom(id, AxiomParams{Program::atomic("a"), Program::atomic("b"), Formula::atom("p"), Formula::atom("q")}));
  return out;
}

// Single-field edits, each of which breaks local correctness.
std::vector<CyclicPreProof> mutations(const CyclicPreProof& p) {
  std::vector<CyclicPreProof> out;
  for (const auto& [id, n] : p.nodes) {
    for (bool left : {true, false}) {
      const ItemSet& side = left ? n.sequent.antecedent : n.sequent.consequent;
      for (const Item& it : side) {
        CyclicPreProof q = p;
        (left ? q.at(id).sequent.antecedent : q.at(id).sequent.consequent).erase(it);
        out.push_back(std::move(q));
      }
    }
    {
      CyclicPreProof q = p;
      q.at(id).sequent.consequent.insert(labelled("x", Formula::atom("zz")));
      out.push_back(std::move(q));
    }
    if (n.rule.principal) {
      CyclicPreProof q = p;
      q.at(id).rule.principal = labelled("x", Formula::atom("zz"));
      out.push_back(std::move(q));
    }
    if (n.rule.fresh) {
      CyclicPreProof q = p;
      q.at(id).rule.fresh = Label{"zz"};
      out.push_back(std::move(q));
    }
    if (n.rule.successor) {
      CyclicPreProof q = p;
      q.at(id).rule.successor = Label{"zz"};
      out.push_back(std::move(q));
    }
    if (n.rule.to) {
      CyclicPreProof q = p;
      q.at(id).rule.to = Label{"zz"};
      out.push_back(std::move(q));
    }
    if (!n.premises.empty()) {
      CyclicPreProof q = p;
      q.at(id).premises.pop_back();
      out.push_back(std::move(q));
    }
    if (n.rule.kind != RuleKind::Bud) {
      CyclicPreProof q = p;
      q.at(id).rule.kind = rule_arity(n.rule.kind) == 1 && n.rule.kind != RuleKind::WR ? RuleKind::WR : RuleKind::Bot;
      out.push_back(std::move(q));
    }
    if (n.companion) {
      for (const auto& [other, m] : p.nodes) {
        if (other == *n.companion || m.sequent == n.sequent) continue;
        CyclicPreProof q = p;
        q.at(id).companion = other;
        out.push_back(std::move(q));
        break;
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("rule arity table") {
  for (RuleKind k : {RuleKind::AndR, RuleKind::OrL, RuleKind::ImpL, RuleKind::ChoiceR, RuleKind::TestL,
                     RuleKind::StarR, RuleKind::Cut})
    CHECK(rule_arity(k) == 2);
  CHECK(rule_arity(RuleKind::Ax) == 0);
  CHECK(rule_arity(RuleKind::Bot) == 0);
  for (RuleKind k : {RuleKind::WL, RuleKind::WR, RuleKind::AndL, RuleKind::OrR, RuleKind::ImpR, RuleKind::BoxL,
                     RuleKind::BoxR, RuleKind::SeqL, RuleKind::SeqR, RuleKind::ChoiceL, RuleKind::TestR,
                     RuleKind::StarL, RuleKind::Subst})
    CHECK(rule_arity(k) == 1);
  for (const char* n : {"Ax", "Bot", "WL", "WR", "AndL", "AndR", "OrL", "OrR", "ImpL", "ImpR", "BoxL", "BoxR", "SeqL",
                        "SeqR", "ChoiceL", "ChoiceR", "TestL", "TestR", "StarL", "StarR", "Subst", "Cut", "Bud"}) {
    auto k = rule_from_name(n);
    REQUIRE(k.has_value());
    CHECK(rule_name(*k) == n);
  }
  CHECK_FALSE(rule_from_name("Magic").has_value());
}

TEST_CASE("apply_rule examples") {
  CHECK(apply_rule(S("|- x: [a*]p"), make_rule(RuleKind::StarR, I("x: [a*]p"))) ==
        std::vector<Sequent>{S("|- x: p"), S("|- x: [a][a*]p")});
  CHECK(apply_rule(S("|- x: [a]p"), box_right(I("x: [a]p"), Label{"y"})) == std::vector<Sequent>{S("x -a-> y |- y: p")});
  CHECK(apply_rule(S("x: [a]p, x -a-> y |- "), box_left(I("x: [a]p"), Label{"y"})) ==
        std::vector<Sequent>{S("y: p, x -a-> y |- ")});
  CHECK(apply_rule(S("x: p & q |- "), make_rule(RuleKind::AndL, I("x: p & q"))) == std::vector<Sequent>{S("x: p, x: q |- ")});
  CHECK(apply_rule(S("|- x: [p?]q"), make_rule(RuleKind::TestR, I("x: [p?]q"))) == std::vector<Sequent>{S("x: p |- x: q")});
  CHECK(apply_rule(S("x: [a;b]p |- "), make_rule(RuleKind::SeqL, I("x: [a;b]p"))) == std::vector<Sequent>{S("x: [a][b]p |- ")});
  CHECK(apply_rule(S("x: [a+b]p |- "), make_rule(RuleKind::ChoiceL, I("x: [a+b]p"))) ==
        std::vector<Sequent>{S("x: [a]p, x: [b]p |- ")});
  CHECK(apply_rule(S("x: [a*]p |- "), make_rule(RuleKind::StarL, I("x: [a*]p"))) ==
        std::vector<Sequent>{S("x: p, x: [a][a*]p |- ")});
}

TEST_CASE("apply_rule errors") {
  auto kind_of = [](auto&& f) -> std::optional<RuleErrorKind> {
    try {
      f();
    } catch (const RuleException& e) {
      return e.error().kind;
    }
    return std::nullopt;
  };
  CHECK(kind_of([] { apply_rule(S("|- x: [a]p"), box_right(I("x: [a]p"), Label{"x"})); }) ==
        RuleErrorKind::FreshnessViolated);
  CHECK(kind_of([] { apply_rule(S("|- x: p"), make_rule(RuleKind::StarR, I("x: [a*]p"))); }) ==
        RuleErrorKind::PrincipalMissing);
  CHECK(kind_of([] { apply_rule(S("x: [a]p |- "), box_left(I("x: [a]p"), Label{"y"})); }) ==
        RuleErrorKind::SideConditionFailed);
  CHECK(kind_of([] { apply_rule(S("x: p |- x: q"), make_rule(RuleKind::Ax, I("x: p"))); }).has_value());
  CHECK(kind_of([] { apply_rule(S("|- x: p"), make_rule(RuleKind::Bot, I("x: false"))); }).has_value());
}

TEST_CASE("fixtures pass local checking") {
  for (const char* name : {"fig2.proof.json", "fig3.proof.json", "invalid_preproof.json"}) {
    CyclicPreProof p = fixtures::load(name);
    auto errs = check_pre_proof(p);
    INFO(name);
    for (const auto& e : errs) INFO(to_string(e));
    CHECK(errs.empty());
    for (const auto& [id, n] : p.nodes) CHECK_FALSE(check_node(p, id).has_value());
  }
}

TEST_CASE("check_node diagnostics") {
  CyclicPreProof p = fixtures::load("fig2.proof.json");
  {
    CyclicPreProof q = p;
    q.at(9).sequent = S("z: [a*]p |- z: [a*][a*]p");
    q.at(8).sequent = S("y: [a*]p |- y: [a*][a*]p");
    q.at(8).rule = subst_rule(Label{"z"}, Label{"y"});
    auto err = check_node(q, 9);
    REQUIRE(err.has_value());
    CHECK(err->kind == RuleErrorKind::CompanionMismatch);
    CHECK(to_string(*err).find("companion sequent mismatch") != std::string::npos);
  }
  {
    CyclicPreProof q = p;
    q.at(5).rule.fresh = Label{"x"};
    auto err = check_node(q, 5);
    REQUIRE(err.has_value());
    CHECK(err->kind == RuleErrorKind::FreshnessViolated);
  }
}

TEST_CASE("cycle graph shapes") {
  auto cycles = [](const char* name) { return elementary_cycles(cycle_graph(fixtures::load(name))); };
  auto c2 = cycles("fig2.proof.json");
  CHECK(c2.size() == 1);
  auto c3 = cycles("fig3.proof.json");
  REQUIRE(c3.size() == 2);
  std::vector<NodeId> shared;
  std::vector<NodeId> a = c3[0], b = c3[1];
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(shared));
  CHECK_FALSE(shared.empty());

  CyclicPreProof tree;
  tree.root = tree.add_open(S("x: p |- x: p"));
  tree.expand(tree.root, make_rule(RuleKind::Ax, I("x: p")));
  CHECK(elementary_cycles(cycle_graph(tree)).empty());
}

TEST_CASE("check_pre_proof accepts the fixture set and rejects single-field mutations") {
  std::size_t total = 0, survived = 0;
  for (const auto& p : fixture_set()) {
    REQUIRE(check_pre_proof(p).empty());
    for (const auto& q : mutations(p)) {
      ++total;
      if (check_pre_proof(q).empty()) ++survived;
    }
  }
  CHECK(total > 100);
  CHECK(survived == 0);
}

TEST_CASE("open leaves and weakening helpers") {
  CyclicPreProof p;
  p.root = p.add_open(S("x: p, x: q |- x: p, y: r"));
  CHECK(p.open_leaves() == std::vector<NodeId>{p.root});
  CHECK_FALSE(check_pre_proof(p).empty());
  CHECK(check_pre_proof(p, true).empty());
  NodeId top = weaken_to(p, p.root, S("x: p |- x: p"));
  CHECK(p.at(top).sequent == S("x: p |- x: p"));
  p.expand(top, make_rule(RuleKind::Ax, I("x: p")));
  CHECK(check_pre_proof(p).empty());
  CHECK_THROWS(weaken_to(p, p.root, S("x: zz |- ")));
}

TEST_CASE("local soundness of random rule instances") {
  gen::Rng r(23);
  gen::Alphabet a;
  a.tests = true;
  int done = 0, tries = 0;
  while (done < 150 && tries < 20000) {
    ++tries;
    auto smp = gen::rule_instance(r, a);
    if (!smp) continue;
    KripkeModel m = gen::model(r, r.between(1, 3), a);
    Valuation v = gen::valuation(r, m, labels_of(smp->conclusion));
    if (satisfies_sequent(m, v, smp->conclusion)) continue;
    ++done;
    bool found = false;
    for (const Sequent& prem : apply_rule(smp->conclusion, smp->rule)) {
      for (const auto& w : gen::extensions(m, {}, labels_of(prem)))
        if (!satisfies_sequent(m, w, prem)) {
          found = true;
          break;
        }
      if (found) break;
    }
    INFO(to_string(smp->conclusion), " by ", rule_name(smp->rule.kind));
    CHECK(found);
  }
  CHECK(done == 150);
}
