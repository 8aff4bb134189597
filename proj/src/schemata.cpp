#include "pdl/schemata.hpp"

#include <algorithm>

#include "pdl/search.hpp"

namespace pdl {

namespace {

bool composite(const Formula& f) {
  return f.kind() == FormulaKind::And || f.kind() == FormulaKind::Or || f.kind() == FormulaKind::Implies;
}

RuleKind prop_rule(const Formula& f, bool left) {
  switch (f.kind()) {
    case FormulaKind::And: return left ? RuleKind::AndL : RuleKind::AndR;
    case FormulaKind::Or: return left ? RuleKind::OrL : RuleKind::OrR;
    default: return left ? RuleKind::ImpL : RuleKind::ImpR;
  }
}

NodeId apply(CyclicPreProof& p, NodeId id, RuleKind k, const Item& principal) {
  return p.expand(id, make_rule(k, principal))[0];
}

std::vector<NodeId> apply_all(CyclicPreProof& p, NodeId id, RuleKind k, const Item& principal) {
  return p.expand(id, make_rule(k, principal));
}

// Applies `k` to every x:[prog]psi in the antecedent, one after another.
NodeId left_chain(CyclicPreProof& p, NodeId id, RuleKind k, const ItemSet& principals) {
  for (const auto& i : principals) id = apply(p, id, k, i);
  return id;
}

void close(CyclicPreProof& p, NodeId id) {
  if (!prove_propositional(p, id))
    throw std::logic_error("schema leaf not closable: " + to_string(p.at(id).sequent));
}

Item at(const Label& x, const Formula& f) { return LabelledFormula{x, f}; }

const Program& need(const std::optional<Program>& p, const char* what) {
  if (!p) throw BadParams(std::string("missing program parameter ") + what);
  return *p;
}

const Formula& need(const std::optional<Formula>& f, const char* what) {
  if (!f) throw BadParams(std::string("missing formula parameter ") + what);
  return *f;
}

}  // namespace

bool prove_propositional(CyclicPreProof& p, NodeId id) {
  if (close_by_axiom(p, id)) return true;
  const Sequent s = p.at(id).sequent;
  for (int side = 0; side < 2; ++side) {
    const ItemSet& items = side ? s.antecedent : s.consequent;
    for (const auto& i : items) {
      auto lf = as_formula(i);
      if (!lf || !composite(lf->formula)) continue;
      bool ok = true;
      for (NodeId q : apply_all(p, id, prop_rule(lf->formula, side == 1), i)) ok = prove_propositional(p, q) && ok;
      return ok;
    }
  }
  return false;
}

CyclicPreProof build_necessitation(const Program& alpha, const ItemSet& gamma, const Label& x, const Formula& phi) {
  for (const auto& i : gamma) {
    auto lf = as_formula(i);
    if (!lf || lf->label != x) throw MultiLabelGamma();
  }
  CyclicPreProof d;
  Sequent conclusion{box_prefix(alpha, gamma), {at(x, Formula::box(alpha, phi))}};
  d.root = d.add_open(conclusion);
  NodeId root = d.root;

  switch (alpha.kind()) {
    case ProgramKind::Atomic: {
      LabelSupply supply;
      Label y = supply.fresh({x});
      NodeId cur = d.expand_with(root, subst_rule(y, x), {subst_label(conclusion, x, y)})[0];
      cur = d.expand(cur, box_right(at(y, Formula::box(alpha, phi)), x))[0];
      Item edge = RelAtom{y, alpha.name(), x};
      if (gamma.empty()) {
        d.expand(cur, make_rule(RuleKind::WL, edge));
        break;
      }
      std::size_t left = gamma.size();
      for (const auto& g : gamma) {
        const auto& lf = std::get<LabelledFormula>(g);
        Item principal = at(y, Formula::box(alpha, lf.formula));
        Sequent s = d.at(cur).sequent;
        s.antecedent.erase(principal);
        s.antecedent.insert(at(x, lf.formula));
        if (--left == 0) s.antecedent.erase(edge);
        cur = d.expand_with(cur, box_left(principal, x), {s})[0];
      }
      break;
    }
    case ProgramKind::Seq: {
      Program a = alpha.lhs(), b = alpha.rhs();
      NodeId cur = apply(d, root, RuleKind::SeqR, at(x, Formula::box(alpha, phi)));
      cur = left_chain(d, cur, RuleKind::SeqL, box_prefix(alpha, gamma));
      CyclicPreProof outer = build_necessitation(a, box_prefix(b, gamma), x, Formula::box(b, phi));
      graft(d, cur, outer);
      CyclicPreProof inner = build_necessitation(b, gamma, x, phi);
      for (NodeId l : d.open_leaves()) graft(d, l, inner);
      break;
    }
    case ProgramKind::Choice: {
      Program a = alpha.lhs(), b = alpha.rhs();
      NodeId cur = left_chain(d, root, RuleKind::ChoiceL, box_prefix(alpha, gamma));
      auto prems = apply_all(d, cur, RuleKind::ChoiceR, at(x, Formula::box(alpha, phi)));
      ItemSet ga = box_prefix(a, gamma), gb = box_prefix(b, gamma);
      NodeId l = weaken_to(d, prems[0], Sequent{ga, {at(x, Formula::box(a, phi))}});
      NodeId r = weaken_to(d, prems[1], Sequent{gb, {at(x, Formula::box(b, phi))}});
      graft(d, l, build_necessitation(a, gamma, x, phi));
      graft(d, r, build_necessitation(b, gamma, x, phi));
      break;
    }
    case ProgramKind::Test: {
      Item test = at(x, alpha.formula());
      NodeId cur = apply(d, root, RuleKind::TestR, at(x, Formula::box(alpha, phi)));
      for (const auto& i : box_prefix(alpha, gamma)) {
        auto prems = apply_all(d, cur, RuleKind::TestL, i);
        NodeId ax = weaken_to(d, prems[0], Sequent{{test}, {test}});
        d.expand(ax, make_rule(RuleKind::Ax, test));
        cur = prems[1];
      }
      if (!gamma.count(test)) d.expand(cur, make_rule(RuleKind::WL, test));
      break;
    }
    case ProgramKind::Star: {
      Program a = alpha.inner();
      NodeId cur = left_chain(d, root, RuleKind::StarL, box_prefix(alpha, gamma));
      auto prems = apply_all(d, cur, RuleKind::StarR, at(x, Formula::box(alpha, phi)));
      weaken_to(d, prems[0], Sequent{gamma, {at(x, phi)}});
      ItemSet unfolded = box_prefix(a, box_prefix(alpha, gamma));
      NodeId r = weaken_to(d, prems[1], Sequent{unfolded, {at(x, Formula::box(a, Formula::box(alpha, phi)))}});
      auto ids = graft(d, r, build_necessitation(a, box_prefix(alpha, gamma), x, Formula::box(alpha, phi)));
      for (const auto& [_, n] : ids)
        if (d.at(n).is_open() && d.at(n).sequent == conclusion) d.make_bud(n, root);
      break;
    }
  }
  return d;
}

// --- axioms

Formula iff(const Formula& a, const Formula& b) {
  return Formula::conj(Formula::implies(a, b), Formula::implies(b, a));
}

std::string axiom_name(int id) {
  switch (id) {
    case 1: return "distribution-implication";
    case 2: return "distribution-conjunction";
    case 3: return "choice";
    case 4: return "composition";
    case 5: return "test";
    case 6: return "induction";
    case 7: return "mix";
  }
  throw BadParams("no axiom " + std::to_string(id));
}

Formula axiom_formula(int id, const AxiomParams& ps) {
  using F = Formula;
  switch (id) {
    case 1: {
      const auto& a = need(ps.alpha, "alpha");
      const auto& p = need(ps.phi, "phi");
      const auto& q = need(ps.psi, "psi");
      return F::implies(F::box(a, F::implies(p, q)), F::implies(F::box(a, p), F::box(a, q)));
    }
    case 2: {
      const auto& a = need(ps.alpha, "alpha");
      const auto& p = need(ps.phi, "phi");
      const auto& q = need(ps.psi, "psi");
      return F::implies(F::box(a, F::conj(p, q)), F::conj(F::box(a, p), F::box(a, q)));
    }
    case 3: {
      const auto& a = need(ps.alpha, "alpha");
      const auto& b = need(ps.beta, "beta");
      const auto& p = need(ps.phi, "phi");
      return iff(F::box(Program::choice(a, b), p), F::conj(F::box(a, p), F::box(b, p)));
    }
    case 4: {
      const auto& a = need(ps.alpha, "alpha");
      const auto& b = need(ps.beta, "beta");
      const auto& p = need(ps.phi, "phi");
      return iff(F::box(Program::seq(a, b), p), F::box(a, F::box(b, p)));
    }
    case 5: {
      const auto& q = need(ps.psi, "psi");
      const auto& p = need(ps.phi, "phi");
      return iff(F::box(Program::test(q), p), F::implies(q, p));
    }
    case 6: {
      const auto& a = need(ps.alpha, "alpha");
      const auto& p = need(ps.phi, "phi");
      Program s = Program::star(a);
      return F::implies(F::conj(p, F::box(s, F::implies(p, F::box(a, p)))), F::box(s, p));
    }
    case 7: {
      const auto& a = need(ps.alpha, "alpha");
      const auto& p = need(ps.phi, "phi");
      Program s = Program::star(a);
      return iff(F::conj(p, F::box(a, F::box(s, p))), F::box(s, p));
    }
  }
  throw BadParams("no axiom " + std::to_string(id));
}

namespace {

// ⊢ x:(A -> B) ∧ (B -> A): returns the two ImpR premises A ⊢ B and B ⊢ A.
std::pair<NodeId, NodeId> split_iff(CyclicPreProof& d, const Label& x, const Formula& f) {
  auto halves = apply_all(d, d.root, RuleKind::AndR, at(x, f));
  NodeId l = apply(d, halves[0], RuleKind::ImpR, at(x, f.lhs()));
  NodeId r = apply(d, halves[1], RuleKind::ImpR, at(x, f.rhs()));
  return {l, r};
}

void close_all(CyclicPreProof& d, const std::vector<NodeId>& ids) {
  for (NodeId n : ids) close(d, n);
}

}  // namespace

CyclicPreProof derive_axiom(int id, const AxiomParams& ps, const Label& x) {
  Formula f = axiom_formula(id, ps);
  CyclicPreProof d;
  d.root = d.add_open(Sequent{{}, {at(x, f)}});
  switch (id) {
    case 1: {
      const auto& a = *ps.alpha;
      NodeId cur = apply(d, d.root, RuleKind::ImpR, at(x, f));
      cur = apply(d, cur, RuleKind::ImpR, at(x, f.rhs()));
      ItemSet gamma{at(x, Formula::implies(*ps.phi, *ps.psi)), at(x, *ps.phi)};
      graft(d, cur, build_necessitation(a, gamma, x, *ps.psi));
      break;
    }
    case 2: {
      const auto& a = *ps.alpha;
      NodeId cur = apply(d, d.root, RuleKind::ImpR, at(x, f));
      auto prems = apply_all(d, cur, RuleKind::AndR, at(x, f.rhs()));
      ItemSet gamma{at(x, Formula::conj(*ps.phi, *ps.psi))};
      graft(d, prems[0], build_necessitation(a, gamma, x, *ps.phi));
      graft(d, prems[1], build_necessitation(a, gamma, x, *ps.psi));
      break;
    }
    case 3:
    case 4: {
      auto [l, r] = split_iff(d, x, f);
      Formula lhs = f.lhs().lhs();
      RuleKind kl = id == 3 ? RuleKind::ChoiceL : RuleKind::SeqL;
      RuleKind kr = id == 3 ? RuleKind::ChoiceR : RuleKind::SeqR;
      close_all(d, apply_all(d, l, kl, at(x, lhs)));
      close_all(d, apply_all(d, r, kr, at(x, lhs)));
      break;
    }
    case 5: {
      auto [l, r] = split_iff(d, x, f);
      Formula lhs = f.lhs().lhs();
      close_all(d, apply_all(d, l, RuleKind::TestL, at(x, lhs)));
      close_all(d, apply_all(d, r, RuleKind::TestR, at(x, lhs)));
      break;
    }
    case 6: {
      const auto& a = *ps.alpha;
      const auto& p = *ps.phi;
      Formula inv = Formula::box(Program::star(a), Formula::implies(p, Formula::box(a, p)));
      NodeId cur = apply(d, d.root, RuleKind::ImpR, at(x, f));
      cur = apply(d, cur, RuleKind::AndL, at(x, f.lhs()));
      NodeId companion = cur;
      Sequent comp = d.at(companion).sequent;
      auto prems = apply_all(d, cur, RuleKind::StarR, at(x, f.rhs()));
      close(d, prems[0]);
      cur = apply(d, prems[1], RuleKind::StarL, at(x, inv));
      auto imp = apply_all(d, cur, RuleKind::ImpL, at(x, Formula::implies(p, Formula::box(a, p))));
      close(d, imp[0]);
      ItemSet gamma{at(x, p), at(x, inv)};
      NodeId nec = weaken_to(d, imp[1], Sequent{box_prefix(a, gamma), {at(x, Formula::box(a, f.rhs()))}});
      auto ids = graft(d, nec, build_necessitation(a, gamma, x, f.rhs()));
      for (const auto& [_, n] : ids)
        if (d.at(n).is_open() && d.at(n).sequent == comp) d.make_bud(n, companion);
      break;
    }
    case 7: {
      auto [l, r] = split_iff(d, x, f);
      Formula star = f.lhs().rhs();
      close_all(d, apply_all(d, l, RuleKind::StarR, at(x, star)));
      close(d, apply(d, r, RuleKind::StarL, at(x, star)));
      break;
    }
  }
  for (NodeId l : d.open_leaves()) close(d, l);
  return d;
}

// --- Hilbert proofs

HilbertStep HilbertStep::axiom_instance(int id, AxiomParams p) {
  HilbertStep s;
  s.kind = Kind::Axiom;
  s.axiom = id;
  s.params = std::move(p);
  return s;
}

HilbertStep HilbertStep::tautology(Formula f) {
  HilbertStep s;
  s.kind = Kind::Tautology;
  s.formula = std::move(f);
  return s;
}

HilbertStep HilbertStep::modus_ponens(std::size_t minor, std::size_t major) {
  HilbertStep s;
  s.kind = Kind::ModusPonens;
  s.minor = minor;
  s.major = major;
  return s;
}

HilbertStep HilbertStep::necessitation(std::size_t premise, Program alpha) {
  HilbertStep s;
  s.kind = Kind::Necessitation;
  s.premise = premise;
  s.program = std::move(alpha);
  return s;
}

std::vector<Formula> hilbert_theorems(const HilbertProof& h) {
  if (h.steps.empty()) throw IllFormedHilbertProof("empty Hilbert proof");
  std::vector<Formula> out;
  for (std::size_t i = 0; i < h.steps.size(); ++i) {
    const HilbertStep& s = h.steps[i];
    auto bad = [&](const std::string& why) { return IllFormedHilbertProof("step " + std::to_string(i + 1) + ": " + why); };
    switch (s.kind) {
      case HilbertStep::Kind::Axiom:
        try {
          out.push_back(axiom_formula(s.axiom, s.params));
        } catch (const BadParams& e) {
          throw bad(e.what());
        }
        break;
      case HilbertStep::Kind::Tautology:
        if (!s.formula) throw bad("tautology without formula");
        out.push_back(*s.formula);
        break;
      case HilbertStep::Kind::ModusPonens: {
        if (s.minor >= i || s.major >= i) throw bad("modus ponens refers forward");
        const Formula& maj = out[s.major];
        if (maj.kind() != FormulaKind::Implies || maj.lhs() != out[s.minor])
          throw bad("step " + std::to_string(s.major + 1) + " is not an implication from step " +
                    std::to_string(s.minor + 1));
        out.push_back(maj.rhs());
        break;
      }
      case HilbertStep::Kind::Necessitation:
        if (s.premise >= i) throw bad("necessitation refers forward");
        if (!s.program) throw bad("necessitation without program");
        out.push_back(Formula::box(*s.program, out[s.premise]));
        break;
    }
  }
  return out;
}

CyclicPreProof hilbert_to_cyclic(const HilbertProof& h, const Label& x) {
  std::vector<Formula> thms = hilbert_theorems(h);
  std::vector<CyclicPreProof> ds;
  for (std::size_t i = 0; i < h.steps.size(); ++i) {
    const HilbertStep& s = h.steps[i];
    CyclicPreProof d;
    switch (s.kind) {
      case HilbertStep::Kind::Axiom: d = derive_axiom(s.axiom, s.params, x); break;
      case HilbertStep::Kind::Tautology:
        d.root = d.add_open(Sequent{{}, {at(x, thms[i])}});
        if (!prove_propositional(d, d.root))
          throw IllFormedHilbertProof("step " + std::to_string(i + 1) + ": not a propositional tautology");
        break;
      case HilbertStep::Kind::Necessitation:
        d = build_necessitation(*s.program, {}, x, thms[s.premise]);
        for (NodeId l : d.open_leaves()) graft(d, l, ds[s.premise]);
        break;
      case HilbertStep::Kind::ModusPonens: {
        const Formula& a = thms[s.minor];
        const Formula& b = thms[i];
        Item cut = at(x, Formula::conj(a, thms[s.major]));
        d.root = d.add_open(Sequent{{}, {at(x, b)}});
        auto prems = d.expand_with(d.root, cut_rule(cut), {Sequent{{}, {cut}}, Sequent{{cut}, {at(x, b)}}});
        auto both = apply_all(d, prems[0], RuleKind::AndR, cut);
        graft(d, both[0], ds[s.minor]);
        graft(d, both[1], ds[s.major]);
        NodeId r = apply(d, prems[1], RuleKind::AndL, cut);
        close_all(d, apply_all(d, r, RuleKind::ImpL, at(x, thms[s.major])));
        break;
      }
    }
    ds.push_back(std::move(d));
  }
  return ds.back();
}

}  // namespace pdl
