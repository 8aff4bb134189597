#include "gen.hpp"

#include <algorithm>

#include "pdl/parser.hpp"

namespace pdl::gen {

Program program(Rng& r, int size, const Alphabet& a) {
  if (size <= 1) return Program::atomic(r.pick(a.progs));
  int k = r.below(a.tests ? 4 : 3);
  if (k == 0) return Program::star(program(r, size - 1, a));
  if (k == 3) return Program::test(formula(r, size - 1, a));
  if (size == 2) return Program::star(program(r, 1, a));
  int left = r.between(1, size - 2);
  Program x = program(r, left, a), y = program(r, size - 1 - left, a);
  return k == 1 ? Program::seq(x, y) : Program::choice(x, y);
}

Formula formula(Rng& r, int size, const Alphabet& a) {
  if (size <= 1) {
    if (a.bottom && r.coin(0.1)) return Formula::bottom();
    return Formula::atom(r.pick(a.props));
  }
  int k = r.below(5);
  if (k >= 3) {
    int psize = size == 2 ? 1 : r.between(1, size - 2);
    return Formula::box(program(r, psize, a), formula(r, size - 1 - psize, a));
  }
  if (size == 2) return Formula::box(program(r, 1, a), formula(r, 0, a));
  int left = r.between(1, size - 2);
  Formula x = formula(r, left, a), y = formula(r, size - 1 - left, a);
  if (k == 0) return Formula::conj(x, y);
  if (k == 1) return Formula::disj(x, y);
  return Formula::implies(x, y);
}

namespace {
bool has_star(const Program& p);
bool has_star(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      return has_star(f.lhs()) || has_star(f.rhs());
    case FormulaKind::Box:
      return has_star(f.program()) || has_star(f.body());
    default:
      return false;
  }
}
bool has_star(const Program& p) {
  switch (p.kind()) {
    case ProgramKind::Star:
      return true;
    case ProgramKind::Seq:
    case ProgramKind::Choice:
      return has_star(p.lhs()) || has_star(p.rhs());
    case ProgramKind::Test:
      return has_star(p.formula());
    default:
      return false;
  }
}
}  // namespace

Formula starred_formula(Rng& r, int size, const Alphabet& a) {
  for (int i = 0; i < 50; ++i) {
    Formula f = formula(r, std::max(size, 3), a);
    if (has_star(f)) return f;
  }
  return Formula::box(Program::star(Program::atomic(r.pick(a.progs))), Formula::atom(r.pick(a.props)));
}

KripkeModel model(Rng& r, int states, const Alphabet& a) {
  KripkeModel m;
  for (int i = 0; i < states; ++i) m.states.push_back("s" + std::to_string(i + 1));
  double density = 0.15 + 0.5 * r.below(100) / 100.0;
  for (const auto& p : a.props) {
    auto& set = m.props[p];
    for (int i = 0; i < states; ++i)
      if (r.coin()) set.insert(i);
  }
  for (const auto& g : a.progs) {
    auto& set = m.progs[g];
    for (int i = 0; i < states; ++i)
      for (int j = 0; j < states; ++j)
        if (r.coin(density)) set.insert({i, j});
  }
  return m;
}

Valuation valuation(Rng& r, const KripkeModel& m, const LabelSet& labels) {
  Valuation v;
  for (const Label& l : labels) v[l] = r.below(m.size());
  return v;
}

Sequent sequent(Rng& r, int size, const Alphabet& a) {
  static const std::vector<std::string> names{"x", "y", "z"};
  int nlabels = r.coin(0.6) ? 1 : r.between(2, 3);
  Sequent s;
  for (int i = 1; i < nlabels; ++i)
    if (r.coin(0.8)) s.antecedent.insert(rel(names[r.below(i)], r.pick(a.progs), names[i]));
  int budget = std::max(size, 1);
  int nformulas = r.between(1, 3);
  bool consequent_used = false;
  for (int i = 0; i < nformulas && budget > 0; ++i) {
    int fs = i + 1 == nformulas ? budget : r.between(1, budget);
    budget -= fs;
    Item it = labelled(names[r.below(nlabels)], formula(r, fs, a));
    bool right = !consequent_used || r.coin(0.4);
    if (right) {
      s.consequent.insert(it);
      consequent_used = true;
    } else {
      s.antecedent.insert(it);
    }
  }
  return s;
}

namespace {

bool sub_sequent(const Sequent& small, const Sequent& big) {
  return std::includes(big.antecedent.begin(), big.antecedent.end(), small.antecedent.begin(),
                       small.antecedent.end()) &&
         std::includes(big.consequent.begin(), big.consequent.end(), small.consequent.begin(),
                       small.consequent.end());
}

std::optional<RuleInstance> right_rule(const LabelledFormula& lf) {
  const Formula& f = lf.formula;
  Item it = lf;
  switch (f.kind()) {
    case FormulaKind::And:
      return make_rule(RuleKind::AndR, it);
    case FormulaKind::Or:
      return make_rule(RuleKind::OrR, it);
    case FormulaKind::Box:
      switch (f.program().kind()) {
        case ProgramKind::Seq:
          return make_rule(RuleKind::SeqR, it);
        case ProgramKind::Choice:
          return make_rule(RuleKind::ChoiceR, it);
        case ProgramKind::Star:
          return make_rule(RuleKind::StarR, it);
        default:
          return std::nullopt;
      }
    default:
      return std::nullopt;
  }
}

std::optional<RuleInstance> left_rule(const LabelledFormula& lf) {
  const Formula& f = lf.formula;
  Item it = lf;
  switch (f.kind()) {
    case FormulaKind::And:
      return make_rule(RuleKind::AndL, it);
    case FormulaKind::Or:
      return make_rule(RuleKind::OrL, it);
    case FormulaKind::Box:
      switch (f.program().kind()) {
        case ProgramKind::Seq:
          return make_rule(RuleKind::SeqL, it);
        case ProgramKind::Choice:
          return make_rule(RuleKind::ChoiceL, it);
        case ProgramKind::Star:
          return make_rule(RuleKind::StarL, it);
        default:
          return std::nullopt;
      }
    default:
      return std::nullopt;
  }
}

const std::vector<std::string> kSeeds{
    "|- x: [a*]p",           "|- x: [(a*)*]p",         "|- x: [a*][a*]p",         "|- x: [a*;a*]p",
    "|- x: [(a+b)*]p",       "x: p |- x: [a*]p",       "|- x: [a*]p, x: [b*]q",   "x: [a*]p |- x: [a*]p",
    "|- x: [a*](p & q)",     "|- x: [(a;b)*]p",        "x: [a*]p |- x: [a*;a]p",  "|- x: [a*][b*]p, x: p",
};

}  // namespace

std::optional<CyclicPreProof> cyclic_preproof(Rng& r, std::size_t max_nodes) {
  CyclicPreProof p;
  p.root = p.add_open(parse_sequent(r.pick(kSeeds)));
  for (int guard = 0; guard < 64; ++guard) {
    auto open = p.open_leaves();
    if (open.empty()) break;
    if (p.nodes.size() > max_nodes) return std::nullopt;
    NodeId leaf = open[r.below(static_cast<int>(open.size()))];
    Sequent s = p.at(leaf).sequent;

    std::vector<int> choices;  // 0 ax, 1 link, 2 rule, 3 weaken
    std::vector<Item> common;
    for (const Item& i : s.antecedent)
      if (s.consequent.count(i)) common.push_back(i);
    std::vector<NodeId> targets;
    for (const auto& [id, n] : p.nodes)
      if (!n.is_open() && !n.is_bud() && sub_sequent(n.sequent, s)) targets.push_back(id);
    std::vector<RuleInstance> rules;
    for (const Item& i : s.consequent)
      if (auto* lf = as_formula(i))
        if (auto ri = right_rule(*lf)) rules.push_back(*ri);
    for (const Item& i : s.antecedent)
      if (auto* lf = as_formula(i))
        if (auto ri = left_rule(*lf)) rules.push_back(*ri);
    if (!common.empty()) choices.push_back(0);
    if (!targets.empty()) choices.insert(choices.end(), 3, 1);
    if (!rules.empty() && p.nodes.size() + 2 <= max_nodes) choices.insert(choices.end(), 3, 2);
    if (s.consequent.size() + s.antecedent.size() > 1) choices.push_back(3);
    if (choices.empty()) return std::nullopt;

    try {
      switch (r.pick(choices)) {
        case 0:
          p.expand(leaf, make_rule(RuleKind::Ax, r.pick(common)));
          break;
        case 1: {
          NodeId t = r.pick(targets);
          NodeId top = weaken_to(p, leaf, p.at(t).sequent);
          p.make_bud(top, t);
          break;
        }
        case 2: {
          RuleInstance ri = r.pick(rules);
          if (ri.kind == RuleKind::StarR && r.coin()) {
            // contraction: the principal stays in both premises
            auto prems = apply_rule(s, ri);
            for (auto& q : prems) q.consequent.insert(*ri.principal);
            p.expand_with(leaf, ri, prems);
          } else {
            p.expand(leaf, ri);
          }
          break;
        }
        case 3: {
          bool left = !s.antecedent.empty() && (s.consequent.size() <= 1 || r.coin());
          const ItemSet& side = left ? s.antecedent : s.consequent;
          std::vector<Item> items(side.begin(), side.end());
          p.expand(leaf, make_rule(left ? RuleKind::WL : RuleKind::WR, r.pick(items)));
          break;
        }
      }
    } catch (const RuleException&) {
      return std::nullopt;
    }
  }
  if (!p.open_leaves().empty() || p.nodes.size() > max_nodes) return std::nullopt;
  if (!check_pre_proof(p).empty()) return std::nullopt;
  return p;
}

}  // namespace pdl::gen

namespace pdl::gen {

std::optional<RuleSample> rule_instance(Rng& r, const Alphabet& a) {
  Sequent s;
  s.consequent.insert(labelled("x", r.coin(0.6) ? starred_formula(r, r.between(3, 6), a) : formula(r, r.between(1, 5), a)));
  if (r.coin(0.5)) s.antecedent.insert(labelled("x", formula(r, r.between(1, 4), a)));
  if (r.coin(0.4)) {
    std::string g = r.pick(a.progs);
    s.antecedent.insert(rel("x", g, "y"));
    if (r.coin(0.6)) s.antecedent.insert(labelled("x", Formula::box(Program::atomic(g), formula(r, r.between(1, 4), a))));
    if (r.coin(0.4)) s.consequent.insert(labelled("y", formula(r, r.between(1, 4), a)));
  }

  std::vector<RuleInstance> cands;
  LabelSet labs = labels_of(s);
  for (const Item& i : s.consequent) {
    cands.push_back(make_rule(RuleKind::WR, i));
    auto* lf = as_formula(i);
    if (!lf) continue;
    const Formula& f = lf->formula;
    switch (f.kind()) {
      case FormulaKind::And: cands.push_back(make_rule(RuleKind::AndR, i)); break;
      case FormulaKind::Or: cands.push_back(make_rule(RuleKind::OrR, i)); break;
      case FormulaKind::Implies: cands.push_back(make_rule(RuleKind::ImpR, i)); break;
      case FormulaKind::Box:
        switch (f.program().kind()) {
          case ProgramKind::Atomic: cands.push_back(box_right(i, Label{"w"})); break;
          case ProgramKind::Seq: cands.push_back(make_rule(RuleKind::SeqR, i)); break;
          case ProgramKind::Choice: cands.push_back(make_rule(RuleKind::ChoiceR, i)); break;
          case ProgramKind::Test: cands.push_back(make_rule(RuleKind::TestR, i)); break;
          case ProgramKind::Star: cands.push_back(make_rule(RuleKind::StarR, i)); break;
        }
        break;
      default: break;
    }
  }
  for (const Item& i : s.antecedent) {
    cands.push_back(make_rule(RuleKind::WL, i));
    auto* lf = as_formula(i);
    if (!lf) continue;
    const Formula& f = lf->formula;
    switch (f.kind()) {
      case FormulaKind::And: cands.push_back(make_rule(RuleKind::AndL, i)); break;
      case FormulaKind::Or: cands.push_back(make_rule(RuleKind::OrL, i)); break;
      case FormulaKind::Implies: cands.push_back(make_rule(RuleKind::ImpL, i)); break;
      case FormulaKind::Box:
        switch (f.program().kind()) {
          case ProgramKind::Atomic:
            for (const Item& j : s.antecedent)
              if (auto* ra = as_atom(j); ra && ra->src == lf->label && ra->prog == f.program().name())
                cands.push_back(box_left(i, ra->dst));
            break;
          case ProgramKind::Seq: cands.push_back(make_rule(RuleKind::SeqL, i)); break;
          case ProgramKind::Choice: cands.push_back(make_rule(RuleKind::ChoiceL, i)); break;
          case ProgramKind::Test: cands.push_back(make_rule(RuleKind::TestL, i)); break;
          case ProgramKind::Star: cands.push_back(make_rule(RuleKind::StarL, i)); break;
        }
        break;
      default: break;
    }
  }
  // conclusion = premise[from := to], so the premise mentions `from`
  if (labs.count(Label{"y"})) cands.push_back(subst_rule(Label{"v"}, Label{"y"}));
  cands.push_back(subst_rule(Label{"v"}, Label{"x"}));
  cands.push_back(cut_rule(labelled("x", formula(r, r.between(1, 4), a))));
  if (cands.empty()) return std::nullopt;
  RuleInstance ri = r.pick(cands);
  try {
    apply_rule(s, ri);
  } catch (const RuleException&) {
    return std::nullopt;
  }
  return RuleSample{s, ri};
}

std::vector<Valuation> extensions(const KripkeModel& m, const Valuation& v, const LabelSet& labels) {
  std::vector<Label> free;
  Valuation base;
  for (const Label& l : labels) {
    if (auto it = v.find(l); it != v.end())
      base[l] = it->second;
    else
      free.push_back(l);
  }
  std::vector<Valuation> out{base};
  for (const Label& l : free) {
    std::vector<Valuation> next;
    for (const auto& w : out)
      for (int s = 0; s < m.size(); ++s) {
        Valuation u = w;
        u[l] = s;
        next.push_back(std::move(u));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace pdl::gen
