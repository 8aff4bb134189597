#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <utility>

#include "pdl/search.hpp"

namespace pdl {

namespace {

bool is_atomic_formula(const Formula& f) {
  return f.kind() == FormulaKind::Atom || f.kind() == FormulaKind::Bottom;
}

LabelSet formula_labels(const ItemSet& items) {
  LabelSet out;
  for (const auto& i : items)
    if (auto lf = as_formula(i)) out.insert(lf->label);
  return out;
}

std::map<Label, std::vector<Label>> successors(const ItemSet& gamma) {
  std::map<Label, std::vector<Label>> out;
  for (const auto& i : gamma)
    if (auto r = as_atom(i)) out[r->src].push_back(r->dst);
  return out;
}

bool reaches_in(const std::map<Label, std::vector<Label>>& succ, const Label& x, const Label& y) {
  std::set<Label> seen;
  std::vector<Label> todo;
  auto push_succ = [&](const Label& l) {
    auto it = succ.find(l);
    if (it == succ.end()) return;
    for (const auto& d : it->second)
      if (seen.insert(d).second) todo.push_back(d);
  };
  push_succ(x);
  while (!todo.empty()) {
    Label l = todo.back();
    todo.pop_back();
    if (l == y) return true;
    push_succ(l);
  }
  return false;
}

// Unfold marks: depths along the box spine of a consequent formula whose
// star has already been unfolded in this unwinding.
using Tags = std::map<LabelledFormula, std::set<int>>;

struct Branch {
  NodeId id;
  Tags tags;
  std::set<std::pair<LabelledFormula, Label>> applied;
};

std::set<int> shifted(const std::set<int>& t, int by) {
  std::set<int> out;
  for (int d : t)
    if (d + by >= 0) out.insert(d + by);
  return out;
}

Tags carry(const Tags& tags, const ItemSet& consequent) {
  Tags out;
  for (const auto& [f, t] : tags)
    if (!t.empty() && consequent.count(Item{f})) out[f] = t;
  return out;
}

void merge(Tags& tags, const LabelledFormula& f, const std::set<int>& t) {
  if (!t.empty()) tags[f].insert(t.begin(), t.end());
}

std::optional<Item> axiom_item(const Sequent& s) {
  for (const auto& i : s.antecedent)
    if (auto lf = as_formula(i); lf && lf->formula.kind() == FormulaKind::Bottom) return i;
  for (const auto& i : s.antecedent)
    if (s.consequent.count(i)) return i;
  return std::nullopt;
}

}  // namespace

bool reaches(const ItemSet& gamma, const Label& x, const Label& y) { return reaches_in(successors(gamma), x, y); }

bool is_acyclic(const Sequent& s) {
  auto succ = successors(s.antecedent);
  for (const auto& [x, _] : succ)
    if (reaches_in(succ, x, x)) return false;
  return true;
}

bool is_normal(const Sequent& s) {
  for (const auto& i : s.antecedent)
    if (s.consequent.count(i)) return false;
  for (const auto& i : s.consequent) {
    auto lf = as_formula(i);
    if (!lf) return false;
    auto c = classify(lf->formula);
    if (c != FormulaClass::Atomic && c != FormulaClass::Iterated) return false;
  }
  for (const auto& i : s.antecedent) {
    auto lf = as_formula(i);
    if (!lf) continue;
    auto c = classify(lf->formula);
    if (c == FormulaClass::Atomic) continue;
    if (c != FormulaClass::Basic) return false;
    const std::string& a = lf->formula.program().name();
    for (const auto& j : s.antecedent)
      if (auto r = as_atom(j); r && r->src == lf->label && r->prog == a) return false;
  }
  return true;
}

bool is_atomic_leaf(const Sequent& s) {
  for (const auto& i : s.consequent)
    if (auto lf = as_formula(i); lf && !is_atomic_formula(lf->formula)) return false;
  return true;
}

WeakeningResult apply_valid_weakenings(const Sequent& leaf) {
  WeakeningResult out{leaf, {}};
  Sequent& s = out.result;
  auto drop = [&](RuleKind k, const Item& i) {
    (k == RuleKind::WL ? s.antecedent : s.consequent).erase(i);
    out.steps.push_back({k, i});
  };
  for (bool changed = true; changed;) {
    changed = false;
    // (1)
    for (const Item& i : ItemSet(s.consequent))
      if (as_atom(i) && !s.antecedent.count(i)) drop(RuleKind::WR, i), changed = true;
    // (2)
    LabelSet starred = starred_labels_of(s.consequent);
    for (const Item& i : ItemSet(s.consequent))
      if (auto lf = as_formula(i); lf && is_atomic_formula(lf->formula) && !starred.count(lf->label))
        drop(RuleKind::WR, i), changed = true;
    // (3)
    LabelSet right = labels_of(s.consequent);
    for (const Item& i : ItemSet(s.antecedent))
      if (auto lf = as_formula(i); lf && !right.count(lf->label)) drop(RuleKind::WL, i), changed = true;
    // (4)
    bool anchored = true;
    for (const Label& z : formula_labels(s.antecedent))
      if (!right.count(z)) anchored = false;
    if (!anchored) continue;
    for (const Item& i : ItemSet(s.antecedent)) {
      auto r = as_atom(i);
      if (!r || right.count(r->src)) continue;
      ItemSet rest = s.antecedent;
      rest.erase(i);
      auto succ = successors(rest);
      bool reached = std::any_of(right.begin(), right.end(), [&](const Label& z) { return reaches_in(succ, z, r->src); });
      if (!reached) drop(RuleKind::WL, i), changed = true;
    }
  }
  return out;
}

bool close_by_axiom(CyclicPreProof& proof, NodeId id) {
  const Sequent s = proof.at(id).sequent;
  auto ax = axiom_item(s);
  if (!ax) return false;
  bool bot = s.antecedent.count(*ax) && !s.consequent.count(*ax);
  Sequent target{{*ax}, bot ? ItemSet{} : ItemSet{*ax}};
  NodeId top = weaken_to(proof, id, target);
  proof.expand(top, make_rule(bot ? RuleKind::Bot : RuleKind::Ax, *ax));
  return true;
}

std::vector<NodeId> unwind_at(CyclicPreProof& proof, NodeId at, LabelSupply& labels, std::size_t max_steps,
                              UnwindingStats* stats) {
  std::vector<NodeId> leaves;
  std::size_t steps = 0;
  std::deque<Branch> work;
  work.push_back({at, {}, {}});
  auto tick = [&] {
    if (++steps > max_steps) throw StepBudgetExceeded();
    if (stats) stats->steps++;
  };

  while (!work.empty()) {
    Branch b = std::move(work.front());
    work.pop_front();
    const Sequent s = proof.at(b.id).sequent;
    if (stats && !is_acyclic(s)) stats->acyclic_throughout = false;
    if (close_by_axiom(proof, b.id)) continue;

    // right rules
    std::optional<LabelledFormula> principal;
    for (const auto& i : s.consequent) {
      auto lf = as_formula(i);
      if (!lf || is_atomic_formula(lf->formula)) continue;
      auto t = b.tags.find(*lf);
      if (classify(lf->formula) == FormulaClass::Iterated && t != b.tags.end() && t->second.count(0)) continue;
      principal = *lf;
      break;
    }
    if (principal) {
      tick();
      const LabelledFormula p = *principal;
      std::set<int> t;
      if (auto it = b.tags.find(p); it != b.tags.end()) t = it->second;
      RuleInstance r;
      std::vector<std::vector<std::pair<LabelledFormula, std::set<int>>>> fresh_tags;
      const Formula& f = p.formula;
      switch (f.kind()) {
        case FormulaKind::And: r = make_rule(RuleKind::AndR, p); break;
        case FormulaKind::Or: r = make_rule(RuleKind::OrR, p); break;
        case FormulaKind::Implies: r = make_rule(RuleKind::ImpR, p); break;
        case FormulaKind::Box: {
          Program a = f.program();
          switch (a.kind()) {
            case ProgramKind::Atomic: {
              LabelSet avoid = labels_of(s);
              Label y = labels.fresh(avoid);
              r = box_right(p, y);
              fresh_tags.push_back({{LabelledFormula{y, f.body()}, shifted(t, -1)}});
              break;
            }
            case ProgramKind::Seq:
              r = make_rule(RuleKind::SeqR, p);
              fresh_tags.push_back(
                  {{LabelledFormula{p.label, Formula::box(a.lhs(), Formula::box(a.rhs(), f.body()))}, shifted(t, 1)}});
              break;
            case ProgramKind::Choice:
              r = make_rule(RuleKind::ChoiceR, p);
              fresh_tags.push_back({{LabelledFormula{p.label, Formula::box(a.lhs(), f.body())}, t}});
              fresh_tags.push_back({{LabelledFormula{p.label, Formula::box(a.rhs(), f.body())}, t}});
              break;
            case ProgramKind::Star: {
              r = make_rule(RuleKind::StarR, p);
              auto unfolded = shifted(t, 1);
              unfolded.insert(1);
              fresh_tags.push_back({{LabelledFormula{p.label, f.body()}, shifted(t, -1)}});
              fresh_tags.push_back({{LabelledFormula{p.label, Formula::box(a.inner(), f)}, unfolded}});
              break;
            }
            case ProgramKind::Test:
              r = make_rule(RuleKind::TestR, p);
              fresh_tags.push_back({{LabelledFormula{p.label, f.body()}, shifted(t, -1)}});
              break;
          }
          break;
        }
        default: break;
      }
      auto ids = proof.expand(b.id, r);
      for (std::size_t k = 0; k < ids.size(); ++k) {
        Branch nb{ids[k], {}, b.applied};
        nb.tags = b.tags;
        nb.tags.erase(p);
        if (k < fresh_tags.size())
          for (const auto& [g, gt] : fresh_tags[k]) merge(nb.tags, g, gt);
        nb.tags = carry(nb.tags, proof.at(ids[k]).sequent.consequent);
        work.push_back(std::move(nb));
      }
      continue;
    }

    // left rules, consuming
    std::optional<RuleInstance> left;
    for (const auto& i : s.antecedent) {
      auto lf = as_formula(i);
      if (!lf) continue;
      const Formula& f = lf->formula;
      switch (f.kind()) {
        case FormulaKind::And: left = make_rule(RuleKind::AndL, i); break;
        case FormulaKind::Or: left = make_rule(RuleKind::OrL, i); break;
        case FormulaKind::Implies: left = make_rule(RuleKind::ImpL, i); break;
        case FormulaKind::Box:
          switch (f.program().kind()) {
            case ProgramKind::Seq: left = make_rule(RuleKind::SeqL, i); break;
            case ProgramKind::Choice: left = make_rule(RuleKind::ChoiceL, i); break;
            case ProgramKind::Star: left = make_rule(RuleKind::StarL, i); break;
            case ProgramKind::Test: left = make_rule(RuleKind::TestL, i); break;
            case ProgramKind::Atomic: break;
          }
          break;
        default: break;
      }
      if (left) break;
    }
    if (left) {
      tick();
      auto ids = proof.expand(b.id, *left);
      for (NodeId q : ids) work.push_back({q, carry(b.tags, proof.at(q).sequent.consequent), b.applied});
      continue;
    }

    // box left, principal kept until capping
    bool boxed = false;
    for (const auto& i : s.antecedent) {
      auto lf = as_formula(i);
      if (!lf || classify(lf->formula) != FormulaClass::Basic) continue;
      const std::string& a = lf->formula.program().name();
      for (const auto& j : s.antecedent) {
        auto e = as_atom(j);
        if (!e || e->src != lf->label || e->prog != a) continue;
        if (b.applied.count({*lf, e->dst})) continue;
        b.applied.insert({*lf, e->dst});
        Item add = labelled(e->dst, lf->formula.body());
        if (s.antecedent.count(add)) continue;
        tick();
        Sequent prem = s;
        prem.antecedent.insert(add);
        auto ids = proof.expand_with(b.id, box_left(i, e->dst), {prem});
        work.push_back({ids[0], b.tags, b.applied});
        boxed = true;
        break;
      }
      if (boxed) break;
    }
    if (boxed) continue;

    // capping
    Sequent target = s;
    for (const auto& i : s.antecedent) {
      auto lf = as_formula(i);
      if (!lf || classify(lf->formula) != FormulaClass::Basic) continue;
      const std::string& a = lf->formula.program().name();
      for (const auto& j : s.antecedent)
        if (auto e = as_atom(j); e && e->src == lf->label && e->prog == a) {
          target.antecedent.erase(i);
          break;
        }
    }
    NodeId top = weaken_to(proof, b.id, target);
    WeakeningResult w = apply_valid_weakenings(target);
    for (const auto& step : w.steps) top = proof.expand(top, make_rule(step.rule, step.item))[0];
    if (!close_by_axiom(proof, top)) leaves.push_back(top);
  }
  return leaves;
}

Unwinding build_capped_unwinding(const Sequent& s, std::size_t max_steps) {
  Unwinding u;
  u.origin = s;
  u.derivation.root = u.derivation.add_open(s);
  LabelSupply labels;
  unwind_at(u.derivation, u.derivation.root, labels, max_steps);
  u.open_leaves = u.derivation.open_leaves();
  return u;
}

// --- back-links

namespace {

Label rename(const Label& l, const std::map<Label, Label>& m) {
  auto it = m.find(l);
  return it == m.end() ? l : it->second;
}

Item rename(const Item& i, const std::map<Label, Label>& m) {
  if (auto r = as_atom(i)) return RelAtom{rename(r->src, m), r->prog, rename(r->dst, m)};
  const auto& lf = std::get<LabelledFormula>(i);
  return LabelledFormula{rename(lf.label, m), lf.formula};
}

ItemSet rename(const ItemSet& s, const std::map<Label, Label>& m) {
  ItemSet out;
  for (const auto& i : s) out.insert(rename(i, m));
  return out;
}

// Label-blind description of the items a label takes part in.
std::map<Label, std::vector<std::string>> signatures(const Sequent& s) {
  std::map<Label, std::vector<std::string>> out;
  auto add = [&](const ItemSet& side, const char* tag) {
    for (const auto& i : side) {
      if (auto r = as_atom(i)) {
        if (r->src == r->dst) {
          out[r->src].push_back(std::string(tag) + "loop " + r->prog);
        } else {
          out[r->src].push_back(std::string(tag) + "src " + r->prog);
          out[r->dst].push_back(std::string(tag) + "dst " + r->prog);
        }
      } else {
        const auto& lf = std::get<LabelledFormula>(i);
        out[lf.label].push_back(std::string(tag) + to_string(lf.formula));
      }
    }
  };
  add(s.antecedent, "L ");
  add(s.consequent, "R ");
  for (auto& [_, v] : out) std::sort(v.begin(), v.end());
  return out;
}

}  // namespace

std::optional<std::map<Label, Label>> match_up_to_renaming(const Sequent& companion, const Sequent& leaf) {
  if (companion.antecedent.size() != leaf.antecedent.size() || companion.consequent.size() != leaf.consequent.size())
    return std::nullopt;
  auto sh = signatures(companion);
  auto sl = signatures(leaf);
  if (sh.size() != sl.size()) return std::nullopt;
  std::vector<Label> hs;
  std::map<Label, std::vector<Label>> cands;
  for (const auto& [h, sig] : sh) {
    hs.push_back(h);
    for (const auto& [l, lsig] : sl)
      if (lsig == sig) cands[h].push_back(l);
    if (cands[h].empty()) return std::nullopt;
  }
  std::sort(hs.begin(), hs.end(), [&](const Label& a, const Label& b) { return cands[a].size() < cands[b].size(); });

  std::map<Label, Label> m;
  std::set<Label> used;
  std::function<bool(std::size_t)> go = [&](std::size_t k) -> bool {
    if (k == hs.size())
      return rename(companion.antecedent, m) == leaf.antecedent && rename(companion.consequent, m) == leaf.consequent;
    const Label& h = hs[k];
    for (const Label& l : cands[h]) {
      if (used.count(l)) continue;
      m[h] = l;
      used.insert(l);
      if (go(k + 1)) return true;
      used.erase(l);
      m.erase(h);
    }
    return false;
  };
  if (!go(0)) return std::nullopt;
  return m;
}

std::optional<Backlink> backlink_match(const Sequent& leaf, const std::vector<std::pair<NodeId, Sequent>>& history) {
  for (const auto& [id, s] : history)
    if (auto m = match_up_to_renaming(s, leaf)) return Backlink{id, *m};
  return std::nullopt;
}

void attach_backlink(CyclicPreProof& proof, NodeId leaf, const Backlink& link, LabelSupply& labels) {
  const Sequent target = proof.at(link.companion).sequent;
  std::vector<std::pair<Label, Label>> pending;
  for (const auto& [h, l] : link.renaming)
    if (h != l) pending.emplace_back(h, l);
  NodeId cur = leaf;
  while (!pending.empty()) {
    Sequent s = proof.at(cur).sequent;
    LabelSet present = labels_of(s);
    auto it = std::find_if(pending.begin(), pending.end(), [&](const auto& hl) { return !present.count(hl.first); });
    if (it != pending.end()) {
      auto [h, l] = *it;
      pending.erase(it);
      cur = proof.expand_with(cur, subst_rule(h, l), {subst_label(s, l, h)})[0];
      continue;
    }
    // every target label is in use: park one on a temporary
    auto& [h, l] = pending.front();
    LabelSet avoid = present;
    for (const auto& x : labels_of(target)) avoid.insert(x);
    Label t = labels.fresh(avoid);
    cur = proof.expand_with(cur, subst_rule(t, l), {subst_label(s, l, t)})[0];
    l = t;
  }
  if (proof.at(cur).sequent != target) throw std::logic_error("back-link renaming did not reach the companion");
  proof.make_bud(cur, link.companion);
}

}  // namespace pdl
