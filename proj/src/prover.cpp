#include <deque>
#include <map>
#include <set>

#include "pdl/search.hpp"
#include "pdl/traces.hpp"

namespace pdl {

namespace {

void note_parents(const CyclicPreProof& p, std::map<NodeId, NodeId>& parents, NodeId from, NodeId extra) {
  for (auto it = p.nodes.lower_bound(from); it != p.nodes.end(); ++it)
    for (NodeId q : it->second.premises) parents[q] = it->first;
  for (NodeId q : p.at(extra).premises) parents[q] = extra;
}

std::vector<NodeId> path_to(const std::map<NodeId, NodeId>& parents, NodeId id) {
  std::vector<NodeId> out{id};
  for (auto it = parents.find(id); it != parents.end(); it = parents.find(it->second)) out.push_back(it->second);
  return out;
}

}  // namespace

Countermodel template_to_model(const Template& t) {
  LabelSet ls = labels_of(t.gamma);
  for (const auto& l : labels_of(t.delta)) ls.insert(l);
  Countermodel cm;
  std::map<Label, int> index;
  for (const auto& l : ls) {
    index[l] = cm.model.size();
    cm.model.states.push_back(l.name);
    cm.valuation[l] = index[l];
  }
  for (const auto& i : t.gamma) {
    if (auto r = as_atom(i)) {
      cm.model.progs[r->prog].insert({index[r->src], index[r->dst]});
    } else {
      const auto& lf = std::get<LabelledFormula>(i);
      if (lf.formula.kind() == FormulaKind::Atom) cm.model.props[lf.formula.name()].insert(index[lf.label]);
    }
  }
  return cm;
}

SearchOutcome prove_test_free(const Sequent& goal, const SearchOptions& opts) {
  if (!is_test_free(goal)) throw NotTestFree();
  if (!is_acyclic(goal)) throw NotAcyclic();

  SearchOutcome out;
  CyclicPreProof proof;
  proof.root = proof.add_open(goal);
  LabelSupply labels;
  std::map<NodeId, NodeId> parents;
  std::vector<std::pair<NodeId, Sequent>> history;
  std::set<NodeId> companions, unwound;
  std::deque<NodeId> queue{proof.root};

  auto unknown = [&](std::string why) {
    out.kind = SearchOutcome::Kind::Unknown;
    out.reason = std::move(why);
    return out;
  };

  while (!queue.empty()) {
    NodeId id = queue.front();
    queue.pop_front();
    const Sequent s = proof.at(id).sequent;
    bool capped = id != proof.root || unwound.count(id);

    if (capped && is_atomic_leaf(s)) {
      Template t;
      for (NodeId n : path_to(parents, id)) {
        const Sequent& ns = proof.at(n).sequent;
        t.gamma.insert(ns.antecedent.begin(), ns.antecedent.end());
        t.delta.insert(ns.consequent.begin(), ns.consequent.end());
      }
      Countermodel cm = template_to_model(t);
      if (satisfies_sequent(cm.model, cm.valuation, goal))
        return unknown("template from leaf " + to_string(s) + " does not falsify the goal");
      out.kind = SearchOutcome::Kind::Countermodel;
      out.countermodel = std::move(cm);
      return out;
    }

    if (id != proof.root) {
      std::set<NodeId> ancestors;
      for (NodeId n : path_to(parents, id)) ancestors.insert(n);
      std::vector<std::pair<NodeId, Sequent>> candidates;
      for (const auto& h : history)
        if (ancestors.count(h.first) || companions.count(h.first)) candidates.push_back(h);
      if (auto link = backlink_match(s, candidates)) {
        NodeId before = proof.next_id();
        attach_backlink(proof, id, *link, labels);
        note_parents(proof, parents, before, id);
        companions.insert(link->companion);
        continue;
      }
    }

    if (out.unwindings >= opts.budget.max_iters) return unknown("iteration budget exhausted");
    if (history.size() >= opts.budget.max_history) return unknown("history budget exhausted");
    history.emplace_back(id, s);
    unwound.insert(id);
    ++out.unwindings;
    NodeId before = proof.next_id();
    std::vector<NodeId> leaves;
    try {
      leaves = unwind_at(proof, id, labels, opts.budget.max_steps);
    } catch (const StepBudgetExceeded&) {
      return unknown("unwinding step budget exhausted");
    }
    note_parents(proof, parents, before, id);
    if (opts.on_unwinding) {
      UnwindingReport rep{s, {}};
      for (NodeId l : leaves) rep.leaves.push_back(proof.at(l).sequent);
      opts.on_unwinding(rep);
    }
    for (NodeId l : leaves) queue.push_back(l);
  }

  auto errs = check_pre_proof(proof);
  if (!errs.empty()) return unknown("constructed pre-proof rejected: " + to_string(errs.front()));
  auto gtc = check_gtc(proof);
  if (!gtc.accepted) return unknown("constructed pre-proof fails the trace condition");
  out.kind = SearchOutcome::Kind::Proof;
  out.proof = std::move(proof);
  return out;
}

// --- search trees

namespace {

bool non_atomic(const Formula& f) { return f.kind() != FormulaKind::Atom && f.kind() != FormulaKind::Bottom; }

class Scheduler {
 public:
  void observe(const Sequent& s) {
    for (const auto* side : {&s.antecedent, &s.consequent})
      for (const auto& i : *side)
        if (auto lf = as_formula(i); lf && non_atomic(lf->formula) && seen_.insert(*lf).second) order_.push_back(*lf);
  }
  std::optional<LabelledFormula> next() {
    if (order_.empty()) return std::nullopt;
    for (;;) {
      if (pos_ < round_ && pos_ < order_.size()) return order_[pos_++];
      ++round_;
      pos_ = 0;
    }
  }

 private:
  std::set<LabelledFormula> seen_;
  std::vector<LabelledFormula> order_;
  std::size_t round_ = 1, pos_ = 0;
};

RuleKind left_rule(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::And: return RuleKind::AndL;
    case FormulaKind::Or: return RuleKind::OrL;
    case FormulaKind::Implies: return RuleKind::ImpL;
    default: break;
  }
  switch (f.program().kind()) {
    case ProgramKind::Seq: return RuleKind::SeqL;
    case ProgramKind::Choice: return RuleKind::ChoiceL;
    case ProgramKind::Test: return RuleKind::TestL;
    case ProgramKind::Star: return RuleKind::StarL;
    case ProgramKind::Atomic: return RuleKind::BoxL;
  }
  return RuleKind::Open;
}

RuleKind right_rule(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::And: return RuleKind::AndR;
    case FormulaKind::Or: return RuleKind::OrR;
    case FormulaKind::Implies: return RuleKind::ImpR;
    default: break;
  }
  switch (f.program().kind()) {
    case ProgramKind::Seq: return RuleKind::SeqR;
    case ProgramKind::Choice: return RuleKind::ChoiceR;
    case ProgramKind::Test: return RuleKind::TestR;
    case ProgramKind::Star: return RuleKind::StarR;
    case ProgramKind::Atomic: return RuleKind::BoxR;
  }
  return RuleKind::Open;
}

// Applies the scheduled formula at an open leaf; returns the new open
// nodes (the leaf itself if nothing applies).
std::vector<NodeId> expand_leaf(CyclicPreProof& t, NodeId id, const LabelledFormula& f, LabelSupply& labels) {
  const Sequent s = t.at(id).sequent;
  Item fi{f};
  bool left = s.antecedent.count(fi) > 0;
  if (!left && !s.consequent.count(fi)) return {id};
  if (left && f.formula.is_box() && f.formula.program().kind() == ProgramKind::Atomic) {
    NodeId cur = id;
    const std::string& a = f.formula.program().name();
    for (const auto& j : s.antecedent) {
      auto e = as_atom(j);
      if (!e || e->src != f.label || e->prog != a) continue;
      Sequent cs = t.at(cur).sequent;
      Item add = labelled(e->dst, f.formula.body());
      if (cs.antecedent.count(add)) continue;
      cs.antecedent.insert(add);
      cur = t.expand_with(cur, box_left(fi, e->dst), {cs})[0];
    }
    return {cur};
  }
  if (!left && f.formula.is_box() && f.formula.program().kind() == ProgramKind::Atomic) {
    Label y = labels.fresh(labels_of(s));
    return t.expand(id, box_right(fi, y));
  }
  RuleInstance r = make_rule(left ? left_rule(f.formula) : right_rule(f.formula), fi);
  auto prems = apply_rule(s, r);
  bool changed = false;
  for (auto& p : prems) {
    (left ? p.antecedent : p.consequent).insert(fi);
    if (p != s) changed = true;
  }
  if (!changed) return {id};
  return t.expand_with(id, r, prems);
}

SearchTree grow(const Sequent& s, std::size_t depth, const std::vector<LabelledFormula>* fixed) {
  SearchTree out;
  out.tree.root = out.tree.add_open(s);
  LabelSupply labels;
  Scheduler sched;
  sched.observe(s);
  for (std::size_t i = 0; i < depth; ++i) {
    for (NodeId l : out.tree.open_leaves()) close_by_axiom(out.tree, l);
    std::optional<LabelledFormula> f = fixed ? std::optional<LabelledFormula>((*fixed)[i]) : sched.next();
    if (!f) break;
    for (NodeId l : out.tree.open_leaves())
      for (NodeId n : expand_leaf(out.tree, l, *f, labels))
        if (!fixed) sched.observe(out.tree.at(n).sequent);
  }
  for (NodeId l : out.tree.open_leaves()) close_by_axiom(out.tree, l);
  for (NodeId l : out.tree.open_leaves()) {
    const Sequent& ls = out.tree.at(l).sequent;
    out.templates.push_back({ls.antecedent, ls.consequent});
  }
  return out;
}

}  // namespace

SearchTree expand_search_tree(const Sequent& s, std::size_t depth) { return grow(s, depth, nullptr); }

SearchTree expand_search_tree(const Sequent& s, const std::vector<LabelledFormula>& schedule) {
  return grow(s, schedule.size(), &schedule);
}

}  // namespace pdl
