#include "pdl/kernel.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <set>

namespace pdl {

namespace {

struct RuleInfo {
  RuleKind kind;
  std::string_view name;
  int arity;
  PrincipalSide side;
};

constexpr std::array<RuleInfo, 24> kRules{{
    {RuleKind::Ax, "Ax", 0, PrincipalSide::Both},
    {RuleKind::Bot, "Bot", 0, PrincipalSide::Left},
    {RuleKind::WL, "WL", 1, PrincipalSide::Left},
    {RuleKind::WR, "WR", 1, PrincipalSide::Right},
    {RuleKind::AndL, "AndL", 1, PrincipalSide::Left},
    {RuleKind::AndR, "AndR", 2, PrincipalSide::Right},
    {RuleKind::OrL, "OrL", 2, PrincipalSide::Left},
    {RuleKind::OrR, "OrR", 1, PrincipalSide::Right},
    {RuleKind::ImpL, "ImpL", 2, PrincipalSide::Left},
    {RuleKind::ImpR, "ImpR", 1, PrincipalSide::Right},
    {RuleKind::BoxL, "BoxL", 1, PrincipalSide::Left},
    {RuleKind::BoxR, "BoxR", 1, PrincipalSide::Right},
    {RuleKind::SeqL, "SeqL", 1, PrincipalSide::Left},
    {RuleKind::SeqR, "SeqR", 1, PrincipalSide::Right},
    {RuleKind::ChoiceL, "ChoiceL", 1, PrincipalSide::Left},
    {RuleKind::ChoiceR, "ChoiceR", 2, PrincipalSide::Right},
    {RuleKind::TestL, "TestL", 2, PrincipalSide::Left},
    {RuleKind::TestR, "TestR", 1, PrincipalSide::Right},
    {RuleKind::StarL, "StarL", 1, PrincipalSide::Left},
    {RuleKind::StarR, "StarR", 2, PrincipalSide::Right},
    {RuleKind::Subst, "Subst", 1, PrincipalSide::None},
    {RuleKind::Cut, "Cut", 2, PrincipalSide::None},
    {RuleKind::Bud, "Bud", 0, PrincipalSide::None},
    {RuleKind::Open, "Open", 0, PrincipalSide::None},
}};

const RuleInfo& info(RuleKind k) { return kRules[static_cast<std::size_t>(k)]; }

[[noreturn]] void fail(RuleErrorKind k, std::string detail) {
  throw RuleException(RuleError{k, std::nullopt, std::move(detail)});
}

ItemSet without(ItemSet s, const Item& i) {
  s.erase(i);
  return s;
}

ItemSet with(ItemSet s, std::initializer_list<Item> items) {
  for (const auto& i : items) s.insert(i);
  return s;
}

// The labelled principal with the expected top connective.
const LabelledFormula& principal_formula(const Sequent& s, const RuleInstance& r, FormulaKind fk,
                                         std::optional<ProgramKind> pk = std::nullopt) {
  if (!r.principal) fail(RuleErrorKind::PrincipalMissing, std::string(rule_name(r.kind)) + " needs a principal");
  const ItemSet& side = info(r.kind).side == PrincipalSide::Left ? s.antecedent : s.consequent;
  if (!side.count(*r.principal))
    fail(RuleErrorKind::PrincipalMissing, to_string(*r.principal) + " not in " +
                                              (info(r.kind).side == PrincipalSide::Left ? "antecedent" : "consequent"));
  const auto* lf = as_formula(*r.principal);
  if (!lf || lf->formula.kind() != fk || (pk && lf->formula.program().kind() != *pk))
    fail(RuleErrorKind::SideConditionFailed,
         std::string(rule_name(r.kind)) + " does not apply to " + to_string(*r.principal));
  return *lf;
}

}  // namespace

std::string_view rule_name(RuleKind k) { return info(k).name; }

std::optional<RuleKind> rule_from_name(std::string_view name) {
  for (const auto& r : kRules)
    if (r.name == name) return r.kind;
  return std::nullopt;
}

int rule_arity(RuleKind k) { return info(k).arity; }
PrincipalSide principal_side(RuleKind k) { return info(k).side; }

RuleInstance make_rule(RuleKind k, std::optional<Item> principal) {
  RuleInstance r;
  r.kind = k;
  r.principal = std::move(principal);
  return r;
}

RuleInstance box_left(const Item& principal, const Label& successor) {
  RuleInstance r = make_rule(RuleKind::BoxL, principal);
  r.successor = successor;
  return r;
}

RuleInstance box_right(const Item& principal, const Label& fresh) {
  RuleInstance r = make_rule(RuleKind::BoxR, principal);
  r.fresh = fresh;
  return r;
}

RuleInstance subst_rule(const Label& from, const Label& to) {
  RuleInstance r = make_rule(RuleKind::Subst);
  r.from = from;
  r.to = to;
  return r;
}

RuleInstance cut_rule(const Item& cut) {
  RuleInstance r = make_rule(RuleKind::Cut);
  r.cut = cut;
  return r;
}

std::string_view to_string(RuleErrorKind k) {
  switch (k) {
    case RuleErrorKind::PrincipalMissing: return "PrincipalMissing";
    case RuleErrorKind::FreshnessViolated: return "FreshnessViolated";
    case RuleErrorKind::SideConditionFailed: return "SideConditionFailed";
    case RuleErrorKind::PremiseMismatch: return "PremiseMismatch";
    case RuleErrorKind::ArityMismatch: return "ArityMismatch";
    case RuleErrorKind::CompanionMismatch: return "CompanionMismatch";
    case RuleErrorKind::OpenLeaf: return "OpenLeaf";
    case RuleErrorKind::Structure: return "Structure";
  }
  return "?";
}

std::string to_string(const RuleError& e) {
  std::string out(to_string(e.kind));
  if (e.node) out += " at node " + std::to_string(*e.node);
  return out + ": " + e.detail;
}

std::vector<Sequent> apply_rule(const Sequent& s, const RuleInstance& r) {
  const ItemSet& G = s.antecedent;
  const ItemSet& D = s.consequent;
  switch (r.kind) {
    case RuleKind::Ax: {
      if (r.principal) {
        if (!G.count(*r.principal) || !D.count(*r.principal))
          fail(RuleErrorKind::PrincipalMissing, to_string(*r.principal) + " not on both sides");
      } else {
        bool shared = std::any_of(G.begin(), G.end(), [&](const Item& i) { return D.count(i) > 0; });
        if (!shared) fail(RuleErrorKind::SideConditionFailed, "Ax needs an item on both sides");
      }
      return {};
    }
    case RuleKind::Bot: {
      principal_formula(s, r, FormulaKind::Bottom);
      return {};
    }
    case RuleKind::WL:
    case RuleKind::WR: {
      if (!r.principal) fail(RuleErrorKind::PrincipalMissing, "weakening needs a principal");
      bool left = r.kind == RuleKind::WL;
      const ItemSet& side = left ? G : D;
      if (!side.count(*r.principal)) fail(RuleErrorKind::PrincipalMissing, to_string(*r.principal) + " not present");
      return {left ? Sequent{without(G, *r.principal), D} : Sequent{G, without(D, *r.principal)}};
    }
    case RuleKind::AndL: {
      const auto& p = principal_formula(s, r, FormulaKind::And);
      return {{with(without(G, p), {labelled(p.label, p.formula.lhs()), labelled(p.label, p.formula.rhs())}), D}};
    }
    case RuleKind::AndR: {
      const auto& p = principal_formula(s, r, FormulaKind::And);
      ItemSet rest = without(D, p);
      return {{G, with(rest, {labelled(p.label, p.formula.lhs())})},
              {G, with(rest, {labelled(p.label, p.formula.rhs())})}};
    }
    case RuleKind::OrL: {
      const auto& p = principal_formula(s, r, FormulaKind::Or);
      ItemSet rest = without(G, p);
      return {{with(rest, {labelled(p.label, p.formula.lhs())}), D},
              {with(rest, {labelled(p.label, p.formula.rhs())}), D}};
    }
    case RuleKind::OrR: {
      const auto& p = principal_formula(s, r, FormulaKind::Or);
      return {{G, with(without(D, p), {labelled(p.label, p.formula.lhs()), labelled(p.label, p.formula.rhs())})}};
    }
    case RuleKind::ImpL: {
      const auto& p = principal_formula(s, r, FormulaKind::Implies);
      ItemSet rest = without(G, p);
      return {{rest, with(D, {labelled(p.label, p.formula.lhs())})},
              {with(rest, {labelled(p.label, p.formula.rhs())}), D}};
    }
    case RuleKind::ImpR: {
      const auto& p = principal_formula(s, r, FormulaKind::Implies);
      return {{with(G, {labelled(p.label, p.formula.lhs())}),
               with(without(D, p), {labelled(p.label, p.formula.rhs())})}};
    }
    case RuleKind::BoxL: {
      const auto& p = principal_formula(s, r, FormulaKind::Box, ProgramKind::Atomic);
      if (!r.successor) fail(RuleErrorKind::SideConditionFailed, "BoxL needs a successor label");
      Item edge = RelAtom{p.label, p.formula.program().name(), *r.successor};
      if (!G.count(edge)) fail(RuleErrorKind::SideConditionFailed, "BoxL needs " + to_string(edge) + " in antecedent");
      return {{with(without(G, p), {labelled(*r.successor, p.formula.body())}), D}};
    }
    case RuleKind::BoxR: {
      const auto& p = principal_formula(s, r, FormulaKind::Box, ProgramKind::Atomic);
      if (!r.fresh) fail(RuleErrorKind::SideConditionFailed, "BoxR needs a fresh label");
      if (labels_of(s).count(*r.fresh))
        fail(RuleErrorKind::FreshnessViolated, "label " + r.fresh->name + " occurs in the conclusion");
      return {{with(G, {RelAtom{p.label, p.formula.program().name(), *r.fresh}}),
               with(without(D, p), {labelled(*r.fresh, p.formula.body())})}};
    }
    case RuleKind::SeqL:
    case RuleKind::SeqR: {
      const auto& p = principal_formula(s, r, FormulaKind::Box, ProgramKind::Seq);
      Program a = p.formula.program();
      Item n = labelled(p.label, Formula::box(a.lhs(), Formula::box(a.rhs(), p.formula.body())));
      if (r.kind == RuleKind::SeqL) return {{with(without(G, p), {n}), D}};
      return {{G, with(without(D, p), {n})}};
    }
    case RuleKind::ChoiceL: {
      const auto& p = principal_formula(s, r, FormulaKind::Box, ProgramKind::Choice);
      Program a = p.formula.program();
      return {{with(without(G, p), {labelled(p.label, Formula::box(a.lhs(), p.formula.body())),
                                    labelled(p.label, Formula::box(a.rhs(), p.formula.body()))}),
               D}};
    }
    case RuleKind::ChoiceR: {
      const auto& p = principal_formula(s, r, FormulaKind::Box, ProgramKind::Choice);
      Program a = p.formula.program();
      ItemSet rest = without(D, p);
      return {{G, with(rest, {labelled(p.label, Formula::box(a.lhs(), p.formula.body()))})},
              {G, with(rest, {labelled(p.label, Formula::box(a.rhs(), p.formula.body()))})}};
    }
    case RuleKind::TestL: {
      const auto& p = principal_formula(s, r, FormulaKind::Box, ProgramKind::Test);
      ItemSet rest = without(G, p);
      return {{rest, with(D, {labelled(p.label, p.formula.program().formula())})},
              {with(rest, {labelled(p.label, p.formula.body())}), D}};
    }
    case RuleKind::TestR: {
      const auto& p = principal_formula(s, r, FormulaKind::Box, ProgramKind::Test);
      return {{with(G, {labelled(p.label, p.formula.program().formula())}),
               with(without(D, p), {labelled(p.label, p.formula.body())})}};
    }
    case RuleKind::StarL: {
      const auto& p = principal_formula(s, r, FormulaKind::Box, ProgramKind::Star);
      Program a = p.formula.program().inner();
      return {{with(without(G, p), {labelled(p.label, p.formula.body()),
                                    labelled(p.label, Formula::box(a, p.formula))}),
               D}};
    }
    case RuleKind::StarR: {
      const auto& p = principal_formula(s, r, FormulaKind::Box, ProgramKind::Star);
      Program a = p.formula.program().inner();
      ItemSet rest = without(D, p);
      return {{G, with(rest, {labelled(p.label, p.formula.body())})},
              {G, with(rest, {labelled(p.label, Formula::box(a, p.formula))})}};
    }
    case RuleKind::Subst: {
      if (!r.from || !r.to) fail(RuleErrorKind::SideConditionFailed, "Subst needs from and to");
      if (*r.from != *r.to && labels_of(s).count(*r.from))
        fail(RuleErrorKind::SideConditionFailed, "Subst premise is not determined: " + r.from->name + " occurs");
      return {subst_label(s, *r.to, *r.from)};
    }
    case RuleKind::Cut: {
      if (!r.cut) fail(RuleErrorKind::SideConditionFailed, "Cut needs a cut item");
      return {{G, with(D, {*r.cut})}, {with(G, {*r.cut}), D}};
    }
    case RuleKind::Bud:
    case RuleKind::Open: return {};
  }
  return {};
}

const DerivationNode& CyclicPreProof::at(NodeId id) const {
  auto it = nodes.find(id);
  if (it == nodes.end()) throw std::out_of_range("no node " + std::to_string(id));
  return it->second;
}

DerivationNode& CyclicPreProof::at(NodeId id) {
  auto it = nodes.find(id);
  if (it == nodes.end()) throw std::out_of_range("no node " + std::to_string(id));
  return it->second;
}

NodeId CyclicPreProof::add_open(const Sequent& s) {
  NodeId id = next_id();
  DerivationNode n;
  n.id = id;
  n.sequent = s;
  nodes.emplace(id, std::move(n));
  return id;
}

std::vector<NodeId> CyclicPreProof::expand(NodeId id, const RuleInstance& r) {
  return expand_with(id, r, apply_rule(at(id).sequent, r));
}

std::vector<NodeId> CyclicPreProof::expand_with(NodeId id, const RuleInstance& r, const std::vector<Sequent>& premises) {
  std::vector<NodeId> ids;
  for (const auto& s : premises) ids.push_back(add_open(s));
  DerivationNode& n = at(id);
  n.rule = r;
  n.premises = ids;
  n.companion.reset();
  return ids;
}

void CyclicPreProof::make_bud(NodeId id, NodeId companion) {
  DerivationNode& n = at(id);
  n.rule = make_rule(RuleKind::Bud);
  n.premises.clear();
  n.companion = companion;
}

std::vector<NodeId> CyclicPreProof::preorder() const {
  std::vector<NodeId> out;
  if (!has(root)) return out;
  std::set<NodeId> seen;
  std::vector<NodeId> stack{root};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    if (!seen.insert(id).second || !has(id)) continue;
    out.push_back(id);
    const auto& ps = at(id).premises;
    for (auto it = ps.rbegin(); it != ps.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::vector<NodeId> CyclicPreProof::open_leaves() const {
  std::vector<NodeId> out;
  for (NodeId id : preorder())
    if (at(id).is_open()) out.push_back(id);
  return out;
}

std::vector<NodeId> CyclicPreProof::buds() const {
  std::vector<NodeId> out;
  for (NodeId id : preorder())
    if (at(id).is_bud()) out.push_back(id);
  return out;
}

std::map<NodeId, NodeId> CyclicPreProof::companions() const {
  std::map<NodeId, NodeId> out;
  for (const auto& [id, n] : nodes)
    if (n.is_bud() && n.companion) out[id] = *n.companion;
  return out;
}

NodeId weaken_to(CyclicPreProof& p, NodeId id, const Sequent& target) {
  const Sequent start = p.at(id).sequent;
  for (const auto& i : target.antecedent)
    if (!start.antecedent.count(i)) throw std::invalid_argument("weaken_to: " + to_string(i) + " not in antecedent");
  for (const auto& i : target.consequent)
    if (!start.consequent.count(i)) throw std::invalid_argument("weaken_to: " + to_string(i) + " not in consequent");
  NodeId cur = id;
  for (const auto& i : start.antecedent)
    if (!target.antecedent.count(i)) cur = p.expand(cur, make_rule(RuleKind::WL, i))[0];
  for (const auto& i : start.consequent)
    if (!target.consequent.count(i)) cur = p.expand(cur, make_rule(RuleKind::WR, i))[0];
  return cur;
}

std::map<NodeId, NodeId> graft(CyclicPreProof& into, NodeId leaf, const CyclicPreProof& piece) {
  const DerivationNode& target = into.at(leaf);
  if (!target.is_open()) throw std::invalid_argument("graft target is not an open leaf");
  if (target.sequent != piece.at(piece.root).sequent)
    throw std::invalid_argument("graft sequent mismatch: " + to_string(target.sequent) + " vs " +
                                to_string(piece.at(piece.root).sequent));
  std::map<NodeId, NodeId> ids;
  NodeId next = into.next_id();
  for (NodeId id : piece.preorder()) ids[id] = id == piece.root ? leaf : next++;
  for (const auto& [old, fresh] : ids) {
    DerivationNode n = piece.at(old);
    n.id = fresh;
    for (auto& p : n.premises) p = ids.at(p);
    if (n.companion) n.companion = ids.at(*n.companion);
    into.nodes[fresh] = std::move(n);
  }
  return ids;
}

namespace {

RuleError node_error(NodeId id, RuleErrorKind k, std::string detail) { return RuleError{k, id, std::move(detail)}; }

// Items of `premise` beyond `conclusion` must be exactly the rule's new
// items; everything in the conclusion except the consumable items must
// persist.
std::optional<std::string> compare_side(const ItemSet& conclusion, const ItemSet& canonical, const ItemSet& premise,
                                        const ItemSet& consumable, const ItemSet& must_drop) {
  for (const auto& i : canonical)
    if (!conclusion.count(i) && !premise.count(i)) return "missing " + to_string(i);
  for (const auto& i : premise)
    if (!conclusion.count(i) && !canonical.count(i)) return "unexpected " + to_string(i);
  for (const auto& i : conclusion)
    if (!consumable.count(i) && !premise.count(i)) return "dropped " + to_string(i);
  for (const auto& i : must_drop)
    if (premise.count(i) && !canonical.count(i)) return "kept " + to_string(i);
  return std::nullopt;
}

std::string mismatch(const Sequent& expected, const Sequent& found, const std::string& why) {
  return why + "; expected " + to_string(expected) + ", found " + to_string(found);
}

}  // namespace

std::optional<RuleError> check_node(const CyclicPreProof& p, NodeId id) {
  if (!p.has(id)) return RuleError{RuleErrorKind::Structure, id, "unknown node"};
  const DerivationNode& n = p.at(id);
  const RuleInstance& r = n.rule;

  if (r.kind == RuleKind::Bud) {
    if (!n.premises.empty()) return node_error(id, RuleErrorKind::ArityMismatch, "bud with premises");
    if (!n.companion) return node_error(id, RuleErrorKind::CompanionMismatch, "bud without companion");
    if (!p.has(*n.companion))
      return node_error(id, RuleErrorKind::CompanionMismatch, "companion " + std::to_string(*n.companion) + " missing");
    const DerivationNode& c = p.at(*n.companion);
    if (c.is_bud() || c.is_open())
      return node_error(id, RuleErrorKind::CompanionMismatch, "companion is not an internal node");
    if (c.sequent != n.sequent)
      return node_error(id, RuleErrorKind::CompanionMismatch,
                        "companion sequent mismatch: " + to_string(c.sequent) + " vs " + to_string(n.sequent));
    return std::nullopt;
  }
  if (n.companion) return node_error(id, RuleErrorKind::Structure, "companion on a non-bud node");
  if (r.kind == RuleKind::Open) return node_error(id, RuleErrorKind::OpenLeaf, "open leaf");
  if (static_cast<int>(n.premises.size()) != rule_arity(r.kind))
    return node_error(id, RuleErrorKind::ArityMismatch,
                      std::string(rule_name(r.kind)) + " expects " + std::to_string(rule_arity(r.kind)) +
                          " premises, found " + std::to_string(n.premises.size()));
  for (NodeId q : n.premises)
    if (!p.has(q)) return node_error(id, RuleErrorKind::Structure, "premise " + std::to_string(q) + " missing");

  std::vector<Sequent> found;
  for (NodeId q : n.premises) found.push_back(p.at(q).sequent);

  if (r.kind == RuleKind::Subst) {
    if (!r.from || !r.to) return node_error(id, RuleErrorKind::SideConditionFailed, "Subst needs from and to");
    Sequent image = subst_label(found[0], *r.from, *r.to);
    if (image != n.sequent)
      return node_error(id, RuleErrorKind::PremiseMismatch,
                        mismatch(n.sequent, image, "premise renamed " + r.from->name + " to " + r.to->name));
    return std::nullopt;
  }
  if (r.kind == RuleKind::Cut) {
    if (!r.cut) return node_error(id, RuleErrorKind::SideConditionFailed, "Cut needs a cut item");
    const Sequent& l = found[0];
    const Sequent& rt = found[1];
    if (!l.consequent.count(*r.cut) || !rt.antecedent.count(*r.cut))
      return node_error(id, RuleErrorKind::PremiseMismatch, "cut item " + to_string(*r.cut) + " not in premises");
    auto uni = [](ItemSet a, const ItemSet& b) {
      a.insert(b.begin(), b.end());
      return a;
    };
    ItemSet ante1 = uni(l.antecedent, without(rt.antecedent, *r.cut));
    ItemSet ante2 = uni(l.antecedent, rt.antecedent);
    ItemSet cons1 = uni(without(l.consequent, *r.cut), rt.consequent);
    ItemSet cons2 = uni(l.consequent, rt.consequent);
    bool ok = (n.sequent.antecedent == ante1 || n.sequent.antecedent == ante2) &&
              (n.sequent.consequent == cons1 || n.sequent.consequent == cons2);
    if (!ok)
      return node_error(id, RuleErrorKind::PremiseMismatch,
                        "Cut conclusion is not the union of premise contexts: " + to_string(n.sequent));
    return std::nullopt;
  }

  std::vector<Sequent> canonical;
  try {
    canonical = apply_rule(n.sequent, r);
  } catch (const RuleException& e) {
    RuleError err = e.error();
    err.node = id;
    return err;
  }
  ItemSet consumable_l, consumable_r, drop_l, drop_r;
  if (r.principal) {
    PrincipalSide side = principal_side(r.kind);
    if (side == PrincipalSide::Left) consumable_l.insert(*r.principal);
    if (side == PrincipalSide::Right) consumable_r.insert(*r.principal);
    if (r.kind == RuleKind::WL) drop_l.insert(*r.principal);
    if (r.kind == RuleKind::WR) drop_r.insert(*r.principal);
  }
  if (r.kind == RuleKind::BoxL && r.principal && r.successor) {
    const auto& lf = std::get<LabelledFormula>(*r.principal);
    consumable_l.insert(RelAtom{lf.label, lf.formula.program().name(), *r.successor});
  }
  for (std::size_t i = 0; i < canonical.size(); ++i) {
    if (auto why = compare_side(n.sequent.antecedent, canonical[i].antecedent, found[i].antecedent, consumable_l, drop_l))
      return node_error(id, RuleErrorKind::PremiseMismatch,
                        mismatch(canonical[i], found[i], "premise " + std::to_string(i) + " antecedent " + *why));
    if (auto why = compare_side(n.sequent.consequent, canonical[i].consequent, found[i].consequent, consumable_r, drop_r))
      return node_error(id, RuleErrorKind::PremiseMismatch,
                        mismatch(canonical[i], found[i], "premise " + std::to_string(i) + " consequent " + *why));
  }
  return std::nullopt;
}

std::vector<RuleError> check_pre_proof(const CyclicPreProof& p, bool allow_open) {
  std::vector<RuleError> errs;
  if (p.nodes.empty() || !p.has(p.root)) {
    errs.push_back({RuleErrorKind::Structure, std::nullopt, "no root"});
    return errs;
  }
  // Tree shape: every node reached from the root exactly once.
  std::map<NodeId, int> parents;
  std::vector<NodeId> stack{p.root};
  std::set<NodeId> seen{p.root};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    for (NodeId q : p.at(id).premises) {
      if (!p.has(q)) continue;
      if (++parents[q] > 1 || q == p.root) {
        errs.push_back({RuleErrorKind::Structure, q, "node has more than one parent"});
        continue;
      }
      if (seen.insert(q).second) stack.push_back(q);
    }
  }
  for (const auto& [id, n] : p.nodes)
    if (!seen.count(id)) errs.push_back({RuleErrorKind::Structure, id, "node unreachable from root"});
  for (NodeId id : seen) {
    auto e = check_node(p, id);
    if (!e) continue;
    if (allow_open && e->kind == RuleErrorKind::OpenLeaf) continue;
    errs.push_back(*e);
  }
  std::sort(errs.begin(), errs.end(), [](const RuleError& a, const RuleError& b) { return a.node < b.node; });
  return errs;
}

CycleGraph cycle_graph(const CyclicPreProof& p) {
  CycleGraph g;
  for (NodeId id : p.preorder()) {
    g.nodes.push_back(id);
    auto& out = g.out[id];
    const auto& n = p.at(id);
    for (std::size_t i = 0; i < n.premises.size(); ++i)
      if (p.has(n.premises[i])) out.push_back({id, n.premises[i], static_cast<int>(i)});
    if (n.is_bud() && n.companion && p.has(*n.companion)) out.push_back({id, *n.companion, -1});
  }
  std::sort(g.nodes.begin(), g.nodes.end());
  return g;
}

std::vector<std::vector<NodeId>> elementary_cycles(const CycleGraph& g) {
  // Plain enumeration: for each start s, simple paths over nodes >= s
  // returning to s. Fine at fixture scale.
  std::vector<std::vector<NodeId>> out;
  for (NodeId s : g.nodes) {
    std::vector<NodeId> path{s};
    std::set<NodeId> on{s};
    std::function<void(NodeId)> dfs = [&](NodeId u) {
      auto it = g.out.find(u);
      if (it == g.out.end()) return;
      for (const auto& e : it->second) {
        if (e.to == s) {
          out.push_back(path);
        } else if (e.to > s && !on.count(e.to)) {
          on.insert(e.to);
          path.push_back(e.to);
          dfs(e.to);
          path.pop_back();
          on.erase(e.to);
        }
      }
    };
    dfs(s);
  }
  return out;
}

}  // namespace pdl
