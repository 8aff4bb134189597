#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pdl/syntax.hpp"

namespace pdl {

enum class RuleKind {
  Ax, Bot, WL, WR, AndL, AndR, OrL, OrR, ImpL, ImpR, BoxL, BoxR, SeqL, SeqR,
  ChoiceL, ChoiceR, TestL, TestR, StarL, StarR, Subst, Cut, Bud, Open
};

std::string_view rule_name(RuleKind k);
std::optional<RuleKind> rule_from_name(std::string_view name);
int rule_arity(RuleKind k);

// Which side of the conclusion holds the principal item.
enum class PrincipalSide { None, Left, Right, Both };
PrincipalSide principal_side(RuleKind k);

struct RuleInstance {
  RuleKind kind = RuleKind::Open;
  std::optional<Item> principal;
  std::optional<Label> fresh;      // BoxR
  std::optional<Label> successor;  // BoxL
  std::optional<Label> from, to;   // Subst: conclusion = premise[from := to]
  std::optional<Item> cut;         // Cut

  bool operator==(const RuleInstance&) const = default;
};

RuleInstance make_rule(RuleKind k, std::optional<Item> principal = std::nullopt);
RuleInstance box_left(const Item& principal, const Label& successor);
RuleInstance box_right(const Item& principal, const Label& fresh);
RuleInstance subst_rule(const Label& from, const Label& to);
RuleInstance cut_rule(const Item& cut);

enum class RuleErrorKind {
  PrincipalMissing,
  FreshnessViolated,
  SideConditionFailed,
  PremiseMismatch,
  ArityMismatch,
  CompanionMismatch,
  OpenLeaf,
  Structure
};

std::string_view to_string(RuleErrorKind k);

using NodeId = int;

struct RuleError {
  RuleErrorKind kind;
  std::optional<NodeId> node;
  std::string detail;
};

std::string to_string(const RuleError& e);

class RuleException : public std::runtime_error {
 public:
  explicit RuleException(RuleError e) : std::runtime_error(to_string(e)), error_(std::move(e)) {}
  const RuleError& error() const { return error_; }

 private:
  RuleError error_;
};

// Premises of `r` read upward from `s`, principal consumed. Throws
// RuleException. For Subst the inverse renaming is returned; for Cut the
// contexts are shared.
std::vector<Sequent> apply_rule(const Sequent& s, const RuleInstance& r);

struct DerivationNode {
  NodeId id = 0;
  Sequent sequent;
  RuleInstance rule;
  std::vector<NodeId> premises;
  std::optional<NodeId> companion;  // Bud only

  bool is_bud() const { return rule.kind == RuleKind::Bud; }
  bool is_open() const { return rule.kind == RuleKind::Open; }
  bool operator==(const DerivationNode&) const = default;
};

class CyclicPreProof {
 public:
  std::map<NodeId, DerivationNode> nodes;
  NodeId root = 0;

  bool operator==(const CyclicPreProof&) const = default;

  bool has(NodeId id) const { return nodes.count(id) > 0; }
  const DerivationNode& at(NodeId id) const;
  DerivationNode& at(NodeId id);

  NodeId next_id() const { return nodes.empty() ? 0 : nodes.rbegin()->first + 1; }
  NodeId add_open(const Sequent& s);
  // Applies the rule at an open node and adds open premises.
  std::vector<NodeId> expand(NodeId id, const RuleInstance& r);
  // Sets rule and explicit premise sequents; for rules whose premises
  // are not the canonical apply_rule output.
  std::vector<NodeId> expand_with(NodeId id, const RuleInstance& r, const std::vector<Sequent>& premises);
  void make_bud(NodeId id, NodeId companion);

  // Reachable open leaves, left to right.
  std::vector<NodeId> open_leaves() const;
  std::vector<NodeId> buds() const;
  std::map<NodeId, NodeId> companions() const;
  // Nodes reachable from root in depth-first premise order.
  std::vector<NodeId> preorder() const;
};

// Chain of WL/WR above the open node `id` down to `target` (a sub-sequent);
// returns the new open top.
NodeId weaken_to(CyclicPreProof& p, NodeId id, const Sequent& target);

// Replaces the open leaf with a copy of `piece` (whose root sequent must
// match); returns the id mapping used for the copy.
std::map<NodeId, NodeId> graft(CyclicPreProof& into, NodeId leaf, const CyclicPreProof& piece);

std::optional<RuleError> check_node(const CyclicPreProof& p, NodeId id);
std::vector<RuleError> check_pre_proof(const CyclicPreProof& p, bool allow_open = false);

struct CycleEdge {
  NodeId from;
  NodeId to;
  int premise_index;  // -1 for a bud-to-companion link
};

struct CycleGraph {
  std::vector<NodeId> nodes;
  std::map<NodeId, std::vector<CycleEdge>> out;
};

CycleGraph cycle_graph(const CyclicPreProof& p);
// Elementary cycles as node lists (each starting at its least id).
std::vector<std::vector<NodeId>> elementary_cycles(const CycleGraph& g);

}  // namespace pdl
