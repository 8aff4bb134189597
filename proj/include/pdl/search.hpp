#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdl/kernel.hpp"
#include "pdl/semantics.hpp"
#include "pdl/syntax.hpp"

namespace pdl {

class TestNotSupported : public std::invalid_argument {
 public:
  TestNotSupported() : std::invalid_argument("test programs unsupported by search") {}
};

using NotTestFree = TestNotSupported;

class NotAcyclic : public std::invalid_argument {
 public:
  NotAcyclic() : std::invalid_argument("antecedent relational atoms are cyclic") {}
};

class StepBudgetExceeded : public std::runtime_error {
 public:
  StepBudgetExceeded() : std::runtime_error("unwinding step budget exceeded") {}
};

// --- normal form and reachability

bool is_normal(const Sequent& s);
bool reaches(const ItemSet& gamma, const Label& x, const Label& y);
bool is_acyclic(const Sequent& s);
// No non-atomic formula in the consequent.
bool is_atomic_leaf(const Sequent& s);

struct Weakening {
  RuleKind rule;  // WL or WR
  Item item;
};

struct WeakeningResult {
  Sequent result;
  std::vector<Weakening> steps;
};

WeakeningResult apply_valid_weakenings(const Sequent& leaf);

// --- bounds

using Word = std::vector<std::string>;

unsigned unfold_len(const Program& p);
unsigned path_max_pos(const Formula& f);
unsigned path_max_neg(const Formula& f);
unsigned path_max(const Label& x, const Sequent& s);
std::set<Word> lang_truncated(const Program& p, unsigned n);
bool in_language(const Program& p, const Word& w);
std::set<unsigned> combinations_for(const Program& p, const Word& w);
// Saturating at UINT64_MAX.
std::uint64_t star_max_pos(unsigned n, const Formula& f);
std::uint64_t star_max_neg(unsigned n, const Formula& f);
std::uint64_t star_max(const Sequent& s);

// --- unwindings

struct Unwinding {
  CyclicPreProof derivation;
  Sequent origin;
  std::vector<NodeId> open_leaves;
};

struct UnwindingStats {
  std::size_t steps = 0;
  bool acyclic_throughout = true;
};

// Grows a capped unwinding above the open node `at` of `proof`; returns
// the open leaves left after capping.
std::vector<NodeId> unwind_at(CyclicPreProof& proof, NodeId at, LabelSupply& labels, std::size_t max_steps,
                              UnwindingStats* stats = nullptr);

Unwinding build_capped_unwinding(const Sequent& s, std::size_t max_steps = 100000);

// Closes an open node by weakening down to an axiom instance; false if
// neither Ax nor Bot applies.
bool close_by_axiom(CyclicPreProof& proof, NodeId id);

// --- back-links

struct Backlink {
  NodeId companion;
  std::map<Label, Label> renaming;  // companion label -> leaf label
};

std::optional<std::map<Label, Label>> match_up_to_renaming(const Sequent& companion, const Sequent& leaf);
std::optional<Backlink> backlink_match(const Sequent& leaf, const std::vector<std::pair<NodeId, Sequent>>& history);
// Adds the Subst chain above `leaf` and turns its top into a bud.
void attach_backlink(CyclicPreProof& proof, NodeId leaf, const Backlink& link, LabelSupply& labels);

// --- prover

struct SearchBudget {
  std::size_t max_steps = 200000;  // rule applications per unwinding
  std::size_t max_iters = 5000;    // unwindings
  std::size_t max_history = 5000;
};

struct UnwindingReport {
  Sequent origin;
  std::vector<Sequent> leaves;
};

struct SearchOptions {
  SearchBudget budget;
  std::function<void(const UnwindingReport&)> on_unwinding;
};

struct SearchOutcome {
  enum class Kind { Proof, Countermodel, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<CyclicPreProof> proof;
  std::optional<Countermodel> countermodel;
  std::string reason;
  std::size_t unwindings = 0;
};

// Throws TestNotSupported / NotAcyclic on inputs outside the fragment.
SearchOutcome prove_test_free(const Sequent& goal, const SearchOptions& opts = {});

// --- templates and search trees

struct Template {
  ItemSet gamma;
  ItemSet delta;
};

Countermodel template_to_model(const Template& t);

struct SearchTree {
  CyclicPreProof tree;
  std::vector<Template> templates;  // one per open leaf, left to right
};

// Default schedule: rounds r = 1, 2, ... visit the first r formulas in
// order of first appearance.
SearchTree expand_search_tree(const Sequent& s, std::size_t depth);
SearchTree expand_search_tree(const Sequent& s, const std::vector<LabelledFormula>& schedule);

}  // namespace pdl
