#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdl/kernel.hpp"
#include "pdl/syntax.hpp"

namespace pdl {

class MultiLabelGamma : public std::invalid_argument {
 public:
  MultiLabelGamma() : std::invalid_argument("context formulas must all carry the succedent label") {}
};

class BadParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IllFormedHilbertProof : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Open derivation of [alpha]gamma |- x:[alpha]phi whose open leaves are
// gamma |- x:phi.
CyclicPreProof build_necessitation(const Program& alpha, const ItemSet& gamma, const Label& x, const Formula& phi);

// Closes the node with invertible propositional rules, boxes opaque.
// Returns false (leaving open leaves behind) when that fails.
bool prove_propositional(CyclicPreProof& p, NodeId id);

// Axiom ids: 1 distribution over implication, 2 distribution over
// conjunction, 3 choice, 4 composition, 5 test, 6 induction, 7 mix.
struct AxiomParams {
  std::optional<Program> alpha, beta;
  std::optional<Formula> phi, psi;
};

constexpr int kAxiomCount = 7;
std::string axiom_name(int id);
Formula axiom_formula(int id, const AxiomParams& params);
CyclicPreProof derive_axiom(int id, const AxiomParams& params, const Label& x = Label{"x"});

Formula iff(const Formula& a, const Formula& b);

struct HilbertStep {
  enum class Kind { Axiom, Tautology, ModusPonens, Necessitation };
  Kind kind = Kind::Tautology;
  int axiom = 0;
  AxiomParams params;
  std::optional<Formula> formula;  // Tautology
  std::size_t minor = 0, major = 0;  // MP: major is minor -> result
  std::size_t premise = 0;           // Nec
  std::optional<Program> program;    // Nec

  static HilbertStep axiom_instance(int id, AxiomParams p);
  static HilbertStep tautology(Formula f);
  static HilbertStep modus_ponens(std::size_t minor, std::size_t major);
  static HilbertStep necessitation(std::size_t premise, Program alpha);
};

struct HilbertProof {
  std::vector<HilbertStep> steps;
};

// Formula proved by each step; throws IllFormedHilbertProof.
std::vector<Formula> hilbert_theorems(const HilbertProof& h);
CyclicPreProof hilbert_to_cyclic(const HilbertProof& h, const Label& x = Label{"x"});

}  // namespace pdl
