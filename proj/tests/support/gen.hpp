#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pdl/kernel.hpp"
#include "pdl/semantics.hpp"
#include "pdl/syntax.hpp"

namespace pdl::gen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(eng_); }
  int between(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(eng_); }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[below(static_cast<int>(v.size()))]; }

 private:
  std::mt19937_64 eng_;
};

struct Alphabet {
  std::vector<std::string> props{"p", "q"};
  std::vector<std::string> progs{"a", "b"};
  bool tests = false;
  bool bottom = true;
};

// Sizes count constructors.
Program program(Rng& r, int size, const Alphabet& a);
Formula formula(Rng& r, int size, const Alphabet& a);
// At least one star somewhere.
Formula starred_formula(Rng& r, int size, const Alphabet& a);

KripkeModel model(Rng& r, int states, const Alphabet& a);
Valuation valuation(Rng& r, const KripkeModel& m, const LabelSet& labels);

// Test-free when a.tests is false; relational atoms form a forest so the
// result is acyclic.
Sequent sequent(Rng& r, int size, const Alphabet& a);

// Locally valid closed cyclic pre-proof with at most max_nodes nodes, or
// nullopt when this attempt failed.
std::optional<CyclicPreProof> cyclic_preproof(Rng& r, std::size_t max_nodes);

}  // namespace pdl::gen

namespace pdl::gen {

struct RuleSample {
  Sequent conclusion;
  RuleInstance rule;
};

// A random applicable rule instance over a small sequent, any kind except
// Bud/Open.
std::optional<RuleSample> rule_instance(Rng& r, const Alphabet& a);

// All valuations of `labels` agreeing with v where v is defined.
std::vector<Valuation> extensions(const KripkeModel& m, const Valuation& v, const LabelSet& labels);

}  // namespace pdl::gen
