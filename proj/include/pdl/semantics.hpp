#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pdl/syntax.hpp"
#include "pdl/trace_value.hpp"

namespace pdl {

using StateSet = std::vector<bool>;

class Relation {
 public:
  explicit Relation(int n = 0) : n_(n), bits_(static_cast<std::size_t>(n) * n, false) {}
  static Relation identity(int n);
  static Relation identity_on(const StateSet& s);

  int size() const { return n_; }
  bool has(int i, int j) const { return bits_[static_cast<std::size_t>(i) * n_ + j]; }
  void set(int i, int j, bool v = true) { bits_[static_cast<std::size_t>(i) * n_ + j] = v; }

  Relation compose(const Relation& o) const;
  Relation unite(const Relation& o) const;
  Relation reflexive_transitive_closure() const;
  std::set<std::pair<int, int>> pairs() const;

  bool operator==(const Relation&) const = default;

 private:
  int n_;
  std::vector<bool> bits_;
};

struct KripkeModel {
  std::vector<std::string> states;
  std::map<std::string, std::set<int>> props;
  std::map<std::string, std::set<std::pair<int, int>>> progs;

  int size() const { return static_cast<int>(states.size()); }
  // -1 when absent.
  int index_of(const std::string& state) const;
  // Adjacency over all atomic programs.
  Relation any_step() const;
};

using Valuation = std::map<Label, int>;

class SemanticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Relation interp_program(const KripkeModel& m, const Program& p);
StateSet interp_formula(const KripkeModel& m, const Formula& f);

bool satisfies_item(const KripkeModel& m, const Valuation& v, const Item& i);
// Throws SemanticsError if v misses a label of s.
bool satisfies_sequent(const KripkeModel& m, const Valuation& v, const Sequent& s);

struct Countermodel {
  KripkeModel model;
  Valuation valuation;
};

struct BruteForceResult {
  enum class Status { Found, NotFound, Timeout };
  Status status = Status::NotFound;
  std::optional<Countermodel> found;
};

struct BruteForceLimits {
  std::uint64_t max_checks = 20'000'000;
  const std::atomic<bool>* cancel = nullptr;
};

// States are named s1..sn; candidates are enumerated by state count, then
// program edges, then proposition sets, then valuations.
BruteForceResult brute_force_countermodel(const Sequent& s, int max_states, BruteForceLimits limits = {});

using ModelPath = std::vector<int>;

// Weight of `path` as a path for t, or nullopt if it is not one. The
// weight is the longest final segment over all partitions.
std::optional<unsigned> path_weight(const KripkeModel& m, const ModelPath& path, const TraceValue& t);

std::set<ModelPath> counterexample_paths(const KripkeModel& m, const Valuation& v, const TraceValue& t);

class TraceMeasure {
 public:
  TraceMeasure() = default;
  TraceMeasure(std::initializer_list<unsigned> ws) {
    for (unsigned w : ws) add(w);
  }
  void add(unsigned w, unsigned times = 1) {
    if (times) counts_[w] += times;
  }
  unsigned count(unsigned w) const {
    auto it = counts_.find(w);
    return it == counts_.end() ? 0 : it->second;
  }
  std::size_t total() const;
  const std::map<unsigned, unsigned>& counts() const { return counts_; }
  bool operator==(const TraceMeasure&) const = default;

 private:
  std::map<unsigned, unsigned> counts_;
};

std::string to_string(const TraceMeasure& m);

TraceMeasure trace_value_measure(const KripkeModel& m, const Valuation& v, const TraceValue& t);

bool dm_less(const TraceMeasure& m, const TraceMeasure& n);
bool dm_leq(const TraceMeasure& m, const TraceMeasure& n);

}  // namespace pdl
