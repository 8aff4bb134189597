#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "pdl/kernel.hpp"
#include "pdl/trace_value.hpp"

namespace pdl {

struct TracePair {
  TraceValue from;
  TraceValue to;
  bool progressing = false;
  auto operator<=>(const TracePair&) const = default;
};

struct TraceEdge {
  NodeId from;
  NodeId to;
  std::set<TracePair> pairs;
};

// Pairs between a conclusion and one of its premises under `r`.
std::set<TracePair> trace_pairs(const Sequent& conclusion, const RuleInstance& r, std::size_t premise_index,
                                const Sequent& premise);
// Edge of the cycle graph; premise_index -1 is a bud-to-companion link.
TraceEdge trace_pairs(const CyclicPreProof& p, NodeId node, int premise_index);

struct Lasso {
  std::vector<NodeId> stem;  // root .. first loop node (inclusive)
  std::vector<NodeId> loop;  // loop nodes, back to stem.back()
};

struct GtcResult {
  bool accepted = true;
  std::optional<Lasso> witness;
  std::size_t closure_size = 0;
};

GtcResult check_gtc(const CyclicPreProof& p);

struct OracleResult {
  enum class Verdict { Accepted, Rejected, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  std::optional<Lasso> witness;
  // Bounds at which the enumeration saturates for this proof.
  std::size_t needed_stem = 0;
  std::size_t needed_loop = 0;
};

OracleResult gtc_oracle(const CyclicPreProof& p, std::size_t stem_bound, std::size_t loop_bound);

std::string to_string(const Lasso& l);

}  // namespace pdl
