#pragma once

#include <set>
#include <string>
#include <vector>

#include "pdl/syntax.hpp"

namespace pdl {

// label : [spine_1]...[spine_n][focus*]formula
struct TraceValue {
  Label label;
  std::vector<Program> spine;
  Program focus;
  Formula formula;

  bool operator==(const TraceValue&) const = default;
  std::strong_ordering operator<=>(const TraceValue& o) const;

  Formula as_formula() const;
  LabelledFormula as_labelled() const { return {label, as_formula()}; }
};

std::string to_string(const TraceValue& t);

// Every decomposition of a consequent formula along its top-level box spine
// at a starred modality.
std::set<TraceValue> trace_values_of(const LabelledFormula& lf);
std::set<TraceValue> trace_values_of(const Sequent& s);

}  // namespace pdl
