#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pdl/kernel.hpp"
#include "pdl/semantics.hpp"

namespace pdl {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kProofSchema = "g3pdl-proof/1";
inline constexpr std::string_view kModelSchema = "g3pdl-model/1";

CyclicPreProof parse_proof(std::string_view text);
std::string render_proof(const CyclicPreProof& p);

struct ModelDoc {
  KripkeModel model;
  std::optional<Valuation> valuation;
};

ModelDoc parse_model(std::string_view text);
std::string render_model(const KripkeModel& m, const std::optional<Valuation>& v = std::nullopt);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace pdl
