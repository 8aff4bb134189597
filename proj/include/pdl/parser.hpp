#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pdl/syntax.hpp"

namespace pdl {

struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceSpan span, const std::string& msg)
      : std::runtime_error(msg + " at " + std::to_string(span.start) + ".." + std::to_string(span.end)),
        span_(span),
        detail_(msg) {}
  SourceSpan span() const { return span_; }
  const std::string& detail() const { return detail_; }

 private:
  SourceSpan span_;
  std::string detail_;
};

// Grammar
//   formula  := disj ('->' formula)?
//   disj     := conj ('|' conj)*
//   conj     := unary ('&' unary)*
//   unary    := '[' program ']' unary | 'false' | ident | '(' formula ')'
//   program  := seq ('+' seq)*
//   seq      := post (';' post)*
//   post     := prim '*'*
//   prim     := unary '?' | ident | '(' program ')'
//   sequent  := items '|-' items ;  items := (item (',' item)*)?
//   item     := ident ':' formula | ident '-' ident '->' ident
Formula parse_formula(std::string_view text);
Program parse_program(std::string_view text);
Sequent parse_sequent(std::string_view text);
Item parse_item(std::string_view text);

}  // namespace pdl
