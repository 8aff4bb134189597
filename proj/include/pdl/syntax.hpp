#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace pdl {

enum class FormulaKind : std::uint8_t { Bottom, Atom, And, Or, Implies, Box };
enum class ProgramKind : std::uint8_t { Atomic, Seq, Choice, Test, Star };

namespace detail {
struct FormulaNode;
struct ProgramNode;
}  // namespace detail

class Program;

class Formula {
 public:
  static Formula bottom();
  static Formula atom(std::string name);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula box(Program p, Formula body);

  FormulaKind kind() const;
  // Atom name; empty otherwise.
  const std::string& name() const;
  // Operands of And/Or/Implies.
  Formula lhs() const;
  Formula rhs() const;
  // Box parts.
  Program program() const;
  Formula body() const;

  std::size_t size() const;
  std::size_t hash() const;

  bool is_box() const { return kind() == FormulaKind::Box; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  friend class Program;
  friend struct detail::FormulaNode;
  explicit Formula(std::shared_ptr<const detail::FormulaNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::FormulaNode> node_;
};

class Program {
 public:
  static Program atomic(std::string name);
  static Program seq(Program a, Program b);
  static Program choice(Program a, Program b);
  static Program test(Formula f);
  static Program star(Program p);

  ProgramKind kind() const;
  const std::string& name() const;
  Program lhs() const;
  Program rhs() const;
  // Star operand.
  Program inner() const;
  // Test formula.
  Formula formula() const;

  std::size_t size() const;
  std::size_t hash() const;

  friend bool operator==(const Program& a, const Program& b);
  friend std::strong_ordering operator<=>(const Program& a, const Program& b);

 private:
  friend class Formula;
  friend struct detail::ProgramNode;
  explicit Program(std::shared_ptr<const detail::ProgramNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::ProgramNode> node_;
};

bool is_test_free(const Program& p);
bool is_test_free(const Formula& f);
bool is_star_free(const Program& p);

struct Label {
  std::string name;
  auto operator<=>(const Label&) const = default;
};

struct RelAtom {
  Label src;
  std::string prog;
  Label dst;
  auto operator<=>(const RelAtom&) const = default;
};

struct LabelledFormula {
  Label label;
  Formula formula;
  bool operator==(const LabelledFormula&) const = default;
  std::strong_ordering operator<=>(const LabelledFormula& o) const {
    if (auto c = label <=> o.label; c != 0) return c;
    return formula <=> o.formula;
  }
};

using Item = std::variant<RelAtom, LabelledFormula>;
using ItemSet = std::set<Item>;
using LabelSet = std::set<Label>;

struct Sequent {
  ItemSet antecedent;
  ItemSet consequent;
  bool operator==(const Sequent&) const = default;
  std::strong_ordering operator<=>(const Sequent& o) const;
};

// Convenience accessors for items.
inline const LabelledFormula* as_formula(const Item& i) { return std::get_if<LabelledFormula>(&i); }
inline const RelAtom* as_atom(const Item& i) { return std::get_if<RelAtom>(&i); }
Item labelled(const Label& x, const Formula& f);
Item labelled(const std::string& x, const Formula& f);
Item rel(const std::string& x, const std::string& a, const std::string& y);

Item subst_label(const Item& item, const Label& from, const Label& to);
ItemSet subst_label(const ItemSet& items, const Label& from, const Label& to);
Sequent subst_label(const Sequent& s, const Label& from, const Label& to);

LabelSet labels_of(const Item& item);
LabelSet labels_of(const ItemSet& items);
LabelSet labels_of(const Sequent& s);
LabelSet starred_labels_of(const ItemSet& items);

ItemSet box_prefix(const Program& p, const ItemSet& items);

enum class FormulaClass { Atomic, Basic, Iterated, Composite };
FormulaClass classify(const Formula& f);

std::set<Formula> fl_closure(const Formula& f);

// Atomic names occurring anywhere in a sequent.
std::set<std::string> prop_names(const Sequent& s);
std::set<std::string> prog_names(const Sequent& s);
void collect_names(const Formula& f, std::set<std::string>& props, std::set<std::string>& progs);
void collect_names(const Program& p, std::set<std::string>& props, std::set<std::string>& progs);

bool is_test_free(const Sequent& s);

// Generated labels look like "_7". fresh() also skips anything in `avoid`.
class LabelSupply {
 public:
  explicit LabelSupply(std::uint64_t start = 0) : next_(start) {}
  Label fresh(const LabelSet& avoid);
  std::uint64_t peek() const { return next_; }

 private:
  std::uint64_t next_;
};

bool is_generated_label(const Label& l);

// Canonical text, see parser.hpp for the grammar.
std::string to_string(const Formula& f);
std::string to_string(const Program& p);
std::string to_string(const Item& i);
std::string to_string(const ItemSet& s);
std::string to_string(const Sequent& s);
std::ostream& operator<<(std::ostream& os, const Formula& f);
std::ostream& operator<<(std::ostream& os, const Program& p);
std::ostream& operator<<(std::ostream& os, const Item& i);
std::ostream& operator<<(std::ostream& os, const Sequent& s);
std::ostream& operator<<(std::ostream& os, const Label& l);

}  // namespace pdl

template <>
struct std::hash<pdl::Formula> {
  std::size_t operator()(const pdl::Formula& f) const noexcept { return f.hash(); }
};
