#include "pdl/syntax.hpp"

#include <cassert>
#include <functional>

namespace pdl {

namespace detail {

struct FormulaNode {
  FormulaKind kind;
  std::string name;
  std::shared_ptr<const FormulaNode> a, b;
  std::shared_ptr<const ProgramNode> prog;
  std::size_t size = 1;
  std::size_t hash = 0;
};

struct ProgramNode {
  ProgramKind kind;
  std::string name;
  std::shared_ptr<const ProgramNode> a, b;
  std::shared_ptr<const FormulaNode> test;
  std::size_t size = 1;
  std::size_t hash = 0;
};

}  // namespace detail

namespace {

using FNode = detail::FormulaNode;
using PNode = detail::ProgramNode;

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::strong_ordering cmp_f(const FNode* x, const FNode* y);

std::strong_ordering cmp_p(const PNode* x, const PNode* y) {
  if (x == y) return std::strong_ordering::equal;
  if (auto c = x->kind <=> y->kind; c != 0) return c;
  switch (x->kind) {
    case ProgramKind::Atomic:
      return x->name <=> y->name;
    case ProgramKind::Seq:
    case ProgramKind::Choice:
      if (auto c = cmp_p(x->a.get(), y->a.get()); c != 0) return c;
      return cmp_p(x->b.get(), y->b.get());
    case ProgramKind::Star:
      return cmp_p(x->a.get(), y->a.get());
    case ProgramKind::Test:
      return cmp_f(x->test.get(), y->test.get());
  }
  return std::strong_ordering::equal;
}

std::strong_ordering cmp_f(const FNode* x, const FNode* y) {
  if (x == y) return std::strong_ordering::equal;
  if (auto c = x->kind <=> y->kind; c != 0) return c;
  switch (x->kind) {
    case FormulaKind::Bottom:
      return std::strong_ordering::equal;
    case FormulaKind::Atom:
      return x->name <=> y->name;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      if (auto c = cmp_f(x->a.get(), y->a.get()); c != 0) return c;
      return cmp_f(x->b.get(), y->b.get());
    case FormulaKind::Box:
      if (auto c = cmp_p(x->prog.get(), y->prog.get()); c != 0) return c;
      return cmp_f(x->a.get(), y->a.get());
  }
  return std::strong_ordering::equal;
}

std::shared_ptr<const FNode> fnode(FormulaKind k, std::string name, std::shared_ptr<const FNode> a,
                                   std::shared_ptr<const FNode> b, std::shared_ptr<const PNode> p) {
  auto n = std::make_shared<FNode>();
  n->kind = k;
  n->name = std::move(name);
  n->a = std::move(a);
  n->b = std::move(b);
  n->prog = std::move(p);
  std::size_t h = mix(17, static_cast<std::size_t>(k));
  h = mix(h, std::hash<std::string>{}(n->name));
  if (n->a) { h = mix(h, n->a->hash); n->size += n->a->size; }
  if (n->b) { h = mix(h, n->b->hash); n->size += n->b->size; }
  if (n->prog) { h = mix(h, n->prog->hash); n->size += n->prog->size; }
  n->hash = h;
  return n;
}

std::shared_ptr<const PNode> pnode(ProgramKind k, std::string name, std::shared_ptr<const PNode> a,
                                   std::shared_ptr<const PNode> b, std::shared_ptr<const FNode> t) {
  auto n = std::make_shared<PNode>();
  n->kind = k;
  n->name = std::move(name);
  n->a = std::move(a);
  n->b = std::move(b);
  n->test = std::move(t);
  std::size_t h = mix(31, static_cast<std::size_t>(k));
  h = mix(h, std::hash<std::string>{}(n->name));
  if (n->a) { h = mix(h, n->a->hash); n->size += n->a->size; }
  if (n->b) { h = mix(h, n->b->hash); n->size += n->b->size; }
  if (n->test) { h = mix(h, n->test->hash); n->size += n->test->size; }
  n->hash = h;
  return n;
}

}  // namespace

Formula Formula::bottom() {
  static const Formula b(fnode(FormulaKind::Bottom, "", nullptr, nullptr, nullptr));
  return b;
}
Formula Formula::atom(std::string name) {
  return Formula(fnode(FormulaKind::Atom, std::move(name), nullptr, nullptr, nullptr));
}
Formula Formula::conj(Formula a, Formula b) {
  return Formula(fnode(FormulaKind::And, "", a.node_, b.node_, nullptr));
}
Formula Formula::disj(Formula a, Formula b) {
  return Formula(fnode(FormulaKind::Or, "", a.node_, b.node_, nullptr));
}
Formula Formula::implies(Formula a, Formula b) {
  return Formula(fnode(FormulaKind::Implies, "", a.node_, b.node_, nullptr));
}
Formula Formula::box(Program p, Formula body) {
  return Formula(fnode(FormulaKind::Box, "", body.node_, nullptr, p.node_));
}

FormulaKind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }
Formula Formula::lhs() const {
  assert(node_->a && node_->b);
  return Formula(node_->a);
}
Formula Formula::rhs() const {
  assert(node_->b);
  return Formula(node_->b);
}
Program Formula::program() const {
  assert(node_->prog);
  return Program(node_->prog);
}
Formula Formula::body() const {
  assert(node_->prog);
  return Formula(node_->a);
}
std::size_t Formula::size() const { return node_->size; }
std::size_t Formula::hash() const { return node_->hash; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash) return false;
  return cmp_f(a.node_.get(), b.node_.get()) == 0;
}
std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  return cmp_f(a.node_.get(), b.node_.get());
}

Program Program::atomic(std::string name) {
  return Program(pnode(ProgramKind::Atomic, std::move(name), nullptr, nullptr, nullptr));
}
Program Program::seq(Program a, Program b) {
  return Program(pnode(ProgramKind::Seq, "", a.node_, b.node_, nullptr));
}
Program Program::choice(Program a, Program b) {
  return Program(pnode(ProgramKind::Choice, "", a.node_, b.node_, nullptr));
}
Program Program::test(Formula f) {
  return Program(pnode(ProgramKind::Test, "", nullptr, nullptr, f.node_));
}
Program Program::star(Program p) {
  return Program(pnode(ProgramKind::Star, "", p.node_, nullptr, nullptr));
}

ProgramKind Program::kind() const { return node_->kind; }
const std::string& Program::name() const { return node_->name; }
Program Program::lhs() const {
  assert(node_->a && node_->b);
  return Program(node_->a);
}
Program Program::rhs() const {
  assert(node_->b);
  return Program(node_->b);
}
Program Program::inner() const {
  assert(node_->kind == ProgramKind::Star);
  return Program(node_->a);
}
Formula Program::formula() const {
  assert(node_->test);
  return Formula(node_->test);
}
std::size_t Program::size() const { return node_->size; }
std::size_t Program::hash() const { return node_->hash; }

bool operator==(const Program& a, const Program& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash) return false;
  return cmp_p(a.node_.get(), b.node_.get()) == 0;
}
std::strong_ordering operator<=>(const Program& a, const Program& b) {
  return cmp_p(a.node_.get(), b.node_.get());
}

bool is_test_free(const Program& p) {
  switch (p.kind()) {
    case ProgramKind::Atomic: return true;
    case ProgramKind::Test: return false;
    case ProgramKind::Star: return is_test_free(p.inner());
    default: return is_test_free(p.lhs()) && is_test_free(p.rhs());
  }
}

bool is_test_free(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Bottom:
    case FormulaKind::Atom: return true;
    case FormulaKind::Box: return is_test_free(f.program()) && is_test_free(f.body());
    default: return is_test_free(f.lhs()) && is_test_free(f.rhs());
  }
}

bool is_star_free(const Program& p) {
  switch (p.kind()) {
    case ProgramKind::Atomic:
    case ProgramKind::Test: return true;
    case ProgramKind::Star: return false;
    default: return is_star_free(p.lhs()) && is_star_free(p.rhs());
  }
}

bool is_test_free(const Sequent& s) {
  for (const auto* side : {&s.antecedent, &s.consequent})
    for (const auto& it : *side)
      if (auto lf = as_formula(it); lf && !is_test_free(lf->formula)) return false;
  return true;
}

std::strong_ordering Sequent::operator<=>(const Sequent& o) const {
  if (auto c = std::lexicographical_compare_three_way(antecedent.begin(), antecedent.end(),
                                                      o.antecedent.begin(), o.antecedent.end());
      c != 0)
    return c;
  return std::lexicographical_compare_three_way(consequent.begin(), consequent.end(),
                                                o.consequent.begin(), o.consequent.end());
}

Item labelled(const Label& x, const Formula& f) { return LabelledFormula{x, f}; }
Item labelled(const std::string& x, const Formula& f) { return LabelledFormula{Label{x}, f}; }
Item rel(const std::string& x, const std::string& a, const std::string& y) {
  return RelAtom{Label{x}, a, Label{y}};
}

Item subst_label(const Item& item, const Label& from, const Label& to) {
  if (auto r = as_atom(item)) {
    RelAtom out = *r;
    if (out.src == from) out.src = to;
    if (out.dst == from) out.dst = to;
    return out;
  }
  LabelledFormula lf = std::get<LabelledFormula>(item);
  if (lf.label == from) lf.label = to;
  return lf;
}

ItemSet subst_label(const ItemSet& items, const Label& from, const Label& to) {
  ItemSet out;
  for (const auto& i : items) out.insert(subst_label(i, from, to));
  return out;
}

Sequent subst_label(const Sequent& s, const Label& from, const Label& to) {
  return Sequent{subst_label(s.antecedent, from, to), subst_label(s.consequent, from, to)};
}

LabelSet labels_of(const Item& item) {
  if (auto r = as_atom(item)) return {r->src, r->dst};
  return {std::get<LabelledFormula>(item).label};
}

LabelSet labels_of(const ItemSet& items) {
  LabelSet out;
  for (const auto& i : items) {
    if (auto r = as_atom(i)) {
      out.insert(r->src);
      out.insert(r->dst);
    } else {
      out.insert(std::get<LabelledFormula>(i).label);
    }
  }
  return out;
}

LabelSet labels_of(const Sequent& s) {
  LabelSet out = labels_of(s.antecedent);
  out.merge(labels_of(s.consequent));
  return out;
}

LabelSet starred_labels_of(const ItemSet& items) {
  LabelSet out;
  for (const auto& i : items)
    if (auto lf = as_formula(i); lf && classify(lf->formula) == FormulaClass::Iterated)
      out.insert(lf->label);
  return out;
}

ItemSet box_prefix(const Program& p, const ItemSet& items) {
  ItemSet out;
  for (const auto& i : items) {
    if (auto lf = as_formula(i))
      out.insert(LabelledFormula{lf->label, Formula::box(p, lf->formula)});
    else
      out.insert(i);
  }
  return out;
}

FormulaClass classify(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Bottom:
    case FormulaKind::Atom: return FormulaClass::Atomic;
    case FormulaKind::Box:
      if (f.program().kind() == ProgramKind::Atomic) return FormulaClass::Basic;
      if (f.program().kind() == ProgramKind::Star) return FormulaClass::Iterated;
      return FormulaClass::Composite;
    default: return FormulaClass::Composite;
  }
}

std::set<Formula> fl_closure(const Formula& f) {
  std::set<Formula> out;
  std::vector<Formula> todo{f};
  while (!todo.empty()) {
    Formula g = todo.back();
    todo.pop_back();
    if (!out.insert(g).second) continue;
    switch (g.kind()) {
      case FormulaKind::Bottom:
      case FormulaKind::Atom: break;
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Implies:
        todo.push_back(g.lhs());
        todo.push_back(g.rhs());
        break;
      case FormulaKind::Box: {
        Program p = g.program();
        Formula b = g.body();
        switch (p.kind()) {
          case ProgramKind::Atomic: todo.push_back(b); break;
          case ProgramKind::Seq: todo.push_back(Formula::box(p.lhs(), Formula::box(p.rhs(), b))); break;
          case ProgramKind::Choice:
            todo.push_back(Formula::box(p.lhs(), b));
            todo.push_back(Formula::box(p.rhs(), b));
            break;
          case ProgramKind::Star:
            todo.push_back(b);
            todo.push_back(Formula::box(p.inner(), g));
            break;
          case ProgramKind::Test:
            todo.push_back(p.formula());
            todo.push_back(b);
            break;
        }
        break;
      }
    }
  }
  return out;
}

void collect_names(const Program& p, std::set<std::string>& props, std::set<std::string>& progs) {
  switch (p.kind()) {
    case ProgramKind::Atomic: progs.insert(p.name()); break;
    case ProgramKind::Test: collect_names(p.formula(), props, progs); break;
    case ProgramKind::Star: collect_names(p.inner(), props, progs); break;
    default:
      collect_names(p.lhs(), props, progs);
      collect_names(p.rhs(), props, progs);
  }
}

void collect_names(const Formula& f, std::set<std::string>& props, std::set<std::string>& progs) {
  switch (f.kind()) {
    case FormulaKind::Bottom: break;
    case FormulaKind::Atom: props.insert(f.name()); break;
    case FormulaKind::Box:
      collect_names(f.program(), props, progs);
      collect_names(f.body(), props, progs);
      break;
    default:
      collect_names(f.lhs(), props, progs);
      collect_names(f.rhs(), props, progs);
  }
}

namespace {
void sequent_names(const Sequent& s, std::set<std::string>& props, std::set<std::string>& progs) {
  for (const auto* side : {&s.antecedent, &s.consequent})
    for (const auto& it : *side) {
      if (auto r = as_atom(it))
        progs.insert(r->prog);
      else
        collect_names(std::get<LabelledFormula>(it).formula, props, progs);
    }
}
}  // namespace

std::set<std::string> prop_names(const Sequent& s) {
  std::set<std::string> props, progs;
  sequent_names(s, props, progs);
  return props;
}

std::set<std::string> prog_names(const Sequent& s) {
  std::set<std::string> props, progs;
  sequent_names(s, props, progs);
  return progs;
}

Label LabelSupply::fresh(const LabelSet& avoid) {
  for (;;) {
    Label l{"_" + std::to_string(next_++)};
    if (!avoid.count(l)) return l;
  }
}

bool is_generated_label(const Label& l) { return !l.name.empty() && l.name[0] == '_'; }

}  // namespace pdl
