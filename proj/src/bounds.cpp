#include <algorithm>
#include <limits>
#include <map>
#include <utility>

#include "pdl/search.hpp"

namespace pdl {

namespace {

using u64 = std::uint64_t;

u64 sat_add(u64 a, u64 b) {
  u64 r = a + b;
  return r < a ? std::numeric_limits<u64>::max() : r;
}

void require_test_free(const Program& p) {
  if (!is_test_free(p)) throw TestNotSupported();
}

// End positions j such that w[i..j) is in L(p).
std::set<std::size_t> match_from(const Program& p, const Word& w, std::size_t i) {
  switch (p.kind()) {
    case ProgramKind::Atomic:
      if (i < w.size() && w[i] == p.name()) return {i + 1};
      return {};
    case ProgramKind::Seq: {
      std::set<std::size_t> out;
      for (std::size_t j : match_from(p.lhs(), w, i)) {
        auto more = match_from(p.rhs(), w, j);
        out.insert(more.begin(), more.end());
      }
      return out;
    }
    case ProgramKind::Choice: {
      auto out = match_from(p.lhs(), w, i);
      auto more = match_from(p.rhs(), w, i);
      out.insert(more.begin(), more.end());
      return out;
    }
    case ProgramKind::Star: {
      std::set<std::size_t> out{i};
      std::vector<std::size_t> todo{i};
      while (!todo.empty()) {
        std::size_t j = todo.back();
        todo.pop_back();
        for (std::size_t k : match_from(p.inner(), w, j))
          if (out.insert(k).second) todo.push_back(k);
      }
      return out;
    }
    case ProgramKind::Test: throw TestNotSupported();
  }
  return {};
}

Word slice(const Word& w, std::size_t from, std::size_t to) { return Word(w.begin() + from, w.begin() + to); }

struct StarMaxMemo {
  std::map<std::pair<unsigned, Formula>, u64> pos, neg;
};

u64 smp(unsigned n, const Formula& f, StarMaxMemo& memo);
u64 smn(unsigned n, const Formula& f, StarMaxMemo& memo);

u64 smp(unsigned n, const Formula& f, StarMaxMemo& memo) {
  auto key = std::make_pair(n, f);
  if (auto it = memo.pos.find(key); it != memo.pos.end()) return it->second;
  u64 r = 0;
  switch (f.kind()) {
    case FormulaKind::Bottom:
    case FormulaKind::Atom: r = 0; break;
    case FormulaKind::And: r = std::max(smp(n, f.lhs(), memo), smp(n, f.rhs(), memo)); break;
    case FormulaKind::Or: r = sat_add(smp(n, f.lhs(), memo), smp(n, f.rhs(), memo)); break;
    case FormulaKind::Implies: r = sat_add(smn(n, f.lhs(), memo), smp(n, f.rhs(), memo)); break;
    case FormulaKind::Box:
      require_test_free(f.program());
      r = smp(n, f.body(), memo);
      if (!is_star_free(f.program())) r = std::max<u64>(1, r);
      break;
  }
  memo.pos[key] = r;
  return r;
}

u64 smn(unsigned n, const Formula& f, StarMaxMemo& memo) {
  auto key = std::make_pair(n, f);
  if (auto it = memo.neg.find(key); it != memo.neg.end()) return it->second;
  u64 r = 0;
  switch (f.kind()) {
    case FormulaKind::Bottom:
    case FormulaKind::Atom: r = 0; break;
    case FormulaKind::And: r = sat_add(smn(n, f.lhs(), memo), smn(n, f.rhs(), memo)); break;
    case FormulaKind::Or: r = std::max(smn(n, f.lhs(), memo), smn(n, f.rhs(), memo)); break;
    case FormulaKind::Implies: r = std::max(smp(n, f.lhs(), memo), smn(n, f.rhs(), memo)); break;
    case FormulaKind::Box: {
      for (const Word& w : lang_truncated(f.program(), n)) {
        for (unsigned k : combinations_for(f.program(), w)) r = sat_add(r, smn(n - k, f.body(), memo));
        r = sat_add(r, smn(n - static_cast<unsigned>(w.size()), f.body(), memo));
      }
      break;
    }
  }
  memo.neg[key] = r;
  return r;
}

unsigned pm(const Formula& f, bool positive) {
  switch (f.kind()) {
    case FormulaKind::Bottom:
    case FormulaKind::Atom: return 0;
    case FormulaKind::And:
    case FormulaKind::Or: return std::max(pm(f.lhs(), positive), pm(f.rhs(), positive));
    case FormulaKind::Implies: return std::max(pm(f.lhs(), !positive), pm(f.rhs(), positive));
    case FormulaKind::Box:
      require_test_free(f.program());
      if (positive) return std::max(pm(f.body(), true), unfold_len(f.program()));
      return pm(f.body(), false);
  }
  return 0;
}

}  // namespace

unsigned unfold_len(const Program& p) {
  switch (p.kind()) {
    case ProgramKind::Atomic: return 1;
    case ProgramKind::Seq: return unfold_len(p.lhs()) + unfold_len(p.rhs());
    case ProgramKind::Choice: return std::max(unfold_len(p.lhs()), unfold_len(p.rhs()));
    case ProgramKind::Star: return unfold_len(p.inner());
    case ProgramKind::Test: throw TestNotSupported();
  }
  return 0;
}

unsigned path_max_pos(const Formula& f) { return pm(f, true); }
unsigned path_max_neg(const Formula& f) { return pm(f, false); }

unsigned path_max(const Label& x, const Sequent& s) {
  unsigned r = 0;
  for (const auto& i : s.antecedent)
    if (auto lf = as_formula(i); lf && lf->label == x) r = std::max(r, path_max_neg(lf->formula));
  for (const auto& i : s.consequent)
    if (auto lf = as_formula(i); lf && lf->label == x) r = std::max(r, path_max_pos(lf->formula));
  return r;
}

std::set<Word> lang_truncated(const Program& p, unsigned n) {
  switch (p.kind()) {
    case ProgramKind::Atomic:
      if (n >= 1) return {Word{p.name()}};
      return {};
    case ProgramKind::Seq: {
      std::set<Word> out;
      for (const Word& u : lang_truncated(p.lhs(), n))
        for (Word v : lang_truncated(p.rhs(), n - static_cast<unsigned>(u.size()))) {
          Word uv = u;
          uv.insert(uv.end(), v.begin(), v.end());
          out.insert(std::move(uv));
        }
      return out;
    }
    case ProgramKind::Choice: {
      auto out = lang_truncated(p.lhs(), n);
      auto more = lang_truncated(p.rhs(), n);
      out.insert(more.begin(), more.end());
      return out;
    }
    case ProgramKind::Star: {
      auto step = lang_truncated(p.inner(), n);
      std::set<Word> out{Word{}};
      std::vector<Word> todo{Word{}};
      while (!todo.empty()) {
        Word u = todo.back();
        todo.pop_back();
        for (const Word& v : step) {
          if (u.size() + v.size() > n) continue;
          Word uv = u;
          uv.insert(uv.end(), v.begin(), v.end());
          if (out.insert(uv).second) todo.push_back(uv);
        }
      }
      return out;
    }
    case ProgramKind::Test: throw TestNotSupported();
  }
  return {};
}

bool in_language(const Program& p, const Word& w) { return match_from(p, w, 0).count(w.size()) > 0; }

std::set<unsigned> combinations_for(const Program& p, const Word& w) {
  std::set<unsigned> out;
  switch (p.kind()) {
    case ProgramKind::Atomic: return out;
    case ProgramKind::Choice: {
      out = combinations_for(p.lhs(), w);
      auto more = combinations_for(p.rhs(), w);
      out.insert(more.begin(), more.end());
      return out;
    }
    case ProgramKind::Seq:
      for (std::size_t j = 0; j <= w.size(); ++j) {
        Word w1 = slice(w, 0, j), w2 = slice(w, j, w.size());
        if (!in_language(p.lhs(), w1) || !in_language(p.rhs(), w2)) continue;
        for (unsigned k : combinations_for(p.lhs(), w1)) out.insert(k);
        for (unsigned k : combinations_for(p.rhs(), w2)) out.insert(k + static_cast<unsigned>(j));
      }
      return out;
    case ProgramKind::Star:
      out.insert(0);
      for (std::size_t j = 1; j <= w.size(); ++j) {
        Word w1 = slice(w, 0, j), w2 = slice(w, j, w.size());
        if (!in_language(p.inner(), w1)) continue;
        for (unsigned k : combinations_for(p.inner(), w1)) out.insert(k);
        for (unsigned k : combinations_for(p, w2)) out.insert(k + static_cast<unsigned>(j));
      }
      return out;
    case ProgramKind::Test: throw TestNotSupported();
  }
  return out;
}

std::uint64_t star_max_pos(unsigned n, const Formula& f) {
  StarMaxMemo memo;
  return smp(n, f, memo);
}

std::uint64_t star_max_neg(unsigned n, const Formula& f) {
  StarMaxMemo memo;
  return smn(n, f, memo);
}

std::uint64_t star_max(const Sequent& s) {
  StarMaxMemo memo;
  u64 r = 0;
  for (const auto& i : s.antecedent)
    if (auto lf = as_formula(i)) r = sat_add(r, smn(path_max(lf->label, s), lf->formula, memo));
  for (const auto& i : s.consequent)
    if (auto lf = as_formula(i)) r = sat_add(r, smp(path_max(lf->label, s), lf->formula, memo));
  return r;
}

}  // namespace pdl
