#include "pdl/semantics.hpp"

#include <algorithm>
#include <functional>

namespace pdl {

Relation Relation::identity(int n) {
  Relation r(n);
  for (int i = 0; i < n; ++i) r.set(i, i);
  return r;
}

Relation Relation::identity_on(const StateSet& s) {
  Relation r(static_cast<int>(s.size()));
  for (int i = 0; i < r.size(); ++i)
    if (s[i]) r.set(i, i);
  return r;
}

Relation Relation::compose(const Relation& o) const {
  Relation r(n_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k)
      if (has(i, k))
        for (int j = 0; j < n_; ++j)
          if (o.has(k, j)) r.set(i, j);
  return r;
}

Relation Relation::unite(const Relation& o) const {
  Relation r = *this;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (o.has(i, j)) r.set(i, j);
  return r;
}

Relation Relation::reflexive_transitive_closure() const {
  Relation r = *this;
  for (int i = 0; i < n_; ++i) r.set(i, i);
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      if (r.has(i, k))
        for (int j = 0; j < n_; ++j)
          if (r.has(k, j)) r.set(i, j);
  return r;
}

std::set<std::pair<int, int>> Relation::pairs() const {
  std::set<std::pair<int, int>> out;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (has(i, j)) out.emplace(i, j);
  return out;
}

int KripkeModel::index_of(const std::string& state) const {
  auto it = std::find(states.begin(), states.end(), state);
  return it == states.end() ? -1 : static_cast<int>(it - states.begin());
}

Relation KripkeModel::any_step() const {
  Relation r(size());
  for (const auto& [name, edges] : progs)
    for (auto [i, j] : edges) r.set(i, j);
  return r;
}

Relation interp_program(const KripkeModel& m, const Program& p) {
  int n = m.size();
  switch (p.kind()) {
    case ProgramKind::Atomic: {
      Relation r(n);
      auto it = m.progs.find(p.name());
      if (it != m.progs.end())
        for (auto [i, j] : it->second) r.set(i, j);
      return r;
    }
    case ProgramKind::Seq: return interp_program(m, p.lhs()).compose(interp_program(m, p.rhs()));
    case ProgramKind::Choice: return interp_program(m, p.lhs()).unite(interp_program(m, p.rhs()));
    case ProgramKind::Test: return Relation::identity_on(interp_formula(m, p.formula()));
    case ProgramKind::Star: return interp_program(m, p.inner()).reflexive_transitive_closure();
  }
  return Relation(n);
}

StateSet interp_formula(const KripkeModel& m, const Formula& f) {
  int n = m.size();
  StateSet out(n, false);
  switch (f.kind()) {
    case FormulaKind::Bottom: break;
    case FormulaKind::Atom: {
      auto it = m.props.find(f.name());
      if (it != m.props.end())
        for (int s : it->second) out[s] = true;
      break;
    }
    case FormulaKind::And: {
      StateSet a = interp_formula(m, f.lhs()), b = interp_formula(m, f.rhs());
      for (int i = 0; i < n; ++i) out[i] = a[i] && b[i];
      break;
    }
    case FormulaKind::Or: {
      StateSet a = interp_formula(m, f.lhs()), b = interp_formula(m, f.rhs());
      for (int i = 0; i < n; ++i) out[i] = a[i] || b[i];
      break;
    }
    case FormulaKind::Implies: {
      StateSet a = interp_formula(m, f.lhs()), b = interp_formula(m, f.rhs());
      for (int i = 0; i < n; ++i) out[i] = !a[i] || b[i];
      break;
    }
    case FormulaKind::Box: {
      // S \ pi_1(R o Id(S \ [[body]]))
      Relation r = interp_program(m, f.program());
      StateSet b = interp_formula(m, f.body());
      for (int i = 0; i < n; ++i) {
        bool ok = true;
        for (int j = 0; j < n && ok; ++j)
          if (r.has(i, j) && !b[j]) ok = false;
        out[i] = ok;
      }
      break;
    }
  }
  return out;
}

namespace {

int lookup(const Valuation& v, const Label& l) {
  auto it = v.find(l);
  if (it == v.end()) throw SemanticsError("valuation does not cover label " + l.name);
  return it->second;
}

bool holds(const KripkeModel& m, const Valuation& v, const Item& i) {
  if (auto r = as_atom(i)) {
    int s = lookup(v, r->src), t = lookup(v, r->dst);
    auto it = m.progs.find(r->prog);
    return it != m.progs.end() && it->second.count({s, t}) > 0;
  }
  const auto& lf = std::get<LabelledFormula>(i);
  int s = lookup(v, lf.label);
  return interp_formula(m, lf.formula)[s];
}

}  // namespace

bool satisfies_item(const KripkeModel& m, const Valuation& v, const Item& i) { return holds(m, v, i); }

bool satisfies_sequent(const KripkeModel& m, const Valuation& v, const Sequent& s) {
  for (const auto& l : labels_of(s)) lookup(v, l);
  for (const auto& a : s.antecedent)
    if (!holds(m, v, a)) return true;
  for (const auto& c : s.consequent)
    if (holds(m, v, c)) return true;
  return false;
}

BruteForceResult brute_force_countermodel(const Sequent& seq, int max_states, BruteForceLimits limits) {
  std::vector<std::string> props, progs;
  for (const auto& p : prop_names(seq)) props.push_back(p);
  for (const auto& a : prog_names(seq)) progs.push_back(a);
  std::vector<Label> labels;
  for (const auto& l : labels_of(seq)) labels.push_back(l);

  std::uint64_t checks = 0;
  BruteForceResult res;
  for (int n = 1; n <= max_states; ++n) {
    std::size_t prog_bits = progs.size() * n * n, prop_bits = props.size() * n;
    if (prog_bits + prop_bits >= 63) {
      res.status = BruteForceResult::Status::Timeout;
      return res;
    }
    KripkeModel m;
    for (int i = 0; i < n; ++i) m.states.push_back("s" + std::to_string(i + 1));
    for (std::uint64_t em = 0; em < (1ULL << prog_bits); ++em) {
      for (std::size_t a = 0; a < progs.size(); ++a) {
        auto& edges = m.progs[progs[a]];
        edges.clear();
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            if (em >> (a * n * n + i * n + j) & 1) edges.emplace(i, j);
      }
      for (std::uint64_t pm = 0; pm < (1ULL << prop_bits); ++pm) {
        if (limits.cancel && limits.cancel->load()) {
          res.status = BruteForceResult::Status::Timeout;
          return res;
        }
        for (std::size_t p = 0; p < props.size(); ++p) {
          auto& st = m.props[props[p]];
          st.clear();
          for (int i = 0; i < n; ++i)
            if (pm >> (p * n + i) & 1) st.insert(i);
        }
        // Evaluate each labelled formula once per model.
        std::map<Formula, StateSet> cache;
        auto item_holds = [&](const Item& it, const Valuation& v) {
          if (auto r = as_atom(it)) return m.progs[r->prog].count({v.at(r->src), v.at(r->dst)}) > 0;
          const auto& lf = std::get<LabelledFormula>(it);
          auto c = cache.find(lf.formula);
          if (c == cache.end()) c = cache.emplace(lf.formula, interp_formula(m, lf.formula)).first;
          return static_cast<bool>(c->second[v.at(lf.label)]);
        };
        std::vector<int> assign(labels.size(), 0);
        for (;;) {
          if (++checks > limits.max_checks) {
            res.status = BruteForceResult::Status::Timeout;
            return res;
          }
          Valuation v;
          for (std::size_t k = 0; k < labels.size(); ++k) v[labels[k]] = assign[k];
          bool falsified = std::all_of(seq.antecedent.begin(), seq.antecedent.end(),
                                       [&](const Item& it) { return item_holds(it, v); }) &&
                           std::none_of(seq.consequent.begin(), seq.consequent.end(),
                                        [&](const Item& it) { return item_holds(it, v); });
          if (falsified) {
            res.status = BruteForceResult::Status::Found;
            res.found = Countermodel{m, v};
            return res;
          }
          std::size_t k = 0;
          while (k < assign.size() && ++assign[k] == n) assign[k++] = 0;
          if (k == assign.size()) break;
        }
      }
    }
  }
  res.status = BruteForceResult::Status::NotFound;
  return res;
}

std::optional<unsigned> path_weight(const KripkeModel& m, const ModelPath& path, const TraceValue& t) {
  if (path.empty()) return std::nullopt;
  std::size_t len = path.size();
  // reach[k]: some partition of the spine prefix ends at position k.
  std::vector<bool> reach(len, false);
  reach[0] = true;
  for (const Program& a : t.spine) {
    Relation r = interp_program(m, a);
    std::vector<bool> next(len, false);
    for (std::size_t k = 0; k < len; ++k)
      if (reach[k])
        for (std::size_t k2 = k; k2 < len; ++k2)
          if (r.has(path[k], path[k2])) next[k2] = true;
    reach = std::move(next);
  }
  Relation fr = interp_program(m, Program::star(t.focus));
  for (std::size_t k = 0; k < len; ++k)
    if (reach[k] && fr.has(path[k], path[len - 1])) return static_cast<unsigned>(len - k);
  return std::nullopt;
}

std::set<ModelPath> counterexample_paths(const KripkeModel& m, const Valuation& v, const TraceValue& t) {
  std::set<ModelPath> out;
  auto it = v.find(t.label);
  if (it == v.end()) throw SemanticsError("valuation does not cover label " + t.label.name);
  Relation step = m.any_step();
  StateSet good = interp_formula(m, t.formula);
  ModelPath path{it->second};
  std::vector<bool> on_path(m.size(), false);
  on_path[it->second] = true;
  // The first counterexample along a branch is prefix-minimal; stop there.
  std::function<void()> dfs = [&]() {
    if (!good[path.back()] && path_weight(m, path, t)) {
      out.insert(path);
      return;
    }
    for (int j = 0; j < m.size(); ++j) {
      if (on_path[j] || !step.has(path.back(), j)) continue;
      on_path[j] = true;
      path.push_back(j);
      dfs();
      path.pop_back();
      on_path[j] = false;
    }
  };
  dfs();
  return out;
}

std::size_t TraceMeasure::total() const {
  std::size_t t = 0;
  for (auto [w, c] : counts_) t += c;
  return t;
}

std::string to_string(const TraceMeasure& m) {
  std::string out = "{";
  bool first = true;
  for (auto [w, c] : m.counts())
    for (unsigned i = 0; i < c; ++i) {
      if (!first) out += ",";
      out += std::to_string(w);
      first = false;
    }
  return out + "}";
}

TraceMeasure trace_value_measure(const KripkeModel& m, const Valuation& v, const TraceValue& t) {
  TraceMeasure out;
  for (const auto& p : counterexample_paths(m, v, t)) out.add(*path_weight(m, p, t));
  return out;
}

bool dm_less(const TraceMeasure& m, const TraceMeasure& n) {
  if (m == n) return false;
  for (auto [y, my] : m.counts()) {
    if (n.count(y) >= my) continue;
    bool witness = false;
    for (auto [x, nx] : n.counts())
      if (x > y && m.count(x) < nx) {
        witness = true;
        break;
      }
    if (!witness) return false;
  }
  return true;
}

bool dm_leq(const TraceMeasure& m, const TraceMeasure& n) { return m == n || dm_less(m, n); }

}  // namespace pdl
