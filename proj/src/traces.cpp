#include "pdl/traces.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

namespace pdl {

std::strong_ordering TraceValue::operator<=>(const TraceValue& o) const {
  if (auto c = label <=> o.label; c != 0) return c;
  if (auto c = std::lexicographical_compare_three_way(spine.begin(), spine.end(), o.spine.begin(), o.spine.end());
      c != 0)
    return c;
  if (auto c = focus <=> o.focus; c != 0) return c;
  return formula <=> o.formula;
}

Formula TraceValue::as_formula() const {
  Formula f = Formula::box(Program::star(focus), formula);
  for (auto it = spine.rbegin(); it != spine.rend(); ++it) f = Formula::box(*it, f);
  return f;
}

std::string to_string(const TraceValue& t) {
  std::string out = "(" + t.label.name + ", <";
  for (std::size_t i = 0; i < t.spine.size(); ++i) {
    if (i) out += ", ";
    out += to_string(t.spine[i]);
  }
  return out + ">, " + to_string(t.focus) + ", " + to_string(t.formula) + ")";
}

std::set<TraceValue> trace_values_of(const LabelledFormula& lf) {
  std::set<TraceValue> out;
  std::vector<Program> spine;
  Formula f = lf.formula;
  while (f.is_box()) {
    Program p = f.program();
    if (p.kind() == ProgramKind::Star) out.insert(TraceValue{lf.label, spine, p.inner(), f.body()});
    spine.push_back(p);
    f = f.body();
  }
  return out;
}

std::set<TraceValue> trace_values_of(const Sequent& s) {
  std::set<TraceValue> out;
  for (const auto& i : s.consequent)
    if (auto lf = as_formula(i)) out.merge(trace_values_of(*lf));
  return out;
}

namespace {

TraceValue with_spine(const TraceValue& t, const Label& l, std::vector<Program> spine) {
  return TraceValue{l, std::move(spine), t.focus, t.formula};
}

std::vector<Program> tail(const std::vector<Program>& v) { return {v.begin() + 1, v.end()}; }

std::vector<Program> prepend(std::initializer_list<Program> front, const std::vector<Program>& rest) {
  std::vector<Program> out(front);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

TraceValue rename(const TraceValue& t, const Label& from, const Label& to) {
  TraceValue out = t;
  if (out.label == from) out.label = to;
  return out;
}

}  // namespace

std::set<TracePair> trace_pairs(const Sequent& conclusion, const RuleInstance& r, std::size_t premise_index,
                                const Sequent& premise) {
  std::set<TracePair> out;
  std::set<TraceValue> after = trace_values_of(premise);
  auto add = [&](const TraceValue& a, const TraceValue& b, bool prog) {
    if (after.count(b)) out.insert(TracePair{a, b, prog});
  };
  std::optional<LabelledFormula> principal;
  if (r.principal && principal_side(r.kind) == PrincipalSide::Right)
    if (auto lf = as_formula(*r.principal)) principal = *lf;

  for (const TraceValue& t : trace_values_of(conclusion)) {
    if (principal && t.as_labelled() == *principal) {
      const auto& sp = t.spine;
      switch (r.kind) {
        case RuleKind::BoxR:
          if (!sp.empty() && r.fresh) add(t, with_spine(t, *r.fresh, tail(sp)), false);
          break;
        case RuleKind::TestR:
          if (!sp.empty()) add(t, with_spine(t, t.label, tail(sp)), false);
          break;
        case RuleKind::SeqR:
          if (!sp.empty() && sp[0].kind() == ProgramKind::Seq)
            add(t, with_spine(t, t.label, prepend({sp[0].lhs(), sp[0].rhs()}, tail(sp))), false);
          break;
        case RuleKind::ChoiceR:
          if (!sp.empty() && sp[0].kind() == ProgramKind::Choice)
            add(t, with_spine(t, t.label, prepend({premise_index == 0 ? sp[0].lhs() : sp[0].rhs()}, tail(sp))), false);
          break;
        case RuleKind::StarR:
          if (premise_index == 0) {
            if (!sp.empty()) add(t, with_spine(t, t.label, tail(sp)), false);
          } else {
            Program alpha = principal->formula.program().inner();
            add(t, with_spine(t, t.label, prepend({alpha}, sp)), sp.empty());
          }
          break;
        default:
          break;
      }
      continue;
    }
    if (r.kind == RuleKind::Subst) {
      if (!r.from || !r.to) continue;
      for (const TraceValue& u : after)
        if (rename(u, *r.from, *r.to) == t) out.insert(TracePair{t, u, false});
      continue;
    }
    add(t, t, false);
  }
  return out;
}

TraceEdge trace_pairs(const CyclicPreProof& p, NodeId node, int premise_index) {
  const DerivationNode& n = p.at(node);
  TraceEdge e;
  e.from = node;
  if (premise_index < 0) {
    e.to = *n.companion;
    for (const auto& t : trace_values_of(n.sequent)) e.pairs.insert(TracePair{t, t, false});
    return e;
  }
  e.to = n.premises.at(premise_index);
  e.pairs = trace_pairs(n.sequent, n.rule, static_cast<std::size_t>(premise_index), p.at(e.to).sequent);
  return e;
}

std::string to_string(const Lasso& l) {
  std::string out = "stem:";
  for (NodeId id : l.stem) out += " " + std::to_string(id);
  out += " loop:";
  for (NodeId id : l.loop) out += " " + std::to_string(id);
  return out;
}

namespace {

// Relation between trace values of two nodes: 0 none, 1 pair, 2 progressing.
struct Rel {
  std::size_t rows = 0, cols = 0;
  std::vector<std::uint8_t> v;
  std::uint8_t at(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
  auto operator<=>(const Rel&) const = default;
};

Rel compose(const Rel& a, const Rel& b) {
  Rel c{a.rows, b.cols, std::vector<std::uint8_t>(a.rows * b.cols, 0)};
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      std::uint8_t x = a.at(i, k);
      if (!x) continue;
      for (std::size_t j = 0; j < b.cols; ++j) {
        std::uint8_t y = b.at(k, j);
        if (!y) continue;
        std::uint8_t f = (x == 2 || y == 2) ? 2 : 1;
        auto& cell = c.v[i * b.cols + j];
        cell = std::max(cell, f);
      }
    }
  return c;
}

struct Indexed {
  std::map<NodeId, std::vector<TraceValue>> values;
  std::map<NodeId, std::vector<CycleEdge>> out;
  std::map<std::pair<NodeId, NodeId>, Rel> rel;

  explicit Indexed(const CyclicPreProof& p) {
    CycleGraph g = cycle_graph(p);
    for (NodeId id : g.nodes) {
      auto tv = trace_values_of(p.at(id).sequent);
      values[id] = {tv.begin(), tv.end()};
    }
    out = g.out;
    for (const auto& [id, edges] : g.out)
      for (const auto& e : edges) {
        TraceEdge te = trace_pairs(p, id, e.premise_index);
        const auto& a = values[e.from];
        const auto& b = values[e.to];
        Rel r{a.size(), b.size(), std::vector<std::uint8_t>(a.size() * b.size(), 0)};
        for (const auto& pr : te.pairs) {
          std::size_t i = std::lower_bound(a.begin(), a.end(), pr.from) - a.begin();
          std::size_t j = std::lower_bound(b.begin(), b.end(), pr.to) - b.begin();
          r.v[i * b.size() + j] = pr.progressing ? 2 : 1;
        }
        rel[{e.from, e.to}] = std::move(r);
      }
  }
};

// Strongly connected component id per node (Tarjan).
std::map<NodeId, int> components(const std::map<NodeId, std::vector<CycleEdge>>& out) {
  std::map<NodeId, int> index, low, comp;
  std::vector<NodeId> stack;
  std::set<NodeId> on;
  int counter = 0, ncomp = 0;
  std::function<void(NodeId)> visit = [&](NodeId u) {
    index[u] = low[u] = counter++;
    stack.push_back(u);
    on.insert(u);
    auto it = out.find(u);
    if (it != out.end())
      for (const auto& e : it->second) {
        if (!index.count(e.to)) {
          visit(e.to);
          low[u] = std::min(low[u], low[e.to]);
        } else if (on.count(e.to)) {
          low[u] = std::min(low[u], index[e.to]);
        }
      }
    if (low[u] == index[u]) {
      for (;;) {
        NodeId w = stack.back();
        stack.pop_back();
        on.erase(w);
        comp[w] = ncomp;
        if (w == u) break;
      }
      ++ncomp;
    }
  };
  for (const auto& [u, _] : out)
    if (!index.count(u)) visit(u);
  return comp;
}

std::vector<NodeId> stem_to(const CyclicPreProof& p, const std::map<NodeId, std::vector<CycleEdge>>& out, NodeId target) {
  std::map<NodeId, NodeId> parent;
  std::deque<NodeId> q{p.root};
  parent[p.root] = p.root;
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop_front();
    if (u == target) break;
    auto it = out.find(u);
    if (it == out.end()) continue;
    for (const auto& e : it->second)
      if (!parent.count(e.to)) {
        parent[e.to] = u;
        q.push_back(e.to);
      }
  }
  std::vector<NodeId> path;
  if (!parent.count(target)) return path;
  for (NodeId u = target;; u = parent[u]) {
    path.push_back(u);
    if (u == p.root) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

GtcResult check_gtc(const CyclicPreProof& p) {
  GtcResult res;
  if (!p.has(p.root)) return res;
  Indexed ix(p);
  auto comp = components(ix.out);

  struct Entry {
    Rel rel;
    std::vector<NodeId> path;
  };
  // closure[(u, v)] : relation -> witness walk u..v
  std::map<std::pair<NodeId, NodeId>, std::map<Rel, std::vector<NodeId>>> closure;
  std::map<NodeId, std::vector<NodeId>> succ_pairs, pred_pairs;
  std::deque<std::tuple<NodeId, NodeId, Rel>> work;

  auto insert = [&](NodeId u, NodeId v, Rel r, std::vector<NodeId> path) {
    auto& slot = closure[{u, v}];
    if (slot.count(r)) return;
    if (slot.empty()) {
      succ_pairs[u].push_back(v);
      pred_pairs[v].push_back(u);
    }
    slot.emplace(r, std::move(path));
    work.emplace_back(u, v, std::move(r));
  };

  for (const auto& [u, edges] : ix.out)
    for (const auto& e : edges)
      if (comp[e.from] == comp[e.to]) insert(e.from, e.to, ix.rel.at({e.from, e.to}), {e.from, e.to});

  while (!work.empty()) {
    auto [u, v, r] = work.front();
    work.pop_front();
    std::vector<NodeId> path_uv = closure[{u, v}].at(r);
    // Right extensions (u,v);(v,w) and left extensions (t,u);(u,v).
    std::vector<NodeId> ws = succ_pairs[v];
    for (NodeId w : ws) {
      auto rights = closure[{v, w}];
      for (const auto& [r2, path_vw] : rights) {
        std::vector<NodeId> path = path_uv;
        path.insert(path.end(), path_vw.begin() + 1, path_vw.end());
        insert(u, w, compose(r, r2), std::move(path));
      }
    }
    std::vector<NodeId> ts = pred_pairs[u];
    for (NodeId t : ts) {
      auto lefts = closure[{t, u}];
      for (const auto& [r0, path_tu] : lefts) {
        std::vector<NodeId> path = path_tu;
        path.insert(path.end(), path_uv.begin() + 1, path_uv.end());
        insert(t, v, compose(r0, r), std::move(path));
      }
    }
  }

  for (const auto& [uv, rels] : closure) {
    res.closure_size += rels.size();
    if (uv.first != uv.second) continue;
    for (const auto& [r, path] : rels) {
      if (compose(r, r) != r) continue;
      bool good = false;
      for (std::size_t i = 0; i < r.rows && !good; ++i) good = r.at(i, i) == 2;
      if (good) continue;
      if (res.accepted) {
        res.accepted = false;
        Lasso l;
        l.stem = stem_to(p, ix.out, uv.first);
        l.loop.assign(path.begin() + 1, path.end());
        res.witness = l;
      }
    }
  }
  return res;
}

namespace {

// Does the periodic walk w0 -> w1 -> ... -> w0 carry an infinitely
// progressing trace? Build the trace graph over loop positions and look
// for a cycle through a progressing edge.
bool loop_has_good_trace(const Indexed& ix, const std::vector<NodeId>& walk) {
  std::size_t k = walk.size();
  std::vector<std::size_t> offset(k + 1, 0);
  for (std::size_t i = 0; i < k; ++i) offset[i + 1] = offset[i] + ix.values.at(walk[i]).size();
  std::size_t nv = offset[k];
  std::vector<std::vector<std::pair<std::size_t, bool>>> adj(nv);
  for (std::size_t i = 0; i < k; ++i) {
    NodeId a = walk[i], b = walk[(i + 1) % k];
    const Rel& r = ix.rel.at({a, b});
    std::size_t j = (i + 1) % k;
    for (std::size_t x = 0; x < r.rows; ++x)
      for (std::size_t y = 0; y < r.cols; ++y)
        if (r.at(x, y)) adj[offset[i] + x].push_back({offset[j] + y, r.at(x, y) == 2});
  }
  // Tarjan over the trace graph.
  std::vector<int> index(nv, -1), low(nv, 0), comp(nv, -1);
  std::vector<std::size_t> stack;
  std::vector<bool> on(nv, false);
  int counter = 0, ncomp = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t u) {
    index[u] = low[u] = counter++;
    stack.push_back(u);
    on[u] = true;
    for (auto [w, _] : adj[u]) {
      if (index[w] < 0) {
        visit(w);
        low[u] = std::min(low[u], low[w]);
      } else if (on[w]) {
        low[u] = std::min(low[u], index[w]);
      }
    }
    if (low[u] == index[u]) {
      for (;;) {
        std::size_t w = stack.back();
        stack.pop_back();
        on[w] = false;
        comp[w] = ncomp;
        if (w == u) break;
      }
      ++ncomp;
    }
  };
  for (std::size_t u = 0; u < nv; ++u)
    if (index[u] < 0) visit(u);
  for (std::size_t u = 0; u < nv; ++u)
    for (auto [w, prog] : adj[u])
      if (prog && comp[u] == comp[w]) return true;
  return false;
}

}  // namespace

OracleResult gtc_oracle(const CyclicPreProof& p, std::size_t stem_bound, std::size_t loop_bound) {
  OracleResult res;
  if (!p.has(p.root)) {
    res.verdict = OracleResult::Verdict::Accepted;
    return res;
  }
  Indexed ix(p);
  bool complete = true;

  // Shortest stems by BFS.
  std::map<NodeId, std::size_t> dist{{p.root, 0}};
  std::deque<NodeId> q{p.root};
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop_front();
    for (const auto& e : ix.out[u])
      if (!dist.count(e.to)) {
        dist[e.to] = dist[u] + 1;
        q.push_back(e.to);
      }
  }

  for (const auto& [n, d] : dist) {
    res.needed_stem = std::max(res.needed_stem, d);
    if (p.at(n).is_bud()) continue;
    if (d > stem_bound) {
      complete = false;
      continue;
    }
    // Walks from n, identified up to the composed relation they induce.
    const auto& tv = ix.values[n];
    Rel id{tv.size(), tv.size(), std::vector<std::uint8_t>(tv.size() * tv.size(), 0)};
    for (std::size_t i = 0; i < tv.size(); ++i) id.v[i * tv.size() + i] = 1;
    struct State {
      NodeId at;
      Rel rel;
      std::vector<NodeId> walk;
    };
    std::set<std::pair<NodeId, Rel>> seen{{n, id}};
    std::vector<State> frontier{{n, id, {n}}};
    std::size_t depth = 0;
    while (!frontier.empty()) {
      if (depth == loop_bound) {
        complete = false;
        break;
      }
      ++depth;
      std::vector<State> next;
      for (const auto& s : frontier)
        for (const auto& e : ix.out[s.at]) {
          Rel r = compose(s.rel, ix.rel.at({s.at, e.to}));
          std::vector<NodeId> walk = s.walk;
          walk.push_back(e.to);
          NodeId to = e.to;
          // a bud hop is not a step
          if (p.at(to).is_bud()) {
            NodeId c = *p.at(to).companion;
            r = compose(r, ix.rel.at({to, c}));
            walk.push_back(c);
            to = c;
          }
          if (!seen.insert({to, r}).second) continue;
          if (to == n) {
            std::vector<NodeId> loop(walk.begin(), walk.end() - 1);
            if (!loop_has_good_trace(ix, loop)) {
              res.verdict = OracleResult::Verdict::Rejected;
              Lasso l;
              l.stem = stem_to(p, ix.out, n);
              l.loop.assign(walk.begin() + 1, walk.end());
              res.witness = l;
              return res;
            }
          }
          next.push_back({to, std::move(r), std::move(walk)});
        }
      frontier = std::move(next);
    }
    res.needed_loop = std::max(res.needed_loop, depth);
  }
  res.verdict = complete ? OracleResult::Verdict::Accepted : OracleResult::Verdict::Inconclusive;
  return res;
}

}  // namespace pdl
