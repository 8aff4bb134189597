#include "pdl/io.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "pdl/parser.hpp"

namespace pdl {

using json = nlohmann::ordered_json;

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

void check_schema(const json& doc, std::string_view want) {
  if (!doc.is_object()) throw FormatError("document is not an object");
  if (!doc.contains("schema") || !doc["schema"].is_string() || doc["schema"].get<std::string>() != want)
    throw FormatError("schema must be \"" + std::string(want) + "\"");
}

const json& field(const json& obj, const char* key) {
  if (!obj.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  return obj[key];
}

std::string str(const json& j, const char* what) {
  if (!j.is_string()) throw FormatError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

template <class F>
auto with_span(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw FormatError(what + ": " + e.what());
  }
}

}  // namespace

std::string render_proof(const CyclicPreProof& p) {
  json doc;
  doc["schema"] = kProofSchema;
  doc["root"] = p.root;
  json nodes = json::array();
  for (const auto& [id, n] : p.nodes) {
    json j;
    j["id"] = id;
    j["sequent"] = to_string(n.sequent);
    j["rule"] = std::string(rule_name(n.rule.kind));
    j["principal"] = n.rule.principal ? json(to_string(*n.rule.principal)) : json(nullptr);
    json params = json::object();
    if (n.rule.fresh) params["fresh"] = n.rule.fresh->name;
    if (n.rule.successor) params["successor"] = n.rule.successor->name;
    if (n.rule.from) params["from"] = n.rule.from->name;
    if (n.rule.to) params["to"] = n.rule.to->name;
    if (n.rule.cut) params["cut"] = to_string(*n.rule.cut);
    j["params"] = params;
    j["premises"] = n.premises;
    if (n.companion) j["companion"] = *n.companion;
    nodes.push_back(std::move(j));
  }
  doc["nodes"] = std::move(nodes);
  return doc.dump(2) + "\n";
}

CyclicPreProof parse_proof(std::string_view text) {
  json doc = parse_json(text);
  check_schema(doc, kProofSchema);
  const json& nodes = field(doc, "nodes");
  if (!nodes.is_array()) throw FormatError("\"nodes\" must be an array");
  if (nodes.empty()) throw FormatError("no root");
  CyclicPreProof p;
  for (const json& j : nodes) {
    if (!j.is_object()) throw FormatError("node must be an object");
    DerivationNode n;
    const json& id = field(j, "id");
    if (!id.is_number_integer()) throw FormatError("node id must be an integer");
    n.id = id.get<NodeId>();
    std::string where = "node " + std::to_string(n.id);
    if (p.has(n.id)) throw FormatError("duplicate node id " + std::to_string(n.id));
    n.sequent = with_span(where + " sequent", [&] { return parse_sequent(str(field(j, "sequent"), "sequent")); });
    std::string rname = str(field(j, "rule"), "rule");
    auto kind = rule_from_name(rname);
    if (!kind) throw FormatError(where + ": unknown rule \"" + rname + "\"");
    n.rule.kind = *kind;
    if (j.contains("principal") && !j["principal"].is_null())
      n.rule.principal = with_span(where + " principal", [&] { return parse_item(str(j["principal"], "principal")); });
    if (j.contains("params")) {
      const json& ps = j["params"];
      if (!ps.is_object()) throw FormatError(where + ": params must be an object");
      for (const auto& [k, v] : ps.items()) {
        if (k == "fresh") n.rule.fresh = Label{str(v, "fresh")};
        else if (k == "successor") n.rule.successor = Label{str(v, "successor")};
        else if (k == "from") n.rule.from = Label{str(v, "from")};
        else if (k == "to") n.rule.to = Label{str(v, "to")};
        else if (k == "cut") n.rule.cut = with_span(where + " cut", [&] { return parse_item(str(v, "cut")); });
        else throw FormatError(where + ": unknown parameter \"" + k + "\"");
      }
    }
    if (j.contains("premises")) {
      const json& ps = j["premises"];
      if (!ps.is_array()) throw FormatError(where + ": premises must be an array");
      for (const json& q : ps) {
        if (!q.is_number_integer()) throw FormatError(where + ": premise ids must be integers");
        n.premises.push_back(q.get<NodeId>());
      }
    }
    if (j.contains("companion") && !j["companion"].is_null()) {
      if (!j["companion"].is_number_integer()) throw FormatError(where + ": companion must be an integer");
      n.companion = j["companion"].get<NodeId>();
    }
    p.nodes.emplace(n.id, std::move(n));
  }
  const json& root = field(doc, "root");
  if (!root.is_number_integer()) throw FormatError("root must be an integer");
  p.root = root.get<NodeId>();
  if (!p.has(p.root)) throw FormatError("no root: node " + std::to_string(p.root) + " is absent");
  for (const auto& [id, n] : p.nodes) {
    for (NodeId q : n.premises)
      if (!p.has(q)) throw FormatError("node " + std::to_string(id) + ": dangling premise " + std::to_string(q));
    if (n.companion && !p.has(*n.companion))
      throw FormatError("node " + std::to_string(id) + ": dangling companion " + std::to_string(*n.companion));
  }
  return p;
}

std::string render_model(const KripkeModel& m, const std::optional<Valuation>& v) {
  json doc;
  doc["schema"] = kModelSchema;
  doc["states"] = m.states;
  json props = json::object();
  for (const auto& [p, ss] : m.props) {
    json arr = json::array();
    for (int s : ss) arr.push_back(m.states[s]);
    props[p] = arr;
  }
  doc["props"] = props;
  json progs = json::object();
  for (const auto& [a, es] : m.progs) {
    json arr = json::array();
    for (auto [s, t] : es) arr.push_back({m.states[s], m.states[t]});
    progs[a] = arr;
  }
  doc["progs"] = progs;
  if (v) {
    json val = json::object();
    for (const auto& [l, s] : *v) val[l.name] = m.states[s];
    doc["valuation"] = val;
  }
  return doc.dump(2) + "\n";
}

ModelDoc parse_model(std::string_view text) {
  json doc = parse_json(text);
  check_schema(doc, kModelSchema);
  ModelDoc out;
  KripkeModel& m = out.model;
  const json& states = field(doc, "states");
  if (!states.is_array()) throw FormatError("\"states\" must be an array");
  if (states.empty()) throw FormatError("at least one state required");
  std::set<std::string> seen;
  for (const json& s : states) {
    std::string name = str(s, "state");
    if (!seen.insert(name).second) throw FormatError("duplicate state \"" + name + "\"");
    m.states.push_back(name);
  }
  auto state = [&](const json& j) {
    std::string name = str(j, "state");
    int i = m.index_of(name);
    if (i < 0) throw FormatError("unknown state \"" + name + "\"");
    return i;
  };
  if (doc.contains("props")) {
    if (!doc["props"].is_object()) throw FormatError("\"props\" must be an object");
    for (const auto& [p, ss] : doc["props"].items()) {
      if (!ss.is_array()) throw FormatError("prop \"" + p + "\" must list states");
      auto& set = m.props[p];
      for (const json& s : ss) set.insert(state(s));
    }
  }
  if (doc.contains("progs")) {
    if (!doc["progs"].is_object()) throw FormatError("\"progs\" must be an object");
    for (const auto& [a, es] : doc["progs"].items()) {
      if (!es.is_array()) throw FormatError("program \"" + a + "\" must list edges");
      auto& set = m.progs[a];
      for (const json& e : es) {
        if (!e.is_array() || e.size() != 2) throw FormatError("edge of \"" + a + "\" must be a pair");
        set.insert({state(e[0]), state(e[1])});
      }
    }
  }
  if (doc.contains("valuation") && !doc["valuation"].is_null()) {
    if (!doc["valuation"].is_object()) throw FormatError("\"valuation\" must be an object");
    Valuation v;
    for (const auto& [l, s] : doc["valuation"].items()) v[Label{l}] = state(s);
    out.valuation = std::move(v);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace pdl
