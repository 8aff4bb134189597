#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "pdl/io.hpp"
#include "pdl/kernel.hpp"
#include "pdl/parser.hpp"
#include "pdl/schemata.hpp"
#include "pdl/search.hpp"
#include "pdl/semantics.hpp"
#include "pdl/traces.hpp"

using namespace pdl;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kUnknown = 3 };

bool g_json = false;

bool color() {
  const char* c = std::getenv("PDL_COLOR");
  return c && std::string(c) == "1";
}

std::string paint(const std::string& s, const char* code) {
  if (!color()) return s;
  return std::string("\033[") + code + "m" + s + "\033[0m";
}

int emit(json j, const std::string& human, int code) {
  if (g_json) {
    j["exit"] = code;
    std::cout << j.dump() << "\n";
  } else if (!human.empty()) {
    std::cout << human << "\n";
  }
  return code;
}

int fail(const std::string& cmd, const std::string& msg) {
  if (g_json) {
    std::cout << json{{"command", cmd}, {"verdict", "error"}, {"error", msg}, {"exit", int(kUsage)}}.dump() << "\n";
  } else {
    std::cerr << paint("error", "31") << ": " << msg << "\n";
  }
  return kUsage;
}

// "|- x: phi" for a bare formula.
Sequent goal_of(const std::string& text) {
  if (text.find("|-") != std::string::npos) return parse_sequent(text);
  return Sequent{{}, {labelled("x", parse_formula(text))}};
}

int cmd_parse(const std::string& text, bool as_sequent, bool as_program) {
  try {
    std::string kind, out;
    if (as_program) {
      kind = "program";
      out = to_string(parse_program(text));
    } else if (as_sequent || text.find("|-") != std::string::npos) {
      kind = "sequent";
      out = to_string(parse_sequent(text));
    } else {
      kind = "formula";
      out = to_string(parse_formula(text));
    }
    return emit({{"command", "parse"}, {"verdict", "ok"}, {"kind", kind}, {"canonical", out}}, out, kOk);
  } catch (const ParseError& e) {
    return fail("parse", e.detail());
  }
}

int cmd_check(const std::string& path, bool allow_open) {
  CyclicPreProof p;
  try {
    p = parse_proof(read_file(path));
  } catch (const std::exception& e) {
    return fail("check", e.what());
  }
  auto errs = check_pre_proof(p, allow_open);
  if (!errs.empty()) {
    json arr = json::array();
    std::string human = paint("local check failed", "31");
    for (const auto& e : errs) {
      arr.push_back(to_string(e));
      human += "\n  " + to_string(e);
    }
    return emit({{"command", "check"}, {"verdict", "invalid"}, {"errors", arr}}, human, kNegative);
  }
  GtcResult g = check_gtc(p);
  if (!g.accepted) {
    std::string lasso = g.witness ? to_string(*g.witness) : "";
    return emit({{"command", "check"}, {"verdict", "gtc-violated"}, {"lasso", lasso}},
                paint("GTC violated", "31") + "\n  " + lasso, kNegative);
  }
  std::string what = allow_open && !p.open_leaves().empty() ? "valid open derivation" : "valid cyclic proof";
  return emit({{"command", "check"},
               {"verdict", "valid"},
               {"nodes", p.nodes.size()},
               {"buds", p.buds().size()},
               {"closure", g.closure_size}},
              paint(what, "32"), kOk);
}

int cmd_prove(const std::string& goal_text, const SearchBudget& budget, const std::string& proof_out,
              const std::string& model_out) {
  Sequent goal;
  try {
    goal = goal_of(goal_text);
  } catch (const ParseError& e) {
    return fail("prove", e.detail());
  }
  SearchOptions opts;
  opts.budget = budget;
  SearchOutcome o;
  try {
    o = prove_test_free(goal, opts);
  } catch (const std::invalid_argument& e) {
    return fail("prove", e.what());
  }
  json j{{"command", "prove"}, {"goal", to_string(goal)}, {"unwindings", o.unwindings}};
  try {
    switch (o.kind) {
      case SearchOutcome::Kind::Proof: {
        std::string text = render_proof(*o.proof);
        if (!proof_out.empty()) write_file(proof_out, text);
        j["verdict"] = "proof";
        j["nodes"] = o.proof->nodes.size();
        std::string human = paint("proof found", "32") + " (" + std::to_string(o.proof->nodes.size()) + " nodes)";
        if (proof_out.empty() && !g_json) human += "\n" + text;
        return emit(j, human, kOk);
      }
      case SearchOutcome::Kind::Countermodel: {
        std::string text = render_model(o.countermodel->model, o.countermodel->valuation);
        if (!model_out.empty()) write_file(model_out, text);
        j["verdict"] = "countermodel";
        j["states"] = o.countermodel->model.size();
        std::string human = paint("countermodel found", "31");
        if (model_out.empty() && !g_json) human += "\n" + text;
        return emit(j, human, kNegative);
      }
      case SearchOutcome::Kind::Unknown:
        j["verdict"] = "unknown";
        j["reason"] = o.reason;
        return emit(j, paint("unknown", "33") + ": " + o.reason, kUnknown);
    }
  } catch (const std::exception& e) {
    return fail("prove", e.what());
  }
  return kUnknown;
}

int cmd_modelcheck(const std::string& path, const std::string& seq_text, const std::vector<std::string>& vals) {
  try {
    ModelDoc doc = parse_model(read_file(path));
    Sequent s = goal_of(seq_text);
    Valuation v = doc.valuation.value_or(Valuation{});
    for (const auto& kv : vals) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) return fail("modelcheck", "valuation entry must be label=state: " + kv);
      int st = doc.model.index_of(kv.substr(eq + 1));
      if (st < 0) return fail("modelcheck", "unknown state \"" + kv.substr(eq + 1) + "\"");
      v[Label{kv.substr(0, eq)}] = st;
    }
    bool sat = satisfies_sequent(doc.model, v, s);
    return emit({{"command", "modelcheck"}, {"verdict", sat ? "satisfied" : "falsified"}, {"sequent", to_string(s)}},
                sat ? paint("satisfied", "32") : paint("falsified", "31"), sat ? kOk : kNegative);
  } catch (const ParseError& e) {
    return fail("modelcheck", e.detail());
  } catch (const std::exception& e) {
    return fail("modelcheck", e.what());
  }
}

struct AxiomFlags {
  int id = 0;
  std::string alpha = "a", beta = "b", phi = "p", psi = "q";
};

int cmd_axioms(const std::string& dir, const AxiomFlags& f) {
  try {
    AxiomParams ps{parse_program(f.alpha), parse_program(f.beta), parse_formula(f.phi), parse_formula(f.psi)};
    std::vector<int> ids;
    if (f.id) {
      if (f.id < 1 || f.id > kAxiomCount) return fail("axioms", "no axiom " + std::to_string(f.id));
      ids.push_back(f.id);
    } else {
      for (int i = 1; i <= 6; ++i) ids.push_back(i);
    }
    if (!dir.empty()) std::filesystem::create_directories(dir);
    json files = json::array();
    std::string human;
    for (int id : ids) {
      CyclicPreProof p = derive_axiom(id, ps);
      bool ok = check_pre_proof(p).empty() && check_gtc(p).accepted;
      if (!ok) return fail("axioms", "derivation of axiom " + std::to_string(id) + " failed validation");
      std::string name = "axiom" + std::to_string(id) + "-" + axiom_name(id) + ".proof.json";
      std::string text = render_proof(p);
      if (!dir.empty()) {
        std::string path = (std::filesystem::path(dir) / name).string();
        write_file(path, text);
        files.push_back(path);
        human += (human.empty() ? "" : "\n") + path;
      } else {
        human += (human.empty() ? "" : "\n") + text;
      }
    }
    return emit({{"command", "axioms"}, {"verdict", "ok"}, {"files", files}}, human, kOk);
  } catch (const ParseError& e) {
    return fail("axioms", e.detail());
  } catch (const std::exception& e) {
    return fail("axioms", e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pdl: labelled cyclic sequent calculus toolkit"};
  app.require_subcommand(1);
  app.add_flag("--json", g_json, "machine-readable output");

  std::string text;
  bool as_sequent = false, as_program = false;
  auto* parse = app.add_subcommand("parse", "echo the canonical form of a formula, program or sequent");
  parse->add_option("text", text)->required();
  parse->add_flag("--sequent", as_sequent);
  parse->add_flag("--program", as_program);

  std::string proof_path;
  bool allow_open = false;
  auto* check = app.add_subcommand("check", "validate a proof file");
  check->add_option("proof", proof_path)->required();
  check->add_flag("--allow-open", allow_open, "accept open leaves");

  std::string goal, emit_proof, emit_model;
  SearchBudget budget;
  auto* prove = app.add_subcommand("prove", "search for a proof or countermodel (test-free, acyclic)");
  prove->add_option("goal", goal, "formula (labelled x) or sequent")->required();
  prove->add_option("--max-steps", budget.max_steps);
  prove->add_option("--max-iters", budget.max_iters);
  prove->add_option("--max-history", budget.max_history);
  prove->add_option("--emit-proof", emit_proof);
  prove->add_option("--emit-model", emit_model);

  std::string model_path, seq_text;
  std::vector<std::string> vals;
  auto* mc = app.add_subcommand("modelcheck", "evaluate a sequent in a model");
  mc->add_option("model", model_path)->required();
  mc->add_option("--sequent", seq_text)->required();
  mc->add_option("--val", vals, "label=state")->take_all();

  std::string emit_dir;
  AxiomFlags af;
  auto* ax = app.add_subcommand("axioms", "derive axiom instances as proof files");
  ax->add_option("--emit", emit_dir, "output directory");
  ax->add_option("--axiom", af.id);
  ax->add_option("--alpha", af.alpha);
  ax->add_option("--beta", af.beta);
  ax->add_option("--phi", af.phi);
  ax->add_option("--psi", af.psi);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (*parse) return cmd_parse(text, as_sequent, as_program);
  if (*check) return cmd_check(proof_path, allow_open);
  if (*prove) return cmd_prove(goal, budget, emit_proof, emit_model);
  if (*mc) return cmd_modelcheck(model_path, seq_text, vals);
  if (*ax) return cmd_axioms(emit_dir, af);
  return kUsage;
}
