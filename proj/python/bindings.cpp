#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pdl/io.hpp"
#include "pdl/kernel.hpp"
#include "pdl/parser.hpp"
#include "pdl/schemata.hpp"
#include "pdl/search.hpp"
#include "pdl/semantics.hpp"
#include "pdl/traces.hpp"

namespace py = pybind11;
using namespace pdl;

namespace {

py::dict check(const std::string& text, bool allow_open) {
  CyclicPreProof p = parse_proof(text);
  py::dict out;
  py::list errs;
  for (const auto& e : check_pre_proof(p, allow_open)) errs.append(to_string(e));
  out["errors"] = errs;
  out["local_ok"] = errs.empty();
  if (!errs.empty()) {
    out["valid"] = false;
    return out;
  }
  GtcResult g = check_gtc(p);
  out["gtc"] = g.accepted;
  out["lasso"] = g.witness ? py::object(py::str(to_string(*g.witness))) : py::object(py::none());
  out["valid"] = g.accepted;
  return out;
}

Sequent goal_of(const std::string& text) {
  if (text.find("|-") != std::string::npos) return parse_sequent(text);
  return Sequent{{}, {labelled("x", parse_formula(text))}};
}

py::dict prove(const std::string& goal, std::size_t max_steps, std::size_t max_iters, std::size_t max_history) {
  SearchOptions opts;
  opts.budget = {max_steps, max_iters, max_history};
  SearchOutcome o;
  Sequent s = goal_of(goal);
  {
    py::gil_scoped_release nogil;
    o = prove_test_free(s, opts);
  }
  py::dict out;
  out["unwindings"] = o.unwindings;
  switch (o.kind) {
    case SearchOutcome::Kind::Proof:
      out["verdict"] = "proof";
      out["proof"] = render_proof(*o.proof);
      break;
    case SearchOutcome::Kind::Countermodel:
      out["verdict"] = "countermodel";
      out["model"] = render_model(o.countermodel->model, o.countermodel->valuation);
      break;
    case SearchOutcome::Kind::Unknown:
      out["verdict"] = "unknown";
      out["reason"] = o.reason;
      break;
  }
  return out;
}

bool modelcheck(const std::string& model, const std::string& sequent, const std::map<std::string, std::string>& val) {
  ModelDoc doc = parse_model(model);
  Valuation v = doc.valuation.value_or(Valuation{});
  for (const auto& [l, st] : val) {
    int i = doc.model.index_of(st);
    if (i < 0) throw std::invalid_argument("unknown state \"" + st + "\"");
    v[Label{l}] = i;
  }
  return satisfies_sequent(doc.model, v, goal_of(sequent));
}

std::string derive(int id, const std::string& alpha, const std::string& beta, const std::string& phi,
                   const std::string& psi) {
  AxiomParams ps;
  if (!alpha.empty()) ps.alpha = parse_program(alpha);
  if (!beta.empty()) ps.beta = parse_program(beta);
  if (!phi.empty()) ps.phi = parse_formula(phi);
  if (!psi.empty()) ps.psi = parse_formula(psi);
  return render_proof(derive_axiom(id, ps));
}

}  // namespace

PYBIND11_MODULE(_pdl, m) {
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  m.def("parse_formula", [](const std::string& s) { return to_string(parse_formula(s)); });
  m.def("parse_program", [](const std::string& s) { return to_string(parse_program(s)); });
  m.def("parse_sequent", [](const std::string& s) { return to_string(parse_sequent(s)); });
  m.def("check", &check, py::arg("proof"), py::arg("allow_open") = false);
  m.def("prove", &prove, py::arg("goal"), py::arg("max_steps") = SearchBudget{}.max_steps,
        py::arg("max_iters") = SearchBudget{}.max_iters, py::arg("max_history") = SearchBudget{}.max_history);
  m.def("modelcheck", &modelcheck, py::arg("model"), py::arg("sequent"),
        py::arg("valuation") = std::map<std::string, std::string>{});
  m.def("derive_axiom", &derive, py::arg("id"), py::arg("alpha") = "", py::arg("beta") = "", py::arg("phi") = "",
        py::arg("psi") = "");
  m.def("axiom_name", &axiom_name);
}
