#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "icausal/pbox.hpp"
#include "icausal/procmat.hpp"
#include "icausal/qcqc.hpp"
#include "icausal/random.hpp"
#include "io.hpp"

using namespace icausal;
using io::InputError;
using io::json;
namespace fs = std::filesystem;

namespace {

struct Settings {
  double tol = kDefaultTol;
  int cap = 1;
  std::uint64_t seed = 42;
  int trials = 20;
  int horizon = 8;
  std::string out;
  std::map<std::string, CLI::Option*> opts;

  bool given(const std::string& key) const {
    auto* o = opts.at(key);
    return o->count() > 0 || (!o->get_envname().empty() && std::getenv(o->get_envname().c_str()));
  }
};

struct Outcome {
  json report;
  bool pass = false;
};

// command-line flag, then ICAUSAL_ variable, then the scenario, then the default
template <class T>
T pick(const Settings& s, const std::string& key, const T& flag, const json& scenario, const T& fallback) {
  if (s.given(key)) return flag;
  if (scenario.contains(key)) {
    try {
      return scenario.at(key).get<T>();
    } catch (const json::exception& e) {
      throw InputError("scenario field \"" + key + "\": " + e.what());
    }
  }
  return fallback;
}

QcQc named_fixture(const std::string& name) {
  for (auto& [n, q] : fixtures::all())
    if (n == name) return q;
  if (name == "double_quantum_switch_no_phase_flip") return fixtures::double_quantum_switch(Vec(), false);
  throw InputError("unknown fixture " + name);
}

QcQc scenario_qcqc(const json& sc, const fs::path& base) {
  if (sc.contains("fixture")) return named_fixture(sc.at("fixture").get<std::string>());
  if (!sc.contains("qcqc")) throw InputError("scenario needs \"qcqc\" or \"fixture\"");
  fs::path p = base / sc.at("qcqc").get<std::string>();
  return io::qcqc_from_json(io::read_json(p), p.parent_path());
}

json pm_report(const PmReport& r) {
  return {{"pass", r.pass},       {"min_eig", r.min_eig}, {"trace", r.trace},
          {"trace_dev", r.trace_dev}, {"lv_dev", r.lv_dev},   {"herm_dev", r.herm_dev}};
}

Outcome cmd_validate_pm(const Settings& s, const std::string& file) {
  auto pm = io::pm_from_json(io::read_json(file));
  auto r = validate_process_matrix(pm, s.tol);
  return {pm_report(r), r.pass};
}

Outcome cmd_qcqc_check(const Settings& s, const std::string& file) {
  fs::path p(file);
  QcQc q = io::qcqc_from_json(io::read_json(p), p.parent_path());
  auto kr = check_krausiso(q, s.tol);
  auto pm = process_matrix(q);
  auto cond = check_qcqc_conditions(q, pm.w, witnesses(q), s.tol);
  auto val = validate_process_matrix(pm, s.tol);
  json rep{{"krausiso", {{"pass", kr.pass}, {"diagonal_dev", kr.diagonal_dev}, {"cross_dev", kr.cross_dev}}},
           {"conditions",
            {{"pass", cond.pass}, {"past_dev", cond.past_dev}, {"recursion_dev", cond.recursion_dev}, {"future_dev", cond.future_dev}}},
           {"process_matrix", pm_report(val)}};
  bool pass = kr.pass && cond.pass && val.pass;
  rep["pass"] = pass;
  return {rep, pass};
}

Outcome cmd_build_qcqc(const Settings& s, const std::string& file, std::string& side_output) {
  fs::path p(file);
  QcQc q = io::qcqc_from_json(io::read_json(p), p.parent_path());
  auto pm = process_matrix(q);
  auto val = validate_process_matrix(pm, s.tol);
  side_output = io::canonical(io::to_json(pm));
  json rep = pm_report(val);
  rep["dim"] = pm.w.in_sig.dim();
  return {rep, val.pass};
}

Outcome cmd_fixtures(const Settings& s) {
  fs::path dir = s.out.empty() ? fs::path(".") : fs::path(s.out);
  json files = json::array();
  auto list = fixtures::all();
  list.emplace_back("double_quantum_switch_no_phase_flip", fixtures::double_quantum_switch(Vec(), false));
  for (const auto& [name, q] : list) {
    io::write_text(dir / (name + ".json"), io::canonical(io::to_json(q)));
    io::write_text(dir / (name + ".pm.json"), io::canonical(io::to_json(process_matrix(q))));
    files.push_back(name + ".json");
    files.push_back(name + ".pm.json");
  }
  return {{{"directory", dir.string()}, {"files", files}, {"pass", true}}, true};
}

ProcessBox scenario_box(const json& sc, const QcQc& q, int cap) {
  const std::string box = sc.value("box", "");
  if (box == "dynamical_parallel") return dynamical_parallel_box(Vec(), std::max(cap, 2));
  if (!box.empty()) throw InputError("unknown box " + box);
  const std::string ext = sc.value("extension", "symm");
  if (ext == "symm" || ext == "symmetrization") return extend_symmetrization(q, cap);
  if (ext == "abort") return extend_abort(q, std::max(cap, 2));
  throw InputError("extension must be \"symm\" or \"abort\"");
}

Outcome cmd_extend(const Settings& s, const json& sc, const fs::path& base) {
  QcQc q = scenario_qcqc(sc, base);
  const int cap = pick(s, "cap", s.cap, sc, 3);
  const double tol = pick(s, "tol", s.tol, sc, kDefaultTol);
  ProcessBox pb = scenario_box(sc, q, cap);
  auto iso = verify_sequence_isometries(pb.rep, -1, tol);
  json steps = json::array();
  for (std::size_t i = 0; i < pb.rep.steps.size(); ++i) {
    const auto& st = pb.rep.steps[i];
    steps.push_back({{"in", st.op.in_sig.names()},
                     {"out", st.op.out_sig.names()},
                     {"in_dim", st.op.in_sig.dim()},
                     {"out_dim", st.op.out_sig.dim()},
                     {"domain", st.generator},
                     {"columns", iso.steps[i].columns},
                     {"deviation", iso.steps[i].deviation}});
  }
  json rep{{"extension", to_string(pb.kind)}, {"cap", cap}, {"steps", steps},
           {"max_deviation", iso.max_deviation}, {"pass", iso.pass}};
  return {rep, iso.pass};
}

Outcome cmd_equiv(const Settings& s, const json& sc, const fs::path& base) {
  if (sc.contains("iso") && sc["iso"] != "default") throw InputError("only the default isomorphism is supported");
  QcQc q = scenario_qcqc(sc, base);
  const int cap = pick(s, "cap", s.cap, sc, 1);
  const double tol = pick(s, "tol", s.tol, sc, kDefaultTol);
  const int trials = pick(s, "trials", s.trials, sc, 20);
  const auto seed = pick(s, "seed", s.seed, sc, std::uint64_t{42});
  ProcessBox pb = scenario_box(sc, q, cap);
  auto r = check_operational_equivalence(q, pb, trials, tol, seed);
  json rep{{"extension", to_string(pb.kind)}, {"trials", r.trials},         {"seed", seed},
           {"max_deviation", r.max_deviation}, {"deviations", r.deviations}, {"pass", r.pass}};
  bool pass = r.pass;
  if (pb.kind == Extension::abort) {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      Rng rng(seed + static_cast<std::uint64_t>(t));
      std::vector<Mat> ops;
      for (const auto& a : pb.agents) ops.push_back(random_agent_kraus(rng, a.d_in, a.d_out));
      for (int p = 0; p < q.d_past; ++p)
        worst = std::max(worst, std::abs(1.0 - accept_probability(pb, ops, past_message(pb, Vec::Unit(q.d_past, p)))));
    }
    rep["accept_deviation"] = worst;
    pass = pass && worst <= tol;
    rep["pass"] = pass;
  }
  return {rep, pass};
}

Outcome cmd_compose(const Settings& s, const json& sc) {
  const std::string mode = sc.value("mode", "causal-box");
  const double tol = pick(s, "tol", s.tol, sc, kDefaultTol);
  if (mode == "process-matrix") {
    auto r = loop_process_matrices();
    bool pass = std::abs(r.born) <= tol;
    return {{{"mode", r.mode}, {"born", r.born}, {"pass", pass}}, pass};
  }
  if (mode != "causal-box") throw InputError("mode must be \"process-matrix\" or \"causal-box\"");
  const int horizon = pick(s, "horizon", s.horizon, sc, 8);
  auto r = loop_causal_boxes(horizon);
  bool pass = std::abs(r.total_probability - 1.0) <= tol && r.loop_activity == 0.0 && r.in_flight <= tol && r.wsr;
  for (double d : r.single_delivery) pass = pass && std::abs(d - 1.0) <= tol;
  json rep{{"mode", r.mode},
           {"horizon", horizon},
           {"total_probability", r.total_probability},
           {"loop_activity", r.loop_activity},
           {"in_flight", r.in_flight},
           {"single_delivery", {{"Alice", r.single_delivery.at(0)}, {"Bob", r.single_delivery.at(1)}}},
           {"wsr", r.wsr},
           {"pass", pass}};
  return {rep, pass};
}

Outcome cmd_unitarize(const Settings& s, const json& sc, const fs::path& base) {
  QcQc q = scenario_qcqc(sc, base);
  const int cap = pick(s, "cap", s.cap, sc, 3);
  const double tol = pick(s, "tol", s.tol, sc, kDefaultTol);
  const int trials = pick(s, "trials", s.trials, sc, 20);
  const auto seed = pick(s, "seed", s.seed, sc, std::uint64_t{42});
  auto u = unitary_extension(extend_symmetrization(q, cap), tol);
  bool pass = u.unitarity_dev <= tol && u.reduction_dev <= tol;
  json rep{{"cap", cap},
           {"p_dims", u.p_dims},
           {"junk_dims", u.junk_dims},
           {"p_total", u.p_total()},
           {"unitarity_dev", u.unitarity_dev},
           {"reduction_dev", u.reduction_dev}};
  bool uniform = true;
  for (int k = 0; k < q.n_agents; ++k)
    uniform = uniform && q.d_in[static_cast<std::size_t>(k)] == q.d_in[0] && q.d_out[static_cast<std::size_t>(k)] == q.d_in[0];
  if (uniform) {
    auto e = check_unitary_equivalence(q, trials, tol, seed);
    rep["qcqc_extension"] = {{"pass", e.pass},
                             {"unitarity_dev", e.unitarity_dev},
                             {"reduction_dev", e.reduction_dev},
                             {"equivalence_dev", e.equivalence_dev},
                             {"restriction_dev", e.restriction_dev}};
    pass = pass && e.pass;
  }
  rep["pass"] = pass;
  return {rep, pass};
}

ChoiMatrix kraus_choi(const AgentWires& a, int din, int dout, const std::vector<Mat>& kraus) {
  std::vector<LabeledOperator> ks;
  for (const auto& k : kraus) {
    if (k.rows() != dout || k.cols() != din) throw InputError("Kraus operator of agent " + a.name + " has the wrong shape");
    ks.emplace_back(Signature({{a.in, din, WireKind::system}}), Signature({{a.out, dout, WireKind::system}}), k);
  }
  return choi_matrix_of(ks);
}

Outcome cmd_born(const Settings& s, const json& sc, const fs::path& base) {
  const double tol = pick(s, "tol", s.tol, sc, kDefaultTol);
  ProcessMatrix pm;
  if (sc.contains("pm")) pm = io::pm_from_json(io::read_json(base / sc.at("pm").get<std::string>()));
  else pm = process_matrix(scenario_qcqc(sc, base));
  std::optional<LabeledOperator> rho;
  const int dp = pm.d_past();
  if (dp > 1) {
    Mat r = Mat::Zero(dp, dp);
    r(0, 0) = 1.0;
    if (sc.contains("rho")) r = io::mat_from_json(sc["rho"]);
    if (r.rows() != dp || r.cols() != dp) throw InputError("rho has the wrong shape");
    rho = LabeledOperator::square(Signature({{pm.layout.past, dp, WireKind::system}}), r);
  }
  const auto& agents = pm.layout.agents;

  if (sc.contains("agents")) {
    const json& a = sc["agents"];
    if (!a.is_array() || a.size() != agents.size()) throw InputError("one Kraus list per agent");
    std::vector<ChoiMatrix> ops;
    for (std::size_t i = 0; i < agents.size(); ++i) {
      std::vector<Mat> kraus;
      for (const auto& k : a[i]) kraus.push_back(io::mat_from_json(k));
      ops.push_back(kraus_choi(agents[i], pm.wire_dim(agents[i].in), pm.wire_dim(agents[i].out), kraus));
    }
    double p = born_probability(pm, ops, rho).probability;
    bool pass = p >= -tol && p <= 1.0 + tol;
    return {{{"probability", p}, {"pass", pass}}, pass};
  }

  const json rnd = sc.value("random", json::object());
  const auto seed = s.given("seed") ? s.seed : rnd.value("seed", std::uint64_t{42});
  const int count = s.given("trials") ? s.trials : rnd.value("count", 50);
  const int outcomes = rnd.value("outcomes", 2);
  double worst = 0.0;
  json sums = json::array();
  for (int t = 0; t < count; ++t) {
    Rng rng(seed + static_cast<std::uint64_t>(t));
    std::vector<std::vector<ChoiMatrix>> inst;
    for (const auto& a : agents) {
      const int din = pm.wire_dim(a.in), dout = pm.wire_dim(a.out);
      std::vector<ChoiMatrix> outs;
      for (const auto& k : random_instrument(rng, din, dout, outcomes, 2)) outs.push_back(kraus_choi(a, din, dout, k));
      inst.push_back(std::move(outs));
    }
    double total = 0.0;
    std::vector<std::size_t> pick_out(agents.size(), 0);
    while (true) {
      std::vector<ChoiMatrix> ops;
      for (std::size_t i = 0; i < agents.size(); ++i) ops.push_back(inst[i][pick_out[i]]);
      total += born_probability(pm, ops, rho).probability;
      std::size_t i = 0;
      while (i < pick_out.size() && ++pick_out[i] == inst[i].size()) pick_out[i++] = 0;
      if (i == pick_out.size()) break;
    }
    sums.push_back(total);
    worst = std::max(worst, std::abs(total - 1.0));
  }
  bool pass = worst <= tol;
  return {{{"sets", count}, {"seed", seed}, {"sums", sums}, {"max_deviation", worst}, {"pass", pass}}, pass};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Indefinite causal order toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings s;
  s.opts["tol"] = app.add_option("--tol", s.tol, "comparison tolerance")->envname("ICAUSAL_TOL");
  s.opts["cap"] = app.add_option("--cap", s.cap, "messages per Fock slice")->envname("ICAUSAL_CAP");
  s.opts["seed"] = app.add_option("--seed", s.seed, "base seed of random agents")->envname("ICAUSAL_SEED");
  s.opts["trials"] = app.add_option("--trials", s.trials, "random agent sets")->envname("ICAUSAL_TRIALS");
  s.opts["horizon"] = app.add_option("--horizon", s.horizon, "last position of a composition")->envname("ICAUSAL_HORIZON");
  s.opts["out"] = app.add_option("--out", s.out, "report file (directory for fixtures)")->envname("ICAUSAL_OUT");

  std::string file;
  auto* validate = app.add_subcommand("validate-pm", "validate a process matrix file");
  validate->add_option("file", file)->required();
  auto* qcheck = app.add_subcommand("qcqc-check", "check a QC-QC description");
  qcheck->add_option("file", file)->required();
  auto* build = app.add_subcommand("build-qcqc", "write the process matrix of a QC-QC description");
  build->add_option("file", file)->required();
  auto* fix = app.add_subcommand("fixtures", "dump the named processes");
  std::map<std::string, CLI::App*> scen;
  for (const char* name : {"extend", "equiv", "compose", "unitarize", "born"}) {
    scen[name] = app.add_subcommand(name, std::string(name) + " from a scenario file");
    scen[name]->add_option("scenario", file)->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    Outcome o;
    std::string side;
    json command;
    if (*validate) {
      o = cmd_validate_pm(s, file);
    } else if (*qcheck) {
      o = cmd_qcqc_check(s, file);
    } else if (*build) {
      o = cmd_build_qcqc(s, file, side);
    } else if (*fix) {
      o = cmd_fixtures(s);
    } else {
      fs::path p(file);
      json sc = io::read_json(p);
      if (!sc.is_object()) throw InputError("scenario must be an object");
      const fs::path base = p.parent_path();
      if (*scen["extend"]) o = cmd_extend(s, sc, base);
      else if (*scen["equiv"]) o = cmd_equiv(s, sc, base);
      else if (*scen["compose"]) o = cmd_compose(s, sc);
      else if (*scen["unitarize"]) o = cmd_unitarize(s, sc, base);
      else o = cmd_born(s, sc, base);
    }
    o.report["command"] = app.get_subcommands().front()->get_name();
    const std::string text = io::canonical(o.report);
    if (*build) {
      if (s.out.empty()) std::cout << side;
      else io::write_text(s.out, side);
      std::cerr << text;
    } else {
      std::cout << text;
      if (!s.out.empty() && !*fix) io::write_text(s.out, text);
    }
    return o.pass ? 0 : 1;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
