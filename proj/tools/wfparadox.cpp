// wfparadox: command-line front end over the wfp library.
//
// Exit codes: 0 ok, 1 property failure, 2 schema/usage error, 3 invariant
// violation, 4 search engines disagree, 5 internal verification failure.

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "wfp/contextuality.hpp"
#include "wfp/errors.hpp"
#include "wfp/io.hpp"
#include "wfp/ncycle.hpp"
#include "wfp/presets.hpp"
#include "wfp/reasoning.hpp"
#include "wfp/verify.hpp"
#include "wfp/wigner_setup.hpp"

namespace {

using namespace wfp;
using io::json;

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kPropertyFailure = 1, kSchema = 2, kInvariant = 3, kEngines = 4, kInternal = 5 };

struct Global {
  double tolerance = 1e-9;
  std::string format = "json";
  bool timings = false;
  Tolerances tol() const { return Tolerances::uniform(tolerance); }
};

struct Input {
  std::string path;
  std::string bytes;
  json doc;
  std::string format;
};

Input load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  Input out{path, ss.str(), {}, {}};
  try {
    out.doc = json::parse(out.bytes);
  } catch (const json::parse_error& e) {
    throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
  }
  out.format = io::document_format(out.doc);
  return out;
}

std::vector<std::vector<std::string>> labels_of(const MultiAgentSetup& s) {
  std::vector<std::vector<std::string>> out;
  for (std::size_t i = 0; i < s.agent_count(); ++i) {
    std::vector<std::string> l;
    for (int k = 0; k < s.arity(i); ++k) l.push_back(s.outcome_label(i, k));
    out.push_back(std::move(l));
  }
  return out;
}

// An empirical model plus display labels, from any model-like document.
struct LoadedModel {
  std::optional<MultiAgentSetup> setup;
  EmpiricalModel model;
  std::vector<std::vector<std::string>> labels;
};

LoadedModel load_model(const Input& in, const Tolerances& tol) {
  LoadedModel out;
  if (in.format == io::kSetupFormat) {
    out.setup.emplace(io::setup_from_json(in.doc, tol));
    out.model = model_from_setup(*out.setup, tol);
    out.labels = labels_of(*out.setup);
  } else if (in.format == io::kModelFormat) {
    out.model = io::model_from_json(in.doc, tol);
  } else if (in.format == io::kNCycleFormat) {
    out.model = to_empirical_model(io::ncycle_from_json(in.doc, tol));
  } else {
    throw SchemaError("'" + in.path + "' is not a setup, model or n-cycle document");
  }
  return out;
}

json probability(double p) {
  json j = {{"value", p}};
  if (auto f = io::fraction_text(p)) j["fraction"] = *f;
  return j;
}

json tolerances_json(const Tolerances& t) {
  return {{"algebraic", t.algebraic},
          {"norm", t.norm},
          {"probability", t.probability},
          {"certainty", t.certainty}};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

// ---- commands --------------------------------------------------------------

struct SimulateArgs {
  std::string file;
  std::string mention;
  std::string settings;
  bool states = false;
};

json cmd_simulate(const SimulateArgs& a, const Global& g, std::string& digest, json& args) {
  Input in = load(a.file);
  digest = io::digest(in.bytes);
  args = {{"file", a.file}, {"mention", a.mention}, {"settings", a.settings}, {"states", a.states}};
  if (in.format != io::kSetupFormat) throw SchemaError("simulate needs a setup document");
  Tolerances tol = g.tol();
  MultiAgentSetup setup = io::setup_from_json(in.doc, tol);
  const auto names = setup.agent_names();
  const auto labels = labels_of(setup);

  if (!a.mention.empty() && !a.settings.empty()) {
    throw SchemaError("give either --mention or --settings");
  }
  SettingVector s(setup.agent_count(), false);
  if (!a.settings.empty()) {
    if (a.settings.size() != s.size()) throw SchemaError("--settings needs one bit per agent");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (a.settings[i] != '0' && a.settings[i] != '1') throw SchemaError("--settings takes 0/1");
      s[i] = a.settings[i] == '1';
    }
  }
  VariableSet mentioned;
  for (const auto& n : split(a.mention, ',')) mentioned.push_back(setup.agent_index(n));
  for (auto i : mentioned) s[i] = true;

  auto branches = simulate(setup, s);
  json rows = json::array();
  double total = 0.0;
  for (const auto& b : branches) {
    std::vector<std::pair<std::size_t, int>> vals;
    for (std::size_t i = 0; i < b.outcomes.size(); ++i) {
      if (b.outcomes[i]) vals.emplace_back(i, *b.outcomes[i]);
    }
    json row = {{"outcomes", io::event_to_json(Event(vals), names, labels)},
                {"probability", probability(b.probability)}};
    if (a.states) {
      json amp = json::array();
      for (Eigen::Index k = 0; k < b.state.size(); ++k) amp.push_back(io::complex_to_json(b.state(k)));
      row["state"] = amp;
    }
    rows.push_back(std::move(row));
    total += b.probability;
  }
  if (std::abs(total - 1.0) > tol.probability * static_cast<double>(branches.size() + 1)) {
    throw InvariantViolation("branch probabilities sum to " + std::to_string(total));
  }
  json settings = json::array();
  for (bool bit : s) settings.push_back(bit ? 1 : 0);
  return {{"setup", setup.name()},
          {"agents", names},
          {"settings", settings},
          {"branches", rows},
          {"total_probability", total}};
}

struct ContextualityArgs {
  std::string file;
  bool oracle = false;
};

json cmd_contextuality(const ContextualityArgs& a, const Global& g, std::string& digest,
                       json& args) {
  Input in = load(a.file);
  digest = io::digest(in.bytes);
  args = {{"file", a.file}, {"oracle", a.oracle}};
  Tolerances tol = g.tol();
  LoadedModel lm = load_model(in, tol);
  const auto& sc = lm.model.scenario();
  ContextualityReport r = a.oracle ? cross_checked_report(lm.model, tol)
                                   : is_logically_contextual(lm.model, SearchEngine::Backtracking, tol);
  json contexts = json::array();
  for (const auto& c : sc.contexts) {
    json names = json::array();
    for (auto v : c) names.push_back(sc.variables[v]);
    contexts.push_back(names);
  }
  json failing = json::array();
  for (const auto& s : r.failing_sections) failing.push_back(io::section_to_json(s, sc.variables, lm.labels));
  json global = nullptr;
  if (r.global_section) {
    VariableSet all(sc.variables.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    global = io::section_to_json(Section{all, *r.global_section}, sc.variables, lm.labels);
  }
  return {{"source", in.format},
          {"variables", sc.variables},
          {"contexts", contexts},
          {"verdict", to_string(r.verdict)},
          {"witness", failing.empty() ? json(nullptr) : failing[0]},
          {"failing_sections", failing},
          {"global_section", global},
          {"possible_sections", r.section_count},
          {"engine", a.oracle ? "backtracking+exhaustive" : "backtracking"},
          {"warnings", lm.model.warnings()}};
}

struct ParadoxArgs {
  std::string file;
  std::optional<std::size_t> max_len;
  std::string dot;
};

json classical_report(const std::vector<ClassicalStatement>& st, const ParadoxArgs& a) {
  auto sols = consistent_assignments(st);
  json assignments = json::array();
  for (const auto& s : sols) {
    json bits = json::array();
    for (bool b : s) bits.push_back(b ? 1 : 0);
    assignments.push_back(bits);
  }
  ReferenceGraph graph = reference_graph(st);
  bool cycle = has_directed_cycle(graph);
  // A finite inconsistent set needs a reference cycle.
  if (sols.empty() && !cycle) throw VerificationFailure("inconsistent statements without a cycle");
  std::string dot = to_dot(graph);
  if (!a.dot.empty()) std::ofstream(a.dot) << dot;
  return {{"source", io::kClassicalFormat},
          {"statements", st.size()},
          {"consistent_assignments", assignments},
          {"paradoxical", sols.empty()},
          {"reference_graph", io::graph_to_json(graph)},
          {"graph_has_cycle", cycle},
          {"dot", dot}};
}

json cmd_paradox(const ParadoxArgs& a, const Global& g, std::string& digest, json& args) {
  Input in = load(a.file);
  digest = io::digest(in.bytes);
  args = {{"file", a.file},
          {"max_chain_length", a.max_len ? json(*a.max_len) : json(nullptr)},
          {"dot", a.dot}};
  Tolerances tol = g.tol();
  if (in.format == io::kClassicalFormat) return classical_report(io::classical_from_json(in.doc), a);

  std::optional<MultiAgentSetup> setup;
  EmpiricalModel model;
  std::unique_ptr<ProbabilityModel> pm;
  std::vector<std::vector<std::string>> labels;
  if (in.format == io::kSetupFormat) {
    setup.emplace(io::setup_from_json(in.doc, tol));
    pm = std::make_unique<SetupProbabilities>(*setup, tol);
    labels = labels_of(*setup);
  } else {
    LoadedModel lm = load_model(in, tol);
    model = std::move(lm.model);
    pm = std::make_unique<ModelProbabilities>(model);
  }
  const auto names = pm->names();
  std::size_t bound = a.max_len.value_or(2 * pm->variable_count());
  auto cert = find_paradox(*pm, bound, tol);
  json out = {{"source", in.format}, {"max_chain_length", bound}, {"found", cert.has_value()}};
  if (!cert) {
    out["certificate"] = nullptr;
    return out;
  }
  validate_certificate(*pm, *cert, tol);
  bool endpoints = check_deterministic_endpoints(*cert, tol);
  if (!endpoints) throw VerificationFailure("certificate has a certain post-selection event");
  ReferenceGraph graph = reference_graph(*cert, names, labels);
  bool cycle = has_directed_cycle(graph);
  if (!cycle) throw VerificationFailure("certificate reference graph has no directed cycle");
  json chain = json::array();
  for (const auto& l : cert->chain.links) chain.push_back(format_statement(l, names, labels));
  std::string dot = to_dot(graph, "paradox");
  if (!a.dot.empty()) std::ofstream(a.dot) << dot;
  out["certificate"] = io::certificate_to_json(*cert, names, labels);
  out["p_postselection"] = probability(cert->p_postselection);
  out["chain"] = chain;
  out["deterministic_endpoints"] = endpoints;
  out["reference_graph"] = io::graph_to_json(graph);
  out["graph_has_cycle"] = cycle;
  out["dot"] = dot;
  return out;
}

json cmd_ncycle(const std::string& file, const Global& g, std::string& digest, json& args) {
  Input in = load(file);
  digest = io::digest(in.bytes);
  args = {{"file", file}};
  Tolerances tol = g.tol();
  std::optional<NCycleModel> nc;
  if (in.format == io::kNCycleFormat) {
    nc = io::ncycle_from_json(in.doc, tol);
  } else {
    nc = ncycle_from_model(load_model(in, tol).model, tol);
    if (!nc) throw SchemaError("contexts of '" + file + "' do not form a binary n-cycle");
  }
  json ex = json::array();
  for (std::size_t i = 0; i < nc->n(); ++i) ex.push_back(expectation(*nc, i));
  OmegaMax best = max_omega(*nc);
  auto gamma = is_extremal_vertex(*nc, tol);
  json chains = nullptr;
  if (auto pair = find_ps_free_paradox(*nc, tol)) {
    chains = json::array({io::chain_to_json(pair->first, nc->names()),
                          io::chain_to_json(pair->second, nc->names())});
  }
  return {{"source", in.format},
          {"n", nc->n()},
          {"names", nc->names()},
          {"expectations", ex},
          {"max_omega", {{"value", best.value}, {"gamma", best.gamma}}},
          {"extremal_gamma", gamma ? json(*gamma) : json(nullptr)},
          {"ps_free_paradox", chains}};
}

struct VerifyArgs {
  std::string suite;
  std::uint64_t seed = 1;
  std::size_t cases = 0;
};

json cmd_verify(const VerifyArgs& a, const Global& g, std::string& digest, json& args, bool& ok) {
  args = {{"suite", a.suite}, {"seed", a.seed}, {"cases", a.cases}};
  digest = io::digest(args.dump());
  std::vector<std::string> names = a.suite == "all" ? suite_names() : std::vector<std::string>{a.suite};
  json suites = json::array();
  ok = true;
  for (const auto& n : names) {
    SuiteResult r = run_suite(n, a.seed, a.cases, g.tol());
    ok = ok && r.passed();
    suites.push_back({{"name", r.name},
                      {"seed", r.seed},
                      {"cases", r.cases},
                      {"checks", r.checks},
                      {"passed", r.passed()},
                      {"notes", r.notes},
                      {"failures", r.failures}});
  }
  return {{"suites", suites}, {"passed", ok}};
}

json export_preset(const std::string& name, std::size_t n) {
  using namespace presets;
  if (name == "fr") return io::setup_to_json(fr_setup());
  if (name == "kcbs") return io::setup_to_json(kcbs_setup());
  if (name == "compat-a") return io::setup_to_json(compat_demo_setups().first);
  if (name == "compat-b-computational") {
    return io::setup_to_json(compat_demo_setups(UrsulaBasis::Computational).second);
  }
  if (name == "compat-b-bell") return io::setup_to_json(compat_demo_setups(UrsulaBasis::Bell).second);
  if (name == "fr-model") return io::model_to_json(model_from_setup(fr_setup()));
  if (name == "kcbs-model") return io::model_to_json(model_from_setup(kcbs_setup()));
  if (name == "prbox") return io::ncycle_to_json(pr_box_ncycle());
  if (name == "prbox-model") return io::model_to_json(pr_box_model());
  if (name == "liar") return io::classical_to_json(liar_chain(n == 0 ? 3 : n));
  if (name == "yablo") return io::classical_to_json(yablo_prefix(n == 0 ? 4 : n));
  throw SchemaError("unknown preset '" + name + "'");
}

const std::vector<std::string> kPresets{"fr",        "kcbs",       "compat-a",   "compat-b-computational",
                                        "compat-b-bell", "fr-model", "kcbs-model", "prbox",
                                        "prbox-model", "liar",       "yablo"};

// ---- text rendering --------------------------------------------------------

std::string num(const json& p) {
  if (p.is_object()) return p.contains("fraction") ? p["fraction"].get<std::string>() : p["value"].dump();
  return p.dump();
}

void render_text(const std::string& command, const json& r, std::ostream& out) {
  if (command == "simulate") {
    out << "settings";
    for (const auto& b : r["settings"]) out << ' ' << b.get<int>();
    out << '\n';
    for (const auto& b : r["branches"]) {
      std::string t = b["outcomes"]["text"].get<std::string>();
      out << "  " << (t.empty() ? "(no records)" : t) << "  p = " << num(b["probability"]) << '\n';
    }
  } else if (command == "contextuality") {
    out << r["verdict"].get<std::string>() << '\n';
    if (!r["witness"].is_null()) out << "  witness " << r["witness"]["text"].get<std::string>() << '\n';
    if (!r["global_section"].is_null()) {
      out << "  global section " << r["global_section"]["text"].get<std::string>() << '\n';
    }
    for (const auto& w : r["warnings"]) out << "  warning: " << w.get<std::string>() << '\n';
  } else if (command == "paradox") {
    if (r.contains("paradoxical")) {
      out << (r["paradoxical"].get<bool>() ? "inconsistent" : "consistent") << ", reference graph "
          << (r["graph_has_cycle"].get<bool>() ? "cyclic" : "acyclic") << '\n';
    } else if (!r["found"].get<bool>()) {
      out << "none\n";
    } else {
      out << "post-selection " << r["certificate"]["postselection"]["text"].get<std::string>()
          << "  p = " << num(r["p_postselection"]) << '\n';
      for (const auto& l : r["chain"]) out << "  " << l.get<std::string>() << '\n';
    }
  } else if (command == "ncycle") {
    out << "n = " << r["n"] << ", max omega = " << r["max_omega"]["value"] << " at gamma "
        << r["max_omega"]["gamma"].dump() << '\n';
    out << "  extremal vertex: " << (r["extremal_gamma"].is_null() ? "no" : r["extremal_gamma"].dump())
        << '\n';
    if (!r["ps_free_paradox"].is_null()) {
      for (const auto& c : r["ps_free_paradox"]) out << "  " << c["text"].get<std::string>() << '\n';
    }
  } else if (command == "verify") {
    for (const auto& s : r["suites"]) {
      out << (s["passed"].get<bool>() ? "PASS " : "FAIL ") << s["name"].get<std::string>() << "  cases "
          << s["cases"] << ", checks " << s["checks"] << '\n';
      for (const auto& n : s["notes"]) out << "  " << n.get<std::string>() << '\n';
      for (const auto& f : s["failures"]) out << "  " << f.get<std::string>() << '\n';
    }
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Multi-agent Wigner's-friend paradox and contextuality toolkit", "wfparadox"};
  app.set_version_flag("--version", kVersion);
  app.fallthrough();
  app.require_subcommand(1);
  Global g;
  app.add_option("--tolerance", g.tolerance, "Numerical tolerance for every check")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_flag("--timings", g.timings, "Add wall-clock timings to the report");

  SimulateArgs sim;
  auto* s_sim = app.add_subcommand("simulate", "Branch table of a setup under a setting vector");
  s_sim->add_option("setup", sim.file, "Setup JSON")->required();
  s_sim->add_option("--mention", sim.mention, "Comma-separated agents modelled projectively");
  s_sim->add_option("--settings", sim.settings, "One 0/1 bit per agent, in agent order");
  s_sim->add_flag("--states", sim.states, "Dump the unnormalized branch states");

  ContextualityArgs ctx;
  auto* s_ctx = app.add_subcommand("contextuality", "Logical/strong contextuality verdict");
  s_ctx->add_option("file", ctx.file, "Setup, model or n-cycle JSON")->required();
  s_ctx->add_flag("--oracle", ctx.oracle, "Cross-check against exhaustive enumeration");

  ParadoxArgs par;
  auto* s_par = app.add_subcommand("paradox", "Shortest half-Liar inference chain");
  s_par->add_option("file", par.file, "Setup, model, n-cycle or classical statement JSON")->required();
  s_par->add_option("--max-chain-length", par.max_len, "Longest chain to search (default 2N)");
  s_par->add_option("--dot", par.dot, "Write the reference graph as DOT to this path");

  std::string nfile;
  auto* s_nc = app.add_subcommand("ncycle", "Correlations, Omega and extremal-vertex analysis");
  s_nc->add_option("file", nfile, "n-cycle, model or setup JSON")->required();

  VerifyArgs ver;
  std::vector<std::string> suites = suite_names();
  suites.push_back("all");
  auto* s_ver = app.add_subcommand("verify", "Randomized property suites");
  s_ver->add_option("suite", ver.suite, "Suite name or 'all'")->required()->check(CLI::IsMember(suites));
  s_ver->add_option("--seed", ver.seed, "Seed for the case generator");
  s_ver->add_option("--cases", ver.cases, "Number of cases (raised to the suite minimum)");

  std::string preset, out_path;
  std::size_t preset_n = 0;
  auto* s_exp = app.add_subcommand("export-preset", "Write a built-in example as JSON");
  s_exp->add_option("name", preset, "Preset name")->required()->check(CLI::IsMember(kPresets));
  s_exp->add_option("--n", preset_n, "Statement count for liar/yablo");
  s_exp->add_option("-o,--output", out_path, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kSchema;
  }

  if (s_exp->parsed()) {
    std::string text = export_preset(preset, preset_n).dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream(out_path) << text;
    }
    return kOk;
  }

  auto t0 = std::chrono::steady_clock::now();
  std::string command, digest;
  json args, results;
  bool verified = true;
  if (s_sim->parsed()) {
    command = "simulate";
    results = cmd_simulate(sim, g, digest, args);
  } else if (s_ctx->parsed()) {
    command = "contextuality";
    results = cmd_contextuality(ctx, g, digest, args);
  } else if (s_par->parsed()) {
    command = "paradox";
    results = cmd_paradox(par, g, digest, args);
  } else if (s_nc->parsed()) {
    command = "ncycle";
    results = cmd_ncycle(nfile, g, digest, args);
  } else {
    command = "verify";
    results = cmd_verify(ver, g, digest, args, verified);
  }

  if (g.format == "text") {
    render_text(command, results, std::cout);
  } else {
    json report = {{"command", command},
                   {"arguments", args},
                   {"input_digest", digest},
                   {"results", results},
                   {"tool_version", kVersion},
                   {"tolerances", tolerances_json(g.tol())}};
    if (g.timings) {
      double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      report["timings"] = {{"total_ms", ms}};
    }
    std::cout << report.dump(2) << '\n';
  }
  return verified ? kOk : kPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const wfp::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kSchema;
  } catch (const wfp::PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << '\n';
    return kSchema;
  } catch (const wfp::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariant;
  } catch (const wfp::EngineDisagreement& e) {
    std::cerr << "engine disagreement: " << e.what() << '\n';
    return kEngines;
  } catch (const wfp::VerificationFailure& e) {
    std::cerr << "verification failure: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}
