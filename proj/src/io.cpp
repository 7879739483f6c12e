#include "wfp/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "wfp/errors.hpp"

namespace wfp::io {

using hilbert::Complex;
using hilbert::Layout;
using hilbert::Matrix;
using hilbert::Operator;
using hilbert::OperatorKind;
using hilbert::Vector;

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw SchemaError(where + ": missing field '" + key + "'");
  }
  return j.at(key);
}

std::string str(const json& j, const std::string& where) {
  if (!j.is_string()) throw SchemaError(where + ": expected a string");
  return j.get<std::string>();
}

long integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw SchemaError(where + ": expected an integer");
  return j.get<long>();
}

std::size_t count(const json& j, const std::string& where) {
  long v = integer(j, where);
  if (v < 0) throw SchemaError(where + ": expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

std::vector<std::string> strings(const json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(str(e, where));
  return out;
}

Vector parse_vector(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SchemaError(where + ": expected a non-empty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_complex(j[i]);
  return v;
}

Matrix parse_matrix(const json& j, std::size_t dim, const std::string& where) {
  if (!j.is_array() || j.size() != dim) {
    throw SchemaError(where + ": expected a " + std::to_string(dim) + "x" + std::to_string(dim) +
                      " matrix");
  }
  auto d = static_cast<Eigen::Index>(dim);
  Matrix m(d, d);
  for (std::size_t r = 0; r < dim; ++r) {
    if (!j[r].is_array() || j[r].size() != dim) throw SchemaError(where + ": ragged matrix row");
    for (std::size_t c = 0; c < dim; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_complex(j[r][c]);
    }
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

void expect_format(const json& doc, const char* format) {
  std::string f = document_format(doc);
  if (f != format) throw SchemaError("expected a '" + std::string(format) + "' document, got '" + f + "'");
}

std::vector<Operator> parse_projectors(const json& j, const Layout& local, const std::string& where,
                                       const Tolerances& tol) {
  if (!j.is_array() || j.size() < 2) throw SchemaError(where + ": need at least two projectors");
  const std::size_t dim = local.total_dim();
  auto d = static_cast<Eigen::Index>(dim);
  std::vector<std::optional<Matrix>> mats(j.size());
  std::vector<std::vector<std::size_t>> complements(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    const json& p = j[k];
    std::string w = where + " outcome " + std::to_string(k);
    if (!p.is_object()) throw SchemaError(w + ": expected an object");
    if (p.contains("matrix")) {
      mats[k] = parse_matrix(p["matrix"], dim, w);
    } else if (p.contains("vectors")) {
      const json& vs = p["vectors"];
      if (!vs.is_array() || vs.empty()) throw SchemaError(w + ": 'vectors' must be non-empty");
      Matrix m = Matrix::Zero(d, d);
      for (const auto& vj : vs) {
        Vector v = parse_vector(vj, w);
        if (static_cast<std::size_t>(v.size()) != dim) throw SchemaError(w + ": vector dimension");
        if (v.norm() == 0.0) throw SchemaError(w + ": zero vector");
        if (!p.value("normalize", true) && std::abs(v.norm() - 1.0) > tol.norm) {
          throw InvariantViolation(w + ": vector not normalized");
        }
        v.normalize();
        m += v * v.adjoint();
      }
      mats[k] = m;
    } else if (p.contains("complement")) {
      const json& c = p["complement"];
      if (!c.is_array() || c.empty()) throw SchemaError(w + ": 'complement' lists outcomes");
      for (const auto& e : c) {
        std::size_t o = count(e, w);
        if (o >= j.size() || o == k) throw SchemaError(w + ": bad complement reference");
        complements[k].push_back(o);
      }
    } else {
      throw SchemaError(w + ": projector needs 'matrix', 'vectors' or 'complement'");
    }
  }
  std::vector<Operator> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!mats[k]) {
      Matrix m = Matrix::Identity(d, d);
      for (auto o : complements[k]) {
        if (!mats[o]) throw SchemaError(where + ": complement of a complement");
        m -= *mats[o];
      }
      mats[k] = m;
    }
    if (!hilbert::is_projector(*mats[k], tol.algebraic)) {
      throw InvariantViolation(where + " outcome " + std::to_string(k) + ": not a projector");
    }
    out.push_back(Operator(local, *mats[k], OperatorKind::Projector, tol.algebraic));
  }
  return out;
}

}  // namespace

double parse_real(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
    long den = j[1].get<long>();
    if (den <= 0) throw SchemaError("rational needs a positive denominator");
    return static_cast<double>(j[0].get<long>()) / static_cast<double>(den);
  }
  throw SchemaError("expected a number or [num, den]");
}

Complex parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {parse_real(j[0]), parse_real(j[1])};
  throw SchemaError("expected a number or [re, im]");
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

namespace {

// First continued-fraction convergent of x with den <= max_den accepted by `ok`.
template <typename Accept>
std::optional<std::pair<long, long>> convergent(double x, long max_den, Accept ok) {
  if (!std::isfinite(x) || std::abs(x) > 1e12) return std::nullopt;
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(r);
    if (std::abs(a) > 1e12) break;
    long ai = static_cast<long>(a);
    long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    if (ok(static_cast<double>(h2) / static_cast<double>(k2))) return std::make_pair(h2, k2);
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    double frac = r - a;
    if (frac == 0.0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::pair<long, long>> as_rational(double x, long max_den) {
  return convergent(x, max_den, [&](double q) { return q == x; });
}

std::optional<std::string> fraction_text(double x, long max_den, double eps) {
  auto q = convergent(x, max_den, [&](double v) { return std::abs(v - x) <= eps; });
  if (!q) return std::nullopt;
  if (q->first == 0) return "0";
  return q->second == 1 ? std::to_string(q->first)
                        : std::to_string(q->first) + "/" + std::to_string(q->second);
}

json real_to_json(double x, long max_den) {
  if (auto q = as_rational(x, max_den)) return json::array({q->first, q->second});
  return x;
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string document_format(const json& doc) {
  if (!doc.is_object() || !doc.contains("format") || !doc["format"].is_string()) {
    throw SchemaError("document has no 'format' string");
  }
  return doc["format"].get<std::string>();
}

MultiAgentSetup setup_from_json(const json& doc, const Tolerances& tol) {
  expect_format(doc, kSetupFormat);
  std::vector<hilbert::Subsystem> subs;
  const json& lj = field(doc, "layout", "setup");
  if (!lj.is_array() || lj.empty()) throw SchemaError("setup: layout must be a non-empty array");
  for (const auto& s : lj) {
    std::size_t dim = count(field(s, "dim", "layout entry"), "layout dim");
    if (dim < 2) throw SchemaError("layout: dimension must be >= 2");
    subs.push_back({str(field(s, "name", "layout entry"), "layout name"), dim});
  }
  Layout layout(subs);

  const json& sj = field(doc, "initial_state", "setup");
  Layout sys = layout.sublayout(strings(field(sj, "systems", "initial_state"), "systems"));
  Vector amp = parse_vector(field(sj, "amplitudes", "initial_state"), "amplitudes");
  if (static_cast<std::size_t>(amp.size()) != sys.total_dim()) {
    throw SchemaError("initial_state: amplitude count does not match the systems");
  }
  hilbert::StateVector psi = sj.value("normalize", false)
                                 ? hilbert::StateVector::normalized(sys, amp)
                                 : hilbert::StateVector(sys, amp, tol.norm);

  std::map<std::string, std::size_t> mem_init;
  if (doc.contains("memory_init")) {
    if (!doc["memory_init"].is_object()) throw SchemaError("memory_init must be an object");
    for (const auto& [k, v] : doc["memory_init"].items()) mem_init[k] = count(v, "memory_init");
  }

  std::vector<Measurement> agents;
  const json& aj = field(doc, "agents", "setup");
  if (!aj.is_array() || aj.empty()) throw SchemaError("setup: agents must be a non-empty array");
  for (const auto& a : aj) {
    Measurement m;
    m.agent = str(field(a, "name", "agent"), "agent name");
    std::string w = "agent '" + m.agent + "'";
    m.memory = str(field(a, "memory", w), w + " memory");
    m.time = static_cast<int>(integer(field(a, "time", w), w + " time"));
    m.targets = strings(field(a, "targets", w), w + " targets");
    for (const auto& t : m.targets) {
      if (!layout.contains(t)) throw SchemaError(w + ": unknown target '" + t + "'");
    }
    if (a.contains("outcome_labels")) m.outcome_labels = strings(a["outcome_labels"], w + " labels");
    m.projectors = parse_projectors(field(a, "projectors", w), layout.sublayout(m.targets), w, tol);
    if (a.contains("pre_unitary") && !a["pre_unitary"].is_null()) {
      const json& pj = a["pre_unitary"];
      if (pj.contains("cnot_in_basis")) {
        const json& c = pj["cnot_in_basis"];
        std::string system = str(field(c, "system", w), w + " cnot system");
        std::string memory = str(field(c, "memory", w), w + " cnot memory");
        if (!layout.contains(system) || !layout.contains(memory)) {
          throw SchemaError(w + ": cnot_in_basis names unknown subsystems");
        }
        Layout s = layout.sublayout({system});
        Vector v = parse_vector(field(c, "vector", w), w + " cnot vector");
        if (static_cast<std::size_t>(v.size()) != s.total_dim()) {
          throw SchemaError(w + ": cnot vector dimension");
        }
        Layout sm = layout.sublayout({system, memory});
        m.pre_unitary = TargetedOperator{
            {system, memory},
            hilbert::cnot_in_basis(hilbert::StateVector::normalized(s, v), sm, system, memory)};
      } else {
        auto targets = strings(field(pj, "targets", w), w + " pre_unitary targets");
        for (const auto& t : targets) {
          if (!layout.contains(t)) throw SchemaError(w + ": unknown pre_unitary target '" + t + "'");
        }
        Layout local = layout.sublayout(targets);
        Matrix u = parse_matrix(field(pj, "matrix", w), local.total_dim(), w + " pre_unitary");
        m.pre_unitary =
            TargetedOperator{targets, Operator(local, u, OperatorKind::Unitary, tol.algebraic)};
      }
    }
    agents.push_back(std::move(m));
  }
  return MultiAgentSetup(layout, psi, std::move(agents), mem_init, doc.value("name", ""), tol);
}

json setup_to_json(const MultiAgentSetup& setup) {
  json doc;
  doc["format"] = kSetupFormat;
  doc["name"] = setup.name();
  json layout = json::array();
  for (const auto& s : setup.layout().subsystems()) {
    layout.push_back({{"name", s.name}, {"dim", s.dim}});
  }
  doc["layout"] = layout;
  json systems = json::array();
  for (const auto& s : setup.initial_state().layout().subsystems()) systems.push_back(s.name);
  doc["initial_state"] = {{"systems", systems},
                          {"amplitudes", vector_to_json(setup.initial_state().amplitudes())}};
  json mem = json::object();
  for (const auto& [k, v] : setup.memory_init()) mem[k] = v;
  doc["memory_init"] = mem;
  json agents = json::array();
  for (const auto& m : setup.agents()) {
    json a;
    a["name"] = m.agent;
    a["memory"] = m.memory;
    a["time"] = m.time;
    a["targets"] = m.targets;
    if (!m.outcome_labels.empty()) a["outcome_labels"] = m.outcome_labels;
    json ps = json::array();
    for (const auto& p : m.projectors) ps.push_back({{"matrix", matrix_to_json(p.matrix())}});
    a["projectors"] = ps;
    if (m.pre_unitary) {
      a["pre_unitary"] = {{"targets", m.pre_unitary->targets},
                          {"matrix", matrix_to_json(m.pre_unitary->op.matrix())}};
    }
    agents.push_back(std::move(a));
  }
  doc["agents"] = agents;
  return doc;
}

EmpiricalModel model_from_json(const json& doc, const Tolerances& tol) {
  expect_format(doc, kModelFormat);
  MeasurementScenario sc;
  sc.variables = strings(field(doc, "variables", "model"), "variables");
  const json& aj = field(doc, "arities", "model");
  if (!aj.is_array()) throw SchemaError("model: arities must be an array");
  for (const auto& a : aj) sc.arities.push_back(static_cast<int>(integer(a, "arity")));
  if (sc.arities.size() != sc.variables.size()) throw SchemaError("model: arities size mismatch");
  sc.state_ref = doc.value("state_ref", "");
  auto index = [&](const std::string& name) {
    auto it = std::find(sc.variables.begin(), sc.variables.end(), name);
    if (it == sc.variables.end()) throw SchemaError("model: unknown variable '" + name + "'");
    return static_cast<std::size_t>(it - sc.variables.begin());
  };

  const json& cj = field(doc, "contexts", "model");
  const json& tj = field(doc, "tables", "model");
  if (!cj.is_array() || !tj.is_array() || cj.size() != tj.size()) {
    throw SchemaError("model: need one table per context");
  }
  std::vector<std::vector<double>> tables;
  for (std::size_t c = 0; c < cj.size(); ++c) {
    JointTable given;
    for (const auto& n : strings(cj[c], "context")) {
      given.variables.push_back(index(n));
      given.arities.push_back(sc.arities.at(given.variables.back()));
    }
    if (!tj[c].is_array() || tj[c].size() != table_size(given.arities)) {
      throw SchemaError("model: table " + std::to_string(c) + " has the wrong size");
    }
    for (const auto& p : tj[c]) given.probs.push_back(parse_real(p));
    VariableSet sorted = given.variables;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw SchemaError("model: context repeats a variable");
    }
    sc.contexts.push_back(sorted);
    tables.push_back(sorted == given.variables ? given.probs : given.marginal(sorted).probs);
  }
  return EmpiricalModel(std::move(sc), std::move(tables), tol);
}

json model_to_json(const EmpiricalModel& model) {
  const auto& sc = model.scenario();
  json doc;
  doc["format"] = kModelFormat;
  doc["variables"] = sc.variables;
  doc["arities"] = sc.arities;
  if (!sc.state_ref.empty()) doc["state_ref"] = sc.state_ref;
  json contexts = json::array(), tables = json::array();
  for (std::size_t c = 0; c < sc.contexts.size(); ++c) {
    json names = json::array();
    for (auto v : sc.contexts[c]) names.push_back(sc.variables[v]);
    contexts.push_back(names);
    json t = json::array();
    for (double p : model.table(c).probs) t.push_back(real_to_json(p));
    tables.push_back(t);
  }
  doc["contexts"] = contexts;
  doc["tables"] = tables;
  return doc;
}

NCycleModel ncycle_from_json(const json& doc, const Tolerances& tol) {
  expect_format(doc, kNCycleFormat);
  std::size_t n = count(field(doc, "n", "n-cycle"), "n");
  const json& ej = field(doc, "edges", "n-cycle");
  if (!ej.is_array()) throw SchemaError("n-cycle: edges must be an array");
  std::vector<std::array<double, 4>> edges;
  for (const auto& e : ej) {
    if (!e.is_array() || e.size() != 4) throw SchemaError("n-cycle: each edge has 4 entries");
    edges.push_back({parse_real(e[0]), parse_real(e[1]), parse_real(e[2]), parse_real(e[3])});
  }
  std::vector<std::string> names;
  if (doc.contains("names")) names = strings(doc["names"], "n-cycle names");
  return NCycleModel(n, std::move(edges), std::move(names), tol);
}

json ncycle_to_json(const NCycleModel& model) {
  json doc;
  doc["format"] = kNCycleFormat;
  doc["n"] = model.n();
  doc["names"] = model.names();
  json edges = json::array();
  for (const auto& e : model.edges()) {
    edges.push_back({real_to_json(e[0]), real_to_json(e[1]), real_to_json(e[2]), real_to_json(e[3])});
  }
  doc["edges"] = edges;
  return doc;
}

std::vector<ClassicalStatement> classical_from_json(const json& doc) {
  expect_format(doc, kClassicalFormat);
  const json& sj = field(doc, "statements", "classical");
  if (!sj.is_array() || sj.empty()) throw SchemaError("classical: statements must be non-empty");
  std::vector<ClassicalStatement> out;
  for (const auto& s : sj) {
    ClassicalStatement c;
    std::string kind = str(field(s, "kind", "statement"), "kind");
    if (kind == "affirms") {
      c.kind = ClassicalStatement::Kind::Affirms;
    } else if (kind == "denies") {
      c.kind = ClassicalStatement::Kind::Denies;
    } else if (kind == "denies_all") {
      c.kind = ClassicalStatement::Kind::DeniesAll;
    } else {
      throw SchemaError("classical: unknown kind '" + kind + "'");
    }
    for (const auto& r : field(s, "refs", "statement")) {
      std::size_t k = count(r, "ref");
      if (k >= sj.size()) throw SchemaError("classical: reference out of range");
      c.refs.push_back(k);
    }
    out.push_back(std::move(c));
  }
  return out;
}

json classical_to_json(const std::vector<ClassicalStatement>& statements) {
  json arr = json::array();
  for (const auto& s : statements) {
    const char* kind = s.kind == ClassicalStatement::Kind::Affirms  ? "affirms"
                       : s.kind == ClassicalStatement::Kind::Denies ? "denies"
                                                                    : "denies_all";
    arr.push_back({{"kind", kind}, {"refs", s.refs}});
  }
  return {{"format", kClassicalFormat}, {"statements", arr}};
}

json event_to_json(const Event& e, const std::vector<std::string>& names,
                   const std::vector<std::vector<std::string>>& labels) {
  json values = json::array();
  for (const auto& [v, x] : e.values) {
    std::string label = v < labels.size() && static_cast<std::size_t>(x) < labels[v].size()
                            ? labels[v][static_cast<std::size_t>(x)]
                            : std::to_string(x);
    values.push_back({{"variable", names.at(v)}, {"value", x}, {"label", label}});
  }
  return {{"values", values}, {"negated", e.negated}, {"text", format_event(names, e, labels)}};
}

json statement_to_json(const Statement& s, const std::vector<std::string>& names,
                       const std::vector<std::vector<std::string>>& labels) {
  json j;
  j["kind"] = s.kind == StatementKind::Outcome ? "outcome" : "inference";
  j["antecedent"] = event_to_json(s.antecedent, names, labels);
  j["consequent"] = event_to_json(s.consequent, names, labels);
  j["probability"] = std::isnan(s.probability) ? json(nullptr) : real_to_json(s.probability);
  j["text"] = format_statement(s, names, labels);
  return j;
}

json certificate_to_json(const ParadoxCertificate& cert, const std::vector<std::string>& names,
                         const std::vector<std::vector<std::string>>& labels) {
  json links = json::array();
  for (const auto& l : cert.chain.links) links.push_back(statement_to_json(l, names, labels));
  return {{"start", event_to_json(cert.chain.start, names, labels)},
          {"links", links},
          {"postselection", event_to_json(cert.postselection, names, labels)},
          {"p_postselection", real_to_json(cert.p_postselection)},
          {"contradicted_start", event_to_json(cert.contradicted_start, names, labels)},
          {"contradicted_end", event_to_json(cert.contradicted_end, names, labels)}};
}

json graph_to_json(const ReferenceGraph& g) {
  return {{"nodes", g.nodes}, {"adjacency", g.adjacency}};
}

json table_to_json(const JointTable& t, const std::vector<std::string>& names,
                   const std::vector<std::vector<std::string>>& labels) {
  json vars = json::array(), rows = json::array();
  for (auto v : t.variables) vars.push_back(names.at(v));
  for (std::size_t k = 0; k < t.entry_count(); ++k) {
    auto o = t.outcome(k);
    std::vector<std::pair<std::size_t, int>> vals;
    for (std::size_t i = 0; i < o.size(); ++i) vals.emplace_back(t.variables[i], o[i]);
    rows.push_back({{"outcome", o},
                    {"text", format_event(names, Event(vals), labels)},
                    {"probability", real_to_json(t.probs[k])}});
  }
  return {{"variables", vars}, {"entries", rows}};
}

json section_to_json(const Section& s, const std::vector<std::string>& names,
                     const std::vector<std::vector<std::string>>& labels) {
  return event_to_json(s.as_event(), names, labels);
}

json chain_to_json(const BinaryChain& c, const std::vector<std::string>& names) {
  json nodes = json::array(), probs = json::array();
  std::string text;
  for (const auto& [v, x] : c.nodes) {
    nodes.push_back({{"variable", names.at(v)}, {"value", x}});
    if (!text.empty()) text += " => ";
    text += names.at(v) + "=" + std::to_string(x);
  }
  for (double p : c.probabilities) probs.push_back(real_to_json(p));
  return {{"nodes", nodes}, {"probabilities", probs}, {"text", text}};
}

std::string digest(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace wfp::io
