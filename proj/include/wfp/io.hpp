#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wfp/contextuality.hpp"
#include "wfp/ncycle.hpp"
#include "wfp/reasoning.hpp"
#include "wfp/wigner_setup.hpp"

namespace wfp::io {

using json = nlohmann::json;

inline constexpr const char* kSetupFormat = "wfp-setup/1";
inline constexpr const char* kModelFormat = "wfp-model/1";
inline constexpr const char* kNCycleFormat = "wfp-ncycle/1";
inline constexpr const char* kClassicalFormat = "wfp-classical/1";

// Reals are numbers or [num, den]; complex entries are reals or [re, im].
double parse_real(const json& j);
hilbert::Complex parse_complex(const json& j);
json complex_to_json(hilbert::Complex z);

// [num, den] when x is exactly num/den in double arithmetic with den <= max_den,
// a plain number otherwise.
json real_to_json(double x, long max_den = 1 << 20);
std::optional<std::pair<long, long>> as_rational(double x, long max_den = 1 << 20);

// Closest fraction with den <= max_den when it lies within eps of x, as "n/d".
std::optional<std::string> fraction_text(double x, long max_den = 10000, double eps = 1e-12);

json read_file(const std::string& path);  // throws SchemaError
std::string document_format(const json& doc);

// Setup documents. Projectors are given per outcome as
//   {"matrix": [[z..]..]} | {"vectors": [[z..]..]} | {"complement": [k..]}
// and a pre-unitary as {"targets": [..], "matrix": ..} or
//   {"cnot_in_basis": {"system": s, "memory": m, "vector": [z..]}}.
MultiAgentSetup setup_from_json(const json& doc, const Tolerances& tol = {});
json setup_to_json(const MultiAgentSetup& setup);

EmpiricalModel model_from_json(const json& doc, const Tolerances& tol = {});
json model_to_json(const EmpiricalModel& model);

NCycleModel ncycle_from_json(const json& doc, const Tolerances& tol = {});
json ncycle_to_json(const NCycleModel& model);

std::vector<ClassicalStatement> classical_from_json(const json& doc);
json classical_to_json(const std::vector<ClassicalStatement>& statements);

json event_to_json(const Event& e, const std::vector<std::string>& names,
                   const std::vector<std::vector<std::string>>& labels = {});
json statement_to_json(const Statement& s, const std::vector<std::string>& names,
                       const std::vector<std::vector<std::string>>& labels = {});
json certificate_to_json(const ParadoxCertificate& cert, const std::vector<std::string>& names,
                         const std::vector<std::vector<std::string>>& labels = {});
json graph_to_json(const ReferenceGraph& g);
json table_to_json(const JointTable& t, const std::vector<std::string>& names,
                   const std::vector<std::vector<std::string>>& labels = {});
json section_to_json(const Section& s, const std::vector<std::string>& names,
                     const std::vector<std::vector<std::string>>& labels = {});
json chain_to_json(const BinaryChain& c, const std::vector<std::string>& names);

// FNV-1a 64 over the bytes, as 16 hex digits.
std::string digest(const std::string& bytes);

}  // namespace wfp::io
