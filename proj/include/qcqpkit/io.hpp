#ifndef QCQPKIT_IO_HPP_
#define QCQPKIT_IO_HPP_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcqpkit/extract.hpp"
#include "qcqpkit/instances.hpp"
#include "qcqpkit/sdp.hpp"
#include "qcqpkit/symmat.hpp"
#include "qcqpkit/verify.hpp"

namespace qcqpkit {

/// On-disk instance document. Matrices are row-major lower triangles; numbers
/// round-trip bitwise through the shortest-decimal serializer.
struct InstanceFile {
  int schema_version = 1;
  int n = 0;
  SymMatrix H;
  std::optional<SymMatrix> Q;
  ConstraintSet set;
  std::map<std::string, SymMatrix> objectives;  // optional named objectives
  std::map<std::string, std::string> metadata;

  bool operator==(const InstanceFile& o) const {
    return schema_version == o.schema_version && n == o.n && H == o.H && Q == o.Q &&
           set.constraints.size() == o.set.constraints.size() && set.alphas == o.set.alphas &&
           objectives == o.objectives && metadata == o.metadata && same_constraints(o);
  }

 private:
  bool same_constraints(const InstanceFile& o) const {
    for (size_t k = 0; k < set.constraints.size(); ++k) {
      if (set.constraints[k].label != o.set.constraints[k].label) return false;
      if (!(set.constraints[k].matrix == o.set.constraints[k].matrix)) return false;
    }
    return true;
  }
};

namespace detail {

inline nlohmann::json lower_json(const SymMatrix& m) { return nlohmann::json(m.lower()); }

inline SymMatrix matrix_from_json(int n, const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) throw std::invalid_argument("instance file: " + what + " must be an array");
  std::vector<double> lower;
  lower.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw std::invalid_argument("instance file: " + what + " must hold numbers");
    lower.push_back(v.get<double>());
  }
  return SymMatrix::from_lower(n, lower);
}

}  // namespace detail

inline std::string serialize_instance(const InstanceFile& file) {
  nlohmann::json j;
  j["schema_version"] = file.schema_version;
  j["n"] = file.n;
  j["H"] = detail::lower_json(file.H);
  if (file.Q) j["Q"] = detail::lower_json(*file.Q);
  nlohmann::json cons = nlohmann::json::array();
  for (const Constraint& c : file.set.constraints)
    cons.push_back({{"label", c.label}, {"matrix", detail::lower_json(c.matrix)}});
  j["constraints"] = std::move(cons);
  if (file.set.alphas) j["alphas"] = *file.set.alphas;
  if (!file.objectives.empty()) {
    nlohmann::json objs;
    for (const auto& [name, m] : file.objectives) objs[name] = detail::lower_json(m);
    j["objectives"] = std::move(objs);
  }
  if (!file.metadata.empty()) j["metadata"] = file.metadata;
  return j.dump(2) + "\n";
}

inline InstanceFile parse_instance(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("instance file: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("instance file: root must be an object");

  InstanceFile file;
  file.schema_version = j.value("schema_version", 1);
  if (file.schema_version != 1) throw std::invalid_argument("instance file: unsupported schema_version");
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw std::invalid_argument("instance file: missing integer field n");
  file.n = j["n"].get<int>();
  if (file.n < 1) throw std::invalid_argument("instance file: n must be >= 1");
  if (!j.contains("H")) throw std::invalid_argument("instance file: missing H");
  file.H = detail::matrix_from_json(file.n, j["H"], "H");
  if (j.contains("Q")) file.Q = detail::matrix_from_json(file.n, j["Q"], "Q");

  if (!j.contains("constraints") || !j["constraints"].is_array())
    throw std::invalid_argument("instance file: missing constraints array");
  for (const auto& c : j["constraints"]) {
    if (!c.is_object() || !c.contains("matrix"))
      throw std::invalid_argument("instance file: each constraint needs a matrix");
    Constraint out;
    out.label = c.value("label", "B" + std::to_string(file.set.constraints.size()));
    out.matrix = detail::matrix_from_json(file.n, c["matrix"], "constraint matrix");
    file.set.constraints.push_back(std::move(out));
  }
  if (j.contains("alphas")) {
    std::vector<double> alphas;
    for (const auto& v : j["alphas"]) alphas.push_back(v.get<double>());
    file.set.alphas = std::move(alphas);
  }
  if (j.contains("objectives")) {
    for (const auto& [name, m] : j["objectives"].items())
      file.objectives[name] = detail::matrix_from_json(file.n, m, "objective " + name);
  }
  if (j.contains("metadata")) {
    for (const auto& [key, v] : j["metadata"].items())
      file.metadata[key] = v.is_string() ? v.get<std::string>() : v.dump();
  }
  file.set.validate();
  return file;
}

/// Assembles a solvable instance. The objective comes from `objective_name`
/// when given, else the file's Q, else zero.
inline QcqpInstance to_instance(const InstanceFile& file, const std::string& objective_name = "") {
  QcqpInstance inst;
  inst.n = file.n;
  inst.H = file.H;
  inst.set = file.set;
  if (!objective_name.empty()) {
    const auto it = file.objectives.find(objective_name);
    if (it == file.objectives.end())
      throw std::invalid_argument("instance file: no objective named '" + objective_name + "'");
    inst.Q = it->second;
  } else if (file.Q) {
    inst.Q = *file.Q;
  } else {
    inst.Q = SymMatrix(file.n);
  }
  inst.validate();
  return inst;
}

inline nlohmann::json residuals_to_json(const KktResiduals& r) {
  return {{"primal_eq", r.primal_eq},
          {"primal_ineq", r.primal_ineq},
          {"dual", r.dual},
          {"comp_y", r.comp_y},
          {"comp_Y", r.comp_Y}};
}

inline nlohmann::json solution_to_json(const SdpSolution& sol) {
  nlohmann::json j;
  j["status"] = to_string(sol.status);
  j["objective"] = sol.objective;
  j["iterations"] = sol.iterations;
  j["t"] = sol.t;
  j["y"] = sol.y;
  j["X"] = detail::lower_json(sol.X);
  j["residuals"] = residuals_to_json(sol.residuals);
  return j;
}

inline nlohmann::json extraction_to_json(const ExtractionResult& r) {
  nlohmann::json j;
  j["case_path"] = r.case_path;
  j["tau"] = r.tau;
  j["objective"] = r.objective;
  j["split_count"] = r.split_count;
  j["X_tilde"] = detail::lower_json(r.X_tilde);
  j["u"] = r.u ? nlohmann::json(*r.u) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json condition_report_to_json(const ConditionReport& rep) {
  nlohmann::json j;
  j["condition"] = rep.condition;
  j["passed"] = rep.passed;
  j["min_margin"] = rep.min_margin;
  nlohmann::json ws = nlohmann::json::array();
  for (const ConditionWitness& w : rep.witnesses) {
    nlohmann::json wj = {{"i", w.i}, {"j", w.j}, {"value", w.value}};
    wj["point"] = w.point;
    ws.push_back(std::move(wj));
  }
  j["witnesses"] = std::move(ws);
  return j;
}

}  // namespace qcqpkit

#endif  // QCQPKIT_IO_HPP_
