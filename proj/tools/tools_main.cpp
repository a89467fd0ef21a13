// Command-line front end: instance generation, solving, verification,
// rendering and the six-objective benchmark table.
//
// Exit codes: 0 ok, 2 usage/parse, 3 I/O, 4 unbounded, 5 infeasible,
// 6 iteration limit, 7 benchmark mismatch.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcqpkit/qcqpkit.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitUnbounded = 4;
constexpr int kExitInfeasible = 5;
constexpr int kExitMaxIter = 6;
constexpr int kExitMismatch = 7;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in.good() && !in.eof()) throw IoError("cannot read '" + path + "'");
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out.good()) throw IoError("cannot write '" + path + "'");
}

std::vector<double> parse_reals(const std::string& text, char sep = ',') {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (item.empty()) continue;
    size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size()) throw UsageError("cannot parse number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty number list '" + text + "'");
  return out;
}

// "a:r,a:r,..." for the hyperbola/parabola families.
std::vector<std::pair<long, double>> parse_family_pairs(const std::string& text) {
  std::vector<std::pair<long, double>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("expected a:r in '" + item + "'");
    out.emplace_back(std::stol(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
  }
  if (out.empty()) throw UsageError("empty pair list");
  return out;
}

// "c1,c2,..,ck:rho;..." for the ball family.
std::vector<std::pair<std::vector<long>, double>> parse_balls(const std::string& text) {
  std::vector<std::pair<std::vector<long>, double>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("expected center:rho in '" + item + "'");
    std::vector<long> center;
    std::stringstream cs(item.substr(0, colon));
    std::string coord;
    while (std::getline(cs, coord, ',')) center.push_back(std::stol(coord));
    out.emplace_back(std::move(center), std::stod(item.substr(colon + 1)));
  }
  if (out.empty()) throw UsageError("empty ball list");
  return out;
}

qcqpkit::Box parse_bbox(const std::string& text) {
  const std::vector<double> v = parse_reals(text);
  if (v.size() < 4 || v.size() % 2 != 0)
    throw UsageError("bbox must pair bounds per axis: x0,x1,y0,y1[,z0,z1,...]");
  qcqpkit::Box box;
  for (size_t k = 0; k < v.size(); k += 2) {
    box.lo.push_back(v[k]);
    box.hi.push_back(v[k + 1]);
  }
  return box;
}

qcqpkit::InstanceFile load_instance(const std::string& path) {
  try {
    return qcqpkit::parse_instance(read_file(path));
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(e.what()) + " (" + path + ")");
  }
}

// --objective accepts a name from the file's objectives map, a path to a
// JSON array or {"Q": [...]}, or an inline lower-triangle list.
qcqpkit::SymMatrix resolve_objective(const qcqpkit::InstanceFile& file, const std::string& arg) {
  if (const auto it = file.objectives.find(arg); it != file.objectives.end()) return it->second;
  if (std::ifstream probe(arg); probe.good()) {
    const nlohmann::json j = nlohmann::json::parse(read_file(arg));
    const nlohmann::json& arr = j.is_object() && j.contains("Q") ? j["Q"] : j;
    return qcqpkit::detail::matrix_from_json(file.n, arr, "objective");
  }
  const std::vector<double> lower = parse_reals(arg);
  return qcqpkit::SymMatrix::from_lower(file.n, lower);
}

void print_condition(const qcqpkit::ConditionReport& rep) {
  std::printf("%-17s %s  (min margin %.3e", rep.condition.c_str(), rep.passed ? "pass" : "FAIL",
              rep.min_margin);
  if (!rep.witnesses.empty()) {
    const auto& w = rep.witnesses.front();
    std::printf("; witness i=%d j=%d value=%.3e", w.i, w.j, w.value);
    if (!w.point.empty()) {
      std::printf(" at (");
      for (size_t k = 0; k < w.point.size(); ++k) std::printf("%s%.6f", k ? ", " : "", w.point[k]);
      std::printf(")");
    }
  }
  std::printf(")\n");
}

int map_status(qcqpkit::SolveStatus s) {
  switch (s) {
    case qcqpkit::SolveStatus::optimal: return kExitOk;
    case qcqpkit::SolveStatus::unbounded: return kExitUnbounded;
    case qcqpkit::SolveStatus::infeasible: return kExitInfeasible;
    case qcqpkit::SolveStatus::max_iter: return kExitMaxIter;
  }
  return kExitMaxIter;
}

struct GenerateArgs {
  std::string family;
  std::string out;
  double r = 0.5;
  int m = 2;
  std::string p = "1,1";
  std::string pairs;
  std::string balls;
  std::string in_a, in_b;
  double lambda = 0.5;
  std::string style = "split";
  int pad = 0;
  std::string eq_rows;
  std::string eq_rhs;
  int n = 3;
};

int run_generate(const GenerateArgs& g) {
  using namespace qcqpkit;
  ConstraintSet set;
  std::map<std::string, std::string> meta;
  meta["generator"] = g.family;

  if (g.family == "disk-ring") {
    set = disk_ring(g.r);
    meta["r"] = std::to_string(g.r);
  } else if (g.family == "hyperbola-fan") {
    const std::vector<double> p = parse_reals(g.p);
    if (p.size() != 2) throw UsageError("--p must be two reals");
    set = hyperbola_fan(g.m, g.r, std::span<const double, 2>(p.data(), 2));
    meta["m"] = std::to_string(g.m);
    meta["r"] = std::to_string(g.r);
    meta["p"] = g.p;
  } else if (g.family == "parabola-star") {
    set = parabola_star(g.m, g.r);
    meta["m"] = std::to_string(g.m);
    meta["r"] = std::to_string(g.r);
  } else if (g.family == "hyperbola-family") {
    set = hyperbola_family(parse_family_pairs(g.pairs));
    meta["pairs"] = g.pairs;
  } else if (g.family == "parabola-family") {
    set = parabola_family(parse_family_pairs(g.pairs));
    meta["pairs"] = g.pairs;
  } else if (g.family == "balls") {
    set = ball_family(parse_balls(g.balls));
    meta["balls"] = g.balls;
  } else if (g.family == "strip") {
    set = strip();
  } else if (g.family == "strip-single") {
    set = strip_single();
  } else if (g.family == "convex-combine") {
    const InstanceFile a = load_instance(g.in_a);
    const InstanceFile b = load_instance(g.in_b);
    set = convex_combine(a.set, b.set, g.lambda);
    meta["lambda"] = std::to_string(g.lambda);
    meta["inputs"] = g.in_a + ";" + g.in_b;
  } else if (g.family == "lift") {
    InstanceFile a = load_instance(g.in_a);
    InstanceFile b = load_instance(g.in_b);
    if (g.pad > 0) b.set = dummy_pad(b.set, g.pad);
    Matrix l;
    if (g.style == "shared") {
      if (a.n != b.n) throw UsageError("shared lift needs equal dimensions");
      l = lift_matrix_shared(g.lambda, a.n);
    } else if (g.style == "split") {
      l = lift_matrix_split(g.lambda, a.n, b.n);
    } else {
      throw UsageError("--style must be shared or split");
    }
    set = lift(a.set, b.set, l);
    meta["lambda"] = std::to_string(g.lambda);
    meta["style"] = g.style;
    meta["inputs"] = g.in_a + ";" + g.in_b;
  } else if (g.family == "linear-eq") {
    if (g.eq_rows.empty()) throw UsageError("linear-eq needs --rows");
    std::vector<std::vector<double>> rows;
    std::stringstream ss(g.eq_rows);
    std::string row;
    while (std::getline(ss, row, ';')) rows.push_back(parse_reals(row));
    const std::vector<double> rhs = g.eq_rhs.empty() ? std::vector<double>(rows.size(), 0.0)
                                                     : parse_reals(g.eq_rhs);
    if (rhs.size() != rows.size()) throw UsageError("--rhs length must match the row count");
    if (static_cast<int>(rows.front().size()) != g.n - 1)
      throw UsageError("each row needs n-1 coefficients");
    Matrix a(static_cast<int>(rows.size()), g.n - 1);
    for (size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.front().size()) throw UsageError("ragged rows");
      for (size_t j = 0; j < rows[i].size(); ++j) a(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
    set.constraints.push_back(linear_equality(a, rhs));
    meta["rows"] = g.eq_rows;
  } else {
    throw UsageError("unknown family '" + g.family + "'");
  }

  InstanceFile file;
  file.n = set.dim();
  file.H = last_axis_homogenizer(file.n);
  file.set = set;
  file.metadata = std::move(meta);
  if (g.family == "strip" || g.family == "strip-single") {
    file.Q = strip_unbounded_objective();
    file.metadata["Q"] = "-(u1+u2)^2";
  }
  write_file(g.out, serialize_instance(file));

  std::printf("wrote %s: n=%d, %d constraints\n", g.out.c_str(), file.n, set.size());
  print_condition(qcqpkit::verify_condition_d(set));
  print_condition(qcqpkit::verify_condition_cprime(set));
  return kExitOk;
}

int run_solve(const std::string& in, const std::string& objective, bool json, bool no_extract,
              const qcqpkit::SolverOptions& opts) {
  using namespace qcqpkit;
  const InstanceFile file = load_instance(in);
  QcqpInstance inst = to_instance(file);
  if (!objective.empty()) {
    inst.Q = resolve_objective(file, objective);
    inst.validate();
  }

  const SdpSolution sol = solve_relaxation(inst, opts);
  std::optional<ExtractionResult> ex;
  std::string extract_error;
  if (sol.status == SolveStatus::optimal && !no_extract) {
    try {
      ex = extract_solution(inst, sol);
    } catch (const std::exception& e) {
      extract_error = e.what();
    }
  }

  if (json) {
    nlohmann::json j = solution_to_json(sol);
    j["extraction"] = ex ? extraction_to_json(*ex) : nlohmann::json(nullptr);
    if (!extract_error.empty()) j["extraction_error"] = extract_error;
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::printf("status: %s\n", to_string(sol.status).c_str());
    std::printf("objective (eta): %.10g\n", sol.objective);
    std::printf("iterations: %d\n", sol.iterations);
    const KktResiduals& r = sol.residuals;
    std::printf("residuals: primal_eq=%.2e primal_ineq=%.2e dual=%.2e comp_y=%.2e comp_Y=%.2e\n",
                r.primal_eq, r.primal_ineq, r.dual, r.comp_y, r.comp_Y);
    if (ex) {
      std::printf("extraction: case=%s tau=%.6g split_count=%d\n", ex->case_path.c_str(), ex->tau,
                  ex->split_count);
      if (ex->u) {
        std::printf("  u = (");
        for (size_t k = 0; k < ex->u->size(); ++k) std::printf("%s%.8g", k ? ", " : "", (*ex->u)[k]);
        std::printf(")\n");
      }
      std::printf("  rank-1 objective: %.10g\n", ex->objective);
    } else if (!extract_error.empty()) {
      std::printf("extraction failed: %s\n", extract_error.c_str());
    }
  }
  return map_status(sol.status);
}

int run_verify(const std::string& in, std::vector<std::string> conditions, long samples,
               const std::string& bbox_text, int grid, unsigned seed, bool json) {
  using namespace qcqpkit;
  const InstanceFile file = load_instance(in);
  if (conditions.empty()) conditions = {"D", "Dprime", "Cprime", "Bprime"};

  std::vector<ConditionReport> reports;
  for (const std::string& c : conditions) {
    if (c == "D") {
      reports.push_back(verify_condition_d(file.set));
    } else if (c == "Dprime") {
      reports.push_back(verify_condition_dprime(file.set, grid));
    } else if (c == "Cprime") {
      reports.push_back(verify_condition_cprime(file.set));
    } else if (c == "Bprime") {
      Box box;
      if (bbox_text.empty()) {
        box.lo.assign(file.n - 1, -6.0);
        box.hi.assign(file.n - 1, 6.0);
      } else {
        box = parse_bbox(bbox_text);
      }
      if (file.n != static_cast<int>(box.lo.size()) + 1)
        throw UsageError("Bprime falsifier needs a bbox matching n-1 coordinates");
      reports.push_back(falsify_condition_bprime(file.set, box, samples, 1e-7, seed));
    } else {
      throw UsageError("unknown condition '" + c + "' (use D, Dprime, Cprime, Bprime)");
    }
  }

  bool all = true;
  if (json) {
    nlohmann::json j = nlohmann::json::array();
    for (const ConditionReport& rep : reports) {
      j.push_back(condition_report_to_json(rep));
      all = all && rep.passed;
    }
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    for (const ConditionReport& rep : reports) {
      print_condition(rep);
      all = all && rep.passed;
    }
  }
  return all ? kExitOk : 1;
}

int run_render(const std::string& in, const std::string& out, const std::string& bbox_text, int resolution) {
  using namespace qcqpkit;
  const InstanceFile file = load_instance(in);
  if (file.n != 3) throw UsageError("render needs a 2-D instance (n = 3)");
  RenderSpec spec;
  if (!bbox_text.empty()) spec.bbox = parse_bbox(bbox_text);
  spec.resolution = resolution;
  std::ostringstream svg;
  render_svg(file.set, spec, svg);
  write_file(out, svg.str());
  std::printf("wrote %s (%d constraints at %d samples/axis)\n", out.c_str(), file.set.size(),
              spec.resolution);
  return kExitOk;
}

int run_table1_cmd(bool json, const qcqpkit::SolverOptions& opts) {
  using namespace qcqpkit;
  const std::vector<Table1Row> rows = qcqpkit::run_table1(opts);
  bool all = true;
  if (json) {
    nlohmann::json j = nlohmann::json::array();
    for (const Table1Row& row : rows) {
      nlohmann::json rj;
      rj["k"] = row.k;
      rj["status"] = to_string(row.status);
      rj["eta"] = row.eta;
      rj["rank"] = row.rank;
      rj["B_dot_X"] = row.b_dot_x;
      rj["case_path"] = row.case_path;
      rj["u"] = row.u;
      rj["tau"] = row.tau;
      rj["membership_error"] = row.membership_error;
      rj["feasible"] = row.feasible;
      rj["ok"] = row.ok;
      j.push_back(std::move(rj));
      all = all && row.ok;
    }
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::printf("%2s  %-8s  %10s  %4s  %-10s  %-22s  %-9s  %s\n", "k", "status", "eta", "rank", "case",
                "u", "memb.err", "B.X (informative)");
    for (const Table1Row& row : rows) {
      std::string u = "-";
      if (!row.u.empty()) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "(%.6f, %.6f)", row.u[0], row.u[1]);
        u = buf;
      }
      std::string bx;
      for (size_t i = 0; i < row.b_dot_x.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%s%.2f", i ? ", " : "", row.b_dot_x[i]);
        bx += buf;
      }
      std::printf("%2d  %-8s  %10.6f  %4d  %-10s  %-22s  %.2e  %s%s\n", row.k,
                  to_string(row.status).c_str(), row.eta, row.rank, row.case_path.c_str(), u.c_str(),
                  row.membership_error, bx.c_str(), row.ok ? "" : "  <-- MISMATCH");
      all = all && row.ok;
    }
    std::printf(all ? "all rows match\n" : "MISMATCH against the expected optima\n");
  }
  return all ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QCQP instance toolkit: families with exact SDP relaxations, a dense\n"
               "interior-point solver and rank-1 solution recovery"};
  app.require_subcommand(1);
  app.footer("Exit codes: 0 success, 1 verification violation, 2 usage/parse error,\n"
             "3 I/O error, 4 relaxation unbounded, 5 infeasible, 6 iteration limit,\n"
             "7 benchmark mismatch");

  qcqpkit::SolverOptions opts;
  bool json = false;
  unsigned seed = 0;
  app.add_flag("--json", json, "machine-readable output");
  app.add_option("--tol", opts.tol, "solver stopping tolerance");
  app.add_option("--max-iter", opts.max_iter, "solver iteration cap");
  app.add_option("--unbounded-threshold", opts.unbounded_threshold, "objective escape threshold");
  app.add_option("--seed", seed, "sampling seed for the falsifier");
  app.add_flag("--verbose", opts.verbose, "per-iteration solver log");

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "write an instance file for a named family");
  generate->add_option("family", gen.family,
                       "disk-ring | hyperbola-fan | parabola-star | hyperbola-family | parabola-family |"
                       " balls | strip | strip-single | convex-combine | lift | linear-eq")
      ->required();
  generate->add_option("--out", gen.out, "output path")->required();
  generate->add_option("--r", gen.r, "radius parameter");
  generate->add_option("--m", gen.m, "member count");
  generate->add_option("--p", gen.p, "translation, as x,y");
  generate->add_option("--pairs", gen.pairs, "family pairs a:r,a:r,...");
  generate->add_option("--balls", gen.balls, "centers c1,..,ck:rho;...");
  generate->add_option("--a", gen.in_a, "first input instance");
  generate->add_option("--b", gen.in_b, "second input instance");
  generate->add_option("--lambda", gen.lambda, "combination weight in (0,1)");
  generate->add_option("--style", gen.style, "lift map: shared | split");
  generate->add_option("--pad", gen.pad, "dummy-pad the second input by this many members");
  generate->add_option("--rows", gen.eq_rows, "equality rows c1,..,c(n-1);...");
  generate->add_option("--rhs", gen.eq_rhs, "equality right-hand sides b1,...");
  generate->add_option("--n", gen.n, "dimension for linear-eq");

  std::string in_path, objective, out_path, bbox_text;
  bool no_extract = false;
  CLI::App* solve = app.add_subcommand("solve", "solve the relaxation and recover a rank-1 point");
  solve->add_option("input", in_path, "instance file")->required();
  solve->add_option("--objective", objective, "objective: name in the file, a JSON path, or inline numbers");
  solve->add_flag("--no-extract", no_extract, "skip rank-1 recovery");

  std::vector<std::string> conditions;
  long samples = 100000;
  int grid = 720;
  CLI::App* verify = app.add_subcommand("verify", "check the family conditions");
  verify->add_option("input", in_path, "instance file")->required();
  verify->add_option("--condition", conditions, "D | Dprime | Cprime | Bprime (repeatable)");
  verify->add_option("--samples", samples, "falsifier sample budget");
  verify->add_option("--bbox", bbox_text, "falsifier box x0,x1,y0,y1");
  verify->add_option("--grid", grid, "angle grid for Dprime");

  int resolution = 400;
  CLI::App* render = app.add_subcommand("render", "draw the restricted zones as SVG");
  render->add_option("input", in_path, "instance file")->required();
  render->add_option("--out", out_path, "output SVG path")->required();
  render->add_option("--bbox", bbox_text, "view box x0,x1,y0,y1");
  render->add_option("--resolution", resolution, "samples per axis (>= 64)");

  CLI::App* table1 = app.add_subcommand("table1", "run the six-objective benchmark and check it");
  for (CLI::App* sub : {generate, solve, verify, render, table1}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed()) return run_generate(gen);
    if (solve->parsed()) return run_solve(in_path, objective, json, no_extract, opts);
    if (verify->parsed()) return run_verify(in_path, conditions, samples, bbox_text, grid, seed, json);
    if (render->parsed()) return run_render(in_path, out_path, bbox_text, resolution);
    if (table1->parsed()) return run_table1_cmd(json, opts);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kExitUsage;
}
