// JSON-configured convergence studies.

#include <dfm/study.hpp>

#include <dfm/vtk.hpp>

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <set>
#include <stdexcept>

namespace dfm
{

namespace
{

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

void check_keys(const json& j, const std::string& prefix, const std::set<std::string>& known)
{
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key)) bad("unknown config key: " + prefix + key);
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback)
{
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    bad(std::string("config key '") + key + "' has the wrong type");
  }
}

SchemeKind parse_scheme(const std::string& s)
{
  if (s == "vag-fe") return SchemeKind::vag_fe;
  if (s == "vag-cv") return SchemeKind::vag_cv;
  if (s == "hfv") return SchemeKind::hfv;
  bad("unknown scheme '" + s + "' (expected vag-fe, vag-cv or hfv)");
}

SigmaMode parse_sigma(const std::string& s)
{
  if (s == "line-source") return SigmaMode::line_source;
  if (s == "dirichlet-pin") return SigmaMode::dirichlet_pin;
  if (s == "none") return SigmaMode::none;
  bad("unknown sigma_defect '" + s + "' (expected line-source, dirichlet-pin or none)");
}

JumpDenominator parse_jump_den(const std::string& s)
{
  if (s == "plus") return JumpDenominator::plus;
  if (s == "minus") return JumpDenominator::minus;
  bad("unknown jump_denominator '" + s + "' (expected plus or minus)");
}

// Applies one "dotted.key=value" override onto the raw JSON document. The
// value is parsed as JSON when possible (numbers, booleans, arrays) and
// taken as a plain string otherwise.
void apply_override(json& j, const std::string& item)
{
  const auto eq = item.find('=');
  if (eq == std::string::npos || eq == 0) bad("override must look like key=value: " + item);
  const std::string key = item.substr(0, eq);
  const std::string text = item.substr(eq + 1);

  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &j;
  size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) bad("override has an empty key segment: " + item);
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

} // namespace

StudyConfig parse_config(const std::string& json_text, const std::vector<std::string>& overrides)
{
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded()) bad("config is not valid JSON");
  if (!j.is_object()) bad("config must be a JSON object");
  for (const std::string& o : overrides) apply_override(j, o);

  check_keys(j, "",
             {"scheme", "mesh", "levels", "case", "xi", "t_scale", "solver", "sigma_defect",
              "transmission_defect", "jump_denominator", "timing", "output"});

  StudyConfig cfg;
  cfg.scheme = parse_scheme(get_or<std::string>(j, "scheme", "vag-fe"));
  cfg.mesh = get_or<std::string>(j, "mesh", "cartesian");
  if (cfg.mesh != "cartesian" && cfg.mesh != "tetrahedral")
    bad("unknown mesh '" + cfg.mesh + "' (expected cartesian or tetrahedral)");
  cfg.levels = get_or<std::vector<int>>(j, "levels", {8, 16, 32});
  if (cfg.levels.empty()) bad("levels must not be empty");
  for (const int n : cfg.levels)
    if (n < 2 || n % 2 != 0) bad("levels entries must be even and >= 2");
  cfg.problem = get_or<std::string>(j, "case", "isotropic");
  if (cfg.problem != "isotropic" && cfg.problem != "anisotropic")
    bad("unknown case '" + cfg.problem + "' (expected isotropic or anisotropic)");
  cfg.xi = get_or<double>(j, "xi", 1.0);
  if (!(cfg.xi > 0.5) || cfg.xi > 1.0) bad("xi must lie in (0.5, 1]");
  cfg.t_scale = get_or<double>(j, "t_scale", 1.0);
  if (!(cfg.t_scale > 0.0)) bad("t_scale must be positive");
  if (j.contains("solver")) {
    const json& js = j.at("solver");
    check_keys(js, "solver.", {"rtol", "ilut_tau", "max_iter"});
    cfg.solver.rtol = get_or<double>(js, "rtol", cfg.solver.rtol);
    cfg.solver.ilut_tau = get_or<double>(js, "ilut_tau", cfg.solver.ilut_tau);
    cfg.solver.max_iter = get_or<int>(js, "max_iter", cfg.solver.max_iter);
    if (!(cfg.solver.rtol > 0) || cfg.solver.ilut_tau < 0 || cfg.solver.max_iter < 1)
      bad("solver settings out of range");
  }
  cfg.sigma_defect = parse_sigma(get_or<std::string>(j, "sigma_defect", "line-source"));
  cfg.transmission_defect = get_or<bool>(j, "transmission_defect", true);
  cfg.jump_denominator = parse_jump_den(get_or<std::string>(j, "jump_denominator", "plus"));
  cfg.timing = get_or<bool>(j, "timing", true);
  if (j.contains("output")) {
    const json& jo = j.at("output");
    check_keys(jo, "output.", {"csv", "vtk", "matrix_market"});
    cfg.output.csv = get_or<std::string>(jo, "csv", "");
    cfg.output.vtk = get_or<std::string>(jo, "vtk", "");
    cfg.output.matrix_market = get_or<std::string>(jo, "matrix_market", "");
  }
  return cfg;
}

Case study_case(const StudyConfig& cfg)
{
  Case cs = cfg.problem == "isotropic" ? isotropic_case() : anisotropic_case();
  cs.xi = cfg.xi;
  if (cfg.t_scale != 1.0) {
    for (double& t : cs.T) t *= cfg.t_scale;
    derive_constants(cs);
  }
  return cs;
}

std::vector<StudyRow> run_study(const StudyConfig& cfg, std::ostream* log)
{
  const Case cs = study_case(cfg);
  std::vector<StudyRow> rows;
  rows.reserve(cfg.levels.size());

  for (const int n : cfg.levels) {
    const Mesh m = cfg.mesh == "cartesian" ? build_cartesian_mesh(n) : build_kuhn_mesh(n);
    const auto scheme = make_scheme(cfg.scheme, m, cs);

    AssemblyOptions aopt;
    aopt.xi = cfg.xi;
    aopt.sigma_mode = cfg.sigma_defect;
    aopt.transmission_defect = cfg.transmission_defect;

    const auto t0 = std::chrono::steady_clock::now();
    const AssembledSystem sys = assemble_system(*scheme, aopt);
    const SolveResult res = solve_system(*scheme, sys, cfg.solver);
    const auto t1 = std::chrono::steady_clock::now();
    if (!res.converged)
      throw std::runtime_error("solver did not converge on level " + std::to_string(n));

    StudyRow row;
    row.mesh = cfg.mesh + "-" + std::to_string(n);
    row.scheme = scheme->name();
    row.problem = cfg.problem;
    row.cells = m.n_cells();
    row.dofs = scheme->layout().n_total;
    row.h_T = m.h;
    row.iterations = res.iterations;
    row.cpu_seconds =
        cfg.timing ? std::chrono::duration<double>(t1 - t0).count() : 0.0;
    row.err = compute_errors(*scheme, res.u, cfg.jump_denominator);
    rows.push_back(row);

    if (!cfg.output.vtk.empty())
      write_vtk_file(*scheme, res.u, cfg.output.vtk + "-" + std::to_string(n) + ".vtk");
    if (!cfg.output.matrix_market.empty())
      write_matrix_market(sys.reduced,
                          cfg.output.matrix_market + "-" + std::to_string(n) + ".mtx");

    if (log) {
      (*log) << row.mesh << ' ' << row.scheme << ' ' << row.problem << ": cells=" << row.cells
             << " dofs=" << row.dofs << " it=" << row.iterations
             << " err_sol=" << row.err.sol << " err_grad=" << row.err.grad
             << " err_jump=" << row.err.jump << " residual=" << res.residual
             << " conservation=" << res.conservation << '\n';
    }
  }

  for (size_t i = 0; i < rows.size(); ++i) {
    const size_t a = i == 0 ? 0 : i - 1;
    const size_t b = i == 0 ? std::min<size_t>(1, rows.size() - 1) : i;
    if (a == b) break; // single level: no order to report
    rows[i].alpha_sol =
        convergence_order(rows[a].err.sol, rows[b].err.sol, rows[a].cells, rows[b].cells);
    rows[i].alpha_grad =
        convergence_order(rows[a].err.grad, rows[b].err.grad, rows[a].cells, rows[b].cells);
    rows[i].alpha_jump =
        convergence_order(rows[a].err.jump, rows[b].err.jump, rows[a].cells, rows[b].cells);
  }

  if (!cfg.output.csv.empty()) {
    std::ofstream out(cfg.output.csv);
    if (!out) throw std::runtime_error("cannot open " + cfg.output.csv);
    write_csv(rows, out);
  }
  return rows;
}

} // namespace dfm
