#ifndef NEVPICK_CLI_HPP
#define NEVPICK_CLI_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "nevpick/nevpick.hpp"
#include "nevpick/io.hpp"

namespace nevpick::cli {

using io::json;

inline constexpr const char* kToolName = "nevpick";
inline constexpr const char* kToolVersion = "1.0.0";

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"kernel-eval",     "pick-check",       "pick-minnorm",  "pick-solve",
                                          "algebra-classes", "algebra-subspace", "corona-bound",  "corona-check",
                                          "corona-solve",    "corona-subalgebra", "verify-oracles"};
  return c;
}

struct Outcome {
  int exit_code = 0;
  std::string status;
  json value;
  json certificates = json::object();
  std::optional<json> realization;
  std::optional<json> oracle_reports;
  std::optional<std::string> banner;
};

namespace detail {

inline const KernelSpec& need_kernel(const io::Problem& p) {
  if (!p.kernel) throw io::FieldError("kernel", "missing");
  return *p.kernel;
}

inline const std::vector<Point>& need_points(const io::Problem& p) {
  if (p.points.empty()) throw io::FieldError("points", "need at least one point");
  return p.points;
}

inline TangentialData tangential(const io::Problem& p) {
  need_points(p);
  if (p.targets.empty()) throw io::FieldError("data.targets", "missing");
  TangentialData d;
  d.points = p.points;
  d.targets = p.targets;
  d.directions = p.directions.empty() ? std::vector<Vector>(p.points.size(), Vector::Ones(1)) : p.directions;
  d.validate();
  return d;
}

inline std::vector<Polynomial> need_entries(const io::Problem& p) {
  if (p.corona_entries.empty()) throw io::FieldError("corona.entries", "missing");
  return p.corona_entries;
}

inline AlgebraPresentation algebra_or_full(const io::Problem& p) {
  return p.algebra ? *p.algebra : AlgebraPresentation::full(p.dim());
}

inline json eigenvalues_json(const Matrix& m) {
  json a = json::array();
  const auto ev = linalg::hermitian_eigenvalues(m);
  for (Eigen::Index i = 0; i < ev.size(); ++i) a.push_back(ev(i));
  return a;
}

inline json realization_json(const Realization& r) {
  json j;
  j["orientation"] = r.orientation == Orientation::Column ? "column" : "row";
  j["gain"] = r.gain;
  j["A"] = io::to_json(r.A);
  j["B"] = io::to_json(r.B);
  j["C"] = io::to_json(r.C);
  j["D"] = io::to_json(r.D);
  json e;
  e["base"] = io::to_json(r.embedding.base);
  json vs = json::array();
  for (const auto& v : r.embedding.vectors) vs.push_back(io::to_json(v));
  e["vectors"] = vs;
  e["constants"] = io::to_json(r.embedding.constants);
  if (r.embedding.linear_map) e["linear_map"] = io::to_json(*r.embedding.linear_map);
  j["embedding"] = e;
  json values = json::array();
  for (std::size_t i = 0; i < r.embedding.size(); ++i) values.push_back(io::to_json(r.eval_at(i)));
  j["values_at_points"] = values;
  const auto& c = r.certificate;
  j["certificate"] = {{"colligation_norm", c.colligation_norm}, {"norm_bound", c.norm_bound},
                      {"max_residual", c.max_residual},       {"pick_rank", c.pick_rank},
                      {"constraints", c.constraints},         {"rank_collapse", c.rank_collapse},
                      {"lambda_min", c.lambda_min}};
  return j;
}

inline json oracle_json(const OracleReport& r) {
  json j;
  j["oracle"] = r.name;
  j["method"] = r.method;
  j["tolerance"] = r.tolerance;
  json in = json::object();
  for (const auto& [k, v] : r.inputs) in[k] = v;
  j["inputs"] = in;
  json vals = json::object();
  for (const auto& [k, v] : r.values) vals[k] = v;
  j["values"] = vals;
  json flags = json::object();
  for (const auto& [k, v] : r.flags) flags[k] = v;
  j["flags"] = flags;
  return j;
}

inline Point base_of(const io::Problem& p) { return p.base ? *p.base : default_base(need_kernel(p), p.points); }

inline json partition_json(const PointPartition& part) {
  json b = json::array();
  for (const auto& blk : part.blocks) b.push_back(blk);
  return b;
}

//
// Subcommands
//

inline Outcome kernel_eval(const io::Problem& p, const io::Options& o) {
  const auto& spec = need_kernel(p);
  const auto& pts = need_points(p);
  const auto km = kernel_matrix(spec, pts);
  Outcome out;
  out.value = km.psd.lambda_min;
  out.certificates["kernel_matrix"] = io::to_json(km.values);
  out.certificates["eigenvalues"] = eigenvalues_json(km.values);
  out.certificates["psd"] = linalg::is_psd(km.values, o.tol).psd;
  out.certificates["has_duplicates"] = km.has_duplicates;
  json dups = json::array();
  for (const auto& [i, j] : km.duplicate_pairs) dups.push_back({i, j});
  out.certificates["duplicate_pairs"] = dups;
  if (pts.size() >= 2) {
    json pairs = json::array();
    for (const auto& pr : check_irreducible(spec, pts).pairs)
      pairs.push_back({{"i", pr.i}, {"j", pr.j}, {"kernel_value", io::to_json(pr.kernel_value)}, {"minor", pr.minor},
                       {"nonorthogonal", pr.nonorthogonal}, {"independent", pr.independent}});
    out.certificates["irreducibility"] = pairs;
  }
  const auto np = check_complete_np_finite(spec, pts, base_of(p), o.tol);
  out.certificates["complete_np"] = {{"complete", np.complete}, {"lambda_min", np.lambda_min}};
  out.status = np.complete ? "ok" : "not_complete_np";
  out.exit_code = np.complete ? 0 : 1;
  return out;
}

inline Outcome pick_check(const io::Problem& p, const io::Options& o) {
  const auto data = tangential(p);
  const Matrix k = kernel_matrix(need_kernel(p), data.points).values;
  const double t = p.t.value_or(1.0);
  const auto pm = pick_matrix(k, data, t);
  const auto r = linalg::is_psd(pm.entries, o.tol);
  Outcome out;
  out.value = r.lambda_min;
  out.certificates["t"] = t;
  out.certificates["pick_matrix"] = io::to_json(pm.entries);
  out.certificates["eigenvalues"] = eigenvalues_json(pm.entries);
  out.certificates["psd_threshold"] = -o.tol * r.scale;
  out.status = r.psd ? "solvable" : "infeasible";
  out.exit_code = r.psd ? 0 : 1;
  return out;
}

inline Outcome pick_minnorm(const io::Problem& p, const io::Options& o) {
  const auto data = tangential(p);
  const Matrix k = kernel_matrix(need_kernel(p), data.points).values;
  const auto r = min_norm(k, data, o.tol);
  Outcome out;
  out.value = r.t;
  out.certificates["method"] = r.method;
  out.certificates["lambda_min_at_t"] = r.lambda_min_at_t;
  out.status = "solved";
  return out;
}

inline Outcome pick_solve(const io::Problem& p, const io::Options& o) {
  const auto data = tangential(p);
  const auto& spec = need_kernel(p);
  double t = 0.0;
  if (p.t) {
    t = *p.t;
  } else {
    t = min_norm(kernel_matrix(spec, data.points).values, data, o.tol).t;
    if (t == 0.0) t = 1.0;
  }
  const auto emb = embed_points(spec, data.points, base_of(p), o.tol);
  const auto r = solve_interpolant(emb, data, t, o.tol);
  Outcome out;
  out.value = t;
  out.certificates["norm_bound"] = r.certificate.norm_bound;
  out.certificates["max_residual"] = r.certificate.max_residual;
  out.realization = realization_json(r);
  out.status = "solved";
  return out;
}

inline Outcome algebra_classes(const io::Problem& p, const io::Options& o) {
  const auto& pts = need_points(p);
  const auto alg = algebra_or_full(p);
  const auto part = point_equivalence(alg, pts, o.degree);
  Outcome out;
  out.value = static_cast<int>(part.size());
  out.certificates["equivalence"] = "degree-" + std::to_string(o.degree) + " equivalence";
  out.certificates["blocks"] = partition_json(part);
  std::vector<Polynomial> e;
  try {
    e = partition_of_unity(alg, pts, part, o.degree);
  } catch (const InfeasibleError& err) {
    out.certificates["partition_error"] = err.what();
    out.status = "partition_infeasible";
    out.exit_code = 1;
    return out;
  }
  json ej = json::array();
  for (const auto& ek : e) ej.push_back(io::to_json(ek));
  out.certificates["partition_of_unity"] = ej;
  json vals = json::array();
  for (const auto& ek : e) {
    json row = json::array();
    for (const auto& x : pts) row.push_back(io::to_json(ek.eval(x)));
    vals.push_back(row);
  }
  out.certificates["partition_values"] = vals;
  out.status = "ok";
  if (!p.targets.empty()) {
    const auto space = make_space(p.dim(), o.degree);
    try {
      const auto col = subalgebra_interpolant_unnormed(space, alg, tangential(p), pts);
      json cj = json::array();
      for (const auto& c : col) cj.push_back(io::to_json(c));
      out.certificates["interpolant_unnormed"] = cj;
    } catch (const InfeasibleError& err) {
      out.certificates["interpolant_error"] = err.what();
      out.status = "inconsistent_data";
      out.exit_code = 1;
    }
  }
  return out;
}

inline SubspaceFamilySpec family_or(const io::Problem& p, SubspaceFamilySpec fallback) {
  return p.family ? *p.family : fallback;
}

inline Outcome algebra_subspace(const io::Problem& p, const io::Options& o) {
  const auto alg = algebra_or_full(p);
  const auto space = make_space(p.dim(), o.degree);
  const auto fam = sample_family(
      space, alg, family_or(p, SubspaceFamilySpec::explicit_vectors({Polynomial::constant(p.dim(), 1.0)})));
  Outcome out;
  json members = json::array();
  for (const auto& m : fam) {
    json mj;
    mj["label"] = m.label;
    mj["rank"] = static_cast<int>(m.basis.full ? space.size() : m.basis.rank());
    mj["full"] = m.basis.full;
    if (m.h) mj["h"] = io::to_json(*m.h);
    if (!m.grid_point.empty()) mj["grid_point"] = io::to_json(m.grid_point);
    if (!p.points.empty()) {
      const Matrix k = compressed_kernel(space, m.basis, p.points);
      mj["compressed_kernel"] = io::to_json(k);
      mj["lambda_min"] = linalg::hermitian_eigenvalues(k)(0);
    }
    members.push_back(mj);
  }
  out.value = static_cast<int>(fam.size());
  out.certificates["space_dimension"] = static_cast<int>(space.size());
  out.certificates["members"] = members;
  if (p.family && p.family->variant == FamilyVariant::RandomCyclic) out.certificates["note"] = "heuristic cyclic sample";
  out.status = "ok";
  return out;
}

inline CoronaProblem corona_problem(const io::Problem& p) {
  CoronaProblem c;
  c.entries = need_entries(p);
  if (p.kernel) c.kernel = *p.kernel;
  else c.kernel = p.dim() == 1 ? KernelSpec::szego() : KernelSpec::drury_arveson(p.dim());
  c.algebra = p.algebra;
  c.delta = p.delta;
  c.validate();
  return c;
}

inline Outcome corona_bound(const io::Problem& p, const io::Options& o) {
  const auto c = corona_problem(p);
  const auto space = make_space(c.dim(), o.degree);
  const auto b = corona_lower_bound(space, c);
  Outcome out;
  out.value = b.delta_hat;
  json sweep = json::array();
  for (const auto& [n, v] : b.sweep) sweep.push_back({{"degree", n}, {"delta_hat", v}});
  out.certificates["sweep"] = sweep;
  const bool positive = b.delta_hat > 1e-12;
  out.status = positive ? "feasible" : "infeasible";
  out.exit_code = positive ? 0 : 1;
  return out;
}

inline double delta_or_search(const io::Problem& p, const Matrix& k, const std::vector<RowVector>& rows,
                              Outcome& out) {
  if (p.delta) return *p.delta;
  const double d = corona_delta_search(k, p.points, rows);
  out.certificates["delta_searched"] = true;
  return d;
}

inline Outcome corona_check(const io::Problem& p, const io::Options& o) {
  const auto c = corona_problem(p);
  const auto& pts = need_points(p);
  const Matrix k = kernel_matrix(c.kernel, pts).values;
  const auto rows = c.rows_at(pts);
  Outcome out;
  const double delta = delta_or_search(p, k, rows, out);
  out.certificates["delta"] = delta;
  if (!(delta > 0.0)) {
    out.value = 0.0;
    out.status = "infeasible";
    out.exit_code = 1;
    return out;
  }
  const auto r = corona_check_points(k, pts, rows, delta, o.tol);
  out.value = r.lambda_min;
  out.certificates["pick_matrix"] = io::to_json(r.pick);
  out.certificates["eigenvalues"] = eigenvalues_json(r.pick);
  out.status = r.psd ? "feasible" : "infeasible";
  out.exit_code = r.psd ? 0 : 1;
  return out;
}

inline Outcome corona_solve(const io::Problem& p, const io::Options& o) {
  Outcome out = corona_check(p, o);
  if (out.exit_code != 0) return out;
  const auto c = corona_problem(p);
  const double delta = out.certificates["delta"].get<double>();
  const auto emb = embed_points(c.kernel, p.points, base_of(p), o.tol);
  const auto r = corona_solve_points(emb, p.points, c.rows_at(p.points), delta);
  out.value = r.certificate.norm_bound;
  out.certificates["norm_bound"] = r.certificate.norm_bound;
  out.certificates["max_residual"] = r.certificate.max_residual;
  out.realization = realization_json(r);
  out.status = "solved";
  return out;
}

inline json witnesses_json(const CoronaCertificate& cert) {
  json w = json::array();
  for (const auto& x : cert.witnesses) {
    json j = {{"subspace", x.label}, {"lambda_min", x.lambda_min}, {"pass", x.pass}};
    if (x.point >= 0) j["point"] = x.point;
    if (!x.grid_point.empty()) j["grid_point"] = io::to_json(x.grid_point);
    w.push_back(j);
  }
  return w;
}

inline Outcome corona_subalgebra(const io::Problem& p, const io::Options& o) {
  const auto c = corona_problem(p);
  const auto& pts = need_points(p);
  const auto space = make_space(c.dim(), o.degree);
  const auto family = sample_family(space, c.algebra_or_full(), family_or(p, SubspaceFamilySpec::full_space()));
  const Matrix k = kernel_matrix(c.kernel, pts).values;
  const auto rows = c.rows_at(pts);
  Outcome out;
  const double delta = delta_or_search(p, k, rows, out);
  out.certificates["delta"] = delta;
  out.banner = kSampledFamilyBanner;
  if (!(delta > 0.0)) {
    out.value = 0.0;
    out.status = "infeasible";
    out.exit_code = 1;
    return out;
  }
  const auto cert = subalgebra_corona_check(space, c, family, pts, delta);
  out.value = cert.worst()->lambda_min;
  out.certificates["witnesses"] = witnesses_json(cert);
  out.certificates["family_size"] = static_cast<int>(family.size());
  out.status = corona_status_name(cert.status);
  out.exit_code = cert.status == CoronaStatus::Feasible ? 0 : 1;
  if (cert.status == CoronaStatus::Feasible && corona_check_points(k, pts, rows, delta, o.tol).psd) {
    const auto emb = embed_points(c.kernel, pts, base_of(p), o.tol);
    const auto r = corona_solve_points(emb, pts, rows, delta);
    out.certificates["norm_bound"] = r.certificate.norm_bound;
    out.certificates["max_residual"] = r.certificate.max_residual;
    out.realization = realization_json(r);
  }
  return out;
}

inline Outcome verify_oracles(const io::Problem& p, const io::Options& o) {
  Outcome out;
  json reports = json::array();
  bool agree = true;
  bool infeasible = false;

  // Seeded sweep of random two-point disk instances against the closed form.
  {
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double pi = std::acos(-1.0);
    auto disk = [&](double r) { return std::polar(r * std::sqrt(u(rng)), 2.0 * pi * u(rng)); };
    int decisions = 0;
    double worst_t = 0.0;
    for (int s = 0; s < o.samples; ++s) {
      const cplx x1 = disk(0.9), x2 = disk(0.9), w1 = disk(2.0), w2 = disk(2.0);
      const auto cf = schwarz_pick_two_point(x1, x2, w1, w2);
      const auto data = TangentialData::scalar({Point::Constant(1, x1), Point::Constant(1, x2)}, {w1, w2});
      const Matrix k = kernel_matrix(KernelSpec::szego(), data.points).values;
      if (solvability(k, data, o.tol).solvable == cf.solvable) ++decisions;
      worst_t = std::max(worst_t, std::abs(min_norm(k, data, o.tol).t - cf.t_star));
    }
    OracleReport r;
    r.name = "schwarz_pick_sweep";
    r.method = "seeded random two-point disk instances vs closed form";
    r.tolerance = 1e-8;
    r.inputs["samples"] = std::to_string(o.samples);
    r.inputs["seed"] = std::to_string(o.seed);
    r.values["decision_agreements"] = decisions;
    r.values["max_t_star_error"] = worst_t;
    r.flags["agree"] = decisions == o.samples && worst_t <= 1e-8;
    agree = agree && r.flags["agree"];
    reports.push_back(oracle_json(r));
  }

  const bool scalar = p.directions.empty() ||
                      std::all_of(p.directions.begin(), p.directions.end(), [](const Vector& v) {
                        return v.size() == 1 && v(0) == cplx(1.0);
                      });
  if (p.kernel && p.kernel->kind == KernelKind::Szego && p.points.size() == 2 && p.targets.size() == 2 && scalar) {
    const auto cf = schwarz_pick_two_point(p.points[0](0), p.points[1](0), p.targets[0], p.targets[1]);
    const auto data = tangential(p);
    const Matrix k = kernel_matrix(*p.kernel, data.points).values;
    auto rep = cf.report;
    const bool engine = solvability(k, data, o.tol).solvable;
    const double t = min_norm(k, data, o.tol).t;
    rep.values["engine_t_star"] = t;
    rep.flags["engine_solvable"] = engine;
    rep.flags["agree"] = engine == cf.solvable && std::abs(t - cf.t_star) <= 1e-8;
    agree = agree && rep.flags["agree"];
    reports.push_back(oracle_json(rep));
  }

  if (!p.targets.empty() && p.points.size() <= 3 && p.dim() <= 2) {
    const auto data = tangential(p);
    const int n = std::min(o.degree, 8);
    BruteForceOptions bo;
    bo.seed = o.seed;
    auto bf = brute_force_distance(make_space(p.dim(), n), data, n, bo);
    bf.report.flags["sandwich"] = bf.upper >= bf.lower - 1e-9;
    agree = agree && bf.report.flags["sandwich"];
    reports.push_back(oracle_json(bf.report));
  }

  if (p.family && p.family->variant == FamilyVariant::FiniteCodimGrid && !p.corona_entries.empty() && p.delta &&
      !p.points.empty()) {
    const auto c = corona_problem(p);
    const auto g = family_grid_check(make_space(c.dim(), o.degree), c.algebra_or_full(), p.family->complement,
                                     p.family->resolution, c, p.points, *p.delta);
    reports.push_back(oracle_json(g.report));
    out.banner = kSampledFamilyBanner;
    infeasible = !g.pass;
  }

  out.value = static_cast<int>(reports.size());
  out.oracle_reports = reports;
  if (!agree) {
    out.status = "disagreement";
    out.exit_code = 2;
  } else if (infeasible) {
    out.status = "infeasible";
    out.exit_code = 1;
  } else {
    out.status = "agree";
  }
  return out;
}

inline Outcome dispatch(const std::string& cmd, const io::Problem& p, const io::Options& o) {
  if (cmd == "kernel-eval") return kernel_eval(p, o);
  if (cmd == "pick-check") return pick_check(p, o);
  if (cmd == "pick-minnorm") return pick_minnorm(p, o);
  if (cmd == "pick-solve") return pick_solve(p, o);
  if (cmd == "algebra-classes") return algebra_classes(p, o);
  if (cmd == "algebra-subspace") return algebra_subspace(p, o);
  if (cmd == "corona-bound") return corona_bound(p, o);
  if (cmd == "corona-check") return corona_check(p, o);
  if (cmd == "corona-solve") return corona_solve(p, o);
  if (cmd == "corona-subalgebra") return corona_subalgebra(p, o);
  if (cmd == "verify-oracles") return verify_oracles(p, o);
  throw InputError("unknown command '" + cmd + "'");
}

inline std::string text_report(const json& result) {
  std::ostringstream os;
  os << "command: " << result["command"].get<std::string>() << "\n";
  os << "status: " << result["status"].get<std::string>() << " (exit " << result["exit_code"].get<int>() << ")\n";
  if (result.contains("banner")) os << result["banner"].get<std::string>() << "\n";
  if (result.contains("error")) os << "error: " << result["error"]["message"].get<std::string>() << "\n";
  if (result.contains("value")) os << "value: " << io::dump(result["value"]);
  if (result.contains("certificates"))
    for (auto it = result["certificates"].begin(); it != result["certificates"].end(); ++it)
      os << it.key() << ": " << io::dump(it.value());
  if (result.contains("realization")) {
    const auto& c = result["realization"]["certificate"];
    os << "realization: gain " << io::format_number(result["realization"]["gain"].get<double>())
       << ", colligation norm " << io::format_number(c["colligation_norm"].get<double>()) << ", max residual "
       << io::format_number(c["max_residual"].get<double>()) << "\n";
  }
  if (result.contains("oracle_reports"))
    for (const auto& r : result["oracle_reports"]) os << "oracle " << r["oracle"].get<std::string>() << ": " << io::dump(r["values"]);
  return os.str();
}

}  // namespace detail

/// Runs one CLI invocation; returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nevanlinna-Pick interpolation and Toeplitz corona solver", kToolName};
  std::string command, path, out_path, format = "text";
  int degree = 10, samples = 20;
  double tol_value = tol::kPsdRelative;
  std::uint64_t seed = 0;
  app.add_option("command", command, "subcommand")->required()->check(CLI::IsMember(commands()));
  app.add_option("problem", path, "problem file (JSON)")->required();
  auto* o_degree = app.add_option("--degree", degree, "truncation degree")->check(CLI::NonNegativeNumber);
  auto* o_tol = app.add_option("--tol", tol_value, "relative PSD tolerance")->check(CLI::PositiveNumber);
  auto* o_seed = app.add_option("--seed", seed, "random seed");
  auto* o_samples = app.add_option("--samples", samples, "oracle sample count")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_path, "result file (default: stdout)");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "machine"}));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  json result;
  result["command"] = command;
  io::Options opts;
  opts.degree = degree;
  opts.tol = tol_value;
  opts.seed = seed;
  opts.samples = samples;
  json input = nullptr;
  try {
    const auto problem = io::load_problem(path);
    input = problem.raw;
    if (!o_degree->count() && problem.has_options_degree) opts.degree = problem.options.degree;
    if (!o_tol->count() && problem.has_options_tol) opts.tol = problem.options.tol;
    if (!o_seed->count() && problem.has_options_seed) opts.seed = problem.options.seed;
    if (!o_samples->count() && problem.has_options_samples) opts.samples = problem.options.samples;
    const auto oc = detail::dispatch(command, problem, opts);
    result["status"] = oc.status;
    result["exit_code"] = oc.exit_code;
    result["value"] = oc.value;
    if (oc.banner) result["banner"] = *oc.banner;
    result["certificates"] = oc.certificates;
    if (oc.realization) result["realization"] = *oc.realization;
    if (oc.oracle_reports) result["oracle_reports"] = *oc.oracle_reports;
  } catch (const InfeasibleError& e) {
    const bool unbounded = dynamic_cast<const UnboundedError*>(&e) != nullptr;
    const bool not_np = dynamic_cast<const NotCompletePickError*>(&e) != nullptr;
    result["status"] = unbounded ? "unbounded" : not_np ? "not_complete_np" : "infeasible";
    result["exit_code"] = 1;
    result["value"] = e.lambda_min();
    result["certificates"] = {{"lambda_min", e.lambda_min()}, {"reason", e.what()}};
  } catch (const Error& e) {
    result["status"] = "error";
    result["exit_code"] = 2;
    json ej = {{"message", e.what()}};
    if (const auto* fe = dynamic_cast<const io::FieldError*>(&e)) ej["path"] = fe->path();
    ej["kind"] = dynamic_cast<const ResourceError*>(&e)    ? "resource"
                 : dynamic_cast<const NumericalError*>(&e) ? "numerical"
                                                           : "input";
    result["error"] = ej;
    err << "error: " << e.what() << "\n";
  }
  result["provenance"] = {{"tool", kToolName},       {"version", kToolVersion}, {"seed", opts.seed},
                          {"degree", opts.degree},   {"tol", opts.tol},         {"samples", opts.samples}};
  result["input"] = input;

  const std::string text = format == "machine" ? io::dump(result) : detail::text_report(result);
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(out_path);
    if (!f) {
      err << "error: cannot write '" << out_path << "'\n";
      return 2;
    }
    f << text;
  }
  return result["exit_code"].get<int>();
}

}  // namespace nevpick::cli

#endif  // NEVPICK_CLI_HPP
