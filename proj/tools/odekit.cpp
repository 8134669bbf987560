#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "odekit/odekit.hpp"

using namespace odekit;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct Common {
  std::string out;
  std::string format;
  std::uint64_t seed = PolyRootOptions{}.seed;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  return parts;
}

Vector parse_list(const std::string& s, const char* what) {
  Vector v;
  for (const auto& p : split(s, ',')) {
    try {
      v.push_back(parse_double(p));
    } catch (const Error&) {
      throw InvalidArgumentError(std::string("bad value in ") + what + ": '" + p + "'");
    }
  }
  if (v.empty()) throw InvalidArgumentError(std::string(what) + " is empty");
  return v;
}

ProblemParams parse_params(const std::vector<std::string>& kv, const std::string& t_end) {
  ProblemParams out;
  for (const auto& item : kv) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw BadParamError("parameter '" + item + "' is not key=value");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  if (!t_end.empty()) out["t_end"] = t_end;
  return out;
}

// Writes to --out when given, otherwise stdout.
void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw InvalidArgumentError("cannot open '" + c.out + "' for writing");
  f << text;
}

std::string csv_text(const CsvTable& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

std::string fmt(double v, int prec = 3) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(prec) << v;
  return os.str();
}

std::string format_or(const Common& c, const std::string& fallback) { return c.format.empty() ? fallback : c.format; }

void require_format(const std::string& f, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (f == a) return;
  throw InvalidArgumentError("format '" + f + "' is not available for this command");
}

// ---------------------------------------------------------------------------

struct SolveArgs {
  std::string problem, method, t_end, implicit = "auto";
  std::vector<std::string> params;
  double h = 0.0, tol = 0.0;
  bool halt = false;
  std::string log;
};

ImplicitSolveConfig implicit_from(const std::string& s) {
  ImplicitSolveConfig cfg;
  if (s == "auto") cfg.strategy = ImplicitSolveConfig::Strategy::automatic;
  else if (s == "newton") cfg.strategy = ImplicitSolveConfig::Strategy::newton;
  else if (s == "fixed") cfg.strategy = ImplicitSolveConfig::Strategy::fixed_point;
  else if (s == "two-point") cfg = ImplicitSolveConfig::two_point();
  else throw InvalidArgumentError("unknown implicit strategy '" + s + "'");
  return cfg;
}

int cmd_solve(const Common& c, const SolveArgs& a) {
  require_format(format_or(c, "csv"), {"csv"});
  const IvpProblem p = get_problem(a.problem, parse_params(a.params, a.t_end));
  Trajectory traj;
  if (a.method == "ode12") {
    AdaptiveConfig cfg;
    if (a.tol > 0.0) cfg.tol = a.tol;
    else if (a.h != 0.0) throw InvalidArgumentError("ode12 takes --tol, not --h");
    AdaptiveResult r = ode12_solve(p, cfg);
    if (!a.log.empty()) {
      CsvTable log{{"t", "h", "e", "accepted"}, {}};
      for (const auto& e : r.log) log.rows.push_back({e.t, e.h, e.e, e.accepted ? 1.0 : 0.0});
      Common lc = c;
      lc.out = a.log;
      emit(lc, csv_text(log));
    }
    traj = std::move(r.traj);
  } else {
    if (!(a.h > 0.0)) throw InvalidArgumentError("--h must be positive");
    SolveOptions opt;
    opt.implicit = implicit_from(a.implicit);
    opt.march.halt_on_divergence = a.halt;
    traj = run_fixed(p, a.method, a.h, opt);
  }
  emit(c, csv_text(trajectory_table(traj)));
  if (traj.stats.diverged) {
    std::cerr << "diverged at t=" << format_double(traj.stats.divergence_time) << "\n";
    return kExitNumerical;
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct StudyArgs {
  std::string problem, method, hs, t_end, implicit = "auto";
  std::vector<std::string> params;
  double h0 = 0.0;
  int count = 6;
};

std::string study_ascii(const StudyReport& rep) {
  const bool bexp = !rep.rows.empty() && rep.rows.front().bound_exp.has_value();
  const bool blin = !rep.rows.empty() && rep.rows.front().bound_lin.has_value();
  std::ostringstream os;
  os << rep.method << " on " << rep.problem << "\n";
  os << std::left << std::setw(12) << "h";
  const std::size_t dim = rep.rows.empty() ? 0 : rep.rows.front().y_final.size();
  for (std::size_t i = 0; i < dim; ++i) os << std::setw(14) << ("y" + std::to_string(i + 1) + "_N");
  os << std::setw(12) << "|e_N|" << std::setw(12) << "rel" << std::setw(8) << "order";
  if (bexp) os << std::setw(14) << "h(e^b-1)/2";
  if (blin) os << std::setw(10) << "bh/2";
  os << "\n";
  for (const auto& r : rep.rows) {
    os << std::setw(12) << format_double(r.h);
    for (double v : r.y_final) os << std::setw(14) << fmt(v);
    os << std::setw(12) << fmt(r.abs_err) << std::setw(12) << fmt(r.rel_err);
    std::ostringstream ord;
    if (r.order) ord << std::fixed << std::setprecision(2) << *r.order;
    else ord << "-";
    os << std::setw(8) << ord.str();
    if (bexp) os << std::setw(14) << fmt(*r.bound_exp, 2);
    if (blin) os << std::setw(10) << fmt(*r.bound_lin, 2);
    os << "\n";
  }
  return os.str();
}

int cmd_study(const Common& c, const StudyArgs& a) {
  const std::string f = format_or(c, "ascii");
  require_format(f, {"csv", "ascii"});
  std::vector<double> hs;
  if (!a.hs.empty()) hs = parse_list(a.hs, "--h");
  else if (a.h0 > 0.0) hs = halving_grid(a.h0, a.count);
  else throw InvalidArgumentError("study needs --h or --h0");
  for (std::size_t i = 1; i < hs.size(); ++i)
    if (std::abs(hs[i - 1] / hs[i] - 2.0) > 1e-9) throw InvalidArgumentError("study step sizes must halve");
  const IvpProblem p = get_problem(a.problem, parse_params(a.params, a.t_end));
  SolveOptions opt;
  opt.implicit = implicit_from(a.implicit);
  const StudyReport rep = run_study(p, a.method, hs, opt);
  if (f == "csv") {
    CsvTable t{{"h", "abs_err", "rel_err", "order"}, {}};
    for (const auto& r : rep.rows)
      t.rows.push_back({r.h, r.abs_err, r.rel_err, r.order.value_or(std::numeric_limits<double>::quiet_NaN())});
    emit(c, csv_text(t));
  } else {
    emit(c, study_ascii(rep));
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct RegionArgs {
  std::string method, bounds = "-3,1,-2,2";
  std::size_t nx = 200, ny = 200;
  int samples = 720;
};

Bounds bounds_from(const std::string& s) {
  const Vector v = parse_list(s, "--bounds");
  if (v.size() != 4) throw InvalidArgumentError("--bounds needs re_min,re_max,im_min,im_max");
  return {v[0], v[1], v[2], v[3]};
}

int cmd_stability(const Common& c, const RegionArgs& a) {
  const std::string f = format_or(c, "csv");
  require_format(f, {"csv", "svg", "ascii"});
  const Bounds b = bounds_from(a.bounds);
  PolyRootOptions ropt;
  ropt.seed = c.seed;
  ProbeOptions popt;
  popt.seed = c.seed;
  StabilityRegionRaster raster;
  std::vector<LocusPoint> locus;
  StabilityClassification cls;
  const bool multistep = is_multistep_name(a.method);
  if (multistep) {
    const MultistepMethod m = make_multistep(a.method);
    raster = raster_multistep(m, b, a.nx, a.ny, ropt);
    locus = boundary_locus(m, a.samples);
    if (f == "ascii") cls = classify_stability(m, popt);
  } else {
    const auto R = stability_function(a.method);
    raster = raster_one_step(R, b, a.nx, a.ny);
    if (f == "ascii") cls = classify_stability(R, popt);
  }
  if (f == "csv") {
    emit(c, csv_text(raster_table(raster)));
  } else if (f == "svg") {
    emit(c, render_svg(raster, multistep ? &locus : nullptr));
  } else {
    std::ostringstream os;
    const double deg = 180.0 / std::acos(-1.0);
    os << a.method << "\n";
    os << "member fraction  " << std::fixed << std::setprecision(4) << raster.member_fraction() << "\n";
    os << "A-stable         " << (cls.a_stable ? "yes" : "no") << " (sampled)\n";
    os << "alpha            " << std::setprecision(1) << cls.alpha_estimate * deg << " deg\n";
    if (cls.l_stable) os << "L-stable         " << (*cls.l_stable ? "yes" : "no") << "\n";
    emit(c, os.str());
  }
  return 0;
}

int cmd_locus(const Common& c, const RegionArgs& a) {
  require_format(format_or(c, "csv"), {"csv"});
  emit(c, csv_text(locus_table(boundary_locus(make_multistep(a.method), a.samples))));
  return 0;
}

// ---------------------------------------------------------------------------

struct StiffnessArgs {
  std::string problem, t_end, y;
  std::vector<std::string> params;
  double t = 0.0;
};

int cmd_stiffness(const Common& c, const StiffnessArgs& a) {
  require_format(format_or(c, "ascii"), {"ascii"});
  const IvpProblem p = get_problem(a.problem, parse_params(a.params, a.t_end));
  if (!p.jacobian) throw UnsupportedSpectrumError(p.name + " has no Jacobian");
  Vector y;
  if (!a.y.empty()) y = parse_list(a.y, "--y");
  else if (p.has_exact()) y = p.exact(a.t);
  else y = p.y0;
  if (y.size() != p.dim) throw InvalidArgumentError("--y has the wrong dimension");
  const EigenDecomposition eig = eigen_decompose(p.jacobian(a.t, y));
  const StiffnessRatio sr = stiffness_ratio(eig.values);

  std::ostringstream os;
  os << p.name << " at t=" << format_double(a.t) << "\n";
  os << "eigenvalues";
  for (const auto& l : eig.values) {
    os << "  " << format_double(l.real());
    if (l.imag() != 0.0) os << (l.imag() > 0 ? "+" : "-") << format_double(std::abs(l.imag())) << "i";
  }
  os << "\n";
  os << "stiffness ratio  " << (sr.infinite ? std::string("inf") : format_double(sr.ratio)) << "\n";
  double most_negative = 0.0;
  bool all_negative = true;
  for (const auto& l : eig.values) {
    all_negative = all_negative && l.real() < 0.0;
    most_negative = std::min(most_negative, l.real());
  }
  if (all_negative) os << "euler h bound    " << format_double(2.0 / std::abs(most_negative)) << "\n";
  if (p.name == "mol_diffusion") {
    const double dx = 1.0 / static_cast<double>(p.dim + 1);
    os << "dx^2/2           " << format_double(0.5 * dx * dx) << "\n";
  }
  emit(c, os.str());
  return 0;
}

// ---------------------------------------------------------------------------

struct DiffeqArgs {
  std::string coeffs, initial;
  std::size_t kmax = 10;
};

int cmd_diffeq(const Common& c, const DiffeqArgs& a) {
  const std::string f = format_or(c, "ascii");
  require_format(f, {"ascii", "csv"});
  const DifferenceEquation eq{parse_list(a.coeffs, "--coeffs"), parse_list(a.initial, "--initial")};
  PolyRootOptions ropt;
  ropt.seed = c.seed;
  const DifferenceSolution sol = solve_difference_equation(eq, ropt);
  const Vector rec = difference_recurrence(eq, a.kmax);
  double worst = 0.0;
  Vector closed;
  for (std::size_t k = 0; k <= a.kmax; ++k) {
    closed.push_back(evaluate_difference_solution(sol, static_cast<long long>(k)));
    worst = std::max(worst, std::abs(closed.back() - rec[k]) / std::max(1.0, std::abs(rec[k])));
  }
  if (f == "csv") {
    CsvTable t{{"k", "closed", "recurrence"}, {}};
    for (std::size_t k = 0; k <= a.kmax; ++k) t.rows.push_back({static_cast<double>(k), closed[k], rec[k]});
    emit(c, csv_text(t));
    return 0;
  }
  auto cplx = [](Complex z) {
    std::string s = format_double(z.real());
    if (std::abs(z.imag()) > 1e-12 * std::max(1.0, std::abs(z.real())))
      s += (z.imag() > 0 ? "+" : "-") + format_double(std::abs(z.imag())) + "i";
    return s;
  };
  std::ostringstream os;
  for (std::size_t j = 0; j < sol.roots.roots.size(); ++j) {
    os << "root " << cplx(sol.roots.roots[j]) << "  multiplicity " << sol.roots.multiplicities[j] << "  beta";
    for (const auto& b : sol.beta[j]) os << " " << cplx(b);
    os << "\n";
  }
  if (sol.ill_conditioned) os << "warning: basis system condition estimate " << fmt(sol.condition_estimate) << "\n";
  os << std::left << std::setw(6) << "k" << std::setw(24) << "closed" << "recurrence\n";
  for (std::size_t k = 0; k <= a.kmax; ++k)
    os << std::setw(6) << k << std::setw(24) << format_double(closed[k]) << format_double(rec[k]) << "\n";
  os << "max relative discrepancy " << fmt(worst) << "\n";
  emit(c, os.str());
  return 0;
}

int cmd_problems(const Common& c) {
  std::ostringstream os;
  for (const auto& e : catalog()) {
    os << e.key << "  [";
    for (std::size_t i = 0; i < e.tags.size(); ++i) os << (i ? "," : "") << e.tags[i];
    os << "]  " << e.notes << "\n";
    for (const auto& p : e.params) os << "    " << p.name << "=" << p.default_value << "  " << p.doc << "\n";
  }
  emit(c, os.str());
  return 0;
}

int exit_code_for(const Error& e) {
  if (dynamic_cast<const NonFiniteError*>(&e) || dynamic_cast<const ImplicitSolveError*>(&e) ||
      dynamic_cast<const StepUnderflowError*>(&e) || dynamic_cast<const RejectCapError*>(&e) ||
      dynamic_cast<const NonConvergenceError*>(&e) || dynamic_cast<const SingularMatrixError*>(&e) ||
      dynamic_cast<const DivergenceError*>(&e) || dynamic_cast<const DefectiveMatrixError*>(&e))
    return kExitNumerical;
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"odekit: fixed-step, multistep and adaptive ODE solvers with stability tools"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // --h is the step size, so no short help flag
  app.fallthrough();
  Common common;
  app.add_option("--out", common.out, "write output to this file instead of stdout");
  app.add_option("--format", common.format, "csv | svg | ascii")->check(CLI::IsMember({"csv", "svg", "ascii"}));
  app.add_option("--seed", common.seed, "seed for root finding and probe sets");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "integrate a catalog problem");
  s->add_option("problem", solve.problem)->required();
  s->add_option("method", solve.method)->required();
  s->add_option("--h", solve.h, "step size");
  s->add_option("--tol", solve.tol, "tolerance for ode12");
  s->add_option("--t-end", solve.t_end, "override the final time");
  s->add_option("-p,--param", solve.params, "problem parameter key=value");
  s->add_option("--implicit", solve.implicit, "auto | newton | fixed | two-point");
  s->add_option("--log", solve.log, "ode12 step log CSV");
  s->add_flag("--halt", solve.halt, "stop at the first divergence");

  StudyArgs study;
  auto* st = app.add_subcommand("study", "convergence study over halving step sizes");
  st->add_option("problem", study.problem)->required();
  st->add_option("method", study.method)->required();
  st->add_option("--h", study.hs, "comma-separated step sizes");
  st->add_option("--h0", study.h0, "largest step size");
  st->add_option("--count", study.count, "number of halvings from --h0")->check(CLI::Range(2, 30));
  st->add_option("--t-end", study.t_end, "override the final time");
  st->add_option("-p,--param", study.params, "problem parameter key=value");
  st->add_option("--implicit", study.implicit, "auto | newton | fixed | two-point");

  RegionArgs region;
  auto* sb = app.add_subcommand("stability", "absolute stability region raster");
  sb->add_option("method", region.method)->required();
  sb->add_option("--bounds", region.bounds, "re_min,re_max,im_min,im_max");
  sb->add_option("--nx", region.nx)->check(CLI::Range(2, 4000));
  sb->add_option("--ny", region.ny)->check(CLI::Range(2, 4000));
  sb->add_option("--samples", region.samples, "locus samples for svg output");

  auto* lc = app.add_subcommand("locus", "boundary locus of a multistep method");
  lc->add_option("method", region.method)->required();
  lc->add_option("--samples", region.samples);

  StiffnessArgs stiff;
  auto* sf = app.add_subcommand("stiffness", "Jacobian eigenvalues and stiffness ratio");
  sf->add_option("problem", stiff.problem)->required();
  sf->add_option("--t", stiff.t, "time of evaluation");
  sf->add_option("--y", stiff.y, "state (defaults to the exact solution, else y0)");
  sf->add_option("--t-end", stiff.t_end, "override the final time");
  sf->add_option("-p,--param", stiff.params, "problem parameter key=value");

  DiffeqArgs diff;
  auto* de = app.add_subcommand("diffeq", "solve a linear homogeneous difference equation");
  de->add_option("--coeffs", diff.coeffs, "c_p,...,c_0")->required();
  de->add_option("--initial", diff.initial, "y_0,...,y_{p-1}")->required();
  de->add_option("--kmax", diff.kmax);

  auto* pr = app.add_subcommand("problems", "catalog");
  pr->require_subcommand(1);
  auto* pl = pr->add_subcommand("list", "list catalog problems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (s->parsed()) return cmd_solve(common, solve);
    if (st->parsed()) return cmd_study(common, study);
    if (sb->parsed()) return cmd_stability(common, region);
    if (lc->parsed()) return cmd_locus(common, region);
    if (sf->parsed()) return cmd_stiffness(common, stiff);
    if (de->parsed()) return cmd_diffeq(common, diff);
    if (pl->parsed()) return cmd_problems(common);
  } catch (const Error& e) {
    std::cerr << "odekit: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "odekit: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
