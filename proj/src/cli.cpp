// SPDX-License-Identifier: Apache-2.0
#include "specseq/cli.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "specseq/io.hpp"
#include "specseq/manifold.hpp"
#include "specseq/resolvent.hpp"
#include "specseq/solver.hpp"

namespace specseq {

namespace {

struct Artifact {
  Json json;
  std::string csv;
};

const std::string& input(const ExperimentConfig& c, const std::string& role) {
  const auto it = c.inputs.find(role);
  if (it == c.inputs.end() || it->second.empty()) {
    throw Error(ErrorCode::usage, "missing --" + role + " for " + c.command);
  }
  return it->second;
}

BoundedOperator load_operator(const ExperimentConfig& c) {
  return BoundedOperator(matrix_from_json(load_json_file(input(c, "A"))));
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

Artifact cmd_spectrum(const ExperimentConfig& c) {
  const BoundedOperator a = load_operator(c);
  std::vector<Complex> ev(a.eigenvalues().begin(), a.eigenvalues().end());
  std::stable_sort(ev.begin(), ev.end(), [](Complex x, Complex y) {
    return std::abs(x) != std::abs(y) ? std::abs(x) > std::abs(y) : std::arg(x) < std::arg(y);
  });
  Artifact out;
  out.json = {{"dim", a.dim()}, {"r", spectral_radius(a)}, {"norm", a.norm()}};
  try {
    out.json["hyperbolic"] = is_hyperbolic(a);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::indeterminate) throw;
    out.json["hyperbolic"] = nullptr;
  }
  Json evs = Json::array();
  std::ostringstream csv;
  csv << "index,re,im,modulus\n";
  for (std::size_t i = 0; i < ev.size(); ++i) {
    evs.push_back(complex_json(ev[i]));
    csv << i << ',' << fmt(ev[i].real()) << ',' << fmt(ev[i].imag()) << ',' << fmt(std::abs(ev[i])) << '\n';
  }
  out.json["eigenvalues"] = evs;
  out.csv = csv.str();
  return out;
}

Artifact cmd_riesz(const ExperimentConfig& c) {
  const BoundedOperator a = load_operator(c);
  const SpectralSplit s = riesz_split(a, c.gamma, c.quad_points);
  const Matrix id = Matrix::Identity(a.dim(), a.dim());
  Artifact out;
  out.json = {{"gamma", s.gamma},
              {"P", matrix_to_json(s.proj_stable)},
              {"Q", matrix_to_json(s.proj_unstable)},
              {"rank_stable", s.rank_stable},
              {"r_inside", s.r_inside},
              {"r_outside_inv", s.r_outside_inv},
              {"quad_points", s.quad_points},
              {"idempotence_defect", operator_norm(s.proj_stable * s.proj_stable - s.proj_stable)},
              {"commutation_defect", operator_norm(s.proj_stable * a.matrix() - a.matrix() * s.proj_stable)},
              {"complement_defect", operator_norm(s.proj_stable + s.proj_unstable - id)}};
  std::ostringstream csv;
  csv << "which,row,col,re,im\n";
  for (const auto& [name, m] : {std::pair{"P", &s.proj_stable}, std::pair{"Q", &s.proj_unstable}}) {
    for (Index r = 0; r < m->rows(); ++r) {
      for (Index k = 0; k < m->cols(); ++k) {
        csv << name << ',' << r << ',' << k << ',' << fmt((*m)(r, k).real()) << ',' << fmt((*m)(r, k).imag()) << '\n';
      }
    }
  }
  out.csv = csv.str();
  return out;
}

Artifact cmd_resolve(const ExperimentConfig& c) {
  const BoundedOperator a = load_operator(c);
  const WindowedSequence f = sequence_from_json(load_json_file(input(c, "f")));
  if (!(c.rho > 0.0)) throw Error(ErrorCode::usage, "resolve needs --rho");
  const ResolventMode mode = parse_resolvent_mode(c.mode);
  const ResolventPlan plan = make_resolvent_plan(a, c.rho, mode);
  const WindowedSequence u = mode == ResolventMode::frequency ? apply_resolvent_frequency(plan, f, c.n_samples)
                                                              : apply_resolvent(plan, f);
  Artifact out;
  out.json = {{"mode", to_string(mode)},
              {"rho", c.rho},
              {"tail_cut", plan.tail_cut},
              {"residual", equation_residual(a, u, f, c.rho)},
              {"causal_support", support_subset_geq(u, f.lo() + 1)},
              {"u", sequence_to_json(u)}};
  out.csv = sequence_csv(u);
  return out;
}

Artifact cmd_ztransform(const ExperimentConfig& c) {
  const WindowedSequence u = sequence_from_json(load_json_file(input(c, "u")));
  const double rho = c.rho > 0.0 ? c.rho : 1.0;
  const Index n = c.n_samples > 0 ? c.n_samples : default_sample_count(u.width());
  const CircleFunction f = ztransform(u, rho, n);
  const ParsevalPair pp = parseval_check(u, rho, n);
  const WindowedSequence back = inverse_ztransform(f, u.window());
  Artifact out;
  out.json = {{"rho", rho},
              {"N", n},
              {"parseval", {{"lhs", pp.lhs}, {"rhs", pp.rhs},
                            {"relative_defect", pp.rhs > 0.0 ? std::abs(pp.lhs - pp.rhs) / pp.rhs : std::abs(pp.lhs)}}},
              {"multiplication_defect", multiplication_equiv_check(u, rho, n)},
              {"roundtrip_defect", max_abs_deviation(back, u)}};
  std::ostringstream csv;
  csv << "j,theta,abs\n";
  for (Index j = 0; j < n; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    csv << j << ',' << fmt(theta) << ',' << fmt(f.samples.col(j).norm()) << '\n';
  }
  out.csv = csv.str();
  return out;
}

Artifact cmd_solve_ivp(const ExperimentConfig& c) {
  const BoundedOperator a = load_operator(c);
  const StencilMap f = stencil_from_json(load_json_file(input(c, "F")), a.dim());
  const Vector x = vector_from_json(load_json_file(input(c, "x")));
  const Index horizon = c.horizon > 0 ? c.horizon : 64;
  IvpOptions opts;
  opts.rho = c.rho;
  if (c.fp_tol > 0.0) opts.fp_tol = c.fp_tol;
  opts.max_iter = c.max_iter;

  std::vector<IvpMethod> methods;
  if (c.method == "all") {
    methods = {IvpMethod::recursion, IvpMethod::variation_of_constants, IvpMethod::impulse};
  } else {
    methods = {parse_ivp_method(c.method)};
  }

  Artifact out;
  out.json = {{"horizon", horizon}, {"methods", Json::object()}};
  std::vector<std::pair<std::string, WindowedSequence>> sols;
  std::ostringstream csv;
  csv << "method,n,component,re,im\n";
  for (IvpMethod m : methods) {
    WindowedSequence u;
    if (m == IvpMethod::impulse) {
      const SolveReport rep = solve_ivp_impulse(a, f, x, horizon, opts);
      u = rep.solution;
      out.json["rho"] = opts.rho > 0.0 ? opts.rho : default_ivp_rho(a);
      out.json["impulse_iterations"] = rep.iterations;
      out.json["impulse_support_nonnegative"] = support_subset_geq(u, 0);
    } else {
      u = solve_ivp(a, f, x, horizon, m, opts);
    }
    const std::string name(to_string(m));
    out.json["methods"][name] = sequence_to_json(u);
    for (Index n = u.lo(); n <= u.hi(); ++n) {
      for (Index i = 0; i < u.dim(); ++i) {
        csv << name << ',' << n << ',' << i << ',' << fmt(u.col(n)(i).real()) << ',' << fmt(u.col(n)(i).imag()) << '\n';
      }
    }
    sols.emplace_back(name, std::move(u));
  }
  Json dev = Json::object();
  for (std::size_t i = 0; i < sols.size(); ++i) {
    for (std::size_t k = i + 1; k < sols.size(); ++k) {
      dev[sols[i].first + "|" + sols[k].first] = max_relative_deviation(sols[i].second, sols[k].second);
    }
  }
  out.json["deviations"] = dev;
  out.csv = csv.str();
  return out;
}

Json report_json(const SolveReport& r) {
  return {{"iterations", r.iterations},
          {"final_residual", r.final_residual},
          {"contraction_estimate", r.contraction_estimate},
          {"theoretical_factor", r.theoretical_factor},
          {"converged", r.converged},
          {"solution", sequence_to_json(r.solution)}};
}

Artifact cmd_solve_contraction(const ExperimentConfig& c) {
  const StencilMap f = stencil_from_json(load_json_file(input(c, "F")));
  const double rho = c.rho > 0.0 ? c.rho : 1.0;
  SolveOptions opts;
  if (c.fp_tol > 0.0) opts.fp_tol = c.fp_tol;
  opts.max_iter = c.max_iter;
  const SolveReport r = solve_contraction(f, {rho, Exponent::two}, {c.lo, c.hi}, opts);
  Artifact out;
  out.json = report_json(r);
  out.json["rho"] = rho;
  out.csv = sequence_csv(r.solution);
  return out;
}

Artifact cmd_stability(const ExperimentConfig& c) {
  const BoundedOperator a = load_operator(c);
  StabilityOptions opts;
  if (c.horizon > 0) opts.horizon = c.horizon;
  opts.probes = c.probes;
  opts.seed = c.seed;
  const StabilityReport r = stability_classify(a, opts);
  Artifact out;
  Json probes = Json::array();
  std::ostringstream csv;
  csv << "probe,decays,bounded,tail_fraction\n";
  for (std::size_t i = 0; i < r.probes.size(); ++i) {
    const auto& p = r.probes[i];
    probes.push_back({{"decays", p.decays}, {"bounded", p.bounded}, {"tail_fraction", p.tail_fraction}});
    csv << i << ',' << p.decays << ',' << p.bounded << ',' << fmt(p.tail_fraction) << '\n';
  }
  out.json = {{"verdict", to_string(r.verdict)}, {"r", r.r},          {"rho_star", r.rho_star},
              {"probe_rho", r.probe_rho},        {"horizon", r.horizon}, {"consistent", r.consistent},
              {"probes", probes}};
  out.csv = csv.str();
  return out;
}

Artifact cmd_stable_manifold(const ExperimentConfig& c) {
  const Json prob_json = load_json_file(input(c, "problem"));
  if (!prob_json.contains("A") || !prob_json.contains("F")) {
    throw Error(ErrorCode::parse_error, "problem needs \"A\" and \"F\"");
  }
  const BoundedOperator a(matrix_from_json(prob_json.at("A")));
  const StencilMap f = stencil_from_json(prob_json.at("F"), a.dim());
  ManifoldOptions opts;
  opts.rho = c.rho > 0.0 ? c.rho : prob_json.value("rho", 0.0);
  opts.fp_tol = c.fp_tol > 0.0 ? c.fp_tol : prob_json.value("fp_tol", opts.fp_tol);
  opts.max_iter = c.max_iter;
  opts.window = prob_json.value("window", Index{0});
  const ManifoldProblem prob = make_manifold_problem(a, f, opts);

  const auto grid_it = c.inputs.find("grid");
  const std::vector<Vector> grid = grid_it != c.inputs.end() && !grid_it->second.empty()
                                       ? grid_from_json(load_json_file(grid_it->second))
                                       : grid_from_json(prob_json.at("grid"));
  const std::vector<SweepRow> rows = manifold_sweep(prob, grid, c.threads);

  Artifact out;
  Json jrows = Json::array();
  std::ostringstream csv;
  const Index d = a.dim();
  for (Index i = 0; i < d; ++i) csv << "xi" << i << "_re,xi" << i << "_im,";
  for (Index i = 0; i < d; ++i) csv << "eta" << i << "_re,eta" << i << "_im,";
  csv << "decay_rate,iterations,residual,error\n";
  for (const SweepRow& row : rows) {
    Json jr = {{"xi", vector_to_json(row.xi)}};
    for (Index i = 0; i < d; ++i) csv << fmt(row.xi(i).real()) << ',' << fmt(row.xi(i).imag()) << ',';
    if (row.result) {
      const auto& res = *row.result;
      jr["eta"] = vector_to_json(res.eta);
      jr["decay_rate"] = res.point.decay_rate_estimate;
      jr["iterations"] = res.point.iterations;
      jr["residual"] = res.point.residual;
      jr["contraction_estimate"] = res.point.contraction_estimate;
      jr["stable_identity_defect"] = res.point.defects.stable;
      jr["unstable_identity_defect"] = res.point.defects.unstable;
      jr["orbit_agreement"] = res.orbit_agreement;
      for (Index i = 0; i < d; ++i) csv << fmt(res.eta(i).real()) << ',' << fmt(res.eta(i).imag()) << ',';
      csv << fmt(res.point.decay_rate_estimate) << ',' << res.point.iterations << ',' << fmt(res.point.residual)
          << ",\n";
    } else {
      jr["error"] = {{"error", to_string(*row.error_code)},
                     {"code", static_cast<int>(*row.error_code)},
                     {"message", row.error_message}};
      for (Index i = 0; i < d; ++i) csv << ",,";
      csv << ",,," << to_string(*row.error_code) << '\n';
    }
    jrows.push_back(jr);
  }
  out.json = {{"rho", prob.rho},
              {"window", prob.window},
              {"m_one", prob.m_one},
              {"m_rho", prob.m_rho},
              {"lip_one", prob.lip_one},
              {"lip_rho", prob.lip_rho},
              {"rows", jrows}};
  out.csv = csv.str();
  return out;
}

Artifact dispatch(const ExperimentConfig& c) {
  if (c.command == "spectrum") return cmd_spectrum(c);
  if (c.command == "riesz") return cmd_riesz(c);
  if (c.command == "resolve") return cmd_resolve(c);
  if (c.command == "ztransform-check") return cmd_ztransform(c);
  if (c.command == "solve-ivp") return cmd_solve_ivp(c);
  if (c.command == "solve-contraction") return cmd_solve_contraction(c);
  if (c.command == "stability") return cmd_stability(c);
  if (c.command == "stable-manifold") return cmd_stable_manifold(c);
  throw Error(ErrorCode::usage, "unknown command '" + c.command + "'");
}

void emit_error(std::ostream& err, ErrorCode code, const std::string& message) {
  err << Json{{"error", to_string(code)}, {"code", static_cast<int>(code)}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.format != "json" && config.format != "csv") {
      throw Error(ErrorCode::usage, "--format must be json or csv");
    }
    const Artifact a = dispatch(config);
    const std::string body = config.format == "csv" ? a.csv : a.json.dump(2) + "\n";
    if (config.out.empty()) {
      out << body;
    } else {
      write_text_file(config.out, body);
    }
    return 0;
  } catch (const Error& e) {
    emit_error(err, e.code(), e.what());
    return static_cast<int>(e.code());
  } catch (const Json::exception& e) {
    emit_error(err, ErrorCode::parse_error, e.what());
    return static_cast<int>(ErrorCode::parse_error);
  }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  CLI::App app{"Weighted sequence spaces, resolvents and stable manifolds of difference equations", "specseq"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--out", cfg.out, "output file (default: standard output)");
  app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto path = [&](CLI::App* sub, const std::string& role, const std::string& help) {
    sub->add_option("--" + role, cfg.inputs[role], help)->required();
  };

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues, spectral radius, hyperbolicity");
  path(spectrum, "A", "operator matrix JSON");

  auto* riesz = app.add_subcommand("riesz", "Riesz projections at radius gamma");
  path(riesz, "A", "operator matrix JSON");
  riesz->add_option("--gamma", cfg.gamma, "circle radius");
  riesz->add_option("--quad", cfg.quad_points, "initial trapezoid nodes");

  auto* resolve = app.add_subcommand("resolve", "apply (tau - A)^{-1} on l_{2,rho}");
  path(resolve, "A", "operator matrix JSON");
  path(resolve, "f", "forcing sequence JSON");
  resolve->add_option("--rho", cfg.rho, "weight")->required();
  resolve->add_option("--mode", cfg.mode, "causal, split or frequency")
      ->check(CLI::IsMember({"causal", "split", "frequency"}));
  resolve->add_option("--N", cfg.n_samples, "circle samples for frequency mode (0: auto)");

  auto* zt = app.add_subcommand("ztransform-check", "Parseval, intertwining and round-trip checks");
  path(zt, "u", "sequence JSON");
  zt->add_option("--rho", cfg.rho, "circle radius (default 1)");
  zt->add_option("--N", cfg.n_samples, "samples, a power of two (0: auto)");

  auto* ivp = app.add_subcommand("solve-ivp", "initial value problem by recursion, voc and impulse");
  path(ivp, "A", "operator matrix JSON");
  path(ivp, "F", "causal stencil JSON");
  path(ivp, "x", "initial value JSON");
  ivp->add_option("--method", cfg.method, "all, recursion, voc or impulse")
      ->check(CLI::IsMember({"all", "recursion", "voc", "impulse"}));
  ivp->add_option("--horizon", cfg.horizon, "last index (default 64)");
  ivp->add_option("--rho", cfg.rho, "impulse weight (0: 1.5 r(A) + 0.5)");
  ivp->add_option("--fp-tol", cfg.fp_tol, "impulse fixed-point tolerance");
  ivp->add_option("--max-iter", cfg.max_iter, "iteration cap");

  auto* contr = app.add_subcommand("solve-contraction", "fixed point of tau u = F(u) on a window");
  path(contr, "F", "stencil JSON (with dim)");
  contr->add_option("--rho", cfg.rho, "weight (default 1)");
  contr->add_option("--lo", cfg.lo, "window start");
  contr->add_option("--hi", cfg.hi, "window end");
  contr->add_option("--fp-tol", cfg.fp_tol, "stopping tolerance");
  contr->add_option("--max-iter", cfg.max_iter, "iteration cap");

  auto* stab = app.add_subcommand("stability", "exponential stability verdict with probes");
  path(stab, "A", "operator matrix JSON");
  stab->add_option("--horizon", cfg.horizon, "probe horizon (default 400)");
  stab->add_option("--probes", cfg.probes, "number of random probes");

  auto* man = app.add_subcommand("stable-manifold", "sweep w^s over a grid of stable coordinates");
  path(man, "problem", "problem JSON with A, F and optional rho, fp_tol, window, grid");
  man->add_option("--grid", cfg.inputs["grid"], "grid JSON (list of vectors)");
  man->add_option("--rho", cfg.rho, "outer weight (0: r(A) + 0.5)");
  man->add_option("--fp-tol", cfg.fp_tol, "fixed-point tolerance");
  man->add_option("--max-iter", cfg.max_iter, "iteration cap");
  man->add_option("--threads", cfg.threads, "worker threads (0: hardware, capped by SPECSEQ_THREADS)");

  cfg.horizon = 0;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    emit_error(err, ErrorCode::usage, e.what());
    return static_cast<int>(ErrorCode::usage);
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return run(cfg, out, err);
}

}  // namespace specseq
