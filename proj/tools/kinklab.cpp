// kinklab command-line driver.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kinklab/acceptance.hpp"
#include "kinklab/errors.hpp"
#include "kinklab/homogeneous.hpp"
#include "kinklab/io.hpp"
#include "kinklab/parallel.hpp"
#include "kinklab/pieces.hpp"
#include "kinklab/profiles.hpp"
#include "kinklab/resolvent.hpp"
#include "kinklab/semigroup.hpp"
#include "kinklab/simulator.hpp"
#include "kinklab/spectrum.hpp"

using namespace kinklab;
using json = nlohmann::json;

namespace {

struct Common {
  std::string out;
  std::optional<double> tol;
  int threads = 0;
};

struct Run {
  json config = json::object();
  std::vector<std::string> outputs;
};

std::string default_out() {
  const char* env = std::getenv("KINKLAB_OUT");
  return env && *env ? env : ".";
}

Grid1D grid_from(double L, int N) {
  if (N < 16) throw GridTooSmall("need at least 16 nodes");
  if (!(L > 0.0)) throw GridTooSmall("half-length must be positive");
  return Grid1D(L, N);
}

EigenOptions eigen_options(double k, double L, int N) {
  EigenOptions o;
  o.L = L > 0.0 ? L : std::max(40.0, 10.0 / std::max(k, 1e-12));
  o.N = N > 0 ? N : static_cast<int>(std::lround(o.L / 0.02));
  return o;
}

// spectrum ---------------------------------------------------------------

struct SpectrumArgs {
  std::vector<double> k{0.05};
  double L = 0.0;
  int N = 0;
  bool eigenfunction = false;
};

void run_spectrum(const SpectrumArgs& a, const Common& c, Run& run) {
  run.config["k"] = a.k;
  run.config["L"] = a.L;
  run.config["N"] = a.N;
  CsvWriter csv(join_path(c.out, "spectrum.csv"),
                {"k", "zeta0", "zeta1", "zeta0_over_k3", "residual"});
  run.outputs.push_back("spectrum.csv");
  for (double k : a.k) {
    if (k < 0.0) throw ValidationError("k must be non-negative");
    EigenOptions o = eigen_options(k, a.L, a.N);
    o.tol = c.tol.value_or(o.tol);
    const SpectralResult s = lowest_eigenpair(k, o);
    const double ratio = k > 0.0 ? s.zeta0 / (k * k * k) : 0.0;
    csv.row({k, s.zeta0, s.zeta1, ratio, s.residual});
    if (a.eigenfunction) {
      const std::string name = "eigenfunction_k" + fmt(k) + ".csv";
      CsvWriter ef(join_path(c.out, name), {"x", "phi"});
      const Grid1D g(o.L, o.N);
      for (int i = 0; i < g.N; ++i) ef.row({g.x(i), s.eigenfunction(i)});
      run.outputs.push_back(name);
    }
  }
}

// homsol / omega / resolvent ----------------------------------------------

struct SpectralArgs {
  double k = 0.1;
  double tau_re = 0.0;
  double tau_im = 0.0;
  double L = 20.0;
  int N = 401;
  double x0 = 25.0;
};

ShootOptions shoot_options(const SpectralArgs& a, const Common& c) {
  ShootOptions o;
  o.x0 = a.x0;
  o.rtol = c.tol.value_or(o.rtol);
  return o;
}

void spectral_config(const SpectralArgs& a, Run& run) {
  run.config["k"] = a.k;
  run.config["tau_re"] = a.tau_re;
  run.config["tau_im"] = a.tau_im;
  run.config["L"] = a.L;
  run.config["N"] = a.N;
  run.config["x0"] = a.x0;
}

void run_homsol(const SpectralArgs& a, const Common& c, Run& run) {
  spectral_config(a, run);
  const SpectralParameters p = spectral_parameters(a.k, cplx(a.tau_re, a.tau_im));
  const SolutionSet s = solve_homogeneous(p, grid_from(a.L, a.N), shoot_options(a, c));
  std::vector<std::string> head{"x"};
  for (const char* f : {"U", "Z"})
    for (int j = 1; j <= 4; ++j)
      for (const char* part : {"re", "im"}) head.push_back(std::string(f) + std::to_string(j) + "_" + part);
  CsvWriter csv(join_path(c.out, "homsol.csv"), head);
  for (int i = 0; i < s.grid.N; ++i) {
    std::vector<double> row{s.grid.x(i)};
    for (int j = 0; j < 4; ++j) row.insert(row.end(), {s.u[j](i, 0).real(), s.u[j](i, 0).imag()});
    for (int j = 0; j < 4; ++j) row.insert(row.end(), {s.Z(j, i).real(), s.Z(j, i).imag()});
    csv.row(row);
  }
  run.outputs.push_back("homsol.csv");

  json j;
  j["zeta"] = {p.zeta.real(), p.zeta.imag()};
  for (int m = 0; m < 4; ++m) j["mu"].push_back({p.mu[m].real(), p.mu[m].imag()});
  write_json_atomic(join_path(c.out, "spectral_parameters.json"), j);
  run.outputs.push_back("spectral_parameters.json");
}

struct OmegaArgs {
  SpectralArgs s;
  bool pole = false;
};

void run_omega(const OmegaArgs& a, const Common& c, Run& run) {
  spectral_config(a.s, run);
  run.config["pole"] = a.pole;
  const SpectralParameters p = spectral_parameters(a.s.k, cplx(a.s.tau_re, a.s.tau_im));
  const ResolventAssembly ra = omega(solve_homogeneous(p, grid_from(a.s.L, a.s.N), shoot_options(a.s, c)));
  json j;
  j["k"] = a.s.k;
  j["tau"] = {a.s.tau_re, a.s.tau_im};
  j["zeta"] = {p.zeta.real(), p.zeta.imag()};
  for (int r = 0; r < 2; ++r)
    for (int col = 0; col < 2; ++col) {
      const std::string key = "omega" + std::to_string(r + 1) + std::to_string(col + 1);
      j[key] = {ra.omega(r, col).real(), ra.omega(r, col).imag()};
    }
  j["det"] = {ra.det.real(), ra.det.imag()};
  j["spread"] = ra.spread;
  if (a.pole) {
    const PoleReport pr = locate_pole(a.s.k);
    j["pole"] = {{"tau", {pr.tau.real(), pr.tau.imag()}},
                 {"zeta", {pr.zeta.real(), pr.zeta.imag()}},
                 {"iterations", pr.iterations}};
  }
  write_json_atomic(join_path(c.out, "omega.json"), j);
  run.outputs.push_back("omega.json");
}

struct ResolventArgs {
  SpectralArgs s;
  int stride = 4;
};

void run_resolvent(const ResolventArgs& a, const Common& c, Run& run) {
  spectral_config(a.s, run);
  run.config["stride"] = a.stride;
  if (a.stride < 1) throw ValidationError("stride must be positive");
  const SpectralParameters p = spectral_parameters(a.s.k, cplx(a.s.tau_re, a.s.tau_im));
  const ResolventAssembly ra = omega(solve_homogeneous(p, grid_from(a.s.L, a.s.N), shoot_options(a.s, c)));
  const Grid1D& g = ra.sols.grid;
  std::vector<int> idx;
  for (int i = 0; i < g.N; i += a.stride) idx.push_back(i);
  std::vector<cplx> vals(idx.size() * idx.size());
  parallel_for(idx.size(), c.threads, [&](std::size_t a_i) {
    for (std::size_t b = 0; b < idx.size(); ++b) vals[a_i * idx.size() + b] = resolvent_kernel(ra, idx[a_i], idx[b]);
  });
  CsvWriter csv(join_path(c.out, "resolvent.csv"), {"x", "y", "R_re", "R_im"});
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t b = 0; b < idx.size(); ++b) {
      const cplx v = vals[i * idx.size() + b];
      csv.row({g.x(idx[i]), g.x(idx[b]), v.real(), v.imag()});
    }
  run.outputs.push_back("resolvent.csv");
}

// semigroup --------------------------------------------------------------

struct SemigroupArgs {
  double k = 0.1;
  double t = 10.0;
  double L = 20.0;
  int N = 801;
  std::string regime;
};

std::optional<Regime> parse_regime(const std::string& s) {
  if (s.empty()) return std::nullopt;
  for (Regime r : {Regime::SmallK, Regime::MediumK, Regime::LargeK, Regime::ShortTime})
    if (regime_name(r) == s) return r;
  throw ValidationError("unknown regime '" + s + "'");
}

void run_semigroup(const SemigroupArgs& a, const Common& c, Run& run) {
  run.config["k"] = a.k;
  run.config["t"] = a.t;
  run.config["L"] = a.L;
  run.config["N"] = a.N;
  run.config["regime"] = a.regime;
  if (!(a.t > 0.0)) throw ValidationError("t must be positive");
  if (a.k < 0.0) throw ValidationError("k must be non-negative");
  KernelOptions o;
  o.grid = grid_from(a.L, a.N);
  o.tol = c.tol.value_or(o.tol);
  o.threads = c.threads;
  o.regime = parse_regime(a.regime);
  const SemigroupKernel kern = kernel(a.k, a.t, o);
  const Eigen::MatrixXd K1 = kern.K1();
  CsvWriter csv(join_path(c.out, "semigroup.csv"), {"x", "y", "K", "K0", "K1", "S"});
  const Grid1D& g = kern.grid();
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.N; ++j) csv.row({g.x(i), g.x(j), kern.K()(i, j), kern.K0()(i, j), K1(i, j), kern.S()(i, j)});
  run.outputs.push_back("semigroup.csv");
  json j;
  j["regime"] = regime_name(kern.regime());
  j["nodes"] = kern.nodes();
  write_json_atomic(join_path(c.out, "semigroup.json"), j);
  run.outputs.push_back("semigroup.json");
}

// simulate ---------------------------------------------------------------

void run_simulate(const std::string& config_path, bool out_given, const Common& c, Run& run) {
  SimulationConfig cfg = load_config(config_path);
  if (out_given || cfg.out_dir == ".") cfg.out_dir = c.out;
  cfg.threads = c.threads;
  validate(cfg);
  ensure_dir(cfg.out_dir);
  run.config = {{"L", cfg.grid.L}, {"N", cfg.grid.N}, {"Lperp", cfg.Lperp}, {"M", cfg.M},
                {"dt", cfg.dt},    {"T", cfg.T},      {"delta", cfg.delta}, {"r", cfg.r},
                {"shape", cfg.shape}, {"out_dir", cfg.out_dir}};
  const MeasureResult m = run_and_measure(cfg, true);
  json j;
  j["A_exact"] = m.A_exact;
  j["A_quad"] = m.A_quad;
  j["amp_slope"] = m.amp_slope;
  j["width_slope"] = m.width_slope;
  j["window"] = {cfg.window_lo, cfg.window_hi};
  j["collapse_mismatch"] = m.collapse_mismatch;
  j["mass_drift"] = m.mass_drift;
  j["max_v"] = m.max_v;
  write_json_atomic(join_path(cfg.out_dir, "summary.json"), j);
  run.outputs = m.files;
  run.outputs.push_back("summary.json");
}

// asymptotics ------------------------------------------------------------

struct AsymptoticsArgs {
  double A = 0.1047197551196598;
  double t = 100.0;
  double rmax = 20.0;
  int points = 201;
};

void run_asymptotics(const AsymptoticsArgs& a, const Common& c, Run& run) {
  run.config["A"] = a.A;
  run.config["t"] = a.t;
  run.config["rmax"] = a.rmax;
  run.config["points"] = a.points;
  if (!(a.t > 0.0)) throw ValidationError("t must be positive");
  if (a.points < 2) throw ValidationError("points must be at least 2");
  const AsymptoticAnsatz ans{a.A, 3};
  CsvWriter prof(join_path(c.out, "asymptotics.csv"), {"rhat", "xi", "phi_star", "phi", "center_amp"});
  const double s = std::cbrt(a.t);
  for (int i = 0; i < a.points; ++i) {
    const double rh = a.rmax * i / (a.points - 1);
    const double phi = phi_scaled(rh, a.t, 2);
    prof.row({rh, rh / s, phi_star(rh / s, 2), phi, 0.5 * a.A * 0.5 * phi});
  }
  run.outputs.push_back("asymptotics.csv");

  CsvWriter st(join_path(c.out, "asymptotic_state.csv"), {"x", "rhat", "u"});
  for (int i = 0; i <= 80; ++i)
    for (int jr = 0; jr < a.points; jr += std::max(1, a.points / 40)) {
      const double x = -10.0 + 0.25 * i;
      const double rh = a.rmax * jr / (a.points - 1);
      st.row({x, rh, asymptotic_state(x, rh, a.t, ans)});
    }
  run.outputs.push_back("asymptotic_state.csv");

  json j;
  j["center_amp"] = 0.25 * a.A * phi_scaled(0.0, a.t, 2);
  j["half_width"] = phi_star_half_width(2) * s;
  j["amp_exponent"] = -2.0 / 3.0;
  j["width_exponent"] = 1.0 / 3.0;
  write_json_atomic(join_path(c.out, "asymptotics.json"), j);
  run.outputs.push_back("asymptotics.json");
}

// verify-all -------------------------------------------------------------

bool run_verify(bool quick, const std::vector<int>& only, const Common& c, Run& run) {
  run.config["quick"] = quick;
  run.config["only"] = only;
  AcceptanceOptions o;
  o.quick = quick;
  o.out_dir = join_path(c.out, "acceptance");
  o.threads = c.threads;
  o.only = only;
  o.on_result = [](const CriterionResult& r) {
    std::cout << format_result(r) << std::endl;
  };
  const std::vector<CriterionResult> res = run_acceptance(o);
  json j = json::array();
  for (const auto& r : res)
    j.push_back({{"id", r.id},
                 {"name", r.name},
                 {"pass", r.pass},
                 {"known_deviation", r.known_deviation},
                 {"detail", r.detail},
                 {"seconds", r.seconds}});
  write_json_atomic(join_path(c.out, "acceptance.json"), j);
  run.outputs.push_back("acceptance.json");
  return acceptance_ok(res);
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out, "output directory (default $KINKLAB_OUT or .)");
  sub->add_option("--tol", c.tol, "numerical tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--threads", c.threads, "worker threads (0: hardware)")->check(CLI::NonNegativeNumber);
}

void add_spectral(CLI::App* sub, SpectralArgs& s) {
  sub->add_option("--k", s.k, "transverse wavenumber");
  sub->add_option("--tau-re", s.tau_re, "Re tau");
  sub->add_option("--tau-im", s.tau_im, "Im tau");
  sub->add_option("--L", s.L, "grid half-length");
  sub->add_option("--N", s.N, "grid nodes");
  sub->add_option("--x0", s.x0, "shooting start");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kinklab: transverse stability of the Cahn-Hilliard kink"};
  app.set_version_flag("--version", std::string(KINKLAB_VERSION));
  app.require_subcommand(1);

  Common common;

  SpectrumArgs spec;
  auto* s_spec = app.add_subcommand("spectrum", "lowest eigenvalues of D_k H_k");
  s_spec->add_option("--k", spec.k, "wavenumbers")->expected(1, -1);
  s_spec->add_option("--L", spec.L, "grid half-length (default max(40, 10/k))");
  s_spec->add_option("--N", spec.N, "grid nodes (default L/0.02)");
  s_spec->add_flag("--eigenfunction", spec.eigenfunction, "also write the eigenfunction");

  SpectralArgs hom;
  auto* s_hom = app.add_subcommand("homsol", "decaying homogeneous solutions");
  add_spectral(s_hom, hom);

  OmegaArgs om;
  auto* s_om = app.add_subcommand("omega", "pairing matrix Omega and its determinant");
  add_spectral(s_om, om.s);
  s_om->add_flag("--pole", om.pole, "also locate the pole near tau = ik");

  ResolventArgs res;
  auto* s_res = app.add_subcommand("resolvent", "resolvent kernel on the grid");
  add_spectral(s_res, res.s);
  s_res->add_option("--stride", res.stride, "node stride of the output table");

  SemigroupArgs sg;
  auto* s_sg = app.add_subcommand("semigroup", "kernel of exp(-t D_k H_k)");
  s_sg->add_option("--k", sg.k, "transverse wavenumber");
  s_sg->add_option("--t", sg.t, "time");
  s_sg->add_option("--L", sg.L, "kernel grid half-length");
  s_sg->add_option("--N", sg.N, "kernel grid nodes");
  s_sg->add_option("--regime", sg.regime, "force small_k | medium_k | large_k | short_time");

  std::string config_path;
  auto* s_sim = app.add_subcommand("simulate", "three-dimensional Cahn-Hilliard run");
  s_sim->add_option("--config", config_path, "key=value config file")->required();

  AsymptoticsArgs asy;
  auto* s_asy = app.add_subcommand("asymptotics", "self-similar profile and leading state");
  s_asy->add_option("--A", asy.A, "integral of the initial perturbation");
  s_asy->add_option("--t", asy.t, "time");
  s_asy->add_option("--rmax", asy.rmax, "largest transverse radius");
  s_asy->add_option("--points", asy.points, "radial samples");

  bool quick = false;
  std::vector<int> only;
  auto* s_ver = app.add_subcommand("verify-all", "acceptance suite");
  s_ver->add_flag("--quick", quick, "reduced resolution");
  s_ver->add_option("--only", only, "criterion ids");

  for (auto* sub : {s_spec, s_hom, s_om, s_res, s_sg, s_sim, s_asy, s_ver}) add_common(sub, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  CLI::App* sub = app.get_subcommands().front();
  const bool out_given = sub->count("--out") > 0;
  if (!out_given) common.out = default_out();
  if (common.threads > 0) set_default_threads(common.threads);

  const auto t0 = std::chrono::steady_clock::now();
  Run run;
  int code = 0;
  try {
    ensure_dir(common.out);
    const std::string name = sub->get_name();
    if (name == "spectrum") run_spectrum(spec, common, run);
    else if (name == "homsol") run_homsol(hom, common, run);
    else if (name == "omega") run_omega(om, common, run);
    else if (name == "resolvent") run_resolvent(res, common, run);
    else if (name == "semigroup") run_semigroup(sg, common, run);
    else if (name == "simulate") run_simulate(config_path, out_given, common, run);
    else if (name == "asymptotics") run_asymptotics(asy, common, run);
    else if (name == "verify-all") code = run_verify(quick, only, common, run) ? 0 : 1;

    std::string manifest_dir = common.out;
    if (name == "simulate" && run.config.contains("out_dir")) manifest_dir = run.config["out_dir"];
    json m;
    m["subcommand"] = name;
    m["config"] = run.config;
    m["tol"] = common.tol ? json(*common.tol) : json(nullptr);
    m["threads"] = common.threads;
    m["version"] = KINKLAB_VERSION;
    m["duration_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    m["outputs"] = run.outputs;
    write_json_atomic(join_path(manifest_dir, "manifest.json"), m);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return code;
}
