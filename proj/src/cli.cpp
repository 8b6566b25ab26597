#include "krylovlab/cli.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "krylovlab/classical.hpp"
#include "krylovlab/classical_alpha.hpp"
#include "krylovlab/evolution.hpp"
#include "krylovlab/lanczos.hpp"
#include "krylovlab/models.hpp"
#include "krylovlab/run_config.hpp"
#include "krylovlab/sphere_poly.hpp"
#include "krylovlab/table.hpp"

namespace klab {
namespace {

struct ModelBundle {
  std::string model;
  double spin = 0.0;
  double coupling = 0.0;
  double hbar_eff = 0.0;
  SpinTriple site;
  DenseOperator h, h_tilde;
};

ModelBundle make_model(const RunConfig& cfg) {
  ModelBundle b;
  b.model = cfg.model;
  b.spin = cfg.spin;
  b.coupling = cfg.coupling;
  if (cfg.model == "lmg") {
    LmgModel m = build_lmg(cfg.spin, cfg.coupling);
    b.site = m.ops;
    b.h = std::move(m.h);
    b.h_tilde = std::move(m.h_tilde);
  } else if (cfg.model == "fp") {
    FpModel m = build_fp(cfg.spin, cfg.coupling);
    b.site = m.site_ops;
    b.h = std::move(m.h);
    b.h_tilde = std::move(m.h_tilde);
  } else {
    throw std::invalid_argument("unknown model '" + cfg.model + "' (expected lmg or fp)");
  }
  b.hbar_eff = 1.0 / cfg.spin;
  return b;
}

DenseOperator read_operator_file(const std::string& path, Eigen::Index dim) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open seed operator file " + path);
  Eigen::Index d = 0;
  if (!(in >> d) || d != dim) {
    throw std::invalid_argument("seed operator file " + path + " does not match model dimension " +
                                std::to_string(dim));
  }
  DenseOperator op(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im)) {
        throw std::invalid_argument("seed operator file " + path + " is truncated");
      }
      op(i, j) = Complex(re, im);
    }
  }
  return op;
}

DenseOperator make_seed(const RunConfig& cfg, const ModelBundle& b) {
  if (!cfg.seed_file.empty()) return read_operator_file(cfg.seed_file, b.h.rows());
  const Eigen::Index d_site = b.site.dim();
  const DenseOperator eye = DenseOperator::Identity(d_site, d_site);
  if (b.model == "lmg") {
    if (cfg.seed == "z") return b.site.z_hat;
    if (cfg.seed == "x") return b.site.x_hat;
    throw std::invalid_argument("seed '" + cfg.seed + "' is not defined for the lmg model");
  }
  if (cfg.seed == "z") {
    return tensor_product(b.site.z_hat, eye) + tensor_product(eye, b.site.z_hat);
  }
  if (cfg.seed == "x" || cfg.seed == "x1+x2") {
    return tensor_product(b.site.x_hat, eye) + tensor_product(eye, b.site.x_hat);
  }
  throw std::invalid_argument("seed '" + cfg.seed + "' is not defined for the fp model");
}

InnerProductSpec make_inner(const RunConfig& cfg,
                            const std::shared_ptr<const SpectralDecomposition>& spec) {
  if (cfg.inner == "infinite") return InnerProductSpec::infinite_temperature();
  if (cfg.inner == "micro") return microcanonical_inner_spec(spec, cfg.energy, cfg.window);
  throw std::invalid_argument("unknown inner product '" + cfg.inner + "' (expected infinite or micro)");
}

void echo_config(ResultTable& t, const RunConfig& cfg) {
  t.set_meta("krylovlab_version", std::string(kVersion));
  t.set_meta("command", cfg.command);
  t.set_meta("model", cfg.model);
  t.set_meta("spin", cfg.spin);
  t.set_meta("coupling", cfg.coupling);
  t.set_meta("seed", cfg.seed_file.empty() ? cfg.seed : "file:" + cfg.seed_file);
  t.set_meta("inner", cfg.inner);
  if (cfg.inner == "micro") {
    t.set_meta("energy", cfg.energy);
    t.set_meta("window", cfg.window);
  }
  t.set_meta("format", cfg.format);
  // H_tilde = S * H uniformly for both models (the rescaled generator)
  t.set_meta("generator", "h_tilde = spin * h");
}

Eigen::Index resolved_max_n(const RunConfig& cfg) {
  return cfg.max_n <= 0 ? std::numeric_limits<Eigen::Index>::max() : cfg.max_n;
}

void add_slope_meta(ResultTable& t, const std::vector<double>& b, const RunConfig& cfg,
                    int def_from, int def_to, const char* prefix) {
  const int len = static_cast<int>(b.size());
  int from = cfg.fit_from > 0 ? static_cast<int>(std::llround(cfg.fit_from)) : def_from;
  int to = cfg.fit_to > 0 ? static_cast<int>(std::llround(cfg.fit_to)) : std::min(def_to, len);
  if (to - from + 1 < 3 || from < 1 || to > len) return;
  const SlopeFit fit = fit_linear_slope(b, from, to);
  t.set_meta(std::string(prefix) + "_n_begin", static_cast<long long>(fit.n_begin));
  t.set_meta(std::string(prefix) + "_n_end", static_cast<long long>(fit.n_end));
  t.set_meta(std::string(prefix) + "_alpha", fit.alpha);
  t.set_meta(std::string(prefix) + "_intercept", fit.intercept);
  t.set_meta(std::string(prefix) + "_residual", fit.residual);
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

ResultTable cmd_lanczos(const RunConfig& cfg) {
  const ModelBundle b = make_model(cfg);
  const DenseOperator seed = make_seed(cfg, b);
  std::shared_ptr<const SpectralDecomposition> spec;
  if (cfg.inner == "micro") {
    spec = std::make_shared<SpectralDecomposition>(eigendecompose(b.h));
  }
  const InnerProductSpec inner = make_inner(cfg, spec);
  const LanczosOutput out =
      lanczos(b.h_tilde, seed, inner, resolved_max_n(cfg), cfg.breakdown_tol);

  ResultTable t;
  echo_config(t, cfg);
  t.set_meta("max_n", cfg.max_n);
  t.set_meta("breakdown_tol", cfg.breakdown_tol);
  t.set_meta("krylov_dim", static_cast<long long>(out.krylov_dim));
  t.set_meta("termination", to_string(out.termination));
  if (inner.kind == InnerKind::Microcanonical) {
    t.set_meta("window_count", static_cast<long long>(inner.window_count()));
  }
  add_slope_meta(t, out.b, cfg, 2, 37, "slope");

  std::vector<double> n(out.b.size());
  for (std::size_t i = 0; i < n.size(); ++i) n[i] = static_cast<double>(i + 1);
  t.add_column("n", std::move(n));
  t.add_column("b_n", out.b);
  return t;
}

ResultTable cmd_kcomplexity(const RunConfig& cfg) {
  const ModelBundle b = make_model(cfg);
  const DenseOperator seed = make_seed(cfg, b);
  std::shared_ptr<const SpectralDecomposition> spec;
  if (cfg.inner == "micro") {
    spec = std::make_shared<SpectralDecomposition>(eigendecompose(b.h));
  }
  const InnerProductSpec inner = make_inner(cfg, spec);
  const LanczosOutput lz =
      lanczos(b.h_tilde, seed, inner, resolved_max_n(cfg), cfg.breakdown_tol);

  const Eigen::VectorXd times = make_time_grid(cfg.t_max, cfg.points);
  const KrylovWavefunction w = evolve_wavefunction(lz.b, times);
  const ComplexityCurve kc = k_complexity(w);

  ResultTable t;
  echo_config(t, cfg);
  t.set_meta("max_n", cfg.max_n);
  t.set_meta("breakdown_tol", cfg.breakdown_tol);
  t.set_meta("t_max", cfg.t_max);
  t.set_meta("points", cfg.points);
  t.set_meta("krylov_dim", static_cast<long long>(lz.krylov_dim));
  t.set_meta("termination", to_string(lz.termination));

  // Mass in the last 20 chain sites; nonzero values flag a truncated chain.
  const Eigen::Index guard = std::min<Eigen::Index>(20, w.krylov_dim());
  const double tail_mass =
      w.amplitudes.bottomRows(guard).array().square().colwise().sum().maxCoeff();
  t.set_meta("tail_mass_max", tail_mass);

  const double fit_from = cfg.fit_from >= 0 ? cfg.fit_from : 1.0;
  const double fit_to = cfg.fit_to >= 0 ? cfg.fit_to : std::log(cfg.spin);
  if (fit_to > fit_from) {
    try {
      const ExponentFit fit = fit_exponential(kc.times, kc.k, fit_from, fit_to);
      t.set_meta("k_exponent_t_begin", fit.t_begin);
      t.set_meta("k_exponent_t_end", fit.t_end);
      t.set_meta("k_exponent_lambda", fit.lambda);
      t.set_meta("k_exponent_r2", fit.r2);
    } catch (const std::invalid_argument&) {
      // K can vanish inside the window (frozen seed); leave the fit out.
    }
  }

  t.add_column("t", to_std(times));
  t.add_column("K", to_std(kc.k));
  t.add_column("C", to_std(autocorrelation_from_wavefunction(w)));
  t.add_column("sum_prob", to_std(probability_sum(w)));
  if (inner.kind == InnerKind::Microcanonical) {
    const Eigen::VectorXcd direct = autocorrelation_direct(*spec, seed, inner, b.hbar_eff, times);
    t.add_column("c_direct_re", to_std(direct.real()));
    t.add_column("c_direct_im", to_std(direct.imag()));
    t.set_meta("window_count", static_cast<long long>(inner.window_count()));
  }
  return t;
}

ResultTable cmd_otoc(const RunConfig& cfg) {
  const ModelBundle b = make_model(cfg);
  const DenseOperator seed = make_seed(cfg, b);
  const SpectralDecomposition spec = eigendecompose(b.h);
  const Eigen::VectorXd times = make_time_grid(cfg.t_max, cfg.points);
  const OtocCurve curve = otoc(spec, seed, b.hbar_eff, times);

  ResultTable t;
  echo_config(t, cfg);
  t.set_meta("t_max", cfg.t_max);
  t.set_meta("points", cfg.points);
  const double fit_from = cfg.fit_from >= 0 ? cfg.fit_from : 1.0;
  const double fit_to = cfg.fit_to >= 0 ? cfg.fit_to : std::log(cfg.spin);
  if (fit_to > fit_from) {
    const ExponentFit fit = fit_exponential(curve.times, curve.values, fit_from, fit_to);
    t.set_meta("lambda_otoc_t_begin", fit.t_begin);
    t.set_meta("lambda_otoc_t_end", fit.t_end);
    t.set_meta("lambda_otoc", fit.lambda);
    t.set_meta("lambda_otoc_r2", fit.r2);
  }
  t.add_column("t", to_std(times));
  t.add_column("OTOC", to_std(curve.values));
  return t;
}

ResultTable cmd_microcanonical(const RunConfig& cfg) {
  RunConfig local = cfg;
  local.inner = "micro";
  const ModelBundle b = make_model(local);
  const DenseOperator seed = make_seed(local, b);
  const auto spec = std::make_shared<const SpectralDecomposition>(eigendecompose(b.h));
  const InnerProductSpec inner = microcanonical_inner_spec(spec, local.energy, local.window);
  const LanczosOutput lz =
      lanczos(b.h_tilde, seed, inner, resolved_max_n(local), local.breakdown_tol);

  ResultTable t;
  echo_config(t, local);
  t.set_meta("max_n", local.max_n);
  t.set_meta("breakdown_tol", local.breakdown_tol);
  t.set_meta("window_count", static_cast<long long>(inner.window_count()));
  t.set_meta("window_e_first", spec->eigenvalues[inner.window_states.front()]);
  t.set_meta("window_e_last", spec->eigenvalues[inner.window_states.back()]);
  t.set_meta("krylov_dim", static_cast<long long>(lz.krylov_dim));
  t.set_meta("termination", to_string(lz.termination));
  add_slope_meta(t, lz.b, local, 2, 20, "slope");

  std::vector<double> n(lz.b.size()), f_col(lz.b.size()), g_col(lz.b.size());
  for (std::size_t i = 0; i < n.size(); ++i) n[i] = static_cast<double>(i + 1);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::fill(f_col.begin(), f_col.end(), nan);
  std::fill(g_col.begin(), g_col.end(), nan);
  if (lz.b.size() >= 4) {
    const auto [f, g] = decompose_oscillation(lz.b);
    std::copy(f.begin(), f.end(), f_col.begin());
    std::copy(g.begin(), g.end(), g_col.begin());
    double mean_abs_g = 0.0;
    int count = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const int nn = static_cast<int>(k) + 1;
      if (nn >= 10 && nn <= 40) {
        mean_abs_g += std::abs(g[k]);
        ++count;
      }
    }
    if (count > 0) t.set_meta("mean_abs_g_n10_40", mean_abs_g / count);
  }
  t.add_column("n", std::move(n));
  t.add_column("b_n", lz.b);
  t.add_column("f", std::move(f_col));
  t.add_column("g", std::move(g_col));
  return t;
}

ResultTable cmd_classical_alpha(const RunConfig& arg_cfg) {
  RunConfig cfg = arg_cfg;
  if (cfg.e_min == 0.0 && cfg.e_max == 0.0) {
    const double lo = classical_energy_min(cfg.coupling);
    const double hi = classical_energy_max(cfg.coupling);
    const double margin = 0.01 * (hi - lo);
    cfg.e_min = lo + margin;
    cfg.e_max = hi - margin;
  }
  if (cfg.points < 2 || !(cfg.e_max > cfg.e_min)) {
    throw std::invalid_argument("classical-alpha: need --emin < --emax and --points >= 2");
  }
  ResultTable t;
  echo_config(t, cfg);
  t.set_meta("e_min", cfg.e_min);
  t.set_meta("e_max", cfg.e_max);
  t.set_meta("points", cfg.points);
  const SupAlpha sup = sup_alpha(cfg.coupling);
  t.set_meta("sup_alpha_energy", sup.energy);
  t.set_meta("sup_two_alpha", 2.0 * sup.alpha);

  std::vector<double> e_col, two_alpha, sig, tau;
  for (long long i = 0; i < cfg.points; ++i) {
    const double e = cfg.e_min + (cfg.e_max - cfg.e_min) * static_cast<double>(i) /
                                     static_cast<double>(cfg.points - 1);
    const double s = sigma_star(e, cfg.coupling);
    e_col.push_back(e);
    two_alpha.push_back(2.0 * alpha_of_E(e, cfg.coupling));
    sig.push_back(s);
    tau.push_back(2.0 * s);
  }
  t.add_column("E", std::move(e_col));
  t.add_column("two_alpha", std::move(two_alpha));
  t.add_column("sigma_star", std::move(sig));
  t.add_column("tau_star", std::move(tau));
  return t;
}

ResultTable cmd_classical_saddles(const RunConfig& cfg) {
  ResultTable t;
  echo_config(t, cfg);
  const bool fp = cfg.model == "fp";
  const auto saddles = fp ? find_saddles_fp(cfg.coupling) : find_saddles_lmg(cfg.coupling);
  if (fp) {
    t.set_meta("note", "gamma family of mixed fixed points is neutrally stable and not listed");
    t.set_meta("omega_c", fp_saddle_exponent(cfg.coupling));
  }
  const Eigen::Index dim = saddles.front().coords.size();
  std::vector<std::vector<double>> cols(static_cast<std::size_t>(3 * dim));
  for (const auto& s : saddles) {
    for (Eigen::Index i = 0; i < dim; ++i) cols[static_cast<std::size_t>(i)].push_back(s.coords[i]);
    for (Eigen::Index i = 0; i < dim; ++i) {
      cols[static_cast<std::size_t>(dim + 2 * i)].push_back(s.jacobian_eigenvalues[i].real());
      cols[static_cast<std::size_t>(dim + 2 * i + 1)].push_back(s.jacobian_eigenvalues[i].imag());
    }
  }
  static const char* lmg_names[] = {"x", "y", "z"};
  static const char* fp_names[] = {"x1", "y1", "z1", "x2", "y2", "z2"};
  for (Eigen::Index i = 0; i < dim; ++i) {
    t.add_column(fp ? fp_names[i] : lmg_names[i], std::move(cols[static_cast<std::size_t>(i)]));
  }
  for (Eigen::Index i = 0; i < dim; ++i) {
    t.add_column("ev" + std::to_string(i + 1) + "_re",
                 std::move(cols[static_cast<std::size_t>(dim + 2 * i)]));
    t.add_column("ev" + std::to_string(i + 1) + "_im",
                 std::move(cols[static_cast<std::size_t>(dim + 2 * i + 1)]));
  }
  std::vector<double> omegas;
  for (const auto& s : saddles) omegas.push_back(s.omega_saddle);
  t.add_column("omega_saddle", std::move(omegas));
  return t;
}

ResultTable cmd_classical_lanczos(const RunConfig& cfg) {
  const SpherePolynomial x1 = SpherePolynomial::variable(0, 0);
  const SpherePolynomial z1 = SpherePolynomial::variable(0, 2);
  const SpherePolynomial x2 = SpherePolynomial::variable(1, 0);
  const SpherePolynomial z2 = SpherePolynomial::variable(1, 2);

  SpherePolynomial h, seed;
  if (cfg.model == "lmg") {
    h = x1 + cfg.coupling * (z1 * z1);
    if (cfg.seed == "z") {
      seed = z1;
    } else if (cfg.seed == "x") {
      seed = x1;
    } else {
      throw std::invalid_argument("classical-lanczos: seed must be z or x for lmg");
    }
  } else if (cfg.model == "fp") {
    if (cfg.coupling < -1.0 || cfg.coupling > 1.0) {
      throw std::invalid_argument("classical-lanczos: fp coupling c must lie in [-1, 1]");
    }
    h = (1.0 + cfg.coupling) * (x1 + x2) + (4.0 * (1.0 - cfg.coupling)) * (z1 * z2);
    if (cfg.seed == "z") {
      seed = z1 + z2;
    } else if (cfg.seed == "x" || cfg.seed == "x1+x2") {
      seed = x1 + x2;
    } else {
      throw std::invalid_argument("classical-lanczos: seed must be z, x or x1+x2 for fp");
    }
  } else {
    throw std::invalid_argument("unknown model '" + cfg.model + "'");
  }

  const int max_n = cfg.max_n <= 0 ? 1 << 20 : static_cast<int>(cfg.max_n);
  const ClassicalLanczosOutput out =
      classical_lanczos(h, seed, max_n, static_cast<int>(cfg.degree_cap), cfg.breakdown_tol);

  ResultTable t;
  echo_config(t, cfg);
  t.set_meta("max_n", cfg.max_n);
  t.set_meta("degree_cap", cfg.degree_cap);
  t.set_meta("krylov_dim", static_cast<long long>(out.krylov_dim));
  t.set_meta("termination", to_string(out.termination));
  add_slope_meta(t, out.b, cfg, 1, 20, "slope");

  std::vector<double> n(out.b.size());
  for (std::size_t i = 0; i < n.size(); ++i) n[i] = static_cast<double>(i + 1);
  t.add_column("n", std::move(n));
  t.add_column("b_n", out.b);
  return t;
}

ResultTable cmd_fp_bound(const RunConfig& cfg) {
  if (cfg.points < 2 || !(cfg.c_max > cfg.c_min)) {
    throw std::invalid_argument("fp-bound: need --cmin < --cmax and --points >= 2");
  }
  if (!(cfg.c_min > -1.0 && cfg.c_max < 1.0)) {
    throw std::domain_error("fp-bound: c range must lie strictly inside (-1, 1)");
  }
  ResultTable t;
  echo_config(t, cfg);
  t.set_meta("c_min", cfg.c_min);
  t.set_meta("c_max", cfg.c_max);
  t.set_meta("points", cfg.points);
  std::vector<double> c_col, bound, omega;
  for (long long i = 0; i < cfg.points; ++i) {
    const double c = cfg.c_min + (cfg.c_max - cfg.c_min) * static_cast<double>(i) /
                                     static_cast<double>(cfg.points - 1);
    c_col.push_back(c);
    bound.push_back(fp_lower_bound_alpha(c));
    omega.push_back(fp_saddle_exponent(c));
  }
  t.add_column("c", std::move(c_col));
  t.add_column("bound_two_alpha", std::move(bound));
  t.add_column("omega", std::move(omega));
  return t;
}

void emit(const RunConfig& cfg, const ResultTable& t, std::ostream& out, std::ostream& err,
          double wall_ms) {
  if (cfg.output.empty()) {
    out << t.to_string(cfg.format);
  } else {
    t.write_file(cfg.output, cfg.format);
    if (cfg.gnuplot) {
      std::ofstream gp(cfg.output + ".gp");
      t.write_gnuplot(gp, cfg.output);
    }
  }
  err << "# " << cfg.command << " done, wall_ms = " << wall_ms << "\n";
}

std::vector<std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    tokens.push_back("--" + key);
    tokens.push_back(value);
  }
  return tokens;
}

int run_one(std::vector<std::string> args, std::ostream& out, std::ostream& err, bool allow_sweep);

int cmd_sweep(const std::string& file, std::ostream& out, std::ostream& err,
              const std::string& output, const std::string& format) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("sweep: cannot open run list " + file);
  std::vector<std::vector<std::string>> runs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    if (!tokens.empty()) runs.push_back(std::move(tokens));
  }
  for (const auto& run : runs) {
    bool has_output = false;
    for (const auto& tok : run) has_output |= tok == "--output" || tok.rfind("--output=", 0) == 0;
    if (!has_output) {
      throw std::invalid_argument("sweep: every run line must carry --output");
    }
  }

  unsigned workers = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("KRYLOV_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) workers = static_cast<unsigned>(cap);
  }
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(runs.size())));

  std::vector<int> status(runs.size(), -1);
  std::vector<std::string> logs(runs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= runs.size()) return;
      std::ostringstream run_out, run_err;
      status[idx] = run_one(runs[idx], run_out, run_err, false);
      logs[idx] = run_err.str();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  ResultTable t;
  t.set_meta("krylovlab_version", std::string(kVersion));
  t.set_meta("command", std::string("sweep"));
  t.set_meta("file", file);
  t.set_meta("runs", static_cast<long long>(runs.size()));
  t.set_meta("workers", static_cast<long long>(workers));
  std::vector<double> index, codes;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    index.push_back(static_cast<double>(i));
    codes.push_back(static_cast<double>(status[i]));
  }
  t.add_column("run", std::move(index));
  t.add_column("exit_code", std::move(codes));
  if (output.empty()) {
    out << t.to_string(format);
  } else {
    t.write_file(output, format);
  }
  for (const auto& log : logs) err << log;
  int rc = 0;
  for (const int s : status) rc = std::max(rc, s);
  return rc;
}

int run_one(std::vector<std::string> args, std::ostream& out, std::ostream& err, bool allow_sweep) {
  CLI::App app{"operator growth laboratory for collective spin models"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  RunConfig cfg;
  std::string config_file;
  std::string sweep_file;

  const auto add_common = [&](CLI::App* sub, bool with_model) {
    sub->add_option("--config", config_file, "flat key = value config file");
    sub->add_option("--output", cfg.output, "output path (default stdout)");
    sub->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--gnuplot", cfg.gnuplot, "also write a gnuplot script next to --output");
    if (with_model) {
      sub->add_option("--model", cfg.model, "lmg or fp")->check(CLI::IsMember({"lmg", "fp"}));
      sub->add_option("--coupling", cfg.coupling, "J (lmg) or c (fp)");
    }
  };
  const auto add_quantum = [&](CLI::App* sub) {
    sub->add_option("--spin", cfg.spin, "half-integer spin S (per site for fp)");
    sub->add_option("--seed", cfg.seed, "seed operator: z, x or x1+x2");
    sub->add_option("--seed-file", cfg.seed_file, "custom seed operator file");
    sub->add_option("--inner", cfg.inner, "inner product: infinite or micro")
        ->check(CLI::IsMember({"infinite", "micro"}));
    sub->add_option("--energy", cfg.energy, "microcanonical window center (units of H)");
    sub->add_option("--window", cfg.window, "microcanonical window half-width");
    sub->add_option("--max-n", cfg.max_n, "coefficient cap, 0 = run to breakdown");
    sub->add_option("--breakdown-tol", cfg.breakdown_tol, "breakdown threshold relative to b_1");
    sub->add_option("--fit-from", cfg.fit_from, "fit window start (n or t)");
    sub->add_option("--fit-to", cfg.fit_to, "fit window end (n or t)");
  };

  auto* lan = app.add_subcommand("lanczos", "Lanczos coefficients b_n");
  add_common(lan, true);
  add_quantum(lan);

  auto* kc = app.add_subcommand("kcomplexity", "Krylov wavefunction, K(t) and C(t)");
  add_common(kc, true);
  add_quantum(kc);
  kc->add_option("--t-max", cfg.t_max, "time grid end");
  kc->add_option("--points", cfg.points, "time grid points");

  auto* ot = app.add_subcommand("otoc", "out-of-time-order correlator");
  add_common(ot, true);
  ot->add_option("--spin", cfg.spin, "half-integer spin S (per site for fp)");
  ot->add_option("--seed", cfg.seed, "operator: z, x or x1+x2");
  ot->add_option("--seed-file", cfg.seed_file, "custom operator file");
  ot->add_option("--t-max", cfg.t_max, "time grid end");
  ot->add_option("--points", cfg.points, "time grid points");
  ot->add_option("--fit-from", cfg.fit_from, "exponential fit window start");
  ot->add_option("--fit-to", cfg.fit_to, "exponential fit window end");

  auto* mc = app.add_subcommand("microcanonical", "microcanonical Lanczos window report");
  add_common(mc, true);
  add_quantum(mc);

  auto* ca = app.add_subcommand("classical-alpha", "semi-analytic 2 alpha(E) curve");
  add_common(ca, false);
  ca->add_option("--coupling", cfg.coupling, "LMG coupling J");
  ca->add_option("--emin", cfg.e_min, "energy range start");
  ca->add_option("--emax", cfg.e_max, "energy range end");
  ca->add_option("--points", cfg.points, "number of samples");

  auto* cs = app.add_subcommand("classical-saddles", "fixed points and Jacobian spectra");
  add_common(cs, true);

  auto* cl = app.add_subcommand("classical-lanczos", "Poisson-bracket Lanczos coefficients");
  add_common(cl, true);
  cl->add_option("--seed", cfg.seed, "seed polynomial: z, x or x1+x2");
  cl->add_option("--max-n", cfg.max_n, "coefficient cap, 0 = run to cap/breakdown");
  cl->add_option("--degree-cap", cfg.degree_cap, "polynomial degree cap");
  cl->add_option("--breakdown-tol", cfg.breakdown_tol, "breakdown threshold relative to b_1");
  cl->add_option("--fit-from", cfg.fit_from, "slope fit window start (n)");
  cl->add_option("--fit-to", cfg.fit_to, "slope fit window end (n)");

  auto* fb = app.add_subcommand("fp-bound", "equal-spin bound on the FP growth exponent");
  add_common(fb, false);
  fb->add_option("--cmin", cfg.c_min, "c range start");
  fb->add_option("--cmax", cfg.c_max, "c range end");
  fb->add_option("--points", cfg.points, "number of samples");

  auto* sw = app.add_subcommand("sweep", "run a list of commands across a worker pool");
  sw->add_option("--file", sweep_file, "text file with one command line per run")->required();
  sw->add_option("--output", cfg.output, "summary table path (default stdout)");
  sw->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  // Config files are flat key = value; their tokens are inserted right after
  // the subcommand so every explicit flag wins under TakeLast.
  try {
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) {
        const auto extra = load_config_file(args[i + 1]);
        args.insert(args.begin() + 1, extra.begin(), extra.end());
        break;
      }
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    ResultTable table;
    if (lan->parsed()) {
      cfg.command = "lanczos";
      table = cmd_lanczos(cfg);
    } else if (kc->parsed()) {
      cfg.command = "kcomplexity";
      table = cmd_kcomplexity(cfg);
    } else if (ot->parsed()) {
      cfg.command = "otoc";
      table = cmd_otoc(cfg);
    } else if (mc->parsed()) {
      cfg.command = "microcanonical";
      table = cmd_microcanonical(cfg);
    } else if (ca->parsed()) {
      cfg.command = "classical-alpha";
      table = cmd_classical_alpha(cfg);
    } else if (cs->parsed()) {
      cfg.command = "classical-saddles";
      table = cmd_classical_saddles(cfg);
    } else if (cl->parsed()) {
      cfg.command = "classical-lanczos";
      table = cmd_classical_lanczos(cfg);
    } else if (fb->parsed()) {
      cfg.command = "fp-bound";
      table = cmd_fp_bound(cfg);
    } else if (sw->parsed()) {
      if (!allow_sweep) throw std::invalid_argument("sweep lines cannot launch nested sweeps");
      return cmd_sweep(sweep_file, out, err, cfg.output, cfg.format);
    }
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    emit(cfg, table, out, err, wall_ms);
    return 0;
  } catch (const std::domain_error& e) {
    err << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return run_one(args, out, err, true);
}

}  // namespace klab
