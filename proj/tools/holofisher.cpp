// holofisher: maximum likelihood for the Fisher model on SO(3) by the
// holonomic gradient method, with a quadrature oracle for cross-checking.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holofisher/checks.hpp"
#include "holofisher/io.hpp"
#include "holofisher/kernels.hpp"
#include "holofisher/mle.hpp"
#include "holofisher/oracle.hpp"
#include "holofisher/pfaffian.hpp"

namespace hf = holofisher;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitConcentration = 3;
constexpr int kExitNotConverged = 4;

hf::Vec3 parse_vec3(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
  if (v.size() != 3) throw hf::ParseError("expected 3 comma-separated values: " + s);
  return hf::Vec3(v[0], v[1], v[2]);
}

std::string format_values(const double* v, int n) {
  char buf[32];
  std::string out;
  for (int i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    if (i) out += ",";
    out += buf;
  }
  return out;
}

struct FitFlags {
  std::string input, format = "matrix_csv", mean_literal, mean_file, method = "newton", start,
      out_path;
  double gamma = 1e-2, delta = 1e-8;
  int max_iter = 50000;
  bool multistart = false, force_gauge = false;
  std::uint64_t seed = 0;
};

int run_fit(const FitFlags& f) {
  const auto t_begin = std::chrono::steady_clock::now();
  hf::OptimConfig cfg;
  cfg.method = hf::optim_method_from_string(f.method);
  cfg.gamma = f.gamma;
  cfg.delta = f.delta;
  cfg.max_iter = f.max_iter;
  cfg.force_gauge = f.force_gauge;
  if (f.multistart) cfg.start = hf::StartRule::multistart_chambers;
  if (!f.start.empty()) {
    cfg.start = hf::StartRule::explicit_start;
    cfg.start_x = parse_vec3(f.start);
  }

  hf::SufficientStats stats;
  std::uint64_t digest = 0;
  if (!f.mean_literal.empty()) {
    stats = hf::signed_svd(hf::parse_matrix_literal(f.mean_literal));
    digest = hf::fnv1a64(f.mean_literal);
  } else if (!f.mean_file.empty()) {
    std::ifstream in(f.mean_file);
    if (!in) throw hf::ParseError("cannot open " + f.mean_file);
    std::stringstream buf;
    buf << in.rdbuf();
    digest = hf::fnv1a64(buf.str());
    buf.seekg(0);
    stats = hf::signed_svd(hf::read_mean_file(buf));
  } else {
    std::ifstream in(f.input);
    if (!in) throw hf::ParseError("cannot open " + f.input);
    std::stringstream buf;
    buf << in.rdbuf();
    digest = hf::fnv1a64(buf.str());
    buf.seekg(0);
    const auto samples = hf::read_dataset(buf, hf::dataset_format_from_string(f.format));
    if (samples.empty()) throw hf::ParseError("empty dataset: " + f.input);
    stats = hf::signed_svd(hf::sample_mean(samples));
    stats.n = samples.size();
  }

  const hf::MLEResult result = hf::fit(stats, cfg);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
  auto doc = hf::result_document(result, stats, cfg, digest, wall);
  doc["config"]["seed"] = f.seed;
  std::cout << doc.dump(2) << std::endl;
  if (!f.out_path.empty()) {
    std::ofstream out(f.out_path);
    out << doc.dump(2) << std::endl;
  }
  return result.converged() ? 0 : kExitNotConverged;
}

int run_sample(const std::string& theta_str, std::size_t n, std::uint64_t seed,
               const std::string& format) {
  const hf::Mat3 theta = hf::parse_matrix_literal(theta_str);
  const auto samples = hf::fisher_sample(hf::ParamMatrix{theta}, seed, n);
  std::ostringstream header;
  header << "holofisher sample format=" << format << " n=" << n << " seed=" << seed
         << " theta=" << theta_str;
  hf::write_dataset(std::cout, samples, hf::dataset_format_from_string(format), header.str());
  return 0;
}

int run_eval(const std::string& x_str, const std::string& what, const std::string& g_str,
             const std::string& method) {
  const hf::Vec3 x = parse_vec3(x_str);
  const bool use_hgm = method == "hgm";
  if (!use_hgm && method != "quadrature") throw hf::ParseError("unknown method: " + method);
  hf::IntegratorConfig icfg;
  std::vector<std::string> warnings;

  const auto log_state = [&]() -> hf::LogCState {
    if (use_hgm) return hf::eval_logC(x, icfg, &warnings);
    hf::LogCState s;
    s.log_c = hf::log_ctilde(x);
    const hf::CVector c =
        hf::C_quad_shifted(x, hf::QuadratureGrid::for_point(x), hf::max_exponent(x));
    s.u = c.tail<3>() / c(0);
    return s;
  };

  if (what == "C") {
    const hf::CVector c = use_hgm ? hf::eval_C(x, icfg, &warnings) : hf::C_quad(x);
    std::cout << format_values(c.data(), 4) << "\n";
  } else if (what == "logC") {
    const hf::LogCState s = log_state();
    const double vals[4] = {s.log_c, s.u(0), s.u(1), s.u(2)};
    std::cout << format_values(vals, 4) << "\n";
  } else if (what == "loglik" || what == "grad") {
    if (g_str.empty()) throw hf::ParseError("--g required for " + what);
    const hf::Vec3 g = parse_vec3(g_str);
    const hf::LogCState s = log_state();
    if (what == "loglik") {
      const double v = x.dot(g) - s.log_c;
      std::cout << format_values(&v, 1) << "\n";
    } else {
      const hf::Vec3 grad = g - s.u;
      std::cout << format_values(grad.data(), 3) << "\n";
    }
  } else {
    throw hf::ParseError("unknown --what: " + what);
  }
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

int run_check(const std::string& suite, int trials, std::uint64_t seed) {
  if (trials == 0) std::cerr << "warning: --trials 0, every check passes vacuously\n";
  const auto results = hf::checks::run_suite(suite, trials, seed);
  bool all_pass = true;
  std::printf("# kernel backend: %s\n", hf::kernels::active_backend().name);
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    std::printf("%-32s %s  worst %.3e  tol %.1e%s%s\n", r.name.c_str(),
                r.pass ? "PASS" : "FAIL", r.worst, r.tol, r.note.empty() ? "" : "  # ",
                r.note.c_str());
  }
  std::printf("%s: %zu checks, %s\n", suite.c_str(), results.size(),
              all_pass ? "all passed" : "FAILURES present");
  return all_pass ? 0 : 1;
}

int run_profile(const std::string& theta_str, const std::string& dataset, std::size_t n_max,
                int sweep, std::uint64_t seed, const std::string& method) {
  const hf::Mat3 theta = hf::parse_matrix_literal(theta_str);
  std::vector<hf::Rotation> samples;
  if (!dataset.empty()) {
    std::ifstream in(dataset);
    if (!in) throw hf::ParseError("cannot open " + dataset);
    samples = hf::read_dataset(in, hf::DatasetFormat::matrix_csv);
  } else {
    samples = hf::fisher_sample(hf::ParamMatrix{theta}, seed, n_max);
  }
  if (samples.empty()) throw hf::ParseError("no samples to profile");
  sweep = std::max(1, sweep);

  hf::OptimConfig cfg;
  cfg.method = hf::optim_method_from_string(method);
  std::cout << "n,fd,lr\n";
  for (int k = 1; k <= sweep; ++k) {
    const std::size_t n = samples.size() * k / sweep;
    if (n == 0) continue;
    const std::vector<hf::Rotation> prefix(samples.begin(), samples.begin() + n);
    const hf::Mat3 ybar = hf::sample_mean(prefix);
    const hf::MLEResult r = hf::fit(prefix, cfg);
    const double fd = (r.theta_hat.t - theta).norm();
    const double lr = hf::loglik_param(hf::ParamMatrix{theta}, ybar) - r.loglik;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu,%.6g,%.6g\n", n, fd, lr);
    std::cout << buf;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fisher-model MLE on SO(3) by the holonomic gradient method"};
  app.require_subcommand(1);

  FitFlags ff;
  auto* fit = app.add_subcommand("fit", "fit the Fisher model to rotation data");
  fit->add_option("--input", ff.input, "dataset file");
  fit->add_option("--format", ff.format, "matrix_csv|quaternion_csv|vector_pair_csv");
  fit->add_option("--mean", ff.mean_literal, "sample mean, 9 comma-separated values row-major");
  fit->add_option("--mean-file", ff.mean_file, "file holding a 9-value sample mean");
  fit->add_option("--method", ff.method, "hga|hbfgs|newton (default newton)");
  fit->add_option("--gamma", ff.gamma, "HGA learning rate");
  fit->add_option("--delta", ff.delta, "gradient inf-norm stop threshold");
  fit->add_option("--max-iter", ff.max_iter, "iteration cap");
  fit->add_option("--start", ff.start, "explicit start x1,x2,x3");
  fit->add_flag("--multistart", ff.multistart, "start from all 24 chambers");
  fit->add_flag("--force-gauge", ff.force_gauge, "override the concentration guard");
  fit->add_option("--seed", ff.seed, "seed recorded for provenance");
  fit->add_option("--out", ff.out_path, "also write the result document here");

  std::string theta_str, sample_format = "matrix_csv";
  std::size_t n = 0;
  std::uint64_t seed = 0;
  auto* sample = app.add_subcommand("sample", "draw from the Fisher distribution");
  sample->add_option("--theta", theta_str, "parameter matrix, 9 values row-major")->required();
  sample->add_option("-n,--n", n, "sample count")->required();
  sample->add_option("--seed", seed, "RNG seed");
  sample->add_option("--format", sample_format, "output dataset format");

  std::string x_str, what = "C", g_str, eval_method = "hgm";
  auto* eval = app.add_subcommand("eval", "evaluate C, log C, loglik or grad");
  eval->add_option("--x", x_str, "point x1,x2,x3")->required();
  eval->add_option("--what", what, "C|logC|loglik|grad");
  eval->add_option("--g", g_str, "sufficient statistics g1,g2,g3");
  eval->add_option("--method", eval_method, "hgm|quadrature");

  std::string suite = "all";
  int trials = 50;
  std::uint64_t check_seed = 20240901;
  auto* check = app.add_subcommand("check", "run verification suites");
  check->add_option("--suite", suite, "pfaffian|annihilators|symmetry|su2|all");
  check->add_option("--trials", trials, "random points per check");
  check->add_option("--seed", check_seed, "RNG seed");

  std::string prof_theta, prof_dataset, prof_method = "newton";
  std::size_t prof_n = 10000;
  int prof_sweep = 10;
  std::uint64_t prof_seed = 1;
  auto* profile = app.add_subcommand("profile", "sweep sample size, emit n,fd,lr CSV");
  profile->add_option("--theta", prof_theta, "true parameter matrix (for FD and LR)")->required();
  profile->add_option("--dataset", prof_dataset, "matrix_csv file (otherwise sampled)");
  profile->add_option("-n,--n", prof_n, "max sample count when sampling");
  profile->add_option("--sweep", prof_sweep, "number of sweep points");
  profile->add_option("--seed", prof_seed, "RNG seed");
  profile->add_option("--method", prof_method, "optimizer");

  try {
    app.parse(argc, argv);
    if (*fit) return run_fit(ff);
    if (*sample) return run_sample(theta_str, n, seed, sample_format);
    if (*eval) return run_eval(x_str, what, g_str, eval_method);
    if (*check) return run_check(suite, trials, check_seed);
    if (*profile)
      return run_profile(prof_theta, prof_dataset, prof_n, prof_sweep, prof_seed, prof_method);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  } catch (const hf::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const hf::ConcentrationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConcentration;
  } catch (const hf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
