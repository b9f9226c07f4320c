// SPDX-License-Identifier: Apache-2.0
// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on failure.
// Set LCRIS_FULL_SCALE=1 to also run the N = 100 reproduction (slow).
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include "lcris/cli.hpp"
#include "lcris/lemma2.hpp"
#include "lcris/optimizer.hpp"
#include "lcris/sdp.hpp"
#include "lcris/squint.hpp"

using namespace lcris;
namespace fs = std::filesystem;

namespace {

const std::string kData = LCRIS_DATA_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

CVector random_cvector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  CVector v(n);
  for (auto& z : v) z = cplx(g(rng), g(rng));
  return v;
}

CMatrix random_hermitian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = cplx(g(rng), g(rng));
  }
  return 0.5 * (m + m.adjoint());
}

ScenarioConfig desk_config() {
  ScenarioConfig c = load_scenario(kData + "/scenarios/desk.json");
  return c;
}

Outcome lemma2_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(1, 16);
  std::uniform_real_distribution<double> beta(0.85, 1.18);
  int failed = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const Lemma2Check r = check_lemma2(make_restricted_case(1000 + i, dim(rng), beta(rng)));
    if (!r.passed()) ++failed;
  }
  const double t = seconds_since(t0);
  return {failed == 0 && t < 30.0, std::to_string(failed) + "/1000 failed, " + num(t) + " s"};
}

Outcome quad_form_equivalence() {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> n_dist(2, 32);
  std::uniform_int_distribution<int> nt_dist(1, 16);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int n = n_dist(rng);
    const int nt = nt_dist(rng);
    const CVector hr = random_cvector(rng, n);
    CMatrix ht(n, nt);
    for (int j = 0; j < nt; ++j) ht.col(j) = random_cvector(rng, n);
    const CVector q = random_cvector(rng, nt);
    const double noise = 1e-3 + u(rng);
    RVector w(n);
    for (auto& x : w) x = u(rng);
    const CVector s = reflect_coeffs(w);
    const double direct = snr(effective_channel(hr, s, ht), q, noise);
    const double quad = (s.adjoint() * quad_matrix(hr, ht, q, noise).matrix * s)(0, 0).real();
    worst = std::max(worst, std::abs(quad - direct) / direct);
  }
  return {worst <= 1e-9, "max relative error " + num(worst)};
}

Outcome gamma_closed_form() {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> shift(-1.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  double worst = 0.0;
  for (int scene = 0; scene < 20; ++scene) {
    ScenarioConfig c = desk_config();
    const Vec3 du(shift(rng), shift(rng), 0.0);
    const Vec3 de(shift(rng), 0.5 * shift(rng) - 0.5, 0.0);
    c.user_region.min_corner += du;
    c.user_region.max_corner += du;
    c.eve_region.min_corner += de;
    c.eve_region.max_corner += de;
    validate_scenario(c);
    const Experiment exp = make_experiment(c);
    const CVector q = beamformer_lemma1(c);
    RVector w(c.ris_array.size());
    for (auto& x : w) x = u(rng);
    const PhaseProfile p(w);

    std::vector<CMatrix> lifted;
    for (double b : exp.grid.beta_k) lifted.push_back(lifted_from_profile(p, b));
    const double fast = gamma_update(lifted, build_design_model(exp.channels, exp.grid.beta_k, q));

    double brute = 1e300;
    const ChannelSet& ch = exp.channels;
    for (int k = 0; k < ch.num_subcarriers(); ++k) {
      const CVector s = reflect_coeffs(p, exp.grid.beta_k[k]);
      for (const auto& hu : ch.hr_user[k]) {
        const double su = snr(effective_channel(hu, s, ch.ht[k]), q, ch.noise_power);
        for (const auto& he : ch.hr_eve[k]) {
          const double se = snr(effective_channel(he, s, ch.ht[k]), q, ch.noise_power);
          brute = std::min(brute, (1.0 + su) / (1.0 + se));
        }
      }
    }
    worst = std::max(worst, std::abs(fast - brute) / brute);
  }
  return {worst <= 1e-12, "max relative error " + num(worst) + " over 20 scenes"};
}

Outcome beamformer_optimality() {
  const ScenarioConfig c = desk_config();
  const CVector q = beamformer_lemma1(c);
  const CVector a = steering_bs(c.ris_position, c.carrier_hz, c.bs_array, c.bs_position);
  const double best = std::abs(a.dot(q));
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = -1e300;
  for (int t = 0; t < 1000; ++t) {
    CVector r = random_cvector(rng, static_cast<int>(q.size()));
    r *= std::sqrt(c.tx_power_watt() * u(rng)) / r.norm();
    worst = std::max(worst, std::abs(a.dot(r)) / best - 1.0);
  }
  const double power_err = std::abs(q.squaredNorm() / c.tx_power_watt() - 1.0);
  return {worst <= 1e-9 && power_err <= 1e-12,
          "best random excess " + num(worst) + ", power error " + num(power_err)};
}

Outcome rank_one_convergence() {
  std::string detail;
  bool ok = true;
  for (int n : {8, 16, 32}) {
    ScenarioConfig c = desk_config();
    c.ris_array.counts = {n};
    c.num_subcarriers = 5;
    c.user_resolution = {2, 2, 1};
    c.eve_resolution = {2, 2, 1};
    c.ris_array.spacing_m = 0.0;
    validate_scenario(c);
    const auto t0 = std::chrono::steady_clock::now();
    const Experiment exp = make_experiment(c);
    const DesignResult r = run_algorithm1(exp, beamformer_lemma1(c));
    const double t = seconds_since(t0);
    // residual after the last inner iteration of each outer pass
    double res = 0.0;
    for (const auto& e : r.log) {
      if (e.inner == c.solver.max_inner) res = std::max(res, e.rank_residual);
    }
    ok = ok && res <= 1e-3 && t < 300.0;
    detail += "N=" + std::to_string(n) + " residual " + num(res) + " (" + num(t) + " s) ";
  }
  return {ok, detail};
}

struct DeskRuns {
  DesignResult proposed, bench1, bench2, bench3;
  SubcarrierGrid grid;
};

const DeskRuns& desk_runs() {
  static const DeskRuns runs = [] {
    const ScenarioConfig c = desk_config();
    const Experiment exp = make_experiment(c);
    const CVector q = beamformer_lemma1(c);
    DeskRuns r;
    r.proposed = run_algorithm1(exp, q);
    r.bench1 = benchmark1(exp, q);
    r.bench2 = benchmark2(exp, q);
    r.bench3 = benchmark3(exp, q);
    r.grid = exp.grid;
    return r;
  }();
  return runs;
}

Outcome benchmark_ordering() {
  const auto t0 = std::chrono::steady_clock::now();
  const DeskRuns& r = desk_runs();
  const double p = r.proposed.alpha;
  const bool ok = p >= r.bench1.alpha && p >= r.bench2.alpha && p >= r.bench3.alpha;
  return {ok, "alpha proposed " + num(p) + ", bench1 " + num(r.bench1.alpha) + ", bench2 " +
                  num(r.bench2.alpha) + ", bench3 " + num(r.bench3.alpha) + " (" +
                  num(seconds_since(t0)) + " s)"};
}

Outcome squint_trends() {
  const double fc = 60e9;
  const double bw = 8e9;
  const int samples = 401;
  const SquintCurve c8 = snr_ratio_curve(8, fc, bw, samples);
  const SquintCurve c100 = snr_ratio_curve(100, fc, bw, samples);
  const int mid = samples / 2;
  const bool a = c8.ratio_db[mid] == 0.0 && c100.ratio_db[mid] == 0.0;
  bool b = true;
  for (int i = 0; i < samples; ++i) {
    if (i != mid && c100.ratio_db[i] > c8.ratio_db[i]) b = false;
  }
  const SquintCurve m = min_ratio_vs_elements({8, 20, 60, 100, 256}, fc, bw, samples);
  bool c = true;
  for (std::size_t i = 1; i < m.ratio_db.size(); ++i) {
    if (m.ratio_db[i] > m.ratio_db[i - 1]) c = false;
  }
  std::string mins;
  for (double v : m.ratio_db) mins += num(v) + " ";
  return {a && b && c, std::string("center 0 dB ") + (a ? "yes" : "no") + ", N=100 below N=8 " +
                           (b ? "yes" : "no") + ", min ratio dB " + mins};
}

Outcome frequency_materiality() {
  const DeskRuns& r = desk_runs();
  const auto& w = r.bench2.report.worst_per_k;
  const double center = w[w.size() / 2];
  const double edge = std::max(w.front(), w.back());
  return {edge <= center - 0.2,
          "bench2 worst SR center " + num(center) + ", band edge " + num(edge) + " bits"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  cli::RunManifest m;
  m.scenario = kData + "/scenarios/tiny.json";
  const fs::path a = fs::temp_directory_path() / "lcris_accept_det_a";
  const fs::path b = fs::temp_directory_path() / "lcris_accept_det_b";
  fs::remove_all(a);
  fs::remove_all(b);
  m.output_dir = a;
  const int ra = cli::cmd_design(m);
  m.output_dir = b;
  const int rb = cli::cmd_design(m);
  if (ra != 0 || rb != 0) return {false, "cmd_design exit codes " + std::to_string(ra) + "/" + std::to_string(rb)};
  int files = 0;
  int differ = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    ++files;
    const fs::path other = b / e.path().filename();
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) ++differ;
  }
  int files_b = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(b)) ++files_b;
  return {differ == 0 && files == files_b && files > 0,
          std::to_string(files) + " files, " + std::to_string(differ) + " differ"};
}

double re_tr(const CMatrix& a, const CMatrix& s) { return (a * s).trace().real(); }

// Grid search over |z| <= 1 for S = [1 z; z* 1], zooming around the best feasible point.
// With A Hermitian, Re tr(A S) = A00 + A11 + 2 Re(A10 z).
double grid_oracle(const sdp::Problem& p) {
  struct Lin {
    double c, gx, gy, rhs;
  };
  auto lin = [](const CMatrix& a, double rhs) {
    return Lin{a(0, 0).real() + a(1, 1).real(), 2.0 * a(1, 0).real(), -2.0 * a(1, 0).imag(), rhs};
  };
  const Lin obj = lin(p.C, 0.0);
  std::vector<Lin> cons;
  for (const auto& in : p.inequalities) cons.push_back(lin(in.B, in.rhs));
  auto value = [&](double x, double y, bool& feasible) {
    feasible = x * x + y * y <= 1.0;
    for (const auto& l : cons) feasible = feasible && l.c + l.gx * x + l.gy * y >= l.rhs;
    return obj.c + obj.gx * x + obj.gy * y;
  };
  double cx = 0.0;
  double cy = 0.0;
  double half = 1.0;
  double best = -1e300;
  const int g = 2000;
  for (int level = 0; level < 12; ++level) {
    double bx = cx;
    double by = cy;
    for (int i = 0; i <= g; ++i) {
      for (int j = 0; j <= g; ++j) {
        const double x = cx - half + 2.0 * half * i / g;
        const double y = cy - half + 2.0 * half * j / g;
        bool ok = false;
        const double v = value(x, y, ok);
        if (ok && v > best) {
          best = v;
          bx = x;
          by = y;
        }
      }
    }
    cx = bx;
    cy = by;
    // near a curved boundary the best point can sit sqrt(2h) off the optimum tangentially
    half = std::max(0.25 * half, 2.0 * std::sqrt(4.0 * half / g));
  }
  return best;
}

Outcome sdp_oracle() {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> count(0, 2);
  double worst = 0.0;
  int not_optimal = 0;
  for (int t = 0; t < 50; ++t) {
    sdp::Problem p;
    p.dim = 2;
    p.C = random_hermitian(rng, 2);
    // constraints are satisfied with slack at a random interior point
    CMatrix S0 = CMatrix::Identity(2, 2);
    S0(0, 1) = std::polar(0.6 * u(rng), kTwoPi * u(rng));
    S0(1, 0) = std::conj(S0(0, 1));
    const int m = count(rng);
    for (int i = 0; i < m; ++i) {
      sdp::Inequality in;
      in.B = random_hermitian(rng, 2);
      in.rhs = re_tr(in.B, S0) - (0.05 + 0.3 * u(rng));
      p.inequalities.push_back(in);
    }
    const sdp::Solution sol = sdp::solve(p);
    if (sol.status != sdp::Status::Optimal) {
      ++not_optimal;
      continue;
    }
    worst = std::max(worst, std::abs(sol.objective - grid_oracle(p)));
  }
  return {not_optimal == 0 && worst <= 1e-4,
          "max |objective - oracle| " + num(worst) + ", non-optimal " + std::to_string(not_optimal)};
}

Outcome full_scale() {
  const auto t0 = std::chrono::steady_clock::now();
  const ScenarioConfig c = load_scenario(kData + "/scenarios/full.json");
  const Experiment exp = make_experiment(c);
  const DesignResult r = run_algorithm1(exp, beamformer_lemma1(c));
  return {std::abs(r.alpha - 2.0) <= 0.5,
          "N=100 alpha " + num(r.alpha) + " bits/symbol (" + num(seconds_since(t0)) + " s)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"lemma2 property suite", lemma2_suite},
      {"quadratic-form equivalence", quad_form_equivalence},
      {"gamma closed form", gamma_closed_form},
      {"closed-form beamformer", beamformer_optimality},
      {"rank-one penalty convergence", rank_one_convergence},
      {"benchmark ordering", benchmark_ordering},
      {"squint trends", squint_trends},
      {"frequency-dependence materiality", frequency_materiality},
      {"determinism", determinism},
      {"sdp oracle equivalence", sdp_oracle},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first
              << "): " << o.detail << std::endl;
  }
  const char* full = std::getenv("LCRIS_FULL_SCALE");
  if (full != nullptr && std::string(full) == "1") {
    Outcome o;
    try {
      o = full_scale();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " full-scale reproduction: " << o.detail << std::endl;
  } else {
    std::cout << "SKIP full-scale reproduction (set LCRIS_FULL_SCALE=1)" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
