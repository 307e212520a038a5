// One line per acceptance criterion; exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "qleak/channels.hpp"
#include "qleak/error.hpp"
#include "qleak/leakage.hpp"
#include "qleak/sdp.hpp"
#include "qleak/vqml.hpp"

#ifdef QLEAK_HAVE_CLI
#include "cli.hpp"
#endif

namespace qleak {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Notes {
 public:
  void Fail(const std::string& what) {
    ++failures_;
    if (failures_ <= 6) text_ << (failures_ > 1 ? "; " : "") << what;
  }
  void Info(const std::string& what) { info_ << (info_.tellp() > 0 ? ", " : "") << what; }
  Outcome Done() const {
    std::ostringstream os;
    os << info_.str();
    if (failures_) os << " | " << failures_ << " failure(s): " << text_.str();
    return {failures_ == 0, os.str()};
  }

 private:
  int failures_ = 0;
  std::ostringstream text_, info_;
};

std::string Num(double v, int precision = 3) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

Ensemble RandomEnsemble(int d, int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> rank(1, d);
  std::vector<DensityOperator> states;
  for (int i = 0; i < n; ++i) states.push_back(RandomDensity(d, rank(rng), rng()));
  return Ensemble(std::move(states));
}

Outcome BasisEncodingExample() {
  Notes n;
  for (int q = 1; q <= 3; ++q) {
    const Ensemble e = BasisEncoding(q);
    const double b = BarycentricLeakage(e).value;
    const double m = MaxLeakage(e).value;
    const double r = PairwiseLeakage(e).value;
    if (std::abs(b - q) > 1e-6) n.Fail("n=" + std::to_string(q) + " B=" + Num(b, 10));
    if (std::abs(m - q) > 1e-6) n.Fail("n=" + std::to_string(q) + " Q=" + Num(m, 10));
    if (!(std::isinf(r) && r > 0)) n.Fail("n=" + std::to_string(q) + " R=" + Num(r));
  }
  n.Info("n = 1, 2, 3: B = Q = n, R = inf");
  return n.Done();
}

Outcome InequalityChain() {
  Notes n;
  std::mt19937_64 rng(2024);
  const double slack = 1e-5;
  for (int i = 0; i < 200; ++i) {
    const int d = 2 + i % 3;
    const int m = 2 + (i / 3) % 4;
    const Ensemble e = RandomEnsemble(d, m, rng);
    ChainOptions o;
    o.restarts = 4;
    o.seed = i;
    o.slack = slack;
    try {
      const ChainReport r = InequalityChainReport(e, o);
      const std::string at = "ensemble " + std::to_string(i) + ": ";
      if (r.accessible_lower > r.holevo + slack) n.Fail(at + "I_acc_lb > chi");
      if (r.holevo > r.barycentric.value + slack) n.Fail(at + "chi > B");
      if (r.barycentric.value > r.pairwise.value + slack) n.Fail(at + "B > R");
      if (r.srm_leakage > r.maximal.value + slack) n.Fail(at + "SRM > Q");
      if (r.maximal.value > r.barycentric.value + slack) n.Fail(at + "Q > B");
      if (r.maximal.status != SdpStatus::kOptimal || r.barycentric.status != SdpStatus::kOptimal) {
        n.Fail(at + "solver not converged");
      }
    } catch (const Error& ex) {
      n.Fail("ensemble " + std::to_string(i) + ": " + ex.what());
    }
  }
  n.Info("200 ensembles, d in {2,3,4}, 2..5 states, slack 1e-5");
  return n.Done();
}

Outcome Axioms() {
  Notes n;
  std::mt19937_64 rng(7);
  double worst_pos = 0.0, worst_indep = 0.0, worst_unitary = 0.0, worst_dpi = -kInf;
  for (int i = 0; i < 10; ++i) {
    const int d = 2 + i % 3;
    const Ensemble e = RandomEnsemble(d, 2 + i % 3, rng);
    const LeakageCertificate b = BarycentricLeakage(e, 1e-9);
    const double r = PairwiseLeakage(e).value;
    worst_pos = std::min({worst_pos, b.value, r});

    const DensityOperator s = RandomDensity(d, 1 + i % d, rng());
    const Ensemble same({s, s, s});
    worst_indep = std::max({worst_indep, std::abs(BarycentricLeakage(same, 1e-9).value),
                            std::abs(PairwiseLeakage(same).value)});

    const CMatrix u = RandomUnitary(d, rng());
    const Ensemble ue = e.Conjugate(u);
    const double db = std::abs(BarycentricLeakage(ue, 1e-9).value - b.value);
    const double dr = std::isinf(r) ? (std::isinf(PairwiseLeakage(ue).value) ? 0.0 : kInf)
                                    : std::abs(PairwiseLeakage(ue).value - r);
    worst_unitary = std::max({worst_unitary, db, dr});
  }
  for (int c = 0; c < 50; ++c) {
    const int d = 2 + c % 3;
    const int out = 2 + (c / 3) % 3;
    const Ensemble e = RandomEnsemble(d, 3, rng);
    const QuantumChannel ch = RandomChannel(d, out, 1 + (d + out) % 3 + (out < d ? 1 : 0), rng());
    const LeakageCertificate b = BarycentricLeakage(e, 1e-9);
    const LeakageCertificate bo = BarycentricLeakage(ch.Apply(e), 1e-9);
    const double r = PairwiseLeakage(e).value, ro = PairwiseLeakage(ch.Apply(e)).value;
    const double inc_b = bo.value - b.value - b.gap - bo.gap;
    const double inc_r = std::isinf(r) ? -kInf : ro - r;
    worst_dpi = std::max({worst_dpi, inc_b, inc_r});
  }
  if (worst_pos < -1e-9) n.Fail("negative leakage " + Num(worst_pos));
  if (worst_indep > 1e-8) n.Fail("identical states leak " + Num(worst_indep));
  if (worst_unitary > 1e-7) n.Fail("unitary change " + Num(worst_unitary));
  if (worst_dpi > 1e-7) n.Fail("post-processing increase " + Num(worst_dpi));
  n.Info("min value " + Num(worst_pos) + ", identical " + Num(worst_indep) + ", unitary " +
         Num(worst_unitary) + ", worst DPI excess " + Num(worst_dpi) + " over 50 channels");
  return n.Done();
}

// min sum c  s.t.  sum_x c_x a(i, x) >= m_i,  c >= 0, by enumerating vertices.
double DiagonalBarycentricOracle(const Eigen::MatrixXd& a, const Eigen::VectorXd& m) {
  const int rows = static_cast<int>(a.rows()), n = static_cast<int>(a.cols());
  const int total = rows + n;
  double best = kInf;
  for (unsigned mask = 0; mask < (1u << total); ++mask) {
    if (__builtin_popcount(mask) != n) continue;
    Eigen::MatrixXd lhs(n, n);
    Eigen::VectorXd rhs(n);
    int k = 0;
    for (int t = 0; t < total; ++t) {
      if (!(mask >> t & 1)) continue;
      if (t < rows) {
        lhs.row(k) = a.row(t);
        rhs[k++] = m[t];
      } else {
        lhs.row(k) = Eigen::RowVectorXd::Unit(n, t - rows);
        rhs[k++] = 0.0;
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(lhs);
    if (lu.rank() < n) continue;
    const Eigen::VectorXd c = lu.solve(rhs);
    if (c.minCoeff() < -1e-12 || ((a * c - m).array() < -1e-12).any()) continue;
    best = std::min(best, c.sum());
  }
  return best;
}

Outcome SdpCertification() {
  Notes n;
  std::mt19937_64 rng(99);
  int optimal = 0;
  double worst_gap = 0.0;
  for (int i = 0; i < 40; ++i) {
    const int d = 2 + i % 5;
    const Ensemble e = RandomEnsemble(d, 2 + i % 4, rng);
    for (LmiForm form : {LmiForm::kBarycentricWeights, LmiForm::kDominatingOperator}) {
      const SdpSolution s = Solve(LmiProgram(form, e.states()));
      if (s.status != SdpStatus::kOptimal) continue;
      ++optimal;
      worst_gap = std::max(worst_gap, s.relative_gap());
      if (s.relative_gap() > 1e-6) n.Fail("instance " + std::to_string(i) + " gap " + Num(s.relative_gap()));
    }
  }
  if (optimal < 70) n.Fail("only " + std::to_string(optimal) + " of 80 solves optimal");
  double worst_diag = 0.0;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const int d = 2 + i % 3, m = 2 + (i / 3) % 3;
    Eigen::MatrixXd a(d, m);
    std::vector<DensityOperator> states;
    for (int x = 0; x < m; ++x) {
      std::vector<double> diag(d);
      double sum = 0.0;
      for (double& v : diag) sum += (v = (u(rng) < 0.2 ? 0.0 : u(rng)));
      if (sum == 0.0) diag[0] = sum = 1.0;
      for (int k = 0; k < d; ++k) a(k, x) = diag[k] /= sum;
      states.emplace_back(HermitianOperator::Diagonal(diag));
    }
    const Eigen::VectorXd top = a.rowwise().maxCoeff();
    const SdpSolution p2 = Solve(LmiProgram(LmiForm::kDominatingOperator, states), {.gap_tol = 1e-9});
    const SdpSolution p1 = Solve(LmiProgram(LmiForm::kBarycentricWeights, states), {.gap_tol = 1e-9});
    const double e2 = std::abs(p2.value - top.sum());
    const double e1 = std::abs(p1.value - DiagonalBarycentricOracle(a, top));
    worst_diag = std::max({worst_diag, e1, e2});
    if (e1 > 1e-8 || e2 > 1e-8) {
      n.Fail("diagonal instance " + std::to_string(i) + " P1 err " + Num(e1) + " P2 err " + Num(e2));
    }
  }
  n.Info(std::to_string(optimal) + "/80 random solves optimal, worst gap " + Num(worst_gap) +
         ", worst diagonal error " + Num(worst_diag) + " over 30 instances");
  return n.Done();
}

Outcome DepolarizingBounds() {
  Notes n;
  std::mt19937_64 rng(5);
  const std::vector<double> grid = {0.1, 0.25, 0.5, 0.75, 0.9, 1.0};
  int checks = 0;
  for (int k = 1; k <= 3; ++k) {
    const int d = 1 << k;
    std::vector<Ensemble> ensembles = {BasisEncoding(k), RandomEnsemble(d, 3, rng),
                                       RandomEnsemble(d, 4, rng)};
    for (double p : grid) {
      const double bound = LeakageBoundDepolarizing(p, d);
      for (int local = 0; local < 2; ++local) {
        const QuantumChannel ch = local ? DepolarizingLocal(p, k) : DepolarizingGlobal(p, d);
        for (std::size_t i = 0; i < ensembles.size(); ++i) {
          const Ensemble out = ch.Apply(ensembles[i]);
          const double b = BarycentricLeakage(out).value;
          const double r = PairwiseLeakage(out).value;
          ++checks;
          const std::string at = std::string(local ? "local" : "global") + " d=" +
                                 std::to_string(d) + " p=" + Num(p) + " ensemble " +
                                 std::to_string(i) + ": ";
          if (b > bound + 1e-6) n.Fail(at + "B " + Num(b, 7) + " > " + Num(bound, 7));
          if (r > bound + 1e-6) n.Fail(at + "R " + Num(r, 7) + " > " + Num(bound, 7));
          if (p == 1.0 && (std::abs(b) > 1e-8 || std::abs(r) > 1e-8)) {
            n.Fail(at + "nonzero leakage at p = 1");
          }
        }
      }
    }
  }
  n.Info(std::to_string(checks) + " channel/ensemble cases");
  return n.Done();
}

Outcome DegradationBound() {
  Notes n;
  const std::vector<double> grid = {0.1, 0.25, 0.5, 0.75, 0.9, 1.0};
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  double worst = -kInf;
  for (int i = 0; i < 20; ++i) {
    const int k = 1 + i % 3;
    const bool basis = i % 2 == 0;
    const Povm classifier = i % 4 < 2 ? BasisClassifier(k) : ParityClassifier(k);
    const VariationalModel m = VariationalModel::Random(
        k, 1 + i % 3, basis ? EncoderKind::kBasis : EncoderKind::kAngle, classifier, 500 + i);
    std::vector<Input> inputs;
    if (basis) {
      for (int x = 0; x < m.dim(); ++x) inputs.push_back({static_cast<double>(x)});
    } else {
      for (int x = 0; x < 6; ++x) {
        Input in;
        for (int j = 0; j < k; ++j) in.push_back(angle(rng));
        inputs.push_back(in);
      }
    }
    for (double p : grid) {
      const double g = PerformanceDegradation(m, inputs, DepolarizingGlobal(p, m.dim()));
      worst = std::max(worst, g - 2.0 * p);
      if (g > 2.0 * p + 1e-9) n.Fail("model " + std::to_string(i) + " p=" + Num(p) + " gamma " + Num(g));
    }
  }
  n.Info("20 models, worst gamma - 2p = " + Num(worst));
  return n.Done();
}

Outcome TradeoffCurveRows() {
  Notes n;
  const std::vector<double> grid = {0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0};
#ifdef QLEAK_HAVE_CLI
  std::ostringstream out, err;
  const int status = cli::Run({"tradeoff", "--d", "2", "--p-grid", "0.05,0.1,0.25,0.5,0.75,0.9,1"},
                             out, err);
  if (status != 0) {
    n.Fail("tradeoff exited " + std::to_string(status) + ": " + err.str());
    return n.Done();
  }
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  if (line != "p,gamma_actual,gamma_bound,leakage_B_bits,leakage_R_bits,leakage_bound_bits") {
    n.Fail("header " + line);
  }
  std::size_t row = 0;
  while (std::getline(in, line)) {
    std::vector<double> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell == "inf" ? kInf : std::stod(cell));
    if (f.size() != 6 || row >= grid.size()) {
      n.Fail("malformed row " + line);
      break;
    }
    const double p = grid[row++];
    char want[32];
    std::snprintf(want, sizeof want, "%.6f", std::log2(1.0 + 2.0 * (1.0 - p) * 2.0 / p));
    if (line.substr(line.rfind(',') + 1) != want) n.Fail("p=" + Num(p) + " bound " + line);
    const double via_gamma = std::log2((1.0 - 4.0) + 8.0 / f[2]);
    if (std::abs(via_gamma - f[5]) > 1e-6) n.Fail("p=" + Num(p) + " bound vs gamma " + line);
    if (f[3] > f[5] + 1e-6 || f[4] > f[5] + 1e-6) n.Fail("p=" + Num(p) + " leakage above bound");
    if (p == 0.5 && line.find(",2.321928") == std::string::npos) n.Fail("p=0.5 row " + line);
  }
  if (row != grid.size()) n.Fail("expected " + std::to_string(grid.size()) + " rows");
  n.Info("qleak tradeoff --d 2: " + std::to_string(row) + " rows, p = 0.5 bound 2.321928");
#else
  const VariationalModel m(1, EncoderKind::kBasis, {}, BasisClassifier(1));
  const auto rows = TradeoffCurve(m, {{0.0}, {1.0}}, ProbVector::Uniform(2), grid);
  for (const TradeoffRow& r : rows) {
    const double want = std::log2(1.0 + 2.0 * (1.0 - r.p) * 2.0 / r.p);
    if (std::abs(r.leakage_bound - want) > 1e-9) n.Fail("p=" + Num(r.p));
  }
  n.Info("library trade-off rows (tool not built)");
#endif
  return n.Done();
}

Outcome MaximalLeakageValidation() {
  Notes n;
  std::mt19937_64 rng(77);
  double worst_below = 0.0, worst_above = -kInf;
  for (int i = 0; i < 100; ++i) {
    const Ensemble e = RandomEnsemble(2, 2 + i % 4, rng);
    std::vector<oracle::Mat> mats;
    for (const auto& r : e.states()) mats.push_back(r.matrix());
    const double q = MaxLeakage(e, 1e-9).value;
    const double grid = oracle::QubitProjectiveLeakage(mats, 10000, nullptr);
    const std::vector<oracle::Mat> start(
        mats.size(), oracle::Mat::Identity(2, 2) / static_cast<double>(mats.size()));
    const double ascent = oracle::PovmFixedPoint(mats, start, 500);
    const double best = std::max(grid, ascent);
    worst_below = std::max(worst_below, q - best);
    worst_above = std::max(worst_above, best - q);
    if (q - best > 1e-3) n.Fail("ensemble " + std::to_string(i) + " POVM below by " + Num(q - best));
    if (best > q + 1e-9) n.Fail("ensemble " + std::to_string(i) + " POVM above by " + Num(best - q));
  }
  n.Info("100 qubit ensembles, max(P2 - best POVM) = " + Num(worst_below) +
         ", max(best POVM - P2) = " + Num(worst_above));
  return n.Done();
}

Outcome DivergenceConvergence() {
  Notes n;
  std::mt19937_64 rng(13);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int d = 2 + i % 3;
    const DensityOperator rho = RandomDensity(d, 1 + i % d, rng());
    const DensityOperator sigma = RandomDensity(d, d, rng());
    const double a = SandwichedRenyi(rho, sigma.op(), RenyiOrder::Finite(1000.0));
    const double inf = SandwichedRenyi(rho, sigma.op(), RenyiOrder::Infinity());
    worst = std::max(worst, std::abs(a - inf));
    if (!(std::abs(a - inf) <= 1e-2)) n.Fail("pair " + std::to_string(i) + " diff " + Num(a - inf));
  }
  n.Info("50 pairs, max |D~_1000 - D~_inf| = " + Num(worst) + " bits");
  return n.Done();
}

}  // namespace
}  // namespace qleak

int main() {
  using Clock = std::chrono::steady_clock;
  struct Criterion {
    int id;
    const char* name;
    std::function<qleak::Outcome()> run;
    double budget_s;
  };
  const std::vector<Criterion> criteria = {
      {1, "basis-encoding example", qleak::BasisEncodingExample, 10.0},
      {2, "inequality chain", qleak::InequalityChain, 300.0},
      {3, "axiom suite", qleak::Axioms, 0.0},
      {4, "SDP certification", qleak::SdpCertification, 0.0},
      {5, "depolarizing bounds", qleak::DepolarizingBounds, 0.0},
      {6, "degradation bound", qleak::DegradationBound, 0.0},
      {7, "trade-off curve", qleak::TradeoffCurveRows, 0.0},
      {8, "maximal leakage vs POVM search", qleak::MaximalLeakageValidation, 0.0},
      {9, "sandwiched divergence convergence", qleak::DivergenceConvergence, 0.0},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = Clock::now();
    qleak::Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (c.budget_s > 0.0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += " | over the " + qleak::Num(c.budget_s) + " s budget";
    }
    failed += !o.pass;
    std::printf("criterion %d %s: %s (%.1f s) %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed ? 1 : 0;
}
