#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "io.hpp"
#include "qleak/error.hpp"

namespace qleak::cli {
namespace {

struct Options {
  std::string input;
  std::string output;
  double gap_tol = 1e-6;
  std::uint64_t seed = 0;
  int restarts = 32;
  std::vector<double> p_grid;
  int d = 2;
  std::string param = "p";
};

std::vector<double> DefaultGrid() {
  std::vector<double> g;
  for (int i = 1; i <= 10; ++i) g.push_back(i / 10.0);
  return g;
}

bool AnyUnconverged(std::initializer_list<const LeakageCertificate*> certs) {
  for (const LeakageCertificate* c : certs) {
    if (c->status != SdpStatus::kOptimal) return true;
  }
  return false;
}

std::string Witness(const LeakageWitness& w) {
  std::ostringstream os;
  if (const auto* pi = std::get_if<std::vector<double>>(&w)) {
    os << "pi=[";
    for (std::size_t i = 0; i < pi->size(); ++i) os << (i ? "," : "") << FormatBits((*pi)[i]);
    os << "]";
  } else if (const auto* y = std::get_if<HermitianOperator>(&w)) {
    os << "Y: tr=" << FormatBits(y->Trace());
  } else if (const auto* pair = std::get_if<std::pair<int, int>>(&w)) {
    os << "pair=(" << pair->first << "," << pair->second << ")";
  } else {
    os << "-";
  }
  return os.str();
}

void Row(std::ostream& os, const std::string& name, double value, double gap,
         const std::string& witness) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-10s %12s %12s  ", name.c_str(), FormatBits(value).c_str(),
                FormatBits(gap).c_str());
  os << buf << witness << "\n";
}

int Leakage(const Options& o, std::ostream& os) {
  const Ensemble e = ParseEnsemble(ReadJsonFile(o.input));
  ChainOptions co;
  co.gap_tol = o.gap_tol;
  co.restarts = o.restarts;
  co.seed = o.seed;
  const ChainReport r = InequalityChainReport(e, co);
  os << "ensemble: " << e.size() << " states, dimension " << e.dim() << "\n";
  char head[160];
  std::snprintf(head, sizeof head, "%-10s %12s %12s  %s\n", "quantity", "bits", "gap_bits",
                "witness");
  os << head;
  Row(os, "I_acc_lb", r.accessible_lower, 0.0, "povm with " + std::to_string(e.dim() * e.dim()) + " outcomes");
  Row(os, "chi", r.holevo, 0.0, "-");
  Row(os, "SRM", r.srm_leakage, 0.0, "square-root measurement");
  Row(os, "I~_inf", r.sandwiched_inf_mi.value, r.sandwiched_inf_mi.gap,
      Witness(r.sandwiched_inf_mi.witness));
  Row(os, "Q", r.maximal.value, r.maximal.gap, Witness(r.maximal.witness));
  Row(os, "B", r.barycentric.value, r.barycentric.gap, Witness(r.barycentric.witness));
  Row(os, "R", r.pairwise.value, r.pairwise.gap, Witness(r.pairwise.witness));
  const bool bad = AnyUnconverged({&r.maximal, &r.barycentric, &r.sandwiched_inf_mi});
  os << "status: " << (bad ? "not converged" : "optimal") << "\n";
  return bad ? kExitSolver : kExitOk;
}

Neighbouring ParseNeighbouring(const Json& j) {
  const std::string f = "neighbouring";
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ValidationError(f + ": expected {\"kind\": \"all\" | \"trace_distance\" | \"explicit\"}");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "all") return AllPairs{};
  if (kind == "trace_distance") {
    TraceDistanceNeighbours t;
    if (j.contains("kappa")) {
      if (!j["kappa"].is_number()) throw ValidationError(f + ".kappa: expected a number");
      t.kappa = j["kappa"].get<double>();
    }
    return t;
  }
  if (kind == "explicit") {
    ExplicitPairs e;
    if (!j.contains("pairs") || !j["pairs"].is_array()) {
      throw ValidationError(f + ".pairs: expected a list of [x, x'] pairs");
    }
    for (std::size_t i = 0; i < j["pairs"].size(); ++i) {
      const Json& p = j["pairs"][i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() ||
          !p[1].is_number_integer()) {
        throw ValidationError(f + ".pairs[" + std::to_string(i) + "]: expected [x, x']");
      }
      e.pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
    }
    return e;
  }
  throw ValidationError(f + ".kind: unknown \"" + kind + "\"");
}

int DpCheck(const Options& o, std::ostream& os) {
  const Json doc = ReadJsonFile(o.input);
  if (!doc.is_object()) throw ValidationError("input: expected an object");
  for (const char* key : {"ensemble", "channel", "epsilon_nats"}) {
    if (!doc.contains(key)) throw ValidationError(std::string("input: missing \"") + key + "\"");
  }
  const Ensemble e = ParseEnsemble(doc["ensemble"]);
  const QuantumChannel ch = ParseChannel(doc["channel"]);
  DpParams params;
  if (!doc["epsilon_nats"].is_number()) throw ValidationError("epsilon_nats: expected a number");
  params.epsilon_nats = doc["epsilon_nats"].get<double>();
  if (doc.contains("delta")) {
    if (!doc["delta"].is_number()) throw ValidationError("delta: expected a number");
    params.delta = doc["delta"].get<double>();
  }
  if (doc.contains("neighbouring")) params.neighbouring = ParseNeighbouring(doc["neighbouring"]);
  const DpReport r = VerifyDpOnEnsemble(ch, e, params);
  os << "epsilon = " << FormatBits(r.epsilon_nats) << " nats = " << FormatBits(r.threshold_bits)
     << " bits\n";
  os << "x,x_prime,divergence_bits,pass\n";
  for (const DpPairCheck& c : r.pairs) {
    os << c.x << "," << c.x_prime << "," << FormatBits(c.divergence_bits) << ","
       << (c.pass ? "yes" : "no") << "\n";
  }
  os << "max_divergence_bits = " << FormatBits(r.max_divergence_bits) << "\n";
  os << "result: " << (r.pass ? "pass" : "fail") << "\n";
  return kExitOk;
}

struct TradeoffInput {
  VariationalModel model;
  std::vector<Input> inputs;
  ProbVector prior;
};

TradeoffInput DefaultTradeoffInput(int d) {
  int k = 0;
  while ((1 << k) < d) ++k;
  if (d < 2 || (1 << k) != d || k > 6) {
    throw ValidationError("--d: must be a power of two in 2..64");
  }
  std::vector<Input> inputs;
  for (int i = 0; i < d; ++i) inputs.push_back({static_cast<double>(i)});
  return {VariationalModel(k, EncoderKind::kBasis, {}, BasisClassifier(k)), inputs,
          ProbVector::Uniform(d)};
}

TradeoffInput ParseTradeoffInput(const Json& doc) {
  if (!doc.is_object() || !doc.contains("model") || !doc.contains("inputs")) {
    throw ValidationError("input: expected {\"model\": .., \"inputs\": [..]}");
  }
  VariationalModel model = ParseModel(doc["model"]);
  const Json& in = doc["inputs"];
  if (!in.is_array() || in.empty()) throw ValidationError("inputs: expected a nonempty list");
  std::vector<Input> inputs;
  for (std::size_t i = 0; i < in.size(); ++i) {
    inputs.push_back(ParseDoubles(in[i], "inputs[" + std::to_string(i) + "]"));
  }
  ProbVector prior = ProbVector::Uniform(static_cast<int>(inputs.size()));
  if (doc.contains("prior")) {
    try {
      prior = ProbVector(ParseDoubles(doc["prior"], "prior"));
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("prior: ") + e.what());
    }
  }
  return {std::move(model), std::move(inputs), std::move(prior)};
}

int Tradeoff(const Options& o, bool d_given, std::ostream& os) {
  const TradeoffInput t =
      o.input.empty() ? DefaultTradeoffInput(o.d) : ParseTradeoffInput(ReadJsonFile(o.input));
  if (!o.input.empty() && d_given && t.model.dim() != o.d) {
    throw ValidationError("--d: model acts on dimension " + std::to_string(t.model.dim()));
  }
  const std::vector<double> grid = o.p_grid.empty() ? DefaultGrid() : o.p_grid;
  const auto rows = TradeoffCurve(t.model, t.inputs, t.prior, grid, o.gap_tol);
  os << "p,gamma_actual,gamma_bound,leakage_B_bits,leakage_R_bits,leakage_bound_bits\n";
  for (const TradeoffRow& r : rows) {
    os << FormatBits(r.p) << "," << FormatBits(r.gamma_actual) << "," << FormatBits(r.gamma_bound)
       << "," << FormatBits(r.leakage_b) << "," << FormatBits(r.leakage_r) << ","
       << FormatBits(r.leakage_bound) << "\n";
  }
  return kExitOk;
}

int Sweep(const Options& o, std::ostream& os) {
  const Json doc = ReadJsonFile(o.input);
  const bool wrapped = doc.is_object() && doc.contains("ensemble");
  const Ensemble e = ParseEnsemble(wrapped ? doc["ensemble"] : doc);
  std::string channel = "depolarizing_global";
  if (wrapped && doc.contains("channel")) {
    if (!doc["channel"].is_string()) throw ValidationError("channel: expected a string");
    channel = doc["channel"].get<std::string>();
    if (channel != "depolarizing_global" && channel != "depolarizing_local") {
      throw ValidationError("channel: expected depolarizing_global or depolarizing_local");
    }
  }
  int qubits = 0;
  if (channel == "depolarizing_local") {
    while ((1 << qubits) < e.dim()) ++qubits;
    if ((1 << qubits) != e.dim()) {
      throw ValidationError("channel: depolarizing_local needs a power-of-two dimension");
    }
  }
  bool bad = false;
  if (o.param == "p") {
    const std::vector<double> grid = o.p_grid.empty() ? DefaultGrid() : o.p_grid;
    std::vector<ChannelLeakage> rows(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const QuantumChannel ch = qubits ? DepolarizingLocal(grid[i], qubits)
                                       : DepolarizingGlobal(grid[i], e.dim());
      rows[i] = LeakageAfterChannel(ch, e, o.gap_tol);
    }
    os << "p,leakage_B_bits,leakage_R_bits,leakage_bound_bits,gap_bits\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const ChannelLeakage& r = rows[i];
      os << FormatBits(grid[i]) << "," << FormatBits(r.barycentric.value) << ","
         << FormatBits(r.pairwise.value) << "," << FormatBits(r.bound_bits.value_or(kInf)) << ","
         << FormatBits(r.barycentric.gap) << "\n";
      bad = bad || AnyUnconverged({&r.barycentric});
    }
  } else if (o.param == "gap_tol") {
    if (o.p_grid.empty()) throw ValidationError("--values: required for --param gap_tol");
    os << "gap_tol,leakage_B_bits,gap_B_bits,leakage_Q_bits,gap_Q_bits\n";
    for (double tol : o.p_grid) {
      const LeakageCertificate b = BarycentricLeakage(e, tol);
      const LeakageCertificate q = MaxLeakage(e, tol);
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", tol);
      os << buf << "," << FormatBits(b.value) << "," << FormatBits(b.gap) << ","
         << FormatBits(q.value) << "," << FormatBits(q.gap) << "\n";
      bad = bad || AnyUnconverged({&b, &q});
    }
  } else {
    throw ValidationError("--param: expected p or gap_tol");
  }
  return bad ? kExitSolver : kExitOk;
}

int Demo(const Options& o, std::ostream& os) {
  const Ensemble basis = BasisEncoding(2);
  const LeakageCertificate b = BarycentricLeakage(basis, o.gap_tol);
  const LeakageCertificate q = MaxLeakage(basis, o.gap_tol);
  const LeakageCertificate r = PairwiseLeakage(basis);
  os << "basis encoding, n = 2: B = " << FormatBits(b.value) << " bits, Q = " << FormatBits(q.value)
     << " bits, R = " << FormatBits(r.value) << "\n";
  const Ensemble diag({DensityOperator(HermitianOperator::Diagonal({0.75, 0.25})),
                       DensityOperator(HermitianOperator::Diagonal({0.25, 0.75}))});
  ChainOptions co;
  co.gap_tol = o.gap_tol;
  co.restarts = o.restarts;
  co.seed = o.seed;
  const ChainReport c = InequalityChainReport(diag, co);
  os << "diagonal pair: I_acc_lb = " << FormatBits(c.accessible_lower)
     << " bits, chi = " << FormatBits(c.holevo) << " bits, SRM = " << FormatBits(c.srm_leakage)
     << " bits, Q = " << FormatBits(c.maximal.value) << " bits, B = "
     << FormatBits(c.barycentric.value) << " bits, R = " << FormatBits(c.pairwise.value)
     << " bits\n";
  const bool bad = AnyUnconverged({&b, &q, &c.maximal, &c.barycentric});
  return bad ? kExitSolver : kExitOk;
}

void AddCommon(CLI::App* cmd, Options& o) {
  cmd->add_option("--output", o.output, "Write results to this file instead of stdout");
  cmd->add_option("--gap-tol", o.gap_tol, "Relative duality-gap tolerance")
      ->check(CLI::Range(1e-12, 1e-2));
}

}  // namespace

std::string FormatBits(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  // "-0.000000" for tiny negative round-off
  if (std::string(buf) == "-0.000000") return "0.000000";
  return buf;
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum information-leakage certificates"};
  app.name("qleak");
  app.require_subcommand(1);
  Options o;

  CLI::App* leakage = app.add_subcommand("leakage", "Leakage certificate table for an ensemble");
  leakage->add_option("--input", o.input, "Ensemble JSON")->required();
  leakage->add_option("--seed", o.seed, "Seed for the accessible-information search");
  leakage->add_option("--restarts", o.restarts, "Restarts of the accessible-information search")
      ->check(CLI::Range(1, 10000));
  AddCommon(leakage, o);

  CLI::App* dp = app.add_subcommand("dp-check", "Max-divergence check of (eps, 0)-DP on an ensemble");
  dp->add_option("--input", o.input, "JSON with ensemble, channel, epsilon_nats")->required();
  AddCommon(dp, o);

  CLI::App* tradeoff = app.add_subcommand("tradeoff", "Privacy-utility rows as CSV");
  tradeoff->add_option("--input", o.input, "JSON with model, inputs and optional prior");
  CLI::Option* d_opt = tradeoff->add_option("--d", o.d, "Dimension of the default basis model");
  tradeoff->add_option("--p-grid", o.p_grid, "Comma-separated depolarizing probabilities")
      ->delimiter(',');
  AddCommon(tradeoff, o);

  CLI::App* sweep = app.add_subcommand("sweep", "Leakage against one scalar parameter as CSV");
  sweep->add_option("--input", o.input, "Ensemble JSON, optionally {ensemble, channel}")
      ->required();
  sweep->add_option("--param", o.param, "p or gap_tol");
  sweep->add_option("--p-grid,--values", o.p_grid, "Comma-separated parameter values")
      ->delimiter(',');
  AddCommon(sweep, o);

  CLI::App* demo = app.add_subcommand("demo", "Built-in basis-encoding and diagonal-pair examples");
  demo->add_option("--seed", o.seed, "Seed for the accessible-information search");
  demo->add_option("--restarts", o.restarts, "Restarts of the accessible-information search")
      ->check(CLI::Range(1, 10000));
  AddCommon(demo, o);

  std::vector<const char*> argv = {"qleak"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  std::ostringstream buffer;
  int status = kExitOk;
  try {
    if (leakage->parsed()) status = Leakage(o, buffer);
    if (dp->parsed()) status = DpCheck(o, buffer);
    if (tradeoff->parsed()) status = Tradeoff(o, d_opt->count() > 0, buffer);
    if (sweep->parsed()) status = Sweep(o, buffer);
    if (demo->parsed()) status = Demo(o, buffer);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const ChainViolation& e) {
    err << "inequality violated: " << e.what() << "\n";
    return kExitChain;
  }

  if (o.output.empty()) {
    out << buffer.str();
  } else {
    std::ofstream f(o.output, std::ios::binary);
    if (!f) {
      err << "error: --output: cannot write \"" << o.output << "\"\n";
      return kExitValidation;
    }
    f << buffer.str();
  }
  if (status == kExitSolver) err << "warning: a solver stopped before reaching --gap-tol\n";
  return status;
}

}  // namespace qleak::cli
