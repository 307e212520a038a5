#include "io.hpp"

#include <cmath>
#include <fstream>

#include "qleak/error.hpp"

namespace qleak::cli {
namespace {

[[noreturn]] void Fail(const std::string& field, const std::string& what) {
  throw ValidationError(field + ": " + what);
}

const Json& Require(const Json& j, const std::string& key, const std::string& field) {
  if (!j.is_object()) Fail(field, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) Fail(field, "missing \"" + key + "\"");
  return *it;
}

double Number(const Json& j, const std::string& field) {
  if (!j.is_number()) Fail(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) Fail(field, "not finite");
  return v;
}

int Integer(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) Fail(field, "expected an integer");
  return j.get<int>();
}

Complex Entry(const Json& j, const std::string& field) {
  if (j.is_number()) return Number(j, field);
  if (!j.is_array() || j.size() != 2) Fail(field, "expected a number or an [re, im] pair");
  return {Number(j[0], field + "[0]"), Number(j[1], field + "[1]")};
}

Povm ParsePovm(const Json& j, int qubits, const std::string& field) {
  if (j.is_string()) {
    const std::string kind = j.get<std::string>();
    if (kind == "basis") return BasisClassifier(qubits);
    if (kind == "parity") return ParityClassifier(qubits);
    Fail(field, "unknown classifier \"" + kind + "\" (basis, parity)");
  }
  if (!j.is_array() || j.empty()) Fail(field, "expected \"basis\", \"parity\" or a list of matrices");
  const int d = 1 << qubits;
  std::vector<HermitianOperator> elems;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    try {
      elems.emplace_back(ParseMatrix(j[i], f, d, d));
    } catch (const ValidationError& e) {
      if (std::string(e.what()).rfind(f, 0) == 0) throw;
      Fail(f, e.what());
    }
  }
  try {
    return Povm(std::move(elems));
  } catch (const ValidationError& e) {
    Fail(field, e.what());
  }
}

}  // namespace

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail("--input", "cannot open \"" + path + "\"");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    Fail("--input", std::string("invalid JSON: ") + e.what());
  }
}

CMatrix ParseMatrix(const Json& j, const std::string& field, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    Fail(field, "expected " + std::to_string(rows) + " rows");
  }
  CMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const std::string fr = field + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols) {
      Fail(fr, "expected " + std::to_string(cols) + " entries");
    }
    for (int c = 0; c < cols; ++c) m(r, c) = Entry(j[r][c], fr + "[" + std::to_string(c) + "]");
  }
  return m;
}

std::vector<double> ParseDoubles(const Json& j, const std::string& field) {
  if (!j.is_array()) Fail(field, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(Number(j[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Ensemble ParseEnsemble(const Json& j, const std::string& field) {
  const int d = Integer(Require(j, "dimension", field), field + ".dimension");
  if (d < 1 || d > kMaxDim) Fail(field + ".dimension", "must be in 1..64");
  const Json& states = Require(j, "states", field);
  if (!states.is_array() || states.empty()) Fail(field + ".states", "expected a nonempty list");
  std::vector<DensityOperator> rho;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string f = field + ".states[" + std::to_string(i) + "]";
    const CMatrix m = ParseMatrix(states[i], f, d, d);
    try {
      rho.emplace_back(HermitianOperator(m));
    } catch (const ValidationError& e) {
      Fail(f, e.what());
    }
  }
  auto prior = j.find("prior");
  if (prior == j.end()) return Ensemble(std::move(rho));
  try {
    return Ensemble(ProbVector(ParseDoubles(*prior, field + ".prior")), std::move(rho));
  } catch (const ValidationError& e) {
    if (std::string(e.what()).rfind(field, 0) == 0) throw;
    Fail(field + ".prior", e.what());
  }
}

QuantumChannel ParseChannel(const Json& j, const std::string& field) {
  const Json& kind_j = Require(j, "kind", field);
  if (!kind_j.is_string()) Fail(field + ".kind", "expected a string");
  const std::string kind = kind_j.get<std::string>();
  const Json& params = Require(j, "params", field);
  const std::string pf = field + ".params";
  try {
    if (kind == "depolarizing_global") {
      return DepolarizingGlobal(Number(Require(params, "p", pf), pf + ".p"),
                                Integer(Require(params, "dim", pf), pf + ".dim"));
    }
    if (kind == "depolarizing_local") {
      return DepolarizingLocal(Number(Require(params, "p", pf), pf + ".p"),
                               Integer(Require(params, "qubits", pf), pf + ".qubits"));
    }
    if (kind == "kraus") {
      const Json& ops = Require(params, "operators", pf);
      if (!ops.is_array() || ops.empty() || !ops[0].is_array() || ops[0].empty() ||
          !ops[0][0].is_array()) {
        Fail(pf + ".operators", "expected a nonempty list of matrices");
      }
      const int rows = static_cast<int>(ops[0].size());
      const int cols = static_cast<int>(ops[0][0].size());
      std::vector<CMatrix> kraus;
      for (std::size_t i = 0; i < ops.size(); ++i) {
        kraus.push_back(ParseMatrix(ops[i], pf + ".operators[" + std::to_string(i) + "]", rows, cols));
      }
      return QuantumChannel(std::move(kraus));
    }
  } catch (const ValidationError& e) {
    if (std::string(e.what()).rfind(field, 0) == 0) throw;
    Fail(pf, e.what());
  }
  Fail(field + ".kind",
       "unknown channel \"" + kind + "\" (depolarizing_global, depolarizing_local, kraus)");
}

VariationalModel ParseModel(const Json& j, const std::string& field) {
  const int k = Integer(Require(j, "qubits", field), field + ".qubits");
  if (k < 1 || k > 6) Fail(field + ".qubits", "must be in 1..6");
  const Json& enc = Require(j, "encoder", field);
  EncoderKind encoder;
  if (enc == "basis") {
    encoder = EncoderKind::kBasis;
  } else if (enc == "angle") {
    encoder = EncoderKind::kAngle;
  } else {
    Fail(field + ".encoder", "expected \"basis\" or \"angle\"");
  }
  std::vector<Layer> layers;
  if (auto it = j.find("layers"); it != j.end()) {
    if (!it->is_array()) Fail(field + ".layers", "expected a list");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string f = field + ".layers[" + std::to_string(i) + "]";
      Layer l{ParseDoubles(Require((*it)[i], "ry", f), f + ".ry"),
              ParseDoubles(Require((*it)[i], "rz", f), f + ".rz")};
      if (static_cast<int>(l.ry.size()) != k || static_cast<int>(l.rz.size()) != k) {
        Fail(f, "needs " + std::to_string(k) + " ry and rz angles");
      }
      layers.push_back(std::move(l));
    }
  }
  const Povm povm = ParsePovm(Require(j, "povm", field), k, field + ".povm");
  return VariationalModel(k, encoder, std::move(layers), povm);
}

Json MatrixToJson(const CMatrix& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Json EnsembleToJson(const Ensemble& e) {
  Json states = Json::array();
  for (const DensityOperator& r : e.states()) states.push_back(MatrixToJson(r.matrix()));
  return {{"dimension", e.dim()}, {"prior", e.prior().values()}, {"states", states}};
}

}  // namespace qleak::cli
