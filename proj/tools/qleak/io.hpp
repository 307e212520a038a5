#pragma once

// JSON documents accepted by the qleak tool.
//
//   ensemble  {"dimension": d, "prior": [..], "states": [M, ..]}
//             M is d rows of d entries; an entry is a number or [re, im].
//             "prior" is optional (uniform).
//   channel   {"kind": "depolarizing_global", "params": {"p": .., "dim": d}}
//             {"kind": "depolarizing_local",  "params": {"p": .., "qubits": k}}
//             {"kind": "kraus", "params": {"operators": [K, ..]}}
//   model     {"qubits": k, "encoder": "basis" | "angle",
//              "layers": [{"ry": [..], "rz": [..]}, ..],
//              "povm": "basis" | "parity" | [M, ..]}
//
// Every parse error is a ValidationError naming the offending field.

#include <string>

#include "json.hpp"

#include "qleak/channels.hpp"
#include "qleak/leakage.hpp"
#include "qleak/vqml.hpp"

namespace qleak::cli {

using Json = nlohmann::json;

Json ReadJsonFile(const std::string& path);

CMatrix ParseMatrix(const Json& j, const std::string& field, int rows, int cols);
Ensemble ParseEnsemble(const Json& j, const std::string& field = "ensemble");
QuantumChannel ParseChannel(const Json& j, const std::string& field = "channel");
VariationalModel ParseModel(const Json& j, const std::string& field = "model");
std::vector<double> ParseDoubles(const Json& j, const std::string& field);

Json MatrixToJson(const CMatrix& m);
Json EnsembleToJson(const Ensemble& e);

}  // namespace qleak::cli
