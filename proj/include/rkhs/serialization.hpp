#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rkhs/algnn.hpp"
#include "rkhs/training.hpp"

namespace rkhs {

using Json = nlohmann::json;

// JSON documents:
//   op:      {"op": "<name>", "sup": 1.0}            (sup only for cyclic_sum)
//   kernel:  {"type": "gaussian1d", "B": ...} | {"type": "gaussian2d", "sigma": ...}
//            | {"type": "sinc", "B": ...} | {"type": "sphere_poly", "d": ...}
//            | {"type": "graphon_box", "graphon": "dirichlet_green"|"constant_p",
//               "p": ..., "n_quad": ...}
//   signal:  {"kernel": ..., "op": ..., "terms": [{"center": [...], "weight": ...}]}
//   network: {"kernel": ..., "op": ..., "N1": n, "N2": m,
//             "layer1": [terms...], "layer2": [[terms...]...]}
// Readers throw ParseError naming the offending field.

Json op_to_json(const DomainOp& op);
DomainOp op_from_json(const Json& j);
Json kernel_to_json(const Kernel& k);
Kernel kernel_from_json(const Json& j);
Json signal_to_json(const RkhsSignal& f);
RkhsSignal signal_from_json(const Json& j);
Json net_to_json(const AlgNet& net);
AlgNet net_from_json(const Json& j);
/// Unknown keys are rejected; missing keys keep their defaults.
Json train_config_to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const Json& j);

/// IoError on open/write failure, ParseError on invalid JSON.
Json read_json(const std::filesystem::path& path);
void write_json(const Json& j, const std::filesystem::path& path);

RkhsSignal load_signal(const std::filesystem::path& path);
void save_signal(const RkhsSignal& f, const std::filesystem::path& path);
AlgNet load_net(const std::filesystem::path& path);
void save_net(const AlgNet& net, const std::filesystem::path& path);

/// "x,value" (1-D) or "x,y,value" (2-D) rows in grid enumeration order.
void write_grid_csv(const GridField& field, const std::filesystem::path& path);
/// Recovers the lattice from the coordinates; throws ParseError if the rows
/// do not form a uniform lattice.
GridField read_grid_csv(const std::filesystem::path& path);

/// "iteration,loss" with iterations numbered from 0.
void write_loss_csv(const std::vector<double>& trace, const std::filesystem::path& path);
std::vector<double> read_loss_csv(const std::filesystem::path& path);

/// A header row followed by rows of numbers.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
void write_numeric_csv(const CsvTable& table, const std::filesystem::path& path);
/// Throws ParseError with a line number when a row is malformed.
CsvTable read_numeric_csv(const std::filesystem::path& path);

}  // namespace rkhs
