#include "rkhs/serialization.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "rkhs/errors.hpp"

namespace rkhs {

namespace {

template <class T>
T field(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(std::string(what) + ": missing field \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string(what) + ": field \"" + key + "\" has the wrong type");
  }
}

Json terms_to_json(const RkhsSignal& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms) terms.push_back({{"center", coordinates(t.center)}, {"weight", t.weight}});
  return terms;
}

RkhsSignal terms_from_json(const Json& terms, const Kernel& kernel, const DomainOp& op,
                           const char* what) {
  if (!terms.is_array()) throw ParseError(std::string(what) + ": terms must be an array");
  const CenterKind kind = center_kind(op);
  std::vector<Term> out;
  for (const auto& t : terms) {
    const auto coords = field<std::vector<double>>(t, "center", what);
    if (coords.size() != coordinate_count(kind))
      throw ParseError(std::string(what) + ": center needs " +
                       std::to_string(coordinate_count(kind)) + " coordinates for op " +
                       name_of(op));
    out.push_back(Term{make_center(kind, coords), field<double>(t, "weight", what)});
  }
  return make_signal(kernel, op, std::move(out));
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(17);
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::vector<double> parse_row(const std::string& line, std::size_t n, const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
    if (cell.empty() || used != cell.size()) throw ParseError(where + "malformed number '" + cell + "'");
    out.push_back(v);
  }
  if (out.size() != n)
    throw ParseError(where + "expected " + std::to_string(n) + " fields, got " +
                     std::to_string(out.size()));
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

Json op_to_json(const DomainOp& op) {
  Json j{{"op", name_of(op)}};
  if (const auto* c = std::get_if<CyclicSum>(&op)) j["sup"] = c->sup;
  return j;
}

DomainOp op_from_json(const Json& j) {
  const auto name = field<std::string>(j, "op", "op");
  const double sup = j.contains("sup") ? field<double>(j, "sup", "op") : 1.0;
  try {
    return make_domain_op(name, sup);
  } catch (const DomainError& e) {
    throw ParseError(std::string("op: ") + e.what());
  }
}

Json kernel_to_json(const Kernel& k) {
  Json j{{"type", name_of(k)}};
  if (const auto* g = std::get_if<Gaussian1D>(&k)) j["B"] = g->B;
  if (const auto* g = std::get_if<Gaussian2D>(&k)) j["sigma"] = g->sigma;
  if (const auto* s = std::get_if<Sinc>(&k)) j["B"] = s->B;
  if (const auto* s = std::get_if<SpherePoly>(&k)) j["d"] = s->d;
  if (const auto* g = std::get_if<GraphonBox>(&k)) {
    j["graphon"] = name_of(g->graphon);
    if (const auto* c = std::get_if<ConstantGraphon>(&g->graphon)) j["p"] = c->p;
    j["n_quad"] = g->n_quad;
  }
  return j;
}

Kernel kernel_from_json(const Json& j) {
  const auto type = field<std::string>(j, "type", "kernel");
  try {
    if (type == "gaussian1d") return gaussian1d(field<double>(j, "B", "kernel"));
    if (type == "gaussian2d") {
      if (j.contains("sigma")) return gaussian2d(field<double>(j, "sigma", "kernel"));
      return gaussian2d_from_B(field<double>(j, "B", "kernel"));
    }
    if (type == "sinc") return sinc(field<double>(j, "B", "kernel"));
    if (type == "sphere_poly") return sphere_poly(field<int>(j, "d", "kernel"));
    if (type == "graphon_box") {
      const auto g = field<std::string>(j, "graphon", "kernel");
      Graphon w = DirichletGreen{};
      if (g == "constant_p") {
        w = ConstantGraphon{field<double>(j, "p", "kernel")};
      } else if (g != "dirichlet_green") {
        throw ParseError("kernel: unknown graphon \"" + g + "\"");
      }
      return graphon_box(w, field<int>(j, "n_quad", "kernel"));
    }
  } catch (const DomainError& e) {
    throw ParseError(std::string("kernel: ") + e.what());
  }
  throw ParseError("kernel: unknown type \"" + type + "\"");
}

Json signal_to_json(const RkhsSignal& f) {
  return Json{{"kernel", kernel_to_json(f.kernel)}, {"op", op_to_json(f.op)}, {"terms", terms_to_json(f)}};
}

RkhsSignal signal_from_json(const Json& j) {
  const Kernel k = kernel_from_json(field<Json>(j, "kernel", "signal"));
  const DomainOp op = op_from_json(field<Json>(j, "op", "signal"));
  return terms_from_json(field<Json>(j, "terms", "signal"), k, op, "signal");
}

Json net_to_json(const AlgNet& net) {
  Json l1 = Json::array();
  for (const auto& w : net.layer1) l1.push_back(terms_to_json(w));
  Json l2 = Json::array();
  for (const auto& row : net.layer2) {
    Json r = Json::array();
    for (const auto& w : row) r.push_back(terms_to_json(w));
    l2.push_back(r);
  }
  return Json{{"kernel", kernel_to_json(net.kernel)}, {"op", op_to_json(net.op)}, {"N1", net.n1()},
              {"N2", net.n2()}, {"layer1", l1}, {"layer2", l2}};
}

AlgNet net_from_json(const Json& j) {
  const Kernel k = kernel_from_json(field<Json>(j, "kernel", "network"));
  const DomainOp op = op_from_json(field<Json>(j, "op", "network"));
  const int n1 = field<int>(j, "N1", "network");
  const int n2 = field<int>(j, "N2", "network");
  const Json l1 = field<Json>(j, "layer1", "network");
  const Json l2 = field<Json>(j, "layer2", "network");
  if (!l1.is_array() || static_cast<int>(l1.size()) != n1)
    throw ParseError("network: layer1 must hold N1 filters");
  if (!l2.is_array() || static_cast<int>(l2.size()) != n2)
    throw ParseError("network: layer2 must hold N2 rows");
  std::vector<RkhsSignal> layer1;
  for (const auto& t : l1) layer1.push_back(terms_from_json(t, k, op, "network layer1"));
  std::vector<std::vector<RkhsSignal>> layer2;
  for (const auto& row : l2) {
    if (!row.is_array() || static_cast<int>(row.size()) != n1)
      throw ParseError("network: each layer2 row must hold N1 filters");
    auto& out = layer2.emplace_back();
    for (const auto& t : row) out.push_back(terms_from_json(t, k, op, "network layer2"));
  }
  return make_net(k, op, std::move(layer1), std::move(layer2));
}

Json train_config_to_json(const TrainConfig& c) {
  return Json{{"mode", c.mode == TrainMode::adam ? "adam" : "steepest_descent"},
              {"iterations", c.iterations},
              {"learning_rate", c.learning_rate},
              {"cg_tol", c.cg_tol},
              {"cg_max_iter", c.cg_max_iter},
              {"wolfe_alpha_bar", c.wolfe_alpha_bar},
              {"wolfe_rho", c.wolfe_rho},
              {"wolfe_c", c.wolfe_c},
              {"fd_step_centers", c.fd_step_centers},
              {"seed", c.seed},
              {"beta1", c.beta1},
              {"beta2", c.beta2},
              {"epsilon", c.epsilon},
              {"use_adjoint", c.use_adjoint}};
}

TrainConfig train_config_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("train config: expected an object");
  TrainConfig c;
  const char* what = "train config";
  for (const auto& [key, value] : j.items()) {
    if (key == "mode") {
      const auto m = field<std::string>(j, "mode", what);
      if (m == "adam") c.mode = TrainMode::adam;
      else if (m == "steepest_descent") c.mode = TrainMode::steepest_descent;
      else throw ParseError("train config: unknown mode \"" + m + "\"");
    } else if (key == "iterations") c.iterations = field<int>(j, "iterations", what);
    else if (key == "learning_rate") c.learning_rate = field<double>(j, "learning_rate", what);
    else if (key == "cg_tol") c.cg_tol = field<double>(j, "cg_tol", what);
    else if (key == "cg_max_iter") c.cg_max_iter = field<int>(j, "cg_max_iter", what);
    else if (key == "wolfe_alpha_bar") c.wolfe_alpha_bar = field<double>(j, "wolfe_alpha_bar", what);
    else if (key == "wolfe_rho") c.wolfe_rho = field<double>(j, "wolfe_rho", what);
    else if (key == "wolfe_c") c.wolfe_c = field<double>(j, "wolfe_c", what);
    else if (key == "fd_step_centers") c.fd_step_centers = field<double>(j, "fd_step_centers", what);
    else if (key == "seed") c.seed = field<std::uint64_t>(j, "seed", what);
    else if (key == "beta1") c.beta1 = field<double>(j, "beta1", what);
    else if (key == "beta2") c.beta2 = field<double>(j, "beta2", what);
    else if (key == "epsilon") c.epsilon = field<double>(j, "epsilon", what);
    else if (key == "use_adjoint") c.use_adjoint = field<bool>(j, "use_adjoint", what);
    else throw ParseError("train config: unknown key \"" + key + "\"");
  }
  try {
    validate(c);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  return c;
}

Json read_json(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_json(const Json& j, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

RkhsSignal load_signal(const std::filesystem::path& path) { return signal_from_json(read_json(path)); }
void save_signal(const RkhsSignal& f, const std::filesystem::path& path) {
  write_json(signal_to_json(f), path);
}
AlgNet load_net(const std::filesystem::path& path) { return net_from_json(read_json(path)); }
void save_net(const AlgNet& net, const std::filesystem::path& path) {
  write_json(net_to_json(net), path);
}

void write_grid_csv(const GridField& field, const std::filesystem::path& path) {
  if (field.values.size() != field.grid.size())
    throw DomainError("write_grid_csv: value count does not match the grid");
  auto out = open_out(path);
  const Grid& g = field.grid;
  out << (g.dim == 1 ? "x,value\n" : "x,y,value\n");
  std::size_t k = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i, ++k) {
      out << g.x(i) << ',';
      if (g.dim == 2) out << g.y(j) << ',';
      out << field.values[k] << '\n';
    }
  if (!out) throw IoError("write failed: " + path.string());
}

GridField read_grid_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  line = strip_cr(line);
  int dim = 0;
  if (line == "x,value") dim = 1;
  else if (line == "x,y,value") dim = 2;
  else throw ParseError(path.string() + ":1: expected header \"x,value\" or \"x,y,value\"");

  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    rows.push_back(parse_row(line, static_cast<std::size_t>(dim + 1),
                             path.string() + ":" + std::to_string(line_no) + ": "));
  }
  if (rows.empty()) throw ParseError(path.string() + ": no rows");

  Grid g;
  g.dim = dim;
  g.x0 = rows[0][0];
  if (dim == 1) {
    g.nx = static_cast<int>(rows.size());
  } else {
    g.y0 = rows[0][1];
    std::size_t nx = 0;
    while (nx < rows.size() && rows[nx][1] == g.y0) ++nx;
    if (rows.size() % nx != 0) throw ParseError(path.string() + ": rows do not form a lattice");
    g.nx = static_cast<int>(nx);
    g.ny = static_cast<int>(rows.size() / nx);
    if (g.ny > 1) g.dy = rows[nx][1] - g.y0;
  }
  if (g.nx > 1) g.dx = rows[1][0] - g.x0;

  GridField out{g, {}};
  const double tol = 1e-9 * (1.0 + std::abs(g.x0) + std::abs(g.y0) + g.nx * std::abs(g.dx) +
                             g.ny * std::abs(g.dy));
  std::size_t k = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i, ++k) {
      const auto& r = rows[k];
      bool ok = std::abs(r[0] - g.x(i)) <= tol;
      if (dim == 2) ok = ok && std::abs(r[1] - g.y(j)) <= tol;
      if (!ok)
        throw ParseError(path.string() + ": row " + std::to_string(k + 2) +
                         " is off the uniform lattice");
      out.values.push_back(r[static_cast<std::size_t>(dim)]);
    }
  return out;
}

void write_loss_csv(const std::vector<double>& trace, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "iteration,loss\n";
  for (std::size_t i = 0; i < trace.size(); ++i) out << i << ',' << trace[i] << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<double> read_loss_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "iteration,loss")
    throw ParseError(path.string() + ":1: expected header \"iteration,loss\"");
  std::vector<double> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto r = parse_row(line, 2, path.string() + ":" + std::to_string(line_no) + ": ");
    out.push_back(r[1]);
  }
  return out;
}

void write_numeric_csv(const CsvTable& table, const std::filesystem::path& path) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw DomainError("write_numeric_csv: row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

CsvTable read_numeric_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  CsvTable out;
  std::stringstream ss(strip_cr(line));
  std::string cell;
  while (std::getline(ss, cell, ',')) out.header.push_back(cell);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    out.rows.push_back(parse_row(line, out.header.size(),
                                 path.string() + ":" + std::to_string(line_no) + ": "));
  }
  return out;
}

}  // namespace rkhs
