#include "rkhs/fitting.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "rkhs/errors.hpp"

namespace rkhs {

void validate(const SampleSet& s) {
  if (s.points.size() != s.values.size())
    throw DomainError("SampleSet: " + std::to_string(s.points.size()) + " points but " +
                      std::to_string(s.values.size()) + " values");
  if (s.points.empty()) throw DomainError("SampleSet: no samples");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s.values[i]))
      throw DomainError("SampleSet: non-finite value at index " + std::to_string(i));
    for (std::size_t j = 0; j < i; ++j)
      if (distance(s.points[i], s.points[j]) <= kMergeTol)
        throw DomainError("SampleSet: duplicate points at indices " + std::to_string(j) + " and " +
                          std::to_string(i));
  }
}

RkhsSignal fit_ridge(const SampleSet& samples, const Kernel& kernel, const DomainOp& op,
                     double lambda) {
  validate(samples);
  if (!(lambda >= 0.0)) throw DomainError("fit_ridge: lambda must be >= 0");
  // Points are re-expressed in the op's center variant (e.g. scalar samples
  // on a unit-interval domain).
  const CenterKind kind = center_kind(op);
  std::vector<Center> centers;
  for (const auto& p : samples.points) centers.push_back(make_center(kind, coordinates(p)));

  const Eigen::MatrixXd K = gram(kernel, centers);
  if (K.cwiseAbs().maxCoeff() == 0.0) throw DegeneracyError("fit_ridge: Gram matrix is zero");
  const Eigen::VectorXd f =
      Eigen::Map<const Eigen::VectorXd>(samples.values.data(),
                                        static_cast<Eigen::Index>(samples.values.size()));

  Eigen::MatrixXd A = K.transpose() * K + lambda * K;
  A = 0.5 * (A + A.transpose());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const double cutoff = 1e-12 * ev.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > cutoff) inv(i) = 1.0 / ev(i);
  const Eigen::MatrixXd& Q = eig.eigenvectors();
  const Eigen::VectorXd alpha = Q * inv.asDiagonal() * (Q.transpose() * (K * f));

  std::vector<Term> terms;
  for (std::size_t i = 0; i < centers.size(); ++i)
    terms.push_back(Term{centers[i], alpha(static_cast<Eigen::Index>(i))});
  return make_signal(kernel, op, std::move(terms));
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

}  // namespace

SampleSet load_samples_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DomainError(path.string() + ": no samples");
  std::vector<std::string> header = split(line);
  for (auto& h : header) h = trim(h);
  std::size_t dim = 0;
  if (header == std::vector<std::string>{"x", "value"}) {
    dim = 1;
  } else if (header == std::vector<std::string>{"x", "y", "value"}) {
    dim = 2;
  } else {
    throw ParseError(path.string() + ":1: expected header \"x,value\" or \"x,y,value\"");
  }

  SampleSet out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    const auto where = path.string() + ":" + std::to_string(line_no) + ": ";
    if (cells.size() != dim + 1)
      throw ParseError(where + "expected " + std::to_string(dim + 1) + " fields, got " +
                       std::to_string(cells.size()));
    std::vector<double> nums;
    for (const auto& c : cells) {
      const std::string t = trim(c);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(t, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (t.empty() || used != t.size()) throw ParseError(where + "malformed number '" + t + "'");
      if (!std::isfinite(v)) throw ParseError(where + "non-finite value '" + t + "'");
      nums.push_back(v);
    }
    out.points.push_back(dim == 1 ? Center{Scalar{nums[0]}} : Center{Planar{nums[0], nums[1]}});
    out.values.push_back(nums[dim]);
  }
  if (out.points.empty()) throw DomainError(path.string() + ": no samples");
  validate(out);
  return out;
}

void save_samples_csv(const SampleSet& samples, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  const bool planar = !samples.points.empty() && kind_of(samples.points.front()) == CenterKind::planar;
  out << (planar ? "x,y,value\n" : "x,value\n");
  out.precision(17);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (double c : coordinates(samples.points[i])) out << c << ',';
    out << samples.values[i] << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace rkhs
