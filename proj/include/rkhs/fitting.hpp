#pragma once

#include <filesystem>
#include <vector>

#include "rkhs/signal.hpp"

namespace rkhs {

/// Scattered measurements: values[i] observed at points[i]. Coordinates are
/// meters and values Mbps in the coverage data; the units are not enforced.
struct SampleSet {
  std::vector<Center> points;
  std::vector<double> values;

  std::size_t size() const { return points.size(); }
};

/// Throws DomainError on a length mismatch, an empty set, non-finite values,
/// or two points within 1e-9 of each other (the message lists both indices).
void validate(const SampleSet& s);

/// Kernel ridge coefficients α = (KᵀK + λK)⁺ K f on the sample points, with
/// the pseudo-inverse taken through an eigendecomposition that discards
/// eigenvalues below 1e-12 times the largest. Throws DegeneracyError when the
/// Gram matrix is identically zero.
RkhsSignal fit_ridge(const SampleSet& samples, const Kernel& kernel, const DomainOp& op,
                     double lambda);

/// Reads a CSV with header "x,value" or "x,y,value". Throws ParseError with a
/// line number for malformed or non-finite rows, IoError if the file cannot be
/// opened, and DomainError for duplicate points or an empty body.
SampleSet load_samples_csv(const std::filesystem::path& path);
void save_samples_csv(const SampleSet& samples, const std::filesystem::path& path);

}  // namespace rkhs
