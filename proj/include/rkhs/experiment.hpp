#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rkhs/fitting.hpp"
#include "rkhs/serialization.hpp"
#include "rkhs/training.hpp"

namespace rkhs {

// ---------------------------------------------------------------------------
// Synthetic coverage experiment
// ---------------------------------------------------------------------------

enum class SynthMode { translation_target, random_smooth };

struct ExperimentConfig {
  double field_halfwidth = 40.0;
  int samples_per_side = 9;
  int n_flights_train = 12;
  int n_flights_test = 4;
  double kernel_sigma = 10.0;
  double ridge_lambda = 1e-3;
  int n1 = 2;
  int n2 = 2;
  int terms_per_filter = 3;
  double init_amplitude = 1.0;
  double init_jitter = 0.1;
  /// Horizontal offset between input and target fields (translation mode).
  double shift = 40.0;
  /// Number of Gaussian bumps in each random field.
  int field_bumps = 10;
  double grid_step = 1.0;
  SynthMode mode = SynthMode::translation_target;
  TrainConfig train;
  std::uint64_t seed = 0;

  int n_flights() const { return n_flights_train + n_flights_test; }
};

/// Throws DomainError on non-positive counts or widths.
void validate(const ExperimentConfig& cfg);
Json experiment_config_to_json(const ExperimentConfig& cfg);
/// Keys as in experiment_config_to_json; "train" holds a TrainConfig object.
ExperimentConfig experiment_config_from_json(const Json& j);

/// Smooth scalar field on the plane: Σ a_k exp(-‖x - c_k‖² / (2 s_k²)).
struct RandomField {
  std::vector<double> cx, cy, width, amplitude;
  double operator()(double x, double y) const;
};

struct Flight {
  SampleSet input;   ///< left side, x ≤ 0
  SampleSet target;  ///< right side, x > 0
};

/// Flight l uses a field drawn from a generator seeded by (seed, l). In
/// translation mode the target value at (x, y) is the input field at
/// (x - shift, y); in random_smooth mode both sides sample one field.
std::vector<Flight> synthesize_flights(const ExperimentConfig& cfg);
RandomField flight_field(const ExperimentConfig& cfg, int flight);

std::filesystem::path flight_csv(const std::filesystem::path& dir, int flight, bool target);
void write_flights(const std::vector<Flight>& flights, const std::filesystem::path& dir);
std::vector<Flight> read_flights(const std::filesystem::path& dir, int count);

struct FittedFlight {
  RkhsSignal input;
  RkhsSignal target;
};

Kernel experiment_kernel(const ExperimentConfig& cfg);
DomainOp experiment_op();
FittedFlight fit_flight(const Flight& flight, const ExperimentConfig& cfg);

std::filesystem::path signal_json(const std::filesystem::path& dir, int flight, bool target);
void write_fitted(const std::vector<FittedFlight>& fitted, const std::filesystem::path& dir);
std::vector<FittedFlight> read_fitted(const std::filesystem::path& dir, int count);

/// Training pairs are flights [0, n_flights_train); test flights follow.
Dataset training_set(const std::vector<FittedFlight>& fitted, const ExperimentConfig& cfg);
AlgNet initial_net(const ExperimentConfig& cfg);

/// The evaluation raster: [-halfwidth, halfwidth]² with the configured step.
Grid evaluation_grid(const ExperimentConfig& cfg);

/// ‖out - target‖²_F / ‖target‖²_F over the raster.
double relative_mse(const GridField& out, const GridField& target);

struct FlightEval {
  int flight = 0;
  double relative_mse = 0.0;
  /// Relative MSE of predicting the target by the input field itself.
  double identity_relative_mse = 0.0;
  GridField input, output, target;
};

FlightEval evaluate_flight(const AlgNet& net, const FittedFlight& flight, int index,
                           const Grid& grid);

struct EvalSummary {
  std::vector<FlightEval> flights;
  double mean_relative_mse = 0.0;
  double mean_identity_relative_mse = 0.0;
};

/// Evaluates flights [first, last) and writes eval.csv, eval.json and the
/// input/output/target grid CSVs of each flight into out_dir.
EvalSummary evaluate_flights(const AlgNet& net, const std::vector<FittedFlight>& fitted,
                             int first, int last, const ExperimentConfig& cfg,
                             const std::filesystem::path& out_dir);

// ---------------------------------------------------------------------------
// Demonstrations
// ---------------------------------------------------------------------------

std::vector<std::string> demo_names();

/// Runs the named demo, writes its CSV artifacts and summary.json into out_dir
/// and returns the summary. Each summary carries a boolean "pass".
/// Throws DomainError for an unknown name.
Json run_demo(const std::string& name, const std::filesystem::path& out_dir, std::uint64_t seed);

Json demo_sinc_equivalence(const std::filesystem::path& out_dir, std::uint64_t seed);
Json demo_gaussian_conv(const std::filesystem::path& out_dir);
Json demo_graphon_spectrum(const std::filesystem::path& out_dir);
Json demo_sphere_rotation(const std::filesystem::path& out_dir);
Json demo_nonlinearity_figure(const std::filesystem::path& out_dir);

}  // namespace rkhs
