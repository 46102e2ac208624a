#include <chrono>
#include <cmath>
#include <random>

#include "rkhs/errors.hpp"
#include "rkhs/experiment.hpp"
#include "rkhs/graphon.hpp"
#include "rkhs/nonlinearity.hpp"

namespace rkhs {

namespace {

Json finish(Json summary, const std::filesystem::path& out_dir) {
  write_json(summary, out_dir / "summary.json");
  return summary;
}

}  // namespace

std::vector<std::string> demo_names() {
  return {"sinc_equivalence", "gaussian_conv", "graphon_spectrum", "sphere_rotation",
          "nonlinearity_figure"};
}

Json run_demo(const std::string& name, const std::filesystem::path& out_dir, std::uint64_t seed) {
  std::filesystem::create_directories(out_dir);
  if (name == "sinc_equivalence") return demo_sinc_equivalence(out_dir, seed);
  if (name == "gaussian_conv") return demo_gaussian_conv(out_dir);
  if (name == "graphon_spectrum") return demo_graphon_spectrum(out_dir);
  if (name == "sphere_rotation") return demo_sphere_rotation(out_dir);
  if (name == "nonlinearity_figure") return demo_nonlinearity_figure(out_dir);
  throw DomainError("unknown demo \"" + name + "\"");
}

// Band-limited kernel with B = π, so k_v(x) = sinc(x - v). The integrand of
// the classical convolution is band-limited to [-2π, 2π], which the
// trapezoid rule integrates exactly for steps below 1; the remaining error is
// the truncation of the tails beyond ±halfwidth, of order 1/(π² halfwidth).
Json demo_sinc_equivalence(const std::filesystem::path& out_dir, std::uint64_t seed) {
  std::filesystem::create_directories(out_dir);
  constexpr int kPairs = 20;
  constexpr double kHalfwidth = 5000.0;
  constexpr double kQuadStep = 0.5;
  const auto start = std::chrono::steady_clock::now();

  const Kernel k = sinc(M_PI);
  const DomainOp op = Translation1D{};
  const Grid grid = grid1d(-20.0, 20.0, 0.01);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uc(-5.0, 5.0), uw(-1.0, 1.0);
  auto random_signal = [&] {
    std::vector<Term> terms;
    for (int t = 0; t < 3; ++t) terms.push_back(Term{Scalar{uc(rng)}, uw(rng)});
    return make_signal(k, op, std::move(terms));
  };

  CsvTable gaps{{"pair", "max_abs_gap"}, {}};
  double worst = 0.0;
  for (int p = 0; p < kPairs; ++p) {
    const RkhsSignal f = random_signal();
    const RkhsSignal g = random_signal();
    const GridField rkhs_conv = evaluate_grid(convolve(f, g), grid);
    const GridField classical = classic_convolve_grid(f, g, grid, kHalfwidth, kQuadStep);
    const double gap = max_abs_difference(rkhs_conv, classical);
    worst = std::max(worst, gap);
    gaps.rows.push_back({static_cast<double>(p), gap});
    if (p == 0) {
      write_grid_csv(evaluate_grid(f, grid), out_dir / "sinc_f_grid.csv");
      write_grid_csv(evaluate_grid(g, grid), out_dir / "sinc_g_grid.csv");
      write_grid_csv(rkhs_conv, out_dir / "sinc_rkhs_conv_grid.csv");
      write_grid_csv(classical, out_dir / "sinc_classical_conv_grid.csv");
    }
  }
  write_numeric_csv(gaps, out_dir / "sinc_pair_gaps.csv");
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return finish(Json{{"demo", "sinc_equivalence"},
                     {"pairs", kPairs},
                     {"max_abs_gap", worst},
                     {"tolerance", 1e-3},
                     {"quad_halfwidth", kHalfwidth},
                     {"quad_step", kQuadStep},
                     {"seconds", seconds},
                     {"pass", worst <= 1e-3}},
                out_dir);
}

// Two unit Gaussian sections: the algebraic product is again a unit section,
// the classical one is wider and lower, √(π/(2B)) exp(-B(x - 3)²/2).
Json demo_gaussian_conv(const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  constexpr double B = 4.0;
  const Kernel k = gaussian1d(B);
  const DomainOp op = Translation1D{};
  const RkhsSignal f = section(k, op, Scalar{1.0});
  const RkhsSignal g = section(k, op, Scalar{2.0});
  const Grid grid = grid1d(-2.0, 8.0, 0.01);

  const GridField rkhs_conv = evaluate_grid(convolve(f, g), grid);
  const GridField classical = classic_convolve_grid(f, g, grid, 10.0, 0.01);
  GridField analytic{grid, {}};
  for (int i = 0; i < grid.nx; ++i) {
    const double x = grid.x(i) - 3.0;
    analytic.values.push_back(std::sqrt(M_PI / (2.0 * B)) * std::exp(-B * x * x / 2.0));
  }
  write_grid_csv(evaluate_grid(f, grid), out_dir / "gaussian_f_grid.csv");
  write_grid_csv(evaluate_grid(g, grid), out_dir / "gaussian_g_grid.csv");
  write_grid_csv(rkhs_conv, out_dir / "gaussian_rkhs_conv_grid.csv");
  write_grid_csv(classical, out_dir / "gaussian_classical_conv_grid.csv");

  auto peak = [](const GridField& fld) {
    return *std::max_element(fld.values.begin(), fld.values.end());
  };
  auto fwhm = [](const GridField& fld) {
    const double half = *std::max_element(fld.values.begin(), fld.values.end()) / 2.0;
    int count = 0;
    for (double v : fld.values) count += v >= half ? 1 : 0;
    return count * fld.grid.dx;
  };
  const double quad_error = max_abs_difference(classical, analytic);
  const double rkhs_peak = peak(rkhs_conv);
  const double classical_peak = peak(classical);
  const bool pass = std::abs(rkhs_peak - 1.0) <= 1e-12 && classical_peak < rkhs_peak &&
                    fwhm(classical) > fwhm(rkhs_conv) && quad_error <= 1e-6;
  return finish(Json{{"demo", "gaussian_conv"},
                     {"B", B},
                     {"rkhs_peak", rkhs_peak},
                     {"classical_peak", classical_peak},
                     {"classical_peak_analytic", std::sqrt(M_PI / (2.0 * B))},
                     {"rkhs_fwhm", fwhm(rkhs_conv)},
                     {"classical_fwhm", fwhm(classical)},
                     {"quadrature_max_abs_error", quad_error},
                     {"pass", pass}},
                out_dir);
}

Json demo_graphon_spectrum(const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  constexpr Eigen::Index n = 2000;
  constexpr int kMax = 5;
  const auto start = std::chrono::steady_clock::now();

  const DiscretizedKernel K = graphon_kernel(DirichletGreen{}, n);
  const auto spectrum = spectral_decompose(K, kMax);
  const auto squared = spectral_decompose(box_power(K, 2), kMax);

  CsvTable table{{"k", "computed_lambda", "analytic_lambda", "relative_error"}, {}};
  double worst = 0.0;
  double worst_mapping = 0.0;
  Grid grid;
  grid.dim = 1;
  grid.x0 = K.node(0);
  grid.dx = K.spacing();
  grid.nx = static_cast<int>(n);
  for (int k = 1; k <= kMax; ++k) {
    const auto& e = spectrum[static_cast<std::size_t>(k - 1)];
    const double analytic = dirichlet_green_eigenvalue(k, 2);
    const double rel = std::abs(e.value - analytic) / analytic;
    worst = std::max(worst, rel);
    const double mapped = squared[static_cast<std::size_t>(k - 1)].value;
    worst_mapping = std::max(worst_mapping, std::abs(mapped - e.value * e.value) / (e.value * e.value));
    table.rows.push_back({static_cast<double>(k), e.value, analytic, rel});
    write_grid_csv(GridField{grid, std::vector<double>(e.function.data(), e.function.data() + n)},
                   out_dir / ("graphon_phi_" + std::to_string(k) + "_grid.csv"));
  }
  write_numeric_csv(table, out_dir / "graphon_spectrum.csv");
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return finish(Json{{"demo", "graphon_spectrum"},
                     {"n", n},
                     {"max_relative_error", worst},
                     {"box_power_mapping_error", worst_mapping},
                     {"seconds", seconds},
                     {"pass", worst <= 0.01 && worst_mapping <= 1e-6}},
                out_dir);
}

// f = k_{v1} + k_{v2} on S² with K(u,v) = ⟨u,v⟩⁴ and g = k_{v3}, v3 the 45°
// rotation about z. g ∗ f places its sections at v3·v1 and v3·v2.
Json demo_sphere_rotation(const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const Kernel k = sphere_poly(4);
  const DomainOp op = SphereRotation{};
  const Eigen::Vector3d p1 = Eigen::Vector3d(1.0, 0.0, 1.0) / std::sqrt(2.0);
  const Eigen::Vector3d p2(0.0, 1.0, 0.0);
  const Rotation3 v3 = rotation_about_z(M_PI / 4.0);

  const RkhsSignal f = make_signal(k, op, {Term{rotation_to(p1), 1.0}, Term{rotation_to(p2), 1.0}});
  const RkhsSignal g = section(k, op, v3);
  const RkhsSignal h = convolve(g, f);

  CsvTable centers{{"stage", "x", "y", "z"}, {}};
  double worst = 0.0;
  for (std::size_t i = 0; i < f.terms.size(); ++i) {
    const Eigen::Vector3d pre = sphere_point(std::get<Rotation3>(f.terms[i].center));
    const Eigen::Vector3d post = sphere_point(std::get<Rotation3>(h.terms[i].center));
    worst = std::max(worst, (post - v3.R * pre).norm());
    centers.rows.push_back({0.0, pre.x(), pre.y(), pre.z()});
    centers.rows.push_back({1.0, post.x(), post.y(), post.z()});
  }
  const Eigen::Vector3d v3_point = v3.R * Eigen::Vector3d::UnitX();
  centers.rows.push_back({2.0, v3_point.x(), v3_point.y(), v3_point.z()});
  write_numeric_csv(centers, out_dir / "sphere_centers.csv");

  // Rasters over (azimuth, polar angle) in degrees.
  Grid grid;
  grid.dim = 2;
  grid.x0 = 0.0;
  grid.dx = 5.0;
  grid.nx = 73;
  grid.y0 = 0.0;
  grid.dy = 5.0;
  grid.ny = 37;
  GridField ff{grid, {}}, gf{grid, {}}, hf{grid, {}};
  double equivariance = 0.0;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const double az = grid.x(i) * M_PI / 180.0, pol = grid.y(j) * M_PI / 180.0;
      const Eigen::Vector3d u(std::sin(pol) * std::cos(az), std::sin(pol) * std::sin(az), std::cos(pol));
      const Rotation3 ru = rotation_to(u);
      ff.values.push_back(evaluate(f, ru));
      gf.values.push_back(evaluate(g, ru));
      hf.values.push_back(evaluate(h, ru));
      equivariance = std::max(equivariance,
                              std::abs(evaluate(h, rotation_to(v3.R * u)) - ff.values.back()));
    }
  write_grid_csv(ff, out_dir / "sphere_f_grid.csv");
  write_grid_csv(gf, out_dir / "sphere_g_grid.csv");
  write_grid_csv(hf, out_dir / "sphere_h_grid.csv");

  return finish(Json{{"demo", "sphere_rotation"},
                     {"v3_rotation_deg", 45.0},
                     {"v3_point", {v3_point.x(), v3_point.y(), v3_point.z()}},
                     {"max_center_error", worst},
                     {"max_equivariance_error", equivariance},
                     {"pass", worst <= 1e-12 && equivariance <= 1e-12}},
                out_dir);
}

// g1 = k_{v-ε} + k_{v+ε} is a fixed point of η; g2 = k_{v-ε} - k_{v+ε} maps to
// β k_{v-ε} with β = (K(v-ε,v-ε) - K(v+ε,v-ε)) / (K(v-ε,v-ε) + K(v+ε,v-ε)).
Json demo_nonlinearity_figure(const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  constexpr double B = 1.0, v = 5.0, eps = 0.5;
  const Kernel k = gaussian1d(B);
  const DomainOp op = Translation1D{};
  const Center a = Scalar{v - eps}, b = Scalar{v + eps};
  const RkhsSignal g1 = make_signal(k, op, {Term{a, 1.0}, Term{b, 1.0}});
  const RkhsSignal g2 = make_signal(k, op, {Term{a, 1.0}, Term{b, -1.0}});
  const RkhsSignal e1 = apply_eta(g1);
  const RkhsSignal e2 = apply_eta(g2);

  const double fixed_point_gap = norm(subtract(e1, g1));
  const double kaa = eval(k, a, a), kba = eval(k, b, a);
  const double beta = (kaa - kba) / (kaa + kba);
  const double beta_gap = std::max(std::abs(e2.terms[0].weight - beta), std::abs(e2.terms[1].weight));

  const Grid grid = grid1d(v - 4.0, v + 4.0, 0.01);
  write_grid_csv(evaluate_grid(g1, grid), out_dir / "nonlinearity_g1_grid.csv");
  write_grid_csv(evaluate_grid(g2, grid), out_dir / "nonlinearity_g2_grid.csv");
  write_grid_csv(evaluate_grid(e1, grid), out_dir / "nonlinearity_eta_g1_grid.csv");
  write_grid_csv(evaluate_grid(e2, grid), out_dir / "nonlinearity_eta_g2_grid.csv");

  // Continuity: shrinking perturbations of g2 give shrinking output changes.
  CsvTable sweep{{"delta", "input_gap", "output_gap"}, {}};
  const RkhsSignal p = make_signal(k, op, {Term{a, 0.3}, Term{b, 0.7}});
  bool monotone = true;
  double last = INFINITY, final_gap = 0.0;
  for (double delta = 1e-2; delta >= 1e-6 * 0.999; delta /= 10.0) {
    const RkhsSignal moved = add(g2, scale(p, delta));
    final_gap = norm(subtract(apply_eta(moved), e2));
    monotone = monotone && final_gap < last;
    last = final_gap;
    sweep.rows.push_back({delta, norm(subtract(moved, g2)), final_gap});
  }
  write_numeric_csv(sweep, out_dir / "nonlinearity_continuity.csv");

  return finish(Json{{"demo", "nonlinearity_figure"},
                     {"B", B},
                     {"v", v},
                     {"epsilon", eps},
                     {"eta_g1_minus_g1_norm", fixed_point_gap},
                     {"beta", beta},
                     {"beta_error", beta_gap},
                     {"continuity_monotone", monotone},
                     {"continuity_final_gap", final_gap},
                     {"pass", fixed_point_gap <= 1e-12 && beta_gap <= 1e-12 && monotone && final_gap <= 1e-4}},
                out_dir);
}

}  // namespace rkhs
