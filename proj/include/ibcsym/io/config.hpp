#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "ibcsym/core_model.hpp"

namespace ibcsym::io {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }  // 0 if not tied to a line

 private:
  std::size_t line_;
};

struct ModelSection {
  double m = 1.0;
  double E0 = 1.0;
  double hbar = 1.0;
  std::vector<Source> sources;
  std::vector<std::size_t> source_lines;
};

struct SymmetrySection {
  double tol = 1e-10;
  std::vector<IbcSourceParams> ibc;  // optional general IBC, one line per source
};

struct FieldSection {
  double xmin = -1.5, xmax = 2.5;
  double ymin = -2.0, ymax = 2.0;
  double z = 0.0;
  std::size_t nx = 40, ny = 40;
};

struct StreamlineSection {
  std::vector<Vec3> seeds;       // explicit seeds; if empty, seeds around seed_source
  std::size_t seed_source = 2;   // 1-based
  std::size_t count = 100;
  double radius = 0.05;          // relative to the minimal source spacing
  double max_arc_length = 1e3;
  double eps_absorb = 0.0;
  double rtol = 1e-8;
};

struct SimulateSection {
  std::string mode = "equivariance";  // equivariance | reversal | trajectories
  std::size_t runs = 5000;
  double t_max = 10.0;
  std::vector<double> sample_times{5.0, 10.0};
  std::size_t reference_samples = 200000;
  double significance = 0.01;
  double rtol = 1e-8;
  double dt_max = 1.0;
  double frame_dt = 0.05;  // spacing of trajectory polyline points
  std::size_t min_events = 20;
  double z_critical = 4.0;
};

struct LatticeSection {
  std::size_t L = 8;
  double a = 1.0;
  std::size_t n_max = 2;
  double m = 1.0;
  double E0 = 1.0;
  double hbar = 1.0;
  std::vector<std::pair<std::size_t, cplx>> sources{{2, {1.0, 0.0}}, {5, {0.0, 1.0}}};
  std::vector<std::string> checks{"hermitian", "gauge", "T", "ground", "reversal", "bell"};
  double t = 1.0;
  std::size_t chains = 20000;
  double dt = 1e-3;
  std::size_t theta_grid = 720;
  std::size_t gauge_thetas = 16;
};

struct BoundarySection {
  std::vector<double> thetas{0.3, 1.0, 2.0};
  std::size_t points = 512;
  double m = 1.0;
  double hbar = 1.0;
  cplx alpha0{0.0, 0.0}, beta0{1.0, 0.0};
  cplx alpha1{0.0, -1.0}, beta1{1.0, 0.0};
  double t_max = 0.02;
  std::size_t steps = 2000;
  double packet_center = 0.8;
  double packet_width = 0.05;
  double packet_k = 30.0;
  std::vector<std::tuple<cplx, cplx, cplx>> witnesses;  // (alpha, beta, psi(q))
};

struct RunConfig {
  std::string command;
  std::uint64_t seed = 1;
  std::string text;  // raw config text, hashed into provenance
  std::optional<ModelSection> model;
  SymmetrySection symmetry;
  FieldSection field;
  StreamlineSection streamlines;
  SimulateSection simulate;
  LatticeSection lattice;
  BoundarySection boundary;
  bool has_lattice = false;
  bool has_boundary = false;

  ChargeSystem charge_system() const;
  // Effective parameters of the sections used by `command`, as key/value
  // strings, including every default that was not overridden.
  std::vector<std::pair<std::string, std::string>> effective_parameters() const;
};

extern const std::vector<std::string> commands;

// Parses INI-style text: [section] headers, `key = value` lines, '#' or ';'
// comments. Throws ConfigError with the offending line number.
RunConfig parse_config(std::string_view text, const std::string& command);

}  // namespace ibcsym::io
