#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ibcsym/ground_state.hpp"
#include "ibcsym/rng.hpp"

namespace ibcsym {

// Exact sampler for the one-boson density |psi_1|^2 / int |psi_1|^2:
// rejection from a mixture of exponential shells around the sources.
class Psi1Sampler {
 public:
  explicit Psi1Sampler(const ChargeSystem& system);
  Vec3 operator()(Rng& rng) const;

 private:
  const ChargeSystem* system_;
  double alpha_;
  double charge_sum_;
  std::vector<double> cumulative_;
};

// Draws a configuration from |psi_min|^2: Poisson(lambda_P) bosons, i.i.d.
// positions from |psi_1|^2.
Configuration sample_ground_configuration(const GroundState& gs, const Psi1Sampler& sampler,
                                          Rng& rng);

// Emission law of the ground-state process. For a boson created at source j
// in direction w while the process is in sector n, the rate density per
// unit solid angle and per insertion slot is
//   (hbar/m) (m / 2 pi hbar^2)^2 / (n + 1) * max{0, L_j},
//   L_j = lim_{r->0} Im[r^2 conj(psi_1) d_r psi_1](x_j + r w).
// Summed over the n+1 equivalent insertion slots and over directions, the
// total rate at source j does not depend on n.
struct EmissionLaw {
  std::vector<double> flux_limit;        // L_j, averaged over directions
  std::vector<double> direction_spread;  // max |L_j(w) - L_j| over sampled w
  double slot_prefactor = 0.0;           // (hbar/m) (m / 2 pi hbar^2)^2

  double density(std::size_t j, std::size_t n) const;
  double rate(std::size_t j, std::size_t n) const;
  double rate_bound(std::size_t j) const;
  double total_rate_bound() const;
};

EmissionLaw derive_emission_law(const GroundState& gs, double direction_tol = 1e-6);

struct EmitEvent {
  double time;
  std::size_t source;
  Vec3 direction;
  std::uint64_t particle;
};

struct AbsorbEvent {
  double time;
  std::uint64_t particle;
  std::size_t source;
};

// Deterministic flow of all bosons over [t_begin, t_end]; positions at t_end.
struct MoveEvent {
  double t_begin;
  double t_end;
  std::vector<std::uint64_t> particles;
  std::vector<Vec3> positions;
};

using ProcessEvent = std::variant<MoveEvent, EmitEvent, AbsorbEvent>;

struct Snapshot {
  double time;
  Configuration config;
};

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  Configuration initial;
  std::vector<ProcessEvent> events;
  std::vector<Snapshot> snapshots;
  Configuration final_config;
  double t_end = 0.0;
  bool completed = true;
  std::vector<std::string> warnings;

  std::size_t emissions() const;
  std::size_t absorptions() const;
};

struct SimulationOptions {
  double t_max = 10.0;
  double dt_max = 1.0;       // cap on the flow step
  std::uint64_t seed = 1;
  double eps_absorb = 0.0;   // <= 0: 1e-4 * min source spacing
  double eps_start = 0.0;    // <= 0: 1e-3 * min source spacing
  double rtol = 1e-8;
  std::vector<double> sample_times;
  bool record_moves = false;
  std::optional<Configuration> initial;  // default: sampled from |psi_min|^2
};

TrajectoryRecord simulate(const GroundState& gs, const EmissionLaw& law,
                          const SimulationOptions& options);
TrajectoryRecord simulate(const GroundState& gs, const SimulationOptions& options);

// Independent runs with per-run seeds derive_seed(options.seed, k).
std::vector<TrajectoryRecord> run_ensemble(const GroundState& gs, const EmissionLaw& law,
                                           const SimulationOptions& options, std::size_t runs);

struct StatTest {
  std::string name;
  double time = 0.0;
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t samples = 0;
  bool passed = true;
};

struct EquivarianceOptions {
  std::size_t runs = 5000;
  std::vector<double> sample_times{5.0, 10.0};
  std::uint64_t seed = 1;
  std::size_t reference_samples = 200000;
  double significance = 0.01;
  SimulationOptions simulation{};
};

struct EquivarianceReport {
  std::vector<StatTest> tests;
  double poisson_rate = 0.0;
  std::size_t runs = 0;
  bool passed = true;
};

// Runs a stationary ensemble started from |psi_min|^2 and compares, at each
// sample time, the sector histogram with Poisson(lambda_P) (chi-square) and
// the pooled boson positions with |psi_1|^2 (two-sample KS on the distance to
// the first source and on the polar cosine about the source axis).
EquivarianceReport equivariance_test(const GroundState& gs, const EquivarianceOptions& options);

struct ReversalOptions {
  std::size_t runs = 1000;
  double t_max = 10.0;
  std::uint64_t seed = 1;
  std::size_t min_events = 20;
  double z_critical = 4.0;
  SimulationOptions simulation{};
};

struct ReversalReport {
  std::vector<std::size_t> emissions;
  std::vector<std::size_t> absorptions;
  // transport[i][j]: bosons emitted at source i and absorbed at source j.
  std::vector<std::vector<std::size_t>> transport;
  std::vector<double> z;  // (E_j - A_j) / sqrt(E_j + A_j)
  std::size_t total_events = 0;
  bool reversible = true;

  long net_transport(std::size_t i, std::size_t j) const;
};

// Under time reversal emissions at a source become absorptions at the same
// source, so a reversible stationary process balances them source by source.
ReversalReport reversal_test(const GroundState& gs, const ReversalOptions& options);

}  // namespace ibcsym
