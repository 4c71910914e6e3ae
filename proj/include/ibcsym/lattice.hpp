#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "ibcsym/rng.hpp"
#include "ibcsym/types.hpp"

namespace ibcsym {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using SparseH = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

using Occupation = std::vector<std::uint8_t>;

// Occupation-number states (n_1, ..., n_L) with sum n_s <= n_max, ordered
// by total number and then lexicographically (descending in site 0).
class FockBasis {
 public:
  FockBasis(std::size_t sites, std::size_t n_max);

  std::size_t size() const { return states_.size(); }
  std::size_t sites() const { return sites_; }
  std::size_t n_max() const { return n_max_; }
  const Occupation& state(std::size_t index) const { return states_.at(index); }
  std::size_t number(std::size_t index) const { return numbers_.at(index); }
  // Returns size() if the occupation is outside the truncation.
  std::size_t index_of(const Occupation& occ) const;

  static std::size_t dimension(std::size_t sites, std::size_t n_max);

 private:
  std::size_t sites_;
  std::size_t n_max_;
  std::vector<Occupation> states_;
  std::vector<std::size_t> numbers_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct LatticeSource {
  std::size_t site = 0;
  cplx g{0.0, 0.0};
};

struct LatticeParams {
  std::size_t L = 8;
  double a = 1.0;
  std::size_t n_max = 2;
  double m = 1.0;
  double E0 = 1.0;
  double hbar = 1.0;
  std::vector<LatticeSource> sources;

  // L = 8, a = 1, n_max = 2, sources at sites 2 and 5.
  static LatticeParams preset(cplx g1, cplx g2);
};

class LatticeModel {
 public:
  static constexpr std::size_t max_dimension = 200000;

  LatticeModel(const LatticeParams& params);

  const LatticeParams& params() const { return params_; }
  const FockBasis& basis() const { return basis_; }
  const SparseH& hamiltonian() const { return H_; }
  std::size_t dimension() const { return basis_.size(); }
  double hbar() const { return params_.hbar; }
  CMatrix dense() const;
  std::vector<cplx> charges() const;

  // Same geometry with charges replaced.
  LatticeModel with_charges(const std::vector<cplx>& g) const;

 private:
  LatticeParams params_;
  FockBasis basis_;
  SparseH H_;
};

LatticeModel build_model(const LatticeParams& params);

// max |H - H^dagger| over entries.
double hermiticity_defect(const LatticeModel& model);

// Exact propagator from a full eigendecomposition (dim <= 2000) or a
// Chebyshev expansion of exp(-iHt/hbar) on the sparse matrix above that.
class Propagator {
 public:
  static constexpr std::size_t dense_limit = 2000;

  explicit Propagator(const LatticeModel& model);

  CVector operator()(const CVector& psi, double t) const;
  bool dense() const { return dense_; }
  const Eigen::VectorXd& eigenvalues() const { return energies_; }
  const CMatrix& eigenvectors() const { return vectors_; }

 private:
  const LatticeModel* model_;
  bool dense_;
  Eigen::VectorXd energies_;
  CMatrix vectors_;
  double spectrum_low_ = 0.0;
  double spectrum_high_ = 0.0;
};

CVector evolve(const LatticeModel& model, const CVector& psi, double t);

// Largest singular value of a sparse matrix by power iteration on A^dagger A.
double operator_norm(const SparseH& A, double rtol = 1e-10, std::size_t max_iter = 20000);

// Matrix of the linear part of T_theta H - H T_theta, where T_theta acts as
// diag(e^{-2 i theta n}) composed with complex conjugation:
//   D conj(H) - H D.
SparseH T_commutator(const LatticeModel& model, double theta);
double check_T_commutation(const LatticeModel& model, double theta);

struct ThetaScan {
  double theta = 0.0;      // minimizer after refinement, in [0, pi)
  double min_norm = 0.0;   // operator norm at theta
  double grid_min = 0.0;   // operator norm at the best grid point
  std::size_t grid_points = 0;
};

// Scans theta over a uniform grid on [0, pi) and refines the best grid
// point by golden-section search on the Frobenius norm.
ThetaScan scan_T_commutation(const LatticeModel& model, std::size_t grid_points = 720,
                             bool refine = true);

// || U^{-1} H_{e^{i theta} g} U - H_g || with U = diag(e^{-i theta n}).
double check_gauge_equivalence(const LatticeModel& model, double theta);
// U^{-1} H U for the model's own H.
SparseH gauge_conjugate(const LatticeModel& model, double theta);

struct JumpRate {
  std::size_t target = 0;
  double rate = 0.0;
};

// Minimal jump rates out of basis state q.
std::vector<JumpRate> bell_jump_rates(const LatticeModel& model, const CVector& psi,
                                      std::size_t q);

// Net probability current (2/hbar) Im[conj(psi(q')) H_{q'q} psi(q)] from q to q'.
double basis_current(const LatticeModel& model, const CVector& psi, std::size_t q,
                     std::size_t q_to);

struct BellJump {
  double time = 0.0;
  std::size_t from = 0;
  std::size_t to = 0;
};

struct LatticeTrajectory {
  std::uint64_t seed = 0;
  std::size_t initial = 0;
  std::vector<BellJump> jumps;
  std::size_t final_state = 0;
  double t_end = 0.0;
};

struct BellOptions {
  double dt = 1e-3;
  // Warn when rate * dt exceeds this in any visited cell.
  double rate_step_cap = 0.2;
  double node_threshold = 1e-300;
};

// Piecewise-constant rate tables on a uniform time grid, built from psi_t
// at cell midpoints. Within a cell the chain is an exact homogeneous CTMC.
class BellSchedule {
 public:
  BellSchedule(const LatticeModel& model, const CVector& psi0, double t_max,
               const BellOptions& options = {});

  double t_max() const { return t_max_; }
  std::size_t cells() const { return cells_; }
  double cell_width() const { return dt_; }
  const CVector& psi0() const { return psi0_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  LatticeTrajectory run(std::uint64_t seed, bool record_jumps = true) const;

 private:
  struct Row {
    double total = 0.0;
    std::vector<JumpRate> out;
  };
  double t_max_;
  double dt_;
  std::size_t cells_;
  CVector psi0_;
  std::vector<double> initial_cdf_;
  std::vector<std::vector<Row>> table_;  // [cell][state]
  std::vector<std::string> warnings_;
};

LatticeTrajectory run_bell_process(const LatticeModel& model, const CVector& psi0, double t_max,
                                   std::uint64_t seed, const BellOptions& options = {});

struct BellEnsemble {
  std::vector<std::size_t> final_states;
  std::vector<double> exact_probabilities;
  double chi_square = 0.0;
  double dof = 0.0;
  double p_value = 0.0;
  std::vector<std::string> warnings;
};

// Runs `chains` independent chains and compares the final-state histogram
// with |psi_t|^2.
BellEnsemble bell_equivariance(const LatticeModel& model, const CVector& psi0, double t_max,
                               std::size_t chains, std::uint64_t seed,
                               const BellOptions& options = {});

struct ReversalCheck {
  double max_discrepancy = 0.0;
  double scale = 0.0;
  std::size_t pairs_checked = 0;
  double commutator_norm = 0.0;
  bool passed = false;
};

// Pointwise test of
//   sigma^{T psi}(q -> q') |T psi(q)|^2 = sigma^{psi}(q' -> q) |psi(q')|^2
// over all connected basis pairs.
ReversalCheck reversal_conditions_check(const LatticeModel& model, double theta,
                                        const CVector& psi, double tol = 1e-10);

struct GroundCurrent {
  double energy = 0.0;
  double gap = 0.0;
  CVector state;
  std::map<std::pair<std::size_t, std::size_t>, double> current;  // q < q'
  double max_abs = 0.0;
};

// Exact ground state and its basis-pair currents. Throws NumericalError if
// the ground state is degenerate (gap <= 1e-8).
GroundCurrent ground_state_current(const LatticeModel& model);

double lattice_ground_energy(const LatticeModel& model);

// T_theta psi = diag(e^{-2 i theta n}) conj(psi).
CVector apply_T(const LatticeModel& model, double theta, const CVector& psi);
// U psi = diag(e^{-i theta n}) psi.
CVector apply_U(const LatticeModel& model, double theta, const CVector& psi);

CVector random_state(std::size_t dim, Rng& rng);

}  // namespace ibcsym
