#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ibcsym/types.hpp"

namespace ibcsym {

// j = (hbar/m) Im[conj(psi) dpsi].
double boundary_current(cplx psi, cplx dpsi, double m = 1.0, double hbar = 1.0);

// (alpha0 + beta0 d_x) psi(0) = 0, (alpha1 + beta1 d_x) psi(1) = 0.
struct RobinBC {
  cplx alpha0{0.0, 0.0}, beta0{0.0, 0.0};
  cplx alpha1{0.0, 0.0}, beta1{0.0, 0.0};

  static RobinBC dirichlet();
  static RobinBC neumann();
  void validate() const;
};

struct EndVerdict {
  bool conserving = false;
  bool dirichlet = false;
  // Im(alpha/beta), 0 for Dirichlet.
  double im_ratio = 0.0;
};

struct ConservationVerdict {
  EndVerdict left;
  EndVerdict right;
  bool conserving() const { return left.conserving && right.conserving; }
};

ConservationVerdict is_probability_conserving(const RobinBC& bc, double tol = 1e-12);

// Current into the boundary point x = 1 for a function satisfying the
// right-end condition: -(hbar/m) |psi(1)|^2 Im(alpha1/beta1) (0 if Dirichlet).
double robin_right_current(const RobinBC& bc, cplx psi1, double m = 1.0, double hbar = 1.0);
// Current j(0) at the left end: -(hbar/m) |psi(0)|^2 Im(alpha0/beta0).
double robin_left_current(const RobinBC& bc, cplx psi0, double m = 1.0, double hbar = 1.0);

// Second-order finite differences on [0, 1] with `intervals` cells and ghost
// points at Robin ends. Dirichlet ends drop the boundary node.
class RobinGrid {
 public:
  RobinGrid(const RobinBC& bc, std::size_t intervals = 512, double m = 1.0, double hbar = 1.0);

  std::size_t intervals() const { return intervals_; }
  double spacing() const { return h_; }
  // Node coordinates of the unknowns.
  const std::vector<double>& nodes() const { return nodes_; }
  // Trapezoid quadrature weights on the unknowns.
  const Eigen::VectorXd& weights() const { return weights_; }
  // Tridiagonal Hamiltonian (generally non-Hermitian).
  const Eigen::VectorXcd& lower() const { return lower_; }
  const Eigen::VectorXcd& diag() const { return diag_; }
  const Eigen::VectorXcd& upper() const { return upper_; }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi) const;
  double norm_squared(const Eigen::VectorXcd& psi) const;
  Eigen::VectorXcd sample(const std::function<cplx(double)>& f) const;
  // Boundary values psi(0), psi(1) (zero at Dirichlet ends).
  cplx left_value(const Eigen::VectorXcd& psi) const;
  cplx right_value(const Eigen::VectorXcd& psi) const;

  const RobinBC& bc() const { return bc_; }
  double mass() const { return m_; }
  double hbar() const { return hbar_; }

 private:
  RobinBC bc_;
  std::size_t intervals_;
  double m_, hbar_, h_;
  bool left_dirichlet_, right_dirichlet_;
  std::vector<double> nodes_;
  Eigen::VectorXd weights_;
  Eigen::VectorXcd lower_, diag_, upper_;
};

struct NormSample {
  double time = 0.0;
  double norm_squared = 0.0;
  double predicted_rate = 0.0;  // j(0) - j(1) at this time
};

struct RobinEvolution {
  Eigen::VectorXcd final_state;
  std::vector<NormSample> curve;
  double measured_loss = 0.0;   // N(0) - N(T)
  double predicted_loss = 0.0;  // time integral of j(1) - j(0) at step midpoints
};

// Crank-Nicolson evolution of psi0 (sampled on the grid) for time t_max.
RobinEvolution evolve_robin(const RobinGrid& grid, const Eigen::VectorXcd& psi0, double t_max,
                            std::size_t steps, std::size_t record_every = 1);

// exp(-(x-x0)^2 / (4 w^2) + i k x), normalized on the grid.
Eigen::VectorXcd wave_packet(const RobinGrid& grid, double x0, double width, double k);

struct BethePeierlsReport {
  cplx value_at_zero{0.0, 0.0};  // lim r psi
  cplx slope_at_zero{0.0, 0.0};  // lim d_r (r psi)
  cplx residual{0.0, 0.0};       // slope - gamma * value
  cplx conjugate_residual{0.0, 0.0};
  double scale = 0.0;
  bool passed = false;
  bool conjugate_passed = false;
};

// psi sampled at strictly decreasing radii. Throws NumericalError when two
// extrapolations on nested node sets disagree beyond 1e-6 of the scale.
BethePeierlsReport bethe_peierls_check(double gamma, std::span<const double> radii,
                                       std::span<const cplx> psi, double tol = 1e-8);

struct PeriodicMode {
  long n = 0;
  double k = 0.0;
  double energy = 0.0;
  double current = 0.0;  // hbar k / m
};

// Modes e^{ikx}, k = theta + 2 pi n, for n in [n_lo, n_hi], sorted by energy.
std::vector<PeriodicMode> periodic_spectrum(double theta, double m, double hbar, long n_lo,
                                            long n_hi);

struct PeriodicFD {
  Eigen::VectorXd eigenvalues;
  Eigen::VectorXcd ground_state;  // normalized with sum h |psi|^2 = 1
  double ground_energy = 0.0;
  double ground_current = 0.0;    // mean link current of the ground state
  double max_current_deviation = 0.0;
};

// Finite-difference Hamiltonian on N points of [0, 1) with psi(1) = e^{i theta} psi(0).
Eigen::MatrixXcd periodic_fd_matrix(double theta, std::size_t points, double m, double hbar);
PeriodicFD periodic_fd_ground_state(double theta, std::size_t points = 512, double m = 1.0,
                                    double hbar = 1.0);

struct PeriodicVerdict {
  bool symmetric = false;
  double theta_mod_pi = 0.0;  // remainder in (-pi/2, pi/2]
};

PeriodicVerdict symmetry_verdict_periodic(double theta, double tol = 1e-12);

struct WitnessInput {
  cplx alpha{0.0, 0.0};
  cplx beta{0.0, 0.0};
  cplx psi_q{0.0, 0.0};
};

struct WitnessPair {
  cplx u{0.0, 0.0};  // psi(q')
  cplx v{0.0, 0.0};  // d_n psi(q')
  double current = 0.0;
  double ibc_residual = 0.0;  // |alpha u + beta v - psi(q)| / (|alpha u| + |beta v| + |psi(q)|)
};

struct EmissionWitness {
  WitnessPair positive;
  WitnessPair negative;
  std::size_t halvings = 0;
};

// Values u, v with (alpha + beta d_n) psi(q') = psi(q) and current of either
// sign. Throws invalid_argument for psi(q) = 0 or (alpha, beta) = (0, 0),
// NumericalError if the sign check still fails after 60 halvings of r.
EmissionWitness emission_witness(const WitnessInput& w, double m = 1.0, double hbar = 1.0);

}  // namespace ibcsym
