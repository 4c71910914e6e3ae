#include "ibcsym/boundary1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ibcsym/extrapolation.hpp"

namespace ibcsym {

double boundary_current(cplx psi, cplx dpsi, double m, double hbar) {
  return hbar / m * std::imag(std::conj(psi) * dpsi);
}

RobinBC RobinBC::dirichlet() { return {{1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}}; }

RobinBC RobinBC::neumann() { return {{0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}; }

void RobinBC::validate() const {
  if (alpha0 == cplx(0.0) && beta0 == cplx(0.0))
    throw std::invalid_argument("boundary condition at x = 0 has alpha = beta = 0");
  if (alpha1 == cplx(0.0) && beta1 == cplx(0.0))
    throw std::invalid_argument("boundary condition at x = 1 has alpha = beta = 0");
}

namespace {

EndVerdict end_verdict(cplx alpha, cplx beta, double tol) {
  EndVerdict v;
  if (beta == cplx(0.0)) {
    v.dirichlet = true;
    v.conserving = true;
    return v;
  }
  v.im_ratio = std::imag(alpha / beta);
  v.conserving = std::abs(v.im_ratio) <= tol;
  return v;
}

}  // namespace

ConservationVerdict is_probability_conserving(const RobinBC& bc, double tol) {
  bc.validate();
  return {end_verdict(bc.alpha0, bc.beta0, tol), end_verdict(bc.alpha1, bc.beta1, tol)};
}

double robin_right_current(const RobinBC& bc, cplx psi1, double m, double hbar) {
  if (bc.beta1 == cplx(0.0)) return 0.0;
  return -hbar / m * std::norm(psi1) * std::imag(bc.alpha1 / bc.beta1);
}

double robin_left_current(const RobinBC& bc, cplx psi0, double m, double hbar) {
  if (bc.beta0 == cplx(0.0)) return 0.0;
  return -hbar / m * std::norm(psi0) * std::imag(bc.alpha0 / bc.beta0);
}

RobinGrid::RobinGrid(const RobinBC& bc, std::size_t intervals, double m, double hbar)
    : bc_(bc), intervals_(intervals), m_(m), hbar_(hbar), h_(1.0 / static_cast<double>(intervals)) {
  bc.validate();
  if (intervals < 4) throw std::invalid_argument("grid needs at least 4 intervals");
  if (!(m > 0.0) || !(hbar > 0.0)) throw std::invalid_argument("m and hbar must be positive");
  left_dirichlet_ = bc.beta0 == cplx(0.0);
  right_dirichlet_ = bc.beta1 == cplx(0.0);
  const std::size_t first = left_dirichlet_ ? 1 : 0;
  const std::size_t last = right_dirichlet_ ? intervals - 1 : intervals;
  const std::size_t n = last - first + 1;
  for (std::size_t k = first; k <= last; ++k) nodes_.push_back(static_cast<double>(k) * h_);
  weights_ = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), h_);
  const double c = -hbar * hbar / (2.0 * m * h_ * h_);
  lower_ = Eigen::VectorXcd::Constant(static_cast<Eigen::Index>(n), c);
  upper_ = lower_;
  diag_ = Eigen::VectorXcd::Constant(static_cast<Eigen::Index>(n), -2.0 * c);
  lower_[0] = 0.0;
  upper_[static_cast<Eigen::Index>(n - 1)] = 0.0;
  if (!left_dirichlet_) {
    const cplx c0 = bc.alpha0 / bc.beta0;
    upper_[0] = 2.0 * c;
    diag_[0] = c * (-2.0 + 2.0 * h_ * c0);
    weights_[0] = 0.5 * h_;
  }
  if (!right_dirichlet_) {
    const cplx c1 = bc.alpha1 / bc.beta1;
    const auto e = static_cast<Eigen::Index>(n - 1);
    lower_[e] = 2.0 * c;
    diag_[e] = c * (-2.0 - 2.0 * h_ * c1);
    weights_[e] = 0.5 * h_;
  }
}

Eigen::VectorXcd RobinGrid::apply(const Eigen::VectorXcd& psi) const {
  const Eigen::Index n = diag_.size();
  Eigen::VectorXcd out(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    cplx v = diag_[k] * psi[k];
    if (k > 0) v += lower_[k] * psi[k - 1];
    if (k + 1 < n) v += upper_[k] * psi[k + 1];
    out[k] = v;
  }
  return out;
}

double RobinGrid::norm_squared(const Eigen::VectorXcd& psi) const {
  return (weights_.array() * psi.array().abs2()).sum();
}

Eigen::VectorXcd RobinGrid::sample(const std::function<cplx(double)>& f) const {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(nodes_.size()));
  for (std::size_t k = 0; k < nodes_.size(); ++k) out[static_cast<Eigen::Index>(k)] = f(nodes_[k]);
  return out;
}

cplx RobinGrid::left_value(const Eigen::VectorXcd& psi) const {
  return left_dirichlet_ ? cplx(0.0) : psi[0];
}

cplx RobinGrid::right_value(const Eigen::VectorXcd& psi) const {
  return right_dirichlet_ ? cplx(0.0) : psi[psi.size() - 1];
}

RobinEvolution evolve_robin(const RobinGrid& grid, const Eigen::VectorXcd& psi0, double t_max,
                            std::size_t steps, std::size_t record_every) {
  const Eigen::Index n = grid.diag().size();
  if (psi0.size() != n) throw std::invalid_argument("state does not match the grid");
  if (steps == 0 || !(t_max > 0.0)) throw std::invalid_argument("need t_max > 0 and steps > 0");
  if (record_every == 0) record_every = 1;
  const double dt = t_max / static_cast<double>(steps);
  const cplx z(0.0, 0.5 * dt / grid.hbar());
  const double m = grid.mass(), hb = grid.hbar();

  // Thomas factorization of (I + z H).
  Eigen::VectorXcd a = z * grid.lower(), b = Eigen::VectorXcd::Ones(n) + z * grid.diag(),
                   c = z * grid.upper();
  Eigen::VectorXcd cp(n), denom(n);
  denom[0] = b[0];
  cp[0] = c[0] / denom[0];
  for (Eigen::Index k = 1; k < n; ++k) {
    denom[k] = b[k] - a[k] * cp[k - 1];
    if (std::abs(denom[k]) < 1e-300) throw NumericalError("Crank-Nicolson system is singular");
    cp[k] = c[k] / denom[k];
  }

  auto rate = [&](const Eigen::VectorXcd& psi) {
    return robin_left_current(grid.bc(), grid.left_value(psi), m, hb) -
           robin_right_current(grid.bc(), grid.right_value(psi), m, hb);
  };

  RobinEvolution out;
  Eigen::VectorXcd psi = psi0;
  const double n0 = grid.norm_squared(psi);
  out.curve.push_back({0.0, n0, rate(psi)});
  Eigen::VectorXcd rhs(n), dp(n);
  for (std::size_t s = 1; s <= steps; ++s) {
    rhs = psi - z * grid.apply(psi);
    dp[0] = rhs[0] / denom[0];
    for (Eigen::Index k = 1; k < n; ++k) dp[k] = (rhs[k] - a[k] * dp[k - 1]) / denom[k];
    Eigen::VectorXcd next(n);
    next[n - 1] = dp[n - 1];
    for (Eigen::Index k = n - 1; k-- > 0;) next[k] = dp[k] - cp[k] * next[k + 1];
    const Eigen::VectorXcd mid = 0.5 * (psi + next);
    out.predicted_loss -= dt * rate(mid);
    psi = std::move(next);
    if (!psi.allFinite()) throw NumericalError("Crank-Nicolson evolution diverged");
    if (s % record_every == 0 || s == steps)
      out.curve.push_back({dt * static_cast<double>(s), grid.norm_squared(psi), rate(psi)});
  }
  out.measured_loss = n0 - grid.norm_squared(psi);
  out.final_state = std::move(psi);
  return out;
}

Eigen::VectorXcd wave_packet(const RobinGrid& grid, double x0, double width, double k) {
  Eigen::VectorXcd psi = grid.sample([&](double x) {
    const double d = x - x0;
    return std::exp(cplx(-d * d / (4.0 * width * width), k * x));
  });
  return psi / std::sqrt(grid.norm_squared(psi));
}

BethePeierlsReport bethe_peierls_check(double gamma, std::span<const double> radii,
                                       std::span<const cplx> psi, double tol) {
  if (radii.size() != psi.size()) throw std::invalid_argument("radii and samples differ in length");
  if (radii.size() < 3) throw std::invalid_argument("need at least three radial samples");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0)) throw std::invalid_argument("radii must be positive");
    if (k > 0 && !(radii[k] < radii[k - 1]))
      throw std::invalid_argument("radii must be strictly decreasing");
  }
  std::vector<cplx> F(radii.size());
  for (std::size_t k = 0; k < radii.size(); ++k) F[k] = radii[k] * psi[k];
  const std::span<const cplx> Fs(F);
  BethePeierlsReport rep;
  rep.value_at_zero = extrapolate_to_zero<cplx>(radii, Fs);
  rep.slope_at_zero = slope_at_zero<cplx>(radii, Fs);
  rep.scale = std::max({std::abs(rep.value_at_zero), std::abs(rep.slope_at_zero),
                        std::abs(gamma * rep.value_at_zero), 1e-300});
  const cplx v2 = extrapolate_to_zero<cplx>(radii.subspan(1), Fs.subspan(1));
  const cplx s2 = slope_at_zero<cplx>(radii.subspan(1), Fs.subspan(1));
  if (std::abs(v2 - rep.value_at_zero) > 1e-6 * rep.scale ||
      std::abs(s2 - rep.slope_at_zero) > 1e-6 * rep.scale)
    throw NumericalError("radial extrapolation did not converge");
  rep.residual = rep.slope_at_zero - gamma * rep.value_at_zero;
  // conj(F) has value conj(F(0)) and slope conj(F'(0)); gamma is real.
  rep.conjugate_residual = std::conj(rep.slope_at_zero) - gamma * std::conj(rep.value_at_zero);
  rep.passed = std::abs(rep.residual) <= tol * rep.scale;
  rep.conjugate_passed = std::abs(rep.conjugate_residual) <= tol * rep.scale;
  return rep;
}

std::vector<PeriodicMode> periodic_spectrum(double theta, double m, double hbar, long n_lo,
                                            long n_hi) {
  if (n_hi < n_lo) throw std::invalid_argument("empty mode range");
  std::vector<PeriodicMode> out;
  for (long n = n_lo; n <= n_hi; ++n) {
    const double k = theta + 2.0 * pi * static_cast<double>(n);
    out.push_back({n, k, hbar * hbar * k * k / (2.0 * m), hbar * k / m});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const PeriodicMode& a, const PeriodicMode& b) { return a.energy < b.energy; });
  return out;
}

Eigen::MatrixXcd periodic_fd_matrix(double theta, std::size_t points, double m, double hbar) {
  if (points < 3) throw std::invalid_argument("periodic grid needs at least 3 points");
  const auto n = static_cast<Eigen::Index>(points);
  const double h = 1.0 / static_cast<double>(points);
  const double c = hbar * hbar / (2.0 * m * h * h);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    H(k, k) = 2.0 * c;
    if (k + 1 < n) {
      H(k, k + 1) = -c;
      H(k + 1, k) = -c;
    }
  }
  // psi_N = e^{i theta} psi_0
  H(n - 1, 0) = -c * std::polar(1.0, theta);
  H(0, n - 1) = -c * std::polar(1.0, -theta);
  return H;
}

PeriodicFD periodic_fd_ground_state(double theta, std::size_t points, double m, double hbar) {
  const Eigen::MatrixXcd H = periodic_fd_matrix(theta, points, m, hbar);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  PeriodicFD out;
  out.eigenvalues = es.eigenvalues();
  out.ground_energy = out.eigenvalues[0];
  const double h = 1.0 / static_cast<double>(points);
  Eigen::VectorXcd psi = es.eigenvectors().col(0);
  psi /= std::sqrt(h) * psi.norm();
  const auto n = psi.size();
  std::vector<double> link(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const cplx next = k + 1 < n ? psi[k + 1] : std::polar(1.0, theta) * psi[0];
    link[static_cast<std::size_t>(k)] = hbar / m * std::imag(std::conj(psi[k]) * next) / h;
    sum += link[static_cast<std::size_t>(k)];
  }
  out.ground_current = sum / static_cast<double>(n);
  for (double j : link)
    out.max_current_deviation = std::max(out.max_current_deviation, std::abs(j - out.ground_current));
  out.ground_state = std::move(psi);
  return out;
}

PeriodicVerdict symmetry_verdict_periodic(double theta, double tol) {
  PeriodicVerdict v;
  v.theta_mod_pi = std::remainder(theta, pi);
  v.symmetric = std::abs(v.theta_mod_pi) <= tol;
  return v;
}

namespace {

WitnessPair make_pair(const WitnessInput& w, cplx u, cplx v, double m, double hbar) {
  WitnessPair p{u, v, boundary_current(u, v, m, hbar), 0.0};
  const double scale = std::abs(w.alpha * u) + std::abs(w.beta * v) + std::abs(w.psi_q);
  p.ibc_residual = std::abs(w.alpha * u + w.beta * v - w.psi_q) / scale;
  return p;
}

}  // namespace

EmissionWitness emission_witness(const WitnessInput& w, double m, double hbar) {
  if (w.alpha == cplx(0.0) && w.beta == cplx(0.0))
    throw std::invalid_argument("alpha and beta must not both vanish");
  if (w.psi_q == cplx(0.0)) throw std::invalid_argument("psi(q) must be nonzero");
  EmissionWitness out;
  if (w.beta == cplx(0.0)) {
    const cplx u = w.psi_q / w.alpha;
    out.positive = make_pair(w, u, cplx(0.0, 1.0) * u, m, hbar);
    out.negative = make_pair(w, u, cplx(0.0, -1.0) * u, m, hbar);
    if (!(out.positive.current > 0.0) || !(out.negative.current < 0.0))
      throw NumericalError("witness current has the wrong sign");
    return out;
  }
  const cplx ratio = w.psi_q / w.beta;
  const double s = std::abs(ratio);
  const double chi = std::arg(ratio);
  const double im = std::imag(w.alpha / w.beta);
  double r = s / (2.0 * (1.0 + std::abs(im)));
  for (std::size_t halvings = 0; halvings <= 60; ++halvings, r *= 0.5) {
    const cplx up = std::polar(r, chi - 0.5 * pi);
    const cplx un = std::polar(r, chi + 0.5 * pi);
    out.positive = make_pair(w, up, (w.psi_q - w.alpha * up) / w.beta, m, hbar);
    out.negative = make_pair(w, un, (w.psi_q - w.alpha * un) / w.beta, m, hbar);
    out.halvings = halvings;
    if (out.positive.current > 0.0 && out.negative.current < 0.0) return out;
  }
  throw NumericalError("no witness of both current signs found");
}

}  // namespace ibcsym
