#include "ibcsym/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "ibcsym/parallel.hpp"
#include "ibcsym/stats.hpp"

namespace ibcsym {

namespace {

std::string key_of(const Occupation& occ) { return std::string(occ.begin(), occ.end()); }

void compositions(std::size_t site, std::size_t remaining, Occupation& occ,
                  std::vector<Occupation>& out) {
  if (site + 1 == occ.size()) {
    occ[site] = static_cast<std::uint8_t>(remaining);
    out.push_back(occ);
    return;
  }
  for (std::size_t k = remaining + 1; k-- > 0;) {
    occ[site] = static_cast<std::uint8_t>(k);
    compositions(site + 1, remaining - k, occ, out);
  }
}

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i)
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace

std::size_t FockBasis::dimension(std::size_t sites, std::size_t n_max) {
  double total = 0.0;
  for (std::size_t k = 0; k <= n_max; ++k) total += binomial(sites + k - 1, k);
  if (total > 1e15) return std::numeric_limits<std::size_t>::max();
  return static_cast<std::size_t>(std::llround(total));
}

FockBasis::FockBasis(std::size_t sites, std::size_t n_max) : sites_(sites), n_max_(n_max) {
  if (sites == 0) throw std::invalid_argument("lattice needs at least one site");
  if (n_max > 255) throw std::invalid_argument("n_max too large");
  Occupation occ(sites, 0);
  for (std::size_t k = 0; k <= n_max; ++k) compositions(0, k, occ, states_);
  for (std::size_t i = 0; i < states_.size(); ++i) {
    std::size_t n = 0;
    for (auto v : states_[i]) n += v;
    numbers_.push_back(n);
    index_.emplace(key_of(states_[i]), i);
  }
}

std::size_t FockBasis::index_of(const Occupation& occ) const {
  auto it = index_.find(key_of(occ));
  return it == index_.end() ? size() : it->second;
}

LatticeParams LatticeParams::preset(cplx g1, cplx g2) {
  LatticeParams p;
  p.sources = {{2, g1}, {5, g2}};
  return p;
}

namespace {

void validate(const LatticeParams& p) {
  if (p.L < 2) throw std::invalid_argument("lattice needs L >= 2");
  if (p.n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  if (!(p.a > 0.0)) throw std::invalid_argument("lattice spacing must be positive");
  if (!(p.m > 0.0)) throw std::invalid_argument("boson mass m must be positive");
  if (!(p.hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
  std::set<std::size_t> seen;
  for (const auto& s : p.sources) {
    if (s.site >= p.L) throw std::invalid_argument("source site out of range");
    if (!seen.insert(s.site).second) throw std::invalid_argument("source sites must be distinct");
  }
  if (FockBasis::dimension(p.L, p.n_max) > LatticeModel::max_dimension)
    throw std::invalid_argument("Fock space dimension exceeds 200000");
}

const LatticeParams& validated(const LatticeParams& p) {
  validate(p);
  return p;
}

}  // namespace

LatticeModel::LatticeModel(const LatticeParams& params)
    : params_(validated(params)), basis_(params.L, params.n_max) {
  const auto& p = params_;
  const std::size_t dim = basis_.size();
  const double hop = -p.hbar * p.hbar / (2.0 * p.m * p.a * p.a);
  const double diag = p.E0 + p.hbar * p.hbar / (p.m * p.a * p.a);
  std::vector<Eigen::Triplet<cplx>> trip;
  for (std::size_t col = 0; col < dim; ++col) {
    const Occupation& q = basis_.state(col);
    const std::size_t n = basis_.number(col);
    if (n > 0) trip.emplace_back(col, col, cplx(diag * static_cast<double>(n), 0.0));
    // hopping s -> s +- 1
    for (std::size_t s = 0; s < p.L; ++s) {
      if (q[s] == 0) continue;
      for (int d : {-1, 1}) {
        if ((d < 0 && s == 0) || (d > 0 && s + 1 == p.L)) continue;
        const std::size_t t = s + d;
        Occupation r = q;
        --r[s];
        ++r[t];
        const std::size_t row = basis_.index_of(r);
        trip.emplace_back(row, col, cplx(hop * std::sqrt(double(q[s]) * double(q[t] + 1)), 0.0));
      }
    }
    for (const auto& src : p.sources) {
      const std::size_t s = src.site;
      if (q[s] > 0) {
        Occupation r = q;
        --r[s];
        trip.emplace_back(basis_.index_of(r), col, src.g * std::sqrt(double(q[s])));
      }
      if (n < p.n_max) {
        Occupation r = q;
        ++r[s];
        trip.emplace_back(basis_.index_of(r), col, std::conj(src.g) * std::sqrt(double(q[s] + 1)));
      }
    }
  }
  H_.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  H_.setFromTriplets(trip.begin(), trip.end());
  H_.makeCompressed();
}

CMatrix LatticeModel::dense() const { return CMatrix(H_); }

std::vector<cplx> LatticeModel::charges() const {
  std::vector<cplx> g;
  for (const auto& s : params_.sources) g.push_back(s.g);
  return g;
}

LatticeModel LatticeModel::with_charges(const std::vector<cplx>& g) const {
  if (g.size() != params_.sources.size())
    throw std::invalid_argument("charge count does not match the source count");
  LatticeParams p = params_;
  for (std::size_t j = 0; j < g.size(); ++j) p.sources[j].g = g[j];
  return LatticeModel(p);
}

LatticeModel build_model(const LatticeParams& params) { return LatticeModel(params); }

double hermiticity_defect(const LatticeModel& model) {
  const SparseH& H = model.hamiltonian();
  const SparseH diff = SparseH(H.adjoint()) - H;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
    for (SparseH::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

Propagator::Propagator(const LatticeModel& model)
    : model_(&model), dense_(model.dimension() <= dense_limit) {
  if (dense_) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(model.dense());
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    energies_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
  } else {
    // Gershgorin bounds
    const SparseH& H = model.hamiltonian();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Eigen::Index k = 0; k < H.outerSize(); ++k) {
      double centre = 0.0, radius = 0.0;
      for (SparseH::InnerIterator it(H, k); it; ++it) {
        if (it.row() == it.col())
          centre = it.value().real();
        else
          radius += std::abs(it.value());
      }
      lo = std::min(lo, centre - radius);
      hi = std::max(hi, centre + radius);
    }
    spectrum_low_ = lo;
    spectrum_high_ = hi;
  }
}

CVector Propagator::operator()(const CVector& psi, double t) const {
  if (psi.size() != static_cast<Eigen::Index>(model_->dimension()))
    throw std::invalid_argument("state dimension does not match the model");
  const double hb = model_->hbar();
  if (t == 0.0) return psi;
  if (dense_) {
    CVector c = vectors_.adjoint() * psi;
    for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::exp(cplx(0.0, -energies_[k] * t / hb));
    return vectors_ * c;
  }
  // Chebyshev expansion, split into pieces with w |t| / hbar <= 50.
  const SparseH& H = model_->hamiltonian();
  const double centre = 0.5 * (spectrum_high_ + spectrum_low_);
  const double width = std::max(0.5 * (spectrum_high_ - spectrum_low_), 1e-300);
  const std::size_t pieces =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(width * std::abs(t) / hb / 50.0)));
  const double tau = t / static_cast<double>(pieces);
  const double z = width * tau / hb;
  const std::size_t terms = static_cast<std::size_t>(std::abs(z)) + 40;
  auto apply_scaled = [&](const CVector& v) -> CVector { return (H * v - centre * v) / width; };
  CVector out = psi;
  for (std::size_t p = 0; p < pieces; ++p) {
    CVector t0 = out;
    CVector t1 = apply_scaled(out);
    CVector acc = std::cyl_bessel_j(0.0, std::abs(z)) * t0;
    const double sgn = z < 0 ? -1.0 : 1.0;
    cplx phase(0.0, -sgn);  // (-i)^k, with J_k(-x) = (-1)^k J_k(x)
    acc += 2.0 * phase * std::cyl_bessel_j(1.0, std::abs(z)) * t1;
    for (std::size_t k = 2; k <= terms; ++k) {
      CVector t2 = 2.0 * apply_scaled(t1) - t0;
      phase *= cplx(0.0, -sgn);
      const double jk = std::cyl_bessel_j(static_cast<double>(k), std::abs(z));
      acc += 2.0 * phase * jk * t2;
      t0 = std::move(t1);
      t1 = std::move(t2);
      if (static_cast<double>(k) > std::abs(z) && std::abs(jk) < 1e-17) break;
    }
    out = std::exp(cplx(0.0, -centre * tau / hb)) * acc;
  }
  return out;
}

CVector evolve(const LatticeModel& model, const CVector& psi, double t) {
  return Propagator(model)(psi, t);
}

double operator_norm(const SparseH& A, double rtol, std::size_t max_iter) {
  double frob = 0.0;
  for (Eigen::Index k = 0; k < A.outerSize(); ++k)
    for (SparseH::InnerIterator it(A, k); it; ++it) frob += std::norm(it.value());
  if (frob == 0.0) return 0.0;
  const Eigen::Index n = A.cols();
  CVector v(n);
  for (Eigen::Index k = 0; k < n; ++k)
    v[k] = cplx(1.0 + 0.5 * std::sin(1.0 + static_cast<double>(k)),
                0.25 * std::cos(2.0 + 3.0 * static_cast<double>(k)));
  v.normalize();
  double lambda = 0.0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    const CVector w = A * v;
    const double next = w.squaredNorm();
    CVector u = A.adjoint() * w;
    const double un = u.norm();
    if (un == 0.0) return std::sqrt(next);
    v = u / un;
    if (std::abs(next - lambda) <= rtol * next) return std::sqrt(next);
    lambda = next;
  }
  return std::sqrt(lambda);
}

namespace {

template <class EntryFn>
SparseH map_entries(const LatticeModel& model, EntryFn fn) {
  const SparseH& H = model.hamiltonian();
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(static_cast<std::size_t>(H.nonZeros()));
  for (Eigen::Index k = 0; k < H.outerSize(); ++k)
    for (SparseH::InnerIterator it(H, k); it; ++it)
      trip.emplace_back(it.row(), it.col(), fn(static_cast<std::size_t>(it.row()),
                                                static_cast<std::size_t>(it.col()), it.value()));
  SparseH out(H.rows(), H.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

double commutator_frobenius(const LatticeModel& model, double theta) {
  const SparseH& H = model.hamiltonian();
  const auto& basis = model.basis();
  double sum = 0.0;
  for (Eigen::Index k = 0; k < H.outerSize(); ++k)
    for (SparseH::InnerIterator it(H, k); it; ++it) {
      const double na = static_cast<double>(basis.number(static_cast<std::size_t>(it.row())));
      const double nb = static_cast<double>(basis.number(static_cast<std::size_t>(it.col())));
      const cplx e = std::polar(1.0, -2.0 * theta * na) * std::conj(it.value()) -
                     it.value() * std::polar(1.0, -2.0 * theta * nb);
      sum += std::norm(e);
    }
  return std::sqrt(sum);
}

}  // namespace

SparseH T_commutator(const LatticeModel& model, double theta) {
  const auto& basis = model.basis();
  return map_entries(model, [&](std::size_t a, std::size_t b, cplx h) {
    return std::polar(1.0, -2.0 * theta * double(basis.number(a))) * std::conj(h) -
           h * std::polar(1.0, -2.0 * theta * double(basis.number(b)));
  });
}

double check_T_commutation(const LatticeModel& model, double theta) {
  return operator_norm(T_commutator(model, theta));
}

ThetaScan scan_T_commutation(const LatticeModel& model, std::size_t grid_points, bool refine) {
  if (grid_points == 0) throw std::invalid_argument("theta grid must be nonempty");
  const double step = pi / static_cast<double>(grid_points);
  std::size_t best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double v = commutator_frobenius(model, step * static_cast<double>(k));
    if (v < best_val) {
      best_val = v;
      best = k;
    }
  }
  ThetaScan scan;
  scan.grid_points = grid_points;
  const double grid_theta = step * static_cast<double>(best);
  scan.grid_min = check_T_commutation(model, grid_theta);
  scan.theta = grid_theta;
  scan.min_norm = scan.grid_min;
  if (refine) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = grid_theta - step, hi = grid_theta + step;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = commutator_frobenius(model, c), fd = commutator_frobenius(model, d);
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      if (fc <= fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - gr * (hi - lo);
        fc = commutator_frobenius(model, c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + gr * (hi - lo);
        fd = commutator_frobenius(model, d);
      }
    }
    double theta = 0.5 * (lo + hi);
    theta = std::fmod(theta, pi);
    if (theta < 0.0) theta += pi;
    const double refined = check_T_commutation(model, theta);
    if (refined < scan.min_norm) {
      scan.min_norm = refined;
      scan.theta = theta;
    }
  }
  return scan;
}

SparseH gauge_conjugate(const LatticeModel& model, double theta) {
  const auto& basis = model.basis();
  return map_entries(model, [&](std::size_t a, std::size_t b, cplx h) {
    return std::polar(1.0, theta * double(basis.number(a))) * h *
           std::polar(1.0, -theta * double(basis.number(b)));
  });
}

double check_gauge_equivalence(const LatticeModel& model, double theta) {
  auto g = model.charges();
  for (auto& x : g) x *= std::polar(1.0, theta);
  const LatticeModel rotated = model.with_charges(g);
  const SparseH diff = gauge_conjugate(rotated, theta) - model.hamiltonian();
  return operator_norm(diff);
}

std::vector<JumpRate> bell_jump_rates(const LatticeModel& model, const CVector& psi,
                                      std::size_t q) {
  if (psi.size() != static_cast<Eigen::Index>(model.dimension()))
    throw std::invalid_argument("state dimension does not match the model");
  const double w = std::norm(psi[static_cast<Eigen::Index>(q)]);
  if (!(w > 1e-300)) throw NumericalError("jump rates undefined at a node of psi");
  const SparseH& H = model.hamiltonian();
  std::vector<JumpRate> out;
  for (SparseH::InnerIterator it(H, static_cast<Eigen::Index>(q)); it; ++it) {
    const auto r = static_cast<std::size_t>(it.row());
    if (r == q) continue;
    const double x = std::imag(std::conj(psi[it.row()]) * it.value() * psi[static_cast<Eigen::Index>(q)]);
    out.push_back({r, 2.0 / model.hbar() * std::max(0.0, x) / w});
  }
  return out;
}

double basis_current(const LatticeModel& model, const CVector& psi, std::size_t q,
                     std::size_t q_to) {
  const cplx h = model.hamiltonian().coeff(static_cast<Eigen::Index>(q_to), static_cast<Eigen::Index>(q));
  return 2.0 / model.hbar() *
         std::imag(std::conj(psi[static_cast<Eigen::Index>(q_to)]) * h * psi[static_cast<Eigen::Index>(q)]);
}

BellSchedule::BellSchedule(const LatticeModel& model, const CVector& psi0, double t_max,
                           const BellOptions& options)
    : t_max_(t_max) {
  if (!(t_max >= 0.0)) throw std::invalid_argument("t_max must be non-negative");
  if (!(options.dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const double norm = psi0.norm();
  if (std::abs(norm - 1.0) > 1e-9) throw std::invalid_argument("initial state must be normalized");
  psi0_ = psi0;
  cells_ = t_max > 0.0 ? static_cast<std::size_t>(std::ceil(t_max / options.dt)) : 0;
  dt_ = cells_ > 0 ? t_max / static_cast<double>(cells_) : 0.0;

  double acc = 0.0;
  for (Eigen::Index k = 0; k < psi0.size(); ++k) {
    acc += std::norm(psi0[k]);
    initial_cdf_.push_back(acc);
  }

  const Propagator prop(model);
  const SparseH& H = model.hamiltonian();
  const double hb = model.hbar();
  const std::size_t dim = model.dimension();
  table_.resize(cells_);
  bool node_seen = false;
  double worst_step = 0.0;
  for (std::size_t c = 0; c < cells_; ++c) {
    const CVector psi = prop(psi0, (static_cast<double>(c) + 0.5) * dt_);
    auto& rows = table_[c];
    rows.resize(dim);
    for (std::size_t q = 0; q < dim; ++q) {
      const double w = std::norm(psi[static_cast<Eigen::Index>(q)]);
      if (!(w > options.node_threshold)) {
        node_seen = true;
        continue;
      }
      Row& row = rows[q];
      for (SparseH::InnerIterator it(H, static_cast<Eigen::Index>(q)); it; ++it) {
        if (static_cast<std::size_t>(it.row()) == q) continue;
        const double x = std::imag(std::conj(psi[it.row()]) * it.value() * psi[static_cast<Eigen::Index>(q)]);
        if (x <= 0.0) continue;
        const double rate = 2.0 / hb * x / w;
        row.out.push_back({static_cast<std::size_t>(it.row()), rate});
        row.total += rate;
      }
      if (w > 1e-12) worst_step = std::max(worst_step, row.total * dt_);
    }
  }
  if (node_seen) warnings_.push_back("psi_t has nodes on the time grid; rates there set to zero");
  if (worst_step > options.rate_step_cap)
    warnings_.push_back("rate * dt reaches " + std::to_string(worst_step) +
                        "; piecewise-constant rates may be inaccurate");
}

LatticeTrajectory BellSchedule::run(std::uint64_t seed, bool record_jumps) const {
  Rng rng(seed);
  LatticeTrajectory tr;
  tr.seed = seed;
  const double u = uniform01(rng) * initial_cdf_.back();
  std::size_t q = static_cast<std::size_t>(
      std::upper_bound(initial_cdf_.begin(), initial_cdf_.end(), u) - initial_cdf_.begin());
  q = std::min(q, initial_cdf_.size() - 1);
  tr.initial = q;
  for (std::size_t c = 0; c < cells_; ++c) {
    double t = static_cast<double>(c) * dt_;
    const double end = t + dt_;
    while (true) {
      const Row& row = table_[c][q];
      if (row.total <= 0.0) break;
      t += exponential(rng, row.total);
      if (t >= end) break;
      double v = uniform01(rng) * row.total;
      std::size_t pick = row.out.size() - 1;
      for (std::size_t k = 0; k < row.out.size(); ++k) {
        if (v < row.out[k].rate) {
          pick = k;
          break;
        }
        v -= row.out[k].rate;
      }
      const std::size_t to = row.out[pick].target;
      if (record_jumps) tr.jumps.push_back({t, q, to});
      q = to;
    }
  }
  tr.final_state = q;
  tr.t_end = t_max_;
  return tr;
}

LatticeTrajectory run_bell_process(const LatticeModel& model, const CVector& psi0, double t_max,
                                   std::uint64_t seed, const BellOptions& options) {
  return BellSchedule(model, psi0, t_max, options).run(seed);
}

BellEnsemble bell_equivariance(const LatticeModel& model, const CVector& psi0, double t_max,
                               std::size_t chains, std::uint64_t seed,
                               const BellOptions& options) {
  const BellSchedule schedule(model, psi0, t_max, options);
  BellEnsemble out;
  out.warnings = schedule.warnings();
  out.final_states.resize(chains);
  parallel_for(chains, [&](std::size_t k) {
    out.final_states[k] = schedule.run(derive_seed(seed, k), false).final_state;
  });
  const CVector psi_t = evolve(model, psi0, t_max);
  std::vector<double> counts(model.dimension(), 0.0);
  for (auto s : out.final_states) counts[s] += 1.0;
  out.exact_probabilities.resize(model.dimension());
  for (std::size_t k = 0; k < model.dimension(); ++k)
    out.exact_probabilities[k] = std::norm(psi_t[static_cast<Eigen::Index>(k)]);
  // Largest cells first so that pooling merges the tail.
  std::vector<std::size_t> order(model.dimension());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.exact_probabilities[a] > out.exact_probabilities[b];
  });
  std::vector<double> obs, prob;
  for (auto k : order) {
    obs.push_back(counts[k]);
    prob.push_back(out.exact_probabilities[k]);
  }
  const ChiSquare chi = chi_square_test(obs, prob);
  out.chi_square = chi.statistic;
  out.dof = chi.dof;
  out.p_value = chi.p_value;
  return out;
}

CVector apply_T(const LatticeModel& model, double theta, const CVector& psi) {
  CVector out(psi.size());
  for (Eigen::Index k = 0; k < psi.size(); ++k)
    out[k] = std::polar(1.0, -2.0 * theta * double(model.basis().number(static_cast<std::size_t>(k)))) *
             std::conj(psi[k]);
  return out;
}

CVector apply_U(const LatticeModel& model, double theta, const CVector& psi) {
  CVector out(psi.size());
  for (Eigen::Index k = 0; k < psi.size(); ++k)
    out[k] = std::polar(1.0, -theta * double(model.basis().number(static_cast<std::size_t>(k)))) * psi[k];
  return out;
}

ReversalCheck reversal_conditions_check(const LatticeModel& model, double theta,
                                        const CVector& psi, double tol) {
  if (psi.size() != static_cast<Eigen::Index>(model.dimension()))
    throw std::invalid_argument("state dimension does not match the model");
  const CVector tpsi = apply_T(model, theta, psi);
  const SparseH& H = model.hamiltonian();
  const double c = 2.0 / model.hbar();
  ReversalCheck rep;
  for (Eigen::Index q = 0; q < H.outerSize(); ++q)
    for (SparseH::InnerIterator it(H, q); it; ++it) {
      const Eigen::Index qp = it.row();
      if (qp == q) continue;
      const cplx h_fwd = it.value();              // H_{q' q}
      const cplx h_bwd = std::conj(it.value());   // H_{q q'}
      // sigma^{T psi}(q -> q') |T psi(q)|^2
      const double lhs = c * std::max(0.0, std::imag(std::conj(tpsi[qp]) * h_fwd * tpsi[q]));
      // sigma^{psi}(q' -> q) |psi(q')|^2
      const double rhs = c * std::max(0.0, std::imag(std::conj(psi[q]) * h_bwd * psi[qp]));
      rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(lhs - rhs));
      rep.scale = std::max(rep.scale, c * std::abs(h_fwd) * std::abs(psi[q]) * std::abs(psi[qp]));
      ++rep.pairs_checked;
    }
  rep.commutator_norm = check_T_commutation(model, theta);
  rep.passed = rep.max_discrepancy <= tol * std::max(rep.scale, 1e-300);
  return rep;
}

GroundCurrent ground_state_current(const LatticeModel& model) {
  if (model.dimension() > Propagator::dense_limit)
    throw std::invalid_argument("exact diagonalization is limited to dimension 2000");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(model.dense());
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  GroundCurrent gc;
  gc.energy = es.eigenvalues()[0];
  gc.gap = model.dimension() > 1 ? es.eigenvalues()[1] - es.eigenvalues()[0]
                                 : std::numeric_limits<double>::infinity();
  if (!(gc.gap > 1e-8)) throw NumericalError("ground state is degenerate");
  gc.state = es.eigenvectors().col(0);
  const SparseH& H = model.hamiltonian();
  for (Eigen::Index q = 0; q < H.outerSize(); ++q)
    for (SparseH::InnerIterator it(H, q); it; ++it) {
      if (it.row() <= q) continue;
      const double j = basis_current(model, gc.state, static_cast<std::size_t>(q),
                                     static_cast<std::size_t>(it.row()));
      gc.current[{static_cast<std::size_t>(q), static_cast<std::size_t>(it.row())}] = j;
      gc.max_abs = std::max(gc.max_abs, std::abs(j));
    }
  return gc;
}

double lattice_ground_energy(const LatticeModel& model) {
  if (model.dimension() > Propagator::dense_limit)
    throw std::invalid_argument("exact diagonalization is limited to dimension 2000");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(model.dense(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  return es.eigenvalues()[0];
}

CVector random_state(std::size_t dim, Rng& rng) {
  CVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = cplx(normal01(rng), normal01(rng));
  v.normalize();
  return v;
}

}  // namespace ibcsym
