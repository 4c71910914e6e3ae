#include "ibcsym/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "ibcsym/extrapolation.hpp"

namespace ibcsym {

double decay_constant(const ChargeSystem& system) {
  return std::sqrt(2.0 * system.mass() * system.rest_energy()) / system.hbar();
}

cplx psi1(const ChargeSystem& system, const Vec3& y) {
  const double a = decay_constant(system);
  cplx sum = 0.0;
  for (const auto& s : system.sources()) {
    const double r = (y - s.position).norm();
    if (r == 0.0) throw std::invalid_argument("psi_1 is singular at a source position");
    sum += std::conj(s.charge) * (std::exp(-a * r) / r);
  }
  return sum;
}

Psi1Jet psi1_jet(const ChargeSystem& system, const Vec3& y) {
  const double a = decay_constant(system);
  Psi1Jet jet{0.0, CVec3::Zero()};
  for (const auto& s : system.sources()) {
    const Vec3 d = y - s.position;
    const double r = d.norm();
    if (r == 0.0) throw std::invalid_argument("psi_1 is singular at a source position");
    const double f = std::exp(-a * r) / r;
    const double df = -(a + 1.0 / r) * f;  // d f / d r
    const cplx c = std::conj(s.charge);
    jet.value += c * f;
    jet.gradient += (c * (df / r)) * d.cast<cplx>();
  }
  return jet;
}

Vec3 current_closed_form(const ChargeSystem& system, const Vec3& y, CurrentUnitVector reading) {
  const double a = decay_constant(system);
  const auto& src = system.sources();
  const std::size_t n = src.size();
  std::vector<double> r(n), f(n);
  std::vector<Vec3> e(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec3 d = y - src[k].position;
    r[k] = d.norm();
    if (r[k] == 0.0) throw std::invalid_argument("current is singular at a source position");
    f[k] = std::exp(-a * r[k]) / r[k];
    e[k] = d / r[k];
  }
  Vec3 j = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (i == k) continue;
      const double im = (std::conj(src[i].charge) * src[k].charge).imag();
      const Vec3& unit = reading == CurrentUnitVector::FromSourceJ ? e[k] : e[i];
      j += (im * f[i] * f[k] * (a + 1.0 / r[k])) * unit;
    }
  }
  return (system.hbar() / system.mass()) * j;
}

Vec3 current_numeric(const ChargeSystem& system, const Vec3& y, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  if (system.distance_to_nearest_source(y) <= 10.0 * h)
    throw std::invalid_argument("finite-difference step too large relative to distance to a source");
  const cplx psi = psi1(system, y);
  Vec3 j;
  for (int c = 0; c < 3; ++c) {
    Vec3 dy = Vec3::Zero();
    dy[c] = h;
    const cplx d = (psi1(system, y + dy) - psi1(system, y - dy)) / (2.0 * h);
    j[c] = (std::conj(psi) * d).imag();
  }
  return (system.hbar() / system.mass()) * j;
}

Vec3 current_numeric_extrapolated(const ChargeSystem& system, const Vec3& y, double h) {
  const Vec3 coarse = current_numeric(system, y, h);
  const Vec3 fine = current_numeric(system, y, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

Vec3 velocity(const ChargeSystem& system, const Vec3& y) {
  const Psi1Jet jet = psi1_jet(system, y);
  const double rho = std::norm(jet.value);
  if (!(rho > 1e-300)) throw NumericalError("velocity undefined at a node of psi_1");
  Vec3 j;
  for (int c = 0; c < 3; ++c) j[c] = (std::conj(jet.value) * jet.gradient[c]).imag();
  return (system.hbar() / system.mass() / rho) * j;
}

double ground_energy(const ChargeSystem& system) {
  if (!(system.rest_energy() > 0.0))
    throw std::invalid_argument("ground energy requires E0 > 0");
  const double a = decay_constant(system);
  const auto& s = system.sources();
  double self = 0.0;
  for (const auto& src : s) self += std::norm(src.charge);
  double pair = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const double r = (s[i].position - s[j].position).norm();
      pair += (std::conj(s[i].charge) * s[j].charge).real() * std::exp(-a * r) / r;
    }
  }
  const double hb = system.hbar();
  return system.mass() / (pi * hb * hb) * (0.5 * a * self - pair);
}

YukawaCoupling effective_kappa(const ChargeSystem& system, std::size_t i, std::size_t j) {
  if (i >= system.size() || j >= system.size()) throw std::out_of_range("source index out of range");
  if (i == j) throw std::invalid_argument("kappa needs two distinct sources");
  const double hb = system.hbar();
  const double kappa = system.mass() / (pi * hb * hb) *
                       (std::conj(system.source(i).charge) * system.source(j).charge).real();
  const double a = decay_constant(system);
  return {kappa, a > 0.0 ? 1.0 / a : std::numeric_limits<double>::infinity()};
}

double psi1_norm_squared(const ChargeSystem& system) {
  const double a = decay_constant(system);
  if (!(a > 0.0)) throw std::invalid_argument("psi_1 is not square integrable for E0 = 0");
  const auto& s = system.sources();
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    sum += std::norm(s[i].charge);
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const double r = (s[i].position - s[j].position).norm();
      sum += 2.0 * (s[i].charge * std::conj(s[j].charge)).real() * std::exp(-a * r);
    }
  }
  return 2.0 * pi / a * sum;
}

GroundState::GroundState(ChargeSystem system) : system_(std::move(system)) {
  if (!(system_.rest_energy() > 0.0))
    throw std::invalid_argument("the ground state requires E0 > 0");
  alpha_ = decay_constant(system_);
  psi1_norm2_ = ibcsym::psi1_norm_squared(system_);
  const double hb = system_.hbar();
  const double c = system_.mass() / (2.0 * pi * hb * hb);
  poisson_rate_ = c * c * psi1_norm2_;
  norm_const_ = std::exp(-0.5 * poisson_rate_);
}

double GroundState::sector_prefactor(std::size_t n) const {
  const double hb = system_.hbar();
  const double c = system_.mass() / (2.0 * pi * hb * hb);
  const double nn = static_cast<double>(n);
  const double mag = std::exp(std::log(norm_const_) + nn * std::log(c) - 0.5 * std::lgamma(nn + 1.0));
  return (n % 2 == 0) ? mag : -mag;
}

double GroundState::sector_weight(std::size_t n) const {
  const double nn = static_cast<double>(n);
  return std::exp(-poisson_rate_ + nn * std::log(poisson_rate_) - std::lgamma(nn + 1.0));
}

cplx GroundState::psi_min(const Configuration& q) const {
  cplx prod = sector_prefactor(q.sector());
  for (const auto& y : q.positions) prod *= ibcsym::psi1(system_, y);
  return prod;
}

Normalization normalization_and_poisson(const GroundState& gs) {
  return {gs.norm_const(), gs.poisson_rate()};
}

namespace {

void check_radii(std::span<const double> radii, double clearance) {
  if (radii.size() < 3) throw std::invalid_argument("radii schedule needs at least three radii");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0)) throw std::invalid_argument("radii must be positive");
    if (k > 0 && !(radii[k] < radii[k - 1]))
      throw std::invalid_argument("radii must be strictly decreasing");
  }
  if (!(radii[0] < 0.5 * clearance))
    throw std::invalid_argument("radii schedule too coarse for the source neighbourhood");
}

double clearance_around(const ChargeSystem& system, std::size_t j, const Configuration& base) {
  const Vec3& xj = system.source(j).position;
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < system.size(); ++i)
    if (i != j) d = std::min(d, (system.source(i).position - xj).norm());
  for (const auto& y : base.positions) d = std::min(d, (y - xj).norm());
  return d;
}

}  // namespace

IbcCheck verify_ibc(const GroundState& gs, const Configuration& base, std::size_t source,
                    const Vec3& direction, std::span<const double> radii, double tol) {
  const auto& sys = gs.system();
  if (source >= sys.size()) throw std::out_of_range("source index out of range");
  if (!(direction.norm() > 0.0)) throw std::invalid_argument("approach direction must be nonzero");
  check_radii(radii, clearance_around(sys, source, base));
  const Vec3 w = direction.normalized();
  const Vec3& xj = sys.source(source).position;

  std::vector<cplx> samples;
  samples.reserve(radii.size());
  Configuration q = base;
  q.positions.push_back(xj);
  for (double r : radii) {
    q.positions.back() = xj + r * w;
    samples.push_back(r * gs.psi_min(q));
  }
  IbcCheck out;
  out.limit = extrapolate_to_zero<cplx>(radii, samples);
  const double n = static_cast<double>(base.sector() + 1);
  const double hb = sys.hbar();
  out.expected = -(sys.mass() * std::conj(sys.source(source).charge) /
                   (2.0 * pi * hb * hb * std::sqrt(n))) *
                 gs.psi_min(base);
  out.relative_error = std::abs(out.limit - out.expected) / std::abs(out.expected);
  out.passed = out.relative_error <= tol;
  return out;
}

namespace {

template <int MuPoints>
cplx spherical_mean_of_slope(const GroundState& gs, std::size_t j, std::span<const double> radii,
                             int phi_points) {
  const Vec3& xj = gs.system().source(j).position;
  std::vector<cplx> samples(radii.size());
  Configuration q{{xj}};
  auto slope = [&](double mu, double phi) {
    const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    const Vec3 w(s * std::cos(phi), s * std::sin(phi), mu);
    for (std::size_t k = 0; k < radii.size(); ++k) {
      q.positions[0] = xj + radii[k] * w;
      samples[k] = radii[k] * gs.psi_min(q);
    }
    return slope_at_zero<cplx>(radii, samples);
  };
  auto ring = [&](double mu) {
    cplx acc = 0.0;
    for (int p = 0; p < phi_points; ++p) acc += slope(mu, 2.0 * pi * p / phi_points);
    return acc / static_cast<double>(phi_points);
  };
  auto re = boost::math::quadrature::gauss<double, MuPoints>::integrate(
      [&](double mu) { return ring(mu).real(); }, -1.0, 1.0);
  auto im = boost::math::quadrature::gauss<double, MuPoints>::integrate(
      [&](double mu) { return ring(mu).imag(); }, -1.0, 1.0);
  return cplx(re, im) * 0.5;
}

}  // namespace

VacuumEigenCheck verify_eigen_vacuum(const GroundState& gs, std::span<const double> radii,
                                     double tol) {
  const auto& sys = gs.system();
  VacuumEigenCheck out;
  out.h_psi_vacuum = 0.0;
  for (std::size_t j = 0; j < sys.size(); ++j) {
    check_radii(radii, clearance_around(sys, j, Configuration{}));
    const cplx fine = spherical_mean_of_slope<12>(gs, j, radii, 16);
    const cplx coarse = spherical_mean_of_slope<6>(gs, j, radii, 8);
    // size of the terms whose sum is the slope (they may cancel)
    const double a = gs.alpha();
    double terms = a * std::abs(sys.source(j).charge);
    for (std::size_t i = 0; i < sys.size(); ++i) {
      if (i == j) continue;
      const double r = (sys.source(i).position - sys.source(j).position).norm();
      terms += std::abs(sys.source(i).charge) * std::exp(-a * r) / r;
    }
    const double scale = std::abs(gs.sector_prefactor(1)) * terms;
    if (std::abs(fine - coarse) > 1e-9 * scale)
      throw NumericalError("spherical quadrature of the radial slope did not converge");
    out.spherical_means.push_back(fine);
    out.h_psi_vacuum += sys.source(j).charge * fine;
  }
  out.expected = ground_energy(sys) * gs.norm_const();
  out.relative_error = std::abs(out.h_psi_vacuum - out.expected) / std::abs(out.expected);
  out.passed = out.relative_error <= tol;
  return out;
}

double default_absorb_radius(const ChargeSystem& system) {
  const double d = system.min_source_spacing();
  return 1e-4 * (std::isfinite(d) ? d : 1.0);
}

std::vector<Streamline> streamlines(const ChargeSystem& system, std::span<const Vec3> seeds,
                                    const StreamlineOptions& options) {
  const double eps = options.eps_absorb > 0.0 ? options.eps_absorb : default_absorb_radius(system);
  Vec3 centroid = Vec3::Zero();
  for (const auto& s : system.sources()) centroid += s.position;
  centroid /= static_cast<double>(system.size());

  auto field = [&](const Vec3& y) { return velocity(system, y); };
  auto event = [&](const Vec3& y) { return system.distance_to_nearest_source(y) - eps; };

  std::vector<Streamline> out;
  out.reserve(seeds.size());
  for (const auto& seed : seeds) {
    if (system.distance_to_nearest_source(seed) <= eps)
      throw std::invalid_argument("streamline seed lies inside the absorption radius");
    Streamline line;
    line.points.push_back(seed);
    Vec3 y = seed;
    double t = 0.0;
    const double v0 = field(y).norm();
    if (v0 < options.stagnation_speed) {
      line.end = StreamlineEnd::Stagnant;
      out.push_back(std::move(line));
      continue;
    }
    double h = 1e-3 * system.distance_to_nearest_source(y) / v0;
    while (true) {
      FlowAdvance adv;
      try {
        adv = advance_flow(field, event, y, t, t + h, h, options.tolerance);
      } catch (const NumericalError&) {
        line.end = StreamlineEnd::SourceHit;
        line.source = system.nearest_source(y);
        break;
      }
      line.arc_length += (adv.y - y).norm();
      y = adv.y;
      t = adv.t;
      h = adv.h_next;
      line.points.push_back(y);
      if (adv.event) {
        line.end = StreamlineEnd::SourceHit;
        line.source = system.nearest_source(y);
        break;
      }
      if ((y - centroid).norm() > options.domain_radius) {
        line.end = StreamlineEnd::DomainExit;
        break;
      }
      if (line.arc_length > options.max_arc_length || line.points.size() >= options.max_points) {
        line.end = StreamlineEnd::MaxArcLength;
        break;
      }
      if (field(y).norm() < options.stagnation_speed) {
        line.end = StreamlineEnd::Stagnant;
        break;
      }
    }
    line.time = t;
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace ibcsym
