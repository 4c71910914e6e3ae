#include "ibcsym/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ibcsym {

ChargeSystem::ChargeSystem(std::vector<Source> sources, double m, double E0, double hbar)
    : sources_(std::move(sources)), m_(m), E0_(E0), hbar_(hbar) {
  if (sources_.empty()) throw std::invalid_argument("at least one source is required");
  if (!(m_ > 0.0)) throw std::invalid_argument("boson mass m must be positive");
  if (!(E0_ >= 0.0)) throw std::invalid_argument("rest energy E0 must be non-negative");
  if (!(hbar_ > 0.0)) throw std::invalid_argument("hbar must be positive");
  for (const auto& s : sources_) {
    if (std::abs(s.charge) == 0.0) throw std::invalid_argument("charges must be nonzero");
    if (!s.position.allFinite()) throw std::invalid_argument("source positions must be finite");
  }
  for (std::size_t i = 0; i < sources_.size(); ++i)
    for (std::size_t j = i + 1; j < sources_.size(); ++j)
      if ((sources_[i].position - sources_[j].position).norm() == 0.0)
        throw std::invalid_argument("sources must be pairwise distinct");
}

std::vector<cplx> ChargeSystem::charges() const {
  std::vector<cplx> g;
  g.reserve(sources_.size());
  for (const auto& s : sources_) g.push_back(s.charge);
  return g;
}

double ChargeSystem::min_source_spacing() const {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sources_.size(); ++i)
    for (std::size_t j = i + 1; j < sources_.size(); ++j)
      d = std::min(d, (sources_[i].position - sources_[j].position).norm());
  return d;
}

double ChargeSystem::distance_to_nearest_source(const Vec3& y) const {
  return (y - sources_[nearest_source(y)].position).norm();
}

std::size_t ChargeSystem::nearest_source(const Vec3& y) const {
  std::size_t best = 0;
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < sources_.size(); ++j) {
    double dj = (y - sources_[j].position).norm();
    if (dj < d) {
      d = dj;
      best = j;
    }
  }
  return best;
}

ChargeSystem ChargeSystem::with_charges(std::span<const cplx> g) const {
  if (g.size() != sources_.size()) throw std::invalid_argument("charge count mismatch");
  auto s = sources_;
  for (std::size_t j = 0; j < s.size(); ++j) s[j].charge = g[j];
  return ChargeSystem(std::move(s), m_, E0_, hbar_);
}

namespace {

// Reduce a phase mod pi to (-pi/2, pi/2].
double canonical_mod_pi(double phase) {
  double r = std::remainder(phase, pi);
  if (r <= -pi / 2) r += pi;
  return r;
}

}  // namespace

double SymmetryVerdict::sector_phase(std::size_t n) const {
  if (!symmetric || !theta) throw std::logic_error("sector phase requested for an asymmetric verdict");
  return wrap_phase(-2.0 * static_cast<double>(n) * *theta);
}

SymmetryVerdict classify_charges(std::span<const cplx> g, double tol) {
  if (g.empty()) throw std::invalid_argument("charge list must not be empty");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  for (const auto& gj : g)
    if (std::abs(gj) == 0.0) throw std::invalid_argument("charges must be nonzero");

  SymmetryVerdict v;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      double im = (std::conj(g[i]) * g[j]).imag();
      if (std::abs(im) > tol * std::abs(g[i]) * std::abs(g[j])) {
        v.symmetric = false;
        v.witness = std::make_pair(i, j);
        return v;
      }
    }
  }
  v.symmetric = true;
  v.theta = canonical_mod_pi(std::arg(g[0]));
  return v;
}

GeneralIBCParams::GeneralIBCParams(std::vector<IbcSourceParams> params, double det_tol)
    : params_(std::move(params)) {
  if (params_.empty()) throw std::invalid_argument("at least one source is required");
  for (const auto& p : params_) {
    double det = p.alpha * p.delta - p.gamma * p.beta;
    if (std::abs(det - 1.0) > det_tol)
      throw std::invalid_argument("IBC parameters must satisfy alpha*delta - gamma*beta = 1");
  }
}

SymmetryVerdict classify_general_ibc(const GeneralIBCParams& params, double tol) {
  const auto& p = params.sources();
  SymmetryVerdict v;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (std::abs(std::remainder(p[j].theta - p[i].theta, pi)) > tol) {
        v.symmetric = false;
        v.witness = std::make_pair(i, j);
        return v;
      }
    }
  }
  v.symmetric = true;
  v.theta = canonical_mod_pi(p[0].theta);
  return v;
}

std::vector<cplx> reversed_charges(std::span<const cplx> g) {
  std::vector<cplx> out(g.size());
  std::transform(g.begin(), g.end(), out.begin(), [](cplx z) { return std::conj(z); });
  return out;
}

cplx reversal_phase(std::size_t n, double theta) {
  return std::polar(1.0, -2.0 * theta * static_cast<double>(n));
}

cplx gauge_phase(std::size_t n, double theta) {
  return std::polar(1.0, -theta * static_cast<double>(n));
}

SectorWave time_reverse(const SectorWave& psi, double theta) {
  SectorWave out;
  for (const auto& [n, values] : psi) {
    const cplx ph = reversal_phase(n, theta);
    auto& dst = out[n];
    dst.reserve(values.size());
    for (const auto& z : values) dst.push_back(ph * std::conj(z));
  }
  return out;
}

SectorWave gauge_transform(const SectorWave& psi, double theta) {
  SectorWave out;
  for (const auto& [n, values] : psi) {
    const cplx ph = gauge_phase(n, theta);
    auto& dst = out[n];
    dst.reserve(values.size());
    for (const auto& z : values) dst.push_back(ph * z);
  }
  return out;
}

cplx inner_product(const SectorWave& a, const SectorWave& b) {
  cplx sum = 0.0;
  for (const auto& [n, av] : a) {
    auto it = b.find(n);
    if (it == b.end()) continue;
    const auto& bv = it->second;
    if (av.size() != bv.size()) throw std::invalid_argument("sector sample counts differ");
    for (std::size_t k = 0; k < av.size(); ++k) sum += std::conj(av[k]) * bv[k];
  }
  return sum;
}

}  // namespace ibcsym
