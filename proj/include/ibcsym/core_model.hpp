#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ibcsym/types.hpp"

namespace ibcsym {

struct Source {
  Vec3 position;
  cplx charge;
};

// Static fermionic sources with complex couplings, plus the boson mass m,
// the boson rest energy E0 and the action scale hbar.
class ChargeSystem {
 public:
  ChargeSystem(std::vector<Source> sources, double m, double E0, double hbar = 1.0);

  std::size_t size() const { return sources_.size(); }
  const std::vector<Source>& sources() const { return sources_; }
  const Source& source(std::size_t j) const { return sources_.at(j); }
  std::vector<cplx> charges() const;

  double mass() const { return m_; }
  double rest_energy() const { return E0_; }
  double hbar() const { return hbar_; }

  double min_source_spacing() const;  // +inf for a single source
  double distance_to_nearest_source(const Vec3& y) const;
  std::size_t nearest_source(const Vec3& y) const;

  ChargeSystem with_charges(std::span<const cplx> g) const;

 private:
  std::vector<Source> sources_;
  double m_;
  double E0_;
  double hbar_;
};

// A point of the variable-particle-number configuration space: the sector
// number is the number of boson positions.
struct Configuration {
  std::vector<Vec3> positions;

  std::size_t sector() const { return positions.size(); }
};

struct SymmetryVerdict {
  bool symmetric = false;
  // Common phase of the couplings, canonical in (-pi/2, pi/2]. Set iff symmetric.
  std::optional<double> theta;
  // 0-based index pair (i, j), i < j, that violates the criterion. Set iff asymmetric.
  std::optional<std::pair<std::size_t, std::size_t>> witness;

  // theta(n) = -2 n theta mod 2pi, the sector phase of the matching
  // time-reversal operator. Requires symmetric.
  double sector_phase(std::size_t n) const;
};

SymmetryVerdict classify_charges(std::span<const cplx> g, double tol = 1e-10);

// Per-source parameters of the general interior-boundary condition.
struct IbcSourceParams {
  double theta;
  double alpha;
  double beta;
  double gamma;
  double delta;
};

class GeneralIBCParams {
 public:
  explicit GeneralIBCParams(std::vector<IbcSourceParams> params, double det_tol = 1e-12);

  const std::vector<IbcSourceParams>& sources() const { return params_; }
  std::size_t size() const { return params_.size(); }

 private:
  std::vector<IbcSourceParams> params_;
};

SymmetryVerdict classify_general_ibc(const GeneralIBCParams& params, double tol = 1e-10);

std::vector<cplx> reversed_charges(std::span<const cplx> g);

// Wave function values grouped by sector number n. Each sector holds an
// arbitrary finite list of samples (grid values, basis amplitudes, ...).
using SectorWave = std::map<std::size_t, std::vector<cplx>>;

// e^{-2i theta n}: sector factor applied after conjugation by time reversal.
cplx reversal_phase(std::size_t n, double theta);
// e^{-i theta n}: sector factor of the gauge operator.
cplx gauge_phase(std::size_t n, double theta);

SectorWave time_reverse(const SectorWave& psi, double theta);
SectorWave gauge_transform(const SectorWave& psi, double theta);

// Sector-wise <a, b>, conjugate-linear in the first argument. Sectors
// missing from either side contribute zero; a sector present on both sides
// must have the same number of samples.
cplx inner_product(const SectorWave& a, const SectorWave& b);

}  // namespace ibcsym
