#include "ibcsym/continuum_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ibcsym/extrapolation.hpp"
#include "ibcsym/parallel.hpp"
#include "ibcsym/stats.hpp"

namespace ibcsym {

Psi1Sampler::Psi1Sampler(const ChargeSystem& system)
    : system_(&system), alpha_(decay_constant(system)), charge_sum_(0.0) {
  if (!(alpha_ > 0.0)) throw std::invalid_argument("|psi_1|^2 is not normalizable for E0 = 0");
  for (const auto& s : system.sources()) {
    charge_sum_ += std::abs(s.charge);
    cumulative_.push_back(charge_sum_);
  }
}

Vec3 Psi1Sampler::operator()(Rng& rng) const {
  const auto& src = system_->sources();
  while (true) {
    const double u = uniform01(rng) * charge_sum_;
    const std::size_t i =
        std::min<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) -
                                  cumulative_.begin(),
                              src.size() - 1);
    const double r = exponential(rng, 2.0 * alpha_);
    const Vec3 w = uniform_direction(rng);
    if (!(r > 0.0)) continue;
    const Vec3 y = src[i].position + r * w;
    // |psi_1|^2 <= (sum |g|) * sum_k |g_k| f_k^2, so the ratio below is <= 1.
    double envelope = 0.0;
    for (const auto& s : src) {
      const double rk = (y - s.position).norm();
      if (rk == 0.0) {
        envelope = std::numeric_limits<double>::infinity();
        break;
      }
      const double f = std::exp(-alpha_ * rk) / rk;
      envelope += std::abs(s.charge) * f * f;
    }
    if (!std::isfinite(envelope)) continue;
    const double accept = std::norm(psi1(*system_, y)) / (charge_sum_ * envelope);
    if (uniform01(rng) < accept) return y;
  }
}

Configuration sample_ground_configuration(const GroundState& gs, const Psi1Sampler& sampler,
                                          Rng& rng) {
  Configuration q;
  const std::size_t n = poisson(rng, gs.poisson_rate());
  q.positions.reserve(n);
  for (std::size_t k = 0; k < n; ++k) q.positions.push_back(sampler(rng));
  return q;
}

double EmissionLaw::density(std::size_t j, std::size_t n) const {
  return slot_prefactor / static_cast<double>(n + 1) * std::max(0.0, flux_limit.at(j));
}

double EmissionLaw::rate(std::size_t j, std::size_t n) const {
  return static_cast<double>(n + 1) * 4.0 * pi * density(j, n);
}

double EmissionLaw::rate_bound(std::size_t j) const {
  return 4.0 * pi * slot_prefactor * std::max(0.0, flux_limit.at(j));
}

double EmissionLaw::total_rate_bound() const {
  double sum = 0.0;
  for (std::size_t j = 0; j < flux_limit.size(); ++j) sum += rate_bound(j);
  return sum;
}

namespace {

// Fibonacci lattice on the unit sphere.
std::vector<Vec3> sphere_directions(std::size_t count) {
  std::vector<Vec3> dirs;
  dirs.reserve(count);
  const double golden = pi * (3.0 - std::sqrt(5.0));
  for (std::size_t k = 0; k < count; ++k) {
    const double mu = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(count);
    const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    const double phi = golden * static_cast<double>(k);
    dirs.emplace_back(s * std::cos(phi), s * std::sin(phi), mu);
  }
  return dirs;
}

double flux_density(const ChargeSystem& sys, const Vec3& xj, const Vec3& w, double r) {
  const Psi1Jet jet = psi1_jet(sys, xj + r * w);
  const cplx dr = w.cast<cplx>().dot(jet.gradient);  // dot() conjugates its left operand
  const cplx psi = jet.value;
  return r * r * (psi.real() * dr.imag() - psi.imag() * dr.real());
}

}  // namespace

EmissionLaw derive_emission_law(const GroundState& gs, double direction_tol) {
  const auto& sys = gs.system();
  const double hb = sys.hbar();
  const double c = sys.mass() / (2.0 * pi * hb * hb);
  EmissionLaw law;
  law.slot_prefactor = hb / sys.mass() * c * c;

  const double spacing = std::isfinite(sys.min_source_spacing()) ? sys.min_source_spacing() : 1.0;
  const double reach = std::min(spacing, 1.0 / gs.alpha());
  const auto coarse_r = geometric_radii(0.05 * reach, 7);
  const auto fine_r = geometric_radii(0.025 * reach, 7);
  const auto dirs = sphere_directions(32);

  for (std::size_t j = 0; j < sys.size(); ++j) {
    const Vec3& xj = sys.source(j).position;
    // natural scale of the limit: sum_i |g_i g_j| e^{-alpha r_ij}/r_ij + alpha |g_j|^2
    double scale = gs.alpha() * std::norm(sys.source(j).charge);
    for (std::size_t i = 0; i < sys.size(); ++i) {
      if (i == j) continue;
      const double r = (sys.source(i).position - xj).norm();
      scale += std::abs(sys.source(i).charge) * std::abs(sys.source(j).charge) *
               std::exp(-gs.alpha() * r) / r;
    }
    std::vector<double> limits;
    std::vector<double> samples(coarse_r.size());
    for (const auto& w : dirs) {
      for (std::size_t k = 0; k < coarse_r.size(); ++k)
        samples[k] = flux_density(sys, xj, w, coarse_r[k]);
      const double a = extrapolate_to_zero<double>(coarse_r, samples);
      for (std::size_t k = 0; k < fine_r.size(); ++k)
        samples[k] = flux_density(sys, xj, w, fine_r[k]);
      const double b = extrapolate_to_zero<double>(fine_r, samples);
      if (std::abs(a - b) > 1e-8 * scale)
        throw NumericalError("emission-rate extrapolation did not converge");
      limits.push_back(b);
    }
    double mean = 0.0;
    for (double l : limits) mean += l;
    mean /= static_cast<double>(limits.size());
    double spread = 0.0;
    for (double l : limits) spread = std::max(spread, std::abs(l - mean));
    if (spread > direction_tol * scale)
      throw NumericalError("emission rate density depends on the direction");
    // Values at roundoff level are zero: they come from constant-phase psi_1.
    if (std::abs(mean) <= 1e-12 * scale) mean = 0.0;
    law.flux_limit.push_back(mean);
    law.direction_spread.push_back(spread);
  }
  return law;
}

std::size_t TrajectoryRecord::emissions() const {
  return static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [](const auto& e) {
    return std::holds_alternative<EmitEvent>(e);
  }));
}

std::size_t TrajectoryRecord::absorptions() const {
  return static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [](const auto& e) {
    return std::holds_alternative<AbsorbEvent>(e);
  }));
}

namespace {

struct Boson {
  std::uint64_t id;
  Vec3 y;
  double h;
};

Configuration to_configuration(const std::vector<Boson>& bosons) {
  Configuration q;
  q.positions.reserve(bosons.size());
  for (const auto& b : bosons) q.positions.push_back(b.y);
  return q;
}

double spacing_or_one(const ChargeSystem& sys) {
  const double d = sys.min_source_spacing();
  return std::isfinite(d) ? d : 1.0;
}

}  // namespace

TrajectoryRecord simulate(const GroundState& gs, const EmissionLaw& law,
                          const SimulationOptions& options) {
  const auto& sys = gs.system();
  if (!(options.t_max >= 0.0)) throw std::invalid_argument("t_max must be non-negative");
  if (law.flux_limit.size() != sys.size())
    throw std::invalid_argument("emission law does not match the charge system");
  const double spacing = spacing_or_one(sys);
  const double eps_absorb = options.eps_absorb > 0.0 ? options.eps_absorb : 1e-4 * spacing;
  const double eps_start = options.eps_start > 0.0 ? options.eps_start : 1e-3 * spacing;
  if (!(eps_start > eps_absorb))
    throw std::invalid_argument("emission start radius must exceed the absorption radius");

  FlowTolerance tol;
  tol.rtol = options.rtol;
  tol.atol = options.rtol * 1e-3 * spacing;
  tol.h_max = options.dt_max;

  Rng rng(options.seed);
  TrajectoryRecord rec;
  rec.seed = options.seed;
  if (options.initial) {
    for (const auto& y : options.initial->positions)
      if (sys.distance_to_nearest_source(y) <= eps_absorb)
        throw std::invalid_argument("initial configuration must be interior");
    rec.initial = *options.initial;
  } else {
    const Psi1Sampler sampler(sys);
    rec.initial = sample_ground_configuration(gs, sampler, rng);
  }

  std::vector<Boson> bosons;
  std::uint64_t next_id = 0;
  for (const auto& y : rec.initial.positions) bosons.push_back({next_id++, y, 1e-2 * spacing});

  std::vector<double> samples = options.sample_times;
  std::sort(samples.begin(), samples.end());
  for (double s : samples)
    if (s < 0.0 || s > options.t_max) throw std::invalid_argument("sample times must lie in [0, t_max]");
  std::size_t next_sample = 0;

  const double bound = law.total_rate_bound();
  const double inf = std::numeric_limits<double>::infinity();
  double next_candidate = bound > 0.0 ? exponential(rng, bound) : inf;

  auto field = [&](const Vec3& y) { return velocity(sys, y); };
  auto event = [&](const Vec3& y) { return sys.distance_to_nearest_source(y) - eps_absorb; };

  double t = 0.0;
  while (true) {
    while (next_sample < samples.size() && samples[next_sample] <= t) {
      rec.snapshots.push_back({samples[next_sample], to_configuration(bosons)});
      ++next_sample;
    }
    if (t >= options.t_max) break;
    double t_next = std::min(next_candidate, options.t_max);
    if (next_sample < samples.size()) t_next = std::min(t_next, samples[next_sample]);

    // Trial step; if a boson reaches a source, the step is cut back to the
    // earliest contact so that events stay in time order.
    std::vector<AbsorbEvent> absorbed;
    std::vector<Boson> moved;
    try {
      auto step_all = [&](double t_stop) {
        absorbed.clear();
        moved.clear();
        for (const auto& b : bosons) {
          const FlowAdvance adv = advance_flow(field, event, b.y, t, t_stop, b.h, tol);
          if (adv.event)
            absorbed.push_back({adv.t, b.id, sys.nearest_source(adv.y)});
          else
            moved.push_back({b.id, adv.y, adv.h_next});
        }
      };
      step_all(t_next);
      if (!absorbed.empty()) {
        const auto first = std::min_element(
            absorbed.begin(), absorbed.end(),
            [](const AbsorbEvent& a, const AbsorbEvent& b) { return a.time < b.time; });
        const AbsorbEvent hit = *first;
        if (hit.time < t_next) {
          t_next = hit.time;
          step_all(t_next);
          // the boson that set the cut is absorbed even if the re-run stops just short
          if (std::none_of(absorbed.begin(), absorbed.end(),
                           [&](const AbsorbEvent& a) { return a.particle == hit.particle; })) {
            moved.erase(std::remove_if(moved.begin(), moved.end(),
                                       [&](const Boson& b) { return b.id == hit.particle; }),
                        moved.end());
            absorbed.push_back(hit);
          }
        }
        // every absorption lands on the cut; the stepper may report it a few ulps early
        for (auto& a : absorbed) a.time = t_next;
      }
    } catch (const NumericalError& e) {
      rec.completed = false;
      rec.warnings.push_back(std::string("terminated at t = ") + std::to_string(t) + ": " + e.what());
      break;
    }
    bosons = std::move(moved);
    std::sort(absorbed.begin(), absorbed.end(),
              [](const AbsorbEvent& a, const AbsorbEvent& b) { return a.particle < b.particle; });
    if (options.record_moves && t_next > t) {
      MoveEvent mv{t, t_next, {}, {}};
      for (const auto& b : bosons) {
        mv.particles.push_back(b.id);
        mv.positions.push_back(b.y);
      }
      rec.events.emplace_back(std::move(mv));
    }
    for (const auto& a : absorbed) rec.events.emplace_back(a);
    t = t_next;

    if (t == next_candidate) {
      // Thinning: propose a source by its rate bound, accept with the
      // sector-dependent rate.
      double u = uniform01(rng) * bound;
      std::size_t j = 0;
      for (; j + 1 < sys.size(); ++j) {
        if (u < law.rate_bound(j)) break;
        u -= law.rate_bound(j);
      }
      const double accept = law.rate(j, bosons.size()) / law.rate_bound(j);
      if (uniform01(rng) < accept) {
        const Vec3 w = uniform_direction(rng);
        const std::uint64_t id = next_id++;
        bosons.push_back({id, sys.source(j).position + eps_start * w, 1e-2 * spacing});
        rec.events.emplace_back(EmitEvent{t, j, w, id});
      }
      next_candidate = t + exponential(rng, bound);
    }
  }
  rec.t_end = t;
  rec.final_config = to_configuration(bosons);
  return rec;
}

TrajectoryRecord simulate(const GroundState& gs, const SimulationOptions& options) {
  return simulate(gs, derive_emission_law(gs), options);
}

std::vector<TrajectoryRecord> run_ensemble(const GroundState& gs, const EmissionLaw& law,
                                           const SimulationOptions& options, std::size_t runs) {
  std::vector<TrajectoryRecord> out(runs);
  parallel_for(runs, [&](std::size_t k) {
    SimulationOptions o = options;
    o.seed = derive_seed(options.seed, k);
    out[k] = simulate(gs, law, o);
  });
  return out;
}

namespace {

struct Marginals {
  std::vector<double> radius;
  std::vector<double> polar_cosine;
};

void add_marginals(const ChargeSystem& sys, const Vec3& y, Marginals& m) {
  const Vec3& x1 = sys.source(0).position;
  const Vec3 axis =
      sys.size() > 1 ? Vec3((sys.source(1).position - x1).normalized()) : Vec3(0.0, 0.0, 1.0);
  const Vec3 d = y - x1;
  const double r = d.norm();
  m.radius.push_back(r);
  m.polar_cosine.push_back(d.dot(axis) / r);
}

}  // namespace

EquivarianceReport equivariance_test(const GroundState& gs, const EquivarianceOptions& options) {
  if (options.runs < 1000) throw std::invalid_argument("equivariance test needs at least 1000 runs");
  if (options.sample_times.empty()) throw std::invalid_argument("no sample times given");
  const auto& sys = gs.system();
  const EmissionLaw law = derive_emission_law(gs);

  SimulationOptions sim = options.simulation;
  sim.seed = options.seed;
  sim.sample_times = options.sample_times;
  sim.t_max = *std::max_element(options.sample_times.begin(), options.sample_times.end());
  sim.initial.reset();
  sim.record_moves = false;
  const auto records = run_ensemble(gs, law, sim, options.runs);

  Marginals reference;
  {
    Rng rng(derive_seed(options.seed, 0xFFFFFFFFULL));
    const Psi1Sampler sampler(sys);
    for (std::size_t k = 0; k < options.reference_samples; ++k)
      add_marginals(sys, sampler(rng), reference);
  }

  EquivarianceReport report;
  report.poisson_rate = gs.poisson_rate();
  report.runs = options.runs;
  std::vector<double> times = options.sample_times;
  std::sort(times.begin(), times.end());
  for (std::size_t s = 0; s < times.size(); ++s) {
    std::vector<double> counts;
    Marginals observed;
    std::size_t n_ok = 0;
    for (const auto& rec : records) {
      if (!rec.completed || s >= rec.snapshots.size()) continue;
      ++n_ok;
      const auto& q = rec.snapshots[s].config;
      if (counts.size() <= q.sector()) counts.resize(q.sector() + 1, 0.0);
      counts[q.sector()] += 1.0;
      for (const auto& y : q.positions) add_marginals(sys, y, observed);
    }
    if (n_ok < 1000) throw std::invalid_argument("insufficient completed runs for the equivariance test");

    // sectors 0..K plus a tail bin
    const std::size_t K = std::max<std::size_t>(counts.size(), 1);
    std::vector<double> obs(K + 1, 0.0), prob(K + 1, 0.0);
    double head = 0.0;
    for (std::size_t n = 0; n < K; ++n) {
      obs[n] = n < counts.size() ? counts[n] : 0.0;
      prob[n] = gs.sector_weight(n);
      head += prob[n];
    }
    prob[K] = std::max(0.0, 1.0 - head);
    const ChiSquare chi = chi_square_test(obs, prob);
    report.tests.push_back({"sector_chi2", times[s], chi.statistic, chi.p_value, n_ok,
                            chi.p_value > options.significance});

    if (!observed.radius.empty()) {
      const KsResult kr = ks_two_sample(observed.radius, reference.radius);
      report.tests.push_back({"radial_ks", times[s], kr.statistic, kr.p_value,
                              observed.radius.size(), kr.p_value > options.significance});
      const KsResult ka = ks_two_sample(observed.polar_cosine, reference.polar_cosine);
      report.tests.push_back({"angular_ks", times[s], ka.statistic, ka.p_value,
                              observed.polar_cosine.size(), ka.p_value > options.significance});
    }
  }
  report.passed = std::all_of(report.tests.begin(), report.tests.end(),
                              [](const StatTest& t) { return t.passed; });
  return report;
}

long ReversalReport::net_transport(std::size_t i, std::size_t j) const {
  return static_cast<long>(transport.at(i).at(j)) - static_cast<long>(transport.at(j).at(i));
}

ReversalReport reversal_test(const GroundState& gs, const ReversalOptions& options) {
  const auto& sys = gs.system();
  const EmissionLaw law = derive_emission_law(gs);
  SimulationOptions sim = options.simulation;
  sim.seed = options.seed;
  sim.t_max = options.t_max;
  sim.sample_times.clear();
  sim.initial.reset();
  sim.record_moves = false;
  const auto records = run_ensemble(gs, law, sim, options.runs);

  const std::size_t N = sys.size();
  ReversalReport rep;
  rep.emissions.assign(N, 0);
  rep.absorptions.assign(N, 0);
  rep.transport.assign(N, std::vector<std::size_t>(N, 0));
  for (const auto& rec : records) {
    std::vector<std::pair<std::uint64_t, std::size_t>> born;
    for (const auto& ev : rec.events) {
      if (const auto* e = std::get_if<EmitEvent>(&ev)) {
        ++rep.emissions[e->source];
        born.emplace_back(e->particle, e->source);
      } else if (const auto* a = std::get_if<AbsorbEvent>(&ev)) {
        ++rep.absorptions[a->source];
        for (const auto& [id, src] : born)
          if (id == a->particle) ++rep.transport[src][a->source];
      }
    }
  }
  for (std::size_t j = 0; j < N; ++j) rep.total_events += rep.emissions[j] + rep.absorptions[j];
  if (rep.total_events == 0) {
    // No jumps at all: zero transport in either direction.
    rep.z.assign(N, 0.0);
    rep.reversible = true;
    return rep;
  }
  if (rep.total_events < options.min_events)
    throw std::invalid_argument("insufficient events for the reversal test");
  rep.reversible = true;
  for (std::size_t j = 0; j < N; ++j) {
    const double e = static_cast<double>(rep.emissions[j]);
    const double a = static_cast<double>(rep.absorptions[j]);
    const double z = (e + a) > 0.0 ? (e - a) / std::sqrt(e + a) : 0.0;
    rep.z.push_back(z);
    if (std::abs(z) > options.z_critical) rep.reversible = false;
  }
  return rep;
}

}  // namespace ibcsym
