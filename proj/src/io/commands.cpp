#include "ibcsym/io/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ibcsym/boundary1d.hpp"
#include "ibcsym/continuum_process.hpp"
#include "ibcsym/ground_state.hpp"
#include "ibcsym/io/output.hpp"
#include "ibcsym/lattice.hpp"

namespace ibcsym::io {

namespace {

namespace fs = std::filesystem;

class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json verdict_json(const SymmetryVerdict& v) {
  Json j;
  j["symmetric"] = v.symmetric;
  if (v.theta) j["theta"] = *v.theta;
  if (v.witness) j["witness"] = Json::array({v.witness->first + 1, v.witness->second + 1});
  return j;
}

std::vector<cplx> charges_of(const ChargeSystem& sys) {
  std::vector<cplx> g;
  for (const auto& s : sys.sources()) g.push_back(s.charge);
  return g;
}

struct Context {
  const RunConfig& cfg;
  Provenance prov;
  fs::path out;
  std::ostream& err;
};

int cmd_symmetry(Context& c) {
  Json body;
  if (c.cfg.model) {
    const ChargeSystem sys = c.cfg.charge_system();
    const auto g = charges_of(sys);
    const SymmetryVerdict v = classify_charges(g, c.cfg.symmetry.tol);
    Json charges = Json::array();
    for (auto z : g) charges.push_back(complex_json(z));
    body["charges"] = charges;
    body["symmetric"] = v.symmetric;
    if (v.theta) body["theta"] = *v.theta;
    if (v.witness) body["witness"] = Json::array({v.witness->first + 1, v.witness->second + 1});
    Json rev = Json::array();
    for (auto z : reversed_charges(g)) rev.push_back(complex_json(z));
    body["reversed_charges"] = rev;
  }
  if (!c.cfg.symmetry.ibc.empty()) {
    const GeneralIBCParams params(c.cfg.symmetry.ibc);
    body["general_ibc"] = verdict_json(classify_general_ibc(params, c.cfg.symmetry.tol));
  }
  write_json(c.out / "symmetry.json", c.prov, body);
  return exit_ok;
}

int cmd_field(Context& c) {
  const ChargeSystem sys = c.cfg.charge_system();
  const auto& f = c.cfg.field;
  CsvWriter csv(c.prov, {"x", "y", "z", "jx", "jy", "jz", "|psi1|", "phase"});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto coord = [](double lo, double hi, std::size_t n, std::size_t k) {
    return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  };
  for (std::size_t iy = 0; iy < f.ny; ++iy) {
    for (std::size_t ix = 0; ix < f.nx; ++ix) {
      const Vec3 y(coord(f.xmin, f.xmax, f.nx, ix), coord(f.ymin, f.ymax, f.ny, iy), f.z);
      if (sys.distance_to_nearest_source(y) == 0.0) {
        csv.row({y.x(), y.y(), y.z(), nan, nan, nan, nan, nan});
        continue;
      }
      const Vec3 j = current_closed_form(sys, y);
      const cplx psi = psi1(sys, y);
      csv.row({y.x(), y.y(), y.z(), j.x(), j.y(), j.z(), std::abs(psi), std::arg(psi)});
    }
  }
  csv.write(c.out / "field.csv");
  return exit_ok;
}

std::vector<Vec3> sphere_seeds(const Vec3& centre, double radius, std::size_t count) {
  std::vector<Vec3> out;
  const double golden = pi * (3.0 - std::sqrt(5.0));
  for (std::size_t k = 0; k < count; ++k) {
    const double mu = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(count);
    const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    const double phi = golden * static_cast<double>(k);
    out.push_back(centre + radius * Vec3(s * std::cos(phi), s * std::sin(phi), mu));
  }
  return out;
}

const char* end_name(StreamlineEnd e) {
  switch (e) {
    case StreamlineEnd::SourceHit: return "source";
    case StreamlineEnd::DomainExit: return "domain_exit";
    case StreamlineEnd::MaxArcLength: return "max_arc_length";
    case StreamlineEnd::Stagnant: return "stagnant";
  }
  return "unknown";
}

int cmd_streamlines(Context& c) {
  const ChargeSystem sys = c.cfg.charge_system();
  const auto& s = c.cfg.streamlines;
  std::vector<Vec3> seeds = s.seeds;
  if (seeds.empty()) {
    const double spacing = std::isfinite(sys.min_source_spacing()) ? sys.min_source_spacing() : 1.0;
    seeds = sphere_seeds(sys.source(s.seed_source - 1).position, s.radius * spacing, s.count);
  }
  StreamlineOptions opts;
  opts.eps_absorb = s.eps_absorb;
  opts.max_arc_length = s.max_arc_length;
  opts.tolerance.rtol = s.rtol;
  const auto lines = streamlines(sys, seeds, opts);

  CsvWriter csv(c.prov, {"line", "index", "x", "y", "z"});
  Json summary = Json::array();
  std::vector<std::size_t> hits(sys.size(), 0);
  std::size_t other = 0;
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const auto& sl = lines[l];
    for (std::size_t k = 0; k < sl.points.size(); ++k) {
      const auto& p = sl.points[k];
      csv.row_text({std::to_string(l + 1), std::to_string(k), format_double(p.x()),
                    format_double(p.y()), format_double(p.z())});
    }
    Json j;
    j["line"] = l + 1;
    j["seed"] = vec_json(seeds[l]);
    j["end"] = end_name(sl.end);
    if (sl.source) {
      j["source"] = *sl.source + 1;
      ++hits[*sl.source];
    } else {
      j["source"] = nullptr;
      ++other;
    }
    j["arc_length"] = sl.arc_length;
    j["time"] = sl.time;
    j["points"] = sl.points.size();
    summary.push_back(j);
  }
  csv.write(c.out / "streamlines.csv");
  Json body;
  Json counts = Json::array();
  for (auto h : hits) counts.push_back(h);
  body["terminations_per_source"] = counts;
  body["unterminated"] = other;
  body["lines"] = summary;
  write_json(c.out / "streamlines.json", c.prov, body);
  return exit_ok;
}

int cmd_potential(Context& c) {
  const ChargeSystem sys = c.cfg.charge_system();
  const double E = ground_energy(sys);
  Json body;
  body["ground_energy"] = E;
  body["alpha"] = decay_constant(sys);
  CsvWriter csv(c.prov, {"i", "j", "R", "kappa", "range", "V"});
  Json pairs = Json::array();
  double pair_sum = 0.0;
  for (std::size_t i = 0; i < sys.size(); ++i)
    for (std::size_t j = i + 1; j < sys.size(); ++j) {
      const auto y = effective_kappa(sys, i, j);
      const double R = (sys.source(i).position - sys.source(j).position).norm();
      const double V = -y.kappa * std::exp(-R / y.range) / R;
      pair_sum += V;
      csv.row_text({std::to_string(i + 1), std::to_string(j + 1), format_double(R),
                    format_double(y.kappa), format_double(y.range), format_double(V)});
      Json p;
      p["i"] = i + 1;
      p["j"] = j + 1;
      p["R"] = R;
      p["kappa"] = y.kappa;
      p["range"] = y.range;
      p["V"] = V;
      pairs.push_back(p);
    }
  body["range"] = 1.0 / decay_constant(sys);
  body["self_energy"] = E - pair_sum;
  body["pairs"] = pairs;
  csv.write(c.out / "potential.csv");
  write_json(c.out / "potential.json", c.prov, body);
  return exit_ok;
}

Json stat_json(const StatTest& t) {
  Json j;
  j["name"] = t.name;
  j["time"] = t.time;
  j["statistic"] = t.statistic;
  j["p_value"] = t.p_value;
  j["samples"] = t.samples;
  j["passed"] = t.passed;
  return j;
}

int cmd_simulate(Context& c) {
  const GroundState gs(c.cfg.charge_system());
  const auto& s = c.cfg.simulate;
  SimulationOptions sim;
  sim.rtol = s.rtol;
  sim.dt_max = s.dt_max;
  Json body;
  body["poisson_rate"] = gs.poisson_rate();
  body["alpha"] = gs.alpha();
  const EmissionLaw law = derive_emission_law(gs);
  Json rates = Json::array();
  for (std::size_t j = 0; j < law.flux_limit.size(); ++j) rates.push_back(law.rate_bound(j));
  body["emission_rates"] = rates;

  if (s.mode == "equivariance") {
    EquivarianceOptions eo;
    eo.runs = s.runs;
    eo.sample_times = s.sample_times;
    eo.seed = c.prov.seed;
    eo.reference_samples = s.reference_samples;
    eo.significance = s.significance;
    eo.simulation = sim;
    const auto rep = equivariance_test(gs, eo);
    Json tests = Json::array();
    for (const auto& t : rep.tests) tests.push_back(stat_json(t));
    body["runs"] = rep.runs;
    body["tests"] = tests;
    body["passed"] = rep.passed;
    write_json(c.out / "equivariance.json", c.prov, body);
    if (!rep.passed) {
      c.err << "equivariance test failed\n";
      return exit_verification;
    }
    return exit_ok;
  }
  if (s.mode == "reversal") {
    ReversalOptions ro;
    ro.runs = s.runs;
    ro.t_max = s.t_max;
    ro.seed = c.prov.seed;
    ro.min_events = s.min_events;
    ro.z_critical = s.z_critical;
    ro.simulation = sim;
    const auto rep = reversal_test(gs, ro);
    const bool symmetric = classify_charges(charges_of(gs.system())).symmetric;
    Json e = Json::array(), a = Json::array(), z = Json::array(), t = Json::array();
    for (std::size_t j = 0; j < rep.emissions.size(); ++j) {
      e.push_back(rep.emissions[j]);
      a.push_back(rep.absorptions[j]);
      z.push_back(rep.z[j]);
      Json row = Json::array();
      for (auto v : rep.transport[j]) row.push_back(v);
      t.push_back(row);
    }
    body["runs"] = s.runs;
    body["emissions"] = e;
    body["absorptions"] = a;
    body["transport"] = t;
    body["z"] = z;
    body["total_events"] = rep.total_events;
    body["reversible"] = rep.reversible;
    body["charges_symmetric"] = symmetric;
    body["consistent"] = rep.reversible == symmetric;
    write_json(c.out / "reversal.json", c.prov, body);
    if (rep.reversible != symmetric) {
      c.err << "reversal statistics disagree with the charge classification\n";
      return exit_verification;
    }
    return exit_ok;
  }
  // trajectories
  sim.t_max = s.t_max;
  sim.seed = c.prov.seed;
  sim.record_moves = true;
  // frame times cut the flow into segments, giving polyline points
  sim.sample_times.clear();
  for (double t = s.frame_dt; t < s.t_max; t += s.frame_dt) sim.sample_times.push_back(t);
  const auto records = run_ensemble(gs, law, sim, s.runs);
  CsvWriter csv(c.prov, {"run", "seed", "time", "type", "source", "particle", "x", "y", "z", "wx", "wy", "wz"});
  Json head;
  head["provenance"] = provenance_json(c.prov);
  std::string lines = json_line(head);
  Json runs = Json::array();
  auto vec = [](const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); };
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::string run = std::to_string(r + 1), seed = std::to_string(rec.seed);
    auto point_row = [&](double t, const char* type, const std::string& source, std::uint64_t id,
                         const Vec3& p, const std::string& w = "") {
      csv.row_text({run, seed, format_double(t), type, source, std::to_string(id), format_double(p.x()),
                    format_double(p.y()), format_double(p.z()), w, w, w});
    };
    for (std::size_t k = 0; k < rec.initial.positions.size(); ++k)
      point_row(0.0, "initial", "", k, rec.initial.positions[k]);
    {
      Json e;
      e["run"] = r + 1;
      e["type"] = "initial";
      e["time"] = 0.0;
      Json pos = Json::array();
      for (const auto& p : rec.initial.positions) pos.push_back(vec(p));
      e["positions"] = pos;
      lines += json_line(e);
    }
    for (const auto& ev : rec.events) {
      Json e;
      e["run"] = r + 1;
      if (const auto* mv = std::get_if<MoveEvent>(&ev)) {
        for (std::size_t k = 0; k < mv->particles.size(); ++k)
          point_row(mv->t_end, "move", "", mv->particles[k], mv->positions[k]);
        e["type"] = "move";
        e["t_begin"] = mv->t_begin;
        e["t_end"] = mv->t_end;
        e["particles"] = mv->particles;
        Json pos = Json::array();
        for (const auto& p : mv->positions) pos.push_back(vec(p));
        e["positions"] = pos;
      } else if (const auto* em = std::get_if<EmitEvent>(&ev)) {
        const Vec3 p = gs.system().source(em->source).position;
        csv.row_text({run, seed, format_double(em->time), "emit", std::to_string(em->source + 1),
                      std::to_string(em->particle), format_double(p.x()), format_double(p.y()),
                      format_double(p.z()), format_double(em->direction.x()),
                      format_double(em->direction.y()), format_double(em->direction.z())});
        e["type"] = "emit";
        e["time"] = em->time;
        e["source"] = em->source + 1;
        e["particle"] = em->particle;
        e["direction"] = vec(em->direction);
      } else if (const auto* ab = std::get_if<AbsorbEvent>(&ev)) {
        point_row(ab->time, "absorb", std::to_string(ab->source + 1), ab->particle,
                  gs.system().source(ab->source).position);
        e["type"] = "absorb";
        e["time"] = ab->time;
        e["source"] = ab->source + 1;
        e["particle"] = ab->particle;
      }
      lines += json_line(e);
    }
    Json j;
    j["run"] = r + 1;
    j["seed"] = rec.seed;
    j["initial_sector"] = rec.initial.sector();
    j["final_sector"] = rec.final_config.sector();
    j["emissions"] = rec.emissions();
    j["absorptions"] = rec.absorptions();
    j["completed"] = rec.completed;
    j["warnings"] = rec.warnings;
    runs.push_back(j);
  }
  atomic_write(c.out / "trajectories.jsonl", lines);
  csv.write(c.out / "trajectories.csv");
  body["runs"] = runs;
  write_json(c.out / "trajectories.json", c.prov, body);
  return exit_ok;
}

int cmd_lattice(Context& c, const std::vector<std::string>& override_checks) {
  const auto& l = c.cfg.lattice;
  LatticeParams p;
  p.L = l.L;
  p.a = l.a;
  p.n_max = l.n_max;
  p.m = l.m;
  p.E0 = l.E0;
  p.hbar = l.hbar;
  for (const auto& [site, g] : l.sources) p.sources.push_back({site, g});
  const LatticeModel model(p);
  const auto checks = override_checks.empty() ? l.checks : override_checks;
  const auto g = model.charges();
  const SymmetryVerdict verdict =
      g.empty() ? SymmetryVerdict{true, 0.0, std::nullopt} : classify_charges(g);

  Json body;
  body["dimension"] = model.dimension();
  body["classification"] = verdict_json(verdict);
  Json results;
  bool all_ok = true;
  Rng rng(derive_seed(c.prov.seed, 0));

  if (model.dimension() <= Propagator::dense_limit) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(model.dense(), Eigen::EigenvaluesOnly);
    CsvWriter csv(c.prov, {"index", "eigenvalue"});
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
      csv.row_text({std::to_string(k), format_double(es.eigenvalues()[k])});
    csv.write(c.out / "lattice_spectrum.csv");
    body["ground_energy"] = es.eigenvalues()[0];
  }

  for (const auto& name : checks) {
    Json r;
    bool ok = true;
    if (name == "hermitian") {
      const double d = hermiticity_defect(model);
      r["max_defect"] = d;
      ok = d <= 1e-12;
    } else if (name == "gauge") {
      double worst = 0.0;
      for (std::size_t k = 0; k < l.gauge_thetas; ++k)
        worst = std::max(worst, check_gauge_equivalence(
                                    model, 2.0 * pi * static_cast<double>(k) / double(l.gauge_thetas)));
      r["thetas"] = l.gauge_thetas;
      r["max_norm"] = worst;
      ok = worst <= 1e-12;
    } else if (name == "T") {
      const ThetaScan scan = scan_T_commutation(model, l.theta_grid);
      r["grid_points"] = scan.grid_points;
      r["grid_min"] = scan.grid_min;
      r["theta"] = scan.theta;
      r["min_norm"] = scan.min_norm;
      r["symmetric_by_scan"] = scan.min_norm < 1e-8;
      ok = (scan.min_norm < 1e-8) == verdict.symmetric;
    } else if (name == "ground") {
      try {
        const GroundCurrent gc = ground_state_current(model);
        r["energy"] = gc.energy;
        r["gap"] = gc.gap;
        r["max_abs_current"] = gc.max_abs;
        ok = (gc.max_abs <= 1e-10) == verdict.symmetric;
      } catch (const NumericalError& e) {
        r["verdict"] = nullptr;
        r["note"] = e.what();
      }
    } else if (name == "reversal") {
      const CVector psi = random_state(model.dimension(), rng);
      if (verdict.symmetric) {
        const double th = verdict.theta.value_or(0.0);
        const ReversalCheck rc = reversal_conditions_check(model, th, psi);
        r["theta"] = th;
        r["max_discrepancy"] = rc.max_discrepancy;
        r["passed_at_theta"] = rc.passed;
        ok = rc.passed;
      } else {
        std::size_t passes = 0;
        double smallest = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < l.theta_grid; ++k) {
          const double th = pi * static_cast<double>(k) / static_cast<double>(l.theta_grid);
          const ReversalCheck rc = reversal_conditions_check(model, th, psi);
          if (rc.passed) ++passes;
          smallest = std::min(smallest, rc.max_discrepancy / rc.scale);
        }
        r["grid_points"] = l.theta_grid;
        r["passing_thetas"] = passes;
        r["min_relative_discrepancy"] = smallest;
        ok = passes == 0;
      }
    } else if (name == "bell") {
      const CVector psi0 = random_state(model.dimension(), rng);
      BellOptions bo;
      bo.dt = l.dt;
      const BellEnsemble ens = bell_equivariance(model, psi0, l.t, l.chains, derive_seed(c.prov.seed, 1), bo);
      r["t"] = l.t;
      r["chains"] = l.chains;
      r["chi_square"] = ens.chi_square;
      r["dof"] = ens.dof;
      r["p_value"] = ens.p_value;
      r["warnings"] = ens.warnings;
      ok = ens.p_value > 0.01;
    }
    r["passed"] = ok;
    all_ok = all_ok && ok;
    results[name] = r;
  }
  body["checks"] = results;
  body["passed"] = all_ok;
  write_json(c.out / "lattice.json", c.prov, body);
  if (!all_ok) {
    c.err << "lattice checks failed\n";
    return exit_verification;
  }
  return exit_ok;
}

int cmd_boundary(Context& c) {
  const auto& b = c.cfg.boundary;
  Json body;
  bool all_ok = true;

  Json periodic = Json::array();
  CsvWriter spec(c.prov, {"theta", "index", "fd_eigenvalue", "analytic_eigenvalue"});
  for (double theta : b.thetas) {
    const auto modes = periodic_spectrum(theta, b.m, b.hbar, -10, 10);
    const PeriodicFD fd = periodic_fd_ground_state(theta, b.points, b.m, b.hbar);
    const PeriodicVerdict v = symmetry_verdict_periodic(theta);
    Json j;
    j["theta"] = theta;
    j["symmetric"] = v.symmetric;
    j["analytic_k"] = modes.front().k;
    j["analytic_energy"] = modes.front().energy;
    j["analytic_current"] = modes.front().current;
    j["fd_energy"] = fd.ground_energy;
    j["fd_current"] = fd.ground_current;
    const double e_err = modes.front().energy != 0.0
                             ? std::abs(fd.ground_energy - modes.front().energy) / modes.front().energy
                             : std::abs(fd.ground_energy);
    j["energy_relative_error"] = e_err;
    j["current_error"] = std::abs(fd.ground_current - modes.front().current);
    const bool ok = e_err < 1e-4 && std::abs(fd.ground_current - modes.front().current) < 1e-4;
    j["passed"] = ok;
    all_ok = all_ok && ok;
    periodic.push_back(j);
    for (std::size_t k = 0; k < std::min<std::size_t>(modes.size(), 20); ++k)
      spec.row({theta, static_cast<double>(k), fd.eigenvalues[static_cast<Eigen::Index>(k)], modes[k].energy});
  }
  spec.write(c.out / "boundary_spectrum.csv");
  body["periodic"] = periodic;

  const RobinBC bc{b.alpha0, b.beta0, b.alpha1, b.beta1};
  const ConservationVerdict cv = is_probability_conserving(bc);
  const RobinGrid grid(bc, b.points, b.m, b.hbar);
  const auto psi0 = wave_packet(grid, b.packet_center, b.packet_width, b.packet_k);
  const auto ev = evolve_robin(grid, psi0, b.t_max, b.steps, std::max<std::size_t>(1, b.steps / 200));
  CsvWriter curve(c.prov, {"time", "norm_squared", "predicted_rate"});
  for (const auto& s : ev.curve) curve.row({s.time, s.norm_squared, s.predicted_rate});
  curve.write(c.out / "boundary_norm.csv");
  Json robin;
  robin["left_conserving"] = cv.left.conserving;
  robin["right_conserving"] = cv.right.conserving;
  robin["left_im_ratio"] = cv.left.im_ratio;
  robin["right_im_ratio"] = cv.right.im_ratio;
  robin["measured_loss"] = ev.measured_loss;
  robin["predicted_loss"] = ev.predicted_loss;
  bool robin_ok;
  if (cv.conserving()) {
    robin_ok = std::abs(ev.measured_loss) <= 1e-6;
  } else {
    const double rel = std::abs(ev.measured_loss - ev.predicted_loss) /
                       std::max(std::abs(ev.predicted_loss), 1e-300);
    robin["relative_error"] = rel;
    robin_ok = rel <= 0.1;
  }
  robin["passed"] = robin_ok;
  all_ok = all_ok && robin_ok;
  body["robin"] = robin;

  Json wit = Json::array();
  for (const auto& [alpha, beta, psi_q] : b.witnesses) {
    const EmissionWitness w = emission_witness({alpha, beta, psi_q}, b.m, b.hbar);
    auto pair_json = [](const WitnessPair& p) {
      Json j;
      j["u"] = complex_json(p.u);
      j["v"] = complex_json(p.v);
      j["current"] = p.current;
      j["ibc_residual"] = p.ibc_residual;
      return j;
    };
    Json j;
    j["alpha"] = complex_json(alpha);
    j["beta"] = complex_json(beta);
    j["psi_q"] = complex_json(psi_q);
    j["positive"] = pair_json(w.positive);
    j["negative"] = pair_json(w.negative);
    j["halvings"] = w.halvings;
    const bool ok = w.positive.ibc_residual <= 1e-14 && w.negative.ibc_residual <= 1e-14;
    j["passed"] = ok;
    all_ok = all_ok && ok;
    wit.push_back(j);
  }
  body["witnesses"] = wit;
  body["passed"] = all_ok;
  write_json(c.out / "boundary.json", c.prov, body);
  if (!all_ok) {
    c.err << "boundary checks failed\n";
    return exit_verification;
  }
  return exit_ok;
}

}  // namespace

int dispatch(const RunConfig& config, const DispatchOptions& options, std::ostream& err) {
  RunConfig cfg = config;
  if (options.seed) cfg.seed = *options.seed;
  Context c{cfg, {}, options.out_dir, err};
  c.prov.command = cfg.command;
  c.prov.config_hash = fnv1a64(cfg.text);
  c.prov.seed = cfg.seed;
  c.prov.version = version;
  c.prov.parameters = cfg.effective_parameters();
  try {
    std::error_code ec;
    fs::create_directories(c.out, ec);
    if (ec) {
      err << "error: cannot create output directory " << c.out.string() << ": " << ec.message() << "\n";
      return exit_config;
    }
    if (cfg.command == "symmetry") return cmd_symmetry(c);
    if (cfg.command == "field") return cmd_field(c);
    if (cfg.command == "streamlines") return cmd_streamlines(c);
    if (cfg.command == "simulate") return cmd_simulate(c);
    if (cfg.command == "lattice") return cmd_lattice(c, options.lattice_checks);
    if (cfg.command == "potential") return cmd_potential(c);
    if (cfg.command == "boundary") return cmd_boundary(c);
    err << "error: unknown command '" << cfg.command << "'\n";
    return exit_config;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return exit_numerical;
  } catch (const std::invalid_argument& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return exit_numerical;
  }
}

int run_command(const std::string& command, const fs::path& config_path,
                const DispatchOptions& options, std::ostream& err) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    err << "config error: cannot read " << config_path.string() << "\n";
    return exit_config;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    for (const auto& name : options.lattice_checks)
      if (name != "hermitian" && name != "gauge" && name != "T" && name != "ground" &&
          name != "reversal" && name != "bell")
        throw ConfigError(0, "unknown lattice check '" + name + "'");
    const RunConfig cfg = parse_config(ss.str(), command);
    return dispatch(cfg, options, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config;
  }
}

}  // namespace ibcsym::io
