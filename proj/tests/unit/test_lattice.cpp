#include <doctest.h>

#include <cmath>

#include "ibcsym/core_model.hpp"
#include "ibcsym/lattice.hpp"

using namespace ibcsym;

namespace {

LatticeParams tiny(cplx g) {
  LatticeParams p;
  p.L = 2;
  p.n_max = 1;
  p.m = 1.3;
  p.a = 0.7;
  p.E0 = 0.4;
  p.hbar = 0.9;
  p.sources = {{0, g}};
  return p;
}

// Random charges on distinct sites of an L = 8 lattice; symmetric sets
// share a common phase.
LatticeParams random_params(Rng& rng, std::size_t n, bool symmetric) {
  LatticeParams p;
  std::vector<std::size_t> sites{0, 1, 2, 3, 4, 5, 6, 7};
  for (std::size_t k = 0; k < n; ++k) std::swap(sites[k], sites[k + static_cast<std::size_t>(uniform01(rng) * double(8 - k))]);
  const double th = 2 * pi * uniform01(rng);
  for (std::size_t k = 0; k < n; ++k) {
    const double mag = 0.2 + uniform01(rng);
    const cplx g = symmetric ? std::polar(uniform01(rng) < 0.5 ? -mag : mag, th)
                             : std::polar(mag, 2 * pi * uniform01(rng));
    p.sources.push_back({sites[k], g});
  }
  return p;
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("Fock basis") {
  for (std::size_t L : {2, 3, 8})
    for (std::size_t n : {1, 2, 3}) {
      const FockBasis b(L, n);
      CHECK(b.size() == FockBasis::dimension(L, n));
      // sum_k C(L+k-1, k) = C(L+n, n)
      double c = 1;
      for (std::size_t k = 1; k <= n; ++k) c = c * double(L + k) / double(k);
      CHECK(double(b.size()) == c);
      for (std::size_t i = 0; i < b.size(); ++i) CHECK(b.index_of(b.state(i)) == i);
    }
  CHECK(FockBasis::dimension(8, 2) == 45);
  const FockBasis b(2, 1);
  CHECK(b.index_of(Occupation{1, 1}) == b.size());
  CHECK(b.state(0) == Occupation{0, 0});
  CHECK(b.state(1) == Occupation{1, 0});
  CHECK(b.state(2) == Occupation{0, 1});
}

TEST_CASE("model validation") {
  LatticeParams p = LatticeParams::preset(1.0, 1.0);
  p.sources[1].site = 2;
  CHECK_THROWS(build_model(p));
  p = LatticeParams::preset(1.0, 1.0);
  p.sources[1].site = 8;
  CHECK_THROWS(build_model(p));
  p.L = 1;
  CHECK_THROWS(build_model(p));
  p = LatticeParams::preset(1.0, 1.0);
  p.n_max = 0;
  CHECK_THROWS(build_model(p));
  p = LatticeParams::preset(1.0, 1.0);
  p.L = 40;
  p.n_max = 5;  // C(45, 5) > 2e5
  CHECK_THROWS(build_model(p));
  CHECK(build_model(LatticeParams::preset(1.0, 1.0)).dimension() == 45);
}

TEST_CASE("3-state model against hand enumeration") {
  for (cplx g : {cplx(0, 1), cplx(0.3, -0.8)}) {
    const auto p = tiny(g);
    const auto model = build_model(p);
    const double hop = p.hbar * p.hbar / (2 * p.m * p.a * p.a);
    const double diag = p.E0 + p.hbar * p.hbar / (p.m * p.a * p.a);
    CMatrix expect = CMatrix::Zero(3, 3);
    // basis: |00>, |10>, |01>
    expect(1, 1) = diag;
    expect(2, 2) = diag;
    expect(1, 2) = expect(2, 1) = -hop;
    expect(0, 1) = g;             // a(x_0): |10> -> |00>
    expect(1, 0) = std::conj(g);  // a^dagger(x_0)
    CHECK(max_abs(model.dense() - expect) < 1e-15);
  }
  LatticeParams free = tiny(0.0);
  free.sources.clear();
  const auto m = build_model(free);
  CHECK(m.dense()(0, 0) == cplx(0.0));
  CHECK(std::abs(m.dense()(1, 2)) > 0);
}

TEST_CASE("Hamiltonian structure") {
  Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    const auto model = build_model(random_params(rng, 1 + t % 4, t % 2 == 0));
    CHECK(hermiticity_defect(model) < 1e-12);
  }
  // real charge gives a real symmetric matrix
  LatticeParams p = LatticeParams::preset(1.0, -0.5);
  const CMatrix H = build_model(p).dense();
  CHECK(H.imag().cwiseAbs().maxCoeff() == 0.0);
  CHECK(max_abs(H - H.transpose()) == 0.0);
  // two-boson source element carries sqrt(2)
  LatticeParams one;
  one.L = 3;
  one.sources = {{1, cplx(0.5, 0.25)}};
  const auto model = build_model(one);
  const auto& b = model.basis();
  const std::size_t i1 = b.index_of(Occupation{0, 1, 0}), i2 = b.index_of(Occupation{0, 2, 0});
  CHECK(std::abs(model.dense()(i2, i1) - std::sqrt(2.0) * std::conj(cplx(0.5, 0.25))) < 1e-15);
  CHECK(std::abs(model.dense()(i1, i2) - std::sqrt(2.0) * cplx(0.5, 0.25)) < 1e-15);
  // neighbour transfer with sqrt(n_s (n_t + 1))
  const std::size_t a = b.index_of(Occupation{1, 1, 0}), c = b.index_of(Occupation{0, 2, 0});
  CHECK(model.dense()(c, a).real() == doctest::Approx(-0.5 * std::sqrt(2.0)));
}

TEST_CASE("unitary evolution") {
  const auto model = build_model(LatticeParams::preset(1.0, cplx(0, 1)));
  Rng rng(22);
  const CVector psi = random_state(model.dimension(), rng);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-14));
  const Propagator U(model);
  CHECK(U.dense());
  CHECK((U(psi, 0.0) - psi).norm() == 0.0);
  const CVector f = U(psi, 1.0);
  CHECK(std::abs(f.norm() - 1.0) < 1e-9);
  CHECK((U(f, -1.0) - psi).norm() < 1e-8);
  CHECK((U(U(psi, 0.4), 0.6) - f).norm() < 1e-10);
  const CVector v = U.eigenvectors().col(3);
  const double E = U.eigenvalues()[3];
  CHECK((U(v, 2.5) - std::exp(cplx(0, -E * 2.5)) * v).norm() < 1e-10);
}

TEST_CASE("Chebyshev propagator against Taylor stepping") {
  LatticeParams p;
  p.L = 16;
  p.n_max = 4;
  p.sources = {{3, cplx(0.7, 0.2)}, {11, cplx(-0.3, 0.9)}};
  const auto model = build_model(p);
  REQUIRE(model.dimension() > Propagator::dense_limit);
  const Propagator U(model);
  CHECK_FALSE(U.dense());
  Rng rng(23);
  const CVector psi = random_state(model.dimension(), rng);
  const double t = 0.8;
  const CVector cheb = U(psi, t);
  // independent oracle: 30th-order Taylor steps of width 0.01
  CVector ref = psi;
  const double dt = 0.01;
  for (int s = 0; s < 80; ++s) {
    CVector term = ref, acc = ref;
    for (int k = 1; k <= 30; ++k) {
      term = (model.hamiltonian() * term) * cplx(0, -dt / p.hbar / k);
      acc += term;
    }
    ref = acc;
  }
  CHECK((cheb - ref).norm() < 1e-9);
  CHECK(std::abs(cheb.norm() - 1.0) < 1e-9);
  CHECK((U(cheb, -t) - psi).norm() < 1e-8);
}

TEST_CASE("time reversal operator") {
  const auto model = build_model(LatticeParams::preset(1.0, cplx(0, 1)));
  Rng rng(24);
  const CVector a = random_state(45, rng), b = random_state(45, rng);
  for (double th : {0.0, 0.3, 2.0}) {
    const CVector Ta = apply_T(model, th, a), Tb = apply_T(model, th, b);
    CHECK(std::abs(Ta.dot(Tb) - std::conj(a.dot(b))) < 1e-12);
    CHECK((apply_T(model, th, Ta) - a).norm() < 1e-12);
    const CVector Ua = apply_U(model, th, a);
    CHECK(std::abs(Ua.norm() - 1.0) < 1e-12);
    // the commutator matrix acts on conj(psi)
    const CVector lhs = apply_T(model, th, model.hamiltonian() * a) - model.hamiltonian() * apply_T(model, th, a);
    CHECK((lhs - T_commutator(model, th) * a.conjugate()).norm() < 1e-12);
  }
}

TEST_CASE("T commutation examples") {
  CHECK(check_T_commutation(build_model(LatticeParams::preset(1.0, -2.0)), 0.0) < 1e-12);
  const cplx ph = std::polar(1.0, pi / 3);
  const auto rot = build_model(LatticeParams::preset(ph, -2.0 * ph));
  CHECK(check_T_commutation(rot, pi / 3) < 1e-10);
  CHECK(check_T_commutation(rot, 0.0) > 0.1);
  const auto asym = build_model(LatticeParams::preset(1.0, cplx(0, 1)));
  double grid_min = 1e300;
  for (int k = 0; k < 360; ++k) grid_min = std::min(grid_min, check_T_commutation(asym, pi * k / 360));
  // frozen regression value (operator norm, 360-point grid on [0, pi))
  CHECK(grid_min == doctest::Approx(3.4641016151162316).epsilon(1e-6));
  const auto scan = scan_T_commutation(asym, 720);
  CHECK(scan.min_norm > 1.0);
  CHECK(scan.min_norm <= grid_min + 1e-9);
  const auto rscan = scan_T_commutation(rot, 720);
  CHECK(rscan.min_norm < 1e-10);
  CHECK(std::abs(rscan.theta - pi / 3) < 1e-6);
}

TEST_CASE("T commutation agrees with the charge classifier") {
  Rng rng(25);
  int symmetric = 0;
  for (int t = 0; t < 200; ++t) {
    const bool sym = t % 2 == 0;
    const auto p = random_params(rng, 1 + t % 5, sym);
    const auto model = build_model(p);
    const auto verdict = classify_charges(model.charges());
    const auto scan = scan_T_commutation(model, 720);
    CHECK(verdict.symmetric == (scan.min_norm < 1e-8));
    if (verdict.symmetric) {
      ++symmetric;
      CHECK(check_T_commutation(model, *verdict.theta) < 1e-10);
    }
  }
  CHECK(symmetric >= 100);
}

TEST_CASE("gauge equivalence") {
  Rng rng(26);
  for (int t = 0; t < 30; ++t) {
    const auto model = build_model(random_params(rng, 1 + t % 4, false));
    CHECK(check_gauge_equivalence(model, 0.0) == 0.0);
    CHECK(check_gauge_equivalence(model, 2 * pi * uniform01(rng)) <= 1e-12);
  }
  const auto model = build_model(LatticeParams::preset(1.0, cplx(0, 1)));
  CHECK(check_gauge_equivalence(model, pi / 4) <= 1e-12);
  const CMatrix h12 = CMatrix(gauge_conjugate(model.with_charges({std::polar(1.0, 0.3), std::polar(1.0, 0.3 + pi / 2)}), 0.3));
  CHECK(max_abs(h12 - model.dense()) < 1e-12);
  // composition: theta_1 then theta_2 equals theta_1 + theta_2
  const CMatrix both = CMatrix(gauge_conjugate(model, 0.7 + 1.1));
  CMatrix seq = CMatrix(gauge_conjugate(model, 0.7));
  const auto& b = model.basis();
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      seq(i, j) *= std::exp(cplx(0, 1.1 * (double(b.number(i)) - double(b.number(j)))));
  CHECK(max_abs(seq - both) < 1e-12);
  // U is unitary
  Rng r2(27);
  const CVector psi = random_state(45, r2);
  CHECK(std::abs(apply_U(model, 1.3, psi).norm() - 1.0) < 1e-14);
}

TEST_CASE("Bell jump rates") {
  const auto model = build_model(LatticeParams::preset(1.0, cplx(0, 1)));
  Rng rng(28);
  const CVector psi = random_state(45, rng);
  const CMatrix H = model.dense();
  const double hb = model.hbar();
  for (std::size_t q = 0; q < 45; ++q) {
    const auto rates = bell_jump_rates(model, psi, q);
    for (const auto& r : rates) {
      CHECK(r.target != q);
      CHECK(H(r.target, q) != cplx(0.0));
      const double x = (2 / hb) * std::imag(std::conj(psi[r.target]) * H(r.target, q) * psi[q]) / std::norm(psi[q]);
      CHECK(r.rate == doctest::Approx(std::max(0.0, x)));
    }
    for (std::size_t p = 0; p < 45; ++p) {
      if (p == q || H(p, q) == cplx(0.0)) continue;
      double s_qp = 0, s_pq = 0;
      for (const auto& r : rates)
        if (r.target == p) s_qp = r.rate;
      for (const auto& r : bell_jump_rates(model, psi, p))
        if (r.target == q) s_pq = r.rate;
      CHECK(s_qp * s_pq == 0.0);
      const double net = s_qp * std::norm(psi[q]) - s_pq * std::norm(psi[p]);
      CHECK(net == doctest::Approx(basis_current(model, psi, q, p)).epsilon(1e-12));
    }
  }
  CVector node = psi;
  node[4] = 0.0;
  CHECK_THROWS_AS(bell_jump_rates(model, node, 4), NumericalError);
  // real eigenstate of a real H: no rates
  const auto real = build_model(LatticeParams::preset(1.0, 0.5));
  const auto gc = ground_state_current(real);
  const CVector real_state = (gc.state / (gc.state[0] / std::abs(gc.state[0]))).real().cast<cplx>();
  for (std::size_t q = 0; q < 45; ++q)
    for (const auto& r : bell_jump_rates(real, real_state, q)) CHECK(r.rate == 0.0);
}

TEST_CASE("Bell rates on the 3-state model, all 9 pairs") {
  const auto model = build_model(tiny(cplx(0, 1)));
  const CMatrix H = model.dense();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
  // the exact ground state times a phase profile, to make the rates nonzero
  CVector psi = es.eigenvectors().col(0);
  psi[1] *= std::polar(1.0, 0.4);
  psi.normalize();
  for (std::size_t q = 0; q < 3; ++q) {
    const auto rates = bell_jump_rates(model, psi, q);
    for (std::size_t p = 0; p < 3; ++p) {
      double expected = 0;
      if (p != q) expected = std::max(0.0, (2 / model.hbar()) * std::imag(std::conj(psi[p]) * H(p, q) * psi[q])) / std::norm(psi[q]);
      double got = 0;
      for (const auto& r : rates)
        if (r.target == p) got = r.rate;
      CHECK(got == doctest::Approx(expected).epsilon(1e-13));
    }
  }
}

TEST_CASE("Bell process equivariance on three presets") {
  Rng rng(29);
  const std::vector<LatticeParams> presets{
      LatticeParams::preset(1.0, -0.7),
      LatticeParams::preset(std::polar(1.0, 0.9), std::polar(0.6, 0.9)),
      LatticeParams::preset(1.0, cplx(0, 1))};
  for (const auto& p : presets) {
    const auto model = build_model(p);
    const CVector psi0 = random_state(model.dimension(), rng);
    const auto ens = bell_equivariance(model, psi0, 1.0, 20000, 31);
    CHECK(ens.p_value > 0.01);
    double total = 0;
    for (double x : ens.exact_probabilities) total += x;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("Bell process: stationary real ground state never jumps") {
  const auto model = build_model(LatticeParams::preset(1.0, 0.5));
  const auto gc = ground_state_current(model);
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const auto tr = run_bell_process(model, gc.state, 5.0, s);
    CHECK(tr.jumps.empty());
    CHECK(tr.final_state == tr.initial);
  }
  const auto asym = build_model(LatticeParams::preset(1.0, cplx(0, 1)));
  const auto ga = ground_state_current(asym);
  std::size_t jumps = 0;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const auto tr = run_bell_process(asym, ga.state, 5.0, s);
    jumps += tr.jumps.size();
    for (std::size_t k = 1; k < tr.jumps.size(); ++k) CHECK(tr.jumps[k].time >= tr.jumps[k - 1].time);
  }
  CHECK(jumps > 0);
}

TEST_CASE("reversal conditions") {
  Rng rng(30);
  const CVector psi = random_state(45, rng);
  {
    const auto r = reversal_conditions_check(build_model(LatticeParams::preset(0.8, -1.5)), 0.0, psi);
    CHECK(r.passed);
    CHECK(r.pairs_checked > 0);
  }
  {
    const cplx ph = std::polar(1.0, pi / 5);
    const auto model = build_model(LatticeParams::preset(ph, -2.0 * ph));
    CHECK(reversal_conditions_check(model, pi / 5, psi).passed);
    CHECK_FALSE(reversal_conditions_check(model, 0.0, psi).passed);
  }
  {
    const auto model = build_model(LatticeParams::preset(1.0, cplx(0, 1)));
    int fails = 0;
    for (int k = 0; k < 720; ++k) fails += !reversal_conditions_check(model, pi * k / 720, psi).passed;
    CHECK(fails == 720);
  }
}

TEST_CASE("ground-state current vanishes iff the charges are symmetric") {
  CHECK(ground_state_current(build_model(LatticeParams::preset(1.0, 0.5))).max_abs < 1e-10);
  CHECK(ground_state_current(build_model(LatticeParams::preset(std::polar(1.0, 1.2), std::polar(-0.3, 1.2)))).max_abs < 1e-10);
  const auto gc = ground_state_current(build_model(LatticeParams::preset(1.0, std::polar(1.0, pi / 4))));
  // frozen regression value from exact diagonalization
  CHECK(gc.max_abs == doctest::Approx(0.0057455559782169296).epsilon(1e-6));
  CHECK(gc.gap > 1e-8);
  Rng rng(32);
  for (int t = 0; t < 40; ++t) {
    const bool sym = t % 2 == 0;
    const auto model = build_model(random_params(rng, 2 + t % 3, sym));
    CHECK((ground_state_current(model).max_abs <= 1e-10) == sym);
  }
}

TEST_CASE("truncation convergence") {
  auto energy = [](double g, std::size_t n) {
    LatticeParams p = LatticeParams::preset(g, std::polar(g, 0.7));
    p.n_max = n;
    return lattice_ground_energy(build_model(p));
  };
  for (double g : {0.1, 0.05}) {
    const double e1 = energy(g, 1), e2 = energy(g, 2), e3 = energy(g, 3);
    CHECK(std::abs(e2 - e1) <= 2.0 * std::pow(g, 4));
    CHECK(std::abs(e3 - e2) <= 2.0 * std::pow(g, 4));
    CHECK(e2 <= e1 + 1e-14);  // variational in the truncation
  }
  // leading order: -sum |g|^2 ... scales as g^2; the n_max gain scales as g^4
  const double d1 = std::abs(energy(0.1, 2) - energy(0.1, 1));
  const double d2 = std::abs(energy(0.05, 2) - energy(0.05, 1));
  CHECK(d1 / d2 == doctest::Approx(16.0).epsilon(0.05));
}
