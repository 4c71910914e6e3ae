#include <doctest.h>

#include <cmath>
#include <random>

#include "ibcsym/core_model.hpp"
#include "ibcsym/rng.hpp"

using namespace ibcsym;

namespace {

std::vector<cplx> random_charges(Rng& rng, std::size_t n) {
  std::vector<cplx> g;
  for (std::size_t k = 0; k < n; ++k) g.push_back(std::polar(0.2 + uniform01(rng), 2 * pi * uniform01(rng)));
  return g;
}

// Direct pairwise test of conj(g_i) g_j in R, independent of the classifier.
bool pairwise_real(const std::vector<cplx>& g, double tol) {
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (std::abs(std::imag(std::conj(g[i]) * g[j])) > tol * std::abs(g[i]) * std::abs(g[j])) return false;
  return true;
}

SectorWave random_wave(Rng& rng) {
  SectorWave w;
  for (std::size_t n = 0; n < 4; ++n)
    for (int k = 0; k < 5; ++k) w[n].push_back(cplx(normal01(rng), normal01(rng)));
  return w;
}

}  // namespace

TEST_CASE("charge system validation") {
  const Source a{Vec3(0, 0, 0), cplx(1, 0)};
  const Source b{Vec3(1, 0, 0), cplx(0, 1)};
  CHECK_NOTHROW(ChargeSystem({a, b}, 1.0, 0.0));
  CHECK_THROWS_WITH_AS(ChargeSystem({}, 1.0, 1.0), "at least one source is required", std::invalid_argument);
  CHECK_THROWS_WITH_AS(ChargeSystem({a}, 0.0, 1.0), "boson mass m must be positive", std::invalid_argument);
  CHECK_THROWS_AS(ChargeSystem({a}, 1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(ChargeSystem({a}, 1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_WITH_AS(ChargeSystem({a, {Vec3(2, 0, 0), cplx(0, 0)}}, 1.0, 1.0), "charges must be nonzero",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(ChargeSystem({a, {Vec3(0, 0, 0), cplx(2, 0)}}, 1.0, 1.0),
                       "sources must be pairwise distinct", std::invalid_argument);

  const ChargeSystem sys({a, b, {Vec3(0, 3, 0), cplx(1, 1)}}, 1.0, 1.0);
  CHECK(sys.min_source_spacing() == doctest::Approx(1.0));
  CHECK(sys.nearest_source(Vec3(0.9, 0.1, 0)) == 1);
  CHECK(sys.distance_to_nearest_source(Vec3(0, 2.5, 0)) == doctest::Approx(0.5));
  CHECK(std::isinf(ChargeSystem({a}, 1.0, 1.0).min_source_spacing()));
}

TEST_CASE("classify_charges examples") {
  {
    const std::vector<cplx> g{1.0, -2.0};
    const auto v = classify_charges(g);
    CHECK(v.symmetric);
    REQUIRE(v.theta);
    CHECK(*v.theta == doctest::Approx(0.0));
    CHECK_FALSE(v.witness);
  }
  {
    const std::vector<cplx> g{1.0, cplx(0, 1)};
    const auto v = classify_charges(g);
    CHECK_FALSE(v.symmetric);
    REQUIRE(v.witness);
    CHECK(v.witness->first == 0);
    CHECK(v.witness->second == 1);
    CHECK_FALSE(v.theta);
  }
  {
    const cplx p = std::polar(1.0, pi / 3);
    const std::vector<cplx> g{2.0 * p, -3.0 * p};
    const auto v = classify_charges(g);
    CHECK(v.symmetric);
    CHECK(*v.theta == doctest::Approx(pi / 3));
    CHECK(std::real(std::conj(g[0]) * g[1]) == doctest::Approx(-6.0));
  }
  {
    // opposite phase of the first charge: theta still canonical in (-pi/2, pi/2]
    const std::vector<cplx> g{std::polar(1.0, 2.5), std::polar(2.0, 2.5 - pi)};
    const auto v = classify_charges(g);
    CHECK(v.symmetric);
    CHECK(*v.theta == doctest::Approx(2.5 - pi));
  }
  {
    const std::vector<cplx> g{1.0, 1.0, cplx(0, 1), cplx(0, 2)};
    const auto v = classify_charges(g);
    REQUIRE(v.witness);
    CHECK(v.witness->first == 0);
    CHECK(v.witness->second == 2);  // lexicographically first violating pair
  }
  CHECK_THROWS_AS(classify_charges(std::vector<cplx>{}), std::invalid_argument);
  CHECK_THROWS_AS(classify_charges(std::vector<cplx>{1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("classify_charges properties over random charge sets") {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + trial % 5;
    auto g = random_charges(rng, n);
    if (trial % 2 == 0) {
      // symmetric by construction
      const double th = 2 * pi * uniform01(rng);
      for (auto& z : g) z = std::polar((uniform01(rng) < 0.5 ? -1.0 : 1.0) * (0.2 + uniform01(rng)), th);
    }
    const auto v = classify_charges(g);
    CHECK(v.symmetric == pairwise_real(g, 1e-10));
    CHECK(v.theta.has_value() != v.witness.has_value());
    if (v.symmetric) {
      CHECK(*v.theta > -pi / 2);
      CHECK(*v.theta <= pi / 2);
      for (auto z : g) CHECK(std::abs(std::imag(z * std::polar(1.0, -*v.theta))) <= 1e-9 * std::abs(z));
    }
    const double phi = 2 * pi * uniform01(rng);
    std::vector<cplx> rotated = g;
    for (auto& z : rotated) z *= std::polar(1.0, phi);
    CHECK(classify_charges(rotated).symmetric == v.symmetric);
    CHECK(classify_charges(reversed_charges(g)).symmetric == v.symmetric);
    if (n == 1) CHECK(v.symmetric);
  }
}

TEST_CASE("classify_charges tolerance is relative") {
  const std::vector<cplx> small{1e-6, cplx(1e-6, 1e-6 * 5e-11)};
  const std::vector<cplx> large{1e6, cplx(1e6, 1e6 * 5e-11)};
  CHECK(classify_charges(small).symmetric);
  CHECK(classify_charges(large).symmetric);
  CHECK_FALSE(classify_charges(std::vector<cplx>{1.0, cplx(1.0, 1e-8)}).symmetric);
}

TEST_CASE("general IBC classification") {
  auto p = [](double theta) { return IbcSourceParams{theta, 1.0, 0.0, 0.0, 1.0}; };
  {
    const auto v = classify_general_ibc(GeneralIBCParams({p(0.3), p(0.3 + pi)}));
    CHECK(v.symmetric);
    CHECK(*v.theta == doctest::Approx(0.3));
  }
  {
    const auto v = classify_general_ibc(GeneralIBCParams({p(0.0), p(pi / 4)}));
    CHECK_FALSE(v.symmetric);
    CHECK(v.witness->first == 0);
    CHECK(v.witness->second == 1);
  }
  {
    const auto v = classify_general_ibc(GeneralIBCParams({p(1.1)}));
    CHECK(v.symmetric);
    for (std::size_t n = 0; n < 5; ++n)
      CHECK(std::abs(std::remainder(v.sector_phase(n) + 2.0 * n * 1.1, 2 * pi)) < 1e-12);
  }
  CHECK(classify_general_ibc(GeneralIBCParams({p(0), p(0), p(0)})).symmetric);
  CHECK_THROWS_AS(GeneralIBCParams({{0.0, 2.0, 0.0, 0.0, 1.0}}), std::invalid_argument);
  CHECK_NOTHROW(GeneralIBCParams({{0.0, 2.0, 1.0, 3.0, 2.0}}));  // 2*2 - 3*1 = 1
}

TEST_CASE("time reversal examples") {
  SectorWave w;
  w[1] = {cplx(1, 1)};
  const auto t = time_reverse(w, pi / 2);
  CHECK(std::abs(t.at(1)[0] - cplx(-1, 1)) < 1e-15);
  const auto plain = time_reverse(w, 0.0);
  CHECK(plain.at(1)[0] == cplx(1, -1));
  CHECK(std::abs(reversal_phase(3, 0.2) - std::polar(1.0, -1.2)) < 1e-15);
}

TEST_CASE("time reversal is an anti-unitary involution") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_wave(rng);
    const auto b = random_wave(rng);
    const double th = 2 * pi * uniform01(rng) - pi;
    const auto ta = time_reverse(a, th);
    const auto tb = time_reverse(b, th);
    CHECK(std::abs(inner_product(ta, tb) - inner_product(b, a)) < 1e-12);
    const auto tta = time_reverse(ta, th);
    for (const auto& [n, v] : a)
      for (std::size_t k = 0; k < v.size(); ++k) CHECK(std::abs(tta.at(n)[k] - v[k]) < 1e-14);
    // anti-linearity
    SectorWave scaled = a;
    const cplx c(0.3, -1.7);
    for (auto& [n, v] : scaled)
      for (auto& x : v) x *= c;
    const auto ts = time_reverse(scaled, th);
    for (const auto& [n, v] : ta)
      for (std::size_t k = 0; k < v.size(); ++k) CHECK(std::abs(ts.at(n)[k] - std::conj(c) * v[k]) < 1e-13);
  }
}

TEST_CASE("gauge transform") {
  SectorWave w;
  w[1] = {cplx(0.5, 2.0)};
  w[2] = {cplx(0.5, 2.0)};
  const auto u = gauge_transform(w, pi);
  CHECK(std::abs(u.at(1)[0] + w.at(1)[0]) < 1e-15);
  CHECK(std::abs(u.at(2)[0] - w.at(2)[0]) < 1e-14);
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_wave(rng);
    const auto b = random_wave(rng);
    const double th = 2 * pi * uniform01(rng);
    CHECK(std::abs(inner_product(gauge_transform(a, th), gauge_transform(b, th)) - inner_product(a, b)) < 1e-12);
    const auto back = gauge_transform(gauge_transform(a, th), -th);
    const auto id = gauge_transform(a, 0.0);
    for (const auto& [n, v] : a)
      for (std::size_t k = 0; k < v.size(); ++k) {
        CHECK(std::abs(back.at(n)[k] - v[k]) < 1e-14);
        CHECK(id.at(n)[k] == v[k]);
      }
    CHECK(std::abs(gauge_phase(3, th) - std::polar(1.0, -3 * th)) < 1e-14);
  }
}

TEST_CASE("reversed charges") {
  const std::vector<cplx> g{1.0, cplx(0, 1)};
  const auto r = reversed_charges(g);
  CHECK(r[0] == cplx(1, 0));
  CHECK(r[1] == cplx(0, -1));
  const std::vector<cplx> real{2.0, -3.0};
  CHECK(reversed_charges(real) == real);
  const double th = 0.4;
  const std::vector<cplx> rot{std::polar(1.5, th), std::polar(-0.5, th)};
  const auto rr = reversed_charges(rot);
  for (std::size_t k = 0; k < rot.size(); ++k) CHECK(std::abs(rr[k] - std::polar(1.0, -2 * th) * rot[k]) < 1e-15);
}

TEST_CASE("inner product rejects mismatched sectors") {
  SectorWave a, b;
  a[0] = {1.0, 2.0};
  b[0] = {1.0};
  CHECK_THROWS_AS(inner_product(a, b), std::invalid_argument);
  b[0] = {1.0, 1.0};
  b[3] = {5.0};  // absent from a: contributes nothing
  CHECK(inner_product(a, b) == cplx(3.0, 0.0));
}
