#include <stdexcept>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sosgibbs/boundary_law.hpp"
#include "sosgibbs/ti_solver.hpp"

using namespace sosgibbs;

TEST_CASE("F_map examples") {
  for (int m : {1, 2, 3, 6}) {
    const ReducedLaw f = F_map(ReducedLaw(m), m, 1.0);
    for (double x : f.values()) CHECK(x == 0.0);
  }
  for (double theta : {0.1, 0.5, 1.0, 3.0, 40.0}) CHECK(F_map(ReducedLaw{0.0, 0.0}, 2, theta)[0] == 0.0);
  CHECK(F_map(ReducedLaw{0.0, 0.0}, 2, 0.5)[1] == doctest::Approx(std::log(2.0 / 1.75)).epsilon(1e-14));
  CHECK(F_map(ReducedLaw{0.0, 0.0}, 2, 0.5)[1] == doctest::Approx(0.133531).epsilon(1e-5));
  CHECK_THROWS_AS(F_map(ReducedLaw{0.0, 0.0}, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(F_map(ReducedLaw{0.0}, 2, 0.5), std::invalid_argument);
}

TEST_CASE("F_map agrees with the direct formula") {
  std::mt19937 gen(99);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int m : {1, 2, 3, 5})
    for (double theta : {0.3, 0.5, 1.0, 1.7, 4.0})
      for (int t = 0; t < 50; ++t) {
        std::vector<double> h(static_cast<std::size_t>(m));
        for (double& x : h) x = u(gen);
        const auto expect = oracle::F(h, m, theta);
        const ReducedLaw got = F_map(ReducedLaw(h), m, theta);
        for (int i = 0; i < m; ++i) CHECK(got[i] == doctest::Approx(expect[static_cast<std::size_t>(i)]).epsilon(1e-12));
      }
}

TEST_CASE("property: F vanishes identically at theta = 1 and the h0 = 0 slice is closed") {
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int t = 0; t < 200; ++t) {
    const ReducedLaw h{u(gen), u(gen), u(gen)};
    const ReducedLaw f = F_map(h, 3, 1.0);
    for (double x : f.values()) CHECK(x == 0.0);
    const ReducedLaw s{0.0, u(gen)};
    CHECK(F_map(s, 2, 0.2 + std::abs(u(gen))).values()[0] == 0.0);
  }
}

TEST_CASE("Jacobian matches central differences") {
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int m : {2, 3})
    for (double theta : {0.4, 2.5})
      for (int t = 0; t < 20; ++t) {
        ReducedLaw h(m);
        for (int i = 0; i < m; ++i) h[i] = u(gen);
        const auto jac = F_jacobian(h, m, theta);
        for (int l = 0; l < m; ++l) {
          ReducedLaw up = h, dn = h;
          up[l] += 1e-6;
          dn[l] -= 1e-6;
          const auto fu = oracle::F(up.values(), m, theta), fd = oracle::F(dn.values(), m, theta);
          for (int i = 0; i < m; ++i)
            CHECK(jac[static_cast<std::size_t>(i * m + l)] ==
                  doctest::Approx((fu[static_cast<std::size_t>(i)] - fd[static_cast<std::size_t>(i)]) / 2e-6).epsilon(1e-6));
        }
      }
}

TEST_CASE("spin flip commutes with F") {
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int m : {1, 2, 4})
    for (int t = 0; t < 30; ++t) {
      ReducedLaw h(m);
      for (int i = 0; i < m; ++i) h[i] = u(gen);
      CHECK(max_abs_diff(flipped(flipped(h)), h) <= 1e-14);
      CHECK(max_abs_diff(F_map(flipped(h), m, 0.6), flipped(F_map(h, m, 0.6))) <= 1e-12);
    }
  CHECK(max_abs_diff(flipped(ReducedLaw{0.0, 1.3}), ReducedLaw{0.0, 1.3}) == 0.0);
}

TEST_CASE("compatibility residual examples") {
  const auto params = ModelParams::from_coupling(2, 2, -1, 2);
  const auto ball = std::make_shared<const Ball>(2, 4);
  for (double z : solve_symmetric_ti(params).symmetric_roots) {
    auto field = BoundaryLawField::constant(ball, ReducedLaw{0.0, std::log(z)});
    CHECK(compatibility_residual(field, params.theta()) <= 1e-12);
    field.set_root_from_successors(params.theta());
    CHECK(compatibility_residual(field, params.theta()) <= 1e-12);
  }
  const auto zero = BoundaryLawField::constant(ball, ReducedLaw{0.0, 0.0});
  for (int k : {2, 3}) {
    const auto b = std::make_shared<const Ball>(k, 3);
    const auto z = BoundaryLawField::constant(b, ReducedLaw{0.0, 0.0});
    CHECK(compatibility_residual(z, 0.5) == doctest::Approx(k * std::log(2.0 / 1.75)).epsilon(1e-13));
  }
  CHECK(compatibility_residual(zero, 1.0) == 0.0);
}

TEST_CASE("boundary law field access") {
  const auto ball = std::make_shared<const Ball>(2, 2);
  BoundaryLawField f(ball, 2);
  CHECK_FALSE(f.has_root());
  CHECK_THROWS_AS(f.law(Word()), std::out_of_range);
  CHECK_THROWS_AS(f.law(Word::parse("1.2.1", 2)), std::out_of_range);
  CHECK_THROWS_AS(f.set(1, ReducedLaw{1.0}), std::invalid_argument);
  f.set(2, ReducedLaw{0.5, -0.5});
  CHECK(f.law(ball->vertex(2)) == ReducedLaw{0.5, -0.5});
  CHECK(f.law(2).unreduced(2) == 0.0);
  f.set_root(ReducedLaw{1.0, 2.0});
  CHECK(f.has_root());
  const auto t = f.truncated(1);
  CHECK(t.ball().size() == 4);
  CHECK(t.has_root());
  CHECK(t.law(2) == ReducedLaw{0.5, -0.5});
  CHECK_THROWS(f.truncated(3));
  f.clear_root();
  CHECK_FALSE(f.has_root());

  // Root law is the sum over all k+1 successors.
  const auto c = BoundaryLawField::constant(ball, ReducedLaw{0.3, -0.2});
  BoundaryLawField r = c;
  r.set_root_from_successors(0.7);
  const ReducedLaw f1 = F_map(ReducedLaw{0.3, -0.2}, 2, 0.7);
  CHECK(max_abs_diff(r.root(), 3.0 * f1) <= 1e-15);
  CHECK(max_abs_diff(successor_image(c, 1, 0.7), 2.0 * f1) <= 1e-15);
}

TEST_CASE("injectivity check") {
  std::mt19937 gen(21);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  const ReducedLaw h{0.2, 0.4};
  CHECK(check_injectivity(h, h, 0.5) == InjectivityVerdict::Consistent);
  CHECK(check_injectivity(h, ReducedLaw{3.0, -1.0}, 1.0) == InjectivityVerdict::ExcludedTheta);
  int distinct = 0;
  for (double theta : {0.5, 2.0})
    for (int t = 0; t < 5000; ++t) {
      const ReducedLaw a{u(gen), u(gen)}, b{u(gen), u(gen)};
      if (max_abs_diff(a, b) < 1e-3) continue;
      CHECK(check_injectivity(a, b, theta) == InjectivityVerdict::Consistent);
      distinct += max_abs_diff(F_map(a, 2, theta), F_map(b, 2, theta)) > 0.0;
    }
  CHECK(distinct > 9900);
  CHECK_THROWS(check_injectivity(ReducedLaw{0.0}, ReducedLaw{0.0}, 0.5));
}

TEST_CASE("derivative bound constants") {
  const auto b = derivative_bounds(0.5);
  CHECK(b.partial == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(b.lipschitz == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(b.slice == doctest::Approx(0.75 / (1.75 + std::sqrt(2.5))).epsilon(1e-15));
  CHECK(b.slice == doctest::Approx(0.2251482266).epsilon(1e-9));
  CHECK(b.first_comp == doctest::Approx(0.6).epsilon(1e-15));
  const auto one = derivative_bounds(1.0);
  CHECK(one.partial == 0.0);
  CHECK(one.slice == 0.0);
}

TEST_CASE("derivative bound check") {
  const auto r1 = derivative_bound_check(1.0, 500);
  CHECK(r1.ok());
  const auto r = derivative_bound_check(0.5, 10000);
  CHECK(r.ok());
  CHECK(r.samples == 10000);
  CHECK(r.worst_ratio[2] <= 1.0 + 1e-6);
  CHECK(r.worst_ratio[2] > 0.9);  // the slice constant is nearly attained
  CHECK(r.violating_samples.empty());
  // Same seed, same report.
  const auto again = derivative_bound_check(0.5, 10000);
  CHECK(again.worst_ratio == r.worst_ratio);
}
