#include <cmath>
#include <cstring>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "sosgibbs/kernels.hpp"

using namespace sosgibbs;
namespace kn = sosgibbs::kernels;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

BoundaryLawField random_field(std::shared_ptr<const Ball> ball, int m, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  BoundaryLawField f(ball, m);
  for (int v = 1; v < ball->size(); ++v) {
    ReducedLaw h(m);
    for (int i = 0; i < m; ++i) h[i] = u(gen);
    f.set(v, h);
  }
  ReducedLaw r(m);
  for (int i = 0; i < m; ++i) r[i] = u(gen);
  f.set_root(r);
  return f;
}

}  // namespace

TEST_CASE("log grid") {
  const auto g = kn::log_grid(1e-3, 1e3, 7);
  REQUIRE(g.size() == 7);
  CHECK(g.front() == doctest::Approx(std::log(1e-3)));
  CHECK(g[3] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(g.back() == doctest::Approx(std::log(1e3)));
  CHECK_THROWS_AS(kn::log_grid(0.0, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(kn::log_grid(1.0, 1.0, 5), std::invalid_argument);
}

TEST_CASE("enumeration size") {
  const Ball ball(2, 3);
  const auto e = kn::describe_enumeration(ball, 2, 2);
  CHECK(e.vertices == 10);
  CHECK(e.configs == 59049);
  CHECK(kn::describe_enumeration(ball, 0, 5).configs == 6);
  CHECK_THROWS_AS(kn::describe_enumeration(ball, 4, 2), std::invalid_argument);
  const Ball big(3, 5);
  CHECK_THROWS_AS(kn::describe_enumeration(big, 5, 2), std::length_error);
}

TEST_CASE("grid scan: serial and parallel agree") {
  for (double theta : {0.1353352832366127, 1.0, 2.0, 7.38905609893065}) {
    const auto p = ModelParams::from_theta(2, 2, theta);
    const auto axis = kn::log_grid(1e-6, 1e6, 120);
    const auto a = kn::serial::ti_grid_scan(p, axis), b = kn::omp::ti_grid_scan(p, axis);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
      CHECK(a.cells[i].i == b.cells[i].i);
      CHECK(a.cells[i].j == b.cells[i].j);
      CHECK(std::memcmp(&a.cells[i].h0, &b.cells[i].h0, sizeof(double)) == 0);
    }
  }
  const auto fm = ModelParams::from_coupling(2, 2, -1, 2);
  CHECK_FALSE(kn::omp::ti_grid_scan(fm, kn::log_grid(1e-6, 1e6, 200)).cells.empty());
  CHECK_THROWS_AS(kn::omp::ti_grid_scan(ModelParams::from_theta(2, 3, 0.5), kn::log_grid(1e-3, 1e3, 10)),
                  std::invalid_argument);
}

TEST_CASE("log weights: serial and parallel agree bitwise") {
  for (int k : {1, 2, 3})
    for (int m : {1, 2}) {
      const auto ball = std::make_shared<const Ball>(k, 2);
      const auto field = random_field(ball, m, static_cast<unsigned>(10 * k + m));
      const auto p = ModelParams::from_theta(k, m, 0.7);
      for (int d : {0, 1, 2}) CHECK(same_bits(kn::serial::log_weights(field, d, p), kn::omp::log_weights(field, d, p)));
    }
}

TEST_CASE("log weights against a brute-force energy") {
  const int k = 2, m = 2, n = 2;
  const auto ball = std::make_shared<const Ball>(k, n);
  const auto field = random_field(ball, m, 4);
  const auto p = ModelParams::from_coupling(k, m, 0.8, 0.6);
  const auto words = oracle::ball_words(n, k);
  const auto edges = oracle::ball_edges(words, k);
  REQUIRE(edges.size() == words.size() - 1);
  std::vector<int> at(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) at[i] = ball->index_of(words[i]);

  const auto w = kn::omp::log_weights(field, n, p);
  std::mt19937 gen(8);
  std::uniform_int_distribution<std::int64_t> pick(0, static_cast<std::int64_t>(w.size()) - 1);
  for (int t = 0; t < 2000; ++t) {
    const std::int64_t code = pick(gen);
    std::vector<int> spin(words.size());
    std::int64_t c = code;
    for (std::size_t v = 0; v < words.size(); ++v) {
      spin[v] = static_cast<int>(c % (m + 1));
      c /= m + 1;
    }
    double e = 0.0;
    for (auto [x, y] : edges) e += 0.8 * std::abs(spin[static_cast<std::size_t>(at[x])] - spin[static_cast<std::size_t>(at[y])]);
    double expect = 0.6 * e;
    for (std::size_t i = 0; i < words.size(); ++i)
      if (static_cast<int>(words[i].length()) == n) {
        const int v = at[i];
        const int s = spin[static_cast<std::size_t>(v)];
        expect += s == m ? 0.0 : field.law(v)[s];
      }
    CHECK(w[static_cast<std::size_t>(code)] == doctest::Approx(expect).epsilon(1e-12));
  }
  // Depth 0 carries the root law.
  const auto w0 = kn::omp::log_weights(field, 0, p);
  for (int s = 0; s <= m; ++s) CHECK(w0[static_cast<std::size_t>(s)] == field.root().unreduced(s));
}

TEST_CASE("alternating iteration: serial and parallel agree bitwise") {
  std::mt19937 gen(12);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (double theta : {0.3, 1.07, 5.0}) {
    const auto p = ModelParams::from_theta(theta > 1.0 ? 200 : 2, 2, theta);
    std::vector<ReducedLaw> starts;
    for (int i = 0; i < 40; ++i) starts.push_back(ReducedLaw{u(gen), u(gen)});
    const auto a = kn::serial::alternating_iterate(p, starts, 5000, 1e-13);
    const auto b = kn::omp::alternating_iterate(p, starts, 5000, 1e-13);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(same_bits(a[i].z.values(), b[i].z.values()));
      CHECK(same_bits(a[i].t.values(), b[i].t.values()));
      CHECK(a[i].iterations == b[i].iterations);
      CHECK(a[i].converged == b[i].converged);
    }
  }
}

TEST_CASE("alternating iteration limits satisfy the two-step system") {
  const auto p = ModelParams::from_theta(200, 2, 1.07);
  const std::vector<ReducedLaw> starts{ReducedLaw{0.0, 0.0}, ReducedLaw{0.0, -3.0}};
  for (const auto& l : kn::omp::alternating_iterate(p, starts, 200000, 1e-14)) {
    REQUIRE(l.converged);
    CHECK(max_abs_diff(l.z, 200.0 * F_map(l.t, 2, 1.07)) <= 1e-10);
    CHECK(max_abs_diff(l.t, 200.0 * F_map(l.z, 2, 1.07)) <= 1e-10);
  }
}
