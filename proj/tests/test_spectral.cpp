#include "oracles.hpp"
#include "synccert/graph.hpp"
#include "synccert/spectral.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace synccert;
using Catch::Approx;

namespace {

Graph triangle() {
  std::vector<Edge> e{{0, 1}, {0, 2}, {1, 2}};
  return Graph::from_edges(3, e, false);
}

}  // namespace

TEST_CASE("f_bound values", "[spectral]") {
  CHECK(f_bound(10, 1.0) == Approx(4.0 * std::log(10.0) / 3.0).epsilon(1e-12));
  CHECK(f_bound(10, 1.0) == Approx(3.0701).epsilon(1e-4));
  CHECK(f_bound(1000000, 0.256) == Approx(static_cast<double>(oracle::f_bound(1e6L, 0.256L))).epsilon(1e-12));
  CHECK(f_bound(1000000, 0.256) == Approx(3262.7).epsilon(1e-4));
  CHECK(f_bound(10000000, 0.0474) == Approx(5417.0).epsilon(1e-4));
  // Never below the exact value.
  CHECK(f_bound(1000000, 0.256) >= static_cast<double>(oracle::f_bound(1e6L, 0.256L)));
  CHECK_THROWS(f_bound(1, 0.5));
  CHECK_THROWS(f_bound(10, 1.2));
}

TEST_CASE("estimates from the formula", "[spectral]") {
  const auto e = estimates_from_formula(1000000, 0.256);
  CHECK(e.norm_a == Approx(3262.7).epsilon(1e-4));
  CHECK(e.norm_l == Approx(6525.4).epsilon(1e-4));
  CHECK(e.confidence == Approx(0.999996).epsilon(1e-12));
  CHECK(e.source == NormSource::formula);
  CHECK(estimates_from_formula(10000, 0.33237).confidence == Approx(1.0 - 4e-4).epsilon(1e-14));
  const auto small = estimates_from_formula(10, 1.0);
  CHECK(small.norm_a == Approx(3.07).epsilon(1e-3));
  CHECK(small.norm_l == Approx(6.14).epsilon(1e-3));
  CHECK_THROWS(estimates_from_formula(10, 0.0));
}

TEST_CASE("exact norms on small graphs", "[spectral]") {
  CHECK(spectral_norm_delta_a(triangle(), 1.0, NormMethod::exact).value == Approx(1.0).epsilon(1e-12));
  CHECK(spectral_norm_delta_a(triangle(), 1.0, NormMethod::exact).value ==
        Approx(oracle::norm_delta_a(triangle(), 1.0)).epsilon(1e-12));

  const auto empty = Graph::from_edges(5, std::span<const Edge>{});
  CHECK(spectral_norm_delta_a(empty, 0.0, NormMethod::exact).value == Approx(0.0).margin(1e-14));
  CHECK(spectral_norm_delta_l(empty, 0.0, NormMethod::exact).value == Approx(0.0).margin(1e-14));

  // Complete graph with loops: A = J and L = nI - J, so both shifts vanish at p = 1.
  const auto k = complete_graph(50, true);
  CHECK(spectral_norm_delta_a(k, 1.0, NormMethod::exact).value == Approx(0.0).margin(1e-10));
  CHECK(spectral_norm_delta_l(k, 1.0, NormMethod::exact).value == Approx(0.0).margin(1e-10));
  CHECK(oracle::norm_delta_l(k, 1.0) == Approx(0.0).margin(1e-10));
}

TEST_CASE("exact norms agree with the dense SVD oracle", "[spectral][property]") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::size_t n = 10 + 5 * seed;
    for (double p : {0.3, 0.7}) {
      const auto g = sample_er(n, p, seed);
      CHECK(spectral_norm_delta_a(g, p, NormMethod::exact).value == Approx(oracle::norm_delta_a(g, p)).epsilon(1e-10));
      CHECK(spectral_norm_delta_l(g, p, NormMethod::exact).value == Approx(oracle::norm_delta_l(g, p)).epsilon(1e-10));
    }
  }
}

TEST_CASE("ShiftedOperator matvec matches the dense matrix", "[spectral]") {
  const auto g = sample_er(30, 0.4, 8);
  std::mt19937_64 rng(1);
  std::vector<double> x(30), y(30);
  for (auto& v : x) v = detail::unit_uniform(rng) - 0.5;
  const Eigen::Map<Eigen::VectorXd> xv(x.data(), 30);
  const double np = 30 * 0.4;
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(30, 30);
  const Eigen::MatrixXd da = oracle::adjacency(g) - 0.4 * ones;
  const Eigen::MatrixXd dl = oracle::laplacian(g) + 0.4 * ones - np * Eigen::MatrixXd::Identity(30, 30);

  ShiftedOperator a(g, 0.4, ShiftedMatrix::adjacency);
  a.apply(x, y);
  CHECK((Eigen::Map<Eigen::VectorXd>(y.data(), 30) - da * xv).norm() < 1e-12);
  CHECK((a.dense() - da).norm() < 1e-12);
  CHECK(a.gershgorin_bound() >= oracle::spectral_norm(da));

  ShiftedOperator l(g, 0.4, ShiftedMatrix::laplacian);
  l.apply(x, y);
  CHECK((Eigen::Map<Eigen::VectorXd>(y.data(), 30) - dl * xv).norm() < 1e-12);
  CHECK((l.dense() - dl).norm() < 1e-12);
  CHECK(l.gershgorin_bound() >= oracle::spectral_norm(dl));
}

TEST_CASE("power iteration brackets the exact norm", "[spectral][property]") {
  PowerOptions opt;
  opt.tol = 1e-3;
  for (double p : {0.0, 0.3, 0.7, 1.0}) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const std::size_t n = 8 + 11 * seed;  // up to 63
      const auto g = sample_er(n, p, 50 + seed);
      for (auto which : {ShiftedMatrix::adjacency, ShiftedMatrix::laplacian}) {
        const double exact = which == ShiftedMatrix::adjacency ? oracle::norm_delta_a(g, p) : oracle::norm_delta_l(g, p);
        const auto est = which == ShiftedMatrix::adjacency ? spectral_norm_delta_a(g, p, NormMethod::power, opt)
                                                           : spectral_norm_delta_l(g, p, NormMethod::power, opt);
        INFO("n=" << n << " p=" << p << " exact=" << exact << " est=" << est.value);
        CHECK(est.value >= exact - opt.tol * exact - 1e-12);
        CHECK(est.value <= exact * (1.0 + 2.0 * opt.tol) + 1e-12);
      }
    }
  }
}

TEST_CASE("power iteration at desk scale", "[spectral][slow]") {
  const auto g = sample_er(4000, 0.1, 2024);
  const auto a = spectral_norm_delta_a(g, 0.1, NormMethod::power);
  const auto l = spectral_norm_delta_l(g, 0.1, NormMethod::power);
  REQUIRE(a.converged);
  REQUIRE(l.converged);
  const double edge = 2.0 * std::sqrt(4000 * 0.1 * 0.9);
  CHECK(a.value / edge >= 0.95);
  CHECK(a.value / edge <= 1.10);
  CHECK(a.value < f_bound(4000, 0.1));
  CHECK(l.value <= 2.2 * a.value);
}

TEST_CASE("iteration cap reports non-convergence", "[spectral]") {
  const auto g = sample_er(200, 0.5, 1);
  PowerOptions opt;
  opt.tol = 1e-12;
  opt.max_iterations = 2;
  const auto r = spectral_norm_delta_a(g, 0.5, NormMethod::power, opt);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 2);
  const auto est = estimates_from_graph(g, 0.5, NormMethod::power, opt);
  CHECK_FALSE(est.converged);
  CHECK(est.source == NormSource::estimated);
}

TEST_CASE("exact path refuses large graphs", "[spectral]") {
  const auto g = sample_er(100, 0.1, 1);
  PowerOptions opt;
  opt.dense_threshold = 50;
  CHECK_THROWS_AS(spectral_norm_delta_a(g, 0.1, NormMethod::exact, opt), std::invalid_argument);
}

TEST_CASE("one-set and two-set deviation lemmas hold exhaustively", "[spectral][property]") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const std::size_t n = 8 + seed % 4;
    for (double p : {0.3, 0.5, 0.8}) {
      const auto g = sample_er(n, p, 300 + seed);
      const auto a = oracle::adjacency(g);
      const double na = spectral_norm_delta_a(g, p, NormMethod::exact).value;
      const double nl = spectral_norm_delta_l(g, p, NormMethod::exact).value;
      const std::uint32_t full = (1u << n) - 1;
      for (std::uint32_t c = 1; c <= full; ++c) {
        const double s = oracle::popcount(c);
        const double e = static_cast<double>(oracle::edges_between(a, c, c));
        CHECK(std::abs(e - p * s * s) <= na * s + 1e-9);
        if (c == full) continue;
        const std::uint32_t r = full & ~c;
        const double t = oracle::popcount(r);
        const double cut = static_cast<double>(oracle::edges_between(a, c, r));
        CHECK(std::abs(cut - p * s * t) <= nl * s * t / static_cast<double>(n) + 1e-9);
      }
    }
  }
}

TEST_CASE("small Laplacian shift implies connectivity", "[spectral][property]") {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 12 + seed % 20;
    const double p = 0.15 + 0.01 * static_cast<double>(seed % 40);
    const auto g = sample_er(n, p, 900 + seed);
    const double nl = spectral_norm_delta_l(g, p, NormMethod::exact).value;
    if (nl < static_cast<double>(n) * p) {
      ++hits;
      CHECK(is_connected(g));
    }
  }
  CHECK(hits > 0);
}
