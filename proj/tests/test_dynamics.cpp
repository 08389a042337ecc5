#include "oracles.hpp"
#include "synccert/dynamics.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>

using namespace synccert;
using Catch::Approx;

namespace {

PhaseState twisted(std::size_t n, int winding = 1) {
  std::vector<double> th(n);
  for (std::size_t j = 0; j < n; ++j) th[j] = 2.0 * detail::pi * winding * static_cast<double>(j) / static_cast<double>(n);
  return PhaseState(th);
}

std::vector<Vertex> labels(const VertexSet& s) {
  std::vector<Vertex> out;
  for (auto v : s.members()) out.push_back(v + 1);
  return out;
}

// Phases read off the eight marked points of the stray-set illustration.
PhaseState figure_state() {
  const double pts[8][2] = {{2, 0}, {1.8, 0.87}, {0.5, -1.94}, {2, 0}, {1.1, -1.67}, {1.7, 1.054}, {1.85, -0.76}, {1.6, -1.2}};
  std::vector<double> th;
  for (const auto& p : pts) th.push_back(std::atan2(p[1], p[0]));
  return PhaseState(th);
}

}  // namespace

TEST_CASE("moments of simple configurations", "[dynamics]") {
  const auto sync = moments(std::vector<double>(5, 0.7));
  CHECK(std::abs(sync.rho1) == Approx(1.0));
  CHECK(std::abs(sync.rho2) == Approx(1.0));
  const auto anti = moments(std::vector<double>{0.0, detail::pi});
  CHECK(std::abs(anti.rho1) == Approx(0.0).margin(1e-15));
  CHECK(std::abs(anti.rho2) == Approx(1.0));
  const auto quad = moments(std::vector<double>{0.0, detail::half_pi, detail::pi, -detail::half_pi});
  CHECK(std::abs(quad.rho1) == Approx(0.0).margin(1e-15));
  CHECK(std::abs(quad.rho2) == Approx(0.0).margin(1e-15));
}

TEST_CASE("moment magnitudes match the double-sum identity", "[dynamics][property]") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const auto s = random_phases(3 + rep, rng);
    const std::vector<double> th(s.theta().begin(), s.theta().end());
    const auto m = moments(s);
    CHECK(std::norm(m.rho1) == Approx(static_cast<double>(oracle::moment_sq_double_sum(th, 1))).margin(1e-10));
    CHECK(std::norm(m.rho2) == Approx(static_cast<double>(oracle::moment_sq_double_sum(th, 2))).margin(1e-10));
  }
}

TEST_CASE("C_phi on the eight-oscillator illustration", "[dynamics]") {
  const auto s = figure_state();
  CHECK(labels(c_phi(s, std::atan2(2.25, 1.1))) == std::vector<Vertex>{3});
  CHECK(labels(c_phi(s, std::atan2(1.19, 2.2))) == std::vector<Vertex>{3, 5, 6, 8});
  CHECK(labels(c_phi(s, std::atan2(2.0, 1.5))) == std::vector<Vertex>{3, 5});
}

TEST_CASE("C_phi edge cases", "[dynamics]") {
  const PhaseState sync(std::vector<double>(6, 0.0));
  CHECK(c_phi(sync, 0.1).empty());
  CHECK(c_phi(sync, detail::half_pi).empty());
  std::mt19937_64 rng(1);
  const auto s = random_phases(20, rng);
  CHECK(c_phi(s, 0.0).size() == 20);
  // Nested in phi.
  for (double a = 0.1; a < 1.5; a += 0.1) {
    const auto ca = c_phi(s, a), cb = c_phi(s, a + 0.05);
    for (auto v : cb.members()) CHECK(ca.contains(v));
  }
}

TEST_CASE("kernel K branches", "[dynamics]") {
  CHECK(kernel_K(2.0, 0.1) == 1.0);
  CHECK(kernel_K(detail::pi / 4, detail::pi / 4) == Approx(0.0).margin(1e-16));
  CHECK(kernel_K(0.3, 3.0) == Approx(-std::cos(0.3)).epsilon(1e-12));
  CHECK(kernel_K(0.3, 3.0) == Approx(-0.955336).epsilon(1e-6));
  CHECK(kernel_K(-0.3, 0.2) == Approx(std::sin(0.1)));
}

TEST_CASE("right-hand side is minus the energy gradient", "[dynamics][property]") {
  std::mt19937_64 rng(11);
  int states = 0;
  for (std::uint64_t gseed = 0; gseed < 10; ++gseed) {
    const std::size_t n = 5 + 2 * gseed;  // up to 23
    const auto g = sample_er(n, 0.5, gseed);
    const auto a = oracle::adjacency(g);
    for (int rep = 0; rep < 10; ++rep, ++states) {
      const auto s = random_phases(n, rng);
      std::vector<double> th(s.theta().begin(), s.theta().end()), rhs(n);
      kuramoto_rhs(g, th, rhs);
      const double h = 1e-5;
      for (std::size_t j = 0; j < n; ++j) {
        auto plus = th, minus = th;
        plus[j] += h;
        minus[j] -= h;
        const long double grad = (oracle::energy(a, plus) - oracle::energy(a, minus)) / (2.0L * h);
        CHECK(rhs[j] == Approx(-static_cast<double>(grad)).margin(1e-8));
      }
      CHECK(energy(g, th) == Approx(static_cast<double>(oracle::energy(a, th))).margin(1e-12));
    }
  }
  CHECK(states == 100);
}

TEST_CASE("integration from the synchronized state", "[dynamics]") {
  const auto g = sample_er(40, 0.3, 2);
  const auto rep = integrate(g, PhaseState(std::vector<double>(40, 0.0)));
  CHECK(rep.converged);
  CHECK(rep.residual == 0.0);
  CHECK(rep.steps == 0);
  CHECK(std::abs(moments(rep.state).rho1) == Approx(1.0));
}

TEST_CASE("twisted states on cycles are stable equilibria", "[dynamics]") {
  for (std::size_t n : {5u, 8u, 12u, 20u}) {
    const auto g = cycle_graph(n);
    const auto s = twisted(n);
    CHECK(equilibrium_residual(g, s.theta()) < 1e-12);
    const auto rep = integrate(g, s);
    CHECK(rep.converged);
    CHECK(rep.stable);
    CHECK(rep.hessian_second_eigenvalue > 0.0);
    CHECK(std::abs(moments(rep.state).rho1) < 1e-12);
  }
  // Winding 2 on C_6 has cos(2 pi / 3) < 0 on every edge, so it is unstable.
  const auto st = hessian_stability(cycle_graph(6), twisted(6, 2));
  CHECK_FALSE(st.stable);
}

TEST_CASE("Hessian at the synchronized state is the Laplacian", "[dynamics]") {
  const auto g = sample_er(30, 0.4, 9);
  REQUIRE(is_connected(g));
  const auto st = hessian_stability(g, PhaseState(std::vector<double>(30, 0.3)));
  CHECK(st.stable);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle::laplacian(g));
  CHECK(st.second_eigenvalue == Approx(es.eigenvalues()(1)).epsilon(1e-9));
  const std::vector<double> zeros(30, 0.0);
  CHECK((energy_hessian(g, zeros) - oracle::laplacian(g)).norm() < 1e-12);
}

TEST_CASE("antipodal pair on K2 is unstable", "[dynamics]") {
  std::vector<Edge> e{{0, 1}};
  const auto g = Graph::from_edges(2, e);
  const auto st = hessian_stability(g, PhaseState({0.0, detail::pi}));
  CHECK_FALSE(st.stable);
  CHECK(st.second_eigenvalue == Approx(-2.0).epsilon(1e-12));
  CHECK_THROWS(hessian_stability(g, PhaseState({0.0, 1.0})));
}

TEST_CASE("dense ER graph synchronizes", "[dynamics]") {
  const auto g = sample_er(300, 0.2, 3);
  std::mt19937_64 rng(3);
  const auto rep = integrate(g, random_phases(300, rng));
  CHECK(rep.converged);
  CHECK(rep.stable);
  CHECK(std::abs(moments(rep.state).rho1) > 0.9999);
}

TEST_CASE("energy never increases along a trajectory", "[dynamics][property]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = seed % 2 ? sample_er(60, 0.15, seed) : cycle_graph(12 + seed);
    std::mt19937_64 rng(seed);
    IntegrateOptions opt;
    opt.classify = false;
    const auto rep = integrate(g, random_phases(g.size(), rng), opt);
    REQUIRE(rep.energy.size() == rep.steps + 1);
    for (std::size_t i = 1; i < rep.energy.size(); ++i) CHECK(rep.energy[i] <= rep.energy[i - 1] + 1e-9);
  }
}

TEST_CASE("global phase shifts change nothing observable", "[dynamics][property]") {
  const auto g = sample_er(50, 0.3, 4);
  std::mt19937_64 rng(8);
  const auto s = random_phases(50, rng);
  for (double psi : {0.7, -2.1, 3.0}) {
    const auto r = s.rotated(psi);
    const auto m0 = moments(s), m1 = moments(r);
    CHECK(std::abs(m1.rho1) == Approx(std::abs(m0.rho1)).margin(1e-10));
    CHECK(std::abs(m1.rho2) == Approx(std::abs(m0.rho2)).margin(1e-10));
    CHECK(energy(g, r.theta()) == Approx(energy(g, s.theta())).margin(1e-10));
    CHECK(equilibrium_residual(g, r.theta()) == Approx(equilibrium_residual(g, s.theta())).margin(1e-10));
  }
  const auto rep = integrate(g, s);
  REQUIRE(rep.converged);
  const auto rot = rep.state.rotated(1.3);
  const auto a = hessian_stability(g, rep.state), b = hessian_stability(g, rot);
  CHECK(a.stable == b.stable);
  CHECK(a.second_eigenvalue == Approx(b.second_eigenvalue).margin(1e-10));
}

TEST_CASE("canonical frame puts the mean phase at zero", "[dynamics]") {
  std::mt19937_64 rng(21);
  const auto s = random_phases(30, rng).rotated(2.0);
  const auto c = s.canonicalized();
  CHECK(c.canonical_frame());
  CHECK_FALSE(c.degenerate_frame());
  const auto m = moments(c);
  CHECK(m.rho1.imag() == Approx(0.0).margin(1e-12));
  CHECK(m.rho1.real() > 0.0);
  for (double t : c.theta()) {
    CHECK(t >= -detail::pi);
    CHECK(t < detail::pi);
  }
  const auto d = twisted(10).canonicalized();
  CHECK(d.degenerate_frame());
}

TEST_CASE("equilibrium condition in complex form", "[dynamics][property]") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = sample_er(80, 0.2, 40 + seed);
    std::mt19937_64 rng(seed);
    const auto rep = integrate(g, random_phases(80, rng));
    REQUIRE(rep.converged);
    const auto th = rep.state.theta();
    for (std::size_t j = 0; j < 80; ++j) {
      std::complex<double> aq = 0.0;
      for (auto k : g.neighbors(j)) aq += std::polar(1.0, th[k]);
      const auto z = std::polar(1.0, -th[j]) * aq;
      if (rep.stable) CHECK(z.real() >= -1e-8);
      CHECK(std::abs(z.imag()) <= 1e-8);
    }
  }
}

TEST_CASE("inequality suite on synchronized and twisted states", "[dynamics]") {
  const auto g = sample_er(60, 0.3, 12);
  const auto norms = estimates_from_graph(g, 0.3, NormMethod::exact);
  const auto sync = integrate(g, PhaseState(std::vector<double>(60, 0.0)));
  const auto s1 = stable_equilibrium_inequality_suite(g, sync, 0.3, norms);
  CHECK(s1.all_pass());
  CHECK(s1.checks.size() == 5);

  const auto c = cycle_graph(10);
  const auto cn = estimates_from_graph(c, c.density(), NormMethod::exact);
  const auto tw = integrate(c, twisted(10));
  REQUIRE(tw.stable);
  const auto s2 = stable_equilibrium_inequality_suite(c, tw, c.density(), cn);
  CHECK(s2.rho1_degenerate);
  for (const auto& chk : s2.checks) {
    INFO(chk.name << ": " << chk.lhs << " " << chk.relation << " " << chk.rhs);
    CHECK(chk.pass);
  }
}

TEST_CASE("inequality suite on converged ER equilibria", "[dynamics]") {
  const auto g = sample_er(300, 0.2, 3);
  const auto norms = estimates_from_graph(g, 0.2, NormMethod::exact);
  for (std::uint64_t t = 0; t < 3; ++t) {
    const auto rec = simulate_trial(g, 0.2, norms, trial_seed(1, t));
    CHECK(rec.converged);
    CHECK(rec.suite_ran);
    CHECK(rec.suite_pass);
    CHECK(rec.energy_monotone);
    CHECK(rec.half_circle_ok);
  }
}

TEST_CASE("suite refuses non-equilibria", "[dynamics]") {
  const auto g = cycle_graph(6);
  IntegrateOptions opt;
  opt.max_time = 1e-3;
  const auto bogus = integrate(g, PhaseState({0, 1, 2, 3, 4, 5}), opt);
  REQUIRE_FALSE(bogus.converged);
  const auto norms = estimates_from_values(6, 0.3, 1.0, 1.0);
  CHECK_THROWS(stable_equilibrium_inequality_suite(g, bogus, 0.3, norms));
}

TEST_CASE("trial seeds are distinct and reproducible", "[dynamics]") {
  CHECK(trial_seed(1, 0) == trial_seed(1, 0));
  CHECK(trial_seed(1, 0) != trial_seed(1, 1));
  CHECK(trial_seed(1, 1) != trial_seed(2, 0));
  const auto g = cycle_graph(15);
  const auto norms = estimates_from_graph(g, g.density(), NormMethod::exact);
  const auto a = simulate_trial(g, g.density(), norms, 99);
  const auto b = simulate_trial(g, g.density(), norms, 99);
  CHECK(a.rho1 == b.rho1);
  CHECK(a.time == b.time);
}
