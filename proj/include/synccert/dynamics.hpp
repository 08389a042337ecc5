#pragma once

// Homogeneous Kuramoto dynamics  d theta_j / dt = sum_k A_jk sin(theta_k - theta_j),
// a gradient flow of E(theta) = -1/2 sum_{j,k} A_jk cos(theta_k - theta_j).
//
// Simulation only ever provides evidence: a stable equilibrium with a tiny
// basin can be missed by any finite number of trials.

#include "synccert/condition.hpp"
#include "synccert/detail/numeric.hpp"
#include "synccert/graph.hpp"
#include "synccert/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace synccert {

/// Oscillator phases in [-pi, pi).
class PhaseState {
 public:
  PhaseState() = default;
  explicit PhaseState(std::vector<double> theta) : theta_(std::move(theta)) {
    for (auto& t : theta_) t = detail::wrap_angle(t);
  }

  std::size_t size() const { return theta_.size(); }
  std::span<const double> theta() const { return theta_; }
  double operator[](std::size_t i) const { return theta_[i]; }

  /// True once rotated so that rho_1 is real and nonnegative.
  bool canonical_frame() const { return canonical_; }
  /// Set when |rho_1| was too small to define the rotation (left unrotated).
  bool degenerate_frame() const { return degenerate_; }

  PhaseState rotated(double psi) const {
    std::vector<double> t(theta_);
    for (auto& v : t) v += psi;
    return PhaseState(std::move(t));
  }

  PhaseState canonicalized() const;

 private:
  std::vector<double> theta_;
  bool canonical_ = false;
  bool degenerate_ = false;
};

struct Moments {
  std::complex<double> rho1;
  std::complex<double> rho2;
};

/// rho_m = (1/n) sum_j exp(i m theta_j), m = 1, 2.
inline Moments moments(std::span<const double> theta) {
  detail::CompensatedSum c1, s1, c2, s2;
  for (double t : theta) {
    c1.add(std::cos(t));
    s1.add(std::sin(t));
    c2.add(std::cos(2.0 * t));
    s2.add(std::sin(2.0 * t));
  }
  const double n = static_cast<double>(theta.size());
  return {{c1.value() / n, s1.value() / n}, {c2.value() / n, s2.value() / n}};
}

inline Moments moments(const PhaseState& s) { return moments(s.theta()); }

inline constexpr double degenerate_rho1 = 1e-12;

inline PhaseState PhaseState::canonicalized() const {
  const auto m = moments(theta_);
  PhaseState out;
  if (std::abs(m.rho1) < degenerate_rho1) {
    out = *this;
    out.degenerate_ = true;
  } else {
    out = rotated(-std::arg(m.rho1));
  }
  out.canonical_ = true;
  return out;
}

inline PhaseState random_phases(std::size_t n, std::mt19937_64& rng) {
  std::vector<double> t(n);
  for (auto& v : t) v = -detail::pi + 2.0 * detail::pi * detail::unit_uniform(rng);
  return PhaseState(std::move(t));
}

// ---------------------------------------------------------------------------
// Vector field, energy, residual

inline void kuramoto_rhs(const Graph& g, std::span<const double> theta, std::span<double> out) {
  for (std::size_t j = 0; j < g.size(); ++j) {
    double s = 0.0;
    const double tj = theta[j];
    for (Vertex k : g.neighbors(j)) s += std::sin(theta[k] - tj);
    out[j] = s;
  }
}

inline double energy(const Graph& g, std::span<const double> theta) {
  detail::CompensatedSum e;
  for (std::size_t j = 0; j < g.size(); ++j)
    for (Vertex k : g.neighbors(j)) e.add(std::cos(theta[k] - theta[j]));
  return -0.5 * e.value();
}

/// max_j |sum_k A_jk sin(theta_k - theta_j)|.
inline double equilibrium_residual(const Graph& g, std::span<const double> theta) {
  std::vector<double> f(g.size());
  kuramoto_rhs(g, theta, f);
  double r = 0.0;
  for (double v : f) r = std::max(r, std::abs(v));
  return r;
}

// ---------------------------------------------------------------------------
// Stability

struct StabilityReport {
  bool stable = false;
  /// Smallest eigenvalue of the Hessian on the complement of span{1}.
  double second_eigenvalue = 0.0;
};

/// Hessian of E: H_jk = -A_jk cos(theta_k - theta_j) (j != k),
/// H_jj = sum_{k != j} A_jk cos(theta_k - theta_j). At theta = 0 this is L.
inline Eigen::MatrixXd energy_hessian(const Graph& g, std::span<const double> theta) {
  const std::size_t n = g.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (Vertex k : g.neighbors(j)) {
      if (k == j) continue;
      const double c = std::cos(theta[k] - theta[j]);
      h(j, k) -= c;
      h(j, j) += c;
    }
  return h;
}

inline StabilityReport hessian_stability(const Graph& g, const PhaseState& state, double tol = 1e-8) {
  if (state.size() != g.size()) throw std::invalid_argument("hessian_stability: state size mismatch");
  const double res = equilibrium_residual(g, state.theta());
  if (res > 1e-8)
    throw std::invalid_argument("hessian_stability: state is not an equilibrium (residual " + std::to_string(res) + ")");
  const std::size_t n = g.size();
  Eigen::MatrixXd h = energy_hessian(g, state.theta());
  // H 1 = 0; lifting the 1-direction well above the spectrum leaves the
  // restricted eigenvalues at the bottom.
  const double lift = 4.0 * static_cast<double>(std::max<std::size_t>(g.max_degree(), 1)) + 1.0;
  h.array() += lift / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("hessian eigensolve failed");
  const double lambda = n > 1 ? es.eigenvalues()(0) : 0.0;
  return {lambda >= -tol, lambda};
}

// ---------------------------------------------------------------------------
// Integration

struct IntegrateOptions {
  double step = 0.0;  ///< 0: 0.5 / max_degree
  double residual_tol = 1e-10;
  double max_time = 5000.0;
  bool record_energy = true;
  bool classify = true;  ///< run hessian_stability when converged
  double stability_tol = 1e-8;
};

struct EquilibriumReport {
  PhaseState state;  ///< canonicalised final state
  double residual = 0.0;
  bool converged = false;
  double time = 0.0;
  std::size_t steps = 0;
  std::vector<double> energy;  ///< E at the start and after every step
  bool classified = false;
  bool stable = false;
  double hessian_second_eigenvalue = 0.0;
};

/// Fixed-step classical RK4 until the residual drops below residual_tol or
/// max_time elapses.
inline EquilibriumReport integrate(const Graph& g, const PhaseState& theta0, const IntegrateOptions& opt = {}) {
  const std::size_t n = g.size();
  if (theta0.size() != n) throw std::invalid_argument("integrate: initial state has the wrong length");
  const double h = opt.step > 0.0 ? opt.step : 0.5 / static_cast<double>(std::max<std::size_t>(g.max_degree(), 1));

  std::vector<double> x(theta0.theta().begin(), theta0.theta().end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  EquilibriumReport rep;
  if (opt.record_energy) rep.energy.push_back(energy(g, x));

  const auto max_abs = [](const std::vector<double>& v) {
    double r = 0.0;
    for (double e : v) r = std::max(r, std::abs(e));
    return r;
  };

  kuramoto_rhs(g, x, k1);
  rep.residual = max_abs(k1);
  while (rep.residual >= opt.residual_tol && rep.time < opt.max_time) {
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    kuramoto_rhs(g, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    kuramoto_rhs(g, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
    kuramoto_rhs(g, tmp, k4);
    for (std::size_t i = 0; i < n; ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    rep.time += h;
    ++rep.steps;
    if (opt.record_energy) rep.energy.push_back(energy(g, x));
    kuramoto_rhs(g, x, k1);
    rep.residual = max_abs(k1);
  }
  rep.converged = rep.residual < opt.residual_tol;
  rep.state = PhaseState(std::move(x)).canonicalized();
  if (rep.converged && opt.classify) {
    auto st = hessian_stability(g, rep.state, opt.stability_tol);
    rep.classified = true;
    rep.stable = st.stable;
    rep.hessian_second_eigenvalue = st.second_eigenvalue;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Sets and kernel

/// {k : cos(theta_k) <= cos(phi)}, angles measured from phase 0.
inline VertexSet c_phi(const PhaseState& state, double phi) {
  const double c = std::cos(phi);
  std::vector<Vertex> m;
  for (std::size_t k = 0; k < state.size(); ++k)
    if (std::cos(state[k]) <= c) m.push_back(static_cast<Vertex>(k));
  return {state.size(), std::move(m)};
}

/// Comparison kernel whose weighted sums sum_j A_jk K(theta_j, theta_k) are
/// nonnegative at every stable equilibrium.
inline double kernel_K(double alpha, double beta) {
  const double aa = std::abs(alpha);
  const double ab = std::abs(beta);
  if (aa > detail::half_pi) return 1.0;
  if (ab > detail::half_pi) return -std::cos(alpha);
  return std::sin(aa - ab);
}

// ---------------------------------------------------------------------------
// Inequalities every stable equilibrium must satisfy

struct InequalitySuite {
  std::vector<Condition> checks;
  bool rho1_degenerate = false;
  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Condition& c) { return c.pass; });
  }
};

struct SuiteOptions {
  /// Interior angles for the C_phi checks: i (pi/2) / (angles + 1), i = 1..angles.
  std::size_t angles = 24;
  /// Absolute slack, multiplied by n.
  double slack_per_vertex = 1e-6;
};

/// Evaluates, at a stable equilibrium and with upper bounds on the norms:
///  (a) sum_j A_jk K(theta_j, theta_k) >= 0 for every k;
///  (b) E(C_b, C_b) >= sin(b - a) E(C_b, V \ C_a) for grid angles a < b;
///  (c) ||dA q||^2 >= n^2 p^2 rho1^2 (sum sin^2 + sum_{cos <= 0} cos^2);
///  (d) |C_phi| <= ||dA||^2 / (n p^2 rho1^2 sin^2 phi);
///  (e) rho1^2 >= (1 + |rho2|^2)/2 - 2||dA||/(np).
inline InequalitySuite stable_equilibrium_inequality_suite(const Graph& g, const EquilibriumReport& report, double p,
                                                           const SpectralEstimates& norms,
                                                           const SuiteOptions& opt = {}) {
  if (!report.converged || report.residual > 1e-8)
    throw std::invalid_argument("inequality suite needs a converged equilibrium");
  if (!report.classified || !report.stable) throw std::invalid_argument("inequality suite needs a stable equilibrium");
  const std::size_t n = g.size();
  const double nd = static_cast<double>(n);
  const double slack = opt.slack_per_vertex * nd;
  const PhaseState state = report.state.canonical_frame() ? report.state : report.state.canonicalized();
  const auto theta = state.theta();
  const Moments mom = moments(state);
  const double rho1 = std::abs(mom.rho1);
  InequalitySuite out;
  out.rho1_degenerate = state.degenerate_frame();

  // (a)
  double worst_kernel = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (Vertex j : g.neighbors(k)) s += kernel_K(theta[j], theta[k]);
    worst_kernel = std::min(worst_kernel, s);
  }
  if (n > 0) out.checks.push_back({"kernel: min_k sum_j A_jk K(theta_j, theta_k)", worst_kernel, -slack, ">=",
                                   worst_kernel >= -slack});

  // Vertex levels: v lies in C_{phi_i} (i = 1..m) iff i <= level(v).
  const std::size_t m = opt.angles;
  std::vector<double> phi(m + 1, 0.0);
  for (std::size_t i = 1; i <= m; ++i) phi[i] = static_cast<double>(i) * detail::half_pi / static_cast<double>(m + 1);
  std::vector<std::size_t> level(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    const double c = std::cos(theta[v]);
    while (level[v] < m && c <= std::cos(phi[level[v] + 1])) ++level[v];
  }
  // counts[u][w]: ordered adjacent pairs (k, j) with level(k) = u, level(j) = w.
  std::vector<std::vector<double>> counts(m + 1, std::vector<double>(m + 1, 0.0));
  for (std::size_t k = 0; k < n; ++k)
    for (Vertex j : g.neighbors(k)) counts[level[k]][level[j]] += 1.0;
  const auto block = [&](std::size_t u_lo, std::size_t u_hi, std::size_t w_lo, std::size_t w_hi) {
    double s = 0.0;
    for (std::size_t u = u_lo; u <= u_hi; ++u)
      for (std::size_t w = w_lo; w <= w_hi; ++w) s += counts[u][w];
    return s;
  };

  // (b)
  double worst_edges = std::numeric_limits<double>::infinity();
  for (std::size_t ia = 1; ia <= m; ++ia)
    for (std::size_t ib = ia + 1; ib <= m; ++ib) {
      const double inner = block(ib, m, ib, m);          // E(C_b, C_b)
      const double leaving = block(ib, m, 0, ia - 1);    // E(C_b, V \ C_a)
      worst_edges = std::min(worst_edges, inner - std::sin(phi[ib] - phi[ia]) * leaving);
    }
  if (m >= 2)
    out.checks.push_back({"edges: min E(C_b,C_b) - sin(b-a) E(C_b, V\\C_a)", worst_edges, -slack, ">=",
                          worst_edges >= -slack});

  // (c)
  {
    const std::complex<double> shift = p * nd * mom.rho1;
    detail::CompensatedSum lhs, spread;
    for (std::size_t j = 0; j < n; ++j) {
      std::complex<double> aq = 0.0;
      for (Vertex k : g.neighbors(j)) aq += std::polar(1.0, theta[k]);
      lhs.add(std::norm(aq - shift));
      const double s = std::sin(theta[j]);
      const double c = std::cos(theta[j]);
      spread.add(s * s + (c <= 0.0 ? c * c : 0.0));
    }
    const double rhs = nd * nd * p * p * rho1 * rho1 * spread.value();
    out.checks.push_back({"||dA q||^2 >= n^2 p^2 rho1^2 (sum sin^2 + sum_{cos<=0} cos^2)", lhs.value(), rhs - slack,
                          ">=", lhs.value() >= rhs - slack});
  }

  // (d): worst margin |C_phi| - bound over the grid
  {
    std::vector<double> size_at(m + 1, 0.0);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t i = 1; i <= level[v]; ++i) size_at[i] += 1.0;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i <= m; ++i) {
      const double s = std::sin(phi[i]);
      const double bound = norms.norm_a * norms.norm_a / (nd * p * p * rho1 * rho1 * s * s);
      worst = std::max(worst, size_at[i] - bound);
    }
    if (m >= 1) out.checks.push_back({"first bound: max |C_phi| - ||dA||^2/(n p^2 rho1^2 sin^2 phi)", worst, slack,
                                      "<=", worst <= slack});
  }

  // (e)
  {
    const double lhs = rho1 * rho1;
    const double rhs = (1.0 + std::norm(mom.rho2)) / 2.0 - 2.0 * norms.norm_a / (nd * p);
    out.checks.push_back({"rho1^2 >= (1 + |rho2|^2)/2 - 2||dA||/(np)", lhs, rhs - slack, ">=", lhs >= rhs - slack});
  }
  return out;
}

// ---------------------------------------------------------------------------
// One simulation trial

struct TrialRecord {
  std::uint64_t seed = 0;
  bool converged = false;
  double rho1 = 0.0;
  double residual = 0.0;
  double time = 0.0;
  bool stable = false;
  double hessian_second_eigenvalue = 0.0;
  bool suite_ran = false;
  bool suite_pass = true;
  bool energy_monotone = true;
  bool half_circle_ok = true;  ///< on a connected graph, empty C_{pi/2} at a stable state implies rho1 ~ 1
  std::vector<Condition> suite;
};

/// Seed of trial i in a batch started from `base` (splitmix64 of base + i),
/// so that nearby base seeds do not share trials.
inline std::uint64_t trial_seed(std::uint64_t base, std::uint64_t i) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Uniform random phases from `seed`, integrate, classify, validate.
inline TrialRecord simulate_trial(const Graph& g, double p, const SpectralEstimates& norms, std::uint64_t seed,
                                  const IntegrateOptions& opt = {}) {
  std::mt19937_64 rng(seed);
  const auto rep = integrate(g, random_phases(g.size(), rng), opt);
  TrialRecord t;
  t.seed = seed;
  t.converged = rep.converged;
  t.rho1 = std::abs(moments(rep.state).rho1);
  t.residual = rep.residual;
  t.time = rep.time;
  t.stable = rep.stable;
  t.hessian_second_eigenvalue = rep.hessian_second_eigenvalue;
  for (std::size_t i = 1; i < rep.energy.size(); ++i)
    if (rep.energy[i] > rep.energy[i - 1] + 1e-9) t.energy_monotone = false;
  if (rep.converged && rep.stable) {
    auto suite = stable_equilibrium_inequality_suite(g, rep, p, norms);
    t.suite_ran = true;
    t.suite_pass = suite.all_pass();
    t.suite = std::move(suite.checks);
    if (c_phi(rep.state, detail::half_pi).empty() && is_connected(g)) t.half_circle_ok = t.rho1 > 1.0 - 1e-8;
  }
  return t;
}

}  // namespace synccert
