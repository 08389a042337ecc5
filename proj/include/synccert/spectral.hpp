#pragma once

// Spectral norms of the mean-shifted adjacency and Laplacian matrices
//
//   dA = A - pJ,            dL = L - E[L] = L + pJ - npI,
//
// either exactly (dense symmetric eigensolve) or by power iteration on the
// implicit operators, plus the explicit concentration bound f(n, p) used when
// no concrete graph is given. Every value handed to the certifier is meant as
// an upper bound on the true norm.

#include "synccert/detail/numeric.hpp"
#include "synccert/graph.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace synccert {

enum class NormMethod { exact, power };
enum class NormSource { formula, exact, estimated, user };

inline std::string_view to_string(NormSource s) {
  switch (s) {
    case NormSource::formula: return "formula";
    case NormSource::exact: return "exact";
    case NormSource::estimated: return "estimated";
    case NormSource::user: return "user";
  }
  return "?";
}

inline std::string_view to_string(NormMethod m) { return m == NormMethod::exact ? "exact" : "power"; }

inline constexpr std::size_t default_dense_threshold = 4096;

/// Upper bounds on ||dA|| and ||dL|| together with their provenance.
struct SpectralEstimates {
  double norm_a = 0.0;
  double norm_l = 0.0;
  double p = 1.0;
  std::size_t n = 1;
  NormSource source = NormSource::formula;
  /// Probability that both bounds hold (1 for an explicit graph).
  double confidence = 1.0;
  /// False when an iterative estimate hit its iteration cap.
  bool converged = true;
};

/// f(n, p) = 2 sqrt(n ln(n) p (1 - p)) + 4 ln(n) / 3, inflated by a relative
/// 2^-40 so that rounding never turns it into an underestimate.
inline double f_bound(std::size_t n, double p) {
  if (n < 2) throw std::invalid_argument("f_bound: n must be at least 2");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("f_bound: p must lie in [0, 1]");
  const double nn = static_cast<double>(n);
  const double logn = std::log(nn);
  const double value = 2.0 * std::sqrt(nn * logn * p * (1.0 - p)) + 4.0 * logn / 3.0;
  return value * (1.0 + 0x1.0p-40);
}

/// Norms from f(n, p): ||dA|| < f and ||dL|| < 2f, each failing with
/// probability below 2/n, so both hold with probability at least 1 - 4/n.
inline SpectralEstimates estimates_from_formula(std::size_t n, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("estimates_from_formula: p must lie in (0, 1]");
  const double f = f_bound(n, p);
  return {f, 2.0 * f, p, n, NormSource::formula, 1.0 - 4.0 / static_cast<double>(n), true};
}

inline SpectralEstimates estimates_from_values(std::size_t n, double p, double norm_a, double norm_l) {
  if (norm_a < 0 || norm_l < 0) throw std::invalid_argument("norms must be nonnegative");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0, 1]");
  return {norm_a, norm_l, p, n, NormSource::user, 1.0, true};
}

// ---------------------------------------------------------------------------

enum class ShiftedMatrix { adjacency, laplacian };

/// x -> dA x  or  x -> dL x, never materialising pJ.
class ShiftedOperator {
 public:
  ShiftedOperator(const Graph& g, double p, ShiftedMatrix which) : g_(&g), p_(p), which_(which) {}

  std::size_t size() const { return g_->size(); }

  void apply(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = g_->size();
    detail::CompensatedSum s;
    for (double v : x) s.add(v);
    const double shift = p_ * s.value();
    const double np = static_cast<double>(n) * p_;
    for (std::size_t j = 0; j < n; ++j) {
      double ax = 0.0;
      for (Vertex k : g_->neighbors(j)) ax += x[k];
      if (which_ == ShiftedMatrix::adjacency) {
        y[j] = ax - shift;
      } else {
        y[j] = static_cast<double>(g_->degree(j)) * x[j] - ax + shift - np * x[j];
      }
    }
  }

  /// Dense materialisation, for the exact path and tests.
  Eigen::MatrixXd dense() const {
    const std::size_t n = g_->size();
    const double np = static_cast<double>(n) * p_;
    Eigen::MatrixXd m(n, n);
    if (which_ == ShiftedMatrix::adjacency) {
      m.setConstant(-p_);
      for (std::size_t j = 0; j < n; ++j)
        for (Vertex k : g_->neighbors(j)) m(j, k) += 1.0;
    } else {
      m.setConstant(p_);
      for (std::size_t j = 0; j < n; ++j) {
        m(j, j) += static_cast<double>(g_->degree(j)) - np;
        for (Vertex k : g_->neighbors(j)) m(j, k) -= 1.0;
      }
    }
    return m;
  }

  /// Max absolute row sum, an upper bound on the spectral norm.
  double gershgorin_bound() const {
    const std::size_t n = g_->size();
    const double nn = static_cast<double>(n);
    double best = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = static_cast<double>(g_->degree(j));
      const bool loop = g_->has_edge(j, j);
      double row = 0.0;
      if (which_ == ShiftedMatrix::adjacency) {
        row = d * (1.0 - p_) + (nn - d) * p_;
      } else {
        // off-diagonal: (p - 1) on neighbours, p elsewhere; diagonal d - a_jj + p - np
        const double off_nbrs = d - (loop ? 1.0 : 0.0);
        const double off_rest = nn - 1.0 - off_nbrs;
        const double diag = d - (loop ? 1.0 : 0.0) + p_ - nn * p_;
        row = off_nbrs * std::abs(p_ - 1.0) + off_rest * p_ + std::abs(diag);
      }
      best = std::max(best, row);
    }
    return best;
  }

  ShiftedMatrix which() const { return which_; }

 private:
  const Graph* g_;
  double p_;
  ShiftedMatrix which_;
};

struct NormResult {
  double value = 0.0;  ///< exact norm, or an inflated estimate for power iteration
  bool converged = true;
  std::size_t iterations = 0;
  double residual = 0.0;
  NormMethod method = NormMethod::exact;
};

struct PowerOptions {
  /// Relative accuracy. Iteration stops once the residual on dM^2 is below
  /// tol / 10 (the top two magnitudes can sit at opposite ends of the
  /// spectrum and nearly coincide in dM^2), and the result is inflated by 1 + tol.
  double tol = 1e-3;
  std::uint64_t seed = 0x5eed;
  std::size_t max_iterations = 0;  ///< 0: min(10 n / sqrt(tol), 1e5)
  std::size_t dense_threshold = default_dense_threshold;
};

namespace detail {

inline NormResult exact_norm(const ShiftedOperator& op, std::size_t dense_threshold) {
  if (op.size() > dense_threshold)
    throw std::invalid_argument("exact norm requested for n = " + std::to_string(op.size()) +
                                " above the dense threshold " + std::to_string(dense_threshold));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.dense(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
  const auto& ev = es.eigenvalues();
  return {std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff())), true, 0, 0.0, NormMethod::exact};
}

// Power iteration on dM^2, whose dominant eigenvalue is ||dM||^2 whichever
// end of the spectrum attains the norm. Stops when the relative residual
// ||dM^2 x - mu x|| / mu drops below tol / 10.
inline NormResult power_norm(const ShiftedOperator& op, const PowerOptions& opt) {
  const std::size_t n = op.size();
  std::size_t cap = opt.max_iterations;
  if (cap == 0) {
    double c = 10.0 * static_cast<double>(n) / std::sqrt(opt.tol);
    cap = static_cast<std::size_t>(std::min(c, 1e5));
  }
  std::mt19937_64 rng(opt.seed);
  std::vector<double> x(n), y(n), z(n);
  for (auto& v : x) v = 2.0 * unit_uniform(rng) - 1.0;
  const bool project = op.which() == ShiftedMatrix::laplacian;  // dL 1 = 0
  const auto project_out_ones = [&](std::vector<double>& v) {
    if (!project) return;
    CompensatedSum s;
    for (double e : v) s.add(e);
    const double mean = s.value() / static_cast<double>(n);
    for (auto& e : v) e -= mean;
  };
  project_out_ones(x);
  double nx = norm2(x);
  if (nx == 0.0) return {0.0, true, 0, 0.0, NormMethod::power};
  for (auto& v : x) v /= nx;

  NormResult best{0.0, false, 0, 1.0, NormMethod::power};
  double mu = 0.0;
  for (std::size_t it = 1; it <= cap; ++it) {
    op.apply(x, z);
    op.apply(z, y);
    project_out_ones(y);
    mu = dot(x, y);
    if (mu <= 0.0) return {0.0, true, it, 0.0, NormMethod::power};  // dM x = 0 for the whole Krylov space
    CompensatedSum r2;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - mu * x[i];
      r2.add(r * r);
    }
    const double residual = std::sqrt(r2.value()) / mu;
    best = {std::sqrt(mu), false, it, residual, NormMethod::power};
    if (residual < opt.tol / 10.0 && it >= 3) {
      best.converged = true;
      break;
    }
    const double ny = norm2(y);
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
  }
  best.value *= 1.0 + opt.tol;
  return best;
}

}  // namespace detail

/// ||A - pJ||.
inline NormResult spectral_norm_delta_a(const Graph& g, double p, NormMethod method, const PowerOptions& opt = {}) {
  ShiftedOperator op(g, p, ShiftedMatrix::adjacency);
  return method == NormMethod::exact ? detail::exact_norm(op, opt.dense_threshold) : detail::power_norm(op, opt);
}

/// ||L + pJ - npI||.
inline NormResult spectral_norm_delta_l(const Graph& g, double p, NormMethod method, const PowerOptions& opt = {}) {
  ShiftedOperator op(g, p, ShiftedMatrix::laplacian);
  return method == NormMethod::exact ? detail::exact_norm(op, opt.dense_threshold) : detail::power_norm(op, opt);
}

inline SpectralEstimates estimates_from_graph(const Graph& g, double p, NormMethod method,
                                              const PowerOptions& opt = {}) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("estimates_from_graph: p must lie in (0, 1]");
  auto a = spectral_norm_delta_a(g, p, method, opt);
  auto l = spectral_norm_delta_l(g, p, method, opt);
  return {a.value, l.value, p, g.size(), method == NormMethod::exact ? NormSource::exact : NormSource::estimated, 1.0,
          a.converged && l.converged};
}

}  // namespace synccert
