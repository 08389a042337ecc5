#pragma once

// Certificates of global synchrony from upper bounds on ||dA|| and ||dL||.
//
// Two routes:
//  * check_theorem: the closed-form sufficient conditions
//      (i)   a = ||dA||/(np) < 1/12,
//      (ii)  l = ||dL||/(np) < 1/4,
//      (iii) (pi/4) / asin(12a) > ln(n/6) / ln(np/(2||dL||) - 1) + 1;
//  * refine: a table of upper bounds b(phi) >= |C_phi| on a grid of angles,
//    seeded from the order-parameter bound and shrunk by repeated
//    amplification until b(pi/2) < 1, i.e. no oscillator can sit outside
//    the open half-circle at a stable equilibrium.
//
// C_phi = {k : cos(theta_k) <= cos(phi)} in the frame where rho_1 >= 0.

#include "synccert/condition.hpp"
#include "synccert/detail/numeric.hpp"
#include "synccert/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace synccert {

/// Norm bounds viewed through the ratios the certificate inequalities use.
class CertificateInput {
 public:
  explicit CertificateInput(SpectralEstimates norms) : norms_(norms) {
    if (norms_.n < 1) throw std::invalid_argument("certificate input needs n >= 1");
    if (!(norms_.p > 0.0 && norms_.p <= 1.0)) throw std::invalid_argument("certificate input needs 0 < p <= 1");
    if (!(norms_.norm_a >= 0.0) || !(norms_.norm_l >= 0.0))
      throw std::invalid_argument("certificate input needs nonnegative norms");
  }

  std::size_t n() const { return norms_.n; }
  double nd() const { return static_cast<double>(norms_.n); }
  double p() const { return norms_.p; }
  double np() const { return nd() * norms_.p; }
  const SpectralEstimates& norms() const { return norms_; }

  /// ||dA|| / (np)
  double a() const { return norms_.norm_a / np(); }
  /// ||dL|| / (np)
  double l() const { return norms_.norm_l / np(); }
  /// np / (2 ||dL||) - 1, the per-step amplification factor of the corollary.
  double amplification_factor() const { return np() / (2.0 * norms_.norm_l) - 1.0; }

 private:
  SpectralEstimates norms_;
};

enum class Verdict { certified, not_certified };
enum class CertMethod { theorem, refine };

inline std::string_view to_string(Verdict v) { return v == Verdict::certified ? "certified" : "not_certified"; }
inline std::string_view to_string(CertMethod m) { return m == CertMethod::theorem ? "theorem" : "refine"; }

struct TableSnapshot {
  std::vector<double> grid;
  std::vector<double> bounds;
  friend bool operator==(const TableSnapshot&, const TableSnapshot&) = default;
};

struct CertificationResult {
  Verdict verdict = Verdict::not_certified;
  CertMethod method = CertMethod::theorem;
  std::size_t n = 0;
  double p = 0.0;
  SpectralEstimates norms;
  double confidence = 0.0;
  std::string reason;
  std::vector<Condition> trace;
  std::size_t sweeps = 0;  ///< refine only
  std::optional<TableSnapshot> table;

  bool certified() const { return verdict == Verdict::certified; }
};

// ---------------------------------------------------------------------------
// Order parameter

struct Rho1Iteration {
  double rho1 = 0.0;
  bool collapsed = false;
  std::vector<double> r_squared;  ///< successive lower bounds on rho_1^2
};

/// Alternates rho_1^2 >= (1 + s^2)/2 - 2a and |rho_2| >= s = 1 - 2a^2/rho_1^2,
/// starting from s = 0. Every iterate is a valid lower bound and the sequence
/// is non-decreasing.
inline Rho1Iteration rho1_iteration(double a) {
  if (!(a >= 0.0)) throw std::invalid_argument("rho1_lower_bound: a must be nonnegative");
  Rho1Iteration out;
  double s = 0.0;
  double prev = -1.0;
  for (int round = 0; round < 10000; ++round) {
    const double r2 = std::max(0.0, (1.0 + s * s) / 2.0 - 2.0 * a);
    if (r2 <= 0.0) {
      out.collapsed = true;
      out.rho1 = 0.0;
      return out;
    }
    out.r_squared.push_back(r2);
    s = std::max(0.0, 1.0 - 2.0 * a * a / r2);
    if (std::abs(r2 - prev) < 1e-13) break;
    prev = r2;
  }
  out.rho1 = std::sqrt(std::min(1.0, out.r_squared.back()));
  return out;
}

/// Lower bound on rho_1 at any stable equilibrium when ||dA||/(np) <= a; 0 if none.
inline double rho1_lower_bound(double a) { return rho1_iteration(a).rho1; }

// ---------------------------------------------------------------------------
// C_phi bound table

class CphiBoundTable {
 public:
  CphiBoundTable() = default;

  CphiBoundTable(std::vector<double> grid, std::vector<double> bounds, std::size_t n)
      : grid_(std::move(grid)), bounds_(std::move(bounds)), n_(n) {
    if (grid_.empty() || grid_.size() != bounds_.size()) throw std::invalid_argument("bad C_phi table shape");
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (!(grid_[i] > 0.0) || (i > 0 && !(grid_[i] > grid_[i - 1])))
        throw std::invalid_argument("C_phi grid must be strictly increasing in (0, pi/2]");
      if (!(bounds_[i] >= 0.0)) throw std::invalid_argument("C_phi bounds must be nonnegative");
      bounds_[i] = std::min(bounds_[i], static_cast<double>(n_));
    }
    if (std::abs(grid_.back() - detail::half_pi) > 1e-15)
      throw std::invalid_argument("C_phi grid must end at pi/2");
    grid_.back() = detail::half_pi;
    enforce_monotone();
  }

  /// m angles (i + 1) pi / (2m), i = 0..m-1.
  static std::vector<double> uniform_grid(std::size_t m) {
    if (m < 2) throw std::invalid_argument("C_phi grid needs at least two angles");
    std::vector<double> g(m);
    for (std::size_t i = 0; i < m; ++i) g[i] = static_cast<double>(i + 1) * detail::half_pi / static_cast<double>(m);
    g.back() = detail::half_pi;
    return g;
  }

  std::size_t size() const { return grid_.size(); }
  std::size_t n() const { return n_; }
  double angle(std::size_t i) const { return grid_[i]; }
  double bound(std::size_t i) const { return bounds_[i]; }
  std::span<const double> grid() const { return grid_; }
  std::span<const double> bounds() const { return bounds_; }
  double right_angle_bound() const { return bounds_.back(); }

  /// b_i <- min(b_i, value); monotonicity is re-established from i onwards.
  bool tighten(std::size_t i, double value) {
    if (!(value < bounds_[i])) return false;
    bounds_[i] = std::max(0.0, value);
    enforce_monotone(i);
    return true;
  }

  /// C_beta is a subset of C_alpha for alpha < beta, so b must be non-increasing.
  void enforce_monotone(std::size_t from = 0) {
    for (std::size_t i = std::max<std::size_t>(from, 1); i < bounds_.size(); ++i)
      bounds_[i] = std::min(bounds_[i], bounds_[i - 1]);
  }

  TableSnapshot snapshot() const { return {grid_, bounds_}; }

 private:
  friend struct RefineAccess;
  std::vector<double> grid_;
  std::vector<double> bounds_;
  std::size_t n_ = 0;
};

/// b_i = min(n, a^2 n / (rho1^2 sin^2 phi_i)).
inline CphiBoundTable cphi_initial_bounds(const CertificateInput& in, double rho1_lb, std::vector<double> grid) {
  if (!(rho1_lb > 0.0)) throw std::domain_error("moment bound collapsed");
  const double a = in.a();
  std::vector<double> b(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = std::sin(grid[i]);
    b[i] = std::min(in.nd(), a * a * in.nd() / (rho1_lb * rho1_lb * s * s));
  }
  return {std::move(grid), std::move(b), in.n()};
}

// ---------------------------------------------------------------------------
// Amplification

enum class AmplifyRule {
  /// Corollary as stated: |C_alpha| <= n/2, |C_beta| <= 2||dA||/p and
  /// sin(beta - alpha) >= 12 a give |C_beta| <= |C_alpha| / (np/(2||dL||) - 1).
  corollary,
  /// The same derivation with lambda = 1/sin(beta - alpha) and the current
  /// bounds instead of worst cases:
  ///   F = (1/l) (1 - lambda (b_beta + a n) / (n - b_alpha)) - b_alpha / (n - b_alpha),
  ///   |C_beta| <= b_alpha / F   whenever b_alpha <= n/2 and F > 1.
  relative_size,
};

inline std::string_view to_string(AmplifyRule r) { return r == AmplifyRule::corollary ? "corollary" : "relative_size"; }

/// New bound on |C_beta| from bounds at alpha < beta < pi/2, or nullopt when
/// the rule's hypotheses fail. `sin_gap` is sin(beta - alpha).
inline std::optional<double> amplified_bound(double b_alpha, double b_beta, double sin_gap, const CertificateInput& in,
                                             AmplifyRule rule) {
  const double n = in.nd();
  const double a = in.a();
  const double l = in.l();
  if (!(b_alpha <= n / 2.0) || !(sin_gap > 0.0)) return std::nullopt;
  if (rule == AmplifyRule::corollary) {
    const double factor = in.amplification_factor();
    if (!(b_beta <= 2.0 * a * n)) return std::nullopt;
    if (!(sin_gap >= 12.0 * a * (1.0 + detail::strict_slack))) return std::nullopt;
    if (!detail::strictly_greater(factor, 1.0)) return std::nullopt;
    return b_alpha / factor;
  }
  const double complement = n - b_alpha;
  const double bracket = 1.0 - (b_beta + a * n) / (sin_gap * complement);
  if (!(bracket > 0.0)) return std::nullopt;
  if (l == 0.0) return 0.0;
  const double factor = bracket / l - b_alpha / complement;
  if (!detail::strictly_greater(factor, 1.0)) return std::nullopt;
  return b_alpha / factor * (1.0 + detail::strict_slack);
}

struct AmplifyOutcome {
  bool applied = false;
  double bound = 0.0;  ///< b(beta) after the step
};

/// One amplification from grid node alpha to beta; the table is unchanged
/// when the hypotheses fail (inapplicability is a normal outcome).
inline AmplifyOutcome amplify_step(CphiBoundTable& table, std::size_t alpha, std::size_t beta,
                                   const CertificateInput& in, AmplifyRule rule = AmplifyRule::corollary) {
  if (!(alpha < beta) || beta >= table.size()) throw std::invalid_argument("amplify_step needs alpha < beta in range");
  const double phi_a = table.angle(alpha);
  const double phi_b = table.angle(beta);
  if (!(phi_b < detail::half_pi)) return {false, table.bound(beta)};
  auto cand = amplified_bound(table.bound(alpha), table.bound(beta), std::sin(phi_b - phi_a), in, rule);
  if (!cand) return {false, table.bound(beta)};
  table.tighten(beta, *cand);
  return {true, table.bound(beta)};
}

// ---------------------------------------------------------------------------
// Refinement engine

struct RefineOptions {
  std::size_t grid_size = 1000;
  std::size_t max_sweeps = 100000;
  AmplifyRule rule = AmplifyRule::relative_size;
  /// |C_phi| is an integer, so any bound can be rounded down.
  bool integer_rounding = true;
  bool keep_table = false;
};

struct RefineResult {
  CphiBoundTable table;
  CertificationResult result;
  /// b(pi/2) after initialisation and after every sweep.
  std::vector<double> right_angle_history;
};

namespace detail {

inline double round_bound(double b, bool integer) {
  if (!integer) return b;
  return std::floor(b * (1.0 + strict_slack));
}

}  // namespace detail

struct RefineAccess {
  static std::vector<double>& bounds(CphiBoundTable& t) { return t.bounds_; }
};

/// Sweeps over all grid pairs alpha < beta < pi/2 in lexicographic order,
/// amplifying until b(pi/2) < 1, a sweep changes nothing, or max_sweeps.
inline RefineResult refine(const CertificateInput& in, const RefineOptions& opt = {}) {
  RefineResult out;
  auto& res = out.result;
  res.method = CertMethod::refine;
  res.n = in.n();
  res.p = in.p();
  res.norms = in.norms();
  res.confidence = in.norms().confidence;

  const auto it = rho1_iteration(in.a());
  res.trace.push_back({"rho1 lower bound > 0", it.rho1, 0.0, ">", it.rho1 > 0.0});
  auto grid = CphiBoundTable::uniform_grid(opt.grid_size);
  if (it.collapsed) {
    out.table = CphiBoundTable(grid, std::vector<double>(grid.size(), in.nd()), in.n());
    res.verdict = Verdict::not_certified;
    res.reason = "moment bound collapsed";
    res.trace.push_back({"b(pi/2) < 1", in.nd(), 1.0, "<", false});
    out.right_angle_history.push_back(in.nd());
    if (opt.keep_table) res.table = out.table.snapshot();
    return out;
  }

  out.table = cphi_initial_bounds(in, it.rho1, grid);
  auto& b = RefineAccess::bounds(out.table);
  const std::size_t m = b.size();
  for (auto& v : b) v = detail::round_bound(v, opt.integer_rounding);
  out.table.enforce_monotone();
  out.right_angle_history.push_back(b.back());

  // Uniform grid: the gap depends only on the index difference.
  std::vector<double> sin_gap(m, 0.0);
  for (std::size_t d = 1; d < m; ++d) sin_gap[d] = std::sin(grid[d] - grid[0]);

  std::size_t sweeps = 0;
  while (sweeps < opt.max_sweeps && !detail::strictly_less(b.back(), 1.0)) {
    ++sweeps;
    bool changed = false;
    for (std::size_t alpha = 0; alpha + 2 < m; ++alpha) {
      const double b_alpha = b[alpha];
      if (b_alpha > in.nd() / 2.0) continue;
      for (std::size_t beta = alpha + 1; beta + 1 < m; ++beta) {
        b[beta] = std::min(b[beta], b[beta - 1]);
        auto cand = amplified_bound(b_alpha, b[beta], sin_gap[beta - alpha], in, opt.rule);
        if (!cand) continue;
        const double nb = detail::round_bound(*cand, opt.integer_rounding);
        if (nb < b[beta] * (1.0 - 1e-12)) {
          b[beta] = std::max(0.0, nb);
          changed = true;
        } else if (nb < b[beta]) {
          b[beta] = std::max(0.0, nb);
        }
      }
      b[m - 1] = std::min(b[m - 1], b[m - 2]);
    }
    out.table.enforce_monotone();
    out.right_angle_history.push_back(b.back());
    if (!changed) break;
  }

  res.sweeps = sweeps;
  const bool ok = detail::strictly_less(b.back(), 1.0);
  res.verdict = ok ? Verdict::certified : Verdict::not_certified;
  res.trace.push_back({"b(pi/2) < 1", b.back(), 1.0, "<", ok});
  res.reason = ok ? "C_{pi/2} is empty at every stable equilibrium"
                  : "refinement stalled with b(pi/2) = " + std::to_string(b.back());
  if (opt.keep_table) res.table = out.table.snapshot();
  return out;
}

// ---------------------------------------------------------------------------
// Closed-form theorem

inline CertificationResult check_theorem(const CertificateInput& in) {
  CertificationResult res;
  res.method = CertMethod::theorem;
  res.n = in.n();
  res.p = in.p();
  res.norms = in.norms();
  res.confidence = in.norms().confidence;

  const double a = in.a();
  const double l = in.l();
  const bool c1 = detail::strictly_less(a, 1.0 / 12.0);
  const bool c2 = detail::strictly_less(l, 0.25);
  res.trace.push_back({"(i) ||dA||/(np) < 1/12", a, 1.0 / 12.0, "<", c1});
  res.trace.push_back({"(ii) ||dL||/(np) < 1/4", l, 0.25, "<", c2});

  const double lhs = 12.0 * a <= 1.0 ? detail::pi / 4.0 / std::asin(12.0 * a) : std::nan("");
  const double factor = in.amplification_factor();
  const double rhs = factor > 1.0 ? std::log(in.nd() / 6.0) / std::log(factor) + 1.0
                                  : std::numeric_limits<double>::infinity();
  const bool c3 = detail::strictly_greater(lhs, rhs);
  res.trace.push_back({"(iii) (pi/4)/asin(12a) > ln(n/6)/ln(np/(2||dL||)-1) + 1", lhs, rhs, ">", c3});

  const bool ok = c1 && c2 && c3;
  res.verdict = ok ? Verdict::certified : Verdict::not_certified;
  if (ok) res.reason = "conditions (i)-(iii) hold";
  else res.reason = std::string("condition ") + (!c1 ? "(i)" : !c2 ? "(ii)" : "(iii)") + " fails";
  return res;
}

// ---------------------------------------------------------------------------
// Composition and threshold search

enum class CertifyMethod { theorem, refine, automatic };

struct CertifyOptions {
  CertifyMethod method = CertifyMethod::automatic;
  RefineOptions refine;
};

/// theorem, refine, or (automatic) the theorem first and refinement if it fails.
inline CertificationResult certify(const SpectralEstimates& norms, const CertifyOptions& opt = {}) {
  CertificateInput in(norms);
  CertificationResult res;
  if (opt.method != CertifyMethod::refine) res = check_theorem(in);
  if (opt.method == CertifyMethod::refine || (opt.method == CertifyMethod::automatic && !res.certified()))
    res = refine(in, opt.refine).result;
  if (!norms.converged) {
    res.trace.push_back({"norm estimates converged", 0.0, 1.0, "=", false});
    res.verdict = Verdict::not_certified;
    res.reason = "norm estimates did not converge";
  }
  return res;
}

inline CertificationResult certify_formula(std::size_t n, double p, const CertifyOptions& opt = {}) {
  return certify(estimates_from_formula(n, p), opt);
}

struct Probe {
  double p = 0.0;
  bool certified = false;
};

struct ThresholdOptions {
  CertifyMethod method = CertifyMethod::refine;
  double tol_p = 1e-3;
  RefineOptions refine;
  /// Extra probes between p* and 1 that must all certify.
  std::size_t verify_probes = 6;
};

struct ThresholdResult {
  std::size_t n = 0;
  double p_star = 1.0;   ///< smallest certified probe
  double p_below = 0.0;  ///< largest probe that failed
  std::vector<Probe> probes;
  bool monotone = true;
};

class NonMonotoneError : public std::runtime_error {
 public:
  NonMonotoneError(const std::string& what, ThresholdResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const ThresholdResult& partial() const { return partial_; }

 private:
  ThresholdResult partial_;
};

/// Smallest p (to relative tol_p) whose formula-norm certificate succeeds,
/// by halving from p = 1 and then geometric bisection. Certifiability is not
/// known to be monotone in p; every probe is logged and a certified probe
/// below a failed one aborts the search.
inline ThresholdResult threshold_search(std::size_t n, const ThresholdOptions& opt = {}) {
  if (n < 8) throw std::invalid_argument("threshold_search needs n >= 8");
  if (!(opt.tol_p > 0.0)) throw std::invalid_argument("threshold_search needs tol_p > 0");
  ThresholdResult out;
  out.n = n;
  CertifyOptions copt{opt.method, opt.refine};
  const auto probe = [&](double p) {
    bool ok = certify_formula(n, p, copt).certified();
    out.probes.push_back({p, ok});
    return ok;
  };
  if (!probe(1.0)) throw std::runtime_error("no certifiable p <= 1 for n = " + std::to_string(n));
  double hi = 1.0;
  double lo = 0.5;
  while (probe(lo)) {
    hi = lo;
    lo /= 2.0;
    if (lo < 1e-300) throw std::runtime_error("threshold_search: every probe certified");
  }
  while (hi / lo > 1.0 + opt.tol_p) {
    const double mid = std::sqrt(lo * hi);
    if (probe(mid)) hi = mid;
    else lo = mid;
  }
  for (std::size_t k = 1; k <= opt.verify_probes; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(opt.verify_probes + 1);
    probe(std::pow(hi, 1.0 - t));
  }
  out.p_star = hi;
  out.p_below = lo;
  double lowest_certified = 2.0, highest_failed = 0.0;
  for (const auto& pr : out.probes) {
    if (pr.certified) lowest_certified = std::min(lowest_certified, pr.p);
    else highest_failed = std::max(highest_failed, pr.p);
  }
  out.monotone = lowest_certified > highest_failed;
  if (!out.monotone)
    throw NonMonotoneError("certifiability is not monotone in p: certified at " + std::to_string(lowest_certified) +
                               " but not at " + std::to_string(highest_failed),
                           out);
  return out;
}

}  // namespace synccert
