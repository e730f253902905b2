#include "nlx/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "nlx/error.hpp"

namespace nlx {
namespace {

std::string fmt(const char* what, double a) {
  std::ostringstream os;
  os.precision(17);
  os << what << " (" << a << ")";
  return os.str();
}

void require(bool ok, const char* what, double a) {
  if (!ok) throw Error(ErrorCode::DomainError, fmt(what, a));
}

void check_threshold_s(double s) {
  require(std::isfinite(s) && s > 0.0 && s <= 1.0, "threshold order must satisfy 0 < s <= 1", s);
}

// Sign of the comparison log_lhs vs log_rhs with a relative guard band.
Verdict compare_logs(double log_lhs, double log_rhs) {
  const double d = log_lhs - log_rhs;
  // |lhs - rhs| <= guard * max(lhs, rhs)  <=>  |expm1(d)| <= guard * max(1, e^d)
  const double rel = std::abs(std::expm1(-std::abs(d)));
  if (rel <= kCriterionGuard) return Verdict::Marginal;
  return d > 0.0 ? Verdict::Holds : Verdict::Fails;
}

// ln[Γ((n+2s)/4)^2 / Γ((n-2s)/4)^2], the stability side shared by both criteria.
double log_stability_side(double n, double s) {
  return 2.0 * (log_gamma((n + 2.0 * s) / 4.0) - log_gamma((n - 2.0 * s) / 4.0));
}

template <class Crit>
std::optional<double> upper_flip(Crit crit, double n_lo, double n_max, double step) {
  if (!(step > 0.0) || !(n_max > n_lo)) throw Error(ErrorCode::InvalidArgument, "bad scan range");
  auto holds = [&](double n) { return crit(n).verdict == Verdict::Holds; };
  std::optional<double> last_true;
  double flip_hi = 0.0;
  bool prev = holds(n_lo);
  double prev_n = n_lo;
  if (prev) last_true = n_lo;
  for (std::size_t k = 1;; ++k) {
    const double n = n_lo + static_cast<double>(k) * step;
    if (n > n_max) break;
    const bool cur = holds(n);
    if (prev && !cur) {
      last_true = prev_n;
      flip_hi = n;
    }
    prev = cur;
    prev_n = n;
  }
  if (!last_true || flip_hi == 0.0) return std::nullopt;
  double a = *last_true, b = flip_hi;
  for (int it = 0; it < 200 && b - a > 1e-13 * b; ++it) {
    const double m = 0.5 * (a + b);
    (holds(m) ? a : b) = m;
  }
  return 0.5 * (a + b);
}

}  // namespace

double log_gamma(double x) {
  require(std::isfinite(x), "log_gamma argument must be finite", x);
  require(!(x <= 0.0 && x == std::floor(x)), "log_gamma pole", x);
  int sign = 0;
  return boost::math::lgamma(x, &sign);
}

double threshold_gelfand(double s) {
  check_threshold_s(s);
  return 10.0 * s;
}

double lundgren_T(double t) {
  require(t >= 1.0, "T(t) needs t >= 1", t);
  return t + std::sqrt(t * (t - 1.0));
}

double threshold_lane_emden(double s, double p) {
  check_threshold_s(s);
  require(std::isfinite(p) && p > 1.0, "Lane-Emden exponent must exceed 1", p);
  return 2.0 * s + 4.0 * s / (p - 1.0) * (p + std::sqrt(p * (p - 1.0)));
}

double threshold_mems(double s, double p) {
  check_threshold_s(s);
  require(std::isfinite(p) && p > 1.0, "MEMS exponent must exceed 1", p);
  return 2.0 * s + 4.0 * s / (p + 1.0) * (p + std::sqrt(p * (p + 1.0)));
}

double threshold_gradient(double s, double p, double q) {
  check_threshold_s(s);
  require(std::isfinite(p) && p > 2.0, "gradient exponent p must exceed 2", p);
  require(std::isfinite(q) && q > 2.0, "gradient exponent q must exceed 2", q);
  return 2.0 * s + 4.0 * s / (p + q - 2.0) * std::max(lundgren_T(p - 1.0), lundgren_T(q - 1.0));
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Holds: return "true";
    case Verdict::Fails: return "false";
    case Verdict::Marginal: return "marginal";
  }
  return "?";
}

double CriterionResult::lhs() const { return std::exp(log_lhs); }
double CriterionResult::rhs() const { return std::exp(log_rhs); }

CriterionResult gelfand_gamma_criterion(double n, double s) {
  require(std::isfinite(s) && s > 0.0 && s < 1.0, "order must satisfy 0 < s < 1", s);
  require(std::isfinite(n) && n >= 2.0 * s, "Gelfand criterion needs n > 2s", n);
  CriterionResult r;
  if (n == 2.0 * s) {
    // Gamma((n-2s)/2) sits on a pole; the comparison is left undecided.
    r.log_lhs = r.log_rhs = std::nan("");
    r.verdict = Verdict::Marginal;
    return r;
  }
  r.log_lhs = log_gamma(n / 2.0) + log_gamma(1.0 + s) - log_gamma((n - 2.0 * s) / 2.0);
  r.log_rhs = log_stability_side(n, s);
  r.verdict = compare_logs(r.log_lhs, r.log_rhs);
  return r;
}

CriterionResult lane_emden_gamma_criterion(double n, double s, double p) {
  require(std::isfinite(s) && s > 0.0 && s < 1.0, "order must satisfy 0 < s < 1", s);
  require(std::isfinite(p) && p > 1.0, "Lane-Emden exponent must exceed 1", p);
  const double b = s / (p - 1.0);
  require(std::isfinite(n) && n / 2.0 - b > 0.0, "need n/2 > s/(p-1)", n);
  require((n - 2.0 * s) / 2.0 - b > 0.0, "need (n-2s)/2 > s/(p-1)", n);
  CriterionResult r;
  r.log_lhs = std::log(p) + log_gamma(n / 2.0 - b) + log_gamma(s + b) - log_gamma(b) -
              log_gamma((n - 2.0 * s) / 2.0 - b);
  r.log_rhs = log_stability_side(n, s);
  r.verdict = compare_logs(r.log_lhs, r.log_rhs);
  return r;
}

std::optional<double> gelfand_crossover(double s, double n_max, double step) {
  require(s > 0.0 && s < 1.0, "order must satisfy 0 < s < 1", s);
  return upper_flip([s](double n) { return gelfand_gamma_criterion(n, s); }, 2.0 * s + step,
                    n_max, step);
}

std::optional<double> lane_emden_crossover(double s, double p, double n_max, double step) {
  require(s > 0.0 && s < 1.0, "order must satisfy 0 < s < 1", s);
  require(p > 1.0, "Lane-Emden exponent must exceed 1", p);
  const double edge = 2.0 * s + 2.0 * s / (p - 1.0);
  return upper_flip([s, p](double n) { return lane_emden_gamma_criterion(n, s, p); },
                    edge + step, n_max, step);
}

double gelfand_singular_lambda(double n, double s) {
  require(std::isfinite(s) && s > 0.0 && s < 1.0, "order must satisfy 0 < s < 1", s);
  require(std::isfinite(n) && n > 2.0 * s, "singular constant needs n > 2s", n);
  return std::exp(2.0 * s * std::log(2.0) + log_gamma(n / 2.0) + log_gamma(1.0 + s) -
                  log_gamma((n - 2.0 * s) / 2.0));
}

LaneEmdenSingular lane_emden_singular(double n, double s, double p, double p_max) {
  require(std::isfinite(s) && s > 0.0 && s < 1.0, "order must satisfy 0 < s < 1", s);
  require(std::isfinite(p) && p > 1.0, "Lane-Emden exponent must exceed 1", p);
  require(p <= p_max, "exponent beyond configured range", p);
  const double b = s / (p - 1.0);
  require(n / 2.0 - b > 0.0, "need n/2 > s/(p-1)", n);
  require((n - 2.0 * s) / 2.0 - b > 0.0, "need (n-2s)/2 > s/(p-1)", n);
  LaneEmdenSingular r;
  r.beta = 2.0 * b;
  const double log_ap = log_gamma(n / 2.0 - b) + log_gamma(s + b) - log_gamma(b) -
                        log_gamma((n - 2.0 * s) / 2.0 - b);
  r.A_pow = std::exp(log_ap);
  r.A = std::exp(log_ap / (p - 1.0));
  r.lambda = std::exp2(2.0 * s);
  return r;
}

EmbeddingExponent embedding_exponent(double n, double s, double r) {
  require(std::isfinite(r) && r >= 1.0, "embedding needs r >= 1", r);
  require(n > 0.0 && s > 0.0 && s < 1.0, "embedding needs n > 0, 0 < s < 1", s);
  EmbeddingExponent e;
  const double d = n - 2.0 * r * s;
  if (d > 0.0) {
    e.kind = EmbeddingExponent::Kind::Finite;
    e.q = n * r / d;
  } else if (d == 0.0) {
    e.kind = EmbeddingExponent::Kind::AnyFinite;
  } else {
    e.kind = EmbeddingExponent::Kind::Unbounded;
  }
  return e;
}

std::string_view to_string(BootstrapVerdict v) noexcept {
  return v == BootstrapVerdict::Bounded ? "Bounded" : "Inconclusive";
}

double bootstrap_seed(double n, double s) {
  require(n > 2.0 * s, "seed exponent n/(n-2s) needs n > 2s", n);
  return n / (n - 2.0 * s);
}

BootstrapTrace nedev_bootstrap(double n, double s, double p0, std::size_t max_steps,
                               bool replay_stages) {
  require(std::isfinite(n) && n > 0.0, "dimension must be positive", n);
  require(std::isfinite(s) && s > 0.0 && s < 1.0, "order must satisfy 0 < s < 1", s);
  require(std::isfinite(p0) && p0 > 1.0, "seed exponent must exceed 1", p0);
  if (max_steps < 1) throw Error(ErrorCode::InvalidArgument, "max_steps must be >= 1");

  BootstrapTrace t;
  t.exponents.push_back(p0);
  const double linf = n / (2.0 * s);

  // Returns true when the step settles the verdict.
  auto push = [&](double num, double den, double prev) {
    ++t.steps;
    if (den <= 0.0) {
      t.exponents.push_back(std::numeric_limits<double>::infinity());
      t.verdict = BootstrapVerdict::Bounded;
      return true;
    }
    const double next = num / den;
    t.exponents.push_back(next);
    if (next > linf && next > prev) {
      t.verdict = BootstrapVerdict::Bounded;
      return true;
    }
    return false;
  };

  double p = p0;
  if (replay_stages) {
    const double seed = bootstrap_seed(n, s);
    if (std::abs(p0 - seed) > 1e-12 * seed)
      throw Error(ErrorCode::InvalidArgument, "stage replay must start from n/(n-2s)");
    const double nums[3] = {2.0 * n, n, 2.0 * n};
    const double dens[3] = {3.0 * n - 8.0 * s, 2.0 * (n - 3.0 * s), 5.0 * n - 16.0 * s};
    for (int k = 0; k < 3 && t.steps < max_steps; ++k) {
      if (push(nums[k], dens[k], p)) return t;
      p = t.exponents.back();
    }
  }
  while (t.steps < max_steps) {
    if (push(2.0 * p * n, p * (n - 4.0 * s) + 2.0 * n, p)) return t;
    p = t.exponents.back();
  }
  return t;
}

ThresholdReport threshold_report(double n, double s, double p, double q) {
  ThresholdReport r;
  r.n = n;
  r.s = s;
  r.p = p;
  r.q = q;
  r.gelfand_bound = threshold_gelfand(s);
  auto attempt = [](auto&& f) -> decltype(std::optional{f()}) {
    try {
      return f();
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  r.lane_emden_bound = attempt([&] { return threshold_lane_emden(s, p); });
  r.mems_bound = attempt([&] { return threshold_mems(s, p); });
  r.gradient_bound = attempt([&] { return threshold_gradient(s, p, q); });
  r.gelfand_gamma = attempt([&] { return gelfand_gamma_criterion(n, s).verdict; });
  r.lane_emden_gamma = attempt([&] { return lane_emden_gamma_criterion(n, s, p).verdict; });
  r.singular_lambda = attempt([&] { return gelfand_singular_lambda(n, s); });
  r.singular_A = attempt([&] { return lane_emden_singular(n, s, p).A; });
  return r;
}

}  // namespace nlx
