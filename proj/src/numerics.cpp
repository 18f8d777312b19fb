#include "rmt/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rmt/errors.hpp"

namespace rmt {

namespace {

// Gauss-Kronrod 15-point nodes/weights on [-1,1] plus the embedded G7 rule.
const double kt_nodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
const double kt_wk[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
const double kt_wg[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
    0.381830050505119, 0.279705391489277, 0.129484966168870};

struct GkResult {
  double integral;
  double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double ik = 0.0, ig = 0.0;
  for (int i = 0; i < 15; ++i) {
    double v = f(c + h * kt_nodes[i]);
    ik += kt_wk[i] * v;
    if (i % 2 == 1) ig += kt_wg[i / 2] * v;
  }
  ik *= h;
  ig *= h;
  double err = std::pow(200.0 * std::abs(ik - ig), 1.5);
  return {ik, std::min(err, std::abs(ik - ig) * 200.0)};
}

double integrate_rec(const std::function<double(double)>& f, double a, double b,
                     double tol, int depth, int max_depth) {
  GkResult r = gk15(f, a, b);
  if (depth >= max_depth || r.error <= tol) return r.integral;
  double c = 0.5 * (a + b);
  return integrate_rec(f, a, c, tol / 1.9, depth + 1, max_depth) +
         integrate_rec(f, c, b, tol / 1.9, depth + 1, max_depth);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth) {
  if (a == b) return 0.0;
  GkResult whole = gk15(f, a, b);
  double target = std::max(tol, std::abs(whole.integral) * tol);
  return integrate_rec(f, a, b, target, 0, max_depth);
}

namespace {

// Lower series: P(a,x) = x^a e^-x / Gamma(a+1) * sum x^n / ((a+1)...(a+n)).
// Returns log P.
double log_gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a, del = sum;
  for (int n = 0; n < 2000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-17) break;
  }
  return -x + a * std::log(x) - std::lgamma(a) + std::log(sum * a) - std::log(a);
}

// Upper continued fraction (modified Lentz). Returns log Q.
double log_gamma_q_cf(double a, double x) {
  const double fpmin = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 2000; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return -x + a * std::log(x) - std::lgamma(a) + std::log(h);
}

}  // namespace

double log_gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw invalid_argument("incomplete gamma: need a>0, x>=0");
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  if (x < a + 1.0) return std::min(0.0, log_gamma_p_series(a, x));
  double lq = log_gamma_q_cf(a, x);
  if (lq > -1e-17) return std::log(-lq > 0 ? -lq : 1e-300);  // Q ~= 1 - eps
  return std::log1p(-std::exp(lq));
}

double log_gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw invalid_argument("incomplete gamma: need a>0, x>=0");
  if (x == 0.0) return 0.0;
  if (x >= a + 1.0) return std::min(0.0, log_gamma_q_cf(a, x));
  double lp = log_gamma_p_series(a, x);
  if (lp > -1e-17) return std::log(-lp > 0 ? -lp : 1e-300);
  return std::log1p(-std::exp(lp));
}

double gamma_p(double a, double x) { return std::exp(log_gamma_p(a, x)); }
double gamma_q(double a, double x) { return std::exp(log_gamma_q(a, x)); }

double poisson_cdf(long k, double lambda) {
  if (k < 0) return 0.0;
  return gamma_q(static_cast<double>(k + 1), lambda);
}

std::complex<double> sqrt_cut_positive_real(std::complex<double> w) {
  std::complex<double> s = std::sqrt(w);  // principal branch, Re >= 0
  if (s.imag() < 0.0 || (s.imag() == 0.0 && s.real() < 0.0)) s = -s;
  return s;  // argument in [0, pi)
}

double golden_maximize(const std::function<double(double)>& f, double lo, double hi,
                       int iters) {
  const double gr = 0.6180339887498949;
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = f(x1);
    }
  }
  return std::max(f1, f2);
}

double ks_statistic(std::span<const double> sorted_samples,
                    const std::function<double(double)>& cdf) {
  const std::size_t n = sorted_samples.size();
  if (n == 0) throw invalid_argument("ks_statistic: empty sample");
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double F = cdf(sorted_samples[i]);
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - F));
    d = std::max(d, std::abs(static_cast<double>(i) / n - F));
  }
  return d;
}

}  // namespace rmt
