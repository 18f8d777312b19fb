#include "rmt/hermite.hpp"

#include <cmath>

#include "rmt/errors.hpp"

namespace rmt {

double hermite_raw(int k, double x) {
  if (k < 0) throw invalid_argument("hermite_raw: k must be >= 0");
  if (k > 100) throw invalid_argument("hermite_raw: k above 100 overflows, use normalized mode");
  double hm = 0.0, h = 1.0;  // H_{-1}, H_0
  for (int j = 0; j < k; ++j) {
    double next = x * h - j * hm;
    hm = h;
    h = next;
  }
  return h;
}

std::vector<double> hermite_normalized_all(int kmax, double x) {
  if (kmax < 0) throw invalid_argument("hermite_normalized: k must be >= 0");
  if (kmax > 500) throw invalid_argument("hermite_normalized: k above 500 unsupported");
  std::vector<double> h(kmax + 1);
  // h_0 = exp(-x^2/4)/(2 pi)^(1/4); recurrence h_{k+1} = (x h_k - sqrt(k) h_{k-1})/sqrt(k+1)
  h[0] = std::exp(-0.25 * x * x) / std::pow(2.0 * M_PI, 0.25);
  if (kmax == 0) return h;
  h[1] = x * h[0];
  for (int k = 1; k < kmax; ++k)
    h[k + 1] = (x * h[k] - std::sqrt(static_cast<double>(k)) * h[k - 1]) /
               std::sqrt(static_cast<double>(k + 1));
  return h;
}

double hermite_normalized(int k, double x) { return hermite_normalized_all(k, x)[k]; }

}  // namespace rmt
