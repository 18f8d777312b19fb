#pragma once

#include <vector>

namespace rmt {

// Monic (probabilists') Hermite polynomials: H_{k+1} = x H_k - k H_{k-1},
// orthogonal for the weight exp(-x^2/2) with norm sqrt(2*pi) k!.
// Raw values overflow quickly; capped at k = 100.
double hermite_raw(int k, double x);

// Orthonormal Hermite functions under Lebesgue measure,
// h_k(x) = exp(-x^2/4) H_k(x) / (2*pi)^(1/4) / sqrt(k!), evaluated by the
// stabilized recurrence directly on h_k. Capped at k = 500.
double hermite_normalized(int k, double x);

// h_0..h_kmax at one point (shared by the kernel evaluations).
std::vector<double> hermite_normalized_all(int kmax, double x);

}  // namespace rmt
