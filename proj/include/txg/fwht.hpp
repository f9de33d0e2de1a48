#pragma once

#include <vector>

namespace txg {

// Unnormalized Walsh-Hadamard transform, in place:
//   out[u] = sum_z (-1)^{parity(u AND z)} v[z]
// for indices read as bit-vector words. Length must be a power of two.
// Applying it twice scales by the length. Normalization is the caller's
// concern.
void fwht_inplace(std::vector<double>& v);

std::vector<double> fwht(std::vector<double> v);

// Test hook for mutation checks: when enabled, fwht perturbs element 0 so
// downstream invariant suites must notice. Never set outside tests.
void set_fwht_corruption(bool enabled);

}  // namespace txg
