#include "txg/fwht.hpp"

#include <atomic>
#include <cstddef>
#include <string>
#include <utility>

#include "txg/errors.hpp"

namespace txg {

namespace {
std::atomic<bool> g_corrupt_fwht{false};
}

void set_fwht_corruption(bool enabled) { g_corrupt_fwht.store(enabled); }

void fwht_inplace(std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw dimension_error("fwht length " + std::to_string(n) + " is not a power of two");
    for (std::size_t half = 1; half < n; half <<= 1) {
        for (std::size_t block = 0; block < n; block += half << 1) {
            for (std::size_t i = block; i < block + half; ++i) {
                double a = v[i];
                double b = v[i + half];
                v[i] = a + b;
                v[i + half] = a - b;
            }
        }
    }
    if (g_corrupt_fwht.load()) v[0] += 1e-3;
}

std::vector<double> fwht(std::vector<double> v) {
    fwht_inplace(v);
    return v;
}

}  // namespace txg
