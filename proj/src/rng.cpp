#include "txg/rng.hpp"

#include <cmath>
#include <numbers>

namespace txg {

// Box-Muller on two uniforms; the second variate is cached.
double Rng::next_gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = next_unit_open();
    double u2 = next_unit();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

}  // namespace txg
