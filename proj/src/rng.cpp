#include "ngrc/rng.hpp"

#include <cmath>

namespace ngrc {

double CounterRng::next_gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = next_unit();
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

double CounterRng::next_student_t(int nu, bool normalize_variance) {
  if (nu < 1) nu = 1;
  const double z = next_gaussian();
  double chi2 = 0.0;
  for (int i = 0; i < nu; ++i) {
    const double g = next_gaussian();
    chi2 += g * g;
  }
  double t = z / std::sqrt(chi2 / static_cast<double>(nu));
  if (normalize_variance && nu > 2) {
    t /= std::sqrt(static_cast<double>(nu) / (nu - 2.0));
  }
  return t;
}

}  // namespace ngrc
