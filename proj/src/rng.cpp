#include "cct/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cct {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal(double mean, double stddev) {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double z = std::sqrt(-2.0 * std::log(u1)) *
                   std::cos(2.0 * std::numbers::pi * u2);
  return mean + stddev * z;
}

int Rng::poisson(double lambda) {
  if (!(lambda >= 0.0) || lambda > 500.0) {
    throw std::invalid_argument("poisson rate must lie in [0, 500]");
  }
  if (lambda == 0.0) return 0;
  const double limit = std::exp(-lambda);
  int k = 0;
  double p = uniform();
  while (p > limit) {
    ++k;
    p *= uniform();
  }
  return k;
}

}  // namespace cct
