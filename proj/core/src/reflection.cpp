#include "ellx/reflection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ellx/error.hpp"

namespace ellx {

double reflection_function(double a, double b, double s) {
  if (!(a > 0.0)) throw Error("reflection_function: a must be positive");
  return -(s - (b / a) * s * s);
}

namespace {

void verify_range(double a, double b, double delta, double R) {
  for (int k = 1; k <= 256; ++k) {
    const double s = -delta * k / 256.0;
    const double v = reflection_function(a, b, s);
    if (v < 0.0 || v >= R) {
      throw Error("reflection_delta: sampled F(" + std::to_string(s) + ") = " +
                  std::to_string(v) + " leaves [0, R)");
    }
  }
}

}  // namespace

double reflection_delta(double a, double b, double R, double safety) {
  if (!(a > 0.0)) throw Error("reflection_delta: a must be positive");
  if (!(R > 0.0)) throw Error("reflection_delta: R must be positive");
  if (!(safety > 0.0 && safety < 1.0)) throw Error("reflection_delta: safety must lie in (0,1)");
  double delta = 0.0;
  if (b == 0.0) {
    delta = safety * R;
  } else if (b < 0.0) {
    delta = safety * std::min(a / std::abs(b), R);
  } else {
    // negative root of (b/a) s^2 - s - R = 0; F is increasing toward R
    // on the negative axis, so the root itself is the depth bound
    const double q = b / a;
    const double s_R = (1.0 - std::sqrt(1.0 + 4.0 * q * R)) / (2.0 * q);
    delta = safety * std::abs(s_R);
  }
  verify_range(a, b, delta, R);
  return delta;
}

double common_delta(double lambda, double Lambda, double R, double safety) {
  if (!(lambda > 0.0) || !(Lambda >= lambda) || !std::isfinite(Lambda)) {
    throw Error("common_delta: need 0 < lambda <= Lambda < inf");
  }
  if (!(R > 0.0)) throw Error("common_delta: R must be positive");
  const double d_minus = reflection_delta(lambda, -Lambda, R, safety);
  const double d_plus = reflection_delta(lambda, Lambda, R, safety);
  const double delta = std::min(d_minus, d_plus);
  // re-verify over a parameter grid
  for (int ia = 0; ia < 10; ++ia) {
    for (int ib = 0; ib < 10; ++ib) {
      const double a = lambda + (Lambda - lambda) * ia / 9.0;
      const double b = -Lambda + 2.0 * Lambda * ib / 9.0;
      for (int k = 1; k <= 64; ++k) {
        const double s = -delta * k / 64.0;
        const double v = reflection_function(std::max(a, lambda), b, s);
        if (v < 0.0 || v >= R) {
          throw Error("common_delta: grid re-verification failed at a = " +
                      std::to_string(a) + ", b = " + std::to_string(b));
        }
      }
    }
  }
  return delta;
}

}  // namespace ellx
