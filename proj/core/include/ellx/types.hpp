#pragma once

#include <Eigen/Dense>

namespace ellx {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline Vec vec1(double x) {
  Vec v(1);
  v << x;
  return v;
}

inline Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

inline Vec vec3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

}  // namespace ellx
