#pragma once

namespace ellx {

/// F_{a,b}(s) = -(s - (b/a) s^2). Satisfies F(0) = 0, F'(0) = -1,
/// F''(0) = 2 b/a; smooth in (a, b, s) for a > 0.
double reflection_function(double a, double b, double s);

/// Admissible reflection depth: the largest safe delta (times `safety`)
/// such that F_{a,b} maps (-delta, 0] into [0, R).
///   b = 0: R;  b < 0: min(a/|b|, R);  b > 0: |s_R| with s_R the negative
/// root of (b/a) s^2 - s - R = 0. Re-verified by dense sampling.
double reflection_delta(double a, double b, double R, double safety = 0.9);

/// Common depth for all parameters (a, b) in [lambda, inf) x [-Lambda,
/// Lambda]: the minimum over the worst corners a = lambda, b = +-Lambda,
/// re-verified on an (a, b) grid.
double common_delta(double lambda, double Lambda, double R, double safety = 0.9);

}  // namespace ellx
