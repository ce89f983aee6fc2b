#pragma once

// Non-uniqueness for the first-order equation -u_t + u_x^2 = 0 on the line:
// u1 = 0, u2 = |x| + t, u3 = (t - |x|)^+ all solve it a.e.

#include <vector>

namespace fplab {

double benton_u1(double x, double t);
double benton_u2(double x, double t);
double benton_u3(double x, double t);

struct BentonReport {
  double time = 0.5;
  /// max_x |u3(x,0) - u1(x,0)|, expected 0.
  double initial_distance = 0.0;
  /// max_x |u3(x,t) - u1(x,t)|.
  double sup_distance = 0.0;
  /// max |-u_t + u_x^2| at nodes two cells away from every kink.
  double residual_u1 = 0.0;
  double residual_u2 = 0.0;
  double residual_u3 = 0.0;
  /// Window spacings and the largest centred second difference of u3 at each.
  std::vector<double> spacings;
  std::vector<double> kink_laplacian;
  /// Least-squares slope of log(kink_laplacian) against log(h).
  double kink_slope = 0.0;
  /// max |second difference of u1|.
  double u1_laplacian = 0.0;
  bool passed = false;
};

/// Samples the three solutions on the window [-1, 1) at the given time.
BentonReport benton_demo(double time = 0.5, const std::vector<int>& points = {64, 128, 256, 512, 1024});

}  // namespace fplab
