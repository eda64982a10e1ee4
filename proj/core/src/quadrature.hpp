#pragma once

#include <array>
#include <cmath>

namespace stablecx::detail {

/// Adaptive Gauss-Kronrod (7/15 point) integration by recursive bisection.
///
/// A panel is accepted once |K15 - G7| is below `tolerance` times the
/// magnitude of the first whole-interval estimate, prorated by panel width.
/// Panels narrower than the recursion limit are accepted as they are.
class GaussKronrod15 {
 public:
  explicit GaussKronrod15(double tolerance, int max_depth = 40) : tolerance_(tolerance), max_depth_(max_depth) {}

  template <typename F>
  double integrate(F&& f, double a, double b) const {
    if (!(b > a)) return 0.0;
    double error = 0.0;
    const double whole = panel(f, a, b, error);
    const double budget = tolerance_ * std::max(std::abs(whole), 1e-300) / (b - a);
    if (error <= budget * (b - a)) return whole;
    return refine(f, a, b, budget, max_depth_);
  }

 private:
  static constexpr std::array<double, 8> kNodes = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.0};
  static constexpr std::array<double, 8> kKronrod = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  // Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
  static constexpr std::array<double, 4> kGauss = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  template <typename F>
  static double panel(F& f, double a, double b, double& error) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = kKronrod[7] * fc;
    double gauss = kGauss[3] * fc;
    for (int j = 0; j < 7; ++j) {
      const double dx = half * kNodes[j];
      const double pair = f(center - dx) + f(center + dx);
      kronrod += kKronrod[j] * pair;
      if (j % 2 == 1) gauss += kGauss[j / 2] * pair;
    }
    error = std::abs((kronrod - gauss) * half);
    return kronrod * half;
  }

  template <typename F>
  double refine(F& f, double a, double b, double budget, int depth) const {
    const double mid = 0.5 * (a + b);
    double e_left = 0.0;
    double e_right = 0.0;
    const double left = panel(f, a, mid, e_left);
    const double right = panel(f, mid, b, e_right);
    const bool floor = depth <= 0 || !(mid > a && mid < b);
    const double total = (e_left <= budget * (mid - a) || floor) ? left : refine(f, a, mid, budget, depth - 1);
    return total + ((e_right <= budget * (b - mid) || floor) ? right : refine(f, mid, b, budget, depth - 1));
  }

  double tolerance_;
  int max_depth_;
};

}  // namespace stablecx::detail
