#ifndef SIGTESTSIM_OPTIMIZE_HPP
#define SIGTESTSIM_OPTIMIZE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace sigtestsim::detail {

// Nelder-Mead maximization in 2 dimensions.
inline std::array<double, 2> nelder_mead_max_2d(
    const std::function<double(double, double)>& f, std::array<double, 2> x0,
    double step = 0.5, int max_iter = 600) {
  using Point = std::array<double, 2>;
  struct Vertex {
    Point x;
    double fx;
  };
  auto eval = [&](const Point& p) { return f(p[0], p[1]); };
  std::array<Vertex, 3> s;
  s[0] = {x0, eval(x0)};
  s[1] = {{x0[0] + step, x0[1]}, 0.0};
  s[1].fx = eval(s[1].x);
  s[2] = {{x0[0], x0[1] + step}, 0.0};
  s[2].fx = eval(s[2].x);

  for (int it = 0; it < max_iter; ++it) {
    std::sort(s.begin(), s.end(),
              [](const Vertex& a, const Vertex& b) { return a.fx > b.fx; });
    if (std::fabs(s[0].fx - s[2].fx) < 1e-12 * (1.0 + std::fabs(s[0].fx))) {
      break;
    }
    const Point centroid = {0.5 * (s[0].x[0] + s[1].x[0]),
                            0.5 * (s[0].x[1] + s[1].x[1])};
    auto along = [&](double t) -> Point {
      return {centroid[0] + t * (centroid[0] - s[2].x[0]),
              centroid[1] + t * (centroid[1] - s[2].x[1])};
    };
    const Point xr = along(1.0);
    const double fr = eval(xr);
    if (fr > s[0].fx) {
      const Point xe = along(2.0);
      const double fe = eval(xe);
      s[2] = fe > fr ? Vertex{xe, fe} : Vertex{xr, fr};
    } else if (fr > s[1].fx) {
      s[2] = {xr, fr};
    } else {
      const Point xc = along(-0.5);
      const double fc = eval(xc);
      if (fc > s[2].fx) {
        s[2] = {xc, fc};
      } else {
        for (int i = 1; i < 3; ++i) {
          s[i].x = {0.5 * (s[i].x[0] + s[0].x[0]),
                    0.5 * (s[i].x[1] + s[0].x[1])};
          s[i].fx = eval(s[i].x);
        }
      }
    }
  }
  std::sort(s.begin(), s.end(),
            [](const Vertex& a, const Vertex& b) { return a.fx > b.fx; });
  return s[0].x;
}

// Golden-section maximization of a unimodal function on [lo, hi].
inline double golden_section_max(const std::function<double(double)>& f,
                                 double lo, double hi, double tol = 1e-9) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol * (1.0 + std::fabs(a) + std::fabs(b))) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 >= f2 ? x1 : x2;
}

}  // namespace sigtestsim::detail

#endif  // SIGTESTSIM_OPTIMIZE_HPP
