#include "malab/source_catalog.hpp"

#include <cmath>
#include <numbers>

#include "malab/errors.hpp"

namespace malab::poisson {
namespace {

using std::numbers::pi;

// Unit-norm harmonics in Cartesian form, evaluated on the direction x/|x|.
double y1(const Point& x) {
  const double r = x.norm();
  if (x.size() == 2) return x(0) / r / std::sqrt(pi);
  return std::sqrt(3.0 / (4.0 * pi)) * x(2) / r;
}

double y2(const Point& x) {
  const double r2 = x.squaredNorm();
  if (x.size() == 2) return (x(0) * x(0) - x(1) * x(1)) / r2 / std::sqrt(pi);
  return std::sqrt(5.0 / (16.0 * pi)) * (3.0 * x(2) * x(2) / r2 - 1.0);
}

SourceSpec make(std::string name, int n, double k1, double k2, double c0, SourceFn g) {
  SourceSpec s;
  s.name = std::move(name);
  s.n = n;
  s.k1 = k1;
  s.k2 = k2;
  s.c0 = c0;
  s.g = std::move(g);
  return s;
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"radial_inv_r",   "y1_k15",    "y1_inv_r_3d", "radial_inv_r2", "radial_k05_log",
          "y2_k2_log",      "radial_inv_r4", "y1_inv_r", "mixed_k15"};
}

SourceSpec catalog_source(const std::string& name) {
  const double area3 = 4.0 * pi, area2 = 2.0 * pi;
  if (name == "radial_inv_r")
    return make(name, 3, 1.0, 0.0, std::sqrt(area3), [](const Point& x) { return 1.0 / x.norm(); });
  if (name == "y1_k15")
    return make(name, 3, 1.5, 0.0, 1.0,
                [](const Point& x) { return std::pow(x.norm(), -1.5) * y1(x); });
  if (name == "y1_inv_r_3d")
    return make(name, 3, 1.0, 0.0, 1.0, [](const Point& x) { return y1(x) / x.norm(); });
  if (name == "radial_inv_r2")
    return make(name, 2, 2.0, 0.0, std::sqrt(area2),
                [](const Point& x) { return 1.0 / x.squaredNorm(); });
  if (name == "radial_k05_log")
    return make(name, 3, 0.5, 1.0, std::sqrt(area3), [](const Point& x) {
      const double r = x.norm();
      return std::log(r) / std::sqrt(r);
    });
  if (name == "y2_k2_log")
    return make(name, 3, 2.0, 1.0, std::sqrt(area3 + 1.0), [](const Point& x) {
      const double r = x.norm();
      return std::log(r) / (r * r) * (1.0 + y2(x));
    });
  if (name == "radial_inv_r4")
    return make(name, 3, 4.0, 0.0, std::sqrt(area3),
                [](const Point& x) { return std::pow(x.squaredNorm(), -2.0); });
  if (name == "y1_inv_r")
    return make(name, 2, 1.0, 0.0, 1.0, [](const Point& x) { return y1(x) / x.norm(); });
  if (name == "mixed_k15")
    return make(name, 2, 1.5, 1.0, std::sqrt(area2 + 2.0), [](const Point& x) {
      const double r = x.norm();
      return std::pow(r, -1.5) * std::log(r) * (1.0 + y1(x) + y2(x));
    });
  throw InvalidArgument("unknown catalog source '" + name + "'");
}

}  // namespace malab::poisson
