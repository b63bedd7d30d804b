#include "h2mixed/manufactured.hpp"

#include "h2mixed/exceptions.hpp"

#include <cmath>
#include <numbers>

namespace h2mixed {

namespace {

using std::numbers::pi;

// Separable u = X(x) Y(y); d[i] is the i-th derivative.
struct Factor {
  std::function<void(double, double*)> eval; // fills d[0..4]
};

ManufacturedCase separable(const std::string& name, double c0, double c1, Factor X, Factor Y) {
  ManufacturedCase mc;
  mc.name = name;
  mc.c0 = c0;
  mc.c1 = c1;
  auto both = [X, Y](Point p, double* a, double* b) {
    X.eval(p.x, a);
    Y.eval(p.y, b);
  };
  mc.u = [both](Point p) {
    double a[5], b[5];
    both(p, a, b);
    return a[0] * b[0];
  };
  mc.grad_u = [both](Point p) {
    double a[5], b[5];
    both(p, a, b);
    return Point{a[1] * b[0], a[0] * b[1]};
  };
  mc.lap_u = [both](Point p) {
    double a[5], b[5];
    both(p, a, b);
    return a[2] * b[0] + a[0] * b[2];
  };
  mc.grad_lap_u = [both](Point p) {
    double a[5], b[5];
    both(p, a, b);
    return Point{a[3] * b[0] + a[1] * b[2], a[2] * b[1] + a[0] * b[3]};
  };
  mc.bilap_u = [both](Point p) {
    double a[5], b[5];
    both(p, a, b);
    return a[4] * b[0] + 2.0 * a[2] * b[2] + a[0] * b[4];
  };
  return mc;
}

// sin(w x) and cos(w x) with derivatives
Factor sine(double w) {
  return {[w](double x, double* d) {
    const double s = std::sin(w * x), c = std::cos(w * x);
    d[0] = s;
    d[1] = w * c;
    d[2] = -w * w * s;
    d[3] = -w * w * w * c;
    d[4] = w * w * w * w * s;
  }};
}
Factor cosine(double w) {
  return {[w](double x, double* d) {
    const double s = std::sin(w * x), c = std::cos(w * x);
    d[0] = c;
    d[1] = -w * s;
    d[2] = -w * w * c;
    d[3] = w * w * w * s;
    d[4] = w * w * w * w * c;
  }};
}
// f(x) + x^p
Factor plus_power(Factor f, double p) {
  return {[f, p](double x, double* d) {
    f.eval(x, d);
    double c = 1.0;
    for (int i = 0; i <= 4; ++i) {
      d[i] += c * std::pow(x, p - i);
      c *= (p - i);
    }
  }};
}

} // namespace

ManufacturedCase make_case(const std::string& name, double c0, double c1) {
  if (name == "u1ex") return separable(name, c0, c1, sine(2 * pi), cosine(3 * pi));
  if (name == "u2ex")
    return separable(name, c0, c1, plus_power(sine(2 * pi), 4.5), plus_power(cosine(3 * pi), 4.25));
  throw Error("unknown manufactured case '" + name + "' (expected u1ex or u2ex)");
}

} // namespace h2mixed
