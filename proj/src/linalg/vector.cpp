#include "adnewton/linalg/vector.hpp"

#include "adnewton/error.hpp"
#include "adnewton/linalg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace adnewton {
namespace {

void require_same_size(const Vector& a, const Vector& b, const char* op) {
  if (a.size() != b.size())
    throw StructuralError(std::string(op) + ": length mismatch (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
}

}  // namespace

Vector& Vector::operator+=(const Vector& other) {
  require_same_size(*this, other, "operator+=");
  kernels::active().axpy(1.0, other.data(), data(), size());
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_size(*this, other, "operator-=");
  kernels::active().axpy(-1.0, other.data(), data(), size());
  return *this;
}

Vector& Vector::operator*=(double a) {
  for (double& v : entries_) v *= a;
  return *this;
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(double a, Vector x) { return x *= a; }

double dot(const Vector& x, const Vector& y) {
  require_same_size(x, y, "dot");
  return kernels::active().dot(x.data(), y.data(), x.size());
}

double norm2(const Vector& x) { return std::sqrt(dot(x, x)); }

double norm_inf(const Vector& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

void axpy(double a, const Vector& x, Vector& y) {
  require_same_size(x, y, "axpy");
  kernels::active().axpy(a, x.data(), y.data(), x.size());
}

bool all_finite(const Vector& x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace adnewton
