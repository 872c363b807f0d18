#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace adnewton {

/// Dense coefficient vector (interior degrees of freedom).
class Vector {
public:
  Vector() = default;
  explicit Vector(std::size_t n, double value = 0.0) : entries_(n, value) {}
  Vector(std::initializer_list<double> values) : entries_(values) {}
  explicit Vector(std::vector<double> values) : entries_(std::move(values)) {}

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  double& operator[](std::size_t i) { return entries_[i]; }
  double operator[](std::size_t i) const { return entries_[i]; }

  double* data() noexcept { return entries_.data(); }
  const double* data() const noexcept { return entries_.data(); }

  auto begin() noexcept { return entries_.begin(); }
  auto end() noexcept { return entries_.end(); }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  std::span<double> span() noexcept { return entries_; }
  std::span<const double> span() const noexcept { return entries_; }
  const std::vector<double>& entries() const noexcept { return entries_; }

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double a);

  bool operator==(const Vector&) const = default;

private:
  std::vector<double> entries_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double a, Vector x);

double dot(const Vector& x, const Vector& y);
double norm2(const Vector& x);
double norm_inf(const Vector& x);
/// y += a*x
void axpy(double a, const Vector& x, Vector& y);
/// True when every entry is finite.
bool all_finite(const Vector& x);

}  // namespace adnewton
