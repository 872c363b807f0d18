#pragma once

#include "adnewton/mesh.hpp"

#include <functional>
#include <string>
#include <variant>

namespace adnewton {

/// mu(t) = 1/(t+1) + 1/2
struct RationalLaw {};

/// Regularized Bingham viscosity: mu(t) = gamma / sqrt(t + k^-2) + 2 zeta
struct BercovierEngelmanLaw {
  double gamma;
  double zeta;
  double k;
};

/// mu(t) = c; the operator is linear.
struct ConstantLaw {
  double c;
};

/// Scalar diffusion coefficient mu of the quasilinear operator
/// -div(mu(|grad u|^2) grad u), with its derivative and the antiderivative
/// psi(s) = 1/2 int_0^s mu(t) dt in closed form.
///
/// m_mu and M_mu bound the slope of t -> mu(t^2) t from below and above.
class DiffusionModel {
public:
  using Law = std::variant<RationalLaw, BercovierEngelmanLaw, ConstantLaw>;

  DiffusionModel(Law law, double m_mu, double M_mu, std::string name);

  double mu(double t) const;
  double mu_prime(double t) const;
  double psi(double s) const;
  /// psi(s + ds) - psi(s) without cancellation.
  double psi_difference(double s, double ds) const;

  double m_mu() const noexcept { return m_mu_; }
  double M_mu() const noexcept { return M_mu_; }
  const std::string& name() const noexcept { return name_; }
  const Law& law() const noexcept { return law_; }

private:
  Law law_;
  double m_mu_;
  double M_mu_;
  std::string name_;
};

/// Operator constants implied by the (M2) band [m_mu, M_mu].
struct StructuralConstants {
  double alpha_Fp;       // coercivity of F'(u)
  double beta_Fp;        // boundedness of F'(u)
  double L;              // Lipschitz constant of F
  double nu;             // strong monotonicity of F
  double damping_floor;  // alpha_Fp / L

  static StructuralConstants from_bounds(double m_mu, double M_mu);
};

struct ModelSetup {
  DiffusionModel model;
  StructuralConstants constants;
};

ModelSetup model_experiment1();
ModelSetup model_experiment2(double gamma = 0.3, double zeta = 1.0, double k = 100.0);
ModelSetup constant_model(double c);

/// Manufactured exact solution; its gradient defines the source weakly.
struct ManufacturedSolution {
  std::function<double(double, double)> value;
  std::function<Point(double, double)> grad;
};

/// u(x,y) = sin(pi x) sin(pi y)
ManufacturedSolution exact_solution();

}  // namespace adnewton
