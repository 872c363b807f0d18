#include "adnewton/models.hpp"

#include "adnewton/error.hpp"

#include <cmath>
#include <numbers>

namespace adnewton {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

DiffusionModel::DiffusionModel(Law law, double m_mu, double M_mu, std::string name)
    : law_(law), m_mu_(m_mu), M_mu_(M_mu), name_(std::move(name)) {
  if (!(m_mu_ > 0.0) || !(M_mu_ >= m_mu_))
    throw StructuralError("DiffusionModel: need 0 < m_mu <= M_mu");
  if (const auto* be = std::get_if<BercovierEngelmanLaw>(&law_)) {
    if (!(be->gamma > 0.0 && be->zeta > 0.0 && be->k > 0.0))
      throw StructuralError("DiffusionModel: gamma, zeta, k must be positive");
  }
  if (const auto* c = std::get_if<ConstantLaw>(&law_)) {
    if (!(c->c > 0.0)) throw StructuralError("DiffusionModel: constant must be positive");
  }
}

double DiffusionModel::mu(double t) const {
  return std::visit(Overloaded{
                        [t](RationalLaw) { return 1.0 / (t + 1.0) + 0.5; },
                        [t](const BercovierEngelmanLaw& m) {
                          return m.gamma / std::sqrt(t + 1.0 / (m.k * m.k)) + 2.0 * m.zeta;
                        },
                        [](const ConstantLaw& m) { return m.c; },
                    },
                    law_);
}

double DiffusionModel::mu_prime(double t) const {
  return std::visit(Overloaded{
                        [t](RationalLaw) { return -1.0 / ((t + 1.0) * (t + 1.0)); },
                        [t](const BercovierEngelmanLaw& m) {
                          const double r = t + 1.0 / (m.k * m.k);
                          return -0.5 * m.gamma / (r * std::sqrt(r));
                        },
                        [](const ConstantLaw&) { return 0.0; },
                    },
                    law_);
}

double DiffusionModel::psi(double s) const { return psi_difference(0.0, s); }

double DiffusionModel::psi_difference(double s, double ds) const {
  return std::visit(Overloaded{
                        [=](RationalLaw) { return 0.5 * std::log1p(ds / (1.0 + s)) + 0.25 * ds; },
                        [=](const BercovierEngelmanLaw& m) {
                          const double e = 1.0 / (m.k * m.k);
                          // gamma (sqrt(s+ds+e) - sqrt(s+e)), rationalized
                          const double root_sum = std::sqrt(s + ds + e) + std::sqrt(s + e);
                          return m.gamma * ds / root_sum + m.zeta * ds;
                        },
                        [=](const ConstantLaw& m) { return 0.5 * m.c * ds; },
                    },
                    law_);
}

StructuralConstants StructuralConstants::from_bounds(double m_mu, double M_mu) {
  StructuralConstants c{};
  c.alpha_Fp = m_mu;
  c.beta_Fp = 2.0 * M_mu - m_mu;
  c.L = 3.0 * M_mu;
  c.nu = m_mu;
  c.damping_floor = c.alpha_Fp / c.L;
  return c;
}

ModelSetup model_experiment1() {
  DiffusionModel m(RationalLaw{}, 3.0 / 8.0, 3.0 / 2.0, "rational");
  return {m, StructuralConstants::from_bounds(m.m_mu(), m.M_mu())};
}

ModelSetup model_experiment2(double gamma, double zeta, double k) {
  DiffusionModel m(BercovierEngelmanLaw{gamma, zeta, k}, 2.0 * zeta, 2.0 * zeta + k * gamma,
                   "bercovier-engelman");
  return {m, StructuralConstants::from_bounds(m.m_mu(), m.M_mu())};
}

ModelSetup constant_model(double c) {
  DiffusionModel m(ConstantLaw{c}, c, c, "constant");
  return {m, StructuralConstants::from_bounds(c, c)};
}

ManufacturedSolution exact_solution() {
  using std::numbers::pi;
  return {
      [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); },
      [](double x, double y) {
        return Point{pi * std::cos(pi * x) * std::sin(pi * y),
                     pi * std::sin(pi * x) * std::cos(pi * y)};
      },
  };
}

}  // namespace adnewton
