#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tamedsde {

// Declared structural constants of a singular drift problem. They never enter
// the stepper arithmetic; they parameterize the assumption checker and the
// admissible taming exponent w <= 1/(3l).
struct StructuralConstants {
  double c = 1.0;
  double alpha = 2.0;
  double beta = 0.0;
  double l = 1.0;
  double h1 = 1.0;
  double h2 = 1.0e-9;
  double h3 = 1.0e-9;
  double h4 = 1.0e-9;
};

// rho() reported by problems without a singularity, so that threshold
// comparisons stay well-defined and the taming indicator never fires.
inline constexpr double kSmoothRhoSurrogate = 1.0e308;

// An SDE dX = b(X) dt + dW on an open set D whose drift may blow up
// non-integrably on the boundary. rho is the distance to the singularity set;
// drift and rho may be evaluated only where domain_member(x) is true.
// Immutable after construction; all evaluators are pure and thread-safe.
class SingularProblem {
 public:
  using VectorFn = std::function<void(std::span<const double>, std::span<double>)>;
  using ScalarFn = std::function<double(std::span<const double>)>;
  using PredicateFn = std::function<bool(std::span<const double>)>;

  SingularProblem(std::string name, int dimension, std::vector<double> initial_point,
                  VectorFn drift, PredicateFn domain_member, ScalarFn rho,
                  VectorFn grad_rho, std::optional<VectorFn> hess_rho,
                  StructuralConstants constants, bool has_singularity);

  const std::string& name() const { return name_; }
  int dimension() const { return dimension_; }
  std::span<const double> initial_point() const { return initial_point_; }
  const StructuralConstants& constants() const { return constants_; }
  bool has_singularity() const { return has_singularity_; }
  bool has_hess_rho() const { return hess_rho_.has_value(); }

  void drift(std::span<const double> x, std::span<double> out) const { drift_(x, out); }
  std::vector<double> drift(std::span<const double> x) const;
  bool domain_member(std::span<const double> x) const { return domain_member_(x); }
  double rho(std::span<const double> x) const { return rho_(x); }
  void grad_rho(std::span<const double> x, std::span<double> out) const { grad_rho_(x, out); }
  std::vector<double> grad_rho(std::span<const double> x) const;
  // Row-major d*d matrix. Throws if the problem does not provide a Hessian.
  void hess_rho(std::span<const double> x, std::span<double> out) const;

 private:
  std::string name_;
  int dimension_;
  std::vector<double> initial_point_;
  VectorFn drift_;
  PredicateFn domain_member_;
  ScalarFn rho_;
  VectorFn grad_rho_;
  std::optional<VectorFn> hess_rho_;
  StructuralConstants constants_;
  bool has_singularity_;
};

// Parameters of the two-particle interaction kernel
// K(r) = p a1 r^{-p-1} - q a2 r^{-q-1} with confinement Q(x) = -lambda x.
struct LennardJonesPairParams {
  double a1 = 1.0;
  double a2 = 1.0;
  double p_exp = 12.0;
  double q_exp = 6.0;
  double lambda = 1.0;

  double kernel(double r) const;            // K(r), r > 0
  double kernel_derivative(double r) const;  // K'(r)
  // Location and value of the (finite) maximum of K' on (0, inf).
  double kernel_derivative_argmax() const;
  double alpha() const { return p_exp + 1.0; }
  double beta() const { return q_exp + 1.0; }
};

// 1-d drift b(x) = x^{-alpha} on D = (0, inf), rho(x) = x. Declared l = alpha + 1.
SingularProblem make_power_law(double alpha, double x0 = 1.0);

// Two scalar particles with kernel K and confinement Q; D = {x1 < x2},
// rho(x) = (x2 - x1)/sqrt(2). Requires x0_1 < x0_2 and beta < alpha - 1.
SingularProblem make_lennard_jones_pair(const LennardJonesPairParams& params,
                                        std::span<const double> x0);

enum class SmoothKind { brownian, ornstein_uhlenbeck };

// Singularity-free sanity problems: zero drift, or b(x) = -lambda x.
SingularProblem make_smooth_sanity(SmoothKind kind, int dimension,
                                   std::span<const double> x0, double lambda = 1.0);

}  // namespace tamedsde
