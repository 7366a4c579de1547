#include "tamedsde/problems.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace tamedsde {

SingularProblem::SingularProblem(std::string name, int dimension,
                                 std::vector<double> initial_point, VectorFn drift,
                                 PredicateFn domain_member, ScalarFn rho, VectorFn grad_rho,
                                 std::optional<VectorFn> hess_rho,
                                 StructuralConstants constants, bool has_singularity)
    : name_(std::move(name)),
      dimension_(dimension),
      initial_point_(std::move(initial_point)),
      drift_(std::move(drift)),
      domain_member_(std::move(domain_member)),
      rho_(std::move(rho)),
      grad_rho_(std::move(grad_rho)),
      hess_rho_(std::move(hess_rho)),
      constants_(constants),
      has_singularity_(has_singularity) {
  if (dimension_ < 1) throw std::invalid_argument("problem dimension must be positive");
  if (initial_point_.size() != static_cast<std::size_t>(dimension_))
    throw std::invalid_argument("initial point dimension mismatch");
  if (!domain_member_(initial_point_))
    throw std::invalid_argument("initial point must lie in the domain D");
}

std::vector<double> SingularProblem::drift(std::span<const double> x) const {
  std::vector<double> out(static_cast<std::size_t>(dimension_));
  drift_(x, out);
  return out;
}

std::vector<double> SingularProblem::grad_rho(std::span<const double> x) const {
  std::vector<double> out(static_cast<std::size_t>(dimension_));
  grad_rho_(x, out);
  return out;
}

void SingularProblem::hess_rho(std::span<const double> x, std::span<double> out) const {
  if (!hess_rho_) throw std::logic_error("problem does not provide hess_rho");
  (*hess_rho_)(x, out);
}

double LennardJonesPairParams::kernel(double r) const {
  return p_exp * a1 * std::pow(r, -p_exp - 1.0) - q_exp * a2 * std::pow(r, -q_exp - 1.0);
}

double LennardJonesPairParams::kernel_derivative(double r) const {
  return -p_exp * (p_exp + 1.0) * a1 * std::pow(r, -p_exp - 2.0) +
         q_exp * (q_exp + 1.0) * a2 * std::pow(r, -q_exp - 2.0);
}

double LennardJonesPairParams::kernel_derivative_argmax() const {
  // K'' = 0 at r^(p-q) = p(p+1)(p+2) a1 / (q(q+1)(q+2) a2).
  const double num = p_exp * (p_exp + 1.0) * (p_exp + 2.0) * a1;
  const double den = q_exp * (q_exp + 1.0) * (q_exp + 2.0) * a2;
  return std::pow(num / den, 1.0 / (p_exp - q_exp));
}

namespace {

void validate_lj_params(const LennardJonesPairParams& params) {
  if (!(params.a1 > 0.0) || !(params.a2 > 0.0))
    throw std::invalid_argument("lj_pair: a1 and a2 must be positive");
  if (!(params.p_exp > 1.0)) throw std::invalid_argument("lj_pair: p must exceed 1");
  if (!(params.q_exp > 0.0) || !(params.q_exp < params.p_exp))
    throw std::invalid_argument("lj_pair: q must lie in (0, p)");
  if (!(params.lambda >= 0.0)) throw std::invalid_argument("lj_pair: lambda must be >= 0");
  // derived alpha = p+1, beta = q+1 must satisfy beta < alpha - 1, i.e. q < p - 1
  if (!(params.beta() < params.alpha() - 1.0))
    throw std::invalid_argument("lj_pair: requires beta = q+1 < alpha-1 = p");
}

}  // namespace

SingularProblem make_power_law(double alpha, double x0) {
  if (!(alpha > 1.0)) throw std::invalid_argument("power_law: alpha must exceed 1");
  if (!(x0 > 0.0)) throw std::invalid_argument("power_law: x0 must lie in (0, inf)");
  StructuralConstants constants;
  constants.c = alpha;        // valid for (4) and, with l = alpha+1, for (7)
  constants.alpha = alpha;
  constants.beta = 0.0;       // the simple-case value; unused by the stepper
  constants.l = alpha + 1.0;
  constants.h1 = 1.0;
  constants.h2 = 1.0e-9;
  constants.h3 = 1.0e-9;
  constants.h4 = 1.0e-9;
  return SingularProblem(
      "power_law", 1, {x0},
      [alpha](std::span<const double> x, std::span<double> out) {
        out[0] = std::pow(x[0], -alpha);
      },
      [](std::span<const double> x) { return x[0] > 0.0; },
      [](std::span<const double> x) { return x[0]; },
      [](std::span<const double>, std::span<double> out) { out[0] = 1.0; },
      SingularProblem::VectorFn(
          [](std::span<const double>, std::span<double> out) { out[0] = 0.0; }),
      constants, true);
}

SingularProblem make_lennard_jones_pair(const LennardJonesPairParams& params,
                                        std::span<const double> x0) {
  validate_lj_params(params);
  if (x0.size() != 2) throw std::invalid_argument("lj_pair: x0 must be 2-dimensional");
  if (!(x0[0] < x0[1])) throw std::invalid_argument("lj_pair: requires x0_1 < x0_2");

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  StructuralConstants constants;
  const double r_star = params.kernel_derivative_argmax();
  // <b(x)-b(y), x-y> = (dK)(dr) - lambda |x-y|^2 <= 2 sup K'+ |x-y|^2.
  constants.c = 2.0 * std::max(0.0, params.kernel_derivative(r_star));
  constants.alpha = params.alpha();
  constants.beta = params.beta();
  constants.l = params.p_exp + 2.0;
  // <grad rho, b> = sqrt(2) K(sqrt(2) rho) - lambda rho
  //              = p a1 2^{-p/2} rho^{-alpha} - q a2 2^{-q/2} rho^{-beta} - lambda rho.
  constants.h1 = params.p_exp * params.a1 * std::pow(2.0, -params.p_exp / 2.0);
  constants.h2 = params.q_exp * params.a2 * std::pow(2.0, -params.q_exp / 2.0);
  constants.h3 = 1.0e-9;
  constants.h4 = params.lambda + 1.0e-9;

  const LennardJonesPairParams p = params;
  return SingularProblem(
      "lj_pair", 2, {x0[0], x0[1]},
      [p](std::span<const double> x, std::span<double> out) {
        const double k = p.kernel(x[1] - x[0]);
        out[0] = -p.lambda * x[0] - k;
        out[1] = -p.lambda * x[1] + k;
      },
      [](std::span<const double> x) { return x[0] < x[1]; },
      [inv_sqrt2](std::span<const double> x) { return (x[1] - x[0]) * inv_sqrt2; },
      [inv_sqrt2](std::span<const double>, std::span<double> out) {
        out[0] = -inv_sqrt2;
        out[1] = inv_sqrt2;
      },
      SingularProblem::VectorFn([](std::span<const double>, std::span<double> out) {
        out[0] = out[1] = out[2] = out[3] = 0.0;
      }),
      constants, true);
}

SingularProblem make_smooth_sanity(SmoothKind kind, int dimension,
                                   std::span<const double> x0, double lambda) {
  if (dimension < 1) throw std::invalid_argument("smooth problem: dimension must be >= 1");
  if (x0.size() != static_cast<std::size_t>(dimension))
    throw std::invalid_argument("smooth problem: x0 dimension mismatch");
  if (kind == SmoothKind::ornstein_uhlenbeck && !(lambda > 0.0))
    throw std::invalid_argument("ou problem: lambda must be positive");

  StructuralConstants constants;
  constants.c = kind == SmoothKind::ornstein_uhlenbeck ? lambda : 0.0;
  constants.alpha = 2.0;
  constants.beta = 0.0;
  constants.l = 0.0;  // no inverse-polynomial blow-up
  SingularProblem::VectorFn drift;
  if (kind == SmoothKind::brownian) {
    drift = [](std::span<const double>, std::span<double> out) {
      for (auto& v : out) v = 0.0;
    };
  } else {
    drift = [lambda](std::span<const double> x, std::span<double> out) {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = -lambda * x[i];
    };
  }
  return SingularProblem(
      kind == SmoothKind::brownian ? "brownian" : "ou", dimension,
      std::vector<double>(x0.begin(), x0.end()), std::move(drift),
      [](std::span<const double>) { return true; },
      [](std::span<const double>) { return kSmoothRhoSurrogate; },
      [](std::span<const double>, std::span<double> out) {
        for (auto& v : out) v = 0.0;
      },
      std::nullopt, constants, false);
}

}  // namespace tamedsde
