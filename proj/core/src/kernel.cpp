#include "nlx/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nlx/error.hpp"
#include "nlx/special_fn.hpp"

namespace nlx {
namespace {

void check_order(double s) {
  if (!(std::isfinite(s) && s > 0.0 && s < 1.0))
    throw Error(ErrorCode::DomainError, "kernel order must satisfy 0 < s < 1, got " + std::to_string(s));
}

}  // namespace

double frac_lap_constant(double n, double s) {
  check_order(s);
  if (!(n >= 1.0)) throw Error(ErrorCode::DomainError, "c_{n,s} needs n >= 1");
  return std::exp(s * std::log(4.0) + log_gamma(n / 2.0 + s) - 0.5 * n * std::log(std::numbers::pi) -
                  log_gamma(-s));
}

std::string_view to_string(KernelFamily f) noexcept {
  return f == KernelFamily::FractionalLaplacian ? "fractional_laplacian" : "weighted_even";
}

SpectralKernel::SpectralKernel(KernelFamily family, double s, double weight, double normalization)
    : family_(family), s_(s), weight_(weight), normalization_(normalization) {}

SpectralKernel SpectralKernel::fractional_laplacian(double s) {
  check_order(s);
  return SpectralKernel(KernelFamily::FractionalLaplacian, s, 1.0, frac_lap_constant(1.0, s));
}

SpectralKernel SpectralKernel::weighted_even(double s, double weight_plus, double weight_minus,
                                             std::optional<double> normalization) {
  check_order(s);
  if (!(weight_plus >= 0.0 && std::isfinite(weight_plus)))
    throw Error(ErrorCode::InvalidArgument, "spectral density must be finite and nonnegative");
  if (weight_plus != weight_minus)
    throw Error(ErrorCode::InvalidArgument, "spectral density must be even: a(+1) = a(-1)");
  const double c = normalization.value_or(frac_lap_constant(1.0, s));
  if (!(c > 0.0 && std::isfinite(c)))
    throw Error(ErrorCode::InvalidArgument, "kernel normalization must be positive");
  return SpectralKernel(KernelFamily::WeightedEven, s, weight_plus, c);
}

double SpectralKernel::density(double theta) const {
  if (theta != 1.0 && theta != -1.0)
    throw Error(ErrorCode::InvalidArgument, "the 1-D sphere is {-1, +1}");
  return weight_;
}

double SpectralKernel::jump(double y) const {
  const double r = std::abs(y);
  if (r == 0.0) return std::numeric_limits<double>::infinity();
  return one_sided_weight() * std::pow(r, -1.0 - 2.0 * s_);
}

EllipticityCertificate check_ellipticity(const SpectralKernel& kernel, int nu_resolution) {
  if (nu_resolution < 1) throw Error(ErrorCode::InvalidArgument, "nu resolution must be >= 1");
  constexpr double sphere[2] = {1.0, -1.0};
  const double two_s = 2.0 * kernel.order();
  EllipticityCertificate cert;
  cert.grid_resolution = nu_resolution;
  cert.c1 = std::numeric_limits<double>::infinity();
  for (int k = 0; k < nu_resolution; ++k) {
    const double nu = sphere[k % 2];
    double integral = 0.0;
    for (double theta : sphere) integral += std::pow(std::abs(nu * theta), two_s) * kernel.density(theta);
    cert.c1 = std::min(cert.c1, integral);
  }
  for (double theta : sphere) cert.c2 = std::max(cert.c2, kernel.density(theta));
  if (!(cert.c1 > 0.0))
    throw Error(ErrorCode::EllipticityViolation, "lower ellipticity constant is not positive");
  return cert;
}

double exterior_mass(const SpectralKernel& kernel, double x, double R) {
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "half-width must be positive");
  if (!(std::abs(x) < R)) throw Error(ErrorCode::BoundaryDivergence, "exterior mass diverges on the boundary");
  const double two_s = 2.0 * kernel.order();
  const double v =
      kernel.one_sided_weight() * (std::pow(R - x, -two_s) + std::pow(R + x, -two_s)) / two_s;
  if (!std::isfinite(v)) throw Error(ErrorCode::BoundaryDivergence, "exterior mass overflows near the boundary");
  return v;
}

}  // namespace nlx
