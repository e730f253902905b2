#pragma once

#include <optional>
#include <string_view>

namespace nlx {

// c_{n,s} = 4^s Γ(n/2+s) / (π^{n/2} |Γ(-s)|), the constant whose Fourier symbol is |ξ|^{2s}.
double frac_lap_constant(double n, double s);

enum class KernelFamily { FractionalLaplacian, WeightedEven };
std::string_view to_string(KernelFamily f) noexcept;

// J(y) = normalization * a(y/|y|) / |y|^{1+2s} on the real line.
// The unit sphere is {-1, +1}; evenness forces a(+1) = a(-1).
class SpectralKernel {
 public:
  static SpectralKernel fractional_laplacian(double s);
  // normalization defaults to c_{1,s}
  static SpectralKernel weighted_even(double s, double weight_plus, double weight_minus,
                                      std::optional<double> normalization = std::nullopt);

  KernelFamily family() const noexcept { return family_; }
  double order() const noexcept { return s_; }
  int dim() const noexcept { return 1; }
  double density(double theta) const;
  double weight() const noexcept { return weight_; }
  double normalization() const noexcept { return normalization_; }
  // normalization * a: the constant in front of |y|^{-1-2s}
  double one_sided_weight() const noexcept { return normalization_ * weight_; }
  double jump(double y) const;

 private:
  SpectralKernel(KernelFamily family, double s, double weight, double normalization);

  KernelFamily family_;
  double s_;
  double weight_;
  double normalization_;
};

struct EllipticityCertificate {
  double c1 = 0.0;
  double c2 = 0.0;
  int grid_resolution = 0;
};

// c1 = min over sampled ν of Σ_θ |ν·θ|^{2s} a(θ), c2 = max a. Both refer to the density only.
EllipticityCertificate check_ellipticity(const SpectralKernel& kernel, int nu_resolution = 1);

// ∫_{|z| >= R} J(x - z) dz for x in (-R, R).
double exterior_mass(const SpectralKernel& kernel, double x, double R = 1.0);

}  // namespace nlx
