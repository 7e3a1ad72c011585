#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "spikefield/errors.hpp"
#include "spikefield/types.hpp"

namespace spikefield::metrics {

inline constexpr double kPsnrCap = 99.0;  // returned when MSE == 0

// Peak signal-to-noise ratio in dB. An optional mask restricts the MSE to the
// flagged pixels (object-region measurement).
inline double psnr(const IntensityImage& a, const IntensityImage& b, double peak,
                   const std::vector<std::uint8_t>* mask = nullptr) {
  if (!a.same_shape(b)) throw DimensionMismatch("psnr: image dimensions differ");
  if (!(peak > 0.0)) throw Error("psnr: peak must be > 0");
  double se = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    double d = a.values[i] - b.values[i];
    se += d * d;
    ++n;
  }
  if (n == 0) throw Error("psnr: empty mask");
  double mse = se / static_cast<double>(n);
  if (mse == 0.0) return kPsnrCap;
  return 10.0 * std::log10(peak * peak / mse);
}

namespace detail {

inline std::vector<double> gaussian_window_11(double sigma = 1.5) {
  std::vector<double> w(11 * 11);
  double sum = 0.0;
  for (int dy = -5; dy <= 5; ++dy)
    for (int dx = -5; dx <= 5; ++dx) {
      double g = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      w[(dy + 5) * 11 + (dx + 5)] = g;
      sum += g;
    }
  for (double& v : w) v /= sum;
  return w;
}

}  // namespace detail

// Mean local SSIM with the standard constants (11x11 Gaussian window,
// sigma = 1.5, k1 = 0.01, k2 = 0.03). Windows are fully interior ('valid'
// filtering); a mask, when given, selects window centers.
inline double ssim(const IntensityImage& a, const IntensityImage& b, double peak,
                   const std::vector<std::uint8_t>* mask = nullptr) {
  if (!a.same_shape(b)) throw DimensionMismatch("ssim: image dimensions differ");
  if (!(peak > 0.0)) throw Error("ssim: peak must be > 0");
  if (a.width < 11 || a.height < 11)
    throw TooSmall("ssim: images must be at least 11x11");
  static const std::vector<double> win = detail::gaussian_window_11();
  const double c1 = (0.01 * peak) * (0.01 * peak);
  const double c2 = (0.03 * peak) * (0.03 * peak);

  double total = 0.0;
  std::size_t n = 0;
  for (int cy = 5; cy < a.height - 5; ++cy)
    for (int cx = 5; cx < a.width - 5; ++cx) {
      if (mask && !(*mask)[static_cast<std::size_t>(cy) * a.width + cx]) continue;
      double mu_a = 0, mu_b = 0, aa = 0, bb = 0, ab = 0;
      for (int dy = -5; dy <= 5; ++dy)
        for (int dx = -5; dx <= 5; ++dx) {
          double wgt = win[(dy + 5) * 11 + (dx + 5)];
          double va = a.at(cx + dx, cy + dy);
          double vb = b.at(cx + dx, cy + dy);
          mu_a += wgt * va;
          mu_b += wgt * vb;
          aa += wgt * va * va;
          bb += wgt * vb * vb;
          ab += wgt * va * vb;
        }
      double var_a = aa - mu_a * mu_a;
      double var_b = bb - mu_b * mu_b;
      double cov = ab - mu_a * mu_b;
      double s = ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) /
                 ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
      total += s;
      ++n;
    }
  if (n == 0) throw Error("ssim: empty mask after interior cropping");
  return total / static_cast<double>(n);
}

}  // namespace spikefield::metrics
