#pragma once

// Trigonometric interpolation of uniformly sampled periodic vector data.

#include "asymptote/error.hpp"
#include "asymptote/series.hpp"

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <mutex>
#include <numbers>
#include <vector>

namespace asym {

namespace detail {
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

/// Forward real FFT of n samples.  Returns X_k for k = 0..n/2 (unnormalized).
inline std::vector<std::complex<double>> real_fft(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> in(x);
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

/// Real trigonometric polynomial in three coordinates,
///   f(t) = a0 + Σ_{k=1..K} 2 Re(c_k e^{ikt}).
/// For an interpolant of N (even) samples K = N/2 and the Nyquist term is
/// stored halved so it contributes (X_{N/2}/N) cos(Kt).
class TrigSeries3 {
 public:
  TrigSeries3() = default;

  static constexpr double kTrimRelative = 1e-14;

  /// Interpolant through samples at t_j = 2πj/N.  With trim, trailing modes
  /// at round-off level are dropped.
  static TrigSeries3 interpolate(const std::vector<Vec3>& samples, bool trim = false) {
    const std::size_t n = samples.size();
    TrigSeries3 s;
    s.coef_.assign(n / 2 + 1, {});
    for (int d = 0; d < 3; ++d) {
      std::vector<double> x(n);
      for (std::size_t j = 0; j < n; ++j) x[j] = samples[j][d];
      auto X = real_fft(x);
      s.a0_[d] = X[0].real() / double(n);
      for (std::size_t k = 1; k <= n / 2; ++k) {
        std::complex<double> c = X[k] / double(n);
        if (2 * k == n) c = std::complex<double>(c.real() * 0.5, 0.0);
        s.coef_[k][d] = c;
      }
    }
    if (!trim) return s;
    // trailing modes at round-off level are FFT noise; k³ amplifies them
    double peak = 0.0;
    for (const auto& c : s.coef_) peak = std::max({peak, std::abs(c[0]), std::abs(c[1]), std::abs(c[2])});
    std::size_t keep = s.coef_.size();
    while (keep > 2) {
      const auto& c = s.coef_[keep - 1];
      if (std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2])}) > kTrimRelative * peak) break;
      --keep;
    }
    s.coef_.resize(keep);
    return s;
  }

  std::size_t modes() const { return coef_.empty() ? 0 : coef_.size() - 1; }
  const Vec3& mean() const { return a0_; }
  std::array<std::complex<double>, 3> coefficient(std::size_t k) const { return coef_[k]; }

  /// Drop the mean and integrate termwise: the antiderivative with zero mean.
  TrigSeries3 integrated() const {
    TrigSeries3 s = *this;
    s.a0_ = Vec3::Zero();
    for (std::size_t k = 1; k < s.coef_.size(); ++k)
      for (int d = 0; d < 3; ++d) s.coef_[k][d] /= std::complex<double>(0.0, double(k));
    return s;
  }

  void set_mean(const Vec3& m) { a0_ = m; }

  /// Taylor coefficients of each coordinate at t.
  SVec3 taylor(double t, int order) const {
    std::array<std::array<double, Series::kMaxOrder + 1>, 3> deriv{};
    const std::complex<double> step = std::polar(1.0, t);
    std::complex<double> e = step;
    for (std::size_t k = 1; k < coef_.size(); ++k) {
      if (k % 64 == 0) e = std::polar(1.0, double(k) * t);  // resync the recurrence
      const std::complex<double> ik(0.0, double(k));
      for (int d = 0; d < 3; ++d) {
        std::complex<double> term = coef_[k][d] * e;
        for (int m = 0; m <= order; ++m) {
          deriv[d][m] += 2.0 * term.real();
          term *= ik;
        }
      }
      e *= step;
    }
    SVec3 out;
    for (int d = 0; d < 3; ++d) {
      Series s(deriv[d][0] + a0_[d], order);
      double fact = 1.0;
      for (int m = 1; m <= order; ++m) {
        fact *= m;
        s[m] = deriv[d][m] / fact;
      }
      out[d] = s;
    }
    return out;
  }

 private:
  Vec3 a0_ = Vec3::Zero();
  std::vector<std::array<std::complex<double>, 3>> coef_;
};

}  // namespace asym
