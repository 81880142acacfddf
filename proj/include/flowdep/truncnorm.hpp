#ifndef FLOWDEP_TRUNCNORM_HPP
#define FLOWDEP_TRUNCNORM_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "flowdep/error.hpp"
#include "flowdep/metrics.hpp"
#include "flowdep/parallel.hpp"
#include "flowdep/rng.hpp"

namespace flowdep::truncnorm {

struct BivariateNormalParams {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  double rho = 0.0;

  void validate() const {
    if (!(sigma1 > 0.0) || !(sigma2 > 0.0) || !std::isfinite(sigma1) || !std::isfinite(sigma2))
      throw DomainError("standard deviations must be positive and finite");
    if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("correlation must be in [-1, 1]");
    if (!std::isfinite(mu1) || !std::isfinite(mu2)) throw DomainError("means must be finite");
  }
};

// Calibration defaults for the simulated (log10 size, log10 duration)
// experiment. Chosen so the untruncated size-rate coefficient is ~0.319 with
// trace-plausible marginals; these are calibration values, not estimates from
// any particular trace.
inline BivariateNormalParams default_simulation_params() {
  return {3.7, -0.5, 0.75, 1.0, 0.45};
}

inline double std_normal_pdf(double t) {
  return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
}

// P(Z > t) for standard normal Z, via the complementary error function rather
// than 1 - Phi(t), so deep truncations keep full relative accuracy.
inline double upper_tail(double t) { return 0.5 * std::erfc(t / std::numbers::sqrt2); }

namespace detail {

// Hazard phi(t) / P(Z > t). Direct evaluation is fine until erfc underflows;
// past that the Mills-ratio asymptotic series takes over.
inline double hazard(double t) {
  if (t <= 30.0) {
    const double c = upper_tail(t);
    return std_normal_pdf(t) / c;  // c >= upper_tail(30) > 0 here
  }
  const double inv_t2 = 1.0 / (t * t);
  const double mills = (1.0 - inv_t2 * (1.0 - inv_t2 * (3.0 - inv_t2 * 15.0))) / t;
  return 1.0 / mills;
}

}  // namespace detail

// Variance of a standard normal conditioned on exceeding t, i.e. the 1+u term
// of the truncated-correlation formula. Lies in (0, 1) for finite t and tends
// to 1 as t -> -inf.
inline double truncated_variance_ratio(double t) {
  if (t == -std::numeric_limits<double>::infinity()) return 1.0;
  const double lambda = detail::hazard(t);
  return 1.0 + t * lambda - lambda * lambda;
}

// Corr(X, Y | X > a) for a bivariate normal, in the reduced (rho, t) form with
// t the standardized truncation point:
//   rho * sqrt(1 + u) / sqrt(1 + rho^2 u),
//   u = t e^{-t^2/2} / (sqrt(2 pi) C) - e^{-t^2} / (2 pi C^2),  C = P(Z > t).
inline double truncated_corr_rt(double rho, double t) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("correlation must be in [-1, 1]");
  if (std::isnan(t)) throw DomainError("truncation point must not be NaN");
  if (rho == 0.0) return 0.0;
  const double u = truncated_variance_ratio(t) - 1.0;
  return rho * std::sqrt(1.0 + u) / std::sqrt(1.0 + rho * rho * u);
}

struct TruncationSpec {
  double a = -std::numeric_limits<double>::infinity();
  double t = -std::numeric_limits<double>::infinity();  // (a - mu1) / sigma1
  double c = 1.0;                                       // P(X > a)
};

// a may be -inf, meaning no truncation.
inline TruncationSpec make_truncation(const BivariateNormalParams& params, double a) {
  params.validate();
  if (std::isnan(a) || a == std::numeric_limits<double>::infinity())
    throw DomainError("truncation point must be finite or -inf");
  TruncationSpec spec;
  spec.a = a;
  spec.t = (a == -std::numeric_limits<double>::infinity())
               ? -std::numeric_limits<double>::infinity()
               : (a - params.mu1) / params.sigma1;
  spec.c = upper_tail(spec.t);
  return spec;
}

inline double truncated_corr(const BivariateNormalParams& params, double a) {
  const TruncationSpec spec = make_truncation(params, a);
  return truncated_corr_rt(params.rho, spec.t);
}

// Monte Carlo oracle for the closed form: sample the bivariate normal, drop
// pairs with x <= a, return the sample correlation of the survivors.
//
// Sampling is split into a fixed number of independently seeded chunks; the
// thread count only maps chunks onto workers, so the estimate is identical for
// any `threads`, and the single-threaded path is the reference behavior.
inline double mc_truncated_corr(const BivariateNormalParams& params, double a,
                                std::size_t n_samples, std::uint64_t seed,
                                unsigned threads = 1) {
  params.validate();
  if (n_samples < 10000) throw DomainError("need at least 10^4 samples");
  if (std::isnan(a) || a == std::numeric_limits<double>::infinity())
    throw DomainError("truncation point must be finite or -inf");

  constexpr std::size_t kChunks = 64;
  struct Sums {
    std::size_t n = 0;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  };
  std::vector<Sums> chunk_sums(kChunks);
  std::uint64_t seed_state = seed;
  std::vector<std::uint64_t> chunk_seeds(kChunks);
  for (auto& s : chunk_seeds) s = splitmix64(seed_state);

  const double cross = params.sigma2 * params.rho;
  const double resid = params.sigma2 * std::sqrt(1.0 - params.rho * params.rho);

  run_jobs(kChunks, threads, [&](std::size_t c) {
    Rng rng(chunk_seeds[c]);
    const std::size_t n_c = n_samples / kChunks + (c < n_samples % kChunks ? 1 : 0);
    Sums s;
    for (std::size_t i = 0; i < n_c; ++i) {
      const auto [z1, z2] = rng.normal_pair();
      const double x = params.mu1 + params.sigma1 * z1;
      if (x <= a) continue;
      // accumulate centered at the untruncated means to keep sums small
      const double dx = params.sigma1 * z1;
      const double dy = cross * z1 + resid * z2;
      s.n += 1;
      s.sx += dx;
      s.sy += dy;
      s.sxx += dx * dx;
      s.syy += dy * dy;
      s.sxy += dx * dy;
    }
    chunk_sums[c] = s;
  });

  Sums total;
  for (const auto& s : chunk_sums) {  // fixed combine order
    total.n += s.n;
    total.sx += s.sx;
    total.sy += s.sy;
    total.sxx += s.sxx;
    total.syy += s.syy;
    total.sxy += s.sxy;
  }
  if (total.n < 100) throw DomainError("truncation too severe: fewer than 100 survivors");

  const double n = double(total.n);
  const double cxx = total.sxx - total.sx * total.sx / n;
  const double cyy = total.syy - total.sy * total.sy / n;
  const double cxy = total.sxy - total.sx * total.sy / n;
  if (!(cxx > 0.0) || !(cyy > 0.0)) throw DomainError("degenerate marginal in MC sample");
  return cxy / std::sqrt(cxx * cyy);
}

// Draws (log_size, log_duration) pairs and fills log_rate by subtraction.
// Deterministic for a fixed seed.
inline std::vector<metrics::LogLogPoint> simulate_loglog_points(
    const BivariateNormalParams& params, std::size_t n, std::uint64_t seed) {
  params.validate();
  if (n < 1) throw DomainError("need at least one point");
  const double cross = params.sigma2 * params.rho;
  const double resid = params.sigma2 * std::sqrt(1.0 - params.rho * params.rho);
  Rng rng(seed);
  std::vector<metrics::LogLogPoint> points;
  points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [z1, z2] = rng.normal_pair();
    const double log_size = params.mu1 + params.sigma1 * z1;
    const double log_duration = params.mu2 + cross * z1 + resid * z2;
    points.push_back({log_size, log_duration, log_size - log_duration});
  }
  return points;
}

// Sample means, sample standard deviations (n-1 denominator) and sample
// correlation of (log_size, log_duration).
inline BivariateNormalParams estimate_params(std::span<const metrics::LogLogPoint> points) {
  const std::size_t n = points.size();
  if (n < 2) throw DomainError("need at least two points");
  double mean_s = 0.0, mean_d = 0.0;
  for (const auto& p : points) {
    mean_s += p.log_size;
    mean_d += p.log_duration;
  }
  mean_s /= double(n);
  mean_d /= double(n);
  double sss = 0.0, sdd = 0.0, ssd = 0.0;
  for (const auto& p : points) {
    const double ds = p.log_size - mean_s;
    const double dd = p.log_duration - mean_d;
    sss += ds * ds;
    sdd += dd * dd;
    ssd += ds * dd;
  }
  if (sss == 0.0 || sdd == 0.0) throw DomainError("degenerate marginal");
  BivariateNormalParams est;
  est.mu1 = mean_s;
  est.mu2 = mean_d;
  est.sigma1 = std::sqrt(sss / double(n - 1));
  est.sigma2 = std::sqrt(sdd / double(n - 1));
  est.rho = ssd / std::sqrt(sss * sdd);
  return est;
}

}  // namespace flowdep::truncnorm

#endif
