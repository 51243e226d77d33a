#include "bkf/kalman.hpp"

#include <cmath>

#include "bkf/errors.hpp"

namespace bkf {

void validate(const NoiseSpec& noise) {
  if (!std::isfinite(noise.sigma_mic) || noise.sigma_mic <= 0.0)
    throw InvalidParameter("sigma_mic must be positive and finite");
  if (!std::isfinite(noise.sigma_mac) || noise.sigma_mac <= 0.0)
    throw InvalidParameter("sigma_mac must be positive and finite");
  if (!std::isfinite(noise.rho) || std::abs(noise.rho) >= 1.0)
    throw InvalidParameter("rho must satisfy |rho| < 1");
}

void validate(const BehavioralParams& params) {
  if (!std::isfinite(params.alpha) || params.alpha < 0.0 || params.alpha > 1.0)
    throw InvalidParameter("alpha must lie in [0, 1]");
  validate(params.noise);
}

void validate(const StateEstimate& estimate) {
  if (!std::isfinite(estimate.mean)) throw InvalidParameter("state mean must be finite");
  if (!std::isfinite(estimate.variance) || estimate.variance < 0.0)
    throw InvalidParameter("state variance must be >= 0");
}

Matrix2 subjective_covariance(const NoiseSpec& noise) {
  validate(noise);
  const double off = noise.rho * noise.sigma_mic * noise.sigma_mac;
  return Matrix2{noise.sigma_mic * noise.sigma_mic, off, off, noise.sigma_mac * noise.sigma_mac};
}

GainVector gain(double prior_variance, const NoiseSpec& noise) {
  if (!std::isfinite(prior_variance) || prior_variance < 0.0)
    throw InvalidParameter("prior variance must be >= 0");
  const Matrix2 cov = subjective_covariance(noise);

  // Innovation covariance S = H P H^T + Sigma with H = [1, 1]^T.
  const double s00 = prior_variance + cov.m00;
  const double s01 = prior_variance + cov.m01;
  const double s11 = prior_variance + cov.m11;
  const double det = s00 * s11 - s01 * s01;
  if (!std::isfinite(det) || det <= 0.0)
    throw NumericalFailure("innovation covariance is not positive definite");

  // G^T = [P, P] S^-1 with the adjugate form of the 2x2 inverse.
  return GainVector{prior_variance * (s11 - s01) / det, prior_variance * (s00 - s01) / det};
}

StateEstimate standard_update(const StateEstimate& prior, const SignalVector& signals,
                              const NoiseSpec& noise) {
  if (noise.rho != 0.0) throw InvalidParameter("standard update requires rho == 0");
  return behavioral_update(prior, signals, BehavioralParams{1.0, noise});
}

StateEstimate behavioral_update(const StateEstimate& prior, const SignalVector& signals,
                                const BehavioralParams& params) {
  validate(prior);
  validate(params);
  if (!std::isfinite(signals.mic) || !std::isfinite(signals.mac))
    throw InvalidParameter("signal components must be finite");

  const GainVector g = gain(prior.variance, params.noise);
  const double mean = params.alpha * prior.mean + g.mic * (signals.mic - prior.mean) +
                      g.mac * (signals.mac - prior.mean);
  const double variance = (1.0 - g.sum()) * prior.variance;
  return StateEstimate{mean, variance};
}

}  // namespace bkf
