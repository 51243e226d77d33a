#pragma once

namespace bkf {

/// Belief about the latent growth rate, in percent units (3.0 means 3.0%).
/// Holds both the prior estimate and the updated estimate depending on context.
struct StateEstimate {
  double mean = 0.0;
  double variance = 0.0;  // squared percent units, >= 0
};

/// One observation of the two concurrent signals, in percent units.
struct SignalVector {
  double mic = 0.0;
  double mac = 0.0;
};

/// Perceived noise structure of the two signals. rho = 0 recovers the
/// diagonal covariance of the classical filter; |rho| must be < 1 so the
/// implied 2x2 covariance stays positive definite.
struct NoiseSpec {
  double sigma_mic = 1.0;
  double sigma_mac = 1.0;
  double rho = 0.0;
};

/// Behavioral parameters: alpha in [0, 1] discounts the prior belief,
/// the noise spec carries the subjective signal correlation.
struct BehavioralParams {
  double alpha = 1.0;
  NoiseSpec noise;
};

/// Weights applied to the two signal innovations. The observation matrix is
/// fixed at H = [1, 1]^T throughout this module.
struct GainVector {
  double mic = 0.0;
  double mac = 0.0;
  double sum() const { return mic + mac; }
};

/// 2x2 symmetric matrix, row-major.
struct Matrix2 {
  double m00 = 0.0;
  double m01 = 0.0;
  double m10 = 0.0;
  double m11 = 0.0;
};

/// Throw InvalidParameter unless sigmas are positive, |rho| < 1, all finite.
void validate(const NoiseSpec& noise);

/// Throw InvalidParameter unless alpha is in [0, 1] and the noise spec is valid.
void validate(const BehavioralParams& params);

/// Throw InvalidParameter unless mean is finite and variance >= 0.
void validate(const StateEstimate& estimate);

/// Perceived signal covariance:
///   [ sigma_mic^2              rho sigma_mic sigma_mac ]
///   [ rho sigma_mic sigma_mac  sigma_mac^2             ]
Matrix2 subjective_covariance(const NoiseSpec& noise);

/// Gain vector G^T = P H^T (H P H^T + Sigma)^-1 by closed-form 2x2 inversion.
/// With rho = 0 this is the classical gain. Throws NumericalFailure if the
/// innovation covariance is not invertible (cannot happen for valid inputs).
GainVector gain(double prior_variance, const NoiseSpec& noise);

/// Classical update: mean <- prior + G^T (s - H prior). Requires rho == 0.
/// Posterior variance uses (1 - (g_mic + g_mac)) * P.
StateEstimate standard_update(const StateEstimate& prior, const SignalVector& signals,
                              const NoiseSpec& noise);

/// Behavioral update: mean <- alpha * prior + G^T (s - H prior), with the gain
/// computed from the subjective covariance. The innovation uses the
/// undiscounted prior. alpha = 1, rho = 0 reduces to standard_update.
StateEstimate behavioral_update(const StateEstimate& prior, const SignalVector& signals,
                                const BehavioralParams& params);

}  // namespace bkf
