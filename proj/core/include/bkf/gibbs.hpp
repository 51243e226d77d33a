#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "bkf/design_matrix.hpp"
#include "bkf/hdi.hpp"

namespace bkf {

/// Semi-conjugate prior: beta ~ N(0, beta_variance * I),
/// sigma2 ~ InvGamma(sigma2_shape, sigma2_rate). With standardize set, each
/// design column is divided by its root mean square before sampling (scale
/// only, no centering: the regression has no intercept) and the prior
/// applies to the scaled coefficients; reported draws are mapped back.
struct PriorSpec {
  double beta_variance = 100.0;
  double sigma2_shape = 2.0;
  double sigma2_rate = 1.0;
  bool standardize = false;
};

struct McmcConfig {
  int chains = 4;
  int iterations = 5000;  // per chain, burn-in included
  int burn_in = 1000;
  int thin = 1;
  std::uint64_t seed = 0;
};

void validate(const PriorSpec& prior);
void validate(const McmcConfig& mcmc);

struct CoefficientSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  Interval hdi95;
  double r_hat = 0.0;
  double ess = 0.0;
};

/// Retained draws are pooled chain-major: chain 0's draws, then chain 1's,
/// each chain contributing draws_per_chain entries in iteration order.
struct PosteriorSummary {
  std::array<CoefficientSummary, 4> coefficients;  // kCoefficientNames order
  CoefficientSummary sigma2;
  int n_chains = 0;
  int draws_per_chain = 0;
  std::size_t n_observations = 0;
  double max_r_hat = 0.0;
  bool converged = false;  // max split R-hat <= 1.05 over betas and sigma2
  std::vector<std::array<double, 4>> beta_draws;
  std::vector<double> sigma2_draws;
};

/// Gibbs sampler for the no-intercept linear model. Chains run sequentially
/// with seeds derived per chain, so results are reproducible regardless of
/// hardware. Non-convergence sets the flag but never rejects the fit.
/// Throws NumericalFailure if the conditional precision matrix loses
/// positive definiteness (degenerate inputs under check_rank = false).
PosteriorSummary gibbs_fit(const DesignMatrix& design, const PriorSpec& prior = {},
                           const McmcConfig& mcmc = {});

/// Machine-readable fit document: per-coefficient table, diagnostics,
/// sampler settings.
nlohmann::ordered_json posterior_document(const PosteriorSummary& posterior,
                                          const PriorSpec& prior, const McmcConfig& mcmc);

/// Pooled beta draws as CSV, one column per coefficient, header row first.
void write_draws_csv(const PosteriorSummary& posterior, std::ostream& out);

}  // namespace bkf
