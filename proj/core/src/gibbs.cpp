#include "bkf/gibbs.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "bkf/diagnostics.hpp"
#include "bkf/errors.hpp"
#include "bkf/rng.hpp"

namespace bkf {

namespace {

using Mat4 = std::array<std::array<double, 4>, 4>;
using Vec4 = std::array<double, 4>;

Mat4 cholesky(const Mat4& a) {
  Mat4 l{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = a[i][j];
      for (int k = 0; k < j; ++k) sum -= l[i][k] * l[j][k];
      if (i == j) {
        if (!(sum > 0.0))
          throw NumericalFailure("conditional precision matrix is not positive definite");
        l[i][i] = std::sqrt(sum);
      } else {
        l[i][j] = sum / l[j][j];
      }
    }
  }
  return l;
}

Vec4 forward_solve(const Mat4& l, const Vec4& b) {
  Vec4 x{};
  for (int i = 0; i < 4; ++i) {
    double sum = b[i];
    for (int k = 0; k < i; ++k) sum -= l[i][k] * x[k];
    x[i] = sum / l[i][i];
  }
  return x;
}

Vec4 backward_solve(const Mat4& l, const Vec4& b) {
  Vec4 x{};
  for (int i = 3; i >= 0; --i) {
    double sum = b[i];
    for (int k = i + 1; k < 4; ++k) sum -= l[k][i] * x[k];
    x[i] = sum / l[i][i];
  }
  return x;
}

double pooled_sd(const std::vector<double>& xs, double mean) {
  double sum = 0.0;
  for (double x : xs) sum += (x - mean) * (x - mean);
  return std::sqrt(sum / static_cast<double>(xs.size() - 1));
}

CoefficientSummary summarize(const std::string& name, const std::vector<std::vector<double>>& chains) {
  std::vector<double> pooled;
  for (const auto& chain : chains) pooled.insert(pooled.end(), chain.begin(), chain.end());
  double mean = 0.0;
  for (double x : pooled) mean += x;
  mean /= static_cast<double>(pooled.size());

  CoefficientSummary s;
  s.name = name;
  s.mean = mean;
  s.sd = pooled_sd(pooled, mean);
  s.hdi95 = hdi(pooled, 0.95);
  s.r_hat = split_r_hat(chains);
  s.ess = effective_sample_size(chains);
  return s;
}

nlohmann::ordered_json coefficient_json(const CoefficientSummary& s) {
  nlohmann::ordered_json j;
  j["name"] = s.name;
  j["mean"] = s.mean;
  j["sd"] = s.sd;
  j["hdi95"] = {s.hdi95.lo, s.hdi95.hi};
  j["r_hat"] = s.r_hat;
  j["ess"] = s.ess;
  return j;
}

}  // namespace

void validate(const PriorSpec& prior) {
  if (!(prior.beta_variance > 0.0) || !std::isfinite(prior.beta_variance))
    throw InvalidParameter("beta_variance must be positive and finite");
  if (!(prior.sigma2_shape > 0.0) || !(prior.sigma2_rate > 0.0))
    throw InvalidParameter("sigma2 prior shape and rate must be positive");
}

void validate(const McmcConfig& mcmc) {
  if (mcmc.chains < 1) throw InvalidParameter("mcmc needs at least one chain");
  if (mcmc.burn_in < 0) throw InvalidParameter("burn_in must be >= 0");
  if (mcmc.iterations <= mcmc.burn_in)
    throw InvalidParameter("iterations must exceed burn_in");
  if (mcmc.thin < 1) throw InvalidParameter("thin must be >= 1");
}

PosteriorSummary gibbs_fit(const DesignMatrix& design, const PriorSpec& prior,
                           const McmcConfig& mcmc) {
  validate(prior);
  validate(mcmc);
  const std::size_t n = design.n();
  if (n == 0) throw InvalidParameter("design matrix is empty");
  for (const auto& row : design.rows)
    for (double v : row)
      if (!std::isfinite(v)) throw InvalidParameter("design matrix has non-finite entries");
  for (double v : design.response)
    if (!std::isfinite(v)) throw InvalidParameter("response vector has non-finite entries");

  Vec4 scale{1.0, 1.0, 1.0, 1.0};
  if (prior.standardize) {
    for (int j = 0; j < 4; ++j) {
      double ss = 0.0;
      for (const auto& row : design.rows) ss += row[j] * row[j];
      const double rms = std::sqrt(ss / static_cast<double>(n));
      scale[j] = rms > 0.0 ? rms : 1.0;
    }
  }

  Mat4 xtx{};
  Vec4 xty{};
  double yty = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    Vec4 row;
    for (int j = 0; j < 4; ++j) row[j] = design.rows[r][j] / scale[j];
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) xtx[i][j] += row[i] * row[j];
      xty[i] += row[i] * design.response[r];
    }
    yty += design.response[r] * design.response[r];
  }

  const int retained = (mcmc.iterations - mcmc.burn_in + mcmc.thin - 1) / mcmc.thin;
  const double shape_post = prior.sigma2_shape + static_cast<double>(n) / 2.0;

  std::vector<std::vector<Vec4>> beta_chains(static_cast<std::size_t>(mcmc.chains));
  std::vector<std::vector<double>> sigma2_chains(static_cast<std::size_t>(mcmc.chains));

  for (int chain = 0; chain < mcmc.chains; ++chain) {
    Rng rng(derive_seed(mcmc.seed, {static_cast<std::uint64_t>(chain)}));
    auto& betas = beta_chains[static_cast<std::size_t>(chain)];
    auto& sigma2s = sigma2_chains[static_cast<std::size_t>(chain)];
    betas.reserve(static_cast<std::size_t>(retained));
    sigma2s.reserve(static_cast<std::size_t>(retained));

    double sigma2 = 1.0;
    for (int t = 0; t < mcmc.iterations; ++t) {
      Mat4 precision = xtx;
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) precision[i][j] /= sigma2;
        precision[i][i] += 1.0 / prior.beta_variance;
      }
      const Mat4 l = cholesky(precision);

      Vec4 rhs;
      for (int i = 0; i < 4; ++i) rhs[i] = xty[i] / sigma2;
      const Vec4 mean = backward_solve(l, forward_solve(l, rhs));

      Vec4 z;
      for (double& zi : z) zi = rng.normal();
      const Vec4 noise = backward_solve(l, z);  // covariance = precision^-1
      Vec4 beta;
      for (int i = 0; i < 4; ++i) beta[i] = mean[i] + noise[i];

      double ssr = yty;
      for (int i = 0; i < 4; ++i) {
        ssr -= 2.0 * beta[i] * xty[i];
        for (int j = 0; j < 4; ++j) ssr += beta[i] * xtx[i][j] * beta[j];
      }
      ssr = std::max(ssr, 0.0);
      sigma2 = rng.inverse_gamma(shape_post, prior.sigma2_rate + 0.5 * ssr);

      if (t >= mcmc.burn_in && (t - mcmc.burn_in) % mcmc.thin == 0) {
        Vec4 natural;
        for (int i = 0; i < 4; ++i) natural[i] = beta[i] / scale[i];
        betas.push_back(natural);
        sigma2s.push_back(sigma2);
      }
    }
  }

  PosteriorSummary posterior;
  posterior.n_chains = mcmc.chains;
  posterior.draws_per_chain = retained;
  posterior.n_observations = n;
  posterior.beta_draws.reserve(static_cast<std::size_t>(mcmc.chains) *
                               static_cast<std::size_t>(retained));
  for (const auto& chain : beta_chains)
    posterior.beta_draws.insert(posterior.beta_draws.end(), chain.begin(), chain.end());
  for (const auto& chain : sigma2_chains)
    posterior.sigma2_draws.insert(posterior.sigma2_draws.end(), chain.begin(), chain.end());

  for (int j = 0; j < 4; ++j) {
    std::vector<std::vector<double>> series;
    series.reserve(beta_chains.size());
    for (const auto& chain : beta_chains) {
      std::vector<double> s;
      s.reserve(chain.size());
      for (const Vec4& draw : chain) s.push_back(draw[static_cast<std::size_t>(j)]);
      series.push_back(std::move(s));
    }
    posterior.coefficients[static_cast<std::size_t>(j)] =
        summarize(kCoefficientNames[static_cast<std::size_t>(j)], series);
  }
  posterior.sigma2 = summarize("sigma2", sigma2_chains);

  posterior.max_r_hat = posterior.sigma2.r_hat;
  for (const auto& c : posterior.coefficients)
    posterior.max_r_hat = std::max(posterior.max_r_hat, c.r_hat);
  posterior.converged = posterior.max_r_hat <= 1.05;
  return posterior;
}

nlohmann::ordered_json posterior_document(const PosteriorSummary& posterior,
                                          const PriorSpec& prior, const McmcConfig& mcmc) {
  nlohmann::ordered_json doc;
  doc["model"] =
      "updated = beta_prior*prior + beta_mic*mic_level + beta_mac*mac_level"
      " + beta_int*mic_level*mac_level";
  doc["n_observations"] = posterior.n_observations;
  doc["coefficients"] = nlohmann::ordered_json::array();
  for (const auto& c : posterior.coefficients) doc["coefficients"].push_back(coefficient_json(c));
  doc["sigma2"] = coefficient_json(posterior.sigma2);
  doc["mcmc"]["chains"] = mcmc.chains;
  doc["mcmc"]["iterations"] = mcmc.iterations;
  doc["mcmc"]["burn_in"] = mcmc.burn_in;
  doc["mcmc"]["thin"] = mcmc.thin;
  doc["mcmc"]["seed"] = mcmc.seed;
  doc["mcmc"]["draws_per_chain"] = posterior.draws_per_chain;
  doc["mcmc"]["retained_total"] = posterior.beta_draws.size();
  doc["prior"]["beta_variance"] = prior.beta_variance;
  doc["prior"]["sigma2_shape"] = prior.sigma2_shape;
  doc["prior"]["sigma2_rate"] = prior.sigma2_rate;
  doc["prior"]["standardize"] = prior.standardize;
  doc["max_r_hat"] = posterior.max_r_hat;
  doc["converged"] = posterior.converged;
  return doc;
}

void write_draws_csv(const PosteriorSummary& posterior, std::ostream& out) {
  out << kCoefficientNames[0] << ',' << kCoefficientNames[1] << ',' << kCoefficientNames[2] << ','
      << kCoefficientNames[3] << '\n';
  char buf[32];
  for (const auto& draw : posterior.beta_draws) {
    for (int j = 0; j < 4; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", draw[static_cast<std::size_t>(j)]);
      out << buf << (j == 3 ? '\n' : ',');
    }
  }
}

}  // namespace bkf
