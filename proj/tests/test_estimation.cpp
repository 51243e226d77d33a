#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"

#include "bkf/design_matrix.hpp"
#include "bkf/errors.hpp"
#include "bkf/gibbs.hpp"
#include "bkf/rationality.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using namespace bkf;

namespace {

ReducedFormParams params_with(double prior, double mic, double mac, double inter,
                              double noise) {
  ReducedFormParams p;
  p.beta_prior = prior;
  p.beta_mic = mic;
  p.beta_mac = mac;
  p.beta_int = inter;
  p.noise_sd = noise;
  return p;
}

McmcConfig quick_mcmc(std::uint64_t seed = 0) {
  McmcConfig mcmc;
  mcmc.chains = 4;
  mcmc.iterations = 2000;
  mcmc.burn_in = 500;
  mcmc.seed = seed;
  return mcmc;
}

oracle::OlsFit ols_of(const DesignMatrix& design) {
  return oracle::ols(design.rows, design.response);
}

}  // namespace

TEST_SUITE("estimation") {

TEST_CASE("design rows are prior, levels, and their product") {
  const auto records = support::make_records(rational_kf_params(0.0), 1, 0);
  const DesignMatrix design = build_design(records);
  REQUIRE(design.n() == 8);
  REQUIRE(design.response.size() == 8);

  // First record is household S1: prior 3, levels (8, 8).
  CHECK(design.rows[0][0] == 3.0);
  CHECK(design.rows[0][1] == 8.0);
  CHECK(design.rows[0][2] == 8.0);
  CHECK(design.rows[0][3] == 64.0);
  CHECK(design.response[0] == doctest::Approx(6.0));

  // Second record is household S2: levels (-2, -2), product positive.
  CHECK(design.rows[1][1] == -2.0);
  CHECK(design.rows[1][2] == -2.0);
  CHECK(design.rows[1][3] == 4.0);
}

TEST_CASE("filters narrow by persona, model, and scenario") {
  auto records = support::make_records(rational_kf_params(0.0), 3, 0, "model-a");
  const auto more = support::make_records(rational_kf_params(0.0), 3, 1, "model-b");
  records.insert(records.end(), more.begin(), more.end());

  RecordFilter filter;
  filter.model = "model-a";
  CHECK(build_design(records, filter).n() == 24);

  filter.persona = PersonaKind::Ceo;
  CHECK(build_design(records, filter).n() == 12);

  filter.scenario = ScenarioId::S2;
  CHECK(build_design(records, filter, /*check_rank=*/false).n() == 3);

  filter.model = "model-c";
  CHECK_THROWS_AS(build_design(records, filter), InvalidParameter);
  CHECK_THROWS_WITH_AS(build_design(std::vector<TrialRecord>{}),
                       "no trial records match the filter", InvalidParameter);
}

TEST_CASE("rank guard rejects designs that cannot identify the coefficients") {
  const auto records = support::make_records(rational_kf_params(0.1), 30, 2);

  RecordFilter one_scenario;
  one_scenario.scenario = ScenarioId::S1;
  CHECK_THROWS_AS(build_design(records, one_scenario), RankDeficient);

  try {
    build_design(records, one_scenario);
  } catch (const RankDeficient& e) {
    CHECK(std::string(e.what()).find("rank 1 of 4") != std::string::npos);
  }

  // The guard can be bypassed for deliberate partial assemblies.
  CHECK(build_design(records, one_scenario, /*check_rank=*/false).n() == 60);

  // The full factorial identifies all four coefficients.
  CHECK_NOTHROW(build_design(records));
}

TEST_CASE("noiseless fit recovers the generator almost exactly") {
  const auto records = support::make_records(rational_kf_params(0.0), 30, 3);
  const DesignMatrix design = build_design(records);
  const PosteriorSummary fit = gibbs_fit(design, {}, quick_mcmc());

  const double truth[] = {0.4, 0.4, 0.2, 0.0};
  for (int i = 0; i < 4; ++i) {
    CAPTURE(i);
    CHECK(std::fabs(fit.coefficients[i].mean - truth[i]) < 0.01);
    CHECK(fit.coefficients[i].hdi95.contains(truth[i]));
    CHECK(fit.coefficients[i].r_hat < 1.05);
  }
  CHECK(fit.converged);
  CHECK(fit.n_observations == 240);
  CHECK(fit.sigma2.mean < 0.05);
}

TEST_CASE("posterior means track the closed-form least squares solution") {
  const auto records =
      support::make_records(params_with(0.55, 0.40, 0.39, -0.03, 0.3), 30, 4);
  const DesignMatrix design = build_design(records);
  const oracle::OlsFit reference = ols_of(design);
  const PosteriorSummary fit = gibbs_fit(design, {}, quick_mcmc());

  for (int i = 0; i < 4; ++i) {
    CAPTURE(i);
    // A flat-ish prior keeps the posterior near the likelihood peak.
    CHECK(std::fabs(fit.coefficients[i].mean - reference.beta[i]) <
          2.0 * fit.coefficients[i].sd);
    // Posterior spread and frequentist standard errors agree in order.
    CHECK(fit.coefficients[i].sd < 5.0 * reference.se[i]);
    CHECK(fit.coefficients[i].sd > 0.2 * reference.se[i]);
  }
  CHECK(fit.sigma2.mean == doctest::Approx(reference.sigma2).epsilon(0.35));
}

TEST_CASE("a tight prior shrinks the coefficients toward zero") {
  const auto records = support::make_records(rational_kf_params(1.0), 30, 5);
  const DesignMatrix design = build_design(records);

  PriorSpec weak;
  weak.beta_variance = 100.0;
  PriorSpec tight;
  tight.beta_variance = 1e-4;

  const PosteriorSummary free_fit = gibbs_fit(design, weak, quick_mcmc());
  const PosteriorSummary shrunk = gibbs_fit(design, tight, quick_mcmc());

  CHECK(std::fabs(shrunk.coefficients[1].mean) <
        0.75 * std::fabs(free_fit.coefficients[1].mean));
  CHECK(std::fabs(shrunk.coefficients[2].mean) <
        0.75 * std::fabs(free_fit.coefficients[2].mean));
}

TEST_CASE("scaling the responses scales the coefficients") {
  const auto records = support::make_records(rational_kf_params(0.2), 30, 6);
  DesignMatrix design = build_design(records);
  const PosteriorSummary base = gibbs_fit(design, {}, quick_mcmc());

  for (double& y : design.response) y *= 10.0;
  const PosteriorSummary scaled = gibbs_fit(design, {}, quick_mcmc());

  for (int i = 0; i < 4; ++i) {
    CAPTURE(i);
    const double tol =
        3.0 * (10.0 * base.coefficients[i].sd + scaled.coefficients[i].sd);
    CHECK(std::fabs(scaled.coefficients[i].mean - 10.0 * base.coefficients[i].mean) <
          tol);
  }
}

TEST_CASE("column standardization changes the sampler, not the answer") {
  const auto records = support::make_records(rational_kf_params(0.3), 30, 7);
  const DesignMatrix design = build_design(records);

  PriorSpec plain;
  PriorSpec standardized;
  standardized.standardize = true;

  const PosteriorSummary a = gibbs_fit(design, plain, quick_mcmc());
  const PosteriorSummary b = gibbs_fit(design, standardized, quick_mcmc());
  for (int i = 0; i < 4; ++i) {
    CAPTURE(i);
    CHECK(std::fabs(a.coefficients[i].mean - b.coefficients[i].mean) <
          3.0 * (a.coefficients[i].sd + b.coefficients[i].sd));
  }
}

TEST_CASE("fits are reproducible and seed-sensitive") {
  const auto records = support::make_records(rational_kf_params(0.5), 10, 8);
  const DesignMatrix design = build_design(records);

  const PosteriorSummary a = gibbs_fit(design, {}, quick_mcmc(1));
  const PosteriorSummary b = gibbs_fit(design, {}, quick_mcmc(1));
  REQUIRE(a.beta_draws.size() == b.beta_draws.size());
  CHECK(a.beta_draws == b.beta_draws);
  CHECK(a.sigma2_draws == b.sigma2_draws);

  const PosteriorSummary c = gibbs_fit(design, {}, quick_mcmc(2));
  CHECK(a.beta_draws != c.beta_draws);
  CHECK(std::fabs(a.coefficients[1].mean - c.coefficients[1].mean) < 0.05);
}

TEST_CASE("draw bookkeeping matches the mcmc settings") {
  const auto records = support::make_records(rational_kf_params(0.5), 5, 9);
  const DesignMatrix design = build_design(records);

  McmcConfig mcmc;
  mcmc.chains = 3;
  mcmc.iterations = 900;
  mcmc.burn_in = 300;
  mcmc.thin = 2;
  const PosteriorSummary fit = gibbs_fit(design, {}, mcmc);
  CHECK(fit.n_chains == 3);
  CHECK(fit.draws_per_chain == 300);
  CHECK(fit.beta_draws.size() == 900);
  CHECK(fit.sigma2_draws.size() == 900);
}

TEST_CASE("sampler configuration is validated") {
  McmcConfig mcmc;
  mcmc.chains = 0;
  CHECK_THROWS_AS(validate(mcmc), InvalidParameter);
  mcmc = {};
  mcmc.burn_in = mcmc.iterations;
  CHECK_THROWS_AS(validate(mcmc), InvalidParameter);
  mcmc = {};
  mcmc.thin = 0;
  CHECK_THROWS_AS(validate(mcmc), InvalidParameter);

  PriorSpec prior;
  prior.beta_variance = 0.0;
  CHECK_THROWS_AS(validate(prior), InvalidParameter);
  prior = {};
  prior.sigma2_shape = -1.0;
  CHECK_THROWS_AS(validate(prior), InvalidParameter);
}

TEST_CASE("rationality verdict separates rational and interacting generators") {
  const auto rational_records = support::make_records(rational_kf_params(0.1), 30, 10);
  const PosteriorSummary rational_fit =
      gibbs_fit(build_design(rational_records), {}, quick_mcmc(10));
  const RationalityCheck good = check_rationality(rational_fit);
  CHECK(good.sum_to_one);
  CHECK(good.zero_interaction);
  CHECK(good.rational());
  CHECK(good.sum_hdi.contains(good.sum_mean));
  CHECK(verdict_line(good) == "RATIONAL: both conditions satisfied");

  // The interaction in the alternative generator must be detectable at this
  // sample size; the closed-form fit confirms that before the verdict is
  // trusted to catch it.
  const auto warped_records =
      support::make_records(params_with(0.55, 0.40, 0.39, -0.03, 0.1), 30, 11);
  const DesignMatrix warped_design = build_design(warped_records);
  const oracle::OlsFit reference = ols_of(warped_design);
  REQUIRE(std::fabs(reference.beta[3]) > 4.0 * reference.se[3]);

  const PosteriorSummary warped_fit = gibbs_fit(warped_design, {}, quick_mcmc(10));
  const RationalityCheck bad = check_rationality(warped_fit);
  CHECK_FALSE(bad.zero_interaction);
  CHECK_FALSE(bad.rational());
  CHECK(verdict_line(bad).find("IRRATIONAL") == 0);
  CHECK(verdict_line(bad).find("FAIL zero-interaction") != std::string::npos);
}

TEST_CASE("rationality check rejects bad mass and empty posteriors") {
  const auto records = support::make_records(rational_kf_params(0.2), 5, 12);
  const PosteriorSummary fit = gibbs_fit(build_design(records), {}, quick_mcmc());
  CHECK_THROWS_AS(check_rationality(fit, 0.0), InvalidParameter);
  CHECK_THROWS_AS(check_rationality(fit, 1.0), InvalidParameter);

  PosteriorSummary empty;
  CHECK_THROWS_AS(check_rationality(empty), TooFewDraws);
}

TEST_CASE("posterior document carries the fit and its settings") {
  const auto records = support::make_records(rational_kf_params(0.2), 10, 13);
  const PriorSpec prior;
  const McmcConfig mcmc = quick_mcmc(3);
  const PosteriorSummary fit = gibbs_fit(build_design(records), prior, mcmc);

  const auto doc = posterior_document(fit, prior, mcmc);
  CHECK(doc.at("n_observations") == 80);
  REQUIRE(doc.at("coefficients").size() == 4);
  CHECK(doc["coefficients"][0].at("name") == "beta_prior");
  CHECK(doc["coefficients"][0].contains("mean"));
  CHECK(doc["coefficients"][0].contains("hdi95"));
  CHECK(doc["coefficients"][0].contains("r_hat"));
  CHECK(doc["coefficients"][0].contains("ess"));
  CHECK(doc.at("mcmc").at("chains") == 4);
  CHECK(doc.at("mcmc").at("seed") == 3);
  CHECK(doc.at("prior").at("beta_variance") == 100.0);
  CHECK(doc.contains("sigma2"));
  CHECK(doc.contains("max_r_hat"));
  CHECK(doc.contains("converged"));

  std::ostringstream csv;
  write_draws_csv(fit, csv);
  const std::string text = csv.str();
  CHECK(text.rfind("beta_prior,beta_mic,beta_mac,beta_int\n", 0) == 0);
  CHECK(support::count_lines(text) == fit.beta_draws.size() + 1);
}

}  // TEST_SUITE
