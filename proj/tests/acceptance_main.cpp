// Acceptance gate for the toolkit: one line per criterion, PASS or FAIL with
// the measured runtime, nonzero exit if anything fails. Tolerances and seeds
// are pinned here on purpose; loosening them is a visible diff.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bkf/agents.hpp"
#include "bkf/design_matrix.hpp"
#include "bkf/diagnostics.hpp"
#include "bkf/errors.hpp"
#include "bkf/format.hpp"
#include "bkf/gibbs.hpp"
#include "bkf/hdi.hpp"
#include "bkf/kalman.hpp"
#include "bkf/plan.hpp"
#include "bkf/rationality.hpp"
#include "bkf/response_parser.hpp"
#include "bkf/rng.hpp"
#include "oracle.hpp"
#include "parser_corpus.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;

namespace {

constexpr double kLevelsTol = 1e-9;
constexpr double kReductionTol = 1e-12;
constexpr double kGainIdentityTol = 1e-10;
constexpr double kNoiselessRecoveryTol = 0.01;
constexpr double kNoisyRecoveryFloor = 0.05;
constexpr double kHdiBoundTol = 0.05;
constexpr double kCoverageTol = 0.04;
constexpr double kEssRelTol = 0.20;

// The verdict criterion runs a 95% credible-interval test on finite noisy
// data, so it has an irreducible ~5% false-failure rate per seed. The seeds
// are pinned to known-good values; they are data seeds, not tuning knobs,
// and any change here must be justified against fresh draws.
constexpr std::uint64_t kNoiselessSeed = 1001;
constexpr std::uint64_t kNoisySeed = 1002;
constexpr std::uint64_t kVerdictRationalSeed = 1003;
constexpr std::uint64_t kVerdictWarpedSeed = 1004;
constexpr std::uint64_t kHdiSeed = 1005;
constexpr std::uint64_t kDiagnosticsSeed = 1006;
constexpr std::uint64_t kCoverageSeedBase = 3000;

std::string g_cli_path;
int g_failures = 0;

void run_criterion(int index, const char* name, double budget_seconds,
                   const std::function<std::string()>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  try {
    detail = body();
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (detail.empty() && elapsed > budget_seconds) {
    std::ostringstream over;
    over << "runtime " << elapsed << "s exceeds the " << budget_seconds << "s budget";
    detail = over.str();
  }
  const bool pass = detail.empty();
  if (!pass) ++g_failures;
  std::printf("criterion %2d %s [%6.2fs] %s%s%s\n", index, pass ? "PASS" : "FAIL", elapsed,
              name, pass ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
}

bkf::ReducedFormParams warped_params(double noise) {
  bkf::ReducedFormParams p;
  p.beta_prior = 0.55;
  p.beta_mic = 0.40;
  p.beta_mac = 0.39;
  p.beta_int = -0.03;
  p.noise_sd = noise;
  return p;
}

bkf::McmcConfig default_mcmc(std::uint64_t seed) {
  bkf::McmcConfig mcmc;
  mcmc.seed = seed;
  return mcmc;
}

std::string check_recovery(const bkf::PosteriorSummary& fit, const double truth[4],
                           const std::function<double(int)>& tolerance) {
  std::ostringstream fail;
  for (int i = 0; i < 4; ++i) {
    const double err = std::fabs(fit.coefficients[i].mean - truth[i]);
    if (err > tolerance(i)) {
      fail << fit.coefficients[i].name << " off by " << err << " (tol " << tolerance(i)
           << "); ";
    }
  }
  return fail.str();
}

// --- criteria ---

std::string levels_encoding() {
  const bkf::ReducedFormParams params = bkf::rational_kf_params(0.0);
  const auto matrix = bkf::build_scenario_matrix(3.0, 5.0);
  const double expected[] = {6.0, 0.0, 4.0, 2.0};
  const char* rendered[] = {"6.00", "0.00", "4.00", "2.00"};

  std::ostringstream fail;
  for (int s = 0; s < 4; ++s) {
    const double updated = bkf::reduced_form_mean(params, matrix[s].baseline,
                                                  matrix[s].mic_level(),
                                                  matrix[s].mac_level());
    if (std::fabs(updated - expected[s]) > kLevelsTol) {
      fail << bkf::to_string(matrix[s].id) << " = " << updated << ", expected "
           << expected[s] << "; ";
    }
    if (bkf::format_fixed2(updated) != rendered[s]) {
      fail << bkf::to_string(matrix[s].id) << " renders as "
           << bkf::format_fixed2(updated) << ", expected " << rendered[s] << "; ";
    }
  }

  // The same plane on shock coding would give 5.2/1.2/... instead; the
  // nonzero cells landing exactly on 6/4/2 is the levels-encoding signature.
  const double shock_coded = params.beta_prior * 3.0 + params.beta_mic * 5.0 +
                             params.beta_mac * 5.0;
  if (std::fabs(shock_coded - 6.0) < kLevelsTol) {
    fail << "shock and level encodings are indistinguishable at S1; ";
  }
  return fail.str();
}

std::string filter_reduction() {
  bkf::Rng rng(2001);
  std::ostringstream fail;
  for (int i = 0; i < 1000; ++i) {
    const bkf::StateEstimate prior{rng.uniform(-10.0, 10.0), rng.uniform(0.0, 5.0)};
    const bkf::SignalVector signals{rng.uniform(-15.0, 15.0), rng.uniform(-15.0, 15.0)};
    const bkf::NoiseSpec noise{rng.uniform(0.1, 5.0), rng.uniform(0.1, 5.0), 0.0};
    bkf::BehavioralParams params;
    params.alpha = 1.0;
    params.noise = noise;

    const bkf::StateEstimate classical = bkf::standard_update(prior, signals, noise);
    const bkf::StateEstimate behavioral = bkf::behavioral_update(prior, signals, params);
    if (std::fabs(classical.mean - behavioral.mean) > kReductionTol ||
        std::fabs(classical.variance - behavioral.variance) > kReductionTol) {
      fail << "case " << i << ": mean gap " << std::fabs(classical.mean - behavioral.mean)
           << ", variance gap " << std::fabs(classical.variance - behavioral.variance);
      break;
    }
  }
  return fail.str();
}

std::string gain_identity() {
  bkf::Rng rng(2002);
  std::ostringstream fail;
  for (int i = 0; i < 1000; ++i) {
    const double p = rng.uniform(0.01, 5.0);
    const bkf::NoiseSpec noise{rng.uniform(0.1, 3.0), rng.uniform(0.1, 3.0),
                               rng.uniform(-0.95, 0.95)};
    const bkf::Matrix2 cov = bkf::subjective_covariance(noise);
    const double s00 = p + cov.m00;
    const double s01 = p + cov.m01;
    const double s11 = p + cov.m11;
    const bkf::GainVector g = bkf::gain(p, noise);
    const double r0 = g.mic * s00 + g.mac * s01 - p;
    const double r1 = g.mic * s01 + g.mac * s11 - p;
    if (std::fabs(r0) > kGainIdentityTol || std::fabs(r1) > kGainIdentityTol) {
      fail << "case " << i << ": residuals " << r0 << ", " << r1;
      break;
    }
  }
  return fail.str();
}

std::string noiseless_recovery() {
  const auto records = support::make_records(bkf::rational_kf_params(0.0), 30,
                                             kNoiselessSeed);
  const bkf::DesignMatrix design = bkf::build_design(records);
  const bkf::PosteriorSummary fit = bkf::gibbs_fit(design, {}, default_mcmc(kNoiselessSeed));

  const double truth[] = {0.4, 0.4, 0.2, 0.0};
  std::string fail =
      check_recovery(fit, truth, [](int) { return kNoiselessRecoveryTol; });

  const oracle::OlsFit reference = oracle::ols(design.rows, design.response);
  for (int i = 0; i < 4; ++i) {
    const double gap = std::fabs(fit.coefficients[i].mean - reference.beta[i]);
    if (gap > 2.0 * fit.coefficients[i].sd) {
      std::ostringstream s;
      s << fit.coefficients[i].name << " is " << gap
        << " from the least-squares solution (2 sd = " << 2.0 * fit.coefficients[i].sd
        << "); ";
      fail += s.str();
    }
  }
  return fail;
}

std::string noisy_recovery() {
  const auto records = support::make_records(warped_params(0.3), 30, kNoisySeed);
  const bkf::DesignMatrix design = bkf::build_design(records);
  const bkf::PosteriorSummary fit = bkf::gibbs_fit(design, {}, default_mcmc(kNoisySeed));

  const double truth[] = {0.55, 0.40, 0.39, -0.03};
  return check_recovery(fit, truth, [&](int i) {
    return std::max(kNoisyRecoveryFloor, 3.0 * fit.coefficients[i].sd);
  });
}

std::string verdict_soundness() {
  std::ostringstream fail;

  const auto rational_records =
      support::make_records(bkf::rational_kf_params(0.1), 30, kVerdictRationalSeed);
  const bkf::PosteriorSummary rational_fit = bkf::gibbs_fit(
      bkf::build_design(rational_records), {}, default_mcmc(kVerdictRationalSeed));
  const bkf::RationalityCheck good = bkf::check_rationality(rational_fit);
  if (!good.rational()) {
    fail << "rational generator judged irrational (sum HDI [" << good.sum_hdi.lo << ", "
         << good.sum_hdi.hi << "], interaction HDI [" << good.interaction_hdi.lo << ", "
         << good.interaction_hdi.hi << "]); ";
  }

  const auto warped_records =
      support::make_records(warped_params(0.1), 30, kVerdictWarpedSeed);
  const bkf::DesignMatrix warped_design = bkf::build_design(warped_records);

  // Detectability first: if least squares cannot resolve the interaction at
  // this sample size, a verdict failure would prove nothing.
  const oracle::OlsFit reference = oracle::ols(warped_design.rows, warped_design.response);
  if (std::fabs(reference.beta[3]) < 4.0 * reference.se[3]) {
    fail << "interaction undetectable by the closed-form oracle (|beta|/se = "
         << std::fabs(reference.beta[3]) / reference.se[3] << "); ";
  }

  const bkf::PosteriorSummary warped_fit =
      bkf::gibbs_fit(warped_design, {}, default_mcmc(kVerdictWarpedSeed));
  const bkf::RationalityCheck bad = bkf::check_rationality(warped_fit);
  if (bad.zero_interaction) {
    fail << "interacting generator passed the zero-interaction test (HDI ["
         << bad.interaction_hdi.lo << ", " << bad.interaction_hdi.hi << "]); ";
  }
  return fail.str();
}

std::string hdi_calibration() {
  std::ostringstream fail;

  bkf::Rng rng(kHdiSeed);
  std::vector<double> draws(100000);
  for (double& x : draws) x = rng.normal();
  const bkf::Interval i = bkf::hdi(draws);
  if (std::fabs(i.lo + 1.96) > kHdiBoundTol || std::fabs(i.hi - 1.96) > kHdiBoundTol) {
    fail << "standard-normal HDI [" << i.lo << ", " << i.hi << "] vs [-1.96, 1.96]; ";
  }

  // Coverage: across fresh datasets, the per-coefficient 95% HDI should
  // contain the generating value about 95% of the time.
  bkf::McmcConfig light;
  light.chains = 1;
  light.iterations = 1200;
  light.burn_in = 200;

  int covered = 0;
  int total = 0;
  const double truth[] = {0.55, 0.40, 0.39, -0.03};
  for (int rep = 0; rep < 200; ++rep) {
    const auto records =
        support::make_records(warped_params(0.3), 30, kCoverageSeedBase + rep);
    light.seed = kCoverageSeedBase + rep;
    const bkf::PosteriorSummary fit =
        bkf::gibbs_fit(bkf::build_design(records), {}, light);
    for (int i2 = 0; i2 < 4; ++i2) {
      covered += fit.coefficients[i2].hdi95.contains(truth[i2]) ? 1 : 0;
      ++total;
    }
  }
  const double coverage = static_cast<double>(covered) / static_cast<double>(total);
  if (std::fabs(coverage - 0.95) > kCoverageTol) {
    fail << "coverage " << coverage << " outside 0.95 +/- " << kCoverageTol << "; ";
  }
  return fail.str();
}

std::string diagnostics_sanity() {
  std::ostringstream fail;

  std::vector<std::vector<double>> chains;
  for (int c = 0; c < 4; ++c) {
    bkf::Rng rng(bkf::derive_seed(kDiagnosticsSeed, {static_cast<std::uint64_t>(c)}));
    std::vector<double> chain(1000);
    for (double& x : chain) x = rng.normal();
    chains.push_back(std::move(chain));
  }

  const double r = bkf::split_r_hat(chains);
  if (r < 0.99 || r > 1.01) {
    fail << "iid R-hat " << r << " outside [0.99, 1.01]; ";
  }

  const std::vector<double> low(100, 1.0);
  const std::vector<double> high(100, 2.0);
  const double divergent = bkf::split_r_hat({low, high});
  if (!(divergent > 1.1)) {
    fail << "divergent constant chains R-hat " << divergent << " not > 1.1; ";
  }

  const double ess = bkf::effective_sample_size(chains);
  const double expected = 4000.0;
  if (std::fabs(ess - expected) > kEssRelTol * expected) {
    fail << "white-noise ESS " << ess << " not within 20% of " << expected << "; ";
  }
  return fail.str();
}

std::map<std::string, std::string> snapshot_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      files[fs::relative(entry.path(), root).string()] =
          support::read_file(entry.path());
    }
  }
  return files;
}

std::string pipeline_determinism() {
  if (g_cli_path.empty()) {
    return "command-line binary path not supplied as argv[1]";
  }

  support::TempDir dir;
  std::ostringstream fail;
  const fs::path out_a = dir.path / "a";
  const fs::path out_b = dir.path / "b";
  for (const fs::path& out : {out_a, out_b}) {
    const std::string cmd = "\"" + g_cli_path + "\" verify --out \"" + out.string() +
                            "\" >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    const int code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    if (code != 0) {
      fail << "verify exited with " << code << "; ";
      return fail.str();
    }
  }

  const auto a = snapshot_tree(out_a);
  const auto b = snapshot_tree(out_b);
  if (a.empty()) fail << "verify produced no artifacts; ";
  if (a.size() != b.size()) {
    fail << "artifact sets differ in size (" << a.size() << " vs " << b.size() << "); ";
  }
  for (const auto& [rel, content] : a) {
    const auto it = b.find(rel);
    if (it == b.end()) {
      fail << rel << " missing from the second run; ";
    } else if (it->second != content) {
      fail << rel << " differs between runs; ";
    }
  }
  return fail.str();
}

std::string plan_arithmetic() {
  const bkf::TrialPlan plan = bkf::default_plan({"model-a", "model-b", "model-c"});
  if (plan.total_trials() != 720) {
    std::ostringstream fail;
    fail << "3-model default plan enumerates " << plan.total_trials()
         << " trials, expected 720";
    return fail.str();
  }
  return "";
}

std::string parser_robustness() {
  const bkf::ScenarioSpec scenario = bkf::build_scenario_matrix(3.0, 5.0)[0];
  const bkf::Persona persona = bkf::default_persona(bkf::PersonaKind::Household);

  std::ostringstream fail;
  const auto cases = corpus::wrapper_cases();
  if (cases.size() < 20) {
    fail << "corpus has only " << cases.size() << " wrapper cases; ";
  }
  bool saw_flagged = false;
  for (const corpus::WrapperCase& c : cases) {
    try {
      const bkf::TrialRecord record = bkf::parse_response(c.raw, scenario, persona);
      if (std::fabs(record.updated_expectation - c.updated) > 1e-9) {
        fail << c.name << ": updated " << record.updated_expectation << " vs " << c.updated
             << "; ";
      }
      if (record.inconsistent_magnitude != c.flagged) {
        fail << c.name << ": flag mismatch; ";
      }
      saw_flagged = saw_flagged || record.inconsistent_magnitude;
    } catch (const std::exception& e) {
      fail << c.name << ": false failure (" << e.what() << "); ";
    }
  }
  if (!saw_flagged) {
    fail << "corpus never exercised the inconsistency flag; ";
  }

  for (const corpus::FailureCase& c : corpus::failure_cases()) {
    try {
      bkf::parse_response(c.raw, scenario, persona);
      fail << c.name << ": garbage input parsed; ";
    } catch (const bkf::ParseError&) {
      // expected
    }
  }
  return fail.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_path = argv[1];

  std::printf("acceptance gate: behavioral filter toolkit\n");
  run_criterion(1, "levels encoding puts the rational benchmark on 6/0/4/2", 1.0,
                levels_encoding);
  run_criterion(2, "behavioral update with alpha=1, rho=0 is the classical filter", 1.0,
                filter_reduction);
  run_criterion(3, "gain solves the innovation covariance system", 1.0, gain_identity);
  run_criterion(4, "noiseless recovery within 0.01 and the least-squares oracle", 30.0,
                noiseless_recovery);
  run_criterion(5, "noisy recovery at the calibrated operating point", 30.0,
                noisy_recovery);
  run_criterion(6, "verdict passes rational data and catches the interaction", 60.0,
                verdict_soundness);
  run_criterion(7, "hdi matches the normal table and covers at its stated rate", 300.0,
                hdi_calibration);
  run_criterion(8, "convergence diagnostics separate mixed from broken chains", 10.0,
                diagnostics_sanity);
  run_criterion(9, "verify pipeline is byte-identical across runs", 60.0,
                pipeline_determinism);
  run_criterion(10, "three-model default plan enumerates 720 trials", 1.0,
                plan_arithmetic);
  run_criterion(11, "wrapper corpus parses with zero false failures", 1.0,
                parser_robustness);

  if (g_failures == 0) {
    std::printf("acceptance: all 11 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d of 11 criteria FAILED\n", g_failures);
  return 1;
}
