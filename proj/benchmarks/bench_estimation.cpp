#include <benchmark/benchmark.h>

#include <vector>

#include "bkf/agents.hpp"
#include "bkf/campaign.hpp"
#include "bkf/design_matrix.hpp"
#include "bkf/gibbs.hpp"
#include "bkf/hdi.hpp"
#include "bkf/plan.hpp"
#include "bkf/response_parser.hpp"
#include "bkf/rng.hpp"
#include "bkf/trial_record.hpp"

namespace {

bkf::DesignMatrix benchmark_design() {
  const bkf::TrialPlan plan = bkf::default_plan({"rational-kf"}, 3.0, 5.0, 42);
  const bkf::ReducedFormParams params = bkf::rational_kf_params(0.1);
  bkf::Rng rng(42);
  std::vector<bkf::TrialRecord> records;
  for (const bkf::Persona& persona : plan.personas)
    for (const bkf::ScenarioSpec& scenario : plan.scenarios)
      for (int t = 0; t < plan.trials_per_cell; ++t) {
        bkf::TrialRecord r =
            bkf::parse_response(bkf::synthetic_response_json(params, scenario, rng), scenario,
                                persona);
        r.model_id = "rational-kf";
        r.trial_index = t;
        records.push_back(std::move(r));
      }
  return bkf::build_design(records);
}

void BM_gibbs_fit(benchmark::State& state) {
  const bkf::DesignMatrix design = benchmark_design();
  bkf::McmcConfig mcmc;
  mcmc.chains = 1;
  mcmc.iterations = static_cast<int>(state.range(0));
  mcmc.burn_in = mcmc.iterations / 5;
  for (auto _ : state) benchmark::DoNotOptimize(bkf::gibbs_fit(design, {}, mcmc));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_gibbs_fit)->Arg(1000)->Arg(5000);

void BM_parse_response(benchmark::State& state) {
  const bkf::ScenarioSpec scenario = bkf::build_scenario_matrix(3.0, 5.0).front();
  const bkf::Persona persona = bkf::default_persona(bkf::PersonaKind::Household);
  const std::string raw =
      "Sure, here is my updated view.\n```json\n{\"Prior_Expectation\": \"3.0%\", "
      "\"Updated_Expectation\": \"6.00%\", \"Change_Magnitude\": 3.00, "
      "\"Rationale\": \"Both signals point up.\"}\n```\nLet me know if useful.";
  for (auto _ : state) benchmark::DoNotOptimize(bkf::parse_response(raw, scenario, persona));
}
BENCHMARK(BM_parse_response);

void BM_hdi(benchmark::State& state) {
  bkf::Rng rng(42);
  std::vector<double> draws(static_cast<std::size_t>(state.range(0)));
  for (double& d : draws) d = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(bkf::hdi(draws, 0.95));
}
BENCHMARK(BM_hdi)->Arg(16000);

}  // namespace
