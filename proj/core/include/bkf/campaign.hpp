#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "bkf/agents.hpp"
#include "bkf/chat_client.hpp"
#include "bkf/plan.hpp"

namespace bkf {

struct CampaignSummary {
  std::size_t planned = 0;
  std::size_t completed = 0;     // durable records after the run (resumed + new)
  std::size_t parse_failed = 0;  // failures in this run; logged, never re-rolled
  std::size_t flagged = 0;       // records carrying the inconsistent-magnitude flag
  std::size_t skipped = 0;       // coordinates already present before this run
};

/// ISO-8601 stamp source. Synthetic runs default to a fixed epoch stamp so
/// same-seed campaigns are byte-identical; live runs default to wall clock.
using TimestampFn = std::function<std::string()>;

std::string utc_timestamp_now();
inline std::string epoch_timestamp() { return "1970-01-01T00:00:00Z"; }

/// Executes every (model, persona, scenario, trial) cell of the plan and
/// appends JSONL records to output_path.
///
/// - Synthetic backends run single-threaded in deterministic enumeration
///   order; each trial draws from an RNG stream derived from (plan.seed,
///   coordinates), so resume does not perturb remaining trials.
/// - Live backends run with at most endpoint.max_parallel concurrent
///   requests; the appender is serialized so lines never interleave.
/// - Resume: coordinates already present in the output file are skipped.
///   A torn trailing line from an interrupted run is truncated first.
/// - Parse failures are counted and logged, not re-rolled; I/O failures
///   abort with the last durable line intact.
CampaignSummary run_campaign(const TrialPlan& plan, const AgentBackend& backend,
                             const std::filesystem::path& output_path, const LogSink& log = {},
                             const TimestampFn& timestamp = {});

// --- rational-benchmark fine-tuning data ---

enum class ShockSampler { GridS1toS4, UniformContinuous };

const char* to_string(ShockSampler sampler);
ShockSampler sampler_from_string(const std::string& s);

struct FinetuneOptions {
  std::size_t n = 1000;
  ShockSampler sampler = ShockSampler::GridS1toS4;
  double uniform_lo = -10.0;  // shock range for UniformContinuous
  double uniform_hi = 10.0;
  double baseline = 3.0;
  double delta = 5.0;
  std::vector<Persona> personas;  // empty -> both defaults
  ReducedFormParams params = rational_kf_params(0.0);
  std::uint64_t seed = 0;
};

/// Emits n JSONL lines {prompt_system, prompt_user, completion}; the
/// completion is the generator's response in the constrained JSON schema.
/// Deterministic given seed. Returns the number of lines written.
std::size_t gen_finetune_dataset(const FinetuneOptions& options, std::ostream& out);

}  // namespace bkf
