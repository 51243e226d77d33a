#include "bkf/campaign.hpp"

#include <atomic>
#include <ctime>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>
#include <utility>
#include <variant>

#include "json.hpp"

#include "bkf/errors.hpp"
#include "bkf/response_parser.hpp"
#include "bkf/rng.hpp"
#include "bkf/trial_record.hpp"

namespace bkf {

namespace {

std::string coord_key(const std::string& model_id, PersonaKind persona, ScenarioId scenario,
                      int trial) {
  return model_id + '|' + to_string(persona) + '|' + to_string(scenario) + '|' +
         std::to_string(trial);
}

/// Repairs the damage an interrupted append can leave: a trailing fragment
/// with no newline is dropped, a complete final record missing its newline
/// gets one. Mid-file corruption is left alone so the reader can name the
/// offending line.
void repair_torn_tail(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return;
  std::string line;
  std::uintmax_t good_end = 0;
  bool needs_newline = false;
  while (std::getline(in, line)) {
    const bool at_eof = in.eof();  // no terminating newline on this line
    bool ok = false;
    try {
      (void)trial_from_json(nlohmann::json::parse(line));
      ok = true;
    } catch (const std::exception&) {
    }
    if (ok) {
      good_end += line.size() + (at_eof ? 0 : 1);
      needs_newline = at_eof;
    } else if (at_eof) {
      break;
    } else {
      return;
    }
  }
  in.close();
  std::error_code ec;
  const std::uintmax_t size = std::filesystem::file_size(path, ec);
  if (!ec && good_end < size) std::filesystem::resize_file(path, good_end, ec);
  if (needs_newline) {
    std::ofstream app(path, std::ios::binary | std::ios::app);
    app << '\n';
  }
}

struct Job {
  std::size_t model = 0;
  std::size_t persona = 0;
  std::size_t scenario = 0;
  int trial = 0;
};

}  // namespace

std::string utc_timestamp_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

CampaignSummary run_campaign(const TrialPlan& plan, const AgentBackend& backend,
                             const std::filesystem::path& output_path, const LogSink& log,
                             const TimestampFn& timestamp) {
  validate(plan);
  const auto* synthetic = std::get_if<SyntheticBackend>(&backend);
  if (synthetic != nullptr) validate(synthetic->params);

  const TimestampFn stamp =
      timestamp ? timestamp : (synthetic != nullptr ? TimestampFn(epoch_timestamp)
                                                    : TimestampFn(utc_timestamp_now));

  CampaignSummary summary;
  summary.planned = plan.total_trials();

  std::unordered_map<std::string, bool> existing;  // coordinate key -> flagged
  if (std::filesystem::exists(output_path)) {
    repair_torn_tail(output_path);
    for (const TrialRecord& r : read_trials_jsonl(output_path)) {
      existing[coord_key(r.model_id, r.persona, r.scenario, r.trial_index)] =
          r.inconsistent_magnitude;
    }
  } else if (output_path.has_parent_path()) {
    std::filesystem::create_directories(output_path.parent_path());
  }

  std::vector<Job> pending;
  pending.reserve(summary.planned);
  for (std::size_t mi = 0; mi < plan.model_ids.size(); ++mi)
    for (std::size_t pi = 0; pi < plan.personas.size(); ++pi)
      for (std::size_t si = 0; si < plan.scenarios.size(); ++si)
        for (int ti = 0; ti < plan.trials_per_cell; ++ti) {
          const auto it = existing.find(coord_key(plan.model_ids[mi], plan.personas[pi].kind,
                                                  plan.scenarios[si].id, ti));
          if (it != existing.end()) {
            ++summary.skipped;
            ++summary.completed;
            if (it->second) ++summary.flagged;
          } else {
            pending.push_back({mi, pi, si, ti});
          }
        }

  // For live runs, fail configuration and auth problems before the output
  // file is touched, so an aborted start leaves no partial file behind.
  EndpointConfig endpoint;
  if (synthetic == nullptr) {
    endpoint = std::get<LiveBackend>(backend).endpoint;
    endpoint.temperature = plan.temperature;
    EndpointConfig probe = endpoint;
    probe.model_id = plan.model_ids.front();
    validate(probe);
    if (!pending.empty()) (void)resolve_api_key(probe);
  }

  std::ofstream out(output_path, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot open " + output_path.string() + " for append");

  std::mutex log_mutex;
  const LogSink serialized = log ? LogSink([&](const nlohmann::ordered_json& event) {
    const std::lock_guard<std::mutex> guard(log_mutex);
    log(event);
  })
                                 : LogSink{};

  // Runs on the caller's thread for synthetic backends and under io_mutex
  // for live ones, so counters and the output stream need no extra guard.
  const auto record_result = [&](const Job& job, const std::string& raw) {
    const Persona& persona = plan.personas[job.persona];
    const ScenarioSpec& scenario = plan.scenarios[job.scenario];
    const std::string& model_id = plan.model_ids[job.model];
    TrialRecord record;
    try {
      record = parse_response(raw, scenario, persona);
    } catch (const ParseError& e) {
      ++summary.parse_failed;
      if (serialized) {
        nlohmann::ordered_json event;
        event["event"] = "parse_failure";
        event["model"] = model_id;
        event["persona"] = to_string(persona.kind);
        event["scenario"] = to_string(scenario.id);
        event["trial"] = job.trial;
        event["error"] = e.what();
        event["raw"] = raw;
        serialized(event);
      }
      return;
    }
    record.model_id = model_id;
    record.trial_index = job.trial;
    record.timestamp = stamp();
    append_trial_line(out, record);
    out.flush();
    if (!out) throw IoError("write to " + output_path.string() + " failed");
    ++summary.completed;
    if (record.inconsistent_magnitude) {
      ++summary.flagged;
      if (serialized) {
        nlohmann::ordered_json event;
        event["event"] = "inconsistent_magnitude";
        event["model"] = model_id;
        event["persona"] = to_string(persona.kind);
        event["scenario"] = to_string(scenario.id);
        event["trial"] = job.trial;
        event["reported"] = record.change_magnitude;
        event["derived"] = record.updated_expectation - record.prior;
        serialized(event);
      }
    }
  };

  if (synthetic != nullptr) {
    for (const Job& job : pending) {
      const std::string& model_id = plan.model_ids[job.model];
      Rng rng(derive_seed(plan.seed, {fnv1a64(model_id.data(), model_id.size()), job.persona,
                                      job.scenario, static_cast<std::uint64_t>(job.trial)}));
      record_result(job, synthetic_response_json(synthetic->params, plan.scenarios[job.scenario],
                                                 rng));
    }
    return summary;
  }

  std::mutex io_mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first_error;

  const auto worker = [&] {
    for (;;) {
      if (stop.load(std::memory_order_relaxed)) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= pending.size()) return;
      const Job& job = pending[i];
      try {
        EndpointConfig trial_endpoint = endpoint;
        trial_endpoint.model_id = plan.model_ids[job.model];
        const std::string raw =
            live_respond(trial_endpoint,
                         render_prompt(plan.personas[job.persona], plan.scenarios[job.scenario]),
                         serialized);
        const std::lock_guard<std::mutex> guard(io_mutex);
        record_result(job, raw);
      } catch (...) {
        const std::lock_guard<std::mutex> guard(io_mutex);
        if (!first_error) first_error = std::current_exception();
        stop.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  const std::size_t n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(endpoint.max_parallel), pending.size());
  std::vector<std::thread> threads;
  threads.reserve(n_workers);
  for (std::size_t i = 0; i < n_workers; ++i) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return summary;
}

const char* to_string(ShockSampler sampler) {
  return sampler == ShockSampler::GridS1toS4 ? "grid" : "uniform";
}

ShockSampler sampler_from_string(const std::string& s) {
  if (s == "grid") return ShockSampler::GridS1toS4;
  if (s == "uniform") return ShockSampler::UniformContinuous;
  throw InvalidParameter("unknown shock sampler '" + s + "' (expected grid or uniform)");
}

std::size_t gen_finetune_dataset(const FinetuneOptions& options, std::ostream& out) {
  validate(options.params);
  if (options.n == 0) throw InvalidParameter("fine-tune dataset size must be positive");
  if (options.sampler == ShockSampler::UniformContinuous &&
      !(options.uniform_lo < options.uniform_hi))
    throw InvalidParameter("uniform shock range is empty");

  const std::vector<Persona> personas =
      options.personas.empty() ? default_personas() : options.personas;
  for (const Persona& p : personas) validate(p);
  const std::vector<ScenarioSpec> matrix = build_scenario_matrix(options.baseline, options.delta);

  Rng rng(derive_seed(options.seed, {fnv1a64("finetune", 8)}));
  for (std::size_t i = 0; i < options.n; ++i) {
    PromptBundle bundle;
    std::string completion;
    if (options.sampler == ShockSampler::GridS1toS4) {
      const std::size_t combo = i % (personas.size() * matrix.size());
      const Persona& persona = personas[combo / matrix.size()];
      const ScenarioSpec& scenario = matrix[combo % matrix.size()];
      bundle = render_prompt(persona, scenario);
      completion = synthetic_response_json(options.params, scenario, rng);
    } else {
      const Persona& persona = personas[i % personas.size()];
      const double shock_mic = rng.uniform(options.uniform_lo, options.uniform_hi);
      const double shock_mac = rng.uniform(options.uniform_lo, options.uniform_hi);
      bundle = render_prompt(persona, options.baseline, shock_mic, shock_mac);
      completion =
          synthetic_response_json(options.params, options.baseline, shock_mic, shock_mac, rng);
    }
    nlohmann::ordered_json line;
    line["prompt_system"] = bundle.system;
    line["prompt_user"] = bundle.user;
    line["completion"] = completion;
    out << line.dump() << '\n';
  }
  out.flush();
  if (!out) throw IoError("failed writing fine-tune dataset");
  return options.n;
}

}  // namespace bkf
