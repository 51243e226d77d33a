#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace bkf {

/// Provenance record written next to every stage's outputs: which command
/// ran, under which seed and config, consuming which inputs. Input files are
/// identified by basename and content hash; no wall-clock fields, so
/// same-seed reruns produce byte-identical manifests.
struct Manifest {
  std::string command;
  std::uint64_t seed = 0;
  nlohmann::ordered_json config_echo = nlohmann::ordered_json::object();

  struct Input {
    std::string name;  // basename, not a path
    std::string fnv1a64;
  };
  std::vector<Input> inputs;
};

/// Hashes the file and records it under its basename. Throws IoError.
void add_input(Manifest& manifest, const std::filesystem::path& path);

nlohmann::ordered_json to_json(const Manifest& manifest);

/// Writes dir/manifest.json, creating dir if needed.
void write_manifest(const Manifest& manifest, const std::filesystem::path& dir);

}  // namespace bkf
