#include "bkf/manifest.hpp"

#include <fstream>

#include "bkf/errors.hpp"
#include "bkf/format.hpp"
#include "bkf/version.hpp"

namespace bkf {

void add_input(Manifest& manifest, const std::filesystem::path& path) {
  manifest.inputs.push_back({path.filename().string(), hash_file_fnv1a64(path.string())});
}

nlohmann::ordered_json to_json(const Manifest& manifest) {
  nlohmann::ordered_json j;
  j["tool"] = "bkf";
  j["version"] = kVersion;
  j["command"] = manifest.command;
  j["seed"] = manifest.seed;
  j["config"] = manifest.config_echo;
  j["inputs"] = nlohmann::ordered_json::array();
  for (const Manifest::Input& input : manifest.inputs) {
    nlohmann::ordered_json entry;
    entry["name"] = input.name;
    entry["fnv1a64"] = input.fnv1a64;
    j["inputs"].push_back(std::move(entry));
  }
  return j;
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = dir / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_json(manifest).dump(2) << '\n';
  if (!out) throw IoError("write to " + path.string() + " failed");
}

}  // namespace bkf
