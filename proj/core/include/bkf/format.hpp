#pragma once

#include <string>

namespace bkf {

/// Two-decimal display rounding, half-even on the scaled value. All table
/// renderers go through this so text and CSV agree byte for byte.
std::string format_fixed2(double x);

/// Percent rendering for prompts: one decimal, optional explicit '+'.
/// format_percent(5.0, true) == "+5.0%", format_percent(3.0, false) == "3.0%".
std::string format_percent(double x, bool force_sign);

/// Lowercase hex of an FNV-1a 64-bit hash of a file's bytes. Throws IoError.
std::string hash_file_fnv1a64(const std::string& path);

}  // namespace bkf
