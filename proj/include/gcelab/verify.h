#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gcelab {

struct PropertyResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double measure = 0.0;
  double threshold = 0.0;
  bool at_least = false;  // passed means measure >= threshold rather than <=
  std::uint64_t seed = 0;
  std::string error;  // exception message when the check threw
};

/// "disk", "blaschke", "gce", "canonical" or "all".
const std::vector<std::string>& verify_suites();

/// Runs the property checks of a suite. Each property draws from its own
/// generator seeded from (seed, property name), so results do not depend on
/// which other properties run.
std::vector<PropertyResult> run_verify(const std::string& suite, std::uint64_t seed);

std::uint64_t derive_seed(std::uint64_t root, const std::string& name);

}  // namespace gcelab
