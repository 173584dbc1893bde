#include <iostream>
#include <string>

#include "heatlab/acceptance.hpp"

// Arguments select criteria by group (spectral, evolve, kernel, modes) or id (C7).
int main(int argc, char** argv) {
  heatlab::AcceptanceOptions options;
  for (int i = 1; i < argc; ++i) options.only.emplace_back(argv[i]);
  const auto summary = heatlab::acceptance_suite(options, &std::cout);
  std::size_t passed = 0;
  for (const auto& r : summary.results) passed += r.pass;
  std::cout << passed << "/" << summary.results.size() << " criteria passed\n";
  return summary.all_pass() && !summary.results.empty() ? 0 : 1;
}
