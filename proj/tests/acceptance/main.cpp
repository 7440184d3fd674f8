#include <iostream>
#include <string>

#include "acceptance.hpp"

// Usage: acceptance [criterion...]; exits nonzero when a selected criterion fails.
int main(int argc, char** argv) {
  mapgame::acceptance::SuiteOptions options;
  options.log = &std::cerr;
  for (int i = 1; i < argc; ++i) options.only.push_back(argv[i]);
  for (const auto& name : options.only) {
    bool known = false;
    for (const auto& n : mapgame::acceptance::criterion_names()) known |= n == name;
    if (!known) {
      std::cerr << "unknown criterion '" << name << "'\n";
      return 2;
    }
  }
  auto results = mapgame::acceptance::run(options, std::cout);
  int failed = 0;
  for (const auto& r : results) failed += !r.pass;
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
