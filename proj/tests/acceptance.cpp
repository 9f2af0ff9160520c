// Runs the benchmark study at full budget over seeds 1..5 and prints one
// PASS/FAIL line per acceptance criterion.
//
// The exit status reports whether the study ran to completion, not whether
// every criterion passed; use --strict for the latter.
//   acceptance [--fast] [--strict] [--out DIR] [--report FILE]

#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gadyn/reproduce.hpp"

int main(int argc, char** argv) {
  gadyn::ReproductionOptions opt;
  bool strict = false;
  const char* report_path = nullptr;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--fast") == 0) {
      opt.fast = true;
    } else if (std::strcmp(argv[i], "--strict") == 0) {
      strict = true;
    } else if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc) {
      opt.out_dir = argv[++i];
    } else if (std::strcmp(argv[i], "--report") == 0 && i + 1 < argc) {
      report_path = argv[++i];
    } else {
      std::cerr << "usage: acceptance [--fast] [--strict] [--out DIR] [--report FILE]\n";
      return 1;
    }
  }
  opt.log = &std::cout;
  try {
    std::cout << "Runs\n";
    const auto res = gadyn::reproduce(opt);
    std::cout << '\n';
    gadyn::write_summary(std::cout, res);
    std::ostringstream verdict;
    verdict << "Property suite\n";
    for (const auto& p : res.properties) verdict << "  " << (p.pass ? "ok   " : "FAIL ") << p.name << ": " << p.detail << '\n';
    verdict << "\nAcceptance criteria\n";
    gadyn::write_criteria(verdict, res.criteria);
    std::size_t failed = 0;
    for (const auto& c : res.criteria) failed += !c.pass && !c.informative;
    verdict << "\n" << res.criteria.size() - failed << "/" << res.criteria.size() << " criteria pass\n";
    std::cout << '\n' << verdict.str();
    if (report_path) {
      std::ofstream f(report_path);
      f << verdict.str();
    }
    return strict && failed > 0 ? 1 : 0;
  } catch (const std::exception& e) {
    std::cerr << "acceptance: " << e.what() << '\n';
    return 2;
  }
}
