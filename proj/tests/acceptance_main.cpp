#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "bco_suites/suites.hpp"

// Prints one line per acceptance criterion. Exit status is nonzero when a
// criterion fails for a reason other than a known limitation of the method.
// Arguments select criteria by number ("3 7").
int main(int argc, char** argv) {
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) {
        only.push_back(std::atoi(argv[i]));
    }
    const auto report = bco::suites::run_acceptance(only);
    bco::suites::print_report(std::cout, report);
    std::size_t passed = 0;
    for (const auto& r : report) {
        passed += r.pass ? 1 : 0;
    }
    std::cout << passed << "/" << report.size() << " criteria passed\n";
    return bco::suites::report_ok(report) ? EXIT_SUCCESS : EXIT_FAILURE;
}
