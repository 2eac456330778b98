#include <iostream>

#include "shtukalab/selftest.hpp"

int main() {
    auto results = shtukalab::run_acceptance(1, /*fail_fast=*/false, &std::cout);
    std::size_t passed = 0;
    for (const auto& r : results)
        if (r.pass) ++passed;
    std::cout << passed << "/" << results.size() << " acceptance criteria passed\n";
    return passed == results.size() ? 0 : 1;
}
