// Acceptance suite: runs every criterion at its stated tolerance and prints one
// pass/fail line per criterion. `delidx verify` drives the same implementation.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <iostream>

#include "delidx/acceptance.hpp"

TEST_CASE("acceptance criteria") {
    delidx::acceptance::Config cfg;
    cfg.seed = 12345;
    cfg.trials = 100;
    const auto results = delidx::acceptance::run(cfg);
    delidx::acceptance::print_table(results, std::cout);
    REQUIRE(results.size() == 12);
    for (const auto& r : results) {
        INFO(r.name, ": ", r.detail);
        CHECK(r.pass);
    }
}
