#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "slitkit/homology.hpp"

namespace slitkit {

// One expected homology table, transcribed verbatim from the published tables.
struct Fixture {
    std::string tag;  // source table
    ModuliIndex index;
    Coefficients coeff;
    std::vector<HomologyGroup> expected;  // by homological degree, trailing zeros trimmed
    std::string note;                     // annotations, e.g. known errata
};

const std::vector<Fixture>& paper_fixtures();

struct VerifyOptions {
    int max_h = 4;
    int threads = 1;
    CacheMode cache = CacheMode::read_only;  // verify never mutates the cache
};

struct VerifyOutcome {
    int passed = 0;
    int failed = 0;
    int skipped = 0;
    bool ok() const { return failed == 0; }
};

// Runs every fixture with h <= max_h, printing one PASS/FAIL/SKIP line per fixture.
VerifyOutcome verify_paper_tables(const VerifyOptions& opts, std::ostream& out);

} // namespace slitkit
