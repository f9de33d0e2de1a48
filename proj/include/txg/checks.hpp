#pragma once

#include <string>
#include <vector>

#include "txg/game.hpp"
#include "txg/rng.hpp"

namespace txg {

enum class CheckLevel { fast, full };

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;  // empty on pass
};

// Runs every module's invariant suite at the given level. fast shrinks
// lengths to m <= 3 and cuts sample counts; full runs the sizes each
// invariant is stated at. All sampling is internally seeded, so two runs
// produce identical results.
std::vector<CheckResult> run_checks(CheckLevel level);

// Seeded game generator used by the suites: uniform offsets, labels in
// [0, 3], random accepted bits, weights normalized before construction.
// A repeated (z, r) pair keeps its first accepted bit.
TransversalGame random_game(int m, int clause_count, Rng& rng);

}  // namespace txg
