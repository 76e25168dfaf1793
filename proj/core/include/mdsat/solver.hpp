#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mdsat/cnf.hpp"

namespace mdsat {

enum class SolveStatus { Sat, Unsat, Unknown };

struct SolveResult {
    SolveStatus status = SolveStatus::Unknown;
    std::vector<bool> model; // indexed by variable, entry 0 unused
    double wall_seconds = 0.0;
    std::uint64_t conflicts = 0;
};

// Conflict-driven clause-learning solver: two-watched-literal propagation,
// VSIDS decisions with phase saving, first-UIP learning with clause
// minimization, LBD-driven restarts and learnt clause deletion.
class CdclSolver {
public:
    explicit CdclSolver(const Cnf& cnf);
    ~CdclSolver();
    CdclSolver(const CdclSolver&) = delete;
    CdclSolver& operator=(const CdclSolver&) = delete;

    // Branch on these variables while any of them is unassigned; remaining
    // variables are only picked once the preferred set is exhausted, so
    // completeness is unaffected. Useful on circuit encodings where the
    // preferred set functionally determines everything else.
    void prefer_branching(const std::vector<Lit>& vars);

    // time_limit_seconds <= 0 means no limit. Assumptions are DIMACS
    // literals; Unsat means unsatisfiable under the assumptions.
    SolveResult solve(const std::vector<Lit>& assumptions,
                      double time_limit_seconds);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace mdsat
