#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mdsat/cnf.hpp"
#include "mdsat/solver.hpp"

namespace mdsat {

struct SolverVerdict {
    SolveStatus status = SolveStatus::Unknown;
    std::vector<bool> model; // indexed by variable, entry 0 unused
    double wall_seconds = 0.0;
    std::string solver_id;
};

// Raised on backend failures (crash, unparsable output); distinct from a
// timeout, which is reported as Unknown.
struct AdapterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SolverBackend { Embedded, Subprocess };

struct AdapterConfig {
    SolverBackend backend = SolverBackend::Embedded;
    std::string solver_path; // required for Subprocess
};

// One in-flight solve per adapter instance; separate instances may run
// concurrently against the same immutable CNF.
class SolverAdapter {
public:
    explicit SolverAdapter(AdapterConfig config = {});

    // Every Sat verdict is checked against the clause database (including
    // the assumptions) before being returned. time_limit <= 0: no limit.
    SolverVerdict solve(const Cnf& cnf, const std::vector<Lit>& assumptions,
                        double time_limit_seconds);

private:
    AdapterConfig config_;
    SolverVerdict solve_subprocess(const Cnf& cnf,
                                   const std::vector<Lit>& assumptions,
                                   double time_limit_seconds);
};

// DIMACS text with the assumptions appended as unit clauses.
std::string export_dimacs(const Cnf& cnf, const std::vector<Lit>& assumptions);

// Parses conventional SAT-competition output ("s SATISFIABLE" plus "v"
// value lines, or "s UNSATISFIABLE"). Throws AdapterError when malformed.
SolverVerdict parse_solver_output(const std::string& text);

// Independent clause walker; true iff every clause is satisfied.
bool check_model(const Cnf& cnf, const std::vector<Lit>& assumptions,
                 const std::vector<bool>& model);

} // namespace mdsat
