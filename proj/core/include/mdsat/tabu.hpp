#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mdsat/cnf.hpp"
#include "mdsat/relaxation.hpp"
#include "mdsat/solver_adapter.hpp"

namespace mdsat {

struct PointEval {
    enum class Status { Scored, ScreenedOut };
    Status status = Status::Scored;
    int mu = 0;
};

// Black-box objective over {0,1}^Q; screened-out points carry no score.
using Objective = std::function<PointEval(const SwitchVector&)>;

struct SearchConfig {
    std::optional<SwitchVector> start; // nullopt: seeded random point
    int q = 31;
    double total_time_limit = 0.0; // seconds, <= 0: unlimited
    std::uint64_t seed = 0;
    int shortlist_lo = 256;
    int shortlist_hi = 320;
    std::ostream* log = nullptr; // line-delimited JSON evaluation log
};

struct RecordPoint {
    SwitchVector lambda;
    int mu = 0;
    double elapsed_seconds = 0.0;
};

struct SearchResult {
    SwitchVector lambda_best;
    int mu_best = -1;
    std::vector<RecordPoint> records;
    std::uint64_t evaluated = 0;
    std::uint64_t screened_out = 0;
};

// All Q points at Hamming distance 1, ordered by ascending flipped bit.
std::vector<SwitchVector> neighborhood(const SwitchVector& lambda);

// Tabu search over Hamming-radius-1 neighborhoods maximizing the objective.
// No point is evaluated twice; fully-explored points become ineligible as
// centers; recentering picks the scored point with mu closest to mu_best
// (ties: most recently visited). Stops on the time limit or exhaustion.
SearchResult run_search(const Objective& objective, const SearchConfig& config);

// Record points whose mu lies in [lo, hi], in discovery order.
std::vector<SwitchVector> shortlist(const std::vector<RecordPoint>& records,
                                    int lo, int hi);

// The attack objective: UP conflict or a quick UNSAT proof screens the point
// out; otherwise the point is scored with mu. cnf must contain the gated
// constraint clauses and the substituted hash value.
Objective make_relaxation_objective(const TemplateCnf& cnf,
                                    AdapterConfig adapter,
                                    double screen_time_limit);

} // namespace mdsat
