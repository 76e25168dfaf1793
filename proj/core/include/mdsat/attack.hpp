#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdsat/cnf.hpp"
#include "mdsat/md4.hpp"
#include "mdsat/relaxation.hpp"
#include "mdsat/solver_adapter.hpp"

namespace mdsat {

struct AttackResult {
    Digest chi;
    SwitchVector lambda;
    SolveStatus verdict = SolveStatus::Unknown;
    MessageBlock preimage; // valid when verdict == Sat
    bool verified = false;
    double wall_seconds = 0.0;
    std::string solver_id;

    std::string to_json() const;
};

struct CampaignReport {
    int sample_size = 0;
    std::uint64_t seed = 0;
    std::string lambda;
    std::vector<AttackResult> results;

    int sat_count() const;
    int unsat_count() const;
    int unknown_count() const;
    // Average/max wall time over decided (SAT or UNSAT) instances.
    double avg_decided_seconds() const;
    double max_decided_seconds() const;
    double avg_all_seconds() const;

    std::string to_json() const;
    std::string summary_table() const;
};

// Substitutes chi into the gated template, solves under the switch-variable
// assumptions for lambda, and on SAT extracts the 512-bit preimage and
// re-verifies it through the reference implementation (digest equality and
// chaining value == family constant at every active step). A verification
// failure throws std::logic_error; it is never reported as success.
AttackResult run_attack(const TemplateCnf& gated_template,
                        const ConstraintFamily& family, const Digest& chi,
                        const SwitchVector& lambda,
                        const AdapterConfig& adapter, double time_limit);

// Solves the preimage problem for `samples` uniformly random hash values
// drawn from the seeded generator, each under `per_instance_limit` seconds,
// using up to `workers` concurrent solver instances.
CampaignReport run_campaign(const TemplateCnf& gated_template,
                            const ConstraintFamily& family,
                            const SwitchVector& lambda, int samples,
                            std::uint64_t seed, const AdapterConfig& adapter,
                            double per_instance_limit, int workers = 1);

} // namespace mdsat
