#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdsat/cnf.hpp"

namespace mdsat {

// Selection vector over the constraint family: bit p (1-based position in
// the printed string, leftmost first) activates the constraint at step p+4.
struct SwitchVector {
    std::vector<bool> bits;

    // Accepts a 0/1 string; if expected_q >= 0 the length must match.
    // Throws std::invalid_argument otherwise.
    static SwitchVector parse(const std::string& text, int expected_q = -1);
    std::string str() const;

    int q() const { return static_cast<int>(bits.size()); }
    int popcount() const;
    std::vector<int> active_steps() const;

    bool operator==(const SwitchVector&) const = default;
};

// Fixes one step's chaining value to the constant K, gated by switch_var.
struct RelaxationConstraint {
    int index = 0;             // 1..Q
    int step = 0;              // index + 4
    std::vector<Lit> literals; // 32 literals over the step's chaining bits
    Lit switch_var = 0;
};

struct ConstraintFamily {
    std::vector<RelaxationConstraint> constraints;
    std::uint32_t constant = 0;

    int q() const { return static_cast<int>(constraints.size()); }
};

// Builds the Q = k-8 constraints over steps [5, k-4], appends the switching
// variables to tmpl.vars and the gated binary clauses (~s_j v l) to tmpl.cnf.
// Throws std::invalid_argument for k < 9 or if switch vars already exist.
ConstraintFamily install_constraint_family(TemplateCnf& tmpl,
                                           std::uint32_t constant = 0);

// Full assignment of the switching variables: +s_j for active constraints,
// -s_j for inactive ones.
std::vector<Lit> lambda_to_assumptions(const SwitchVector& lambda,
                                       const VariableMap& vars);

} // namespace mdsat
