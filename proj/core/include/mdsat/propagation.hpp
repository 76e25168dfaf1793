#pragma once

#include <vector>

#include "mdsat/cnf.hpp"
#include "mdsat/relaxation.hpp"

namespace mdsat {

struct PropagationResult {
    std::vector<Lit> forced; // derivation order, assumptions included
    bool conflict = false;
};

// Two-watched-literal unit propagation over an immutable clause database.
// One instance per thread; closure() may be called repeatedly.
class UnitPropagator {
public:
    explicit UnitPropagator(const Cnf& cnf);

    // Fixpoint of UP from the CNF's unit clauses plus the assumptions.
    // Throws std::invalid_argument if the assumptions contain a
    // complementary pair.
    PropagationResult closure(const std::vector<Lit>& assumptions);

private:
    int num_vars_;
    std::vector<Lit> units_;               // unit clauses of the input CNF
    std::vector<std::int32_t> arena_;      // flat literal storage
    std::vector<std::pair<int, int>> clauses_; // (offset, size), size >= 2
    std::vector<std::vector<int>> watches_;    // watch lists per literal index
    std::vector<signed char> assigns_;         // 0 unset, +1 true, -1 false

    bool enqueue(Lit l, std::vector<Lit>& trail);
};

struct MuResult {
    bool conflict = false;
    int mu = 0; // input-variable literals forced by UP
};

// mu(lambda): distinct X^in variables assigned by the UP closure of the
// composed CNF under the full switch-variable assignment for lambda.
MuResult compute_mu(UnitPropagator& prop, const VariableMap& vars,
                    const SwitchVector& lambda);

} // namespace mdsat
