#include "mdsat/propagation.hpp"

#include <stdexcept>
#include <unordered_set>

namespace mdsat {
namespace {

inline int lit_index(Lit l) {
    int v = std::abs(l) - 1;
    return 2 * v + (l < 0 ? 1 : 0);
}

} // namespace

UnitPropagator::UnitPropagator(const Cnf& cnf) : num_vars_(cnf.num_vars) {
    watches_.resize(2 * num_vars_);
    assigns_.assign(num_vars_, 0);
    for (const Clause& c : cnf.clauses) {
        if (c.size() == 1) {
            units_.push_back(c[0]);
            continue;
        }
        int offset = static_cast<int>(arena_.size());
        arena_.insert(arena_.end(), c.begin(), c.end());
        int idx = static_cast<int>(clauses_.size());
        clauses_.emplace_back(offset, static_cast<int>(c.size()));
        // Watch the first two literals.
        watches_[lit_index(c[0])].push_back(idx);
        watches_[lit_index(c[1])].push_back(idx);
    }
}

bool UnitPropagator::enqueue(Lit l, std::vector<Lit>& trail) {
    signed char& a = assigns_[std::abs(l) - 1];
    signed char want = l > 0 ? 1 : -1;
    if (a == want) return true;
    if (a != 0) return false; // conflict
    a = want;
    trail.push_back(l);
    return true;
}

PropagationResult UnitPropagator::closure(const std::vector<Lit>& assumptions) {
    {
        std::unordered_set<Lit> seen;
        for (Lit l : assumptions) {
            if (seen.count(-l))
                throw std::invalid_argument("complementary assumptions");
            seen.insert(l);
        }
    }

    PropagationResult result;
    std::vector<Lit>& trail = result.forced;
    bool conflict = false;

    for (Lit l : units_)
        if (!enqueue(l, trail)) { conflict = true; break; }
    if (!conflict)
        for (Lit l : assumptions)
            if (!enqueue(l, trail)) { conflict = true; break; }

    std::size_t head = 0;
    while (!conflict && head < trail.size()) {
        Lit p = trail[head++];
        int falsified = lit_index(-p);
        std::vector<int>& ws = watches_[falsified];
        std::size_t keep = 0;
        for (std::size_t i = 0; i < ws.size(); ++i) {
            int ci = ws[i];
            auto [off, size] = clauses_[ci];
            std::int32_t* lits = arena_.data() + off;
            // Put the falsified literal at position 1.
            if (lits[0] == -p) std::swap(lits[0], lits[1]);
            Lit other = lits[0];
            signed char ov = assigns_[std::abs(other) - 1];
            if (ov == (other > 0 ? 1 : -1)) {
                ws[keep++] = ci; // satisfied, keep watching
                continue;
            }
            bool moved = false;
            for (int j = 2; j < size; ++j) {
                Lit cand = lits[j];
                signed char cv = assigns_[std::abs(cand) - 1];
                if (cv != (cand > 0 ? -1 : 1)) { // not falsified
                    std::swap(lits[1], lits[j]);
                    watches_[lit_index(cand)].push_back(ci);
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            ws[keep++] = ci;
            if (!enqueue(other, trail)) {
                conflict = true;
                for (++i; i < ws.size(); ++i) ws[keep++] = ws[i];
                break;
            }
        }
        ws.resize(keep);
    }

    result.conflict = conflict;
    // Undo all assignments so the engine can be reused.
    for (Lit l : trail) assigns_[std::abs(l) - 1] = 0;
    return result;
}

MuResult compute_mu(UnitPropagator& prop, const VariableMap& vars,
                    const SwitchVector& lambda) {
    PropagationResult r = prop.closure(lambda_to_assumptions(lambda, vars));
    MuResult out;
    out.conflict = r.conflict;
    if (r.conflict) return out;
    Lit max_input = 0;
    for (Lit v : vars.input_vars) max_input = std::max(max_input, v);
    std::vector<bool> is_input(max_input + 1, false);
    for (Lit v : vars.input_vars) is_input[v] = true;
    for (Lit l : r.forced) {
        Lit v = std::abs(l);
        if (v <= max_input && is_input[v]) ++out.mu;
    }
    return out;
}

} // namespace mdsat
