#include "mdsat/tabu.hpp"

#include <chrono>
#include <cstdlib>
#include <memory>
#include <ostream>
#include <random>
#include <unordered_map>

#include <json.hpp>

#include "mdsat/propagation.hpp"

namespace mdsat {

std::vector<SwitchVector> neighborhood(const SwitchVector& lambda) {
    std::vector<SwitchVector> out;
    out.reserve(lambda.q());
    for (int i = 0; i < lambda.q(); ++i) {
        SwitchVector n = lambda;
        n.bits[i] = !n.bits[i];
        out.push_back(std::move(n));
    }
    return out;
}

std::vector<SwitchVector> shortlist(const std::vector<RecordPoint>& records,
                                    int lo, int hi) {
    std::vector<SwitchVector> out;
    for (const RecordPoint& r : records)
        if (r.mu >= lo && r.mu <= hi) out.push_back(r.lambda);
    return out;
}

namespace {

struct PointInfo {
    bool screened = false;
    int mu = 0;
    std::uint64_t order = 0;
};

SwitchVector flip(const SwitchVector& v, int i) {
    SwitchVector out = v;
    out.bits[i] = !out.bits[i];
    return out;
}

} // namespace

SearchResult run_search(const Objective& objective, const SearchConfig& config) {
    auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
            .count();
    };
    auto out_of_time = [&] {
        return config.total_time_limit > 0 &&
               elapsed() >= config.total_time_limit;
    };

    SwitchVector start;
    if (config.start) {
        start = *config.start;
        if (start.q() != config.q)
            throw std::invalid_argument("start point length differs from Q");
    } else {
        std::mt19937_64 rng(config.seed);
        start.bits.resize(config.q);
        for (int i = 0; i < config.q; ++i) start.bits[i] = rng() & 1u;
    }

    std::unordered_map<std::string, PointInfo> visited; // the L2 bookkeeping
    std::uint64_t order = 0;

    SearchResult result;
    result.lambda_best = start;

    auto log_eval = [&](const SwitchVector& lambda, const PointEval& ev) {
        if (!config.log) return;
        nlohmann::json j;
        j["lambda"] = lambda.str();
        j["status"] =
            ev.status == PointEval::Status::Scored ? "scored" : "screened_out";
        if (ev.status == PointEval::Status::Scored) j["mu"] = ev.mu;
        j["elapsed_seconds"] = elapsed();
        *config.log << j.dump() << '\n';
    };

    auto visit = [&](const SwitchVector& lambda) -> PointInfo& {
        PointEval ev = objective(lambda);
        ++result.evaluated;
        log_eval(lambda, ev);
        PointInfo info;
        info.order = ++order;
        if (ev.status == PointEval::Status::ScreenedOut) {
            info.screened = true;
            ++result.screened_out;
        } else {
            info.mu = ev.mu;
            if (ev.mu > result.mu_best) {
                result.mu_best = ev.mu;
                result.lambda_best = lambda;
                result.records.push_back({lambda, ev.mu, elapsed()});
            }
        }
        return visited[lambda.str()] = info;
    };

    auto fully_checked = [&](const SwitchVector& lambda) {
        for (int i = 0; i < lambda.q(); ++i)
            if (!visited.count(flip(lambda, i).str())) return false;
        return true;
    };

    visit(start);
    SwitchVector center = start;

    while (!out_of_time()) {
        bool best_updated = false;
        SwitchVector best_neighbor = center;
        for (int i = 0; i < config.q; ++i) {
            if (out_of_time()) break;
            SwitchVector neighbor = flip(center, i);
            if (visited.count(neighbor.str())) continue;
            int before = result.mu_best;
            const PointInfo& info = visit(neighbor);
            if (!info.screened && info.mu > before) {
                best_updated = true;
                best_neighbor = neighbor;
            }
        }
        if (out_of_time()) break;

        if (best_updated) {
            center = best_neighbor;
            continue;
        }

        // getNewCenter: scored point with an unchecked neighbor whose mu is
        // closest to mu_best; ties broken by most recent visit.
        bool found = false;
        SwitchVector next_center;
        long best_dist = 0;
        std::uint64_t best_order = 0;
        for (const auto& [key, info] : visited) {
            if (info.screened) continue;
            SwitchVector cand = SwitchVector::parse(key);
            if (fully_checked(cand)) continue; // belongs to L1
            long dist = std::labs(static_cast<long>(info.mu) -
                                  static_cast<long>(result.mu_best));
            if (!found || dist < best_dist ||
                (dist == best_dist && info.order > best_order)) {
                found = true;
                next_center = cand;
                best_dist = dist;
                best_order = info.order;
            }
        }
        if (!found) break; // search space exhausted
        center = next_center;
    }
    return result;
}

Objective make_relaxation_objective(const TemplateCnf& cnf,
                                    AdapterConfig adapter,
                                    double screen_time_limit) {
    auto prop = std::make_shared<UnitPropagator>(cnf.cnf);
    // Copies of the map and adapter config keep the closure self-contained;
    // the clause database itself is shared.
    VariableMap vars = cnf.vars;
    const Cnf* clauses = &cnf.cnf;
    return [prop, vars, adapter = std::move(adapter), clauses,
            screen_time_limit](const SwitchVector& lambda) -> PointEval {
        MuResult mu = compute_mu(*prop, vars, lambda);
        if (mu.conflict) return {PointEval::Status::ScreenedOut, 0};
        SolverAdapter solver(adapter);
        SolverVerdict verdict = solver.solve(
            *clauses, lambda_to_assumptions(lambda, vars), screen_time_limit);
        if (verdict.status == SolveStatus::Unsat)
            return {PointEval::Status::ScreenedOut, 0};
        return {PointEval::Status::Scored, mu.mu};
    };
}

} // namespace mdsat
