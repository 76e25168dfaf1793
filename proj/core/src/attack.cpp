#include "mdsat/attack.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "mdsat/encoder.hpp"

namespace mdsat {
namespace {

const char* status_name(SolveStatus s) {
    switch (s) {
    case SolveStatus::Sat: return "SAT";
    case SolveStatus::Unsat: return "UNSAT";
    default: return "UNKNOWN";
    }
}

MessageBlock extract_preimage(const VariableMap& vars,
                              const std::vector<bool>& model) {
    MessageBlock block;
    for (int i = 0; i < 512; ++i)
        block.set_bit(i, model[vars.input_vars[i]]);
    return block;
}

} // namespace

std::string AttackResult::to_json() const {
    nlohmann::json j;
    j["chi"] = chi.to_hex();
    j["lambda"] = lambda.str();
    j["verdict"] = status_name(verdict);
    if (verdict == SolveStatus::Sat) {
        j["preimage"] = preimage.to_hex();
        j["verified"] = verified;
    }
    j["wall_seconds"] = wall_seconds;
    j["solver_id"] = solver_id;
    return j.dump();
}

int CampaignReport::sat_count() const {
    return static_cast<int>(std::count_if(
        results.begin(), results.end(),
        [](const AttackResult& r) { return r.verdict == SolveStatus::Sat; }));
}
int CampaignReport::unsat_count() const {
    return static_cast<int>(std::count_if(
        results.begin(), results.end(),
        [](const AttackResult& r) { return r.verdict == SolveStatus::Unsat; }));
}
int CampaignReport::unknown_count() const {
    return sample_size - sat_count() - unsat_count();
}

double CampaignReport::avg_decided_seconds() const {
    double sum = 0;
    int n = 0;
    for (const AttackResult& r : results) {
        if (r.verdict != SolveStatus::Unknown) {
            sum += r.wall_seconds;
            ++n;
        }
    }
    return n ? sum / n : 0.0;
}

double CampaignReport::max_decided_seconds() const {
    double mx = 0;
    for (const AttackResult& r : results)
        if (r.verdict != SolveStatus::Unknown)
            mx = std::max(mx, r.wall_seconds);
    return mx;
}

double CampaignReport::avg_all_seconds() const {
    double sum = 0;
    for (const AttackResult& r : results) sum += r.wall_seconds;
    return results.empty() ? 0.0 : sum / results.size();
}

std::string CampaignReport::to_json() const {
    nlohmann::json j;
    j["sample_size"] = sample_size;
    j["seed"] = seed;
    j["lambda"] = lambda;
    j["sat"] = sat_count();
    j["unsat"] = unsat_count();
    j["unknown"] = unknown_count();
    if (sample_size > 0) {
        j["sat_fraction"] = static_cast<double>(sat_count()) / sample_size;
        j["unsat_fraction"] = static_cast<double>(unsat_count()) / sample_size;
    }
    j["avg_decided_seconds"] = avg_decided_seconds();
    j["max_decided_seconds"] = max_decided_seconds();
    j["avg_all_seconds"] = avg_all_seconds();
    nlohmann::json arr = nlohmann::json::array();
    for (const AttackResult& r : results)
        arr.push_back(nlohmann::json::parse(r.to_json()));
    j["results"] = arr;
    return j.dump(2);
}

std::string CampaignReport::summary_table() const {
    std::ostringstream out;
    out << "Relaxation constraints: " << lambda << "\n";
    out << "Instances: " << sample_size << " (seed " << seed << ")\n";
    if (sample_size > 0) {
        out << "SAT (preimage found):      " << sat_count() << " ("
            << 100.0 * sat_count() / sample_size << "%)\n";
        out << "UNSAT (none under lambda): " << unsat_count() << " ("
            << 100.0 * unsat_count() / sample_size << "%)\n";
        out << "UNKNOWN (time limit):      " << unknown_count() << " ("
            << 100.0 * unknown_count() / sample_size << "%)\n";
    }
    out << "Avg time, decided (s): " << avg_decided_seconds() << "\n";
    out << "Max time, decided (s): " << max_decided_seconds() << "\n";
    out << "Avg time, all (s):     " << avg_all_seconds() << "\n";
    return out.str();
}

AttackResult run_attack(const TemplateCnf& gated_template,
                        const ConstraintFamily& family, const Digest& chi,
                        const SwitchVector& lambda,
                        const AdapterConfig& adapter, double time_limit) {
    TemplateCnf instance = substitute_hash(gated_template, chi);
    std::vector<Lit> assumptions = lambda_to_assumptions(lambda, instance.vars);

    AttackResult result;
    result.chi = chi;
    result.lambda = lambda;

    SolverAdapter solver(adapter);
    SolverVerdict verdict = solver.solve(instance.cnf, assumptions, time_limit);
    result.verdict = verdict.status;
    result.wall_seconds = verdict.wall_seconds;
    result.solver_id = verdict.solver_id;

    if (verdict.status == SolveStatus::Sat) {
        result.preimage = extract_preimage(instance.vars, verdict.model);
        Digest reference = instance.digest_mode == DigestMode::Feedforward
                               ? md4_k(result.preimage, instance.k)
                               : md4_k_registers(result.preimage, instance.k);
        if (reference != chi)
            throw std::logic_error(
                "extracted preimage fails reference verification");
        ChainingTrace trace = chaining_trace(result.preimage, instance.k);
        for (int step : lambda.active_steps()) {
            if (trace[step - 1] != family.constant)
                throw std::logic_error(
                    "active relaxation constraint violated by model");
        }
        result.verified = true;
    }
    return result;
}

CampaignReport run_campaign(const TemplateCnf& gated_template,
                            const ConstraintFamily& family,
                            const SwitchVector& lambda, int samples,
                            std::uint64_t seed, const AdapterConfig& adapter,
                            double per_instance_limit, int workers) {
    if (samples < 0) throw std::invalid_argument("negative sample count");
    CampaignReport report;
    report.sample_size = samples;
    report.seed = seed;
    report.lambda = lambda.str();
    if (samples == 0) return report;

    std::mt19937_64 rng(seed);
    std::vector<Digest> targets(samples);
    for (Digest& d : targets)
        for (std::uint32_t& w : d.regs)
            w = static_cast<std::uint32_t>(rng());

    report.results.resize(samples);
    std::atomic<int> next{0};
    workers = std::max(1, std::min(workers, samples));

    auto work = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= samples) return;
            try {
                report.results[i] =
                    run_attack(gated_template, family, targets[i], lambda,
                               adapter, per_instance_limit);
            } catch (const AdapterError&) {
                // Backend failure counts as an undecided instance.
                report.results[i].chi = targets[i];
                report.results[i].lambda = lambda;
                report.results[i].verdict = SolveStatus::Unknown;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();
    return report;
}

} // namespace mdsat
