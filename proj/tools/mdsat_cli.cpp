// Command-line front end: template generation, mu evaluation, tabu search,
// single-target attacks and randomized campaigns.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <sys/utsname.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "mdsat/attack.hpp"
#include "mdsat/encoder.hpp"
#include "mdsat/md4.hpp"
#include "mdsat/propagation.hpp"
#include "mdsat/relaxation.hpp"
#include "mdsat/solver_adapter.hpp"
#include "mdsat/tabu.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mdsat;

namespace {

struct CommonOpts {
    int k = 39;
    std::uint32_t constant = 0;
    std::string backend = "embedded";
    std::string solver_path;
    std::string out_dir = "runs";
    std::string digest = "final";
};

DigestMode digest_mode(const CommonOpts& o) {
    if (o.digest == "final") return DigestMode::Feedforward;
    if (o.digest == "registers") return DigestMode::Registers;
    throw CLI::ValidationError("--digest must be final or registers");
}

Digest parse_chi(const std::string& text) {
    if (text == "zeros") return Digest{};
    if (text == "ones") {
        Digest d;
        for (auto& w : d.regs) w = 0xffffffffu;
        return d;
    }
    return Digest::from_hex(text);
}

AdapterConfig adapter_config(const CommonOpts& o) {
    AdapterConfig cfg;
    if (o.backend == "embedded") {
        cfg.backend = SolverBackend::Embedded;
    } else if (o.backend == "subprocess") {
        cfg.backend = SolverBackend::Subprocess;
        cfg.solver_path = o.solver_path;
    } else {
        throw CLI::ValidationError("--backend must be embedded or subprocess");
    }
    return cfg;
}

std::string host_info() {
    utsname u{};
    if (uname(&u) != 0) return "unknown";
    std::ostringstream s;
    s << u.sysname << ' ' << u.release << ' ' << u.machine << " (" << u.nodename
      << ')';
    return s.str();
}

// runs/<timestamp>-<confighash>/
fs::path make_run_dir(const CommonOpts& o, const json& config) {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", std::localtime(&t));
    std::size_t h = std::hash<std::string>{}(config.dump());
    std::ostringstream name;
    name << stamp << '-' << std::hex << (h & 0xffffffffu);
    fs::path dir = fs::path(o.out_dir) / name.str();
    fs::create_directories(dir);
    std::ofstream(dir / "config.json") << config.dump(2) << '\n';
    return dir;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

json map_json(const TemplateCnf& t) {
    json j = json::parse(t.vars.to_json());
    j["k"] = t.k;
    j["num_vars"] = t.cnf.num_vars;
    j["digest"] =
        t.digest_mode == DigestMode::Feedforward ? "final" : "registers";
    return j;
}

struct Pipeline {
    TemplateCnf tmpl; // gated
    ConstraintFamily family;
};

Pipeline build_pipeline(const CommonOpts& o) {
    Pipeline p{encode_template(o.k, digest_mode(o)), {}};
    p.family = install_constraint_family(p.tmpl, o.constant);
    return p;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SAT-based preimage attack toolkit for truncated MD4"};
    app.require_subcommand(1);

    CommonOpts common;
    std::string config_path;

    // Config file values act as defaults; explicit flags win.
    json file_cfg;
    for (int i = 1; i < argc - 1; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) {
                std::cerr << "cannot open config file " << argv[i + 1] << "\n";
                return 2;
            }
            in >> file_cfg;
        }
    }
    auto cfg_or = [&](const char* key, auto fallback) {
        using T = decltype(fallback);
        if (file_cfg.contains(key)) return file_cfg[key].get<T>();
        return fallback;
    };
    common.k = cfg_or("k", 39);
    common.constant = cfg_or("constant", std::uint32_t{0});
    common.backend = cfg_or("backend", std::string("embedded"));
    common.solver_path = cfg_or("solver_path", std::string());
    common.out_dir = cfg_or("out_dir", std::string("runs"));
    common.digest = cfg_or("digest", std::string("final"));

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--k", common.k, "number of MD4 steps")
        ->capture_default_str();
    app.add_option("--constant", common.constant,
                   "chaining-value constant K for relaxation constraints")
        ->capture_default_str();
    app.add_option("--backend", common.backend,
                   "SAT backend: embedded | subprocess")
        ->capture_default_str();
    app.add_option("--solver", common.solver_path,
                   "external solver binary (subprocess backend)");
    app.add_option("--out", common.out_dir, "base directory for run artifacts")
        ->capture_default_str();
    app.add_option("--digest", common.digest,
                   "digest convention: final (register + IV feedforward) | "
                   "registers (raw step-k registers)")
        ->capture_default_str();

    // --- encode ---
    auto* cmd_encode = app.add_subcommand(
        "encode", "emit the template CNF (DIMACS) and its variable map");
    std::string encode_out = "template.cnf";
    bool encode_gates = false;
    cmd_encode->add_option("--cnf-out", encode_out, "output DIMACS path")
        ->capture_default_str();
    cmd_encode->add_flag("--gates", encode_gates,
                         "include switching variables and gated constraints");

    // --- mu ---
    auto* cmd_mu = app.add_subcommand(
        "mu", "evaluate the unit-propagation objective mu(lambda)");
    std::string mu_chi = "zeros", mu_lambda;
    cmd_mu->add_option("--chi", mu_chi, "hash value: 32 hex chars, zeros, ones")
        ->capture_default_str();
    cmd_mu->add_option("--lambda", mu_lambda, "switch vector (0/1 string)")
        ->required();

    // --- search ---
    auto* cmd_search =
        app.add_subcommand("search", "tabu search maximizing mu(lambda)");
    std::string search_chi = "zeros", search_start = "random";
    double search_time = 60.0, screen_time = 5.0;
    std::uint64_t search_seed = cfg_or("seed", std::uint64_t{0});
    int shortlist_lo = cfg_or("shortlist_lo", 256);
    int shortlist_hi = cfg_or("shortlist_hi", 320);
    cmd_search->add_option("--chi", search_chi)->capture_default_str();
    cmd_search
        ->add_option("--start", search_start,
                     "start point: 0/1 string or 'random'")
        ->capture_default_str();
    cmd_search->add_option("--time-limit", search_time, "seconds")
        ->capture_default_str();
    cmd_search
        ->add_option("--screen-limit", screen_time,
                     "seconds for the screening solver run per point")
        ->capture_default_str();
    cmd_search->add_option("--seed", search_seed)->capture_default_str();
    cmd_search->add_option("--shortlist-lo", shortlist_lo)
        ->capture_default_str();
    cmd_search->add_option("--shortlist-hi", shortlist_hi)
        ->capture_default_str();

    // --- attack ---
    auto* cmd_attack = app.add_subcommand(
        "attack", "single-target preimage attack with verification");
    std::string attack_chi, attack_lambda;
    double attack_time = cfg_or("time_limit", 900.0);
    cmd_attack->add_option("--chi", attack_chi)->required();
    cmd_attack->add_option("--lambda", attack_lambda)->required();
    cmd_attack->add_option("--time-limit", attack_time, "seconds")
        ->capture_default_str();

    // --- campaign ---
    auto* cmd_campaign = app.add_subcommand(
        "campaign", "preimage attacks on seeded random hash values");
    std::string campaign_lambda;
    int campaign_n = 500;
    std::uint64_t campaign_seed = cfg_or("seed", std::uint64_t{0});
    double campaign_limit = cfg_or("per_instance_limit", 600.0);
    int campaign_workers = cfg_or("workers", 1);
    cmd_campaign->add_option("--lambda", campaign_lambda)->required();
    cmd_campaign->add_option("--samples", campaign_n)->capture_default_str();
    cmd_campaign->add_option("--seed", campaign_seed)->capture_default_str();
    cmd_campaign
        ->add_option("--per-instance-limit", campaign_limit, "seconds")
        ->capture_default_str();
    cmd_campaign->add_option("--workers", campaign_workers)
        ->capture_default_str();

    // --- verify ---
    auto* cmd_verify =
        app.add_subcommand("verify", "check a preimage against a hash value");
    std::string verify_chi, verify_preimage;
    cmd_verify->add_option("--chi", verify_chi)->required();
    cmd_verify->add_option("--preimage", verify_preimage, "128 hex chars")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_encode) {
            TemplateCnf t = encode_template(common.k, digest_mode(common));
            if (encode_gates) install_constraint_family(t, common.constant);
            write_file(encode_out, t.cnf.to_dimacs());
            write_file(encode_out + ".map.json", map_json(t).dump(2) + "\n");
            std::cout << "wrote " << encode_out << " (" << t.cnf.num_vars
                      << " vars, " << t.cnf.clauses.size() << " clauses)\n";
            return 0;
        }

        if (*cmd_mu) {
            Pipeline p = build_pipeline(common);
            TemplateCnf inst = substitute_hash(p.tmpl, parse_chi(mu_chi));
            SwitchVector lambda =
                SwitchVector::parse(mu_lambda, p.family.q());
            UnitPropagator prop(inst.cnf);
            MuResult r = compute_mu(prop, inst.vars, lambda);
            if (r.conflict) {
                std::cout << "conflict\n";
                return 1;
            }
            std::cout << r.mu << "\n";
            return 0;
        }

        if (*cmd_search) {
            Pipeline p = build_pipeline(common);
            TemplateCnf inst = substitute_hash(p.tmpl, parse_chi(search_chi));
            json cfg{{"command", "search"},
                     {"chi", search_chi},
                     {"start", search_start},
                     {"seed", search_seed},
                     {"time_limit", search_time},
                     {"screen_limit", screen_time},
                     {"k", common.k}};
            fs::path dir = make_run_dir(common, cfg);
            std::ofstream log(dir / "search.log.jsonl");

            SearchConfig sc;
            sc.q = p.family.q();
            sc.seed = search_seed;
            sc.total_time_limit = search_time;
            sc.shortlist_lo = shortlist_lo;
            sc.shortlist_hi = shortlist_hi;
            sc.log = &log;
            if (search_start != "random")
                sc.start = SwitchVector::parse(search_start, sc.q);

            Objective obj = make_relaxation_objective(
                inst, adapter_config(common), screen_time);
            SearchResult res = run_search(obj, sc);

            json report;
            report["lambda_best"] = res.lambda_best.str();
            report["mu_best"] = res.mu_best;
            report["evaluated"] = res.evaluated;
            report["screened_out"] = res.screened_out;
            report["record_count"] = res.records.size();
            report["record_fraction"] =
                res.evaluated
                    ? static_cast<double>(res.records.size()) / res.evaluated
                    : 0.0;
            json recs = json::array();
            for (const RecordPoint& r : res.records)
                recs.push_back({{"lambda", r.lambda.str()},
                                {"mu", r.mu},
                                {"elapsed_seconds", r.elapsed_seconds}});
            report["records"] = recs;
            json sl = json::array();
            for (const SwitchVector& v :
                 shortlist(res.records, shortlist_lo, shortlist_hi))
                sl.push_back(v.str());
            report["shortlist"] = sl;
            report["host"] = host_info();
            write_file(dir / "report.json", report.dump(2) + "\n");

            std::cout << "best lambda: " << res.lambda_best.str()
                      << "  mu=" << res.mu_best << "\n"
                      << "evaluated " << res.evaluated << " points, "
                      << res.records.size() << " records, shortlist "
                      << sl.size() << "\n"
                      << "artifacts in " << dir << "\n";
            return 0;
        }

        if (*cmd_attack) {
            Pipeline p = build_pipeline(common);
            SwitchVector lambda =
                SwitchVector::parse(attack_lambda, p.family.q());
            Digest chi = parse_chi(attack_chi);
            json cfg{{"command", "attack"},
                     {"chi", chi.to_hex()},
                     {"lambda", lambda.str()},
                     {"time_limit", attack_time},
                     {"k", common.k},
                     {"backend", common.backend},
                     {"digest", common.digest}};
            fs::path dir = make_run_dir(common, cfg);

            AttackResult r = run_attack(p.tmpl, p.family, chi, lambda,
                                        adapter_config(common), attack_time);
            json out = json::parse(r.to_json());
            out["host"] = host_info();
            write_file(dir / "result.json", out.dump(2) + "\n");

            if (r.verdict == SolveStatus::Sat) {
                std::cout << "SAT: verified preimage " << r.preimage.to_hex()
                          << " (" << r.wall_seconds << " s)\n";
            } else if (r.verdict == SolveStatus::Unsat) {
                std::cout << "UNSAT: no preimage under these relaxation "
                             "constraints ("
                          << r.wall_seconds << " s)\n";
            } else {
                std::cout << "UNKNOWN: time limit reached\n";
            }
            std::cout << "artifacts in " << dir << "\n";
            return 0;
        }

        if (*cmd_campaign) {
            Pipeline p = build_pipeline(common);
            SwitchVector lambda =
                SwitchVector::parse(campaign_lambda, p.family.q());
            json cfg{{"command", "campaign"},
                     {"lambda", lambda.str()},
                     {"samples", campaign_n},
                     {"seed", campaign_seed},
                     {"per_instance_limit", campaign_limit},
                     {"k", common.k},
                     {"backend", common.backend},
                     {"digest", common.digest}};
            fs::path dir = make_run_dir(common, cfg);

            CampaignReport report = run_campaign(
                p.tmpl, p.family, lambda, campaign_n, campaign_seed,
                adapter_config(common), campaign_limit, campaign_workers);
            json out = json::parse(report.to_json());
            out["host"] = host_info();
            write_file(dir / "report.json", out.dump(2) + "\n");
            write_file(dir / "summary.txt", report.summary_table());
            std::cout << report.summary_table() << "artifacts in " << dir
                      << "\n";
            return 0;
        }

        if (*cmd_verify) {
            Digest chi = parse_chi(verify_chi);
            MessageBlock block = MessageBlock::from_hex(verify_preimage);
            Digest got = digest_mode(common) == DigestMode::Feedforward
                             ? md4_k(block, common.k)
                             : md4_k_registers(block, common.k);
            if (got == chi) {
                std::cout << "match\n";
                return 0;
            }
            std::cout << "mismatch: md4-" << common.k << " gives "
                      << got.to_hex() << "\n";
            return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
