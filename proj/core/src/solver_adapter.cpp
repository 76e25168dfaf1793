#include "mdsat/solver_adapter.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

namespace mdsat {

std::string export_dimacs(const Cnf& cnf, const std::vector<Lit>& assumptions) {
    std::ostringstream out;
    out << "p cnf " << cnf.num_vars << ' '
        << cnf.clauses.size() + assumptions.size() << '\n';
    for (const Clause& c : cnf.clauses) {
        for (Lit l : c) out << l << ' ';
        out << "0\n";
    }
    for (Lit l : assumptions) out << l << " 0\n";
    return out.str();
}

SolverVerdict parse_solver_output(const std::string& text) {
    SolverVerdict v;
    bool have_status = false;
    std::vector<Lit> lits;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("s ", 0) == 0) {
            std::string s = line.substr(2);
            while (!s.empty() && (s.back() == '\r' || s.back() == ' '))
                s.pop_back();
            if (s == "SATISFIABLE")
                v.status = SolveStatus::Sat;
            else if (s == "UNSATISFIABLE")
                v.status = SolveStatus::Unsat;
            else if (s == "UNKNOWN" || s == "INDETERMINATE")
                v.status = SolveStatus::Unknown;
            else
                throw AdapterError("unrecognized status line: " + line);
            have_status = true;
        } else if (line.rfind("v ", 0) == 0) {
            std::istringstream vs(line.substr(2));
            Lit l;
            while (vs >> l)
                if (l != 0) lits.push_back(l);
        }
    }
    // MiniSat-style bare output: first line SAT/UNSAT, second the model.
    if (!have_status) {
        std::istringstream in2(text);
        std::string word;
        if (in2 >> word) {
            if (word == "SAT") {
                v.status = SolveStatus::Sat;
                have_status = true;
                Lit l;
                while (in2 >> l)
                    if (l != 0) lits.push_back(l);
            } else if (word == "UNSAT") {
                v.status = SolveStatus::Unsat;
                have_status = true;
            } else if (word == "INDET" || word == "UNKNOWN") {
                v.status = SolveStatus::Unknown;
                have_status = true;
            }
        }
    }
    if (!have_status) throw AdapterError("no status in solver output");
    if (v.status == SolveStatus::Sat) {
        if (lits.empty()) throw AdapterError("SAT verdict without a model");
        Lit max_var = 0;
        for (Lit l : lits) max_var = std::max(max_var, std::abs(l));
        v.model.assign(max_var + 1, false);
        for (Lit l : lits) v.model[std::abs(l)] = l > 0;
    }
    return v;
}

bool check_model(const Cnf& cnf, const std::vector<Lit>& assumptions,
                 const std::vector<bool>& model) {
    auto sat = [&](Lit l) {
        std::size_t var = static_cast<std::size_t>(std::abs(l));
        if (var >= model.size()) return false;
        return l > 0 ? model[var] : !model[var];
    };
    for (const Clause& c : cnf.clauses) {
        bool ok = false;
        for (Lit l : c)
            if (sat(l)) { ok = true; break; }
        if (!ok) return false;
    }
    for (Lit l : assumptions)
        if (!sat(l)) return false;
    return true;
}

SolverAdapter::SolverAdapter(AdapterConfig config) : config_(std::move(config)) {
    if (config_.backend == SolverBackend::Subprocess &&
        config_.solver_path.empty())
        throw std::invalid_argument("subprocess backend needs solver_path");
}

SolverVerdict SolverAdapter::solve(const Cnf& cnf,
                                   const std::vector<Lit>& assumptions,
                                   double time_limit_seconds) {
    SolverVerdict verdict;
    auto t0 = std::chrono::steady_clock::now();
    if (config_.backend == SolverBackend::Embedded) {
        CdclSolver solver(cnf);
        SolveResult r = solver.solve(assumptions, time_limit_seconds);
        verdict.status = r.status;
        verdict.model = std::move(r.model);
        verdict.solver_id = "mdsat-cdcl";
    } else {
        verdict = solve_subprocess(cnf, assumptions, time_limit_seconds);
    }
    verdict.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (verdict.status == SolveStatus::Sat) {
        if (static_cast<int>(verdict.model.size()) < cnf.num_vars + 1)
            verdict.model.resize(cnf.num_vars + 1, false);
        if (!check_model(cnf, assumptions, verdict.model))
            throw AdapterError("backend returned a model that fails checking");
    }
    return verdict;
}

SolverVerdict SolverAdapter::solve_subprocess(
    const Cnf& cnf, const std::vector<Lit>& assumptions,
    double time_limit_seconds) {
    char path[] = "/tmp/mdsat-XXXXXX.cnf";
    int fd = mkstemps(path, 4);
    if (fd < 0) throw AdapterError("cannot create temporary CNF file");
    {
        std::string text = export_dimacs(cnf, assumptions);
        const char* p = text.data();
        std::size_t left = text.size();
        while (left > 0) {
            ssize_t n = write(fd, p, left);
            if (n <= 0) {
                close(fd);
                unlink(path);
                throw AdapterError("cannot write temporary CNF file");
            }
            p += n;
            left -= static_cast<std::size_t>(n);
        }
    }
    close(fd);

    int out_pipe[2];
    if (pipe(out_pipe) != 0) {
        unlink(path);
        throw AdapterError("pipe failed");
    }
    pid_t pid = fork();
    if (pid < 0) {
        unlink(path);
        throw AdapterError("fork failed");
    }
    if (pid == 0) {
        dup2(out_pipe[1], STDOUT_FILENO);
        close(out_pipe[0]);
        close(out_pipe[1]);
        execl(config_.solver_path.c_str(), config_.solver_path.c_str(), path,
              static_cast<char*>(nullptr));
        _exit(127);
    }
    close(out_pipe[1]);

    std::string output;
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(
                            time_limit_seconds > 0 ? time_limit_seconds : 1e9));
    fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
    bool timed_out = false;
    bool exited = false;
    int wstatus = 0;
    char buf[4096];
    while (true) {
        ssize_t n = read(out_pipe[0], buf, sizeof(buf));
        if (n > 0) {
            output.append(buf, static_cast<std::size_t>(n));
            continue;
        }
        if (n == 0) break; // EOF
        if (!exited) {
            pid_t w = waitpid(pid, &wstatus, WNOHANG);
            if (w == pid) exited = true;
        }
        if (!exited && std::chrono::steady_clock::now() >= deadline) {
            kill(pid, SIGKILL);
            timed_out = true;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    close(out_pipe[0]);
    if (!exited) waitpid(pid, &wstatus, 0);
    unlink(path);

    SolverVerdict v;
    v.solver_id = config_.solver_path;
    if (timed_out) {
        v.status = SolveStatus::Unknown;
        return v;
    }
    if (WIFEXITED(wstatus) && WEXITSTATUS(wstatus) == 127)
        throw AdapterError("cannot execute solver: " + config_.solver_path);
    try {
        SolverVerdict parsed = parse_solver_output(output);
        parsed.solver_id = v.solver_id;
        return parsed;
    } catch (const AdapterError&) {
        // Fall back to conventional exit codes before giving up.
        if (WIFEXITED(wstatus)) {
            int code = WEXITSTATUS(wstatus);
            if (code == 20) {
                v.status = SolveStatus::Unsat;
                return v;
            }
        }
        throw;
    }
}

} // namespace mdsat
