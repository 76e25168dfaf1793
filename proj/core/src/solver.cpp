#include "mdsat/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace mdsat {

namespace {

using ILit = std::uint32_t; // 2*var + sign, var 0-based
using CRef = std::uint32_t;

constexpr CRef kCRefUndef = 0xffffffffu;

inline ILit mk_lit(int var, bool sign) {
    return static_cast<ILit>(2 * var + (sign ? 1 : 0));
}
inline int lit_var(ILit l) { return static_cast<int>(l >> 1); }
inline bool lit_sign(ILit l) { return l & 1u; }
inline ILit lit_neg(ILit l) { return l ^ 1u; }
inline ILit from_dimacs(Lit l) { return mk_lit(std::abs(l) - 1, l < 0); }

// -1 false, 0 undef, +1 true
using VBool = signed char;

// Fixed-size circular queue tracking a running average.
struct BoundedQueue {
    std::vector<std::uint32_t> buf;
    std::size_t idx = 0, cnt = 0;
    std::uint64_t sum = 0;

    explicit BoundedQueue(std::size_t cap) : buf(cap, 0) {}
    bool full() const { return cnt == buf.size(); }
    void push(std::uint32_t x) {
        if (full())
            sum -= buf[idx];
        else
            ++cnt;
        sum += x;
        buf[idx] = x;
        if (++idx == buf.size()) idx = 0;
    }
    double avg() const { return cnt ? static_cast<double>(sum) / cnt : 0.0; }
    void clear() {
        idx = cnt = 0;
        sum = 0;
    }
};

} // namespace

struct CdclSolver::Impl {
    // Clause arena. Layout per clause: header word (size << 1 | learnt),
    // then for learnts one LBD word, then the literals. The two watched
    // literals are always at positions 0 and 1.
    std::vector<std::uint32_t> arena;
    std::size_t wasted = 0;

    std::vector<CRef> clauses; // problem clauses (size >= 2)
    std::vector<CRef> learnts;

    struct Watcher {
        CRef cref;
        ILit blocker;
    };
    std::vector<std::vector<Watcher>> watches; // per literal

    int nvars = 0;
    std::vector<VBool> assigns;
    std::vector<char> polarity; // saved phase, 1 = prefer negative
    std::vector<double> activity;
    std::vector<CRef> reason;
    std::vector<int> level;
    std::vector<char> seen;

    std::vector<ILit> trail;
    std::vector<int> trail_lim;
    std::size_t qhead = 0;

    // VSIDS order heap
    std::vector<int> heap;     // variable indices
    std::vector<int> heap_pos; // var -> index in heap, -1 when absent
    double var_inc = 1.0;
    double var_decay = 0.95;

    bool ok = true;
    std::uint64_t conflicts = 0;

    // LBD bookkeeping: recent-LBD / trail-size queues drive the restart
    // policy, the per-level stamp makes LBD computation O(clause size).
    BoundedQueue lbd_queue{50};
    BoundedQueue trail_queue{5000};
    std::uint64_t lbd_sum = 0;
    std::vector<std::uint32_t> level_stamp;
    std::uint32_t stamp_gen = 0;
    std::uint64_t next_reduce = 2000;
    std::uint32_t reduce_count = 0;

    std::vector<ILit> assumptions;

    // --- arena helpers -----------------------------------------------------

    CRef alloc_clause(const std::vector<ILit>& lits, bool learnt) {
        CRef cr = static_cast<CRef>(arena.size());
        arena.push_back((static_cast<std::uint32_t>(lits.size()) << 1) |
                        (learnt ? 1u : 0u));
        if (learnt) arena.push_back(0); // LBD, set right after allocation
        for (ILit l : lits) arena.push_back(l);
        return cr;
    }
    std::uint32_t clause_size(CRef c) const { return arena[c] >> 1; }
    bool clause_learnt(CRef c) const { return arena[c] & 1u; }
    std::uint32_t* clause_lits(CRef c) {
        return arena.data() + c + (clause_learnt(c) ? 2 : 1);
    }
    std::uint32_t clause_lbd(CRef c) const { return arena[c + 1]; }
    void set_clause_lbd(CRef c, std::uint32_t lbd) { arena[c + 1] = lbd; }

    std::uint32_t compute_lbd(const ILit* lits, std::size_t size) {
        ++stamp_gen;
        std::uint32_t n = 0;
        for (std::size_t i = 0; i < size; ++i) {
            int lv = level[lit_var(lits[i])];
            if (lv > 0 && level_stamp[lv] != stamp_gen) {
                level_stamp[lv] = stamp_gen;
                ++n;
            }
        }
        return n;
    }

    std::vector<char> preferred; // branch on these vars first

    // --- heap --------------------------------------------------------------

    bool heap_less(int a, int b) const {
        if (preferred[a] != preferred[b]) return preferred[a] > preferred[b];
        return activity[a] > activity[b];
    }

    void heap_up(int i) {
        int v = heap[i];
        while (i > 0) {
            int p = (i - 1) >> 1;
            if (!heap_less(v, heap[p])) break;
            heap[i] = heap[p];
            heap_pos[heap[i]] = i;
            i = p;
        }
        heap[i] = v;
        heap_pos[v] = i;
    }

    void heap_down(int i) {
        int v = heap[i];
        int n = static_cast<int>(heap.size());
        while (2 * i + 1 < n) {
            int c = 2 * i + 1;
            if (c + 1 < n && heap_less(heap[c + 1], heap[c])) ++c;
            if (!heap_less(heap[c], v)) break;
            heap[i] = heap[c];
            heap_pos[heap[i]] = i;
            i = c;
        }
        heap[i] = v;
        heap_pos[v] = i;
    }

    void heap_insert(int v) {
        if (heap_pos[v] >= 0) return;
        heap.push_back(v);
        heap_pos[v] = static_cast<int>(heap.size()) - 1;
        heap_up(heap_pos[v]);
    }

    int heap_pop() {
        int v = heap[0];
        heap[0] = heap.back();
        heap_pos[heap[0]] = 0;
        heap.pop_back();
        heap_pos[v] = -1;
        if (!heap.empty()) heap_down(0);
        return v;
    }

    // --- basic state -------------------------------------------------------

    VBool value(ILit l) const {
        VBool a = assigns[lit_var(l)];
        return lit_sign(l) ? static_cast<VBool>(-a) : a;
    }

    int decision_level() const { return static_cast<int>(trail_lim.size()); }

    void new_decision_level() { trail_lim.push_back(static_cast<int>(trail.size())); }

    void unchecked_enqueue(ILit l, CRef from) {
        int v = lit_var(l);
        assigns[v] = lit_sign(l) ? -1 : 1;
        reason[v] = from;
        level[v] = decision_level();
        trail.push_back(l);
    }

    void cancel_until(int lvl) {
        if (decision_level() <= lvl) return;
        for (int i = static_cast<int>(trail.size()) - 1; i >= trail_lim[lvl]; --i) {
            int v = lit_var(trail[i]);
            polarity[v] = lit_sign(trail[i]);
            assigns[v] = 0;
            heap_insert(v);
        }
        qhead = trail_lim[lvl];
        trail.resize(trail_lim[lvl]);
        trail_lim.resize(lvl);
    }

    void var_bump(int v) {
        activity[v] += var_inc;
        if (activity[v] > 1e100) {
            for (double& a : activity) a *= 1e-100;
            var_inc *= 1e-100;
        }
        if (heap_pos[v] >= 0) heap_up(heap_pos[v]);
    }

    // --- construction ------------------------------------------------------

    explicit Impl(const Cnf& cnf) {
        nvars = cnf.num_vars;
        assigns.assign(nvars, 0);
        polarity.assign(nvars, 1); // default phase: negative
        activity.assign(nvars, 0.0);
        reason.assign(nvars, kCRefUndef);
        level.assign(nvars, 0);
        seen.assign(nvars, 0);
        preferred.assign(nvars, 0);
        level_stamp.assign(nvars + 1, 0);
        watches.resize(2 * nvars);
        heap_pos.assign(nvars, -1);
        for (int v = 0; v < nvars; ++v) heap_insert(v);

        std::vector<ILit> tmp;
        for (const Clause& c : cnf.clauses) {
            tmp.clear();
            bool taut = false;
            for (Lit l : c) {
                ILit il = from_dimacs(l);
                bool dup = false;
                for (ILit o : tmp) {
                    if (o == il) dup = true;
                    if (o == lit_neg(il)) taut = true;
                }
                if (!dup) tmp.push_back(il);
            }
            if (taut) continue;
            if (tmp.size() == 1) {
                if (value(tmp[0]) == -1) {
                    ok = false;
                    return;
                }
                if (value(tmp[0]) == 0) unchecked_enqueue(tmp[0], kCRefUndef);
                continue;
            }
            CRef cr = alloc_clause(tmp, false);
            clauses.push_back(cr);
            attach(cr);
        }
        if (ok && propagate() != kCRefUndef) ok = false;
    }

    void attach(CRef cr) {
        std::uint32_t* lits = clause_lits(cr);
        watches[lit_neg(lits[0])].push_back({cr, lits[1]});
        watches[lit_neg(lits[1])].push_back({cr, lits[0]});
    }

    // --- propagation -------------------------------------------------------

    CRef propagate() {
        CRef confl = kCRefUndef;
        while (qhead < trail.size()) {
            ILit p = trail[qhead++];
            std::vector<Watcher>& ws = watches[p];
            std::size_t i = 0, j = 0;
            std::size_t n = ws.size();
            while (i < n) {
                Watcher w = ws[i++];
                if (value(w.blocker) == 1) {
                    ws[j++] = w;
                    continue;
                }
                CRef cr = w.cref;
                std::uint32_t* lits = clause_lits(cr);
                ILit false_lit = lit_neg(p);
                if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
                ILit first = lits[0];
                if (first != w.blocker && value(first) == 1) {
                    ws[j++] = {cr, first};
                    continue;
                }
                std::uint32_t size = clause_size(cr);
                bool moved = false;
                for (std::uint32_t k = 2; k < size; ++k) {
                    if (value(lits[k]) != -1) {
                        std::swap(lits[1], lits[k]);
                        watches[lit_neg(lits[1])].push_back({cr, first});
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                ws[j++] = {cr, first};
                if (value(first) == -1) {
                    confl = cr;
                    qhead = trail.size();
                    while (i < n) ws[j++] = ws[i++];
                } else {
                    unchecked_enqueue(first, cr);
                }
            }
            ws.resize(j);
            if (confl != kCRefUndef) break;
        }
        return confl;
    }

    // --- conflict analysis ---------------------------------------------------

    std::vector<ILit> analyze_toclear;

    bool lit_redundant(ILit p, std::uint32_t abstract_levels) {
        std::vector<ILit> stack{p};
        std::size_t top = analyze_toclear.size();
        while (!stack.empty()) {
            ILit q = stack.back();
            stack.pop_back();
            CRef cr = reason[lit_var(q)];
            std::uint32_t* lits = clause_lits(cr);
            std::uint32_t size = clause_size(cr);
            for (std::uint32_t i = 1; i < size; ++i) {
                ILit l = lits[i];
                int v = lit_var(l);
                if (seen[v] || level[v] == 0) continue;
                if (reason[v] != kCRefUndef &&
                    (abstract_level(v) & abstract_levels) != 0) {
                    seen[v] = 1;
                    stack.push_back(l);
                    analyze_toclear.push_back(l);
                } else {
                    for (std::size_t k = top; k < analyze_toclear.size(); ++k)
                        seen[lit_var(analyze_toclear[k])] = 0;
                    analyze_toclear.resize(top);
                    return false;
                }
            }
        }
        return true;
    }

    std::uint32_t abstract_level(int v) const {
        return 1u << (level[v] & 31);
    }

    void analyze(CRef confl, std::vector<ILit>& out_learnt, int& out_btlevel) {
        int path_cnt = 0;
        ILit p = 0;
        bool have_p = false;
        out_learnt.clear();
        out_learnt.push_back(0); // placeholder for the asserting literal
        int index = static_cast<int>(trail.size()) - 1;

        do {
            std::uint32_t* lits = clause_lits(confl);
            std::uint32_t size = clause_size(confl);
            // Refresh the LBD of learnt clauses that keep causing conflicts;
            // a clause whose LBD drops becomes harder to evict.
            if (clause_learnt(confl)) {
                std::uint32_t lbd = compute_lbd(lits, size);
                if (lbd < clause_lbd(confl)) set_clause_lbd(confl, lbd);
            }
            for (std::uint32_t i = have_p ? 1 : 0; i < size; ++i) {
                ILit q = lits[i];
                int v = lit_var(q);
                if (!seen[v] && level[v] > 0) {
                    var_bump(v);
                    seen[v] = 1;
                    if (level[v] >= decision_level())
                        ++path_cnt;
                    else
                        out_learnt.push_back(q);
                }
            }
            while (!seen[lit_var(trail[index])]) --index;
            p = trail[index--];
            confl = reason[lit_var(p)];
            seen[lit_var(p)] = 0;
            have_p = true;
            --path_cnt;
        } while (path_cnt > 0);
        out_learnt[0] = lit_neg(p);

        // Conflict clause minimization.
        analyze_toclear = out_learnt;
        std::uint32_t abstract = 0;
        for (std::size_t i = 1; i < out_learnt.size(); ++i)
            abstract |= abstract_level(lit_var(out_learnt[i]));
        std::size_t keep = 1;
        for (std::size_t i = 1; i < out_learnt.size(); ++i) {
            ILit l = out_learnt[i];
            if (reason[lit_var(l)] == kCRefUndef || !lit_redundant(l, abstract))
                out_learnt[keep++] = l;
        }
        out_learnt.resize(keep);

        if (out_learnt.size() == 1) {
            out_btlevel = 0;
        } else {
            std::size_t max_i = 1;
            for (std::size_t i = 2; i < out_learnt.size(); ++i)
                if (level[lit_var(out_learnt[i])] >
                    level[lit_var(out_learnt[max_i])])
                    max_i = i;
            std::swap(out_learnt[1], out_learnt[max_i]);
            out_btlevel = level[lit_var(out_learnt[1])];
        }

        for (ILit l : analyze_toclear) seen[lit_var(l)] = 0;
        analyze_toclear.clear();
    }

    // --- learnt clause DB ----------------------------------------------------

    bool clause_locked(CRef cr) {
        std::uint32_t* lits = clause_lits(cr);
        return value(lits[0]) == 1 && reason[lit_var(lits[0])] == cr;
    }

    void detach(CRef cr) {
        std::uint32_t* lits = clause_lits(cr);
        for (int w = 0; w < 2; ++w) {
            std::vector<Watcher>& ws = watches[lit_neg(lits[w])];
            for (std::size_t i = 0; i < ws.size(); ++i) {
                if (ws[i].cref == cr) {
                    ws[i] = ws.back();
                    ws.pop_back();
                    break;
                }
            }
        }
    }

    void reduce_db() {
        // Evict the worse half by LBD; glue (LBD <= 2), binary, and locked
        // clauses are kept unconditionally.
        std::sort(learnts.begin(), learnts.end(), [this](CRef a, CRef b) {
            if (clause_lbd(a) != clause_lbd(b))
                return clause_lbd(a) > clause_lbd(b);
            return clause_size(a) > clause_size(b);
        });
        std::size_t limit = learnts.size() / 2;
        std::size_t keep = 0;
        for (std::size_t i = 0; i < learnts.size(); ++i) {
            CRef cr = learnts[i];
            if (i < limit && clause_lbd(cr) > 2 && clause_size(cr) > 2 &&
                !clause_locked(cr)) {
                detach(cr);
                wasted += clause_size(cr) + 2;
            } else {
                learnts[keep++] = cr;
            }
        }
        learnts.resize(keep);
        if (wasted > arena.size() / 3) garbage_collect();
    }

    void garbage_collect() {
        std::vector<std::uint32_t> fresh;
        fresh.reserve(arena.size() - wasted);
        auto reloc = [&](CRef cr) -> CRef {
            CRef ncr = static_cast<CRef>(fresh.size());
            std::uint32_t extra = clause_learnt(cr) ? 2 : 1;
            std::uint32_t total = clause_size(cr) + extra;
            for (std::uint32_t i = 0; i < total; ++i) fresh.push_back(arena[cr + i]);
            return ncr;
        };
        // Relocate live clauses and remember the mapping via the header slot.
        std::vector<std::pair<CRef, CRef>> moved;
        moved.reserve(clauses.size() + learnts.size());
        for (CRef& cr : clauses) {
            CRef ncr = reloc(cr);
            moved.emplace_back(cr, ncr);
            cr = ncr;
        }
        for (CRef& cr : learnts) {
            CRef ncr = reloc(cr);
            moved.emplace_back(cr, ncr);
            cr = ncr;
        }
        std::sort(moved.begin(), moved.end());
        auto remap = [&](CRef cr) -> CRef {
            auto it = std::lower_bound(moved.begin(), moved.end(),
                                       std::make_pair(cr, CRef(0)));
            return it->second;
        };
        for (int v = 0; v < nvars; ++v) {
            if (reason[v] != kCRefUndef && assigns[v] != 0) {
                // Only reasons of currently assigned vars are live.
                reason[v] = remap(reason[v]);
            } else {
                reason[v] = kCRefUndef;
            }
        }
        arena = std::move(fresh);
        wasted = 0;
        for (auto& ws : watches) ws.clear();
        for (CRef cr : clauses) attach(cr);
        for (CRef cr : learnts) attach(cr);
    }

    // --- search --------------------------------------------------------------

    ILit pick_branch_lit() {
        while (!heap.empty()) {
            int v = heap[0];
            if (assigns[v] == 0) {
                heap_pop();
                return mk_lit(v, polarity[v]);
            }
            heap_pop();
        }
        return 0xffffffffu;
    }

    // Returns +1 SAT, -1 UNSAT, 0 restart/deadline.
    int search(const std::chrono::steady_clock::time_point& deadline,
               bool has_deadline) {
        std::vector<ILit> learnt;
        for (;;) {
            CRef confl = propagate();
            if (confl != kCRefUndef) {
                ++conflicts;
                if (decision_level() == 0) return -1;

                // Block restarts while the assignment keeps growing: the
                // search is likely closing in on a model.
                trail_queue.push(static_cast<std::uint32_t>(trail.size()));
                if (conflicts > 10000 && trail_queue.full() &&
                    static_cast<double>(trail.size()) > 1.4 * trail_queue.avg())
                    lbd_queue.clear();

                int bt;
                analyze(confl, learnt, bt);
                std::uint32_t lbd = compute_lbd(learnt.data(), learnt.size());
                lbd_queue.push(lbd);
                lbd_sum += lbd;
                cancel_until(bt);
                if (learnt.size() == 1) {
                    unchecked_enqueue(learnt[0], kCRefUndef);
                } else {
                    CRef cr = alloc_clause(learnt, true);
                    set_clause_lbd(cr, lbd);
                    learnts.push_back(cr);
                    attach(cr);
                    unchecked_enqueue(learnt[0], cr);
                }
                var_inc /= var_decay;
                if ((conflicts & 255u) == 0 && has_deadline &&
                    std::chrono::steady_clock::now() >= deadline)
                    return 0;
            } else {
                // Restart when recent conflicts look much worse (higher LBD)
                // than the long-run average.
                if (lbd_queue.full() &&
                    lbd_queue.avg() * 0.8 >
                        static_cast<double>(lbd_sum) / conflicts) {
                    lbd_queue.clear();
                    cancel_until(0);
                    return 0;
                }
                if (conflicts >= next_reduce) {
                    reduce_db();
                    ++reduce_count;
                    next_reduce = conflicts + 2000 + 300ull * reduce_count;
                }

                ILit next = 0xffffffffu;
                while (decision_level() <
                       static_cast<int>(assumptions.size())) {
                    ILit p = assumptions[decision_level()];
                    if (value(p) == 1) {
                        new_decision_level(); // already satisfied
                    } else if (value(p) == -1) {
                        return -1; // conflicting assumption
                    } else {
                        next = p;
                        break;
                    }
                }
                if (next == 0xffffffffu) {
                    next = pick_branch_lit();
                    if (next == 0xffffffffu) return 1; // all assigned
                }
                new_decision_level();
                unchecked_enqueue(next, kCRefUndef);
            }
        }
    }

    SolveResult run(const std::vector<Lit>& dimacs_assumptions,
                    double time_limit) {
        auto t0 = std::chrono::steady_clock::now();
        bool has_deadline = time_limit > 0;
        auto deadline =
            t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                     std::chrono::duration<double>(has_deadline ? time_limit : 0));

        SolveResult res;
        if (!ok) {
            res.status = SolveStatus::Unsat;
            return res;
        }
        assumptions.clear();
        for (Lit l : dimacs_assumptions) {
            if (l == 0 || std::abs(l) > nvars)
                throw std::invalid_argument("assumption literal out of range");
            assumptions.push_back(from_dimacs(l));
        }

        int status = 0;
        while (status == 0) {
            if (has_deadline && std::chrono::steady_clock::now() >= deadline)
                break;
            status = search(deadline, has_deadline);
        }

        if (status == 1) {
            res.status = SolveStatus::Sat;
            res.model.assign(nvars + 1, false);
            for (int v = 0; v < nvars; ++v) res.model[v + 1] = assigns[v] == 1;
        } else if (status == -1) {
            res.status = SolveStatus::Unsat;
        } else {
            res.status = SolveStatus::Unknown;
        }
        cancel_until(0);
        res.conflicts = conflicts;
        res.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        return res;
    }
};

CdclSolver::CdclSolver(const Cnf& cnf) : impl_(std::make_unique<Impl>(cnf)) {}
CdclSolver::~CdclSolver() = default;

void CdclSolver::prefer_branching(const std::vector<Lit>& vars) {
    for (Lit v : vars) {
        if (v <= 0 || v > impl_->nvars)
            throw std::invalid_argument("preferred variable out of range");
        impl_->preferred[v - 1] = 1;
    }
    // Re-establish the heap order under the new comparison.
    std::vector<int> vs = impl_->heap;
    for (int v : vs) impl_->heap_pos[v] = -1;
    impl_->heap.clear();
    for (int v : vs) impl_->heap_insert(v);
}

SolveResult CdclSolver::solve(const std::vector<Lit>& assumptions,
                              double time_limit_seconds) {
    return impl_->run(assumptions, time_limit_seconds);
}

} // namespace mdsat
