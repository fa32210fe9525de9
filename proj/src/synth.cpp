#include "rail/synth.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cassert>
#include <deque>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "json.hpp"

namespace rail {

// ---------------------------------------------------------------------------
// Parameter sets
// ---------------------------------------------------------------------------

namespace {

int compare_zone_rows(const ParametricZone& a, const ParametricZone& b) {
    const auto& ra = a.rows();
    const auto& rb = b.rows();
    size_t n = std::min(ra.size(), rb.size());
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < ra[i].coef.size(); ++j) {
            int c = rat_cmp(ra[i].coef[j], rb[i].coef[j]);
            if (c != 0) return c;
        }
        if (ra[i].rel != rb[i].rel)
            return static_cast<int>(ra[i].rel) < static_cast<int>(rb[i].rel) ? -1 : 1;
        int c = rat_cmp(ra[i].rhs, rb[i].rhs);
        if (c != 0) return c;
    }
    if (ra.size() != rb.size()) return ra.size() < rb.size() ? -1 : 1;
    return 0;
}

}  // namespace

ParameterSet canonicalize_param_set(VarSpacePtr space, std::vector<ParametricZone> raw) {
    ParameterSet out;
    out.space = space;
    std::vector<ParametricZone> canon;
    for (auto& z : raw) {
        ParametricZone c = zone_canonical(z);
        if (c.marked_empty()) continue;
        bool dup = false;
        for (const auto& have : canon)
            if (have.rows() == c.rows()) {
                dup = true;
                break;
            }
        if (!dup) canon.push_back(std::move(c));
    }
    // keep only maximal disjuncts
    std::vector<bool> dead(canon.size(), false);
    for (size_t i = 0; i < canon.size(); ++i) {
        for (size_t j = 0; j < canon.size(); ++j) {
            if (i == j || dead[i] || dead[j]) continue;
            if (zone_includes(canon[i], canon[j])) {
                // i subset of j: drop i unless equal rows (already deduped)
                dead[i] = true;
            }
        }
    }
    for (size_t i = 0; i < canon.size(); ++i)
        if (!dead[i]) out.disjuncts.push_back(std::move(canon[i]));
    std::sort(out.disjuncts.begin(), out.disjuncts.end(),
              [](const ParametricZone& a, const ParametricZone& b) {
                  return compare_zone_rows(a, b) < 0;
              });
    return out;
}

bool ParameterSet::contains(const std::map<std::string, Rational>& valuation) const {
    std::vector<Rat> point(space->size());
    for (size_t i = 0; i < space->size(); ++i) {
        auto it = valuation.find(space->names[i]);
        if (it == valuation.end())
            throw PtaError("ERR_PARTIAL_VALUATION", "no value for parameter " + space->names[i]);
        point[i] = Rat(it->second);
    }
    for (const auto& d : disjuncts)
        if (zone_contains_point(d, point)) return true;
    return false;
}

std::string ParameterSet::to_string() const {
    if (disjuncts.empty()) return "false";
    std::string out;
    for (size_t i = 0; i < disjuncts.size(); ++i) {
        if (i) out += " || ";
        if (disjuncts[i].rows().empty()) return "true";
        out += "(" + zone_to_string(disjuncts[i]) + ")";
    }
    return out;
}

std::optional<Rational> param_set_min(const ParameterSet& set, const std::string& param) {
    auto idx = set.space->index_of(param);
    if (!idx) return std::nullopt;
    std::optional<Rational> best;
    for (const auto& d : set.disjuncts) {
        auto m = zone_min_of_var(d, *idx);
        if (!m) continue;
        if (!best || *m < *best) best = m;
    }
    return best;
}

std::vector<std::string> locked_segments_of_location(const std::string& loc) {
    auto body = [&](const std::string& prefix) -> std::optional<std::string> {
        if (loc.rfind(prefix, 0) != 0) return std::nullopt;
        auto close = loc.find(')');
        if (close == std::string::npos) return std::nullopt;
        return loc.substr(prefix.size(), close - prefix.size());
    };
    if (auto s = body("seg(")) {
        auto at = s->find('@');
        return {at == std::string::npos ? *s : s->substr(0, at)};
    }
    if (auto v = body("via(")) {
        auto c1 = v->find(',');
        auto c2 = v->rfind(',');
        if (c1 == std::string::npos || c2 == c1) return {};
        return {v->substr(0, c1), v->substr(c2 + 1)};
    }
    return {};
}

// ---------------------------------------------------------------------------
// Network compilation
// ---------------------------------------------------------------------------

namespace {

struct CompiledEdge {
    uint32_t target = 0;
    std::vector<LinRow> guard_rows;
    std::vector<std::pair<size_t, long>> dpreds;
    std::vector<size_t> resets;
    std::vector<std::pair<size_t, long>> updates;
};

struct CompiledComponent {
    std::vector<std::string> loc_names;
    uint32_t initial = 0;
    uint32_t final = 0;
    std::vector<std::vector<LinRow>> invariants;                    // per location
    std::vector<std::map<size_t, std::vector<CompiledEdge>>> out;  // per location: action -> edges
    // Clocks this component may still read before resetting them, per
    // location (indices into the network clock table). Dead clocks are
    // projected away from zones; exact for reachability.
    std::vector<uint64_t> active_clocks;
};

struct Compiled {
    VarSpacePtr space;
    VarSpacePtr pspace;
    std::vector<CompiledComponent> comps;
    std::vector<std::string> actions;
    std::vector<std::vector<size_t>> owners;  // per action
    std::vector<long> disc_init;
    std::vector<std::string> var_names;
    ParametricZone initial_zone;
    std::vector<uint32_t> initial_locs;
};

// Projects away constrained-but-dead clock dimensions for the given
// location vector (their values can never be read again before a reset).
ParametricZone free_dead_clocks(const Compiled& net, const std::vector<uint32_t>& locs,
                                ParametricZone z) {
    if (net.space->clock_count == 0 || net.space->clock_count > 64 || z.marked_empty()) return z;
    uint64_t active = 0;
    for (size_t i = 0; i < net.comps.size(); ++i) active |= net.comps[i].active_clocks[locs[i]];
    std::vector<size_t> dead;
    for (size_t ci = 0; ci < net.space->clock_count; ++ci) {
        if ((active >> ci) & 1) continue;
        for (const auto& row : z.rows()) {
            if (!row.coef[ci].is_zero()) {
                dead.push_back(ci);
                break;
            }
        }
    }
    if (dead.empty()) return z;
    return zone_eliminate(z, dead);
}

LinRow atom_to_row(const AtomicConstraint& a, const VarSpace& space) {
    LinRow row;
    row.coef.assign(space.size(), Rat(0));
    size_t ci = *space.index_of(a.clock);
    bool flip = a.op == CmpOp::Ge || a.op == CmpOp::Gt;
    Rat sign(flip ? -1 : 1);
    row.coef[ci] = sign;
    for (const auto& [p, alpha] : a.term.coeffs) {
        size_t pi = *space.index_of(p);
        row.coef[pi] -= sign * Rat(alpha);
    }
    row.rhs = sign * Rat(a.term.constant);
    switch (a.op) {
        case CmpOp::Le:
        case CmpOp::Ge: row.rel = Rel::Le; break;
        case CmpOp::Lt:
        case CmpOp::Gt: row.rel = Rel::Lt; break;
        case CmpOp::Eq: row.rel = Rel::Eq; break;
    }
    return row;
}

Compiled compile(const SynthesisProblem& problem, EngineMutation mutation) {
    const PtaNetwork& net = problem.network;
    Compiled c;
    std::vector<std::string> params;
    for (const auto& p : net.parameters) params.push_back(p.name);
    c.space = make_var_space(net.clocks, params);
    c.pspace = param_space_of(*c.space);

    std::map<std::string, size_t> action_index;
    for (const auto& pta : net.components) {
        for (const auto& a : pta.actions) {
            if (!action_index.count(a)) {
                action_index[a] = c.actions.size();
                c.actions.push_back(a);
            }
        }
    }
    c.owners.resize(c.actions.size());

    std::map<std::string, size_t> var_index;
    for (const auto& v : net.variables) {
        var_index[v.name] = c.disc_init.size();
        c.var_names.push_back(v.name);
        c.disc_init.push_back(v.init);
    }

    for (size_t ci = 0; ci < net.components.size(); ++ci) {
        const Pta& pta = net.components[ci];
        CompiledComponent comp;
        comp.loc_names = pta.locations;
        std::map<std::string, uint32_t> loc_index;
        for (size_t i = 0; i < pta.locations.size(); ++i)
            loc_index[pta.locations[i]] = static_cast<uint32_t>(i);
        comp.initial = loc_index.at(pta.initial);
        comp.final = loc_index.at(pta.final_loc);
        comp.invariants.resize(pta.locations.size());
        for (const auto& [loc, atoms] : pta.invariants) {
            auto& rows = comp.invariants[loc_index.at(loc)];
            for (const auto& a : atoms) rows.push_back(atom_to_row(a, *c.space));
        }
        comp.out.resize(pta.locations.size());
        for (const auto& e : pta.edges) {
            CompiledEdge ce;
            ce.target = loc_index.at(e.target);
            for (const auto& a : e.guard.clocks) ce.guard_rows.push_back(atom_to_row(a, *c.space));
            if (mutation != EngineMutation::DropDiscreteGuards)
                for (const auto& d : e.guard.discrete)
                    ce.dpreds.emplace_back(var_index.at(d.var), d.value);
            if (mutation != EngineMutation::SkipClockResets)
                for (const auto& r : e.resets) ce.resets.push_back(*c.space->index_of(r));
            std::sort(ce.resets.begin(), ce.resets.end());
            ce.resets.erase(std::unique(ce.resets.begin(), ce.resets.end()), ce.resets.end());
            for (const auto& u : e.updates) ce.updates.emplace_back(var_index.at(u.var), u.value);
            comp.out[loc_index.at(e.source)][action_index.at(e.action)].push_back(std::move(ce));
        }
        for (const auto& a : pta.actions) c.owners[action_index.at(a)].push_back(ci);

        // backward fixpoint of clock activity over this component's graph
        auto clock_bit = [&](const std::string& name) -> uint64_t {
            auto idx = c.space->index_of(name);
            return idx && *idx < 64 ? (1ull << *idx) : 0;
        };
        size_t nlocs = pta.locations.size();
        std::vector<uint64_t> inv_reads(nlocs, 0);
        for (const auto& [loc, atoms] : pta.invariants)
            for (const auto& a : atoms) inv_reads[loc_index.at(loc)] |= clock_bit(a.clock);
        struct EdgeInfo {
            size_t src, dst;
            uint64_t reads = 0, resets = 0;
        };
        std::vector<EdgeInfo> edge_info;
        for (const auto& e : pta.edges) {
            EdgeInfo info;
            info.src = loc_index.at(e.source);
            info.dst = loc_index.at(e.target);
            for (const auto& a : e.guard.clocks) info.reads |= clock_bit(a.clock);
            for (const auto& r : e.resets) info.resets |= clock_bit(r);
            edge_info.push_back(info);
        }
        comp.active_clocks = inv_reads;
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& e : edge_info) {
                uint64_t flow = e.reads | (comp.active_clocks[e.dst] & ~e.resets);
                uint64_t next = comp.active_clocks[e.src] | flow | inv_reads[e.src];
                if (next != comp.active_clocks[e.src]) {
                    comp.active_clocks[e.src] = next;
                    changed = true;
                }
            }
        }
        c.comps.push_back(std::move(comp));
    }

    for (const auto& comp : c.comps) c.initial_locs.push_back(comp.initial);

    // initial zone: all clocks zero, parameter boxes, elapsed under the
    // initial invariants
    ParametricZone z0(c.space);
    std::vector<LinRow> rows;
    for (size_t i = 0; i < c.space->clock_count; ++i) {
        LinRow r;
        r.coef.assign(c.space->size(), Rat(0));
        r.coef[i] = Rat(1);
        r.rel = Rel::Eq;
        r.rhs = Rat(0);
        rows.push_back(std::move(r));
    }
    for (const auto& p : net.parameters) {
        if (!p.bounds) continue;
        size_t pi = *c.space->index_of(p.name);
        if (p.bounds->first > 0) {
            LinRow lo;
            lo.coef.assign(c.space->size(), Rat(0));
            lo.coef[pi] = Rat(-1);
            lo.rel = Rel::Le;
            lo.rhs = Rat(Rational(-p.bounds->first));
            rows.push_back(std::move(lo));
        }
        LinRow hi;
        hi.coef.assign(c.space->size(), Rat(0));
        hi.coef[pi] = Rat(1);
        hi.rel = Rel::Le;
        hi.rhs = Rat(p.bounds->second);
        rows.push_back(std::move(hi));
    }
    z0 = zone_with_rows(c.space, std::move(rows));
    std::vector<LinRow> inv_rows;
    for (size_t i = 0; i < c.comps.size(); ++i)
        for (const auto& r : c.comps[i].invariants[c.initial_locs[i]]) inv_rows.push_back(r);
    c.initial_zone = zone_time_elapse(z0, zone_with_rows(c.space, std::move(inv_rows)));
    c.initial_zone = free_dead_clocks(c, c.initial_locs, std::move(c.initial_zone));
    return c;
}

// ---------------------------------------------------------------------------
// Exploration
// ---------------------------------------------------------------------------

struct KeyHash {
    size_t operator()(const std::vector<long>& key) const {
        size_t h = 1469598103934665603ull;
        for (long v : key) {
            h ^= static_cast<size_t>(v) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

std::vector<long> state_key(const std::vector<uint32_t>& locs, const std::vector<long>& disc) {
    std::vector<long> key;
    key.reserve(locs.size() + disc.size());
    for (auto l : locs) key.push_back(static_cast<long>(l));
    for (auto d : disc) key.push_back(d);
    return key;
}

class Explorer {
public:
    Explorer(const Compiled& net, const ExploreOptions& options)
        : net_(net), opt_(options) {}

    SynthResult run() {
        SymbolicState init{net_.initial_locs, net_.disc_init, net_.initial_zone, {}};
        SynthResult out;
        auto w = zone_feasible_point(init.zone);
        if (!w) {
            out.result = canonicalize_param_set(net_.pspace, {});
            return out;
        }
        init.witness = std::move(*w);
        bool bounded = false;
        insert_state(init);
        if (opt_.order == SearchOrder::Bfs)
            bounded = run_bfs(init);
        else
            bounded = run_dfs(init);
        if (bounded && opt_.limits.strict) throw LimitError();
        out.status = bounded ? SynthStatus::Bounded : SynthStatus::Complete;
        out.result = canonicalize_param_set(net_.pspace, accumulated_);
        out.stats = stats_;
        return out;
    }

private:
    bool run_bfs(const SymbolicState& init) {
        std::vector<SymbolicState> frontier;
        if (!handle_target(init)) frontier.push_back(init);
        size_t depth = 0;
        while (!frontier.empty()) {
            if (depth >= opt_.limits.max_depth) return true;
            ++depth;
            stats_.depth_reached = std::max(stats_.depth_reached, depth);
            std::vector<std::vector<SymbolicState>> batches(frontier.size());
            unsigned workers = std::max(1u, opt_.threads);
            if (workers == 1 || frontier.size() == 1) {
                for (size_t i = 0; i < frontier.size(); ++i) batches[i] = successors(frontier[i]);
            } else {
                std::vector<std::thread> pool;
                std::atomic<size_t> next{0};
                for (unsigned w = 0; w < workers; ++w) {
                    pool.emplace_back([&] {
                        while (true) {
                            size_t i = next.fetch_add(1);
                            if (i >= frontier.size()) break;
                            batches[i] = successors(frontier[i]);
                        }
                    });
                }
                for (auto& t : pool) t.join();
            }
            std::vector<SymbolicState> next_frontier;
            for (auto& batch : batches) {
                for (auto& s : batch) {
                    if (stats_.states_explored >= opt_.limits.max_states) return true;
                    if (!insert_state(s)) continue;
                    if (handle_target(s)) continue;
                    next_frontier.push_back(std::move(s));
                }
            }
            frontier = std::move(next_frontier);
        }
        return false;
    }

    bool run_dfs(const SymbolicState& init) {
        std::vector<std::pair<SymbolicState, size_t>> stack;
        if (!handle_target(init)) stack.push_back({init, 0});
        while (!stack.empty()) {
            auto [state, depth] = std::move(stack.back());
            stack.pop_back();
            if (depth >= opt_.limits.max_depth) return true;
            stats_.depth_reached = std::max(stats_.depth_reached, depth + 1);
            auto succ = successors(state);
            for (auto it = succ.rbegin(); it != succ.rend(); ++it) {
                if (stats_.states_explored >= opt_.limits.max_states) return true;
                if (!insert_state(*it)) continue;
                if (handle_target(*it)) continue;
                stack.push_back({std::move(*it), depth + 1});
            }
        }
        return false;
    }

    // true if the state is a target (projection accumulated; not expanded)
    bool handle_target(const SymbolicState& s) {
        for (size_t i = 0; i < net_.comps.size(); ++i)
            if (s.locs[i] != net_.comps[i].final) return false;
        ++stats_.target_hits;
        ParametricZone proj = zone_canonical(zone_project_params(s.zone));
        if (proj.marked_empty()) return true;
        for (const auto& have : accumulated_)
            if (zone_includes(proj, have)) return true;  // already covered
        accumulated_.erase(std::remove_if(accumulated_.begin(), accumulated_.end(),
                                          [&](const ParametricZone& have) {
                                              return zone_includes(have, proj);
                                          }),
                           accumulated_.end());
        accumulated_.push_back(std::move(proj));
        return true;
    }

    // inclusion-pruned insertion into the visited store; witness points rule
    // out most inclusions without touching the solver. Stored zones whose
    // union with the incoming zone is exactly representable are merged into
    // it (the merged state is explored in place of the incoming one).
    bool insert_state(SymbolicState& s) {
        if (progress_ && stats_.states_explored % 20000 == 19999) {
            size_t maxzk = 0;
            const std::vector<StoredZone>* big = nullptr;
            for (const auto& [k, zs] : visited_) {
                if (zs.size() > maxzk) {
                    maxzk = zs.size();
                    big = &zs;
                }
            }
            std::fprintf(stderr,
                         "progress: states=%zu pruned=%zu keys=%zu merged=%zu targets=%zu maxzk=%zu\n",
                         stats_.states_explored, stats_.states_pruned, visited_.size(),
                         stats_.merged, stats_.target_hits, maxzk);
            if (std::getenv("RAILSYNTH_DUMPZONES") && big != nullptr) {
                for (size_t zi = 0; zi < std::min<size_t>(6, big->size()); ++zi)
                    std::fprintf(stderr, "  zone[%zu]: %s\n", zi,
                                 zone_to_string((*big)[zi].zone).c_str());
            }
        }
        auto key = state_key(s.locs, s.disc);
        auto& zones = visited_[std::move(key)];
        for (const auto& stored : zones) {
            if (!zone_contains_point(stored.zone, s.witness)) continue;
            if (zone_includes(s.zone, stored.zone)) {
                ++stats_.states_pruned;
                return false;
            }
        }
        // drop stored zones the new one covers
        zones.erase(std::remove_if(zones.begin(), zones.end(),
                                   [&](const StoredZone& stored) {
                                       return zone_contains_point(s.zone, stored.witness) &&
                                              zone_includes(stored.zone, s.zone);
                                   }),
                    zones.end());
        // exact convex merging against the remaining stored zones
        bool merged = true;
        while (merged) {
            merged = false;
            for (auto it = zones.begin(); it != zones.end(); ++it) {
                auto m = zone_merge_one_direction(s.zone, it->zone);
                if (m && !m->marked_empty()) {
                    s.zone = std::move(*m);
                    zones.erase(it);
                    ++stats_.merged;
                    merged = true;
                    break;
                }
            }
        }
        zones.push_back({s.zone, s.witness});
        // Periodic pairwise sweep: unions of already-explored zones need no
        // re-exploration (successor computation distributes over exact
        // unions), so stored pairs can merge in place.
        if (zones.size() >= 4 && zones.size() % 4 == 0) {
            bool again = true;
            while (again) {
                again = false;
                for (size_t i = 0; i < zones.size() && !again; ++i) {
                    for (size_t j = i + 1; j < zones.size() && !again; ++j) {
                        auto m = zone_merge_one_direction(zones[i].zone, zones[j].zone);
                        if (m && !m->marked_empty()) {
                            zones[i].zone = std::move(*m);
                            zones.erase(zones.begin() + static_cast<long>(j));
                            ++stats_.merged;
                            again = true;
                        }
                    }
                }
            }
        }
        ++stats_.states_explored;
        if (opt_.on_state) opt_.on_state(s);
        return true;
    }

    std::vector<SymbolicState> successors(const SymbolicState& s) const {
        std::vector<SymbolicState> out;
        std::vector<LinRow> inv_rows;
        for (size_t i = 0; i < net_.comps.size(); ++i)
            for (const auto& r : net_.comps[i].invariants[s.locs[i]]) inv_rows.push_back(r);
        // nonempty: the parent zone satisfies the invariants and d=0 delays
        ParametricZone elapsed =
            zone_time_elapse(s.zone, zone_with_rows(net_.space, std::move(inv_rows)));
        if (elapsed.marked_empty()) return out;

        for (size_t a = 0; a < net_.actions.size(); ++a) {
            const auto& owners = net_.owners[a];
            if (owners.empty()) continue;
            std::vector<const std::vector<CompiledEdge>*> menus;
            std::vector<std::vector<const CompiledEdge*>> choices(owners.size());
            bool blocked = false;
            for (size_t oi = 0; oi < owners.size(); ++oi) {
                const auto& comp = net_.comps[owners[oi]];
                auto it = comp.out[s.locs[owners[oi]]].find(a);
                if (it == comp.out[s.locs[owners[oi]]].end()) {
                    blocked = true;
                    break;
                }
                for (const auto& e : it->second) {
                    bool pass = true;
                    for (const auto& [var, val] : e.dpreds) {
                        if (s.disc[var] != val) {
                            pass = false;
                            break;
                        }
                    }
                    if (pass) choices[oi].push_back(&e);
                }
                if (choices[oi].empty()) {
                    blocked = true;
                    break;
                }
            }
            if (blocked) continue;

            std::vector<size_t> pick(owners.size(), 0);
            while (true) {
                std::vector<LinRow> rows = elapsed.rows();
                std::vector<size_t> resets;
                for (size_t oi = 0; oi < owners.size(); ++oi) {
                    const CompiledEdge* e = choices[oi][pick[oi]];
                    rows.insert(rows.end(), e->guard_rows.begin(), e->guard_rows.end());
                    resets.insert(resets.end(), e->resets.begin(), e->resets.end());
                }
                ParametricZone fired = zone_with_rows(net_.space, std::move(rows));
                if (!fired.marked_empty()) {
                    std::sort(resets.begin(), resets.end());
                    resets.erase(std::unique(resets.begin(), resets.end()), resets.end());
                    ParametricZone after = zone_reset(fired, resets);
                    SymbolicState ns;
                    ns.locs = s.locs;
                    ns.disc = s.disc;
                    for (size_t oi = 0; oi < owners.size(); ++oi) {
                        const CompiledEdge* e = choices[oi][pick[oi]];
                        ns.locs[owners[oi]] = e->target;
                        for (const auto& [var, val] : e->updates) ns.disc[var] = val;
                    }
                    if (opt_.mutation != EngineMutation::DropTargetInvariant) {
                        std::vector<LinRow> target_inv;
                        for (size_t i = 0; i < net_.comps.size(); ++i)
                            for (const auto& r : net_.comps[i].invariants[ns.locs[i]])
                                target_inv.push_back(r);
                        after = zone_intersect(after, zone_with_rows(net_.space, std::move(target_inv)));
                    }
                    after = free_dead_clocks(net_, ns.locs, std::move(after));
                    // single solver call per successor, doubling as witness extraction
                    auto w = zone_feasible_point(after);
                    if (w) {
                        ns.zone = std::move(after);
                        ns.witness = std::move(*w);
                        out.push_back(std::move(ns));
                    }
                }
                // next combination
                size_t k = 0;
                while (k < pick.size()) {
                    if (++pick[k] < choices[k].size()) break;
                    pick[k] = 0;
                    ++k;
                }
                if (k == pick.size()) break;
            }
        }
        return out;
    }

    struct StoredZone {
        ParametricZone zone;
        std::vector<Rat> witness;
    };

    const Compiled& net_;
    const ExploreOptions& opt_;
    bool progress_ = std::getenv("RAILSYNTH_PROGRESS") != nullptr;
    std::unordered_map<std::vector<long>, std::vector<StoredZone>, KeyHash> visited_;
    std::vector<ParametricZone> accumulated_;
    SynthStats stats_;
};

}  // namespace

SynthResult ef_synth(const SynthesisProblem& problem, const ExploreOptions& options) {
    Compiled net = compile(problem, options.mutation);
    return Explorer(net, options).run();
}

ConcreteCheck check_concrete(const SynthesisProblem& problem,
                             const std::map<std::string, Rational>& v,
                             const ExploreOptions& options) {
    SynthesisProblem concrete;
    concrete.network = valuate(problem.network, v);
    SynthResult r = ef_synth(concrete, options);
    return {!r.result.empty(), r.status};
}

std::string format_result_text(const SynthResult& r) {
    std::ostringstream os;
    os << "status: " << (r.status == SynthStatus::Complete ? "complete" : "bounded") << "\n";
    os << "result: " << r.result.to_string() << "\n";
    return os.str();
}

std::string format_result_json(const SynthResult& r) {
    nlohmann::json j;
    j["status"] = r.status == SynthStatus::Complete ? "complete" : "bounded";
    nlohmann::json disjuncts = nlohmann::json::array();
    for (const auto& d : r.result.disjuncts) {
        nlohmann::json atoms = nlohmann::json::array();
        for (const auto& row : d.rows())
            atoms.push_back(row_to_string(row, d.space()->names));
        disjuncts.push_back(atoms);
    }
    j["result"] = disjuncts;
    j["stats"] = {{"states_explored", r.stats.states_explored},
                  {"states_pruned", r.stats.states_pruned},
                  {"target_hits", r.stats.target_hits},
                  {"depth", r.stats.depth_reached}};
    return j.dump(2) + "\n";
}

}  // namespace rail
