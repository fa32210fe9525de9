#include "rail/translate.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <set>
#include <sstream>

namespace rail {

std::string train_clock_name(const std::string& train_id) {
    std::string name = "x_" + train_id;
    if (name == "x_abs") name = "x_abs_train";
    return name;
}

std::string segment_free_var(const std::string& seg_id) { return "seg_free(" + seg_id + ")"; }

std::string connection_counter_var(const std::string& train_id) { return "cnt(" + train_id + ")"; }

namespace {

LinearTerm term_of(const EffectiveDuration& e, bool lo_case) {
    if (e.kind == EffectiveDuration::Kind::Constant) return LinearTerm::of_constant(e.value);
    if (e.kind == EffectiveDuration::Kind::Param) return LinearTerm::of_param(e.param);
    return lo_case ? LinearTerm::of_constant(e.value) : LinearTerm::of_param(e.param);
}

// One case location of a segment or traversal place.
struct PlaceVariant {
    std::string loc;
    std::vector<AtomicConstraint> invariant;  // empty = none
    std::vector<AtomicConstraint> exit_guard;
};

// Builds the case variants for a place with the given effective duration.
// `dwell` places have no invariant and a lower-bound exit; exact places pin
// the exit time. For max(p, c) the exit guard encodes the case assumption on
// the pinned clock (x = p && x >= c  iff  x = max(p,c) && p >= c).
std::vector<PlaceVariant> make_variants(const std::string& base, const std::string& clock,
                                        const EffectiveDuration& e, bool dwell) {
    std::vector<PlaceVariant> out;
    auto atom = [&](CmpOp op, LinearTerm t) { return AtomicConstraint{clock, op, std::move(t)}; };
    if (dwell) {
        PlaceVariant v;
        v.loc = base;
        if (e.kind == EffectiveDuration::Kind::MaxParamConst) {
            v.exit_guard = {atom(CmpOp::Ge, LinearTerm::of_param(e.param)),
                            atom(CmpOp::Ge, LinearTerm::of_constant(e.value))};
        } else {
            v.exit_guard = {atom(CmpOp::Ge, term_of(e, false))};
        }
        out.push_back(std::move(v));
        return out;
    }
    if (e.kind != EffectiveDuration::Kind::MaxParamConst) {
        PlaceVariant v;
        v.loc = base;
        v.invariant = {atom(CmpOp::Le, term_of(e, false))};
        v.exit_guard = {atom(CmpOp::Eq, term_of(e, false))};
        out.push_back(std::move(v));
        return out;
    }
    PlaceVariant hi;
    hi.loc = base + ":hi";
    hi.invariant = {atom(CmpOp::Le, LinearTerm::of_param(e.param))};
    hi.exit_guard = {atom(CmpOp::Eq, LinearTerm::of_param(e.param)),
                     atom(CmpOp::Ge, LinearTerm::of_constant(e.value))};
    PlaceVariant lo;
    lo.loc = base + ":lo";
    lo.invariant = {atom(CmpOp::Le, LinearTerm::of_constant(e.value))};
    lo.exit_guard = {atom(CmpOp::Eq, LinearTerm::of_constant(e.value)),
                     atom(CmpOp::Ge, LinearTerm::of_param(e.param))};
    out.push_back(std::move(hi));
    out.push_back(std::move(lo));
    return out;
}

void note_params(std::set<std::string>& params, const std::vector<AtomicConstraint>& atoms) {
    for (const auto& a : atoms)
        for (const auto& [p, _] : a.term.coeffs) params.insert(p);
}

}  // namespace

Pta translate_train(const Train& train, const RailNetworkGraph& graph,
                    const ActionCatalog& catalog) {
    assert(!train.connection.empty());
    const auto& conn = train.connection;
    const std::string& b0 = conn.front();
    const size_t m = conn.size() - 1;  // index of the last connection element
    const std::string clock = train_clock_name(train.id);
    const std::string cnt = connection_counter_var(train.id);
    const bool has_counter = conn.size() >= 2;

    Pta pta;
    pta.name = "train_" + train.id;
    pta.clocks = {clock};

    std::string start_loc = "boundary(" + b0 + ")";
    if (conn.size() == 1) {
        // Degenerate connection: the train never enters the network.
        pta.locations = {start_loc};
        pta.initial = start_loc;
        pta.final_loc = start_loc;
        return pta;
    }

    EffectiveDurations eff = resolve_effective_durations(train, graph);
    auto moves = traversable_pairs(graph);

    auto other_end = [&](const std::string& seg, const std::string& node) {
        const Segment* sg = graph.find_segment(seg);
        return sg->end_a == node ? sg->end_b : sg->end_a;
    };

    // Directed segment uses (segment, exit endpoint): a train traverses a
    // segment end to end, so occupancy remembers the direction of travel and
    // in-segment U-turns are impossible (the double-vertex discipline).
    using SegUse = std::pair<std::string, std::string>;  // (segment, toward)
    std::set<SegUse> reachable;
    std::deque<SegUse> work;
    for (const auto& s : graph.incident_segments(b0)) {
        SegUse use{s, other_end(s, b0)};
        if (reachable.insert(use).second) work.push_back(use);
    }
    while (!work.empty()) {
        auto [s, node] = work.front();
        work.pop_front();
        for (const auto& [from, via, to] : moves) {
            if (from != s || via != node) continue;
            SegUse use{to, other_end(to, via)};
            if (reachable.insert(use).second) work.push_back(use);
        }
    }

    const Node* last_node = graph.find_node(conn.back());
    const bool last_is_boundary = last_node != nullptr && last_node->kind == NodeKind::Boundary;
    std::set<std::string> conn_set(conn.begin(), conn.end());

    // Position j of the connection is counted on a traversal arrival unless
    // it is the terminal boundary, which is counted on the exit arrival.
    auto via_positions = [&](const std::string& node) {
        std::vector<size_t> out;
        for (size_t j = 1; j <= m; ++j)
            if (conn[j] == node && !(j == m && last_is_boundary)) out.push_back(j);
        return out;
    };

    // Static satisfiability of the connection under the counter semantics,
    // over the product (use, visits counted). Uses from which the connection
    // can no longer be completed are dropped: no accepting run enters them.
    {
        using Prod = std::pair<SegUse, size_t>;
        std::set<Prod> forward;
        std::deque<Prod> q;
        std::map<Prod, std::vector<Prod>> preds;
        for (const auto& s : graph.incident_segments(b0)) {
            SegUse use{s, other_end(s, b0)};
            if (reachable.count(use) && forward.insert({use, 1}).second) q.push_back({use, 1});
        }
        auto end_ok = [&](const SegUse& use, size_t c) {
            const Node* n = graph.find_node(use.second);
            if (n == nullptr || n->kind != NodeKind::Boundary) return false;
            if (last_is_boundary) return use.second == conn[m] && c == m;
            return c == conn.size();
        };
        while (!q.empty()) {
            auto [use, c] = q.front();
            q.pop_front();
            for (const auto& [from, via, to] : moves) {
                if (from != use.first || via != use.second) continue;
                size_t c2 = c;
                if (c <= m && conn[c] == via && !(c == m && last_is_boundary)) c2 = c + 1;
                SegUse next{to, other_end(to, via)};
                if (!reachable.count(next)) continue;
                Prod np{next, c2};
                preds[np].push_back({use, c});
                if (forward.insert(np).second) q.push_back(np);
            }
        }
        std::set<Prod> live;
        std::deque<Prod> back;
        for (const auto& p : forward) {
            if (end_ok(p.first, p.second)) {
                live.insert(p);
                back.push_back(p);
            }
        }
        if (live.empty())
            throw TranslateError("ERR_UNREACHABLE_CONNECTION",
                                 "train " + train.id + ": connection cannot be completed in order");
        while (!back.empty()) {
            Prod p = back.front();
            back.pop_front();
            auto it = preds.find(p);
            if (it == preds.end()) continue;
            for (const auto& pre : it->second)
                if (live.insert(pre).second) back.push_back(pre);
        }
        std::set<SegUse> live_uses;
        for (const auto& p : live) live_uses.insert(p.first);
        reachable = std::move(live_uses);
    }

    // Places and their case variants; both uses of a segment share its
    // effective duration.
    std::map<SegUse, std::vector<PlaceVariant>> seg_variants;
    for (const auto& use : reachable)
        seg_variants[use] = make_variants("seg(" + use.first + "@" + use.second + ")", clock,
                                          eff.segment.at(use.first), false);

    std::vector<std::tuple<std::string, std::string, std::string>> vias;
    for (const auto& mv : moves) {
        const auto& [from, node, to] = mv;
        if (reachable.count({from, node}) && reachable.count({to, other_end(to, node)}))
            vias.push_back(mv);
    }
    std::map<std::tuple<std::string, std::string, std::string>, std::vector<PlaceVariant>>
        via_variants;
    for (const auto& mv : vias) {
        const auto& [from, node, to] = mv;
        const Node* n = graph.find_node(node);
        bool dwell = n != nullptr && n->kind == NodeKind::Station && conn_set.count(node);
        std::string base = "via(" + from + "," + node + "," + to + ")";
        auto it = eff.pair.find({from, to});
        assert(it != eff.pair.end());
        via_variants[mv] = make_variants(base, clock, it->second, dwell);
    }

    std::set<std::string> params;
    std::set<std::string> actions;

    pta.locations.push_back(start_loc);
    for (const auto& [use, variants] : seg_variants) {
        for (const auto& v : variants) {
            pta.locations.push_back(v.loc);
            if (!v.invariant.empty()) pta.invariants[v.loc] = v.invariant;
            note_params(params, v.invariant);
            note_params(params, v.exit_guard);
        }
    }
    for (const auto& [mv, variants] : via_variants) {
        for (const auto& v : variants) {
            pta.locations.push_back(v.loc);
            if (!v.invariant.empty()) pta.invariants[v.loc] = v.invariant;
            note_params(params, v.invariant);
            note_params(params, v.exit_guard);
        }
    }
    pta.locations.push_back("done");
    pta.initial = start_loc;
    pta.final_loc = "done";

    auto push_edge = [&](Edge e) {
        actions.insert(e.action);
        pta.edges.push_back(std::move(e));
    };

    // Departure from the start boundary into a first segment. The start
    // location has no invariant: the train may wait arbitrarily long before
    // entering the network.
    for (const auto& s : graph.incident_segments(b0)) {
        auto it = seg_variants.find({s, other_end(s, b0)});
        if (it == seg_variants.end()) continue;
        for (const auto& v : it->second) {
            Edge e;
            e.source = start_loc;
            e.target = v.loc;
            e.action = catalog.departure(train.id, b0);
            e.guard.discrete = {{segment_free_var(s), 1}};
            e.resets = {clock};
            e.updates = {{segment_free_var(s), 0}};
            push_edge(std::move(e));
        }
    }

    // Traversal arrivals and departures (the two-segment pattern).
    for (const auto& mv : vias) {
        const auto& [from, node, to] = mv;
        auto positions = via_positions(node);
        for (const auto& sv : seg_variants.at({from, node})) {
            for (const auto& nv : via_variants.at(mv)) {
                auto emit = [&](std::vector<DiscretePredicate> extra,
                                std::vector<DiscreteUpdate> extra_updates) {
                    Edge e;
                    e.source = sv.loc;
                    e.target = nv.loc;
                    e.action = catalog.arrival(train.id, node);
                    e.guard.clocks = sv.exit_guard;
                    e.guard.discrete = {{segment_free_var(to), 1}};
                    for (auto& d : extra) e.guard.discrete.push_back(std::move(d));
                    e.resets = {clock};
                    e.updates = {{segment_free_var(to), 0}};
                    for (auto& u : extra_updates) e.updates.push_back(std::move(u));
                    push_edge(std::move(e));
                };
                if (positions.empty()) {
                    emit({}, {});
                } else {
                    // the listed visit binds to the first qualifying arrival
                    for (size_t w = 1; w <= conn.size(); ++w) {
                        bool counted =
                            std::find(positions.begin(), positions.end(), w) != positions.end();
                        if (counted)
                            emit({{cnt, static_cast<long>(w)}},
                                 {{cnt, static_cast<long>(w + 1)}});
                        else
                            emit({{cnt, static_cast<long>(w)}}, {});
                    }
                }
            }
        }
        for (const auto& nv : via_variants.at(mv)) {
            for (const auto& tv : seg_variants.at({to, other_end(to, node)})) {
                Edge e;
                e.source = nv.loc;
                e.target = tv.loc;
                e.action = catalog.departure(train.id, node);
                e.guard.clocks = nv.exit_guard;
                e.resets = {clock};
                e.updates = {{segment_free_var(from), 1}};
                push_edge(std::move(e));
            }
        }
    }

    // Exit arrivals at boundaries; completion is gated on the counter. Only
    // a use headed toward the boundary can leave the network there.
    auto emit_end = [&](const std::string& boundary, long gate, bool bump) {
        for (const auto& s : graph.incident_segments(boundary)) {
            auto it = seg_variants.find({s, boundary});
            if (it == seg_variants.end()) continue;
            for (const auto& sv : it->second) {
                Edge e;
                e.source = sv.loc;
                e.target = "done";
                e.action = catalog.arrival(train.id, boundary);
                e.guard.clocks = sv.exit_guard;
                if (has_counter) e.guard.discrete = {{cnt, gate}};
                e.resets = {clock};
                e.updates = {{segment_free_var(s), 1}};
                if (bump && has_counter) e.updates.push_back({cnt, gate + 1});
                push_edge(std::move(e));
            }
        }
    };
    if (last_is_boundary) {
        emit_end(conn[m], static_cast<long>(m), true);
    } else {
        std::vector<std::string> boundaries;
        for (const auto& n : graph.nodes)
            if (n.kind == NodeKind::Boundary) boundaries.push_back(n.id);
        std::sort(boundaries.begin(), boundaries.end());
        for (const auto& b : boundaries) emit_end(b, static_cast<long>(conn.size()), false);
    }

    pta.actions.assign(actions.begin(), actions.end());
    pta.parameters.assign(params.begin(), params.end());
    return pta;
}

namespace {

LinearTerm bound_term(const DurationSpec& d) {
    return d.is_parameter() ? LinearTerm::of_param(d.param) : LinearTerm::of_constant(d.value);
}

void note_bound(Pta& pta, const DurationSpec& d) {
    if (d.is_parameter()) pta.parameters.push_back(d.param);
}

}  // namespace

Pta translate_constraint(const ScheduleConstraint& c, const ActionCatalog& catalog, size_t index) {
    Pta pta;
    std::string xc = "xc_" + std::to_string(index);

    if (c.kind == ScheduleConstraint::Kind::Absolute) {
        pta.name = "mon" + std::to_string(index) + "_abs";
        std::string a = catalog.label(c.v1);
        pta.actions = {a};
        pta.clocks = {"x_abs"};
        pta.locations = {"idle", "done"};
        pta.initial = "idle";
        pta.final_loc = "done";
        Edge gate;
        gate.source = "idle";
        gate.target = "done";
        gate.action = a;
        gate.guard.clocks = {{"x_abs", c.op, bound_term(c.bound)}};
        pta.edges.push_back(std::move(gate));
        pta.edges.push_back({"done", {}, a, {}, {}, "done"});
        note_bound(pta, c.bound);
        return pta;
    }

    if (c.kind == ScheduleConstraint::Kind::Relative) {
        pta.name = "mon" + std::to_string(index) + "_rel";
        std::string a1 = catalog.label(c.v1);
        std::string a2 = catalog.label(c.v2);
        pta.actions = {a1};
        if (a2 != a1) pta.actions.push_back(a2);
        pta.clocks = {xc};
        pta.locations = {"idle", "armed", "done"};
        pta.initial = "idle";
        pta.final_loc = "done";
        pta.edges.push_back({"idle", {}, a1, {xc}, {}, "armed"});
        Edge fin;
        fin.source = "armed";
        fin.target = "done";
        fin.action = a2;
        fin.guard.clocks = {{xc, c.op, bound_term(c.bound)}};
        pta.edges.push_back(std::move(fin));
        pta.edges.push_back({"done", {}, a1, {}, {}, "done"});
        if (a2 != a1) pta.edges.push_back({"done", {}, a2, {}, {}, "done"});
        note_bound(pta, c.bound);
        return pta;
    }

    // Ordering. Normalize >=_/> by swapping operands; = is a zero transfer.
    VisitEvent v1 = c.v1, v2 = c.v2;
    CmpOp op = c.op;
    if (op == CmpOp::Ge || op == CmpOp::Gt) {
        std::swap(v1, v2);
        op = op == CmpOp::Ge ? CmpOp::Le : CmpOp::Lt;
    }
    std::string a1 = catalog.label(v1);
    std::string a2 = catalog.label(v2);
    pta.name = "mon" + std::to_string(index) + "_ord";
    pta.initial = "idle";
    pta.final_loc = "done";

    if (a1 == a2) {
        if (op == CmpOp::Lt) {
            // visit < visit is unsatisfiable; the event stays blocked.
            pta.actions = {a1};
            pta.locations = {"idle", "done"};
            return pta;
        }
        // trivially satisfied
        pta.actions = {a1};
        pta.locations = {"done"};
        pta.initial = "done";
        pta.edges.push_back({"done", {}, a1, {}, {}, "done"});
        return pta;
    }

    if (op == CmpOp::Eq) {
        auto rel = ScheduleConstraint::relative(v1, v2, CmpOp::Eq,
                                                DurationSpec::constant(Rational(0)));
        Pta out = translate_constraint(rel, catalog, index);
        out.name = "mon" + std::to_string(index) + "_ord";
        return out;
    }

    bool strict = op == CmpOp::Lt;
    pta.actions = {a1, a2};
    pta.locations = {"idle", "armed", "done"};
    if (strict) pta.clocks = {xc};
    Edge first{"idle", {}, a1, {}, {}, "armed"};
    if (strict) first.resets = {xc};
    pta.edges.push_back(std::move(first));
    pta.edges.push_back({"armed", {}, a1, {}, {}, "armed"});
    Edge second{"armed", {}, a2, {}, {}, "done"};
    if (strict) second.guard.clocks = {{xc, CmpOp::Gt, LinearTerm::of_constant(Rational(0))}};
    pta.edges.push_back(std::move(second));
    pta.edges.push_back({"done", {}, a1, {}, {}, "done"});
    pta.edges.push_back({"done", {}, a2, {}, {}, "done"});
    return pta;
}

SynthesisProblem translate_system(const ConstrainedRailwaySystem& sys) {
    ActionCatalog catalog;
    SynthesisProblem out;
    PtaNetwork& net = out.network;
    net.parameters = sys.parameters;

    for (const auto& t : sys.trains) net.components.push_back(translate_train(t, sys.graph, catalog));
    for (size_t i = 0; i < sys.constraints.size(); ++i)
        net.components.push_back(translate_constraint(sys.constraints[i], catalog, i));

    std::vector<std::string> seg_ids;
    for (const auto& s : sys.graph.segments) seg_ids.push_back(s.id);
    std::sort(seg_ids.begin(), seg_ids.end());
    for (const auto& s : seg_ids) net.variables.push_back({segment_free_var(s), 1, 0, 1, true});
    for (const auto& t : sys.trains) {
        if (t.connection.size() >= 2)
            net.variables.push_back({connection_counter_var(t.id), 1, 1,
                                     static_cast<long>(t.connection.size()) + 1, false});
    }

    bool uses_abs = false;
    std::set<std::string> clock_set;
    for (const auto& pta : net.components) {
        for (const auto& c : pta.clocks) {
            if (c == "x_abs") {
                uses_abs = true;
                continue;
            }
            if (clock_set.insert(c).second) net.clocks.push_back(c);
        }
    }
    if (uses_abs) {
        net.clocks.push_back("x_abs");
        net.shared_clock = "x_abs";
    }
    return out;
}

}  // namespace rail
