#include "rail/oracle.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cassert>
#include <deque>
#include <functional>
#include <set>
#include <thread>
#include <unordered_set>

namespace rail {

namespace {

constexpr size_t kMaxTrains = 8;
constexpr size_t kMaxMonitors = 8;
constexpr size_t kMaxSegments = 64;
constexpr long kMaxDuration = 60000;
constexpr long kMaxCounter = 63;
constexpr size_t kMaxPlaces = 1023;

struct Config {
    std::array<uint32_t, kMaxTrains> train{};  // place(10) | elapsed(16) | cnt(6)
    std::array<uint16_t, kMaxMonitors> mon{};  // status(2) | timer(14)
    uint64_t occ = 0;
    uint16_t gtime = 0;
    bool operator==(const Config&) const = default;
};

struct ConfigHash {
    size_t operator()(const Config& c) const {
        size_t h = 1469598103934665603ull;
        auto mix = [&](uint64_t v) {
            h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        };
        for (auto t : c.train) mix(t);
        for (auto m : c.mon) mix(m);
        mix(c.occ);
        mix(c.gtime);
        return h;
    }
};

uint32_t pack_train(size_t place, long elapsed, long cnt) {
    return static_cast<uint32_t>(place) | (static_cast<uint32_t>(elapsed) << 10) |
           (static_cast<uint32_t>(cnt) << 26);
}
size_t tr_place(uint32_t w) { return w & 0x3ff; }
long tr_elapsed(uint32_t w) { return (w >> 10) & 0xffff; }
long tr_cnt(uint32_t w) { return w >> 26; }

uint16_t pack_mon(int status, long timer) {
    return static_cast<uint16_t>(status) | static_cast<uint16_t>(timer << 2);
}
int mon_status(uint16_t w) { return w & 3; }
long mon_timer(uint16_t w) { return w >> 2; }

struct Event {
    int train = -1;
    int node = -1;
    VisitKind kind = VisitKind::Arrival;
    bool operator==(const Event&) const = default;
};

struct Monitor {
    enum class Kind { Absolute, Relative, Ordering, OrderingTrivial, OrderingImpossible };
    Kind kind = Kind::Absolute;
    Event e1, e2;
    CmpOp op = CmpOp::Le;
    long bound = 0;       // scaled
    long timer_cap = 1;   // saturating timer bound
    bool strict_order = false;
    int accept_status = 2;
};

struct Move {
    size_t target = 0;
    int need_free = -1;  // segment that must be free and becomes occupied
    int frees = -1;      // segment released
    Event event;
    // connection handling
    bool is_via_arrival = false;
    bool is_end = false;
    long end_gate = -1;  // required counter for an end arrival
    bool end_bump = false;
};

struct Place {
    enum class Kind { Start, Seg, Via, Done };
    Kind kind = Kind::Start;
    long dur = 0;     // scaled segment/pair duration
    bool dwell = false;
    int via_node = -1;
    std::vector<Move> moves;
};

struct TrainTab {
    std::vector<Place> places;
    size_t start = 0, done = 0;
    std::vector<std::string> conn;  // node ids
    std::vector<int> conn_nodes;    // node ints
    bool last_is_boundary = false;
    long conn_len = 0;
};

struct OracleNet {
    long scale = 1;
    size_t n_trains = 0, n_mons = 0;
    std::vector<TrainTab> trains;
    std::vector<Monitor> mons;
    long gtime_cap = 1;
    long default_horizon = 0;
};

long scaled_int(const Rational& r, long scale, const std::string& what) {
    Rational v = r * scale;
    if (!rational_is_integer(v))
        throw ModelError("ERR_NON_INTEGER", what + " is not integer-valued after valuation: " +
                                                rational_to_string(r));
    if (v < 0 || v > kMaxDuration)
        throw ModelError("ERR_ORACLE_SCALE", what + " outside oracle range");
    return static_cast<long>(v.get_num().get_si());
}

bool cmp_int(long lhs, CmpOp op, long rhs) {
    switch (op) {
        case CmpOp::Lt: return lhs <= rhs - 1;
        case CmpOp::Le: return lhs <= rhs;
        case CmpOp::Eq: return lhs == rhs;
        case CmpOp::Ge: return lhs >= rhs;
        case CmpOp::Gt: return lhs >= rhs + 1;
    }
    return false;
}

OracleNet compile(const ConstrainedRailwaySystem& sys, const std::map<std::string, Rational>& v) {
    OracleNet net;
    if (sys.trains.size() > kMaxTrains)
        throw ModelError("ERR_ORACLE_SCALE", "too many trains for the oracle");
    if (sys.constraints.size() > kMaxMonitors)
        throw ModelError("ERR_ORACLE_SCALE", "too many constraints for the oracle");
    if (sys.graph.segments.size() > kMaxSegments)
        throw ModelError("ERR_ORACLE_SCALE", "too many segments for the oracle");

    bool any_strict = std::any_of(sys.constraints.begin(), sys.constraints.end(),
                                  [](const ScheduleConstraint& c) {
                                      return c.op == CmpOp::Lt || c.op == CmpOp::Gt;
                                  });
    net.scale = any_strict ? 2 : 1;

    std::map<std::string, int> node_idx;
    for (const auto& n : sys.graph.nodes) node_idx.emplace(n.id, static_cast<int>(node_idx.size()));
    std::map<std::string, int> seg_idx;
    for (const auto& s : sys.graph.segments) seg_idx.emplace(s.id, static_cast<int>(seg_idx.size()));
    std::map<std::string, int> train_idx;
    for (const auto& t : sys.trains) train_idx.emplace(t.id, static_cast<int>(train_idx.size()));

    auto value_of = [&](const DurationSpec& d, const std::string& what) -> Rational {
        if (d.is_constant()) return d.value;
        auto it = v.find(d.param);
        if (it == v.end())
            throw PtaError("ERR_PARTIAL_VALUATION", "no value for parameter " + d.param);
        return it->second;
    };

    auto moves = traversable_pairs(sys.graph);
    long horizon_sum = 0;

    for (const auto& train : sys.trains) {
        TrainTab tab;
        tab.conn = train.connection;
        for (const auto& n : tab.conn) tab.conn_nodes.push_back(node_idx.at(n));
        tab.conn_len = static_cast<long>(tab.conn.size());
        if (tab.conn_len > kMaxCounter)
            throw ModelError("ERR_ORACLE_SCALE", "connection too long for the oracle");
        const Node* last = sys.graph.find_node(tab.conn.back());
        tab.last_is_boundary = last != nullptr && last->kind == NodeKind::Boundary;
        const std::string& b0 = tab.conn.front();
        int ti = train_idx.at(train.id);

        // effective durations under the valuation
        std::map<std::string, long> seg_dur;
        std::map<SegmentPair, long> pair_dur;
        for (const auto& [sid, d] : sys.graph.seg_dur) {
            Rational base = value_of(d, "segment " + sid);
            auto ov = train.t_seg_dur.find(sid);
            if (ov != train.t_seg_dur.end())
                base = std::max(base, value_of(ov->second, "segment " + sid));
            seg_dur[sid] = scaled_int(base, net.scale, "segment " + sid);
        }
        for (const auto& [key, d] : sys.graph.segs_dur) {
            Rational base = value_of(d, "pair");
            auto ov = train.t_segs_dur.find(key);
            if (ov != train.t_segs_dur.end()) base = std::max(base, value_of(ov->second, "pair"));
            pair_dur[key] = scaled_int(base, net.scale, "pair " + key.first + "->" + key.second);
        }
        for (const auto& [key, d] : train.t_segs_dur) {
            if (pair_dur.count(key)) continue;
            pair_dur[key] = scaled_int(value_of(d, "pair"), net.scale, "train pair");
        }

        // reachable directed segment uses from the start boundary; a use is
        // (segment, exit endpoint), so direction reversals inside a segment
        // cannot happen
        auto other_end = [&](const std::string& seg, const std::string& node) {
            const Segment* sg = sys.graph.find_segment(seg);
            return sg->end_a == node ? sg->end_b : sg->end_a;
        };
        using SegUse = std::pair<std::string, std::string>;
        std::set<SegUse> reachable;
        std::deque<SegUse> work;
        for (const auto& s : sys.graph.incident_segments(b0)) {
            SegUse use{s, other_end(s, b0)};
            if (reachable.insert(use).second) work.push_back(use);
        }
        while (!work.empty()) {
            auto [seg, node] = work.front();
            work.pop_front();
            for (const auto& [from, via, to] : moves) {
                if (from != seg || via != node) continue;
                SegUse use{to, other_end(to, via)};
                if (reachable.insert(use).second) work.push_back(use);
            }
        }

        std::set<std::string> conn_set(tab.conn.begin(), tab.conn.end());
        std::map<SegUse, size_t> seg_place;
        std::map<std::tuple<std::string, std::string, std::string>, size_t> via_place;

        tab.places.push_back({Place::Kind::Start, 0, false, -1, {}});
        tab.start = 0;
        for (const auto& use : reachable) {
            seg_place[use] = tab.places.size();
            tab.places.push_back({Place::Kind::Seg, seg_dur.at(use.first), false, -1, {}});
            horizon_sum += seg_dur.at(use.first);
        }
        for (const auto& mv : moves) {
            const auto& [from, node, to] = mv;
            if (!reachable.count({from, node}) || !reachable.count({to, other_end(to, node)}))
                continue;
            const Node* n = sys.graph.find_node(node);
            bool dwell = n != nullptr && n->kind == NodeKind::Station && conn_set.count(node);
            via_place[mv] = tab.places.size();
            long pd = pair_dur.count({from, to}) ? pair_dur.at({from, to}) : 0;
            tab.places.push_back({Place::Kind::Via, pd, dwell, node_idx.at(node), {}});
            horizon_sum += pd;
        }
        tab.done = tab.places.size();
        tab.places.push_back({Place::Kind::Done, 0, false, -1, {}});
        if (tab.places.size() > kMaxPlaces)
            throw ModelError("ERR_ORACLE_SCALE", "too many places for the oracle");

        // moves out of the start boundary
        for (const auto& s : sys.graph.incident_segments(b0)) {
            auto it = seg_place.find({s, other_end(s, b0)});
            if (it == seg_place.end()) continue;
            Move m;
            m.target = it->second;
            m.need_free = seg_idx.at(s);
            m.event = {ti, node_idx.at(b0), VisitKind::Departure};
            tab.places[tab.start].moves.push_back(m);
        }
        // traversals
        for (const auto& [mv, vp] : via_place) {
            const auto& [from, node, to] = mv;
            Move in;
            in.target = vp;
            in.need_free = seg_idx.at(to);
            in.event = {ti, node_idx.at(node), VisitKind::Arrival};
            in.is_via_arrival = true;
            tab.places[seg_place.at({from, node})].moves.push_back(in);
            Move outm;
            outm.target = seg_place.at({to, other_end(to, node)});
            outm.frees = seg_idx.at(from);
            outm.event = {ti, node_idx.at(node), VisitKind::Departure};
            tab.places[vp].moves.push_back(outm);
        }
        // exits: only uses headed toward the boundary can leave there
        auto add_end = [&](const std::string& b, long gate, bool bump) {
            for (const auto& s : sys.graph.incident_segments(b)) {
                auto it = seg_place.find({s, b});
                if (it == seg_place.end()) continue;
                Move m;
                m.target = tab.done;
                m.frees = seg_idx.at(s);
                m.event = {ti, node_idx.at(b), VisitKind::Arrival};
                m.is_end = true;
                m.end_gate = gate;
                m.end_bump = bump;
                tab.places[it->second].moves.push_back(m);
            }
        };
        if (tab.conn_len == 1) {
            // degenerate: train already done at its boundary
        } else if (tab.last_is_boundary) {
            add_end(tab.conn.back(), tab.conn_len - 1, true);
        } else {
            for (const auto& n : sys.graph.nodes)
                if (n.kind == NodeKind::Boundary) add_end(n.id, tab.conn_len, false);
        }
        net.trains.push_back(std::move(tab));
    }

    long max_const = 0;
    for (const auto& c : sys.constraints) {
        Monitor m;
        auto mk_event = [&](const VisitEvent& e) {
            return Event{train_idx.at(e.train), node_idx.at(e.node), e.kind};
        };
        if (c.kind == ScheduleConstraint::Kind::Absolute) {
            m.kind = Monitor::Kind::Absolute;
            m.e1 = mk_event(c.v1);
            m.op = c.op;
            m.bound = scaled_int(value_of(c.bound, "bound"), net.scale, "constraint bound");
            m.accept_status = 1;
        } else if (c.kind == ScheduleConstraint::Kind::Relative) {
            m.kind = Monitor::Kind::Relative;
            m.e1 = mk_event(c.v1);
            m.e2 = mk_event(c.v2);
            m.op = c.op;
            m.bound = scaled_int(value_of(c.bound, "bound"), net.scale, "constraint bound");
        } else {
            VisitEvent v1 = c.v1, v2 = c.v2;
            CmpOp op = c.op;
            if (op == CmpOp::Ge || op == CmpOp::Gt) {
                std::swap(v1, v2);
                op = op == CmpOp::Ge ? CmpOp::Le : CmpOp::Lt;
            }
            m.e1 = mk_event(v1);
            m.e2 = mk_event(v2);
            if (m.e1 == m.e2) {
                m.kind = op == CmpOp::Lt ? Monitor::Kind::OrderingImpossible
                                         : Monitor::Kind::OrderingTrivial;
            } else if (op == CmpOp::Eq) {
                m.kind = Monitor::Kind::Relative;
                m.op = CmpOp::Eq;
                m.bound = 0;
            } else {
                m.kind = Monitor::Kind::Ordering;
                m.strict_order = op == CmpOp::Lt;
            }
        }
        m.timer_cap = m.bound + 1;
        max_const = std::max(max_const, m.bound);
        net.mons.push_back(m);
    }
    net.n_trains = sys.trains.size();
    net.n_mons = net.mons.size();
    net.gtime_cap = max_const + 1;
    net.default_horizon =
        horizon_sum + max_const + static_cast<long>(sys.trains.size()) * net.scale;
    return net;
}

// Applies monitor gating for an event; false means the event is blocked.
bool gate_event(const OracleNet& net, Config& c, const Event& ev) {
    for (size_t i = 0; i < net.n_mons; ++i) {
        const Monitor& m = net.mons[i];
        int status = mon_status(c.mon[i]);
        long timer = mon_timer(c.mon[i]);
        switch (m.kind) {
            case Monitor::Kind::Absolute:
                if (status == 0 && ev == m.e1) {
                    if (!cmp_int(c.gtime, m.op, m.bound)) return false;
                    c.mon[i] = pack_mon(1, 0);
                }
                break;
            case Monitor::Kind::Relative:
                if (status == 0) {
                    if (ev == m.e1) {
                        c.mon[i] = pack_mon(1, 0);
                    } else if (ev == m.e2) {
                        return false;
                    }
                } else if (status == 1) {
                    if (ev == m.e2) {
                        if (!cmp_int(timer, m.op, m.bound)) return false;
                        c.mon[i] = pack_mon(2, 0);
                    } else if (ev == m.e1) {
                        return false;
                    }
                }
                break;
            case Monitor::Kind::Ordering:
                if (status == 0) {
                    if (ev == m.e2) return false;
                    if (ev == m.e1) c.mon[i] = pack_mon(1, 0);
                } else if (status == 1) {
                    if (ev == m.e2) {
                        if (m.strict_order && timer < 1) return false;
                        c.mon[i] = pack_mon(2, 0);
                    }
                }
                break;
            case Monitor::Kind::OrderingTrivial:
                break;
            case Monitor::Kind::OrderingImpossible:
                if (ev == m.e1) return false;
                break;
        }
    }
    return true;
}

bool accepting(const OracleNet& net, const Config& c) {
    for (size_t t = 0; t < net.n_trains; ++t)
        if (tr_place(c.train[t]) != net.trains[t].done) return false;
    for (size_t i = 0; i < net.n_mons; ++i) {
        const Monitor& m = net.mons[i];
        if (m.kind == Monitor::Kind::OrderingTrivial) continue;
        if (m.kind == Monitor::Kind::OrderingImpossible) return false;
        if (mon_status(c.mon[i]) != m.accept_status) return false;
    }
    return true;
}

}  // namespace

OracleRun integer_time_reachable(const ConstrainedRailwaySystem& sys,
                                 const std::map<std::string, Rational>& v,
                                 std::optional<long> horizon) {
    OracleNet net = compile(sys, v);
    OracleRun run;
    run.horizon_used = horizon ? *horizon * net.scale : net.default_horizon;

    Config init;
    for (size_t t = 0; t < net.n_trains; ++t) {
        size_t p = net.trains[t].conn_len == 1 ? net.trains[t].done : net.trains[t].start;
        init.train[t] = pack_train(p, 0, 1);
    }

    std::unordered_set<Config, ConfigHash> visited;
    std::deque<std::pair<Config, long>> queue;
    visited.insert(init);
    queue.push_back({init, 0});

    while (!queue.empty()) {
        auto [c, t] = queue.front();
        queue.pop_front();
        if (accepting(net, c)) {
            run.feasible = true;
            run.configs = visited.size();
            return run;
        }

        // instantaneous moves
        for (size_t ti = 0; ti < net.n_trains; ++ti) {
            const TrainTab& tab = net.trains[ti];
            size_t place = tr_place(c.train[ti]);
            long elapsed = tr_elapsed(c.train[ti]);
            long cnt = tr_cnt(c.train[ti]);
            const Place& pl = tab.places[place];
            if (pl.kind == Place::Kind::Done) continue;
            bool may_exit = true;
            if (pl.kind == Place::Kind::Seg)
                may_exit = elapsed == pl.dur;
            else if (pl.kind == Place::Kind::Via)
                may_exit = pl.dwell ? elapsed >= pl.dur : elapsed == pl.dur;
            if (!may_exit) continue;
            for (const auto& mv : pl.moves) {
                if (mv.need_free >= 0 && (c.occ >> mv.need_free) & 1) continue;
                long cnt2 = cnt;
                if (mv.is_end) {
                    if (cnt != mv.end_gate) continue;
                    if (mv.end_bump) cnt2 = cnt + 1;
                } else if (mv.is_via_arrival) {
                    // first qualifying visit binds, except the terminal
                    // boundary which is counted on exit
                    if (cnt < tab.conn_len && tab.conn_nodes[cnt] == mv.event.node &&
                        !(cnt == tab.conn_len - 1 && tab.last_is_boundary))
                        cnt2 = cnt + 1;
                }
                Config nc = c;
                if (!gate_event(net, nc, mv.event)) continue;
                nc.train[ti] = pack_train(mv.target, 0, cnt2);
                if (mv.need_free >= 0) nc.occ |= 1ull << mv.need_free;
                if (mv.frees >= 0) nc.occ &= ~(1ull << mv.frees);
                if (visited.insert(nc).second) queue.push_back({nc, t});
            }
        }

        // unit delay
        if (t >= run.horizon_used) {
            run.hit_horizon = true;
            continue;
        }
        bool ok = true;
        Config nc = c;
        for (size_t ti = 0; ti < net.n_trains && ok; ++ti) {
            const TrainTab& tab = net.trains[ti];
            size_t place = tr_place(c.train[ti]);
            long elapsed = tr_elapsed(c.train[ti]);
            const Place& pl = tab.places[place];
            switch (pl.kind) {
                case Place::Kind::Start:
                case Place::Kind::Done:
                    break;
                case Place::Kind::Seg:
                    if (elapsed + 1 > pl.dur) ok = false;
                    else nc.train[ti] = pack_train(place, elapsed + 1, tr_cnt(c.train[ti]));
                    break;
                case Place::Kind::Via:
                    if (pl.dwell) {
                        long e2 = std::min(elapsed + 1, pl.dur);
                        nc.train[ti] = pack_train(place, e2, tr_cnt(c.train[ti]));
                    } else if (elapsed + 1 > pl.dur) {
                        ok = false;
                    } else {
                        nc.train[ti] = pack_train(place, elapsed + 1, tr_cnt(c.train[ti]));
                    }
                    break;
            }
        }
        if (!ok) continue;
        for (size_t i = 0; i < net.n_mons; ++i) {
            if (mon_status(c.mon[i]) == 1) {
                long t2 = std::min(mon_timer(c.mon[i]) + 1, net.mons[i].timer_cap);
                nc.mon[i] = pack_mon(1, t2);
            }
        }
        nc.gtime = static_cast<uint16_t>(std::min<long>(c.gtime + 1, net.gtime_cap));
        if (visited.insert(nc).second) queue.push_back({nc, t + 1});
    }
    run.configs = visited.size();
    return run;
}

GridReport grid_compare(const ConstrainedRailwaySystem& sys, const std::vector<GridAxis>& axes,
                        const ExploreOptions& synth_options, std::optional<long> horizon,
                        unsigned oracle_threads) {
    GridReport report;
    SynthesisProblem problem = translate_system(sys);
    SynthResult synth = ef_synth(problem, synth_options);
    report.synth_status = synth.status;
    report.result_text = synth.result.to_string();

    std::vector<std::map<std::string, long>> points;
    std::map<std::string, long> current;
    std::function<void(size_t)> enumerate = [&](size_t axis) {
        if (axis == axes.size()) {
            points.push_back(current);
            return;
        }
        for (long x = axes[axis].lo; x <= axes[axis].hi; x += axes[axis].step) {
            current[axes[axis].param] = x;
            enumerate(axis + 1);
        }
    };
    enumerate(0);
    report.points = points.size();

    std::vector<char> oracle_ok(points.size(), 0);
    std::vector<char> horizon_hits(points.size(), 0);
    std::atomic<size_t> next{0};
    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= points.size()) break;
            std::map<std::string, Rational> v;
            for (const auto& [p, val] : points[i]) v[p] = Rational(val);
            OracleRun r = integer_time_reachable(sys, v, horizon);
            oracle_ok[i] = r.feasible ? 1 : 0;
            horizon_hits[i] = r.hit_horizon ? 1 : 0;
        }
    };
    unsigned workers = std::max(1u, oracle_threads);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (size_t i = 0; i < points.size(); ++i) {
        std::map<std::string, Rational> v;
        for (const auto& [p, val] : points[i]) v[p] = Rational(val);
        bool member = synth.result.contains(v);
        if (horizon_hits[i]) ++report.horizon_hits;
        if (member != (oracle_ok[i] != 0))
            report.disagreements.push_back({points[i], oracle_ok[i] != 0, member});
    }
    return report;
}

}  // namespace rail
