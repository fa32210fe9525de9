#pragma once

// Shared helpers for building small systems and zones in tests.

#include <map>
#include <string>
#include <vector>

#include "rail/model.hpp"
#include "rail/zone.hpp"

namespace testsupport {

using namespace rail;

inline LinRow row(const VarSpace& space, const std::map<std::string, Rational>& coef, Rel rel,
                  Rational rhs) {
    LinRow r;
    r.coef.assign(space.size(), Rat(0));
    for (const auto& [name, c] : coef) r.coef[*space.index_of(name)] = Rat(c);
    r.rel = rel;
    r.rhs = Rat(rhs);
    return r;
}

inline ParametricZone zone(const VarSpacePtr& space,
                           const std::vector<std::tuple<std::map<std::string, Rational>, Rel,
                                                        Rational>>& rows) {
    std::vector<LinRow> rs;
    for (const auto& [coef, rel, rhs] : rows) rs.push_back(row(*space, coef, rel, rhs));
    return zone_with_rows(space, std::move(rs));
}

// One segment A --s-- B with duration `dur`, one train [A, B].
inline ConstrainedRailwaySystem one_segment_system(const DurationSpec& dur) {
    ConstrainedRailwaySystem sys;
    sys.graph.nodes = {{"A", NodeKind::Boundary}, {"B", NodeKind::Boundary}};
    sys.graph.segments = {{"s", "A", "B"}};
    sys.graph.seg_dur.emplace("s", dur);
    sys.trains.push_back({"t", {}, {}, {"A", "B"}});
    return sys;
}

// Two trains from A to B over a single shared segment.
inline ConstrainedRailwaySystem contention_system(long dur) {
    ConstrainedRailwaySystem sys;
    sys.graph.nodes = {{"A", NodeKind::Boundary}, {"B", NodeKind::Boundary}};
    sys.graph.segments = {{"s", "A", "B"}};
    sys.graph.seg_dur.emplace("s", DurationSpec::constant(make_rational(dur)));
    sys.trains.push_back({"t1", {}, {}, {"A", "B"}});
    sys.trains.push_back({"t2", {}, {}, {"A", "B"}});
    return sys;
}

// The figure-1 style topology with the repository's fixed integer durations.
// Boundaries A, B, C, D; stations 1, 2, 3; normal nodes N1, N2, N3.
inline ConstrainedRailwaySystem fig1_system() {
    ConstrainedRailwaySystem sys;
    auto& g = sys.graph;
    g.nodes = {{"A", NodeKind::Boundary}, {"B", NodeKind::Boundary}, {"C", NodeKind::Boundary},
               {"D", NodeKind::Boundary}, {"N1", NodeKind::Normal},  {"N2", NodeKind::Normal},
               {"N3", NodeKind::Normal},  {"1", NodeKind::Station},  {"2", NodeKind::Station},
               {"3", NodeKind::Station}};
    auto seg = [&](const std::string& id, const std::string& a, const std::string& b, long d) {
        g.segments.push_back({id, a, b});
        g.seg_dur.emplace(id, DurationSpec::constant(make_rational(d)));
    };
    seg("1", "A", "N1", 8);
    seg("2", "N1", "1", 5);
    seg("3", "N1", "N2", 4);
    seg("4", "N2", "2", 5);
    seg("5", "N2", "B", 6);
    seg("6", "1", "3", 7);
    seg("7", "1", "N3", 6);
    seg("8", "2", "N3", 5);
    seg("9", "2", "C", 6);
    seg("10", "N3", "D", 4);
    seg("11", "3", "D", 5);
    auto pair = [&](const std::string& a, const std::string& b, long d) {
        g.segs_dur.emplace(SegmentPair{a, b}, DurationSpec::constant(make_rational(d)));
        g.segs_dur.emplace(SegmentPair{b, a}, DurationSpec::constant(make_rational(d)));
    };
    pair("1", "2", 2);
    pair("1", "3", 1);
    pair("3", "4", 1);
    pair("3", "5", 1);
    pair("2", "6", 1);
    pair("2", "7", 1);
    pair("4", "8", 1);
    pair("4", "9", 1);
    pair("7", "10", 1);
    pair("8", "10", 1);
    pair("6", "11", 1);
    g.transitions = {{{"1"}, "N1", {"2", "3"}}, {{"3"}, "N2", {"4", "5"}},
                     {{"2"}, "1", {"6", "7"}},  {{"4"}, "2", {"8", "9"}},
                     {{"7", "8"}, "N3", {"10"}}, {{"6"}, "3", {"11"}}};
    sys.trains.push_back({"green", {}, {}, {"A", "3"}});
    sys.trains.push_back({"blue", {}, {}, {"B", "A"}});
    sys.trains.push_back({"red", {}, {}, {"D", "A"}});
    return sys;
}

inline ConstrainedRailwaySystem fig1_with_deadline() {
    auto sys = fig1_system();
    sys.parameters.push_back({"pR", std::nullopt});
    sys.constraints.push_back(ScheduleConstraint::absolute({"red", "A", VisitKind::Arrival},
                                                           CmpOp::Le,
                                                           DurationSpec::parameter("pR")));
    return sys;
}

inline ConstrainedRailwaySystem fig1_parametric_segments() {
    auto sys = fig1_with_deadline();
    sys.parameters.insert(sys.parameters.begin(), {{"p2", std::nullopt}, {"p7", std::nullopt}});
    sys.graph.seg_dur.at("2") = DurationSpec::parameter("p2");
    sys.graph.seg_dur.at("7") = DurationSpec::parameter("p7");
    return sys;
}

}  // namespace testsupport
