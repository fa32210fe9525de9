#include "rail/bench.hpp"

#include <cassert>
#include <string>

namespace rail {

ConstrainedRailwaySystem gen_serial_parallel(const ScenarioSpec& spec) {
    assert(spec.ns >= 1 && spec.np >= 1 && spec.nt >= 1);
    ConstrainedRailwaySystem sys;
    auto& g = sys.graph;
    Rational seg_d = make_rational(spec.seg_dur);
    Rational pair_d = make_rational(spec.pair_dur);

    auto add_node = [&](const std::string& id, NodeKind kind) { g.nodes.push_back({id, kind}); };
    auto add_segment = [&](const std::string& id, const std::string& a, const std::string& b) {
        g.segments.push_back({id, a, b});
        g.seg_dur.emplace(id, DurationSpec::constant(seg_d));
    };
    auto add_pair = [&](const std::string& a, const std::string& b) {
        g.segs_dur.emplace(SegmentPair{a, b}, DurationSpec::constant(pair_d));
        g.segs_dur.emplace(SegmentPair{b, a}, DurationSpec::constant(pair_d));
    };

    add_node("S", NodeKind::Boundary);
    add_node("E", NodeKind::Boundary);
    for (int gi = 1; gi <= spec.ns; ++gi) {
        std::string gs = std::to_string(gi);
        add_node("S" + gs, NodeKind::Normal);
        add_node("E" + gs, NodeKind::Normal);
        for (int p = 1; p <= spec.np; ++p)
            add_node("M" + gs + "_" + std::to_string(p), NodeKind::Station);
    }

    add_segment("s0", "S", "S1");
    for (int gi = 1; gi <= spec.ns; ++gi) {
        std::string gs = std::to_string(gi);
        for (int p = 1; p <= spec.np; ++p) {
            std::string ps = std::to_string(p);
            add_segment("g" + gs + "i" + ps, "S" + gs, "M" + gs + "_" + ps);
            add_segment("g" + gs + "o" + ps, "M" + gs + "_" + ps, "E" + gs);
        }
        if (gi < spec.ns) add_segment("c" + gs, "E" + gs, "S" + std::to_string(gi + 1));
    }
    add_segment("sE", "E" + std::to_string(spec.ns), "E");

    for (int gi = 1; gi <= spec.ns; ++gi) {
        std::string gs = std::to_string(gi);
        std::string inbound = gi == 1 ? "s0" : "c" + std::to_string(gi - 1);
        std::string outbound = gi == spec.ns ? "sE" : "c" + gs;
        std::vector<std::string> ins, outs;
        for (int p = 1; p <= spec.np; ++p) {
            std::string ps = std::to_string(p);
            ins.push_back("g" + gs + "i" + ps);
            outs.push_back("g" + gs + "o" + ps);
            g.transitions.push_back(
                {{"g" + gs + "i" + ps}, "M" + gs + "_" + ps, {"g" + gs + "o" + ps}});
            add_pair("g" + gs + "i" + ps, "g" + gs + "o" + ps);
            add_pair(inbound, "g" + gs + "i" + ps);
            add_pair("g" + gs + "o" + ps, outbound);
        }
        std::sort(ins.begin(), ins.end());
        std::sort(outs.begin(), outs.end());
        g.transitions.push_back({{inbound}, "S" + gs, ins});
        g.transitions.push_back({outs, "E" + gs, {outbound}});
    }

    for (int t = 1; t <= spec.nt; ++t)
        sys.trains.push_back({"t" + std::to_string(t), {}, {}, {"S", "E"}});

    std::string last_train = "t" + std::to_string(spec.nt);
    sys.parameters.push_back({"J", std::nullopt});
    sys.constraints.push_back(ScheduleConstraint::absolute(
        {last_train, "E", VisitKind::Arrival}, CmpOp::Le, DurationSpec::parameter("J")));
    if (spec.kind == ScenarioSpec::Kind::Last) {
        sys.parameters.push_back({"bnd", std::nullopt});
        sys.constraints.push_back(ScheduleConstraint::relative(
            {last_train, "S", VisitKind::Departure}, {last_train, "E", VisitKind::Arrival},
            CmpOp::Le, DurationSpec::parameter("bnd")));
    }
    return sys;
}

}  // namespace rail
