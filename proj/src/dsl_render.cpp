#include <algorithm>
#include <sstream>

#include "rail/dsl.hpp"

namespace rail {

namespace {

std::string dur_text(const DurationSpec& d) {
    return d.is_parameter() ? d.param : rational_to_string(d.value);
}

std::string visit_text(const VisitEvent& v) {
    std::ostringstream os;
    os << (v.kind == VisitKind::Arrival ? "arrival" : "departure") << "(" << v.train << ", "
       << v.node << ")";
    return os.str();
}

std::string constraint_text(const ScheduleConstraint& c) {
    std::ostringstream os;
    os << "constraint ";
    switch (c.kind) {
        case ScheduleConstraint::Kind::Ordering:
            os << "order " << visit_text(c.v1) << " " << cmp_op_text(c.op) << " "
               << visit_text(c.v2);
            break;
        case ScheduleConstraint::Kind::Absolute:
            os << "abs " << visit_text(c.v1) << " " << cmp_op_text(c.op) << " " << dur_text(c.bound);
            break;
        case ScheduleConstraint::Kind::Relative:
            os << "rel transfer(" << visit_text(c.v1) << ", " << visit_text(c.v2) << ") "
               << cmp_op_text(c.op) << " " << dur_text(c.bound);
            break;
    }
    return os.str();
}

}  // namespace

std::string render_system(const ConstrainedRailwaySystem& sys) {
    std::ostringstream os;
    os << "# constrained railway system (format v1)\n";

    auto params = sys.parameters;
    std::sort(params.begin(), params.end(),
              [](const ParamDecl& a, const ParamDecl& b) { return a.name < b.name; });
    for (const auto& p : params) {
        os << "param " << p.name;
        if (p.bounds)
            os << " in [" << rational_to_string(p.bounds->first) << ", "
               << rational_to_string(p.bounds->second) << "]";
        os << "\n";
    }

    auto nodes = sys.graph.nodes;
    std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
    for (const auto& n : nodes) {
        os << "node " << n.id << " ";
        switch (n.kind) {
            case NodeKind::Boundary: os << "boundary"; break;
            case NodeKind::Station: os << "station"; break;
            case NodeKind::Normal: os << "normal"; break;
        }
        os << "\n";
    }

    auto segments = sys.graph.segments;
    std::sort(segments.begin(), segments.end(),
              [](const Segment& a, const Segment& b) { return a.id < b.id; });
    for (const auto& s : segments) {
        os << "segment " << s.id << " = " << s.end_a << " -- " << s.end_b;
        auto it = sys.graph.seg_dur.find(s.id);
        if (it != sys.graph.seg_dur.end()) os << " dur " << dur_text(it->second);
        os << "\n";
    }

    for (const auto& [key, d] : sys.graph.segs_dur)
        os << "pairdur " << key.first << " -> " << key.second << " dur " << dur_text(d) << "\n";

    auto transitions = sys.graph.transitions;
    for (auto& t : transitions) {
        std::sort(t.left.begin(), t.left.end());
        std::sort(t.right.begin(), t.right.end());
    }
    std::sort(transitions.begin(), transitions.end(),
              [](const Transition& a, const Transition& b) {
                  return std::tie(a.node, a.left, a.right) < std::tie(b.node, b.left, b.right);
              });
    auto join = [](const std::vector<std::string>& ids) {
        std::string out;
        for (size_t i = 0; i < ids.size(); ++i) {
            if (i) out += ",";
            out += ids[i];
        }
        return out;
    };
    for (const auto& t : transitions)
        os << "transition at " << t.node << " : {" << join(t.left) << "} | {" << join(t.right)
           << "}\n";

    auto trains = sys.trains;
    std::sort(trains.begin(), trains.end(),
              [](const Train& a, const Train& b) { return a.id < b.id; });
    for (const auto& t : trains) {
        os << "train " << t.id << " connection [";
        for (size_t i = 0; i < t.connection.size(); ++i) {
            if (i) os << ", ";
            os << t.connection[i];
        }
        os << "]\n";
        for (const auto& [seg, d] : t.t_seg_dur)
            os << "train " << t.id << " segdur " << seg << " dur " << dur_text(d) << "\n";
        for (const auto& [key, d] : t.t_segs_dur)
            os << "train " << t.id << " pairdur " << key.first << " -> " << key.second << " dur "
               << dur_text(d) << "\n";
    }

    std::vector<std::string> lines;
    for (const auto& c : sys.constraints) lines.push_back(constraint_text(c));
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) os << l << "\n";

    return os.str();
}

}  // namespace rail
