#include "rail/model.hpp"

#include <algorithm>
#include <sstream>

namespace rail {

std::string rational_to_string(const Rational& r) {
    std::ostringstream os;
    if (r.get_den() == 1) {
        os << r.get_num();
    } else {
        os << r.get_num() << "/" << r.get_den();
    }
    return os.str();
}

std::optional<Rational> parse_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    auto all_digits = [](const std::string& s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    std::string body = text;
    bool negative = false;
    if (body[0] == '-') {
        negative = true;
        body = body.substr(1);
    }
    Rational out;
    auto slash = body.find('/');
    auto dot = body.find('.');
    if (slash != std::string::npos) {
        std::string num = body.substr(0, slash);
        std::string den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den) || den == "0") return std::nullopt;
        out = Rational(mpz_class(num), mpz_class(den));
        out.canonicalize();
    } else if (dot != std::string::npos) {
        std::string whole = body.substr(0, dot);
        std::string frac = body.substr(dot + 1);
        if (!all_digits(whole) || !all_digits(frac)) return std::nullopt;
        mpz_class den = 1;
        for (size_t i = 0; i < frac.size(); ++i) den *= 10;
        out = Rational(mpz_class(whole) * den + mpz_class(frac), den);
        out.canonicalize();
    } else {
        if (!all_digits(body)) return std::nullopt;
        out = Rational(mpz_class(body));
    }
    if (negative) out = -out;
    return out;
}

const char* cmp_op_text(CmpOp op) {
    switch (op) {
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Eq: return "=";
        case CmpOp::Ge: return ">=";
        case CmpOp::Gt: return ">";
    }
    return "?";
}

const Node* RailNetworkGraph::find_node(const std::string& id) const {
    for (const auto& n : nodes)
        if (n.id == id) return &n;
    return nullptr;
}

const Segment* RailNetworkGraph::find_segment(const std::string& id) const {
    for (const auto& s : segments)
        if (s.id == id) return &s;
    return nullptr;
}

std::vector<std::string> RailNetworkGraph::incident_segments(const std::string& node) const {
    std::vector<std::string> out;
    for (const auto& s : segments)
        if (s.end_a == node || s.end_b == node) out.push_back(s.id);
    std::sort(out.begin(), out.end());
    return out;
}

std::set<std::tuple<std::string, std::string, std::string>>
traversable_pairs(const RailNetworkGraph& graph) {
    std::set<std::tuple<std::string, std::string, std::string>> out;
    for (const auto& t : graph.transitions) {
        for (const auto& l : t.left) {
            for (const auto& r : t.right) {
                out.emplace(l, t.node, r);
                out.emplace(r, t.node, l);
            }
        }
    }
    return out;
}

const Train* ConstrainedRailwaySystem::find_train(const std::string& id) const {
    for (const auto& t : trains)
        if (t.id == id) return &t;
    return nullptr;
}

const ParamDecl* ConstrainedRailwaySystem::find_parameter(const std::string& name) const {
    for (const auto& p : parameters)
        if (p.name == name) return &p;
    return nullptr;
}

namespace {

std::string constraint_sort_key(const ScheduleConstraint& c) {
    std::ostringstream os;
    os << static_cast<int>(c.kind) << '|' << c.v1.train << '|' << c.v1.node << '|'
       << static_cast<int>(c.v1.kind) << '|' << cmp_op_text(c.op) << '|' << c.v2.train << '|'
       << c.v2.node << '|' << static_cast<int>(c.v2.kind) << '|';
    if (c.bound.is_parameter())
        os << 'p' << c.bound.param;
    else
        os << 'c' << rational_to_string(c.bound.value);
    return os.str();
}

ConstrainedRailwaySystem canonical_copy(const ConstrainedRailwaySystem& s) {
    ConstrainedRailwaySystem out = s;
    std::sort(out.graph.nodes.begin(), out.graph.nodes.end(),
              [](const Node& a, const Node& b) { return a.id < b.id; });
    std::sort(out.graph.segments.begin(), out.graph.segments.end(),
              [](const Segment& a, const Segment& b) { return a.id < b.id; });
    for (auto& t : out.graph.transitions) {
        std::sort(t.left.begin(), t.left.end());
        std::sort(t.right.begin(), t.right.end());
    }
    std::sort(out.graph.transitions.begin(), out.graph.transitions.end(),
              [](const Transition& a, const Transition& b) {
                  return std::tie(a.node, a.left, a.right) < std::tie(b.node, b.left, b.right);
              });
    std::sort(out.trains.begin(), out.trains.end(),
              [](const Train& a, const Train& b) { return a.id < b.id; });
    std::sort(out.parameters.begin(), out.parameters.end(),
              [](const ParamDecl& a, const ParamDecl& b) { return a.name < b.name; });
    std::sort(out.constraints.begin(), out.constraints.end(),
              [](const ScheduleConstraint& a, const ScheduleConstraint& b) {
                  return constraint_sort_key(a) < constraint_sort_key(b);
              });
    return out;
}

}  // namespace

bool structurally_equal(const ConstrainedRailwaySystem& a, const ConstrainedRailwaySystem& b) {
    return canonical_copy(a) == canonical_copy(b);
}

EffectiveDurations resolve_effective_durations(const Train& train, const RailNetworkGraph& graph) {
    auto merge = [&](const DurationSpec& net, const DurationSpec* trn,
                     const std::string& slot) -> EffectiveDuration {
        if (trn == nullptr) {
            if (net.is_constant()) return EffectiveDuration::constant(net.value);
            return EffectiveDuration::single_param(net.param);
        }
        if (net.is_constant() && trn->is_constant())
            return EffectiveDuration::constant(std::max(net.value, trn->value));
        if (net.is_parameter() && trn->is_parameter()) {
            if (net.param == trn->param) return EffectiveDuration::single_param(net.param);
            throw ModelError("ERR_TWO_PARAMS", "train " + train.id + ", slot " + slot +
                                                   ": distinct parameters " + net.param + " and " +
                                                   trn->param + " on the same duration slot");
        }
        const std::string& p = net.is_parameter() ? net.param : trn->param;
        const Rational& c = net.is_parameter() ? trn->value : net.value;
        // max(p, 0) is p on the non-negative parameter domain.
        if (c == 0) return EffectiveDuration::single_param(p);
        return EffectiveDuration::max_param_const(p, c);
    };

    EffectiveDurations out;
    for (const auto& [seg, net] : graph.seg_dur) {
        auto it = train.t_seg_dur.find(seg);
        const DurationSpec* trn = it == train.t_seg_dur.end() ? nullptr : &it->second;
        out.segment.emplace(seg, merge(net, trn, "segment " + seg));
    }
    for (const auto& [s, node, s2] : traversable_pairs(graph)) {
        SegmentPair key{s, s2};
        if (out.pair.count(key)) continue;  // same pair via another node
        auto git = graph.segs_dur.find(key);
        auto tit = train.t_segs_dur.find(key);
        if (git == graph.segs_dur.end()) {
            // Validation rejects this; tolerate here so resolution stays total.
            if (tit == train.t_segs_dur.end()) continue;
            const DurationSpec& t = tit->second;
            out.pair.emplace(key, t.is_constant() ? EffectiveDuration::constant(t.value)
                                                  : EffectiveDuration::single_param(t.param));
            continue;
        }
        const DurationSpec* trn = tit == train.t_segs_dur.end() ? nullptr : &tit->second;
        out.pair.emplace(key, merge(git->second, trn, "pair " + s + "->" + s2));
    }
    return out;
}

const char* validation_code_name(ValidationCode code) {
    switch (code) {
        case ValidationCode::DuplicateId: return "DUPLICATE_ID";
        case ValidationCode::UnknownNode: return "UNKNOWN_NODE";
        case ValidationCode::UnknownSegment: return "UNKNOWN_SEGMENT";
        case ValidationCode::UnknownTrain: return "UNKNOWN_TRAIN";
        case ValidationCode::UnknownParameter: return "UNKNOWN_PARAMETER";
        case ValidationCode::SegSelfLoop: return "SEG_SELF_LOOP";
        case ValidationCode::TransitionSegNotIncident: return "TRANSITION_SEG_NOT_INCIDENT";
        case ValidationCode::ConnectionEmpty: return "CONNECTION_EMPTY";
        case ValidationCode::ConnectionStartNotBoundary: return "CONNECTION_START_NOT_BOUNDARY";
        case ValidationCode::ConnectionInteriorBoundary: return "CONNECTION_INTERIOR_BOUNDARY";
        case ValidationCode::UndefinedPairDuration: return "UNDEFINED_PAIR_DURATION";
        case ValidationCode::NegativeConstant: return "NEGATIVE_CONSTANT";
        case ValidationCode::ParamBoundsInvalid: return "PARAM_BOUNDS_INVALID";
    }
    return "UNKNOWN";
}

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    for (const auto& e : errors)
        os << validation_code_name(e.code) << " (" << e.entity << "): " << e.message << "\n";
    return os.str();
}

ValidationReport validate_system(const ConstrainedRailwaySystem& sys) {
    ValidationReport report;
    auto err = [&](ValidationCode code, const std::string& entity, const std::string& msg) {
        report.errors.push_back({code, msg, entity});
    };

    const auto& g = sys.graph;

    std::set<std::string> node_ids, seg_ids, train_ids, param_names;
    for (const auto& n : g.nodes)
        if (!node_ids.insert(n.id).second) err(ValidationCode::DuplicateId, n.id, "duplicate node id");
    for (const auto& s : g.segments)
        if (!seg_ids.insert(s.id).second) err(ValidationCode::DuplicateId, s.id, "duplicate segment id");
    for (const auto& t : sys.trains)
        if (!train_ids.insert(t.id).second) err(ValidationCode::DuplicateId, t.id, "duplicate train id");
    for (const auto& p : sys.parameters) {
        if (!param_names.insert(p.name).second)
            err(ValidationCode::DuplicateId, p.name, "duplicate parameter name");
        if (p.bounds) {
            if (p.bounds->first < 0 || p.bounds->second < p.bounds->first)
                err(ValidationCode::ParamBoundsInvalid, p.name,
                    "parameter bounds must satisfy 0 <= lo <= hi");
        }
    }

    auto check_duration = [&](const DurationSpec& d, const std::string& entity) {
        if (d.is_constant()) {
            if (d.value < 0)
                err(ValidationCode::NegativeConstant, entity, "negative duration constant");
        } else if (!param_names.count(d.param)) {
            err(ValidationCode::UnknownParameter, entity, "undeclared parameter " + d.param);
        }
    };

    for (const auto& s : g.segments) {
        if (s.end_a == s.end_b)
            err(ValidationCode::SegSelfLoop, s.id, "segment endpoints are identical");
        if (!node_ids.count(s.end_a))
            err(ValidationCode::UnknownNode, s.id, "segment endpoint " + s.end_a + " undeclared");
        if (!node_ids.count(s.end_b))
            err(ValidationCode::UnknownNode, s.id, "segment endpoint " + s.end_b + " undeclared");
        if (!g.seg_dur.count(s.id))
            err(ValidationCode::UndefinedPairDuration, s.id, "segment has no duration");
    }
    for (const auto& [seg, d] : g.seg_dur) {
        if (!seg_ids.count(seg))
            err(ValidationCode::UnknownSegment, seg, "duration for undeclared segment");
        check_duration(d, "segment " + seg);
    }
    for (const auto& [key, d] : g.segs_dur) {
        if (!seg_ids.count(key.first))
            err(ValidationCode::UnknownSegment, key.first, "pair duration references undeclared segment");
        if (!seg_ids.count(key.second))
            err(ValidationCode::UnknownSegment, key.second, "pair duration references undeclared segment");
        check_duration(d, "pair " + key.first + "->" + key.second);
    }

    for (const auto& t : g.transitions) {
        if (!node_ids.count(t.node)) {
            err(ValidationCode::UnknownNode, t.node, "transition at undeclared node");
            continue;
        }
        for (const auto& side : {t.left, t.right}) {
            for (const auto& sid : side) {
                const Segment* s = g.find_segment(sid);
                if (s == nullptr) {
                    err(ValidationCode::UnknownSegment, sid, "transition references undeclared segment");
                } else if (s->end_a != t.node && s->end_b != t.node) {
                    err(ValidationCode::TransitionSegNotIncident, sid,
                        "segment not incident to transition node " + t.node);
                }
            }
        }
    }

    // Pair durations must be total over traversable moves.
    for (const auto& [s, node, s2] : traversable_pairs(g)) {
        if (!g.segs_dur.count({s, s2}))
            err(ValidationCode::UndefinedPairDuration, s + "->" + s2,
                "traversable pair via " + node + " has no pair duration");
    }

    for (const auto& t : sys.trains) {
        if (t.connection.empty()) {
            err(ValidationCode::ConnectionEmpty, t.id, "train connection is empty");
            continue;
        }
        for (size_t i = 0; i < t.connection.size(); ++i) {
            const std::string& nid = t.connection[i];
            const Node* n = g.find_node(nid);
            if (n == nullptr) {
                err(ValidationCode::UnknownNode, t.id, "connection node " + nid + " undeclared");
                continue;
            }
            if (i == 0 && n->kind != NodeKind::Boundary)
                err(ValidationCode::ConnectionStartNotBoundary, t.id,
                    "connection must start at a boundary node, got " + nid);
            if (i > 0 && i + 1 < t.connection.size() && n->kind == NodeKind::Boundary)
                err(ValidationCode::ConnectionInteriorBoundary, t.id,
                    "boundary node " + nid + " in connection interior");
        }
        for (const auto& [seg, d] : t.t_seg_dur) {
            if (!seg_ids.count(seg))
                err(ValidationCode::UnknownSegment, t.id, "override for undeclared segment " + seg);
            check_duration(d, "train " + t.id + " segment " + seg);
        }
        for (const auto& [key, d] : t.t_segs_dur) {
            if (!seg_ids.count(key.first) || !seg_ids.count(key.second))
                err(ValidationCode::UnknownSegment, t.id,
                    "override for undeclared pair " + key.first + "->" + key.second);
            check_duration(d, "train " + t.id + " pair " + key.first + "->" + key.second);
        }
    }

    for (const auto& c : sys.constraints) {
        auto check_event = [&](const VisitEvent& v) {
            if (!train_ids.count(v.train))
                err(ValidationCode::UnknownTrain, v.train, "constraint references undeclared train");
            if (!node_ids.count(v.node))
                err(ValidationCode::UnknownNode, v.node, "constraint references undeclared node");
        };
        check_event(c.v1);
        if (c.kind != ScheduleConstraint::Kind::Absolute) check_event(c.v2);
        if (c.kind != ScheduleConstraint::Kind::Ordering)
            check_duration(c.bound, "constraint bound");
    }

    return report;
}

}  // namespace rail
