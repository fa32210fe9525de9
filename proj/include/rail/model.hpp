#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rail/rational.hpp"

namespace rail {

// ---------------------------------------------------------------------------
// Durations
// ---------------------------------------------------------------------------

// A duration slot holds either a non-negative rational constant or the name
// of a declared parameter.
struct DurationSpec {
    enum class Kind { Constant, Parameter };
    Kind kind = Kind::Constant;
    Rational value;      // meaningful when kind == Constant
    std::string param;   // meaningful when kind == Parameter

    static DurationSpec constant(Rational v) {
        DurationSpec d;
        d.kind = Kind::Constant;
        d.value = std::move(v);
        return d;
    }
    static DurationSpec parameter(std::string name) {
        DurationSpec d;
        d.kind = Kind::Parameter;
        d.param = std::move(name);
        return d;
    }
    bool is_constant() const { return kind == Kind::Constant; }
    bool is_parameter() const { return kind == Kind::Parameter; }
    bool operator==(const DurationSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Rail network graph
// ---------------------------------------------------------------------------

enum class NodeKind { Normal, Boundary, Station };

struct Node {
    std::string id;
    NodeKind kind = NodeKind::Normal;
    bool operator==(const Node&) const = default;
};

struct Segment {
    std::string id;
    std::string end_a;
    std::string end_b;
    bool operator==(const Segment&) const = default;
};

// A transition (left, node, right) authorizes moves between any segment of
// `left` and any segment of `right` through `node`, in both directions.
struct Transition {
    std::vector<std::string> left;   // kept sorted
    std::string node;
    std::vector<std::string> right;  // kept sorted
    bool operator==(const Transition&) const = default;
};

using SegmentPair = std::pair<std::string, std::string>;  // ordered (from, to)

struct RailNetworkGraph {
    std::vector<Node> nodes;
    std::vector<Segment> segments;
    std::map<std::string, DurationSpec> seg_dur;
    std::map<SegmentPair, DurationSpec> segs_dur;
    std::vector<Transition> transitions;

    const Node* find_node(const std::string& id) const;
    const Segment* find_segment(const std::string& id) const;
    // Segments having `node` as one endpoint, sorted by id.
    std::vector<std::string> incident_segments(const std::string& node) const;
    bool operator==(const RailNetworkGraph&) const = default;
};

// All ordered segment-to-segment moves permitted by the transition set,
// including both directions of each transition.
std::set<std::tuple<std::string, std::string, std::string>>
traversable_pairs(const RailNetworkGraph& graph);

// ---------------------------------------------------------------------------
// Trains and schedule constraints
// ---------------------------------------------------------------------------

struct Train {
    std::string id;
    std::map<std::string, DurationSpec> t_seg_dur;
    std::map<SegmentPair, DurationSpec> t_segs_dur;
    std::vector<std::string> connection;  // non-empty node list
    bool operator==(const Train&) const = default;
};

enum class VisitKind { Arrival, Departure };

struct VisitEvent {
    std::string train;
    std::string node;
    VisitKind kind = VisitKind::Arrival;
    bool operator==(const VisitEvent&) const = default;
    auto operator<=>(const VisitEvent&) const = default;
};

enum class CmpOp { Lt, Le, Eq, Ge, Gt };

const char* cmp_op_text(CmpOp op);

struct ScheduleConstraint {
    enum class Kind { Ordering, Absolute, Relative };
    Kind kind = Kind::Ordering;
    VisitEvent v1;
    VisitEvent v2;       // unused for Absolute
    CmpOp op = CmpOp::Le;
    DurationSpec bound;  // unused for Ordering

    static ScheduleConstraint ordering(VisitEvent a, CmpOp op, VisitEvent b) {
        ScheduleConstraint c;
        c.kind = Kind::Ordering;
        c.v1 = std::move(a);
        c.v2 = std::move(b);
        c.op = op;
        return c;
    }
    static ScheduleConstraint absolute(VisitEvent v, CmpOp op, DurationSpec d) {
        ScheduleConstraint c;
        c.kind = Kind::Absolute;
        c.v1 = std::move(v);
        c.op = op;
        c.bound = std::move(d);
        return c;
    }
    static ScheduleConstraint relative(VisitEvent a, VisitEvent b, CmpOp op, DurationSpec d) {
        ScheduleConstraint c;
        c.kind = Kind::Relative;
        c.v1 = std::move(a);
        c.v2 = std::move(b);
        c.op = op;
        c.bound = std::move(d);
        return c;
    }
    // wait(t, n) is the derived form transfer(arrival(t,n), departure(t,n)).
    static ScheduleConstraint wait(const std::string& train, const std::string& node, CmpOp op,
                                   DurationSpec d) {
        return relative({train, node, VisitKind::Arrival}, {train, node, VisitKind::Departure}, op,
                        std::move(d));
    }
    bool operator==(const ScheduleConstraint&) const = default;
};

struct ParamDecl {
    std::string name;
    std::optional<std::pair<Rational, Rational>> bounds;  // inclusive box [lo, hi]
    bool operator==(const ParamDecl&) const = default;
};

struct ConstrainedRailwaySystem {
    RailNetworkGraph graph;
    std::vector<Train> trains;
    std::vector<ScheduleConstraint> constraints;
    std::vector<ParamDecl> parameters;

    const Train* find_train(const std::string& id) const;
    const ParamDecl* find_parameter(const std::string& name) const;
    bool operator==(const ConstrainedRailwaySystem&) const = default;
};

// Order-insensitive comparison: lists are compared as multisets after
// canonical sorting, so a rendered-and-reparsed system compares equal to the
// original regardless of declaration order.
bool structurally_equal(const ConstrainedRailwaySystem& a, const ConstrainedRailwaySystem& b);

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class ValidationCode {
    DuplicateId,
    UnknownNode,
    UnknownSegment,
    UnknownTrain,
    UnknownParameter,
    SegSelfLoop,
    TransitionSegNotIncident,
    ConnectionEmpty,
    ConnectionStartNotBoundary,
    ConnectionInteriorBoundary,
    UndefinedPairDuration,
    NegativeConstant,
    ParamBoundsInvalid,
};

const char* validation_code_name(ValidationCode code);

struct ValidationError {
    ValidationCode code;
    std::string message;
    std::string entity;  // offending id / rendered entity
};

struct ValidationReport {
    std::vector<ValidationError> errors;
    bool empty() const { return errors.empty(); }
    std::string to_string() const;
};

ValidationReport validate_system(const ConstrainedRailwaySystem& sys);

// ---------------------------------------------------------------------------
// Effective durations (network/train merge)
// ---------------------------------------------------------------------------

// Effective duration of a slot: max of the network value and the train
// value. A parameter against a constant cannot be folded; it is flagged for
// the translation's case split.
struct EffectiveDuration {
    enum class Kind { Constant, Param, MaxParamConst };
    Kind kind = Kind::Constant;
    Rational value;     // Constant, or the constant side of MaxParamConst
    std::string param;  // Param or MaxParamConst

    static EffectiveDuration constant(Rational v) {
        EffectiveDuration e;
        e.kind = Kind::Constant;
        e.value = std::move(v);
        return e;
    }
    static EffectiveDuration single_param(std::string p) {
        EffectiveDuration e;
        e.kind = Kind::Param;
        e.param = std::move(p);
        return e;
    }
    static EffectiveDuration max_param_const(std::string p, Rational c) {
        EffectiveDuration e;
        e.kind = Kind::MaxParamConst;
        e.param = std::move(p);
        e.value = std::move(c);
        return e;
    }
    bool operator==(const EffectiveDuration&) const = default;
};

struct EffectiveDurations {
    std::map<std::string, EffectiveDuration> segment;
    std::map<SegmentPair, EffectiveDuration> pair;
    bool operator==(const EffectiveDurations&) const = default;
};

struct ModelError : std::runtime_error {
    std::string code;
    ModelError(std::string c, const std::string& what)
        : std::runtime_error(what), code(std::move(c)) {}
};

// Throws ModelError{"ERR_TWO_PARAMS"} when graph and train disagree on which
// parameter governs the same slot.
EffectiveDurations resolve_effective_durations(const Train& train, const RailNetworkGraph& graph);

}  // namespace rail
