#pragma once

#include "rail/model.hpp"
#include "rail/pta.hpp"

namespace rail {

// Injective map from (train, node, visit kind) to synchronization labels.
struct ActionCatalog {
    std::string arrival(const std::string& train, const std::string& node) const {
        return "arrival(" + train + "," + node + ")";
    }
    std::string departure(const std::string& train, const std::string& node) const {
        return "departure(" + train + "," + node + ")";
    }
    std::string label(const VisitEvent& v) const {
        return v.kind == VisitKind::Arrival ? arrival(v.train, v.node) : departure(v.train, v.node);
    }
};

// The reachability-synthesis input: the synchronized network plus the target
// predicate "every component is in its final location".
struct SynthesisProblem {
    PtaNetwork network;
};

struct TranslateError : std::runtime_error {
    std::string code;
    TranslateError(std::string c, const std::string& what)
        : std::runtime_error(what), code(std::move(c)) {}
};

std::string train_clock_name(const std::string& train_id);
std::string segment_free_var(const std::string& seg_id);
std::string connection_counter_var(const std::string& train_id);

// One automaton per train: locations for the start boundary, each reachable
// segment, each segment-to-segment traversal through a node, and a single
// exit location. Durations follow the effective (network/train max) values;
// a parameter-vs-constant max splits the place into two case locations.
Pta translate_train(const Train& train, const RailNetworkGraph& graph,
                    const ActionCatalog& catalog);

// One monitor automaton per schedule constraint (index used for naming and
// the monitor-local clock).
Pta translate_constraint(const ScheduleConstraint& c, const ActionCatalog& catalog, size_t index);

// Whole-system translation; precondition: validate_system(sys) is empty.
SynthesisProblem translate_system(const ConstrainedRailwaySystem& sys);

}  // namespace rail
