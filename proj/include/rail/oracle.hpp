#pragma once

#include <optional>

#include "rail/model.hpp"
#include "rail/synth.hpp"

namespace rail {

struct OracleRun {
    bool feasible = false;
    bool hit_horizon = false;  // search was cut by the horizon while work remained
    long horizon_used = 0;
    size_t configs = 0;
};

// Brute-force feasibility over integer time: breadth-first search over
// discrete configurations with unit-time delay steps and instantaneous
// moves. Valid because every duration pattern in the model is closed
// (only <=, >=, = after normalization), so integer delays suffice for
// integer constants; strict ordering constraints are handled by doubling
// every constant (half-unit refinement).
//
// Independent of the translation and the symbolic engine by construction:
// it interprets the railway model directly.
//
// Throws ModelError("ERR_NON_INTEGER") when a constant is fractional after
// valuation, ModelError("ERR_ORACLE_SCALE") when the instance exceeds the
// oracle's packing limits.
OracleRun integer_time_reachable(const ConstrainedRailwaySystem& sys,
                                 const std::map<std::string, Rational>& v,
                                 std::optional<long> horizon = std::nullopt);

struct GridAxis {
    std::string param;
    long lo = 0;
    long hi = 0;
    long step = 1;
};

struct GridPoint {
    std::map<std::string, long> valuation;
    bool oracle_feasible = false;
    bool synth_member = false;
};

struct GridReport {
    size_t points = 0;
    std::vector<GridPoint> disagreements;
    SynthStatus synth_status = SynthStatus::Complete;
    size_t horizon_hits = 0;
    std::string result_text;  // canonical synthesized set, for reporting
};

// Runs ef_synth once on the translated system, then checks every grid
// valuation against the integer-time oracle. Disagreements must be empty on
// complete-status runs.
GridReport grid_compare(const ConstrainedRailwaySystem& sys, const std::vector<GridAxis>& axes,
                        const ExploreOptions& synth_options = {},
                        std::optional<long> horizon = std::nullopt, unsigned oracle_threads = 1);

}  // namespace rail
