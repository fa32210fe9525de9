#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rail/translate.hpp"
#include "rail/zone.hpp"

namespace rail {

// (location vector, discrete valuation, zone) over the synchronized network.
// `witness` caches one point of the zone; the explorer uses it to
// short-circuit inclusion tests.
struct SymbolicState {
    std::vector<uint32_t> locs;
    std::vector<long> disc;
    ParametricZone zone;
    std::vector<Rat> witness;
};

// Canonical disjunction of parameter-only polyhedra: each disjunct
// canonicalized, pairwise non-included, deterministically sorted.
struct ParameterSet {
    VarSpacePtr space;
    std::vector<ParametricZone> disjuncts;

    bool empty() const { return disjuncts.empty(); }
    bool contains(const std::map<std::string, Rational>& valuation) const;
    std::string to_string() const;
};

ParameterSet canonicalize_param_set(VarSpacePtr space, std::vector<ParametricZone> raw);

enum class SynthStatus { Complete, Bounded };
enum class SearchOrder { Bfs, Dfs };

// Test-harness corruption switches; None in all production paths.
enum class EngineMutation { None, DropTargetInvariant, DropDiscreteGuards, SkipClockResets };

struct ExploreLimits {
    size_t max_states = 1000000;
    size_t max_depth = 10000;
    bool strict = false;  // throw LimitError instead of returning a bounded result
};

struct ExploreOptions {
    ExploreLimits limits;
    SearchOrder order = SearchOrder::Bfs;
    unsigned threads = 1;  // frontier-wave parallelism (BFS only)
    EngineMutation mutation = EngineMutation::None;
    // Called once per state added to the visited store (the explored set).
    std::function<void(const SymbolicState&)> on_state;
};

struct SynthStats {
    size_t states_explored = 0;
    size_t states_pruned = 0;
    size_t merged = 0;
    size_t target_hits = 0;
    size_t depth_reached = 0;
};

struct SynthResult {
    SynthStatus status = SynthStatus::Complete;
    ParameterSet result;
    SynthStats stats;
};

struct LimitError : std::runtime_error {
    LimitError() : std::runtime_error("ERR_LIMIT: exploration limits exceeded in strict mode") {}
};

// Reachability synthesis: the set of parameter valuations under which every
// component can reach its final location. Complete when the worklist
// empties within limits; otherwise a sound under-approximation tagged
// Bounded.
SynthResult ef_synth(const SynthesisProblem& problem, const ExploreOptions& options = {});

struct ConcreteCheck {
    bool feasible = false;
    SynthStatus status = SynthStatus::Complete;
};

// Feasibility of a fully valuated network.
ConcreteCheck check_concrete(const SynthesisProblem& problem,
                             const std::map<std::string, Rational>& v,
                             const ExploreOptions& options = {});

// The machine-readable result block ("status:" and "result:" lines).
std::string format_result_text(const SynthResult& r);
std::string format_result_json(const SynthResult& r);

// Segments locked by a train occupying the named location ("seg(s)" holds s,
// "via(a,n,b)" holds both adjacent segments, case suffixes ignored).
std::vector<std::string> locked_segments_of_location(const std::string& loc);

// Least value of one parameter inside the set (None when the set is empty).
std::optional<Rational> param_set_min(const ParameterSet& set, const std::string& param);

}  // namespace rail
