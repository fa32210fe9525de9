#pragma once

#include "rail/model.hpp"

namespace rail {

// Serial-parallel benchmark family: NS serially connected groups of NP
// identical parallel tracks with a station, NT trains all running the
// connection [S, E].
struct ScenarioSpec {
    enum class Kind { Nop, Last };
    int ns = 1;
    int np = 1;
    int nt = 1;
    Kind kind = Kind::Nop;
    long seg_dur = 10;   // default duration profile
    long pair_dur = 1;
};

// "nop": one parameter J with arrival(t_NT, E) <= J.
// "last": additionally bnd with transfer(departure(t_NT, S), arrival(t_NT, E)) <= bnd.
ConstrainedRailwaySystem gen_serial_parallel(const ScenarioSpec& spec);

}  // namespace rail
