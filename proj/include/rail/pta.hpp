#pragma once

#include <map>
#include <string>
#include <vector>

#include "rail/model.hpp"

namespace rail {

// Linear term over parameters: sum alpha_i * p_i + d, alpha_i integer.
struct LinearTerm {
    std::map<std::string, long> coeffs;
    Rational constant;

    static LinearTerm of_constant(Rational c) {
        LinearTerm t;
        t.constant = std::move(c);
        return t;
    }
    static LinearTerm of_param(const std::string& p, Rational c = Rational(0)) {
        LinearTerm t;
        t.coeffs[p] = 1;
        t.constant = std::move(c);
        return t;
    }
    bool is_constant() const { return coeffs.empty(); }
    bool operator==(const LinearTerm&) const = default;
};

std::string linear_term_to_string(const LinearTerm& t);

// clock op (sum alpha_i p_i + d)
struct AtomicConstraint {
    std::string clock;
    CmpOp op = CmpOp::Le;
    LinearTerm term;
    bool operator==(const AtomicConstraint&) const = default;
};

// var == value over booleans (0/1) and bounded integers.
struct DiscretePredicate {
    std::string var;
    long value = 0;
    bool operator==(const DiscretePredicate&) const = default;
};

struct DiscreteUpdate {
    std::string var;
    long value = 0;
    bool operator==(const DiscreteUpdate&) const = default;
};

struct GuardExpr {
    std::vector<AtomicConstraint> clocks;
    std::vector<DiscretePredicate> discrete;
    bool empty() const { return clocks.empty() && discrete.empty(); }
    bool operator==(const GuardExpr&) const = default;
};

struct Edge {
    std::string source;
    GuardExpr guard;
    std::string action;
    std::vector<std::string> resets;
    std::vector<DiscreteUpdate> updates;
    std::string target;
    bool operator==(const Edge&) const = default;
};

struct Pta {
    std::string name;
    std::vector<std::string> actions;    // alphabet
    std::vector<std::string> locations;
    std::string initial;
    std::string final_loc;
    std::vector<std::string> clocks;     // clocks this automaton reads (x_abs may be shared)
    std::vector<std::string> parameters; // parameters mentioned
    std::map<std::string, std::vector<AtomicConstraint>> invariants;  // absent = true
    std::vector<Edge> edges;
    bool operator==(const Pta&) const = default;
};

struct DiscreteVarDecl {
    std::string name;
    long init = 0;
    long min = 0;
    long max = 1;
    bool is_bool = true;
    bool operator==(const DiscreteVarDecl&) const = default;
};

// Synchronized product: an action is taken jointly by all components whose
// alphabet contains it. Discrete variables are global.
struct PtaNetwork {
    std::vector<Pta> components;
    std::vector<ParamDecl> parameters;       // shared parameter table
    std::vector<DiscreteVarDecl> variables;  // shared discrete variables
    std::vector<std::string> clocks;         // global clock table
    std::string shared_clock;                // "x_abs" when used, else empty
    bool operator==(const PtaNetwork&) const = default;
};

ValidationReport check_wellformed(const PtaNetwork& net);

struct PtaError : std::runtime_error {
    std::string code;
    PtaError(std::string c, const std::string& what)
        : std::runtime_error(what), code(std::move(c)) {}
};

// Substitutes every parameter occurrence by its value (values must be
// non-negative rationals and cover all parameters). Throws
// PtaError{"ERR_PARTIAL_VALUATION"} otherwise.
PtaNetwork valuate(const PtaNetwork& net, const std::map<std::string, Rational>& v);

// Stable textual dump of the network, for diffing and inspection.
std::string dump_network(const PtaNetwork& net);

}  // namespace rail
