#include "rail/pta.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace rail {

std::string linear_term_to_string(const LinearTerm& t) {
    std::ostringstream os;
    bool any = false;
    for (const auto& [p, a] : t.coeffs) {
        if (a == 0) continue;
        if (any) os << (a < 0 ? " - " : " + ");
        else if (a < 0) os << "-";
        long mag = a < 0 ? -a : a;
        if (mag != 1) os << mag << "*";
        os << p;
        any = true;
    }
    if (!any) {
        os << rational_to_string(t.constant);
    } else if (t.constant != 0) {
        os << (t.constant < 0 ? " - " : " + ")
           << rational_to_string(t.constant < 0 ? Rational(-t.constant) : t.constant);
    }
    return os.str();
}

ValidationReport check_wellformed(const PtaNetwork& net) {
    ValidationReport report;
    auto err = [&](const std::string& entity, const std::string& msg) {
        report.errors.push_back({ValidationCode::UnknownSegment, msg, entity});
    };

    std::set<std::string> params;
    for (const auto& p : net.parameters) {
        if (!params.insert(p.name).second) err(p.name, "duplicate parameter in network table");
    }
    std::set<std::string> vars;
    for (const auto& v : net.variables) {
        if (!vars.insert(v.name).second) err(v.name, "duplicate discrete variable");
        if (v.init < v.min || v.init > v.max) err(v.name, "initial value outside declared range");
    }
    std::set<std::string> global_clocks(net.clocks.begin(), net.clocks.end());
    if (global_clocks.size() != net.clocks.size()) err("clocks", "duplicate clock in network table");

    std::map<std::string, int> clock_owners;
    std::set<std::string> names;
    for (const auto& pta : net.components) {
        if (!names.insert(pta.name).second) err(pta.name, "duplicate component name");
        std::set<std::string> locs(pta.locations.begin(), pta.locations.end());
        if (locs.size() != pta.locations.size()) err(pta.name, "duplicate location name");
        if (!locs.count(pta.initial)) err(pta.name, "initial location not declared");
        if (!locs.count(pta.final_loc)) err(pta.name, "final location not declared");
        std::set<std::string> alphabet(pta.actions.begin(), pta.actions.end());
        std::set<std::string> own_clocks(pta.clocks.begin(), pta.clocks.end());
        for (const auto& c : pta.clocks) {
            if (!global_clocks.count(c)) err(pta.name, "clock " + c + " missing from network table");
            if (c != net.shared_clock) clock_owners[c]++;
        }
        auto check_atoms = [&](const std::vector<AtomicConstraint>& atoms, const std::string& where) {
            for (const auto& a : atoms) {
                if (!own_clocks.count(a.clock))
                    err(pta.name, "constraint on undeclared clock " + a.clock + " in " + where);
                for (const auto& [p, _] : a.term.coeffs)
                    if (!params.count(p)) err(pta.name, "unknown parameter " + p + " in " + where);
            }
        };
        for (const auto& [loc, inv] : pta.invariants) {
            if (!locs.count(loc)) err(pta.name, "invariant on undeclared location " + loc);
            check_atoms(inv, "invariant of " + loc);
        }
        for (const auto& e : pta.edges) {
            if (!locs.count(e.source)) err(pta.name, "edge source " + e.source + " undeclared");
            if (!locs.count(e.target)) err(pta.name, "edge target " + e.target + " undeclared");
            if (!alphabet.count(e.action))
                err(pta.name, "edge action " + e.action + " missing from alphabet");
            check_atoms(e.guard.clocks, "guard");
            for (const auto& d : e.guard.discrete)
                if (!vars.count(d.var)) err(pta.name, "guard references undeclared variable " + d.var);
            for (const auto& r : e.resets) {
                if (!own_clocks.count(r)) err(pta.name, "reset of undeclared clock " + r);
                if (r == net.shared_clock) err(pta.name, "the shared absolute clock is never reset");
            }
            for (const auto& u : e.updates)
                if (!vars.count(u.var)) err(pta.name, "update of undeclared variable " + u.var);
        }
    }
    for (const auto& [c, owners] : clock_owners)
        if (owners > 1) err(c, "clock declared by more than one component");
    return report;
}

PtaNetwork valuate(const PtaNetwork& net, const std::map<std::string, Rational>& v) {
    for (const auto& p : net.parameters) {
        auto it = v.find(p.name);
        if (it == v.end())
            throw PtaError("ERR_PARTIAL_VALUATION", "no value for parameter " + p.name);
        if (it->second < 0)
            throw PtaError("ERR_PARTIAL_VALUATION", "negative value for parameter " + p.name);
    }
    auto subst_term = [&](const LinearTerm& t) {
        LinearTerm out;
        out.constant = t.constant;
        for (const auto& [p, a] : t.coeffs) out.constant += Rational(a) * v.at(p);
        return out;
    };
    PtaNetwork out = net;
    out.parameters.clear();
    for (auto& pta : out.components) {
        pta.parameters.clear();
        for (auto& [_, inv] : pta.invariants)
            for (auto& a : inv) a.term = subst_term(a.term);
        for (auto& e : pta.edges)
            for (auto& a : e.guard.clocks) a.term = subst_term(a.term);
    }
    return out;
}

namespace {

std::string atom_text(const AtomicConstraint& a) {
    return a.clock + " " + cmp_op_text(a.op) + " " + linear_term_to_string(a.term);
}

}  // namespace

std::string dump_network(const PtaNetwork& net) {
    std::ostringstream os;
    os << "network\n";
    if (!net.parameters.empty()) {
        os << "  parameters:";
        for (const auto& p : net.parameters) {
            os << " " << p.name;
            if (p.bounds)
                os << "[" << rational_to_string(p.bounds->first) << ","
                   << rational_to_string(p.bounds->second) << "]";
        }
        os << "\n";
    }
    if (!net.clocks.empty()) {
        os << "  clocks:";
        for (const auto& c : net.clocks) os << " " << c;
        os << "\n";
    }
    for (const auto& v : net.variables) {
        os << "  var " << v.name << " : ";
        if (v.is_bool)
            os << "bool = " << (v.init ? "true" : "false");
        else
            os << "int[" << v.min << ".." << v.max << "] = " << v.init;
        os << "\n";
    }
    for (const auto& pta : net.components) {
        os << "\npta " << pta.name << "\n";
        os << "  init " << pta.initial << "\n";
        os << "  final " << pta.final_loc << "\n";
        for (const auto& loc : pta.locations) {
            os << "  loc " << loc;
            auto it = pta.invariants.find(loc);
            if (it != pta.invariants.end() && !it->second.empty()) {
                os << " invariant ";
                for (size_t i = 0; i < it->second.size(); ++i) {
                    if (i) os << " & ";
                    os << atom_text(it->second[i]);
                }
            }
            os << "\n";
        }
        for (const auto& e : pta.edges) {
            os << "  edge " << e.source << " -> " << e.target << " on " << e.action;
            if (!e.guard.empty()) {
                os << " when ";
                bool first = true;
                for (const auto& a : e.guard.clocks) {
                    if (!first) os << " & ";
                    os << atom_text(a);
                    first = false;
                }
                for (const auto& d : e.guard.discrete) {
                    if (!first) os << " & ";
                    os << d.var << " = " << d.value;
                    first = false;
                }
            }
            if (!e.resets.empty()) {
                os << " reset";
                for (const auto& r : e.resets) os << " " << r;
            }
            if (!e.updates.empty()) {
                os << " set ";
                for (size_t i = 0; i < e.updates.size(); ++i) {
                    if (i) os << ", ";
                    os << e.updates[i].var << " := " << e.updates[i].value;
                }
            }
            os << "\n";
        }
    }
    return os.str();
}

}  // namespace rail
