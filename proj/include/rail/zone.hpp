#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rail/rat.hpp"
#include "rail/rational.hpp"

namespace rail {

// Variable universe of a zone: clocks first, then parameters. All variables
// are implicitly non-negative; the implicit bounds participate in every
// operation but are never stored as rows.
struct VarSpace {
    std::vector<std::string> names;
    size_t clock_count = 0;

    size_t size() const { return names.size(); }
    size_t param_count() const { return names.size() - clock_count; }
    bool is_clock(size_t i) const { return i < clock_count; }
    std::optional<size_t> index_of(const std::string& name) const;
    bool operator==(const VarSpace&) const = default;
};

using VarSpacePtr = std::shared_ptr<const VarSpace>;

VarSpacePtr make_var_space(std::vector<std::string> clocks, std::vector<std::string> params);
// The parameter-only subspace (clock_count = 0).
VarSpacePtr param_space_of(const VarSpace& space);

enum class Rel { Le, Lt, Eq };

// One linear constraint: sum coef[i] * var[i]  rel  rhs.
struct LinRow {
    std::vector<Rat> coef;
    Rel rel = Rel::Le;
    Rat rhs;
    bool operator==(const LinRow&) const = default;
};

// Convex set of valuations of clocks and parameters, given by a conjunction
// of linear rows intersected with the non-negative orthant.
class ParametricZone {
public:
    ParametricZone() = default;
    explicit ParametricZone(VarSpacePtr space) : space_(std::move(space)) {}
    static ParametricZone bottom(VarSpacePtr space) {
        ParametricZone z(std::move(space));
        z.empty_ = true;
        return z;
    }

    const VarSpacePtr& space() const { return space_; }
    const std::vector<LinRow>& rows() const { return rows_; }
    bool marked_empty() const { return empty_; }

    // Adds a row and applies cheap syntactic reduction.
    void add_row(LinRow row);
    // Convenience: single-variable constraint var rel rhs.
    void add_bound(size_t var, Rel rel, Rat rhs);

    bool operator==(const ParametricZone&) const = default;

private:
    friend ParametricZone zone_with_rows(VarSpacePtr, std::vector<LinRow>);
    friend void zone_reduce(ParametricZone&);
    VarSpacePtr space_;
    std::vector<LinRow> rows_;
    bool empty_ = false;
};

ParametricZone zone_with_rows(VarSpacePtr space, std::vector<LinRow> rows);

// --- exact operations -------------------------------------------------------

bool zone_is_empty(const ParametricZone& z);

// A point of the zone (strictly inside strict rows), or nullopt when empty.
std::optional<std::vector<Rat>> zone_feasible_point(const ParametricZone& z);
ParametricZone zone_intersect(const ParametricZone& a, const ParametricZone& b);
// z1 subset-or-equal of z2.
bool zone_includes(const ParametricZone& z1, const ParametricZone& z2);
bool zone_semantically_equal(const ParametricZone& a, const ParametricZone& b);

// Does z entail the row (with the implicit non-negativity bounds)?
bool zone_entails(const ParametricZone& z, const LinRow& row);

// Future closure: {mu + d | mu in z, d >= 0} intersected with `invariant`.
// Clocks shift uniformly, parameters stay put.
ParametricZone zone_time_elapse(const ParametricZone& z, const ParametricZone& invariant);

// Exact elimination of each clock in `clocks`, then pinned to 0.
ParametricZone zone_reset(const ParametricZone& z, const std::vector<size_t>& clocks);

// Exact elimination of all clock dimensions; result lives in the parameter
// subspace.
ParametricZone zone_project_params(const ParametricZone& z);

// Exact elimination of arbitrary variables (stays in the same space, the
// eliminated dimensions become unconstrained).
ParametricZone zone_eliminate(const ParametricZone& z, const std::vector<size_t>& vars);

// Exact minimum of a single variable over the zone (always defined on a
// non-empty zone since variables are non-negative).
std::optional<Rational> zone_min_of_var(const ParametricZone& z, size_t var);

// Exact union when the two zones differ only in the bounds of one direction
// and the two intervals connect; nullopt otherwise. The result equals
// a union b as a set.
std::optional<ParametricZone> zone_merge_one_direction(const ParametricZone& a,
                                                       const ParametricZone& b);

// Membership of an explicit point (values indexed like the space).
bool zone_contains_point(const ParametricZone& z, const std::vector<Rat>& point);

// Drops rows entailed by the remaining ones (with the implicit
// non-negativity bounds); cheaper than full canonicalization.
ParametricZone zone_drop_redundant(const ParametricZone& z);

// Canonical, redundancy-free form: implicit equalities extracted into a
// reduced row echelon basis, inequalities reduced modulo that basis, rows
// entailed by the rest (plus non-negativity) dropped, coefficients
// integer-normalized, deterministic order. Equal solution sets canonicalize
// to identical row lists.
ParametricZone zone_canonical(const ParametricZone& z);

// Pretty form of a canonical zone: atoms joined with " && "; "true" for the
// universal zone, "false" for the empty one.
std::string zone_to_string(const ParametricZone& z);

// One canonical row as text (expects integer-normalized content).
std::string row_to_string(const LinRow& row, const std::vector<std::string>& names);

}  // namespace rail
