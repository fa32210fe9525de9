#include "doctest.h"

#include <random>

#include "rail/zone.hpp"
#include "support/builders.hpp"

using namespace rail;
using testsupport::zone;

namespace {

VarSpacePtr xy_space() { return make_var_space({"x", "y"}, {}); }
VarSpacePtr xp_space() { return make_var_space({"x"}, {"p"}); }

Rational Q(long n, long d = 1) { return make_rational(n, d); }

}  // namespace

TEST_CASE("time elapse relaxes clocks upward") {
    auto sp = make_var_space({"x"}, {});
    auto z = zone(sp, {{{{"x", Q(1)}}, Rel::Eq, Q(0)}});
    auto inv = ParametricZone(sp);
    auto e = zone_time_elapse(z, inv);
    auto expect = zone(sp, {});  // x >= 0 is implicit: zone is universal
    CHECK(zone_semantically_equal(e, expect));
}

TEST_CASE("time elapse preserves clock differences") {
    auto sp = xy_space();
    auto z = zone(sp, {{{{"x", Q(1)}}, Rel::Eq, Q(0)}, {{{"y", Q(1)}}, Rel::Eq, Q(2)}});
    auto e = zone_time_elapse(z, ParametricZone(sp));
    // {x >= 0, y = x + 2}
    auto expect = zone(sp, {{{{"y", Q(1)}, {"x", Q(-1)}}, Rel::Eq, Q(2)}});
    CHECK(zone_semantically_equal(e, expect));
    CHECK(zone_to_string(e) == "y = x + 2");
}

TEST_CASE("parameters do not elapse") {
    auto sp = xp_space();
    auto z = zone(sp, {{{{"x", Q(1)}, {"p", Q(-1)}}, Rel::Eq, Q(0)}});
    auto e = zone_time_elapse(z, ParametricZone(sp));
    auto expect = zone(sp, {{{{"x", Q(-1)}, {"p", Q(1)}}, Rel::Le, Q(0)}});  // x >= p
    CHECK(zone_semantically_equal(e, expect));
}

TEST_CASE("elapse is idempotent") {
    auto sp = xy_space();
    auto inv = zone(sp, {{{{"x", Q(1)}}, Rel::Le, Q(10)}});
    auto z = zone(sp, {{{{"x", Q(1)}}, Rel::Eq, Q(1)}, {{{"y", Q(1)}}, Rel::Le, Q(3)}});
    auto once = zone_time_elapse(z, inv);
    auto twice = zone_time_elapse(once, inv);
    CHECK(zone_semantically_equal(once, twice));
}

TEST_CASE("reset keeps parameter residue") {
    auto sp = xp_space();
    // {x >= p, p <= 3} reset x -> {x = 0, p <= 3}
    auto z = zone(sp, {{{{"x", Q(-1)}, {"p", Q(1)}}, Rel::Le, Q(0)},
                       {{{"p", Q(1)}}, Rel::Le, Q(3)}});
    auto r = zone_reset(z, {0});
    auto expect = zone(sp, {{{{"x", Q(1)}}, Rel::Eq, Q(0)}, {{{"p", Q(1)}}, Rel::Le, Q(3)}});
    CHECK(zone_semantically_equal(r, expect));
    CHECK(zone_to_string(r) == "x = 0 && p <= 3");
}

TEST_CASE("reset of nothing is the identity") {
    auto sp = xp_space();
    auto z = zone(sp, {{{{"x", Q(1)}}, Rel::Le, Q(5)}});
    CHECK(zone_semantically_equal(zone_reset(z, {}), z));
}

TEST_CASE("reset drops relations through the reset clock") {
    auto sp = xy_space();
    // {x = y + 1, y >= 2} reset x -> {x = 0, y >= 2}
    auto z = zone(sp, {{{{"x", Q(1)}, {"y", Q(-1)}}, Rel::Eq, Q(1)},
                       {{{"y", Q(-1)}}, Rel::Le, Q(-2)}});
    auto r = zone_reset(z, {0});
    auto expect = zone(sp, {{{{"x", Q(1)}}, Rel::Eq, Q(0)}, {{{"y", Q(-1)}}, Rel::Le, Q(-2)}});
    CHECK(zone_semantically_equal(r, expect));
}

TEST_CASE("projection eliminates clocks exactly") {
    auto sp = xp_space();
    // {x = p + 2, x <= 5} -> {p <= 3}
    auto z = zone(sp, {{{{"x", Q(1)}, {"p", Q(-1)}}, Rel::Eq, Q(2)},
                       {{{"x", Q(1)}}, Rel::Le, Q(5)}});
    auto proj = zone_project_params(z);
    CHECK(proj.space()->size() == 1);
    CHECK(zone_to_string(proj) == "p <= 3");
}

TEST_CASE("projection of a parameter-free zone is the universal polyhedron") {
    auto sp = make_var_space({"x"}, {});
    auto z = zone(sp, {{{{"x", Q(1)}}, Rel::Le, Q(2)}});
    auto proj = zone_project_params(z);
    CHECK(proj.space()->size() == 0);
    CHECK(!zone_is_empty(proj));
    CHECK(zone_to_string(proj) == "true");
}

TEST_CASE("inclusion and emptiness basics") {
    auto sp = make_var_space({"x"}, {});
    auto z2 = zone(sp, {{{{"x", Q(1)}}, Rel::Le, Q(2)}});
    auto z3 = zone(sp, {{{{"x", Q(1)}}, Rel::Le, Q(3)}});
    CHECK(zone_includes(z2, z3));
    CHECK(!zone_includes(z3, z2));
    auto contradiction = zone(sp, {{{{"x", Q(1)}}, Rel::Le, Q(2)},
                                   {{{"x", Q(-1)}}, Rel::Le, Q(-3)}});
    CHECK(zone_is_empty(contradiction));
}

TEST_CASE("strict rows make boundary points infeasible") {
    auto sp = make_var_space({"x"}, {});
    auto z = zone(sp, {{{{"x", Q(1)}}, Rel::Lt, Q(1)}, {{{"x", Q(-1)}}, Rel::Le, Q(-1)}});
    CHECK(zone_is_empty(z));
    auto open = zone(sp, {{{{"x", Q(1)}}, Rel::Lt, Q(1)}});
    CHECK(!zone_is_empty(open));
}

TEST_CASE("canonical form is stable across equal representations") {
    auto sp = xp_space();
    auto a = zone(sp, {{{{"x", Q(1)}}, Rel::Le, Q(2)}, {{{"x", Q(1)}}, Rel::Le, Q(3)}});
    auto b = zone(sp, {{{{"x", Q(2)}}, Rel::Le, Q(4)}});
    CHECK(zone_canonical(a).rows() == zone_canonical(b).rows());

    // equality via two inequalities versus a stored equality
    auto c = zone(sp, {{{{"x", Q(1)}}, Rel::Le, Q(1)}, {{{"x", Q(-1)}}, Rel::Le, Q(-1)}});
    auto d = zone(sp, {{{{"x", Q(1)}}, Rel::Eq, Q(1)}});
    CHECK(zone_canonical(c).rows() == zone_canonical(d).rows());
}

TEST_CASE("display grammar") {
    auto sp = make_var_space({}, {"p2", "p7", "pR"});
    auto z = zone(sp, {{{{"pR", Q(-1)}, {"p2", Q(1)}}, Rel::Le, Q(-28)}});
    CHECK(zone_to_string(z) == "pR >= p2 + 28");
    auto z2 = zone(sp, {{{{"pR", Q(-1)}}, Rel::Le, Q(-45)}});
    CHECK(zone_to_string(z2) == "pR >= 45");
}

TEST_CASE("randomized zone properties") {
    std::mt19937_64 rng(20240901);
    std::uniform_int_distribution<int> coef_dist(-5, 5);
    std::uniform_int_distribution<int> rhs_dist(-8, 8);
    std::uniform_int_distribution<int> rows_dist(1, 5);
    std::uniform_int_distribution<int> rel_dist(0, 4);

    auto sp = make_var_space({"x", "y", "z"}, {"p", "q"});
    const size_t n = sp->size();
    auto random_zone = [&] {
        std::vector<LinRow> rows;
        int k = rows_dist(rng);
        for (int i = 0; i < k; ++i) {
            LinRow r;
            r.coef.assign(n, Rational(0));
            for (size_t j = 0; j < n; ++j) r.coef[j] = Q(coef_dist(rng));
            int rel = rel_dist(rng);
            r.rel = rel == 0 ? Rel::Eq : (rel == 1 ? Rel::Lt : Rel::Le);
            r.rhs = Q(rhs_dist(rng));
            rows.push_back(std::move(r));
        }
        return zone_with_rows(sp, std::move(rows));
    };

    std::uniform_int_distribution<int> point_dist(0, 6);
    for (int iter = 0; iter < 150; ++iter) {
        auto z1 = random_zone();
        auto z2 = random_zone();

        // inclusion agrees with point sampling
        bool inc = zone_includes(z1, z2);
        for (int s = 0; s < 40; ++s) {
            std::vector<Rat> pt(n);
            for (auto& v : pt) v = Rat(Q(point_dist(rng), 2));
            if (zone_contains_point(z1, pt)) {
                if (inc) CHECK(zone_contains_point(z2, pt));
            }
        }

        // emptiness agrees between the simplex and a grid scan
        if (!zone_is_empty(z1)) {
            // canonical form represents the same set
            auto c = zone_canonical(z1);
            CHECK(zone_semantically_equal(c, z1));
        }

        // inclusion antisymmetry modulo canonical form
        if (zone_includes(z1, z2) && zone_includes(z2, z1))
            CHECK(zone_canonical(z1).rows() == zone_canonical(z2).rows());

        // projection membership vs valuated emptiness
        auto proj = zone_project_params(z1);
        for (int s = 0; s < 10; ++s) {
            std::vector<Rat> pv{Rat(Q(point_dist(rng))), Rat(Q(point_dist(rng)))};
            bool member = zone_contains_point(proj, pv);
            std::vector<LinRow> vrows = z1.rows();
            for (auto& row : vrows) {
                row.rhs -= row.coef[3] * pv[0] + row.coef[4] * pv[1];
                row.coef[3] = Rat(0);
                row.coef[4] = Rat(0);
            }
            auto valued = zone_with_rows(sp, std::move(vrows));
            CHECK(member == !zone_is_empty(valued));
        }
    }
}
