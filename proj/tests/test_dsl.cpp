#include "doctest.h"

#include <sstream>

#include "rail/dsl.hpp"
#include "support/builders.hpp"

using namespace rail;

namespace {

const char* kMinimalFile =
    "# one segment, one train\n"
    "param pR in [0, 100]\n"
    "node A boundary\n"
    "node B boundary\n"
    "\n"
    "segment s = A -- B dur 5\n"
    "\n"
    "train t connection [A, B]\n"
    "\n"
    "constraint abs arrival(t, B) <= pR\n"
    "\n"
    "# end\n";

}  // namespace

TEST_CASE("the minimal example file parses to a 2-node, 1-segment, 1-train system") {
    auto r = parse_system(kMinimalFile);
    REQUIRE(r.ok());
    CHECK(r.system.graph.nodes.size() == 2);
    CHECK(r.system.graph.segments.size() == 1);
    CHECK(r.system.trains.size() == 1);
    CHECK(r.system.constraints.size() == 1);
    CHECK(validate_system(r.system).empty());
}

TEST_CASE("self-loop segments are rejected at parse time") {
    auto r = parse_system("segment 1 = A -- A dur 5\n");
    REQUIRE(!r.ok());
    CHECK(r.errors[0].code == ParseCode::SegSelfLoop);
    CHECK(r.errors[0].span.line == 1);
}

TEST_CASE("errors carry spans inside the offending token") {
    std::string text = "node A boundary\nsegment s = A -- Q dur oops\n";
    auto r = parse_system(text);
    REQUIRE(!r.ok());
    for (const auto& e : r.errors) {
        CHECK(e.span.offset <= text.size());
    }
}

TEST_CASE("duplicate and missing declarations are reported") {
    auto r = parse_system("node A boundary\nnode A station\n");
    REQUIRE(!r.ok());
    CHECK(r.errors[0].code == ParseCode::DuplicateId);

    auto r2 = parse_system("node A boundary\ntrain t segdur s dur 5\n");
    REQUIRE(!r2.ok());
    bool has_missing = false;
    for (const auto& e : r2.errors) has_missing |= e.code == ParseCode::MissingConnection;
    CHECK(has_missing);

    auto r3 = parse_system("node A boundary\nnode B boundary\nsegment s = A -- B dur p\n");
    REQUIRE(!r3.ok());
    CHECK(r3.errors[0].code == ParseCode::UnknownParam);
}

TEST_CASE("wait sugar desugars to a transfer over arrival and departure") {
    std::string text =
        "param p\n"
        "node A boundary\nnode S station\nnode B boundary\n"
        "segment 1 = A -- S dur 2\nsegment 2 = S -- B dur 2\n"
        "pairdur 1 <-> 2 dur 1\n"
        "transition at S : {1} | {2}\n"
        "train t connection [A, S, B]\n"
        "constraint rel wait(t, S) >= p\n";
    auto r = parse_system(text);
    REQUIRE(r.ok());
    REQUIRE(r.system.constraints.size() == 1);
    const auto& c = r.system.constraints[0];
    CHECK(c.kind == ScheduleConstraint::Kind::Relative);
    CHECK(c.v1 == VisitEvent{"t", "S", VisitKind::Arrival});
    CHECK(c.v2 == VisitEvent{"t", "S", VisitKind::Departure});
    CHECK(c.op == CmpOp::Ge);

    // the symmetric pairdur expanded to both orders
    CHECK(r.system.graph.segs_dur.count({"1", "2"}));
    CHECK(r.system.graph.segs_dur.count({"2", "1"}));
}

TEST_CASE("fractions and decimals parse to equal values") {
    std::string a = "node A boundary\nnode B boundary\nsegment s = A -- B dur 1/2\ntrain t connection [A, B]\n";
    std::string b = "node A boundary\nnode B boundary\nsegment s = A -- B dur 0.5\ntrain t connection [A, B]\n";
    auto ra = parse_system(a);
    auto rb = parse_system(b);
    REQUIRE(ra.ok());
    REQUIRE(rb.ok());
    CHECK(structurally_equal(ra.system, rb.system));
}

TEST_CASE("render then parse is the identity, and rendering is deterministic") {
    auto check_roundtrip = [](const ConstrainedRailwaySystem& sys) {
        std::string text = render_system(sys);
        auto r = parse_system(text);
        REQUIRE(r.ok());
        CHECK(structurally_equal(r.system, sys));
        CHECK(render_system(r.system) == text);
        CHECK(render_system(sys) == text);  // byte-identical across calls
    };
    check_roundtrip(testsupport::fig1_with_deadline());
    check_roundtrip(testsupport::fig1_parametric_segments());
    check_roundtrip(testsupport::one_segment_system(DurationSpec::constant(make_rational(5))));
    check_roundtrip(testsupport::contention_system(3));
    auto r = parse_system(kMinimalFile);
    REQUIRE(r.ok());
    check_roundtrip(r.system);
}

TEST_CASE("empty system renders to the header only") {
    std::string text = render_system(ConstrainedRailwaySystem{});
    CHECK(text == "# constrained railway system (format v1)\n");
}

TEST_CASE("fig1 renders 11 segments and 4 boundary nodes") {
    std::string text = render_system(testsupport::fig1_system());
    size_t segs = 0, boundaries = 0, pos = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("segment ", 0) == 0) ++segs;
        if (line.rfind("node ", 0) == 0 && line.find(" boundary") != std::string::npos)
            ++boundaries;
    }
    (void)pos;
    CHECK(segs == 11);
    CHECK(boundaries == 4);
}
