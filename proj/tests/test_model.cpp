#include "doctest.h"

#include "rail/model.hpp"
#include "support/builders.hpp"

using namespace rail;

TEST_CASE("traversable pairs include both directions") {
    RailNetworkGraph g;
    g.nodes = {{"N1", NodeKind::Normal}, {"a", NodeKind::Boundary}, {"b", NodeKind::Boundary},
               {"c", NodeKind::Boundary}};
    g.segments = {{"1", "a", "N1"}, {"2", "N1", "b"}, {"3", "N1", "c"}};
    g.transitions = {{{"1"}, "N1", {"2", "3"}}};
    auto pairs = traversable_pairs(g);
    CHECK(pairs.size() == 4);
    CHECK(pairs.count({"1", "N1", "2"}));
    CHECK(pairs.count({"1", "N1", "3"}));
    CHECK(pairs.count({"2", "N1", "1"}));
    CHECK(pairs.count({"3", "N1", "1"}));
    CHECK(!pairs.count({"2", "N1", "3"}));
}

TEST_CASE("traversable pairs of an empty transition set") {
    RailNetworkGraph g;
    CHECK(traversable_pairs(g).empty());
}

TEST_CASE("fig1 pairs: segments 2 and 3 lie on the same side of N1") {
    auto sys = testsupport::fig1_system();
    auto pairs = traversable_pairs(sys.graph);
    CHECK(pairs.count({"1", "N1", "2"}));
    CHECK(pairs.count({"1", "N1", "3"}));
    CHECK(!pairs.count({"2", "N1", "3"}));
}

TEST_CASE("pair symmetry as a relation on unordered moves") {
    auto sys = testsupport::fig1_system();
    for (const auto& [s, n, s2] : traversable_pairs(sys.graph))
        CHECK(traversable_pairs(sys.graph).count({s2, n, s}));
}

TEST_CASE("validate accepts the fig1 system and the empty system") {
    CHECK(validate_system(testsupport::fig1_system()).empty());
    CHECK(validate_system(ConstrainedRailwaySystem{}).empty());
}

TEST_CASE("connection must start at a boundary") {
    auto sys = testsupport::fig1_system();
    sys.trains[0].connection = {"1", "A"};
    auto report = validate_system(sys);
    REQUIRE(report.errors.size() == 1);
    CHECK(report.errors[0].code == ValidationCode::ConnectionStartNotBoundary);
}

TEST_CASE("each validation code is reachable") {
    using VC = ValidationCode;
    auto expect_code = [](const ConstrainedRailwaySystem& sys, VC code) {
        auto report = validate_system(sys);
        bool found = false;
        for (const auto& e : report.errors) found |= e.code == code;
        CHECK(found);
    };
    auto base = testsupport::fig1_system;

    {
        auto sys = base();
        sys.graph.nodes.push_back({"A", NodeKind::Normal});
        expect_code(sys, VC::DuplicateId);
    }
    {
        auto sys = base();
        sys.graph.segments.push_back({"x", "A", "Z"});
        sys.graph.seg_dur.emplace("x", DurationSpec::constant(make_rational(1)));
        expect_code(sys, VC::UnknownNode);
    }
    {
        auto sys = base();
        sys.graph.segs_dur.emplace(SegmentPair{"1", "zz"},
                                   DurationSpec::constant(make_rational(1)));
        expect_code(sys, VC::UnknownSegment);
    }
    {
        auto sys = base();
        sys.constraints.push_back(ScheduleConstraint::absolute({"ghost", "A", VisitKind::Arrival},
                                                               CmpOp::Le,
                                                               DurationSpec::constant(make_rational(1))));
        expect_code(sys, VC::UnknownTrain);
    }
    {
        auto sys = base();
        sys.graph.seg_dur.at("1") = DurationSpec::parameter("nope");
        expect_code(sys, VC::UnknownParameter);
    }
    {
        auto sys = base();
        sys.graph.segments.push_back({"loop", "A", "A"});
        sys.graph.seg_dur.emplace("loop", DurationSpec::constant(make_rational(1)));
        expect_code(sys, VC::SegSelfLoop);
    }
    {
        auto sys = base();
        sys.graph.transitions.push_back({{"9"}, "N1", {"2"}});
        expect_code(sys, VC::TransitionSegNotIncident);
    }
    {
        auto sys = base();
        sys.trains[0].connection.clear();
        expect_code(sys, VC::ConnectionEmpty);
    }
    {
        auto sys = base();
        sys.trains[0].connection = {"A", "B", "3"};
        expect_code(sys, VC::ConnectionInteriorBoundary);
    }
    {
        auto sys = base();
        sys.graph.segs_dur.erase(SegmentPair{"1", "2"});
        expect_code(sys, VC::UndefinedPairDuration);
    }
    {
        auto sys = base();
        sys.graph.seg_dur.at("1") = DurationSpec::constant(make_rational(-1));
        expect_code(sys, VC::NegativeConstant);
    }
    {
        auto sys = base();
        sys.parameters.push_back({"p", {{make_rational(5), make_rational(2)}}});
        expect_code(sys, VC::ParamBoundsInvalid);
    }
}

TEST_CASE("effective durations take the maximum") {
    auto sys = testsupport::fig1_system();
    auto& green = sys.trains[0];

    SUBCASE("train overrides upward") {
        green.t_seg_dur.emplace("1", DurationSpec::constant(make_rational(10)));
        auto eff = resolve_effective_durations(green, sys.graph);
        CHECK(eff.segment.at("1") == EffectiveDuration::constant(make_rational(10)));
    }
    SUBCASE("network wins when larger") {
        green.t_seg_dur.emplace("1", DurationSpec::constant(make_rational(3)));
        auto eff = resolve_effective_durations(green, sys.graph);
        CHECK(eff.segment.at("1") == EffectiveDuration::constant(make_rational(8)));
    }
    SUBCASE("absent train entry defers to the network") {
        auto eff = resolve_effective_durations(green, sys.graph);
        CHECK(eff.segment.at("1") == EffectiveDuration::constant(make_rational(8)));
    }
    SUBCASE("parameter against constant is flagged for the case split") {
        sys.parameters.push_back({"p2", std::nullopt});
        sys.graph.seg_dur.at("2") = DurationSpec::parameter("p2");
        green.t_seg_dur.emplace("2", DurationSpec::constant(make_rational(3)));
        auto eff = resolve_effective_durations(green, sys.graph);
        CHECK(eff.segment.at("2") ==
              EffectiveDuration::max_param_const("p2", make_rational(3)));
    }
    SUBCASE("parameter against zero folds to the parameter") {
        sys.parameters.push_back({"p2", std::nullopt});
        sys.graph.seg_dur.at("2") = DurationSpec::parameter("p2");
        green.t_seg_dur.emplace("2", DurationSpec::constant(make_rational(0)));
        auto eff = resolve_effective_durations(green, sys.graph);
        CHECK(eff.segment.at("2") == EffectiveDuration::single_param("p2"));
    }
    SUBCASE("two distinct parameters on one slot are rejected") {
        sys.parameters.push_back({"p2", std::nullopt});
        sys.parameters.push_back({"q", std::nullopt});
        sys.graph.seg_dur.at("2") = DurationSpec::parameter("p2");
        green.t_seg_dur.emplace("2", DurationSpec::parameter("q"));
        CHECK_THROWS_AS(resolve_effective_durations(green, sys.graph), ModelError);
    }
    SUBCASE("same parameter on both sides folds") {
        sys.parameters.push_back({"p2", std::nullopt});
        sys.graph.seg_dur.at("2") = DurationSpec::parameter("p2");
        green.t_seg_dur.emplace("2", DurationSpec::parameter("p2"));
        auto eff = resolve_effective_durations(green, sys.graph);
        CHECK(eff.segment.at("2") == EffectiveDuration::single_param("p2"));
    }
}

TEST_CASE("resolution is independent of declaration order") {
    auto sys = testsupport::fig1_system();
    auto a = resolve_effective_durations(sys.trains[2], sys.graph);
    auto shuffled = sys;
    std::reverse(shuffled.graph.segments.begin(), shuffled.graph.segments.end());
    std::reverse(shuffled.graph.transitions.begin(), shuffled.graph.transitions.end());
    auto b = resolve_effective_durations(shuffled.trains[2], shuffled.graph);
    CHECK(a == b);
    CHECK(a == resolve_effective_durations(sys.trains[2], sys.graph));  // idempotent
}

TEST_CASE("rational parsing and printing") {
    CHECK(*parse_rational("42") == make_rational(42));
    CHECK(*parse_rational("1/2") == *parse_rational("0.5"));
    CHECK(*parse_rational("2/4") == make_rational(1, 2));
    CHECK(rational_to_string(make_rational(7, 2)) == "7/2");
    CHECK(rational_to_string(make_rational(-3)) == "-3");
    CHECK(!parse_rational("1/0").has_value());
    CHECK(!parse_rational("abc").has_value());
}
