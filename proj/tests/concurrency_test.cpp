#include <gtest/gtest.h>

#include "support.hpp"

using namespace wfreach;
using namespace wfreach::testing;

namespace {

struct Fig1 : ::testing::Test {
    WorkflowNet wf = fixture("fig1.wfnet");
    NetAnalysis a = NetAnalysis::build(wf);
    const PetriNet& net = wf.net;

    AdmissibilityResult admit(const char* literal) {
        return check_admissibility(net, a.concurrency(), parse_marking(net, literal));
    }
    Names conc_places(const char* place) {
        Names out;
        a.concurrency()[net.at(place).index].for_each([&](NodeId q) {
            if (net.is_place(q)) out.insert(net.label(q));
        });
        return out;
    }
};

}  // namespace

TEST_F(Fig1, ConcurrentToP15) { EXPECT_EQ(conc_places("p15"), (Names{"p6"})); }

TEST_F(Fig1, ConcurrentPairs) {
    EXPECT_TRUE(a.concurrency()[net.at("p10").index].contains(net.at("p9")));
    EXPECT_TRUE(a.concurrency()[net.at("p12").index].contains(net.at("p5")));
}

TEST_F(Fig1, SourceConcurrentToNothing) { EXPECT_TRUE(conc_places("p1").empty()); }

TEST_F(Fig1, MaximumAdmissibleMarking) {
    auto r = admit("[p5,p12,p14]");
    EXPECT_EQ(r.verdict, Admissibility::maximum_admissible);
    EXPECT_TRUE(r.missing.empty());
    EXPECT_TRUE(r.conflicting.empty());
}

TEST_F(Fig1, AdmissibleMarkingWithMissingPlaces) {
    auto r = admit("[p9,p10]");
    EXPECT_EQ(r.verdict, Admissibility::admissible);
    EXPECT_EQ(names(net, r.missing), (Names{"p2", "p3", "p11", "p12", "p13", "p14", "p16", "p17", "p18"}));
}

TEST_F(Fig1, NotAdmissibleMarking) {
    auto r = admit("[p3,p5]");
    EXPECT_EQ(r.verdict, Admissibility::not_admissible);
    EXPECT_EQ(names(net, r.conflicting), (Names{"p3", "p5"}));
    EXPECT_EQ(names(net, r.candidates), (Names{"p12", "p14"}));
    EXPECT_EQ(names(net, r.missing), (Names{"p12", "p14"}));
}

TEST_F(Fig1, UnsafeMultiplicity) {
    auto r = admit("[p5^2,p12,p14]");
    EXPECT_EQ(r.verdict, Admissibility::not_admissible);
    EXPECT_EQ(names(net, r.unsafe), (Names{"p5"}));
    EXPECT_TRUE(r.conflicting.contains(net.at("p5")));
}

TEST_F(Fig1, ForwardPathConflict) {
    auto c = classify_conflict(a, net.at("p3"), net.at("p5"));
    EXPECT_EQ(c.kind, ConflictKind::forward_path);
    ASSERT_FALSE(c.path.empty());
    EXPECT_EQ(net.label(c.path.front()), "p3");
    EXPECT_EQ(net.label(c.path.back()), "p5");
    for (std::size_t k = 0; k + 1 < c.path.size(); ++k) EXPECT_TRUE(net.has_arc(c.path[k], c.path[k + 1]));
}

TEST_F(Fig1, BackwardPathConflict) {
    auto c = classify_conflict(a, net.at("p5"), net.at("p3"));
    EXPECT_EQ(c.kind, ConflictKind::backward_path);
    EXPECT_EQ(net.label(c.path.front()), "p3");
    EXPECT_EQ(net.label(c.path.back()), "p5");
}

TEST_F(Fig1, ConcurrentPairCannotBeClassified) {
    EXPECT_THROW(classify_conflict(a, net.at("p9"), net.at("p10")), Error);
}

TEST(Conflict, Fig12ExclusiveAtP4) {
    auto wf = fixture("fig12.wfnet");
    auto a = NetAnalysis::build(wf);
    const auto& net = wf.net;
    auto c = classify_conflict(a, net.at("p5"), net.at("p7"));
    EXPECT_EQ(c.kind, ConflictKind::exclusive);
    ASSERT_TRUE(c.decision_place);
    EXPECT_EQ(net.label(*c.decision_place), "p4");
    EXPECT_EQ(net.label(c.path_to_x.back()), "p5");
    EXPECT_EQ(net.label(c.path_to_y.back()), "p7");
    EXPECT_EQ(c.path_to_x.front(), *c.decision_place);
    EXPECT_EQ(c.path_to_y.front(), *c.decision_place);
    EXPECT_NE(c.path_to_x[1], c.path_to_y[1]);
}

TEST(Conflict, DirectSuccessorChainIsForward) {
    auto wf = parse_native("place i\nplace m\nplace o\ntrans a\ntrans b\narc i a\narc a m\narc m b\narc b o\nsource i\nsink o");
    auto a = NetAnalysis::build(wf);
    auto c = classify_conflict(a, wf.net.at("i"), wf.net.at("m"));
    EXPECT_EQ(c.kind, ConflictKind::forward_path);
    EXPECT_EQ(c.path.size(), 3u);
}

TEST(Admissibility, SourceIsMaximumAdmissible) {
    for (auto f : {"fig1.wfnet", "fig5.wfnet", "fig12.wfnet", "seq.wfnet"}) {
        auto wf = fixture(f);
        auto a = NetAnalysis::build(wf);
        auto r = check_admissibility(wf.net, a.concurrency(), Marking::single(wf.source));
        EXPECT_EQ(r.verdict, Admissibility::maximum_admissible) << f;
    }
}

TEST(Admissibility, EmptyMarkingRejected) {
    auto wf = fixture("fig1.wfnet");
    auto a = NetAnalysis::build(wf);
    EXPECT_THROW(check_admissibility(wf.net, a.concurrency(), Marking{}), Error);
}

TEST(Concurrency, MatchesBruteForceOnCorpus) {
    for (const auto& wf : corpus(80)) {
        auto a = NetAnalysis::build(wf);
        auto brute = brute_concurrency(wf.net, explore(wf, default_state_cap));
        for (auto p : wf.net.places()) {
            NodeSet mine = a.concurrency()[p.index] & wf.net.all_places();
            NodeSet ref = brute[p.index] & wf.net.all_places();
            EXPECT_EQ(mine, ref) << wf.net.label(p);
        }
    }
}

TEST(Concurrency, SymmetricIrreflexivePathFree) {
    for (const auto& wf : corpus(80)) {
        auto a = NetAnalysis::build(wf);
        const auto& conc = a.concurrency();
        for (std::size_t x = 0; x < wf.net.size(); ++x) {
            EXPECT_FALSE(conc[x].contains(NodeId(x)));
            conc[x].for_each([&](NodeId y) {
                EXPECT_TRUE(conc[y.index].contains(NodeId(x)));
                EXPECT_FALSE(a.reach()[x].contains(y));
            });
        }
    }
}
