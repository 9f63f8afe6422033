#include <gtest/gtest.h>

#include "nlrw/corpus.hpp"
#include "nlrw/iso.hpp"
#include "support/linear_reference.hpp"
#include "support/rule_fixtures.hpp"

using namespace nlrw;
using namespace fixtures;

namespace
{
    const Category kBoth[] = {Category::multigraph, Category::simplegraph};

    std::string failures_of(const CompatibilityReport& r)
    {
        std::string out;
        for (const auto& f : r.failures) out += f + "\n";
        return out;
    }
}

TEST(SpanCompose, IdentityIsNeutral)
{
    for (auto c : kBoth)
    {
        auto r = add_edge(c);
        Span s{r.output_leg, r.input_leg};
        Span id{identity(r.O()), identity(r.O())};
        auto out = span_compose(id, s);
        EXPECT_TRUE(find_iso_commuting(out.left.dom, r.K(), {IsoCondition::over(out.left, r.output_leg), IsoCondition::over(out.right, r.input_leg)}));
        EXPECT_THROW(span_compose(s, s), not_composable);
    }
}

TEST(SpanCompose, MonicSpansIntersect)
{
    auto c = Category::multigraph;
    auto J = GraphBuilder(c).vertices({"a", "b", "c"}).build();
    auto AB = GraphBuilder(c).vertices({"a", "b"}).build();
    auto BC = GraphBuilder(c).vertices({"b", "c"}).build();
    Span s1{make_morphism(AB, J, {0, 1}, {}), identity(AB)};
    Span s2{identity(BC), make_morphism(BC, J, {1, 2}, {})};
    auto out = span_compose(s2, s1);
    EXPECT_EQ(out.left.dom->num_vertices(), 1);
    EXPECT_EQ(out.right.vertex(0), 1);
    EXPECT_EQ(out.left.vertex(0), 0);
}

TEST(RuleMatches, IdentityRulesFollowTheMultiSum)
{
    for (auto c : kBoth)
    {
        auto r = identity_on_point(c);
        auto mus = rule_matches_sqpo(r, r);
        EXPECT_EQ(mus.size(), multisum(r.I(), r.O()).size());
        for (const auto& mu : mus)
        {
            EXPECT_TRUE(is_iso(mu.poc.d));
            EXPECT_TRUE(mu.fpa.trivial());
            auto comp = compose_sqpo(r, mu, r);
            EXPECT_TRUE(is_iso(comp.rule.input_leg));
            EXPECT_TRUE(is_iso(comp.rule.output_leg));
            EXPECT_TRUE(isomorphic(comp.rule.I(), mu.sum.object()));
            EXPECT_TRUE(verify_witness(comp, r, r).empty());
        }
        auto dmus = rule_matches_dpo(r, r);
        EXPECT_EQ(dmus.size(), mus.size());
        for (const auto& mu : dmus)
        {
            auto comp = compose_dpo(r, mu, r);
            EXPECT_TRUE(is_iso(comp.rule.input_leg));
            EXPECT_TRUE(isomorphic(comp.rule.I(), mu.sum.object()));
        }
    }
}

TEST(RuleMatches, LinearRulesHaveTrivialAugmentations)
{
    for (auto c : kBoth)
    {
        for (const auto& p : concurrency_pairs(c))
        {
            if (!p.linear) continue;
            for (const auto& mu : rule_matches_sqpo(p.r2, p.r1)) EXPECT_TRUE(mu.fpa.trivial()) << p.name;
        }
    }
}

TEST(Compose, WitnessSquaresPassTheirOracles)
{
    for (auto c : kBoth)
    {
        for (const auto& p : concurrency_pairs(c))
        {
            for (const auto& mu : rule_matches_sqpo(p.r2, p.r1))
            {
                auto comp = compose_sqpo(p.r2, mu, p.r1);
                auto bad = verify_witness(comp, p.r2, p.r1);
                EXPECT_TRUE(bad.empty()) << p.name << ": " << (bad.empty() ? "" : bad.front());
            }
            for (const auto& mu : rule_matches_dpo(p.r2, p.r1))
            {
                auto comp = compose_dpo(p.r2, mu, p.r1);
                auto bad = verify_witness(comp, p.r2, p.r1);
                EXPECT_TRUE(bad.empty()) << p.name << ": " << (bad.empty() ? "" : bad.front());
            }
        }
    }
}

TEST(Compose, BackPropagationAddsLoops)
{
    auto c = Category::multigraph;
    auto r1 = clone_merge(c);
    auto r2 = two_loops_identity();
    int nontrivial = 0;
    for (const auto& mu : rule_matches_sqpo(r2, r1))
    {
        if (mu.fpa.trivial()) continue;
        ++nontrivial;
        auto comp = compose_sqpo(r2, mu, r1);
        EXPECT_TRUE(verify_witness(comp, r2, r1).empty());
        const auto& w = comp.witness;
        // the naive output motif O21 embeds properly into the composite's
        EXPECT_TRUE(is_regular_mono(w.O21_to_Obar21));
        EXPECT_FALSE(is_iso(w.O21_to_Obar21));
        EXPECT_GT(comp.rule.O()->num_edges(), w.O21_to_Obar21.dom->num_edges());
    }
    EXPECT_GT(nontrivial, 0);
}

TEST(Synthesis, RejectsUnrelatedDerivations)
{
    auto c = Category::multigraph;
    auto r = identity_on_point(c);
    auto X = point(c);
    auto d1 = derive_sqpo(X, r, matches_sqpo(r, X)[0]);
    auto Y = GraphBuilder(c).vertices({"a", "b"}).build();
    auto d2 = derive_sqpo(Y, r, matches_sqpo(r, Y)[0]);
    EXPECT_THROW(synthesize_sqpo(d1, d2), not_composable);
    auto d3 = derive_dpo(X, r, matches_dpo(r, X)[0]);
    EXPECT_THROW(synthesize_sqpo(d3, derive_sqpo(d3.result(), r, matches_sqpo(r, d3.result())[0])), not_composable);
}

TEST(Dpo, SimpleGraphsAreRejected)
{
    auto c = Category::simplegraph;
    auto r = identity_on_point(c);
    auto X = point(c);
    auto d1 = derive_dpo(X, r, matches_dpo(r, X)[0]);
    auto d2 = derive_dpo(d1.result(), r, matches_dpo(r, d1.result())[0]);
    EXPECT_THROW(synthesize_dpo(d1, d2), not_rm_adhesive);
    EXPECT_THROW(compatibility_check(r, r, X, Semantics::dpo), not_rm_adhesive);
    auto mus = rule_matches_dpo(r, r);
    ASSERT_FALSE(mus.empty());
    auto comp = compose_dpo(r, mus[0], r);
    EXPECT_THROW(analyze_dpo(r, comp, r, X, DPOMatch{}), not_rm_adhesive);
}

TEST(Compatibility, SmallHostsSqpo)
{
    for (auto c : kBoth)
    {
        for (const auto& p : concurrency_pairs(c))
        {
            auto cat = make_catalog(p.r2, p.r1, Semantics::sqpo);
            for (const auto& X : all_graphs(c, 3, 2))
            {
                auto rep = compatibility_check(cat, X);
                EXPECT_TRUE(rep.passed()) << to_string(c) << " " << p.name << " on " << serialize_compact(*X) << "\n" << failures_of(rep);
            }
        }
    }
}

TEST(Compatibility, SmallHostsDpo)
{
    auto c = Category::multigraph;
    for (const auto& p : concurrency_pairs(c))
    {
        auto cat = make_catalog(p.r2, p.r1, Semantics::dpo);
        for (const auto& X : all_graphs(c, 3, 2))
        {
            auto rep = compatibility_check(cat, X);
            EXPECT_FALSE(rep.two_step.empty() && !rep.composite.empty());
            EXPECT_TRUE(rep.passed()) << p.name << " on " << serialize_compact(*X) << "\n" << failures_of(rep);
        }
    }
}

TEST(Compatibility, BackPropagationPair)
{
    auto c = Category::multigraph;
    auto r1 = clone_merge(c);
    auto r2 = two_loops_identity();
    for (const auto& X : all_graphs(c, 2, 2))
    {
        auto rep = compatibility_check(r2, r1, X, Semantics::sqpo, 2);
        EXPECT_TRUE(rep.passed()) << serialize_compact(*X) << "\n" << failures_of(rep);
    }
}

TEST(Compatibility, ReportPairsEveryDerivation)
{
    auto c = Category::multigraph;
    auto r = clone(c);
    auto X = GraphBuilder(c).vertices({"a", "b"}).edge("x", "a", "b").build();
    auto rep = compatibility_check(r, r, X, Semantics::sqpo);
    ASSERT_TRUE(rep.passed());
    EXPECT_EQ(rep.two_step.size(), rep.composite.size());
    EXPECT_EQ(rep.pairing.size(), rep.two_step.size());
    EXPECT_FALSE(rep.two_step.empty());
}

TEST(LinearConservativity, AgreesWithReferenceComposition)
{
    std::mt19937 rng(5);
    for (auto c : kBoth)
    {
        std::vector<std::pair<Rule, Rule>> corpus;
        for (const auto& p : concurrency_pairs(c))
        {
            if (p.linear) corpus.emplace_back(p.r2, p.r1);
        }
        for (int i = 0; i < 20; ++i) corpus.emplace_back(random_linear_rule(rng, c), random_linear_rule(rng, c));
        int compared = 0;
        int nontrivial = 0;
        for (const auto& [r2, r1] : corpus)
        {
            for (auto s : {Semantics::sqpo, Semantics::dpo})
            {
                if (s == Semantics::dpo && c == Category::simplegraph) continue;
                auto cmp = linear_reference::compare(r2, r1, s);
                compared += cmp.compared;
                nontrivial += cmp.nontrivial_fpa;
                for (const auto& m : cmp.mismatches) ADD_FAILURE() << to_string(c) << " " << to_string(s) << ": " << m;
            }
        }
        EXPECT_GT(compared, 50);
        // adhesive case: the FPA of a linear composition is always trivial
        if (c == Category::multigraph) { EXPECT_EQ(nontrivial, 0); }
    }
}

TEST(LinearConservativity, SimpleGraphsNeedEdgeAugmentations)
{
    // r1 deletes a looped vertex and a bare one, r2 acts on a vertex: the
    // FPA may add any of the 4 edges between the two sites
    auto c = Category::simplegraph;
    auto I1 = GraphBuilder(c).vertices({"a", "b"}).edge("l", "b", "b").build();
    auto O1 = looped_point(c);
    auto r1 = make_rule("r1", initial_morphism(O1), initial_morphism(I1));
    auto r2 = make_rule("r2", initial_morphism(looped_point(c)), initial_morphism(point(c)));
    auto mus = rule_matches_sqpo(r2, r1);
    EXPECT_EQ(mus.size(), 16u);
    auto cmp = linear_reference::compare(r2, r1, Semantics::sqpo);
    EXPECT_EQ(cmp.nontrivial_fpa, 15);
    EXPECT_TRUE(cmp.mismatches.empty());
    auto cat = make_catalog(r2, r1, Semantics::sqpo);
    for (const auto& X : all_graphs(c, 3, 3)) EXPECT_TRUE(compatibility_check(cat, X).passed()) << serialize_compact(*X);
}
