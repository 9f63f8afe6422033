#include <gtest/gtest.h>

#include <random>

#include "nlrw/corpus.hpp"
#include "nlrw/graph.hpp"
#include "nlrw/homs.hpp"
#include "nlrw/iso.hpp"

using namespace nlrw;

namespace
{
    GraphRef point(Category c)
    {
        return GraphBuilder(c).vertex("v").build();
    }

    GraphRef looped_point(Category c)
    {
        return GraphBuilder(c).vertex("v").edge("l", "v", "v").build();
    }
}

TEST(Graph, RejectsDuplicateIdsAndBadEndpoints)
{
    EXPECT_THROW(GraphBuilder(Category::multigraph).vertex("a").vertex("a").build(), invalid_graph);
    EXPECT_THROW(GraphBuilder(Category::multigraph).vertex("a").edge("e", "a", "b").build(), invalid_graph);
    EXPECT_THROW(Graph(Category::multigraph, {"a"}, {"e"}, {{0, 1}}), invalid_graph);
}

TEST(Graph, SimpleGraphRejectsParallelEdges)
{
    EXPECT_THROW(
        GraphBuilder(Category::simplegraph).vertices({"a", "b"}).edge("x", "a", "b").edge("y", "a", "b").build(),
        invalid_graph
    );
    EXPECT_NO_THROW(
        GraphBuilder(Category::multigraph).vertices({"a", "b"}).edge("x", "a", "b").edge("y", "a", "b").build()
    );
}

TEST(Morphism, ValidationAndCategoryMismatch)
{
    auto A = GraphBuilder(Category::multigraph).vertices({"a", "b"}).edge("x", "a", "b").build();
    auto B = looped_point(Category::multigraph);
    EXPECT_NO_THROW(make_morphism(A, B, {0, 0}, {0}));
    auto C = GraphBuilder(Category::multigraph).vertices({"a", "b"}).build();
    EXPECT_THROW(make_morphism(A, C, {0, 1}, {0}), invalid_morphism);
    EXPECT_THROW(make_morphism(point(Category::multigraph), point(Category::simplegraph), {0}, {}), category_mismatch);
}

TEST(Compose, IdentityLaws)
{
    auto A = GraphBuilder(Category::multigraph).vertices({"a", "b"}).edge("x", "a", "b").build();
    auto B = looped_point(Category::multigraph);
    auto f = make_morphism(A, B, {0, 0}, {0});
    EXPECT_EQ(compose(identity(B), f), f);
    EXPECT_EQ(compose(f, identity(A)), f);
}

TEST(Compose, PointToPointIsUnique)
{
    auto P = point(Category::multigraph);
    auto f = make_morphism(P, P, {0}, {});
    EXPECT_EQ(compose(f, f), identity(P));
    EXPECT_EQ(enumerate_morphisms(P, P).size(), 1u);
}

TEST(Compose, RejectsMismatchedObjects)
{
    auto P = point(Category::multigraph);
    auto Q = GraphBuilder(Category::multigraph).vertex("w").build();
    EXPECT_THROW(compose(identity(P), identity(Q)), not_composable);
    EXPECT_THROW(compose(identity(point(Category::simplegraph)), identity(P)), category_mismatch);
}

TEST(Compose, Associative)
{
    std::mt19937 rng(7);
    for (auto cat : {Category::multigraph, Category::simplegraph})
    {
        for (int round = 0; round < 40; ++round)
        {
            auto A = random_graph(rng, cat, 3, 3);
            auto B = random_graph(rng, cat, 3, 4);
            auto C = random_graph(rng, cat, 3, 4);
            auto D = random_graph(rng, cat, 3, 4);
            auto fs = enumerate_morphisms(A, B);
            auto gs = enumerate_morphisms(B, C);
            auto hs = enumerate_morphisms(C, D);
            if (fs.empty() || gs.empty() || hs.empty()) continue;
            const auto& f = fs[static_cast<std::size_t>(rng() % fs.size())];
            const auto& g = gs[static_cast<std::size_t>(rng() % gs.size())];
            const auto& h = hs[static_cast<std::size_t>(rng() % hs.size())];
            EXPECT_EQ(compose(h, compose(g, f)), compose(compose(h, g), f));
        }
    }
}

TEST(Predicates, SimpleEpiNeedsOnlyVertices)
{
    auto A = GraphBuilder(Category::simplegraph).vertices({"a", "b"}).build();
    auto B = GraphBuilder(Category::simplegraph).vertices({"a", "b"}).edge("x", "a", "b").build();
    auto f = make_morphism(A, B, {0, 1}, {});
    EXPECT_TRUE(is_epi(f));
    EXPECT_TRUE(is_mono(f));
    EXPECT_FALSE(is_iso(f));
    EXPECT_FALSE(is_regular_mono(f));
}

TEST(Predicates, MultigraphFoldIsNotMono)
{
    auto A = GraphBuilder(Category::multigraph).vertices({"a", "b"}).edge("x", "a", "b").edge("y", "a", "b").build();
    auto B = GraphBuilder(Category::multigraph).vertices({"a", "b"}).edge("x", "a", "b").build();
    auto f = make_morphism(A, B, {0, 1}, {0, 0});
    EXPECT_FALSE(is_mono(f));
    EXPECT_TRUE(is_epi(f));
}

TEST(Predicates, IdentityIsIso)
{
    for (auto cat : {Category::multigraph, Category::simplegraph})
    {
        auto X = looped_point(cat);
        EXPECT_TRUE(is_iso(identity(X)));
        EXPECT_TRUE(is_regular_mono(identity(X)));
    }
}

TEST(Predicates, RegularMonoIsEdgeReflectingInSimpleGraphs)
{
    auto f = make_morphism(point(Category::simplegraph), looped_point(Category::simplegraph), {0}, {});
    EXPECT_TRUE(is_mono(f));
    EXPECT_FALSE(is_regular_mono(f));
    auto g = make_morphism(point(Category::multigraph), looped_point(Category::multigraph), {0}, {});
    EXPECT_TRUE(is_regular_mono(g));
}

TEST(Predicates, IsoImpliesEverythingAndMonoEpiSplitsByCategory)
{
    for (auto cat : {Category::multigraph, Category::simplegraph})
    {
        bool found_bimorphic_non_iso = false;
        for (const auto& A : all_graphs(cat, 3, 3))
        {
            for (const auto& B : all_graphs(cat, 3, 3))
            {
                for (const auto& f : enumerate_morphisms(A, B))
                {
                    if (is_iso(f))
                    {
                        EXPECT_TRUE(is_mono(f) && is_epi(f) && is_regular_mono(f));
                    }
                    if (is_mono(f) && is_epi(f) && !is_iso(f)) found_bimorphic_non_iso = true;
                }
            }
        }
        EXPECT_EQ(found_bimorphic_non_iso, cat == Category::simplegraph);
    }
}

TEST(Predicates, RegularMonosCloseUnderCompositionAndDecompose)
{
    for (auto cat : {Category::multigraph, Category::simplegraph})
    {
        auto graphs = all_graphs(cat, 3, 2);
        for (const auto& A : graphs)
        {
            for (const auto& B : graphs)
            {
                for (const auto& f : enumerate_morphisms(A, B))
                {
                    for (const auto& C : graphs)
                    {
                        for (const auto& g : enumerate_morphisms(B, C, HomFilter::regular_mono))
                        {
                            auto gf = compose(g, f);
                            EXPECT_TRUE(!is_regular_mono(f) || is_regular_mono(gf));
                            EXPECT_TRUE(!is_regular_mono(gf) || is_regular_mono(f));
                        }
                    }
                }
            }
        }
    }
}

TEST(Enumerate, KnownCounts)
{
    auto P = point(Category::multigraph);
    auto two = GraphBuilder(Category::multigraph).vertices({"a", "b"}).build();
    auto arrow = GraphBuilder(Category::multigraph).vertices({"u", "v"}).edge("x", "u", "v").build();
    EXPECT_EQ(enumerate_morphisms(P, P).size(), 1u);
    EXPECT_EQ(enumerate_morphisms(P, two).size(), 2u);
    EXPECT_EQ(enumerate_morphisms(arrow, looped_point(Category::multigraph)).size(), 1u);
}

TEST(Enumerate, CompleteAndDuplicateFree)
{
    // Compare against a naive product enumeration on small pairs.
    for (auto cat : {Category::multigraph, Category::simplegraph})
    {
        auto graphs = all_graphs(cat, 2, 2);
        for (const auto& A : graphs)
        {
            for (const auto& B : graphs)
            {
                std::size_t naive = 0;
                int nv = A->num_vertices(), ne = A->num_edges();
                int bv = B->num_vertices(), be = B->num_edges();
                std::vector<int> v(static_cast<std::size_t>(nv)), e(static_cast<std::size_t>(ne));
                std::function<void(int)> rec = [&](int i)
                {
                    if (i == nv + ne)
                    {
                        if (is_valid(Morphism{A, B, v, e})) ++naive;
                        return;
                    }
                    int range = i < nv ? bv : be;
                    for (int y = 0; y < range; ++y)
                    {
                        if (i < nv)
                            v[static_cast<std::size_t>(i)] = y;
                        else
                            e[static_cast<std::size_t>(i - nv)] = y;
                        rec(i + 1);
                    }
                };
                rec(0);
                auto all = enumerate_morphisms(A, B);
                EXPECT_EQ(all.size(), naive);
                std::set<std::pair<std::vector<int>, std::vector<int>>> distinct;
                for (const auto& f : all) distinct.emplace(f.v, f.e);
                EXPECT_EQ(distinct.size(), all.size());
                for (auto filter : {HomFilter::mono, HomFilter::regular_mono, HomFilter::epi, HomFilter::iso})
                {
                    std::size_t expected = 0;
                    for (const auto& f : all)
                    {
                        bool keep = filter == HomFilter::mono           ? is_mono(f)
                                    : filter == HomFilter::regular_mono ? is_regular_mono(f)
                                    : filter == HomFilter::epi          ? is_epi(f)
                                                                        : is_iso(f);
                        expected += keep ? 1 : 0;
                    }
                    EXPECT_EQ(enumerate_morphisms(A, B, filter).size(), expected);
                }
            }
        }
    }
}

TEST(Iso, SelfGivesIdentity)
{
    auto A = GraphBuilder(Category::multigraph).vertices({"a", "b", "c"}).edge("x", "a", "b").edge("y", "b", "c").build();
    auto w = are_isomorphic(A, A);
    ASSERT_TRUE(w);
    EXPECT_TRUE(is_iso(*w));
}

TEST(Iso, CycleVersusParallelPair)
{
    auto cycle = GraphBuilder(Category::multigraph).vertices({"a", "b"}).edge("x", "a", "b").edge("y", "b", "a").build();
    auto par = GraphBuilder(Category::multigraph).vertices({"a", "b"}).edge("x", "a", "b").edge("y", "a", "b").build();
    EXPECT_FALSE(are_isomorphic(cycle, par));
}

TEST(Iso, RelabeledCopies)
{
    std::mt19937 rng(11);
    for (int round = 0; round < 100; ++round)
    {
        auto cat = round % 2 ? Category::simplegraph : Category::multigraph;
        auto A = random_graph(rng, cat, 5, 7);
        std::vector<int> perm(static_cast<std::size_t>(A->num_vertices()));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        Graph B(cat);
        for (int i = 0; i < A->num_vertices(); ++i) B.add_vertex("n" + std::to_string(i));
        std::vector<int> eorder(static_cast<std::size_t>(A->num_edges()));
        std::iota(eorder.begin(), eorder.end(), 0);
        std::shuffle(eorder.begin(), eorder.end(), rng);
        for (int e : eorder)
        {
            B.add_edge("f" + std::to_string(e), perm[static_cast<std::size_t>(A->src(e))], perm[static_cast<std::size_t>(A->tgt(e))]);
        }
        auto Bref = make_graph(std::move(B));
        auto w = are_isomorphic(A, Bref);
        ASSERT_TRUE(w);
        EXPECT_TRUE(is_valid(*w));
        EXPECT_TRUE(is_iso(*w));
        EXPECT_EQ(serialize_compact(*canonical_form(A)), serialize_compact(*canonical_form(Bref)));
    }
}

TEST(Iso, CanonicalFormIdempotentAndSeparating)
{
    for (auto cat : {Category::multigraph, Category::simplegraph})
    {
        auto graphs = all_graphs(cat, 3, 3);
        std::set<std::string> forms;
        for (const auto& g : graphs)
        {
            auto c = canonical_form(g);
            EXPECT_EQ(*canonical_form(c), *c);
            forms.insert(serialize_compact(*c));
        }
        EXPECT_EQ(forms.size(), graphs.size());
        // Brute-force cross-check: distinct corpus members are not isomorphic.
        for (std::size_t i = 0; i < graphs.size(); ++i)
        {
            for (std::size_t j = i + 1; j < graphs.size(); ++j)
            {
                EXPECT_FALSE(find_morphism(graphs[i], graphs[j], HomFilter::iso).has_value());
            }
        }
    }
}

TEST(Corpus, KnownSizes)
{
    // Simple digraphs with loops on 2 vertices: 10 up to iso.
    EXPECT_EQ(graphs_with_vertices(Category::simplegraph, 2, 6).size(), 10u);
    // Directed multigraphs on one vertex with at most 3 loops.
    EXPECT_EQ(graphs_with_vertices(Category::multigraph, 1, 3).size(), 4u);
}
