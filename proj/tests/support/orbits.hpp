#ifndef NLRW_TESTS_ORBITS_HPP
#define NLRW_TESTS_ORBITS_HPP

// Diagram instances up to isomorphism. A morphism h: X -> Y is replaced by
// one representative of its orbit {post o h o pre} under automorphism groups;
// two-morphism diagrams fix the first leg and let the second vary under the
// first leg's stabilizer. All oracles are iso-invariant, so checking one
// instance per orbit is enough. The shard arguments split the outermost
// loop for parallel sweeps.

#include <set>
#include <utility>
#include <vector>

#include "nlrw/nlrw.hpp"

namespace orbits
{
    using namespace nlrw;
    using Group = std::vector<Morphism>;

    inline Group automorphisms(const GraphRef& X)
    {
        return enumerate_morphisms(X, X, HomFilter::iso);
    }

    inline std::pair<std::vector<int>, std::vector<int>> key(const Morphism& h)
    {
        return {h.v, h.e};
    }

    /// One representative per orbit of h -> post o h o pre.
    inline std::vector<Morphism> representatives(const std::vector<Morphism>& homs, const Group& pre, const Group& post)
    {
        std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
        std::vector<Morphism> out;
        for (const auto& h : homs)
        {
            if (seen.count(key(h))) continue;
            out.push_back(h);
            for (const auto& a : pre)
            {
                auto ha = compose(h, a);
                for (const auto& b : post) seen.insert(key(compose(b, ha)));
            }
        }
        return out;
    }

    /// Elements of `post` fixing f up to some element of `pre`.
    inline Group stabilizer_post(const Morphism& f, const Group& pre, const Group& post)
    {
        Group out;
        for (const auto& b : post)
        {
            auto bf = compose(b, f);
            for (const auto& a : pre)
            {
                if (compose(bf, a) == f)
                {
                    out.push_back(b);
                    break;
                }
            }
        }
        return out;
    }

    /// Elements of `pre` fixing f up to some element of `post`.
    inline Group stabilizer_pre(const Morphism& f, const Group& pre, const Group& post)
    {
        Group out;
        for (const auto& a : pre)
        {
            auto fa = compose(f, a);
            for (const auto& b : post)
            {
                if (compose(b, fa) == f)
                {
                    out.push_back(a);
                    break;
                }
            }
        }
        return out;
    }

    /// Inverses, so a group acting by precomposition can act after.
    inline Group inverses(const Group& g)
    {
        Group out;
        for (const auto& x : g) out.push_back(inverse(x));
        return out;
    }

    /// Corpus with automorphism groups computed once.
    struct Corpus
    {
        std::vector<GraphRef> graphs;
        std::vector<Group> auts;

        Corpus(Category c, int max_v, int max_e)
            : graphs(all_graphs(c, max_v, max_e))
        {
            for (const auto& g : graphs) auts.push_back(automorphisms(g));
        }

        std::size_t size() const { return graphs.size(); }
    };

    /// Morphisms X -> Y up to iso, for every pair of corpus graphs.
    template <typename Visit>
    void for_each_morphism(const Corpus& c, HomFilter filter, Visit visit, std::size_t shard = 0, std::size_t shards = 1)
    {
        for (std::size_t x = shard; x < c.size(); x += shards)
        {
            for (std::size_t y = 0; y < c.size(); ++y)
            {
                auto hs = enumerate_morphisms(c.graphs[x], c.graphs[y], filter);
                for (const auto& h : representatives(hs, c.auts[x], c.auts[y])) visit(h);
            }
        }
    }

    /// Cospans f: A -> B <- C: g up to iso.
    template <typename Visit>
    void for_each_cospan(const Corpus& c, HomFilter f_filter, HomFilter g_filter, Visit visit, std::size_t shard = 0, std::size_t shards = 1)
    {
        for (std::size_t a = shard; a < c.size(); a += shards)
        {
            for (std::size_t b = 0; b < c.size(); ++b)
            {
                auto fs = representatives(enumerate_morphisms(c.graphs[a], c.graphs[b], f_filter), c.auts[a], c.auts[b]);
                for (const auto& f : fs)
                {
                    auto stab = stabilizer_post(f, c.auts[a], c.auts[b]);
                    for (std::size_t x = 0; x < c.size(); ++x)
                    {
                        auto gs = enumerate_morphisms(c.graphs[x], c.graphs[b], g_filter);
                        for (const auto& g : representatives(gs, c.auts[x], stab)) visit(f, g);
                    }
                }
            }
        }
    }

    /// Spans B <- A -> C: f: A -> B up to iso, g under f's stabilizer.
    template <typename Visit>
    void for_each_span(const Corpus& c, HomFilter f_filter, HomFilter g_filter, Visit visit, std::size_t shard = 0, std::size_t shards = 1)
    {
        for (std::size_t a = shard; a < c.size(); a += shards)
        {
            for (std::size_t b = 0; b < c.size(); ++b)
            {
                auto fs = representatives(enumerate_morphisms(c.graphs[a], c.graphs[b], f_filter), c.auts[a], c.auts[b]);
                for (const auto& f : fs)
                {
                    auto stab = stabilizer_pre(f, c.auts[a], c.auts[b]);
                    for (std::size_t x = 0; x < c.size(); ++x)
                    {
                        auto gs = enumerate_morphisms(c.graphs[a], c.graphs[x], g_filter);
                        for (const auto& g : representatives(gs, stab, c.auts[x])) visit(f, g);
                    }
                }
            }
        }
    }

    /// Composable pairs A -f-> B -m-> D: m up to iso under f's stabilizer.
    template <typename Visit>
    void for_each_composable(const Corpus& c, HomFilter f_filter, HomFilter m_filter, Visit visit, std::size_t shard = 0, std::size_t shards = 1)
    {
        for (std::size_t a = shard; a < c.size(); a += shards)
        {
            for (std::size_t b = 0; b < c.size(); ++b)
            {
                auto fs = representatives(enumerate_morphisms(c.graphs[a], c.graphs[b], f_filter), c.auts[a], c.auts[b]);
                for (const auto& f : fs)
                {
                    // beta in Stab acts on m by m o beta^-1
                    auto stab = inverses(stabilizer_post(f, c.auts[a], c.auts[b]));
                    for (std::size_t d = 0; d < c.size(); ++d)
                    {
                        auto ms = enumerate_morphisms(c.graphs[b], c.graphs[d], m_filter);
                        for (const auto& m : representatives(ms, stab, c.auts[d])) visit(f, m);
                    }
                }
            }
        }
    }
}

#endif
