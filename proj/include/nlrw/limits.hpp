#ifndef NLRW_LIMITS_HPP
#define NLRW_LIMITS_HPP

#include <map>
#include <optional>
#include <set>

#include "graph.hpp"
#include "homs.hpp"

namespace nlrw
{

    /// Pushout of a span B <-f- A -g-> C: the object D and the injections
    /// B -> D, C -> D.
    struct PushoutResult
    {
        GraphRef object;
        Morphism from_left;   // B -> D
        Morphism from_right;  // C -> D

        /// Unique u: D -> Z with u o from_left = left and u o from_right = right,
        /// absent when the competitor does not commute over the span.
        std::optional<Morphism> mediate(const Cospan& competitor) const
        {
            const Graph& D = *object;
            std::vector<int> v(static_cast<std::size_t>(D.num_vertices()), -1);
            std::vector<int> e(static_cast<std::size_t>(D.num_edges()), -1);
            auto merge = [](std::vector<int>& slot_map, const Morphism& inj, const std::vector<int>& val_v, bool vertices)
            {
                const auto& m = vertices ? inj.v : inj.e;
                for (std::size_t i = 0; i < m.size(); ++i)
                {
                    int& slot = slot_map[static_cast<std::size_t>(m[i])];
                    if (slot == -1)
                    {
                        slot = val_v[i];
                    }
                    else if (slot != val_v[i])
                    {
                        return false;
                    }
                }
                return true;
            };
            if (!merge(v, from_left, competitor.left.v, true) || !merge(v, from_right, competitor.right.v, true))
            {
                return std::nullopt;
            }
            // In SGraph, edges of D are determined by their endpoints.
            if (D.is_simple())
            {
                for (int x : v)
                {
                    if (x < 0) return std::nullopt;
                }
                try
                {
                    return make_morphism_from_vertices(object, competitor.target(), std::move(v));
                }
                catch (const invalid_morphism&)
                {
                    return std::nullopt;
                }
            }
            if (!merge(e, from_left, competitor.left.e, false) || !merge(e, from_right, competitor.right.e, false))
            {
                return std::nullopt;
            }
            Morphism u{object, competitor.target(), std::move(v), std::move(e)};
            for (int x : u.v)
            {
                if (x < 0) return std::nullopt;
            }
            for (int x : u.e)
            {
                if (x < 0) return std::nullopt;
            }
            if (!is_valid(u)) return std::nullopt;
            return u;
        }
    };

    /// Pullback of a cospan B -f-> D <-g- C: the apex P and projections.
    struct PullbackResult
    {
        GraphRef object;
        Morphism to_left;   // P -> B
        Morphism to_right;  // P -> C

        /// Unique u: Z -> P with to_left o u = left and to_right o u = right.
        std::optional<Morphism> mediate(const Span& competitor) const
        {
            const Graph& P = *object;
            std::map<std::pair<int, int>, int> vindex;
            std::map<std::pair<int, int>, int> eindex;
            for (int x = 0; x < P.num_vertices(); ++x) vindex[{to_left.vertex(x), to_right.vertex(x)}] = x;
            for (int x = 0; x < P.num_edges(); ++x) eindex[{to_left.edge(x), to_right.edge(x)}] = x;
            Morphism u{competitor.apex(), object, {}, {}};
            const Graph& Z = *competitor.apex();
            for (int z = 0; z < Z.num_vertices(); ++z)
            {
                auto it = vindex.find({competitor.left.vertex(z), competitor.right.vertex(z)});
                if (it == vindex.end()) return std::nullopt;
                u.v.push_back(it->second);
            }
            for (int z = 0; z < Z.num_edges(); ++z)
            {
                auto it = eindex.find({competitor.left.edge(z), competitor.right.edge(z)});
                if (it == eindex.end()) return std::nullopt;
                u.e.push_back(it->second);
            }
            if (!is_valid(u)) return std::nullopt;
            return u;
        }
    };

    /// Factorization f = rm o epi through the image.
    struct Factorization
    {
        Morphism epi;
        Morphism rm;

        const GraphRef& midpoint() const { return epi.cod; }
    };

    /// Enlarges the competitor family of the universal-property oracles.
    struct OracleOptions
    {
        /// Additionally test against every graph with at most this many
        /// vertices and edges (0 = probes only).
        int exhaustive_vertices = 0;
        int exhaustive_edges = 0;
    };

    // Defined in oracles.hpp.
    inline bool verify_pushout(const Span& span, const Cospan& candidate, const OracleOptions& opt);

    inline GraphRef initial_object(Category c)
    {
        return make_graph(Graph(c));
    }

    inline Morphism initial_morphism(const GraphRef& X)
    {
        return Morphism{initial_object(X->category()), X, {}, {}};
    }

    namespace detail
    {
        struct UnionFind
        {
            std::vector<int> parent;

            explicit UnionFind(int n)
                : parent(static_cast<std::size_t>(n))
            {
                std::iota(parent.begin(), parent.end(), 0);
            }

            int find(int x)
            {
                while (parent[static_cast<std::size_t>(x)] != x)
                {
                    parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
                    x = parent[static_cast<std::size_t>(x)];
                }
                return x;
            }

            // The smaller index becomes the representative.
            void unite(int a, int b)
            {
                a = find(a);
                b = find(b);
                if (a == b) return;
                if (b < a) std::swap(a, b);
                parent[static_cast<std::size_t>(b)] = a;
            }
        };

        /// Set-level pushout on vertices and edges, with the simple-graph
        /// collapse of parallel edge classes.
        inline PushoutResult pushout_unchecked(const Morphism& f, const Morphism& g)
        {
            const Graph& B = *f.cod;
            const Graph& C = *g.cod;
            const Graph& A = *f.dom;
            int nb = B.num_vertices();
            int nc = C.num_vertices();
            UnionFind vuf(nb + nc);
            for (int a = 0; a < A.num_vertices(); ++a) vuf.unite(f.vertex(a), nb + g.vertex(a));
            int mb = B.num_edges();
            int mc = C.num_edges();
            UnionFind euf(mb + mc);
            for (int a = 0; a < A.num_edges(); ++a) euf.unite(f.edge(a), mb + g.edge(a));

            Graph D(B.category());
            std::set<std::string> used;
            std::vector<int> vclass(static_cast<std::size_t>(nb + nc), -1);
            for (int x = 0; x < nb + nc; ++x)
            {
                int r = vuf.find(x);
                if (vclass[static_cast<std::size_t>(r)] < 0)
                {
                    const std::string& name = r < nb ? B.vertex_id(r) : C.vertex_id(r - nb);
                    vclass[static_cast<std::size_t>(r)] = D.add_vertex(fresh_id(name, used));
                }
                vclass[static_cast<std::size_t>(x)] = vclass[static_cast<std::size_t>(r)];
            }
            auto endpoints = [&](int x)
            {
                const Edge& ed = x < mb ? B.edge(x) : C.edge(x - mb);
                int off = x < mb ? 0 : nb;
                return Edge{vclass[static_cast<std::size_t>(ed.src + off)], vclass[static_cast<std::size_t>(ed.tgt + off)]};
            };
            used.clear();
            std::vector<int> eclass(static_cast<std::size_t>(mb + mc), -1);
            std::map<Edge, int> by_endpoints;
            for (int x = 0; x < mb + mc; ++x)
            {
                int r = euf.find(x);
                if (eclass[static_cast<std::size_t>(r)] < 0)
                {
                    Edge ends = endpoints(r);
                    auto it = D.is_simple() ? by_endpoints.find(ends) : by_endpoints.end();
                    if (it != by_endpoints.end())
                    {
                        eclass[static_cast<std::size_t>(r)] = it->second;
                    }
                    else
                    {
                        const std::string& name = r < mb ? B.edge_id(r) : C.edge_id(r - mb);
                        int id = D.add_edge(fresh_id(name, used), ends.src, ends.tgt);
                        eclass[static_cast<std::size_t>(r)] = id;
                        if (D.is_simple()) by_endpoints[ends] = id;
                    }
                }
                eclass[static_cast<std::size_t>(x)] = eclass[static_cast<std::size_t>(r)];
            }
            auto Dref = make_graph(std::move(D));
            Morphism p{f.cod, Dref, {}, {}};
            Morphism q{g.cod, Dref, {}, {}};
            for (int x = 0; x < nb; ++x) p.v.push_back(vclass[static_cast<std::size_t>(x)]);
            for (int x = 0; x < nc; ++x) q.v.push_back(vclass[static_cast<std::size_t>(nb + x)]);
            for (int x = 0; x < mb; ++x) p.e.push_back(eclass[static_cast<std::size_t>(x)]);
            for (int x = 0; x < mc; ++x) q.e.push_back(eclass[static_cast<std::size_t>(mb + x)]);
            return PushoutResult{Dref, std::move(p), std::move(q)};
        }

        inline std::string pair_id(const std::string& a, const std::string& b)
        {
            return a == b ? a : a + "*" + b;
        }
    }

    inline PushoutResult coproduct(const GraphRef& A, const GraphRef& B)
    {
        require_same_category(*A, *B);
        return detail::pushout_unchecked(initial_morphism(A), initial_morphism(B));
    }

    /// Pushout of a span with at least one regular-mono leg.
    inline PushoutResult pushout_rm(const Span& s)
    {
        require_same_category(*s.left.cod, *s.right.cod);
        if (!same_object(s.left.dom, s.right.dom)) throw not_composable("span legs do not share their domain");
        if (!is_regular_mono(s.left) && !is_regular_mono(s.right))
        {
            throw not_regular_mono("pushout requested along a span without a regular-mono leg");
        }
        auto po = detail::pushout_unchecked(s.left, s.right);
#ifdef NLRW_SELF_CHECK
        if (!verify_pushout(s, Cospan{po.from_left, po.from_right}, OracleOptions{}))
        {
            throw error("pushout construction failed its universal-property check");
        }
#endif
        return po;
    }

    inline PushoutResult pushout_rm(const Morphism& left, const Morphism& right)
    {
        return pushout_rm(Span{left, right});
    }

    inline PullbackResult pullback(const Cospan& c)
    {
        const Morphism& f = c.left;
        const Morphism& g = c.right;
        require_same_category(*f.dom, *g.dom);
        if (!same_object(f.cod, g.cod)) throw not_composable("cospan legs do not share their codomain");
        const Graph& B = *f.dom;
        const Graph& C = *g.dom;
        Graph P(B.category());
        std::set<std::string> used;
        Morphism pl{nullptr, f.dom, {}, {}};
        Morphism pr{nullptr, g.dom, {}, {}};
        std::map<std::pair<int, int>, int> vindex;
        for (int b = 0; b < B.num_vertices(); ++b)
        {
            for (int x = 0; x < C.num_vertices(); ++x)
            {
                if (f.vertex(b) != g.vertex(x)) continue;
                vindex[{b, x}] = P.add_vertex(fresh_id(detail::pair_id(B.vertex_id(b), C.vertex_id(x)), used));
                pl.v.push_back(b);
                pr.v.push_back(x);
            }
        }
        used.clear();
        for (int b = 0; b < B.num_edges(); ++b)
        {
            for (int x = 0; x < C.num_edges(); ++x)
            {
                if (f.edge(b) != g.edge(x)) continue;
                int s = vindex.at({B.src(b), C.src(x)});
                int t = vindex.at({B.tgt(b), C.tgt(x)});
                P.add_edge(fresh_id(detail::pair_id(B.edge_id(b), C.edge_id(x)), used), s, t);
                pl.e.push_back(b);
                pr.e.push_back(x);
            }
        }
        auto Pref = make_graph(std::move(P));
        pl.dom = Pref;
        pr.dom = Pref;
        return PullbackResult{Pref, std::move(pl), std::move(pr)};
    }

    inline PullbackResult pullback(const Morphism& left, const Morphism& right)
    {
        return pullback(Cospan{left, right});
    }

    /// Image factorization. In SGraph the midpoint is the subgraph induced on
    /// the vertex image, so the second factor reflects edges.
    inline Factorization epi_rm_factorize(const Morphism& f)
    {
        const Graph& B = *f.cod;
        std::vector<int> vsel;
        std::vector<char> vhit(static_cast<std::size_t>(B.num_vertices()), 0);
        for (int x : f.v) vhit[static_cast<std::size_t>(x)] = 1;
        std::vector<int> vpos(static_cast<std::size_t>(B.num_vertices()), -1);
        Graph M(B.category());
        for (int y = 0; y < B.num_vertices(); ++y)
        {
            if (!vhit[static_cast<std::size_t>(y)]) continue;
            vpos[static_cast<std::size_t>(y)] = M.add_vertex(B.vertex_id(y));
            vsel.push_back(y);
        }
        std::vector<char> ehit(static_cast<std::size_t>(B.num_edges()), 0);
        if (B.is_simple())
        {
            for (int y = 0; y < B.num_edges(); ++y)
            {
                if (vhit[static_cast<std::size_t>(B.src(y))] && vhit[static_cast<std::size_t>(B.tgt(y))]) ehit[static_cast<std::size_t>(y)] = 1;
            }
        }
        else
        {
            for (int x : f.e) ehit[static_cast<std::size_t>(x)] = 1;
        }
        std::vector<int> epos(static_cast<std::size_t>(B.num_edges()), -1);
        std::vector<int> esel;
        for (int y = 0; y < B.num_edges(); ++y)
        {
            if (!ehit[static_cast<std::size_t>(y)]) continue;
            epos[static_cast<std::size_t>(y)] = M.add_edge(B.edge_id(y), vpos[static_cast<std::size_t>(B.src(y))], vpos[static_cast<std::size_t>(B.tgt(y))]);
            esel.push_back(y);
        }
        auto Mref = make_graph(std::move(M));
        Morphism epi{f.dom, Mref, {}, {}};
        for (int x : f.v) epi.v.push_back(vpos[static_cast<std::size_t>(x)]);
        for (int x : f.e) epi.e.push_back(epos[static_cast<std::size_t>(x)]);
        Morphism rm{Mref, f.cod, std::move(vsel), std::move(esel)};
        return Factorization{std::move(epi), std::move(rm)};
    }

}

#include "oracles.hpp"

#endif
