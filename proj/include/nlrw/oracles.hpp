#ifndef NLRW_ORACLES_HPP
#define NLRW_ORACLES_HPP

// Brute-force universal-property checks. A candidate (co)limit is tested
// against competitor objects by comparing hom-sets: every competitor cone
// must factor through the candidate exactly once.
//
// Competitor family:
//  - probe objects that detect the (co)limit componentwise: for pullbacks
//    the vertex and the single edge (they represent the vertex and edge
//    functors); for pushouts the two-vertex complete graph (maps into it are
//    vertex subsets) and, in Graph, the one-vertex two-loop graph (maps
//    into it are edge subsets);
//  - for pushouts, each candidate object with one edge removed, which
//    exposes edges not covered by the two injections;
//  - optionally, every graph up to a size bound (OracleOptions).

#include <map>
#include <set>
#include <tuple>

#include "corpus.hpp"
#include "graph.hpp"
#include "homs.hpp"
#include "limits.hpp"

namespace nlrw
{

    class not_commuting : public error
    {
    public:
        using error::error;
    };

    namespace detail
    {
        inline GraphRef vertex_probe(Category c)
        {
            Graph g(c);
            g.add_vertex("0");
            g.add_vertex("1");
            for (int s = 0; s < 2; ++s)
            {
                for (int t = 0; t < 2; ++t) g.add_edge("e" + std::to_string(s) + std::to_string(t), s, t);
            }
            return make_graph(std::move(g));
        }

        inline GraphRef edge_probe()
        {
            Graph g(Category::multigraph);
            g.add_vertex("0");
            g.add_edge("a", 0, 0);
            g.add_edge("b", 0, 0);
            return make_graph(std::move(g));
        }

        inline std::vector<GraphRef> representables(Category c)
        {
            Graph pt(c);
            pt.add_vertex("x");
            Graph arrow(c);
            arrow.add_vertex("x");
            arrow.add_vertex("y");
            arrow.add_edge("a", 0, 1);
            return {make_graph(std::move(pt)), make_graph(std::move(arrow))};
        }

        inline void append_exhaustive(std::vector<GraphRef>& family, Category c, const OracleOptions& opt)
        {
            if (opt.exhaustive_vertices <= 0) return;
            auto extra = all_graphs(c, opt.exhaustive_vertices, opt.exhaustive_edges);
            family.insert(family.end(), extra.begin(), extra.end());
        }

        inline GraphRef without_edge(const Graph& g, int drop)
        {
            Graph h(g.category());
            for (const auto& v : g.vertex_ids()) h.add_vertex(v);
            for (int e = 0; e < g.num_edges(); ++e)
            {
                if (e != drop) h.add_edge(g.edge_id(e), g.src(e), g.tgt(e));
            }
            return make_graph(std::move(h));
        }

        /// For a pushout candidate: Hom(D,T) -> {(p',q') | p'f = q'g} bijective.
        inline bool pushout_bijective_on(const Span& s, const Cospan& c, const GraphRef& T)
        {
            std::set<std::tuple<std::vector<int>, std::vector<int>, std::vector<int>, std::vector<int>>> images;
            std::size_t mediators = 0;
            for_each_morphism(
                c.target(),
                T,
                HomFilter::all,
                [&](const Morphism& u)
                {
                    auto up = compose(u, c.left);
                    auto uq = compose(u, c.right);
                    images.emplace(up.v, up.e, uq.v, uq.e);
                    ++mediators;
                    return true;
                }
            );
            if (images.size() != mediators) return false;  // two mediators for one competitor
            std::size_t competitors = 0;
            for_each_morphism(
                s.left.cod,
                T,
                HomFilter::all,
                [&](const Morphism& p)
                {
                    auto c2 = HomConstraints::none(*s.right.cod);
                    constrain::after(c2, s.right, compose(p, s.left));
                    competitors += count_morphisms(s.right.cod, T, HomFilter::all, &c2);
                    return true;
                }
            );
            return competitors == mediators;
        }

        /// Each pair (b, c) with f(b) = g(c) has exactly one p with (l(p), r(p)) = (b, c).
        inline bool elementwise_pullback(const std::vector<int>& f, const std::vector<int>& g, const std::vector<int>& l, const std::vector<int>& r)
        {
            std::map<std::pair<int, int>, int> seen;
            for (std::size_t p = 0; p < l.size(); ++p)
            {
                if (++seen[{l[p], r[p]}] > 1) return false;
            }
            std::size_t pairs = 0;
            for (std::size_t b = 0; b < f.size(); ++b)
            {
                for (std::size_t c = 0; c < g.size(); ++c)
                {
                    if (f[b] == g[c]) ++pairs;
                }
            }
            // the square commutes, so every seen pair is compatible
            return pairs == seen.size();
        }

        /// Exists-unique mediator for one specific competitor cospan.
        inline bool unique_mediator(const Cospan& candidate, const Cospan& competitor)
        {
            auto c = HomConstraints::none(*candidate.target());
            constrain::after(c, candidate.left, competitor.left);
            constrain::after(c, candidate.right, competitor.right);
            return count_morphisms(candidate.target(), competitor.target(), HomFilter::all, &c, 2) == 1;
        }

        /// Corestriction of f onto g with one edge removed, if f avoids it.
        inline std::optional<Morphism> corestrict_without(const Morphism& f, const GraphRef& smaller, int dropped)
        {
            Morphism out{f.dom, smaller, f.v, {}};
            for (int x : f.e)
            {
                if (x == dropped) return std::nullopt;
                out.e.push_back(x > dropped ? x - 1 : x);
            }
            return out;
        }
    }

    inline void require_commuting(const Square& s)
    {
        if (!commutes(s)) throw not_commuting("square does not commute");
    }

    /// Square  A -f-> B, A -g-> C, B -p-> D, C -q-> D  is a pushout of (f, g).
    inline bool verify_pushout(const Span& span, const Cospan& candidate, const OracleOptions& opt = {})
    {
        require_commuting(Square{span.left, span.right, candidate.left, candidate.right});
        Category cat = span.apex()->category();
        std::vector<GraphRef> family{detail::vertex_probe(cat)};
        if (cat == Category::multigraph) family.push_back(detail::edge_probe());
        detail::append_exhaustive(family, cat, opt);
        for (const auto& T : family)
        {
            if (!detail::pushout_bijective_on(span, candidate, T)) return false;
        }
        const Graph& D = *candidate.target();
        for (int drop = 0; drop < D.num_edges(); ++drop)
        {
            auto T = detail::without_edge(D, drop);
            auto l = detail::corestrict_without(candidate.left, T, drop);
            auto r = detail::corestrict_without(candidate.right, T, drop);
            if (!l || !r) continue;
            if (!detail::unique_mediator(candidate, Cospan{*l, *r})) return false;
        }
        return true;
    }

    /// Square  P -p-> B, P -q-> C, B -f-> D, C -g-> D  is a pullback of (f, g).
    inline bool verify_pullback(const Cospan& cospan, const Span& candidate, const OracleOptions& opt = {})
    {
        require_commuting(Square{candidate.left, candidate.right, cospan.left, cospan.right});
        // Homs from the point and from the single edge are vertices and
        // edges, so on the representables the mediator count is a count of
        // elements over each compatible pair.
        if (!detail::elementwise_pullback(cospan.left.v, cospan.right.v, candidate.left.v, candidate.right.v)) return false;
        if (!detail::elementwise_pullback(cospan.left.e, cospan.right.e, candidate.left.e, candidate.right.e)) return false;
        Category cat = candidate.apex()->category();
        std::vector<GraphRef> family;
        detail::append_exhaustive(family, cat, opt);
        for (const auto& Z : family)
        {
            bool ok = true;
            for_each_morphism(
                Z,
                cospan.left.dom,
                HomFilter::all,
                [&](const Morphism& z1)
                {
                    auto c2 = HomConstraints::none(*Z);
                    constrain::before(c2, compose(cospan.left, z1), cospan.right);
                    for_each_morphism(
                        Z,
                        cospan.right.dom,
                        HomFilter::all,
                        [&](const Morphism& z2)
                        {
                            auto cu = HomConstraints::none(*Z);
                            constrain::before(cu, z1, candidate.left);
                            constrain::before(cu, z2, candidate.right);
                            if (count_morphisms(Z, candidate.apex(), HomFilter::all, &cu, 2) != 1) ok = false;
                            return ok;
                        },
                        &c2
                    );
                    return ok;
                }
            );
            if (!ok) return false;
        }
        return true;
    }

    /// (n, g) is a final pullback complement of (f, m):
    ///
    ///     A --f--> B
    ///     |n       |m
    ///     v        v
    ///     F --g--> C
    inline bool verify_fpc(const Morphism& f, const Morphism& m, const Morphism& n, const Morphism& g, const OracleOptions& opt = {})
    {
        require_commuting(Square{f, n, m, g});
        if (!verify_pullback(Cospan{m, g}, Span{f, n}, opt)) return false;
        Category cat = f.dom->category();
        auto family = detail::representables(cat);
        detail::append_exhaustive(family, cat, opt);
        for (const auto& Y : family)
        {
            bool ok = true;
            for_each_morphism(
                Y,
                m.cod,
                HomFilter::all,
                [&](const Morphism& gp)
                {
                    auto pb = pullback(m, gp);
                    // every a: A' -> A over B
                    auto ca = HomConstraints::none(*pb.object);
                    constrain::before(ca, pb.to_left, f);
                    for_each_morphism(
                        pb.object,
                        f.dom,
                        HomFilter::all,
                        [&](const Morphism& a)
                        {
                            auto cw = HomConstraints::none(*Y);
                            constrain::before(cw, gp, g);
                            constrain::after(cw, pb.to_right, compose(n, a));
                            if (count_morphisms(Y, g.dom, HomFilter::all, &cw, 2) != 1) ok = false;
                            return ok;
                        },
                        &ca
                    );
                    return ok;
                }
            );
            if (!ok) return false;
        }
        return true;
    }

    enum class SquareKind
    {
        commutes,
        pullback,
        pushout
    };

    /// Which of {commutes, pullback, pushout} hold for the square
    /// (top: A->B, left: A->C, right: B->D, bottom: C->D).
    inline std::set<SquareKind> classify_square(const Square& s, const OracleOptions& opt = {})
    {
        std::set<SquareKind> kinds;
        if (!commutes(s)) return kinds;
        kinds.insert(SquareKind::commutes);
        if (verify_pullback(Cospan{s.right, s.bottom}, Span{s.top, s.left}, opt)) kinds.insert(SquareKind::pullback);
        if (verify_pushout(Span{s.top, s.left}, Cospan{s.right, s.bottom}, opt)) kinds.insert(SquareKind::pushout);
        return kinds;
    }

    inline bool is_pushout_square(const Square& s)
    {
        return commutes(s) && verify_pushout(Span{s.top, s.left}, Cospan{s.right, s.bottom});
    }

    inline bool is_pullback_square(const Square& s)
    {
        return commutes(s) && verify_pullback(Cospan{s.right, s.bottom}, Span{s.top, s.left});
    }

    /// (left, bottom) is the FPC of (top, right).
    inline bool is_fpc_square(const Square& s)
    {
        return commutes(s) && verify_fpc(s.top, s.right, s.left, s.bottom);
    }

}

#endif
