#ifndef NLRW_CLASSIFIER_HPP
#define NLRW_CLASSIFIER_HPP

// Regular-mono partial-map classifiers and final pullback complements.
//
// T(X) adds one vertex * to X plus classifier edges:
//   multigraph:  one fresh edge e(u,v) for every ordered pair over V + {*}
//   simplegraph: edges (v,*), (*,v) for every v, and (*,*)
// eta_X: X -> T(X) is the inclusion.

#include "graph.hpp"
#include "limits.hpp"
#include "oracles.hpp"

namespace nlrw
{

    struct ClassifierData
    {
        GraphRef source;
        GraphRef T_object;
        Morphism eta;

        int star() const { return source->num_vertices(); }

        /// Classifier edge of T(X) from u to w (vertex indices of T(X)). In a
        /// simple graph at least one of u, w must be the star.
        int classifier_edge(int u, int w) const
        {
            int n = source->num_vertices();
            int m = source->num_edges();
            if (!source->is_simple()) return m + u * (n + 1) + w;
            if (u != n && w != n) throw invalid_morphism("no classifier edge between two ordinary vertices");
            if (u != n) return m + u;
            if (w != n) return m + n + w;
            return m + 2 * n;
        }
    };

    inline ClassifierData classify_object(const GraphRef& X)
    {
        Graph T = *X;
        std::set<std::string> used(X->vertex_ids().begin(), X->vertex_ids().end());
        int n = X->num_vertices();
        int star = T.add_vertex(fresh_id("*", used));
        used.insert(X->edge_ids().begin(), X->edge_ids().end());
        auto name = [&](int u, int w) { return fresh_id("e(" + T.vertex_id(u) + "," + T.vertex_id(w) + ")", used); };
        if (!X->is_simple())
        {
            for (int u = 0; u <= n; ++u)
            {
                for (int w = 0; w <= n; ++w) T.add_edge(name(u, w), u, w);
            }
        }
        else
        {
            for (int v = 0; v < n; ++v) T.add_edge(name(v, star), v, star);
            for (int v = 0; v < n; ++v) T.add_edge(name(star, v), star, v);
            T.add_edge(name(star, star), star, star);
        }
        auto Tref = make_graph(std::move(T));
        auto eta = identity(X);
        eta.cod = Tref;
        return ClassifierData{X, Tref, std::move(eta)};
    }

    /// T(f): T(X) -> T(Y).
    inline Morphism T_on_morphism(const Morphism& f, const ClassifierData& TX, const ClassifierData& TY)
    {
        Morphism t{TX.T_object, TY.T_object, f.v, f.e};
        t.v.push_back(TY.star());
        int n = TX.star();
        auto img = [&](int u) { return u == n ? TY.star() : f.vertex(u); };
        const Graph& T = *TX.T_object;
        for (int e = f.dom->num_edges(); e < T.num_edges(); ++e)
        {
            t.e.push_back(TY.classifier_edge(img(T.src(e)), img(T.tgt(e))));
        }
        return t;
    }

    inline Morphism T_on_morphism(const Morphism& f)
    {
        return T_on_morphism(f, classify_object(f.dom), classify_object(f.cod));
    }

    /// phi(m, f): A -> T(B) for A <-m- X -f-> B with m a regular mono; the
    /// unique morphism making (m, f) a pullback of (phi, eta_B).
    inline Morphism classify_partial(const Morphism& m, const Morphism& f, const ClassifierData& TB)
    {
        if (!same_object(m.dom, f.dom)) throw not_composable("classify_partial: m and f do not share their domain");
        if (!is_regular_mono(m)) throw not_regular_mono("classify_partial: m is not a regular mono");
        const Graph& A = *m.cod;
        Morphism phi{m.cod, TB.T_object, std::vector<int>(static_cast<std::size_t>(A.num_vertices()), TB.star()), {}};
        for (std::size_t x = 0; x < m.v.size(); ++x) phi.v[static_cast<std::size_t>(m.v[x])] = f.v[x];
        std::vector<int> pre(static_cast<std::size_t>(A.num_edges()), -1);
        for (std::size_t x = 0; x < m.e.size(); ++x) pre[static_cast<std::size_t>(m.e[x])] = static_cast<int>(x);
        for (int e = 0; e < A.num_edges(); ++e)
        {
            int x = pre[static_cast<std::size_t>(e)];
            phi.e.push_back(x >= 0 ? f.edge(x) : TB.classifier_edge(phi.vertex(A.src(e)), phi.vertex(A.tgt(e))));
        }
#ifdef NLRW_SELF_CHECK
        if (!verify_pullback(Cospan{phi, TB.eta}, Span{m, f}, OracleOptions{}))
        {
            throw error("classifying morphism failed its pullback check");
        }
#endif
        return phi;
    }

    inline Morphism classify_partial(const Morphism& m, const Morphism& f)
    {
        return classify_partial(m, f, classify_object(f.cod));
    }

    /// Final pullback complement (n, g) of A -f-> B -m-> C:
    ///
    ///     A --f--> B
    ///     |n       |m
    ///     v        v
    ///     F --g--> C
    struct FPCResult
    {
        GraphRef object;
        Morphism n;  // A -> F
        Morphism g;  // F -> C
    };

    inline FPCResult fpc(const Morphism& f, const Morphism& m)
    {
        if (!same_object(f.cod, m.dom)) throw not_composable("fpc: f and m are not composable");
        if (!is_regular_mono(m)) throw not_regular_mono("fpc: m is not a regular mono");
        auto TA = classify_object(f.dom);
        auto TB = classify_object(f.cod);
        auto mbar = classify_partial(m, identity(f.cod), TB);
        auto pb = pullback(T_on_morphism(f, TA, TB), mbar);

        // F consists of A (pairs over a non-star vertex) plus the part of C
        // outside m; name its elements after those.
        const Graph& P = *pb.object;
        const Graph& A = *f.dom;
        const Graph& C = *m.cod;
        std::set<std::string> used;
        std::vector<std::string> vids, eids;
        for (int x = 0; x < P.num_vertices(); ++x)
        {
            int t = pb.to_left.vertex(x);
            vids.push_back(fresh_id(t < A.num_vertices() ? A.vertex_id(t) : C.vertex_id(pb.to_right.vertex(x)), used));
        }
        used.clear();
        for (int x = 0; x < P.num_edges(); ++x)
        {
            int t = pb.to_left.edge(x);
            eids.push_back(fresh_id(t < A.num_edges() ? A.edge_id(t) : C.edge_id(pb.to_right.edge(x)), used));
        }
        auto F = make_graph(P.relabeled(std::move(vids), std::move(eids)));
        auto g = retarget(pb.to_right, F, m.cod);
        auto to_TA = retarget(pb.to_left, F, TA.T_object);
        PullbackResult named{F, to_TA, g};
        auto n = named.mediate(Span{TA.eta, compose(m, f)});
        if (!n) throw error("fpc: induced morphism does not exist");
#ifdef NLRW_SELF_CHECK
        if (!verify_fpc(f, m, *n, g)) throw error("fpc construction failed its universal-property check");
#endif
        return FPCResult{F, std::move(*n), std::move(g)};
    }

}

#endif
