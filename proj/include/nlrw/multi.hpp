#ifndef NLRW_MULTI_HPP
#define NLRW_MULTI_HPP

// Multi-sums, multi-pushout-complements and FPC-pushout-augmentations.

#include <functional>
#include <map>
#include <set>
#include <optional>
#include <vector>

#include "classifier.hpp"
#include "graph.hpp"
#include "homs.hpp"
#include "limits.hpp"
#include "oracles.hpp"

namespace nlrw
{

    /// A -left-> Y <-right- B, both regular monos, jointly epic.
    struct MultiSumElement
    {
        Cospan cospan;

        const GraphRef& object() const { return cospan.target(); }
        const Morphism& left() const { return cospan.left; }
        const Morphism& right() const { return cospan.right; }
    };

    /// Pushout complement of A -f-> B -b-> D:
    ///
    ///     A --f--> B
    ///     |a       |b
    ///     v        v
    ///     P --d--> D
    struct POCElement
    {
        Morphism a;
        Morphism d;

        const GraphRef& object() const { return a.cod; }
    };

    /// The pushout square an FPA is built on, with alpha a regular mono:
    ///
    ///     A --a------> B
    ///     |alpha       |alpha_bar
    ///     v            v
    ///     C --a_bar--> D
    struct AugmentationSquare
    {
        Morphism alpha;
        Morphism a;
        Morphism alpha_bar;
        Morphism a_bar;
    };

    /// FPC-pushout augmentation of an AugmentationSquare: n: B -> F, f: F -> E
    /// and the epi e: D -> E, such that the square (a, n o alpha, e o alpha_bar, f)
    /// is an FPC and f o n = e o a_bar.
    struct FPAElement
    {
        Morphism n;
        Morphism f;
        Morphism e;

        bool trivial() const { return is_iso(e); }
    };

    namespace detail
    {
        /// Calls visit(block_of) for every set partition of {0..n-1}, blocks
        /// numbered in order of first appearance.
        inline void for_each_partition(int n, const std::function<void(const std::vector<int>&)>& visit)
        {
            std::vector<int> block(static_cast<std::size_t>(n), 0);
            std::function<void(int, int)> rec = [&](int i, int used)
            {
                if (i == n)
                {
                    visit(block);
                    return;
                }
                for (int b = 0; b <= used; ++b)
                {
                    block[static_cast<std::size_t>(i)] = b;
                    rec(i + 1, std::max(used, b + 1));
                }
            };
            if (n == 0)
            {
                visit(block);
                return;
            }
            rec(0, 0);
        }

        /// Every subset of {0..n-1} as a bitmask vector.
        inline void for_each_subset(int n, const std::function<void(const std::vector<char>&)>& visit)
        {
            std::vector<char> in(static_cast<std::size_t>(n), 0);
            std::function<void(int)> rec = [&](int i)
            {
                if (i == n)
                {
                    visit(in);
                    return;
                }
                in[static_cast<std::size_t>(i)] = 0;
                rec(i + 1);
                in[static_cast<std::size_t>(i)] = 1;
                rec(i + 1);
            };
            rec(0);
        }

        template <typename T, typename Same>
        void dedupe(std::vector<T>& items, Same same)
        {
            std::vector<T> out;
            for (auto& it : items)
            {
                bool dup = false;
                for (const auto& kept : out)
                {
                    if (same(kept, it))
                    {
                        dup = true;
                        break;
                    }
                }
                if (!dup) out.push_back(std::move(it));
            }
            items = std::move(out);
        }

        /// Subgraph of X given by vertex and edge selections, with its inclusion.
        inline Morphism subgraph_inclusion(const GraphRef& X, const std::vector<char>& vsel, const std::vector<char>& esel)
        {
            Graph S(X->category());
            std::vector<int> pos(static_cast<std::size_t>(X->num_vertices()), -1);
            Morphism inc{nullptr, X, {}, {}};
            for (int v = 0; v < X->num_vertices(); ++v)
            {
                if (!vsel[static_cast<std::size_t>(v)]) continue;
                pos[static_cast<std::size_t>(v)] = S.add_vertex(X->vertex_id(v));
                inc.v.push_back(v);
            }
            for (int e = 0; e < X->num_edges(); ++e)
            {
                if (!esel[static_cast<std::size_t>(e)]) continue;
                S.add_edge(X->edge_id(e), pos[static_cast<std::size_t>(X->src(e))], pos[static_cast<std::size_t>(X->tgt(e))]);
                inc.e.push_back(e);
            }
            inc.dom = make_graph(std::move(S));
            return inc;
        }

        /// Corestriction of f through a mono `inc` whose image contains f's image.
        inline Morphism corestrict(const Morphism& f, const Morphism& inc)
        {
            std::vector<int> vpre(static_cast<std::size_t>(inc.cod->num_vertices()), -1);
            std::vector<int> epre(static_cast<std::size_t>(inc.cod->num_edges()), -1);
            for (std::size_t i = 0; i < inc.v.size(); ++i) vpre[static_cast<std::size_t>(inc.v[i])] = static_cast<int>(i);
            for (std::size_t i = 0; i < inc.e.size(); ++i) epre[static_cast<std::size_t>(inc.e[i])] = static_cast<int>(i);
            Morphism g{f.dom, inc.dom, {}, {}};
            for (int x : f.v) g.v.push_back(vpre[static_cast<std::size_t>(x)]);
            for (int x : f.e) g.e.push_back(epre[static_cast<std::size_t>(x)]);
            return g;
        }

        inline bool same_cospan(const Cospan& x, const Cospan& y)
        {
            return find_iso_commuting(x.target(), y.target(), {IsoCondition::under(x.left, y.left), IsoCondition::under(x.right, y.right)})
                .has_value();
        }

        inline bool same_poc(const POCElement& x, const POCElement& y)
        {
            return find_iso_commuting(x.object(), y.object(), {IsoCondition::under(x.a, y.a), IsoCondition::over(x.d, y.d)})
                .has_value();
        }

        inline bool same_fpa(const FPAElement& x, const FPAElement& y)
        {
            auto psi = find_iso_commuting(x.e.cod, y.e.cod, {IsoCondition::under(x.e, y.e)});
            if (!psi) return false;
            return find_iso_commuting(
                       x.f.dom, y.f.dom, {IsoCondition::under(x.n, y.n), IsoCondition::over(compose(*psi, x.f), y.f)}
            )
                .has_value();
        }

        /// Quotient of D by a vertex partition and an edge partition (blocks
        /// must respect endpoints), as the epi D -> E.
        inline Morphism quotient(const GraphRef& D, const std::vector<int>& vblock, const std::vector<int>& eblock)
        {
            Graph E(D->category());
            std::vector<int> vnew;
            std::map<int, int> vb;
            for (int v = 0; v < D->num_vertices(); ++v)
            {
                auto it = vb.find(vblock[static_cast<std::size_t>(v)]);
                if (it == vb.end()) it = vb.emplace(vblock[static_cast<std::size_t>(v)], E.add_vertex(D->vertex_id(v))).first;
                vnew.push_back(it->second);
            }
            std::vector<int> enew;
            std::map<int, int> eb;
            for (int e = 0; e < D->num_edges(); ++e)
            {
                auto it = eb.find(eblock[static_cast<std::size_t>(e)]);
                if (it == eb.end())
                {
                    int s = vnew[static_cast<std::size_t>(D->src(e))];
                    int t = vnew[static_cast<std::size_t>(D->tgt(e))];
                    it = eb.emplace(eblock[static_cast<std::size_t>(e)], E.add_edge(D->edge_id(e), s, t)).first;
                }
                enew.push_back(it->second);
            }
            return Morphism{D, make_graph(std::move(E)), std::move(vnew), std::move(enew)};
        }
    }

    // ------------------------------------------------------------------
    // multi-sums

    /// Regular subobjects of A as inclusions S -> A: vertex subsets with any
    /// edge subset among them in Graph, induced subgraphs in SGraph.
    inline std::vector<Morphism> regular_subobjects(const GraphRef& A)
    {
        std::vector<Morphism> out;
        int n = A->num_vertices();
        detail::for_each_subset(
            n,
            [&](const std::vector<char>& vsel)
            {
                std::vector<int> inner;
                for (int e = 0; e < A->num_edges(); ++e)
                {
                    if (vsel[static_cast<std::size_t>(A->src(e))] && vsel[static_cast<std::size_t>(A->tgt(e))]) inner.push_back(e);
                }
                if (A->is_simple())
                {
                    std::vector<char> esel(static_cast<std::size_t>(A->num_edges()), 0);
                    for (int e : inner) esel[static_cast<std::size_t>(e)] = 1;
                    out.push_back(detail::subgraph_inclusion(A, vsel, esel));
                    return;
                }
                detail::for_each_subset(
                    static_cast<int>(inner.size()),
                    [&](const std::vector<char>& pick)
                    {
                        std::vector<char> esel(static_cast<std::size_t>(A->num_edges()), 0);
                        for (std::size_t i = 0; i < inner.size(); ++i) esel[static_cast<std::size_t>(inner[i])] = pick[i];
                        out.push_back(detail::subgraph_inclusion(A, vsel, esel));
                    }
                );
            }
        );
        return out;
    }

    namespace detail
    {
        /// SGraph: all extensions of a jointly epic cospan A -> P <- B by edges
        /// between vertex pairs not both inside A's image nor both inside B's.
        inline std::vector<Cospan> mono_epi_extensions(const Cospan& c)
        {
            const Graph& P = *c.target();
            int n = P.num_vertices();
            std::vector<char> inA(static_cast<std::size_t>(n), 0), inB(static_cast<std::size_t>(n), 0);
            for (int x : c.left.v) inA[static_cast<std::size_t>(x)] = 1;
            for (int x : c.right.v) inB[static_cast<std::size_t>(x)] = 1;
            std::vector<Edge> free;
            for (int u = 0; u < n; ++u)
            {
                for (int w = 0; w < n; ++w)
                {
                    bool bothA = inA[static_cast<std::size_t>(u)] && inA[static_cast<std::size_t>(w)];
                    bool bothB = inB[static_cast<std::size_t>(u)] && inB[static_cast<std::size_t>(w)];
                    if (bothA || bothB || !P.edges_between(u, w).empty()) continue;
                    free.push_back(Edge{u, w});
                }
            }
            std::vector<Cospan> out;
            for_each_subset(
                static_cast<int>(free.size()),
                [&](const std::vector<char>& pick)
                {
                    Graph Q = P;
                    std::set<std::string> used(P.edge_ids().begin(), P.edge_ids().end());
                    for (std::size_t i = 0; i < free.size(); ++i)
                    {
                        if (!pick[i]) continue;
                        Q.add_edge(fresh_id("x(" + P.vertex_id(free[i].src) + "," + P.vertex_id(free[i].tgt) + ")", used), free[i].src, free[i].tgt);
                    }
                    auto Qref = make_graph(std::move(Q));
                    out.push_back(Cospan{retarget(c.left, c.left.dom, Qref), retarget(c.right, c.right.dom, Qref)});
                }
            );
            return out;
        }
    }

    /// All multi-sum elements of (A, B) up to cospan isomorphism: pushouts of
    /// regular-mono spans A <- S -> B, extended in SGraph by mono-epis.
    inline std::vector<MultiSumElement> multisum(const GraphRef& A, const GraphRef& B)
    {
        require_same_category(*A, *B);
        std::vector<MultiSumElement> out;
        for (const auto& s : regular_subobjects(A))
        {
            for (const auto& t : enumerate_morphisms(s.dom, B, HomFilter::regular_mono))
            {
                auto po = pushout_rm(s, t);
                Cospan c{po.from_left, po.from_right};
                if (!A->is_simple())
                {
                    out.push_back(MultiSumElement{c});
                    continue;
                }
                for (auto& ext : detail::mono_epi_extensions(c)) out.push_back(MultiSumElement{std::move(ext)});
            }
        }
        detail::dedupe(out, [](const MultiSumElement& x, const MultiSumElement& y) { return detail::same_cospan(x.cospan, y.cospan); });
        return out;
    }

    /// Independent enumeration: a partial injection of vertices (and, in
    /// Graph, of edges) decides the shared part; in SGraph every edge set on
    /// the glued vertex set is tried. Kept when both legs are regular monos.
    inline std::vector<MultiSumElement> multisum_brute(const GraphRef& A, const GraphRef& B)
    {
        require_same_category(*A, *B);
        std::vector<MultiSumElement> out;
        int na = A->num_vertices(), nb = B->num_vertices();
        std::vector<int> sigma(static_cast<std::size_t>(na), -1);
        std::vector<char> taken(static_cast<std::size_t>(nb), 0);

        auto emit_with_vertices = [&]()
        {
            // Y vertices: A's, then B's that are not glued.
            std::vector<int> bpos(static_cast<std::size_t>(nb), -1);
            int ny = na;
            for (int b = 0; b < nb; ++b) bpos[static_cast<std::size_t>(b)] = taken[static_cast<std::size_t>(b)] ? -1 : ny++;
            for (int a = 0; a < na; ++a)
            {
                if (sigma[static_cast<std::size_t>(a)] >= 0) bpos[static_cast<std::size_t>(sigma[static_cast<std::size_t>(a)])] = a;
            }
            Graph Yv(A->category());
            std::set<std::string> used;
            for (int a = 0; a < na; ++a) Yv.add_vertex(fresh_id(A->vertex_id(a), used));
            for (int b = 0; b < nb; ++b)
            {
                if (!taken[static_cast<std::size_t>(b)]) Yv.add_vertex(fresh_id(B->vertex_id(b), used));
            }
            auto leftv = [&](int a) { return a; };
            auto rightv = [&](int b) { return bpos[static_cast<std::size_t>(b)]; };
            if (!A->is_simple())
            {
                // edge partial injection tau: E_A -> E_B respecting sigma
                int ma = A->num_edges(), mb = B->num_edges();
                std::vector<int> tau(static_cast<std::size_t>(ma), -1);
                std::vector<char> etaken(static_cast<std::size_t>(mb), 0);
                std::function<void(int)> rec = [&](int i)
                {
                    if (i == ma)
                    {
                        Graph Y = Yv;
                        std::set<std::string> eused;
                        Morphism l{A, nullptr, {}, {}}, r{B, nullptr, {}, {}};
                        for (int a = 0; a < na; ++a) l.v.push_back(leftv(a));
                        for (int b = 0; b < nb; ++b) r.v.push_back(rightv(b));
                        std::vector<int> bedge(static_cast<std::size_t>(mb), -1);
                        for (int e = 0; e < ma; ++e)
                        {
                            int id = Y.add_edge(fresh_id(A->edge_id(e), eused), leftv(A->src(e)), leftv(A->tgt(e)));
                            l.e.push_back(id);
                            if (tau[static_cast<std::size_t>(e)] >= 0) bedge[static_cast<std::size_t>(tau[static_cast<std::size_t>(e)])] = id;
                        }
                        for (int e = 0; e < mb; ++e)
                        {
                            if (bedge[static_cast<std::size_t>(e)] < 0)
                            {
                                bedge[static_cast<std::size_t>(e)] = Y.add_edge(fresh_id(B->edge_id(e), eused), rightv(B->src(e)), rightv(B->tgt(e)));
                            }
                            r.e.push_back(bedge[static_cast<std::size_t>(e)]);
                        }
                        auto Yref = make_graph(std::move(Y));
                        l.cod = Yref;
                        r.cod = Yref;
                        if (is_valid(l) && is_valid(r) && is_regular_mono(l) && is_regular_mono(r))
                        {
                            out.push_back(MultiSumElement{Cospan{l, r}});
                        }
                        return;
                    }
                    tau[static_cast<std::size_t>(i)] = -1;
                    rec(i + 1);
                    for (int e = 0; e < mb; ++e)
                    {
                        if (etaken[static_cast<std::size_t>(e)]) continue;
                        if (sigma[static_cast<std::size_t>(A->src(i))] != B->src(e) || sigma[static_cast<std::size_t>(A->tgt(i))] != B->tgt(e)) continue;
                        etaken[static_cast<std::size_t>(e)] = 1;
                        tau[static_cast<std::size_t>(i)] = e;
                        rec(i + 1);
                        tau[static_cast<std::size_t>(i)] = -1;
                        etaken[static_cast<std::size_t>(e)] = 0;
                    }
                };
                rec(0);
                return;
            }
            int ny2 = Yv.num_vertices();
            detail::for_each_subset(
                ny2 * ny2,
                [&](const std::vector<char>& pick)
                {
                    Graph Y = Yv;
                    for (int p = 0; p < ny2 * ny2; ++p)
                    {
                        if (pick[static_cast<std::size_t>(p)]) Y.add_edge("y" + std::to_string(p), p / ny2, p % ny2);
                    }
                    auto Yref = make_graph(std::move(Y));
                    std::vector<int> lv, rv;
                    for (int a = 0; a < na; ++a) lv.push_back(leftv(a));
                    for (int b = 0; b < nb; ++b) rv.push_back(rightv(b));
                    Morphism l, r;
                    try
                    {
                        l = make_morphism_from_vertices(A, Yref, lv);
                        r = make_morphism_from_vertices(B, Yref, rv);
                    }
                    catch (const invalid_morphism&)
                    {
                        return;
                    }
                    if (is_regular_mono(l) && is_regular_mono(r)) out.push_back(MultiSumElement{Cospan{l, r}});
                }
            );
        };

        std::function<void(int)> rec = [&](int a)
        {
            if (a == na)
            {
                emit_with_vertices();
                return;
            }
            sigma[static_cast<std::size_t>(a)] = -1;
            rec(a + 1);
            for (int b = 0; b < nb; ++b)
            {
                if (taken[static_cast<std::size_t>(b)]) continue;
                taken[static_cast<std::size_t>(b)] = 1;
                sigma[static_cast<std::size_t>(a)] = b;
                rec(a + 1);
                sigma[static_cast<std::size_t>(a)] = -1;
                taken[static_cast<std::size_t>(b)] = 0;
            }
        };
        rec(0);
        detail::dedupe(out, [](const MultiSumElement& x, const MultiSumElement& y) { return detail::same_cospan(x.cospan, y.cospan); });
        return out;
    }

    struct MultiSumFactorization
    {
        MultiSumElement element;
        Morphism y;  // Y -> Z
    };

    /// Factor a regular-mono cospan A -> Z <- B through its multi-sum element.
    inline MultiSumFactorization multisum_factorize(const Cospan& z)
    {
        if (!same_object(z.left.cod, z.right.cod)) throw not_composable("multisum_factorize: legs do not share their codomain");
        if (!is_regular_mono(z.left) || !is_regular_mono(z.right))
        {
            throw not_regular_mono("multisum_factorize: legs must be regular monos");
        }
        auto sum = coproduct(z.left.dom, z.right.dom);
        auto copair = sum.mediate(z);
        if (!copair) throw error("multisum_factorize: copairing failed");
        auto fr = epi_rm_factorize(*copair);
        Cospan c{compose(fr.epi, sum.from_left), compose(fr.epi, sum.from_right)};
        return MultiSumFactorization{MultiSumElement{std::move(c)}, fr.rm};
    }

    /// Index of the element of `sums` isomorphic to `x` together with the
    /// cospan iso from x's object to the listed one.
    inline std::optional<std::pair<std::size_t, Morphism>>
    locate(const std::vector<MultiSumElement>& sums, const MultiSumElement& x)
    {
        for (std::size_t i = 0; i < sums.size(); ++i)
        {
            auto iso = find_iso_commuting(
                x.object(),
                sums[i].object(),
                {IsoCondition::under(x.left(), sums[i].left()), IsoCondition::under(x.right(), sums[i].right())}
            );
            if (iso) return std::make_pair(i, *iso);
        }
        return std::nullopt;
    }

    // ------------------------------------------------------------------
    // multi-pushout-complements

    namespace detail
    {
        inline void require_poc_input(const Morphism& f, const Morphism& b)
        {
            if (!same_object(f.cod, b.dom)) throw not_composable("mpoc: f and b are not composable");
            if (!is_regular_mono(b)) throw not_regular_mono("mpoc: b is not a regular mono");
        }

        /// (a, d) is a POC element of (f, b): a regular mono and the square a pushout.
        inline bool is_poc(const Morphism& f, const Morphism& b, const Morphism& a, const Morphism& d)
        {
            if (!is_regular_mono(a)) return false;
            if (!commutes(Square{f, a, b, d})) return false;
            auto po = pushout_rm(a, f);
            auto e = po.mediate(Cospan{d, b});
            return e && is_iso(*e);
        }
    }

    /// Every POC element of (f, b): sub-objects P of the FPC object F that
    /// contain the image of n, with a = n corestricted and d = g restricted,
    /// kept when the pushout of (a, f) is D. P keeps every vertex of F (the
    /// ones outside n lie over D minus b one to one) and, for each edge of D
    /// outside b, exactly one of its lifts in Graph or a nonempty set of them
    /// in SGraph, where the pushout merges parallel edges.
    inline std::vector<POCElement> mpoc(const Morphism& f, const Morphism& b)
    {
        detail::require_poc_input(f, b);
        auto c = fpc(f, b);
        const Graph& F = *c.object;
        const bool simple = F.is_simple();
        std::vector<char> vsel(static_cast<std::size_t>(F.num_vertices()), 1);
        std::vector<char> emust(static_cast<std::size_t>(F.num_edges()), 0);
        for (int x : c.n.e) emust[static_cast<std::size_t>(x)] = 1;
        // lifts of each D-edge outside b
        std::map<int, std::vector<int>> lifts;
        for (int e = 0; e < F.num_edges(); ++e)
        {
            if (!emust[static_cast<std::size_t>(e)]) lifts[c.g.e[static_cast<std::size_t>(e)]].push_back(e);
        }
        std::vector<std::vector<int>> groups;
        for (auto& [de, es] : lifts) groups.push_back(std::move(es));

        std::vector<POCElement> out;
        std::vector<char> esel = emust;
        std::function<void(std::size_t)> rec = [&](std::size_t gi)
        {
            if (gi == groups.size())
            {
                auto p = detail::subgraph_inclusion(c.object, vsel, esel);
                auto a = detail::corestrict(c.n, p);
                auto d = compose(c.g, p);
                if (detail::is_poc(f, b, a, d)) out.push_back(POCElement{a, d});
                return;
            }
            const auto& g = groups[gi];
            if (!simple)
            {
                for (int e : g)
                {
                    esel[static_cast<std::size_t>(e)] = 1;
                    rec(gi + 1);
                    esel[static_cast<std::size_t>(e)] = 0;
                }
                return;
            }
            detail::for_each_subset(
                static_cast<int>(g.size()),
                [&](const std::vector<char>& pick)
                {
                    if (std::find(pick.begin(), pick.end(), 1) == pick.end()) return;
                    for (std::size_t i = 0; i < g.size(); ++i) esel[static_cast<std::size_t>(g[i])] = pick[i];
                    rec(gi + 1);
                    for (int e : g) esel[static_cast<std::size_t>(e)] = 0;
                }
            );
        };
        rec(0);
        detail::dedupe(out, detail::same_poc);
        return out;
    }

    /// Brute-force POC enumeration independent of the FPC: P has A's vertices
    /// plus one vertex per vertex of D outside b; every edge of D outside b is
    /// lifted by choosing preimages for its endpoints inside b (in SGraph any
    /// nonempty set of such lifts), and each candidate is tested with the
    /// pushout oracle.
    inline std::vector<POCElement> mpoc_brute(const Morphism& f, const Morphism& b)
    {
        detail::require_poc_input(f, b);
        const Graph& A = *f.dom;
        const Graph& D = *b.cod;
        auto bf = compose(b, f);
        std::vector<char> in_b_v(static_cast<std::size_t>(D.num_vertices()), 0), in_b_e(static_cast<std::size_t>(D.num_edges()), 0);
        for (int x : b.v) in_b_v[static_cast<std::size_t>(x)] = 1;
        for (int x : b.e) in_b_e[static_cast<std::size_t>(x)] = 1;

        Graph base(A.category());
        std::set<std::string> used;
        std::vector<int> dmap_v;
        for (int x = 0; x < A.num_vertices(); ++x)
        {
            base.add_vertex(fresh_id(A.vertex_id(x), used));
            dmap_v.push_back(bf.vertex(x));
        }
        std::vector<int> outside_pos(static_cast<std::size_t>(D.num_vertices()), -1);
        for (int v = 0; v < D.num_vertices(); ++v)
        {
            if (in_b_v[static_cast<std::size_t>(v)]) continue;
            outside_pos[static_cast<std::size_t>(v)] = base.add_vertex(fresh_id(D.vertex_id(v), used));
            dmap_v.push_back(v);
        }
        // possible P-endpoints for each D-vertex
        std::vector<std::vector<int>> lifts_of(static_cast<std::size_t>(D.num_vertices()));
        for (int v = 0; v < D.num_vertices(); ++v)
        {
            if (!in_b_v[static_cast<std::size_t>(v)])
            {
                lifts_of[static_cast<std::size_t>(v)] = {outside_pos[static_cast<std::size_t>(v)]};
                continue;
            }
            for (int x = 0; x < A.num_vertices(); ++x)
            {
                if (bf.vertex(x) == v) lifts_of[static_cast<std::size_t>(v)].push_back(x);
            }
        }
        struct Lift
        {
            int d_edge;
            int s, t;
        };
        std::vector<std::vector<Lift>> options;  // per outside D-edge
        for (int e = 0; e < D.num_edges(); ++e)
        {
            if (in_b_e[static_cast<std::size_t>(e)]) continue;
            std::vector<Lift> opts;
            for (int s : lifts_of[static_cast<std::size_t>(D.src(e))])
            {
                for (int t : lifts_of[static_cast<std::size_t>(D.tgt(e))]) opts.push_back(Lift{e, s, t});
            }
            options.push_back(std::move(opts));
        }

        std::vector<POCElement> out;
        std::vector<std::vector<Lift>> chosen(options.size());
        std::function<void(std::size_t)> rec = [&](std::size_t i)
        {
            if (i == options.size())
            {
                Graph P = base;
                std::set<std::string> eused;
                Morphism a{f.dom, nullptr, {}, {}}, d{nullptr, b.cod, dmap_v, {}};
                for (int x = 0; x < A.num_vertices(); ++x) a.v.push_back(x);
                for (int e = 0; e < A.num_edges(); ++e)
                {
                    a.e.push_back(P.add_edge(fresh_id(A.edge_id(e), eused), A.src(e), A.tgt(e)));
                    d.e.push_back(bf.edge(e));
                }
                for (const auto& group : chosen)
                {
                    for (const auto& l : group)
                    {
                        P.add_edge(fresh_id(D.edge_id(l.d_edge), eused), l.s, l.t);
                        d.e.push_back(l.d_edge);
                    }
                }
                GraphRef Pref;
                try
                {
                    Pref = make_graph(std::move(P));
                }
                catch (const invalid_graph&)
                {
                    return;  // parallel lifts in a simple graph
                }
                a.cod = Pref;
                d.dom = Pref;
                if (!is_valid(a) || !is_valid(d) || !is_regular_mono(a)) return;
                if (verify_pushout(Span{a, f}, Cospan{d, b})) out.push_back(POCElement{a, d});
                return;
            }
            const auto& opts = options[i];
            if (!A.is_simple())
            {
                for (const auto& l : opts)
                {
                    chosen[i] = {l};
                    rec(i + 1);
                }
                return;
            }
            detail::for_each_subset(
                static_cast<int>(opts.size()),
                [&](const std::vector<char>& pick)
                {
                    std::vector<Lift> group;
                    for (std::size_t k = 0; k < opts.size(); ++k)
                    {
                        if (pick[k]) group.push_back(opts[k]);
                    }
                    if (group.empty()) return;
                    chosen[i] = group;
                    rec(i + 1);
                }
            );
        };
        rec(0);
        detail::dedupe(out, detail::same_poc);
        return out;
    }

    /// A competitor for mpoc_factorize: a pushout square of (n, f) along a
    /// regular mono n: A -> X, with m = m' o b.
    struct POCCompetitor
    {
        Morphism n;        // A -> X
        Morphism g;        // X -> Y
        Morphism m_prime;  // D -> Y
    };

    struct POCFactorization
    {
        POCElement element;
        Morphism p;  // P -> X
    };

    /// The element through which a competitor factors: P is the pullback of
    /// (m', g), a is induced by (b o f, n).
    inline POCFactorization mpoc_factorize(const Morphism& f, const Morphism& b, const POCCompetitor& c)
    {
        detail::require_poc_input(f, b);
        if (!is_regular_mono(c.n) || !is_regular_mono(c.m_prime))
        {
            throw not_regular_mono("mpoc_factorize: competitor legs n and m' must be regular monos");
        }
        if (!commutes(Square{f, c.n, compose(c.m_prime, b), c.g}))
        {
            throw not_commuting("mpoc_factorize: competitor square does not commute");
        }
        auto pb = pullback(c.m_prime, c.g);
        auto a = pb.mediate(Span{compose(b, f), c.n});
        if (!a) throw error("mpoc_factorize: no induced morphism into the pullback");
        return POCFactorization{POCElement{*a, pb.to_left}, pb.to_right};
    }

    inline std::optional<std::pair<std::size_t, Morphism>> locate(const std::vector<POCElement>& pocs, const POCElement& x)
    {
        for (std::size_t i = 0; i < pocs.size(); ++i)
        {
            auto iso = find_iso_commuting(x.object(), pocs[i].object(), {IsoCondition::under(x.a, pocs[i].a), IsoCondition::over(x.d, pocs[i].d)});
            if (iso) return std::make_pair(i, *iso);
        }
        return std::nullopt;
    }

    // ------------------------------------------------------------------
    // FPC-pushout augmentations

    /// Square (alpha, a) pushed out along the regular mono alpha.
    inline AugmentationSquare augmentation_square(const Morphism& alpha, const Morphism& a)
    {
        if (!is_regular_mono(alpha)) throw not_regular_mono("augmentation square: alpha must be a regular mono");
        auto po = pushout_rm(alpha, a);
        return AugmentationSquare{alpha, a, po.from_right, po.from_left};
    }

    /// The FPA element determined by the epi e: D -> E, if e qualifies.
    inline std::optional<FPAElement> fpa_from_epi(const AugmentationSquare& sq, const Morphism& e)
    {
        if (!is_epi(e)) return std::nullopt;
        auto ea = compose(e, sq.alpha_bar);
        if (!is_regular_mono(ea)) return std::nullopt;
        // (alpha_bar, id_B) is a pullback of (e, e o alpha_bar): nothing outside
        // the image of alpha_bar is sent into the image of e o alpha_bar.
        {
            const Graph& D = *e.dom;
            std::vector<char> vin(static_cast<std::size_t>(D.num_vertices()), 0), ein(static_cast<std::size_t>(D.num_edges()), 0);
            for (int x : sq.alpha_bar.v) vin[static_cast<std::size_t>(x)] = 1;
            for (int x : sq.alpha_bar.e) ein[static_cast<std::size_t>(x)] = 1;
            std::set<int> vimg(ea.v.begin(), ea.v.end()), eimg(ea.e.begin(), ea.e.end());
            for (int v = 0; v < D.num_vertices(); ++v)
            {
                if (!vin[static_cast<std::size_t>(v)] && vimg.count(e.vertex(v))) return std::nullopt;
            }
            for (int x = 0; x < D.num_edges(); ++x)
            {
                if (!ein[static_cast<std::size_t>(x)] && eimg.count(e.edge(x))) return std::nullopt;
            }
        }
        auto c = fpc(sq.a, ea);
        auto target = compose(e, sq.a_bar);
        auto cons = HomConstraints::none(*sq.alpha.cod);
        constrain::after(cons, sq.alpha, c.n);
        constrain::before(cons, target, c.g);
        std::optional<Morphism> n;
        std::size_t found = 0;
        for_each_morphism(
            sq.alpha.cod,
            c.object,
            HomFilter::all,
            [&](const Morphism& cand)
            {
                if (!n) n = cand;
                return ++found < 2;
            },
            &cons
        );
        if (found != 1 || !is_regular_mono(*n)) return std::nullopt;
        return FPAElement{*n, c.g, e};
    }

    /// Every FPA of the square, up to isomorphism. Candidate epis: quotients
    /// of D by vertex and edge partitions outside the image of alpha_bar and,
    /// in SGraph, any set of added edges not inside that image.
    inline std::vector<FPAElement> fpa_enumerate(const AugmentationSquare& sq)
    {
        if (!is_regular_mono(sq.alpha) || !is_regular_mono(sq.alpha_bar))
        {
            throw not_regular_mono("fpa_enumerate: alpha and alpha_bar must be regular monos");
        }
        if (!verify_pushout(Span{sq.alpha, sq.a}, Cospan{sq.a_bar, sq.alpha_bar}))
        {
            throw error("fpa_enumerate: input square is not a pushout");
        }
        const GraphRef& D = sq.alpha_bar.cod;
        int nv = D->num_vertices(), ne = D->num_edges();
        std::vector<char> vin(static_cast<std::size_t>(nv), 0), ein(static_cast<std::size_t>(ne), 0);
        for (int x : sq.alpha_bar.v) vin[static_cast<std::size_t>(x)] = 1;
        for (int x : sq.alpha_bar.e) ein[static_cast<std::size_t>(x)] = 1;
        std::vector<int> vout, eout;
        for (int v = 0; v < nv; ++v)
        {
            if (!vin[static_cast<std::size_t>(v)]) vout.push_back(v);
        }
        for (int x = 0; x < ne; ++x)
        {
            if (!ein[static_cast<std::size_t>(x)]) eout.push_back(x);
        }
        std::vector<FPAElement> out;
        auto consider = [&](const Morphism& e)
        {
            if (auto el = fpa_from_epi(sq, e)) out.push_back(std::move(*el));
        };
        detail::for_each_partition(
            static_cast<int>(vout.size()),
            [&](const std::vector<int>& vp)
            {
                std::vector<int> vblock(static_cast<std::size_t>(nv));
                for (int v = 0; v < nv; ++v) vblock[static_cast<std::size_t>(v)] = v;  // singletons inside
                for (std::size_t i = 0; i < vout.size(); ++i) vblock[static_cast<std::size_t>(vout[i])] = nv + vp[i];
                auto endpoint_key = [&](int x) { return std::make_pair(vblock[static_cast<std::size_t>(D->src(x))], vblock[static_cast<std::size_t>(D->tgt(x))]); };
                if (D->is_simple())
                {
                    // Edge classes are forced by endpoints; parallel images collapse.
                    std::vector<int> eblock(static_cast<std::size_t>(ne));
                    std::map<std::pair<int, int>, int> by_ends;
                    bool clash = false;
                    for (int x = 0; x < ne; ++x)
                    {
                        auto key = endpoint_key(x);
                        auto it = by_ends.emplace(key, x).first;
                        eblock[static_cast<std::size_t>(x)] = it->second;
                        if (it->second != x && (ein[static_cast<std::size_t>(x)] || ein[static_cast<std::size_t>(it->second)])) clash = true;
                    }
                    if (clash) return;
                    auto q = detail::quotient(D, vblock, eblock);
                    // Augmentation edges: pairs not both inside the image of
                    // e o alpha_bar. An added edge whose endpoints both lift to
                    // the FPC object lifts too, and n (bijective on vertices)
                    // cannot reflect it, so one endpoint must lie in the part of
                    // B that a misses.
                    const Graph& E0 = *q.cod;
                    std::vector<char> inside(static_cast<std::size_t>(E0.num_vertices()), 0);
                    std::vector<char> lifts(static_cast<std::size_t>(E0.num_vertices()), 1);
                    for (int x : sq.alpha_bar.v) inside[static_cast<std::size_t>(q.vertex(x))] = 1;
                    for (int x : sq.alpha_bar.v) lifts[static_cast<std::size_t>(q.vertex(x))] = 0;
                    for (int x : compose(q, sq.alpha_bar, sq.a).v) lifts[static_cast<std::size_t>(x)] = 1;
                    std::vector<Edge> free;
                    for (int u = 0; u < E0.num_vertices(); ++u)
                    {
                        for (int w = 0; w < E0.num_vertices(); ++w)
                        {
                            if (inside[static_cast<std::size_t>(u)] && inside[static_cast<std::size_t>(w)]) continue;
                            if (lifts[static_cast<std::size_t>(u)] && lifts[static_cast<std::size_t>(w)]) continue;
                            if (!E0.edges_between(u, w).empty()) continue;
                            free.push_back(Edge{u, w});
                        }
                    }
                    detail::for_each_subset(
                        static_cast<int>(free.size()),
                        [&](const std::vector<char>& pick)
                        {
                            Graph E = E0;
                            std::set<std::string> used(E0.edge_ids().begin(), E0.edge_ids().end());
                            for (std::size_t i = 0; i < free.size(); ++i)
                            {
                                if (!pick[i]) continue;
                                E.add_edge(fresh_id("x(" + E0.vertex_id(free[i].src) + "," + E0.vertex_id(free[i].tgt) + ")", used), free[i].src, free[i].tgt);
                            }
                            consider(retarget(q, D, make_graph(std::move(E))));
                        }
                    );
                    return;
                }
                // Graph: partition the outside edges among those with equal endpoint classes.
                std::map<std::pair<int, int>, std::vector<int>> groups;
                for (int x : eout) groups[endpoint_key(x)].push_back(x);
                std::vector<std::vector<int>> glist;
                for (auto& [k, g] : groups) glist.push_back(g);
                std::vector<int> eblock(static_cast<std::size_t>(ne));
                for (int x = 0; x < ne; ++x) eblock[static_cast<std::size_t>(x)] = x;
                std::function<void(std::size_t)> rec = [&](std::size_t gi)
                {
                    if (gi == glist.size())
                    {
                        consider(detail::quotient(D, vblock, eblock));
                        return;
                    }
                    const auto& g = glist[gi];
                    detail::for_each_partition(
                        static_cast<int>(g.size()),
                        [&](const std::vector<int>& ep)
                        {
                            // block label: the first member's index
                            std::vector<int> first(g.size(), -1);
                            for (std::size_t i = 0; i < g.size(); ++i)
                            {
                                auto b = static_cast<std::size_t>(ep[i]);
                                if (first[b] < 0) first[b] = g[i];
                                eblock[static_cast<std::size_t>(g[i])] = first[b];
                            }
                            rec(gi + 1);
                        }
                    );
                    for (int x : g) eblock[static_cast<std::size_t>(x)] = x;
                };
                rec(0);
            }
        );
        detail::dedupe(out, detail::same_fpa);
        return out;
    }

    inline std::optional<std::pair<std::size_t, Morphism>> locate(const std::vector<FPAElement>& fpas, const FPAElement& x)
    {
        for (std::size_t i = 0; i < fpas.size(); ++i)
        {
            auto iso = find_iso_commuting(x.e.cod, fpas[i].e.cod, {IsoCondition::under(x.e, fpas[i].e)});
            if (iso && detail::same_fpa(x, fpas[i])) return std::make_pair(i, *iso);
        }
        return std::nullopt;
    }

}

#endif
