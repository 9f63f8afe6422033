#ifndef NLRW_HOMS_HPP
#define NLRW_HOMS_HPP

#include <functional>
#include <optional>
#include <vector>

#include "graph.hpp"

namespace nlrw
{

    enum class HomFilter
    {
        all,
        mono,
        regular_mono,
        epi,
        iso
    };

    /// Optional restriction of where each vertex / edge of the domain may go.
    /// An empty optional means unrestricted.
    struct HomConstraints
    {
        std::vector<std::optional<std::vector<int>>> vertex;
        std::vector<std::optional<std::vector<int>>> edge;

        static HomConstraints none(const Graph& dom)
        {
            HomConstraints c;
            c.vertex.resize(static_cast<std::size_t>(dom.num_vertices()));
            c.edge.resize(static_cast<std::size_t>(dom.num_edges()));
            return c;
        }

        void fix_vertex(int x, int y) { restrict(vertex, x, {y}); }
        void fix_edge(int x, int y) { restrict(edge, x, {y}); }

        /// Intersect the candidates of vertex x with `allowed`.
        void restrict_vertex(int x, std::vector<int> allowed) { restrict(vertex, x, std::move(allowed)); }
        void restrict_edge(int x, std::vector<int> allowed) { restrict(edge, x, std::move(allowed)); }

    private:

        static void restrict(std::vector<std::optional<std::vector<int>>>& slots, int x, std::vector<int> allowed)
        {
            auto& slot = slots.at(static_cast<std::size_t>(x));
            std::sort(allowed.begin(), allowed.end());
            allowed.erase(std::unique(allowed.begin(), allowed.end()), allowed.end());
            if (!slot)
            {
                slot = std::move(allowed);
                return;
            }
            std::vector<int> both;
            std::set_intersection(slot->begin(), slot->end(), allowed.begin(), allowed.end(), std::back_inserter(both));
            slot = std::move(both);
        }
    };

    namespace detail
    {
        /// Backtracking enumeration of graph morphisms dom -> cod. Vertices are
        /// assigned in index order, then edges; the visit order is therefore
        /// lexicographic in (vertex map, edge map).
        class HomSearch
        {
        public:

            HomSearch(const GraphRef& dom, const GraphRef& cod, HomFilter filter, const HomConstraints* constraints)
                : m_dom(dom)
                , m_cod(cod)
                , m_filter(filter)
                , m_constraints(constraints)
            {
                const Graph& B = *cod;
                int n = B.num_vertices();
                m_between.assign(static_cast<std::size_t>(n * n), {});
                for (int e = 0; e < B.num_edges(); ++e)
                {
                    m_between[static_cast<std::size_t>(B.src(e) * n + B.tgt(e))].push_back(e);
                }
                const Graph& A = *dom;
                m_edges_closed_at.assign(static_cast<std::size_t>(A.num_vertices()), {});
                for (int e = 0; e < A.num_edges(); ++e)
                {
                    int last = std::max(A.src(e), A.tgt(e));
                    m_edges_closed_at[static_cast<std::size_t>(last)].push_back(e);
                }
                m_injective_vertices = filter == HomFilter::mono || filter == HomFilter::regular_mono || filter == HomFilter::iso;
                m_injective_edges = m_injective_vertices && (!A.is_simple() || filter == HomFilter::iso);
                if (filter == HomFilter::iso
                    && (A.num_vertices() != B.num_vertices() || A.num_edges() != B.num_edges()))
                {
                    m_impossible = true;
                }
            }

            /// Calls `visit` for each morphism; stops early if it returns false.
            void run(const std::function<bool(const Morphism&)>& visit)
            {
                if (m_impossible) return;
                m_visit = &visit;
                m_stop = false;
                m_v.assign(static_cast<std::size_t>(m_dom->num_vertices()), -1);
                m_e.assign(static_cast<std::size_t>(m_dom->num_edges()), -1);
                m_vused.assign(static_cast<std::size_t>(m_cod->num_vertices()), 0);
                m_eused.assign(static_cast<std::size_t>(m_cod->num_edges()), 0);
                assign_vertex(0);
            }

        private:

            const std::vector<int>& targets_between(int u, int w) const
            {
                return m_between[static_cast<std::size_t>(u * m_cod->num_vertices() + w)];
            }

            bool allowed(const std::vector<std::optional<std::vector<int>>>* slots, int x, int y) const
            {
                if (!slots || slots->empty()) return true;
                const auto& slot = (*slots)[static_cast<std::size_t>(x)];
                return !slot || std::binary_search(slot->begin(), slot->end(), y);
            }

            void assign_vertex(int x)
            {
                if (m_stop) return;
                const Graph& A = *m_dom;
                if (x == A.num_vertices())
                {
                    assign_edge(0);
                    return;
                }
                for (int y = 0; y < m_cod->num_vertices(); ++y)
                {
                    if (m_injective_vertices && m_vused[static_cast<std::size_t>(y)]) continue;
                    if (!allowed(m_constraints ? &m_constraints->vertex : nullptr, x, y)) continue;
                    m_v[static_cast<std::size_t>(x)] = y;
                    bool ok = true;
                    for (int e : m_edges_closed_at[static_cast<std::size_t>(x)])
                    {
                        const auto& cands = targets_between(m_v[static_cast<std::size_t>(A.src(e))], m_v[static_cast<std::size_t>(A.tgt(e))]);
                        if (cands.empty())
                        {
                            ok = false;
                            break;
                        }
                    }
                    if (!ok) continue;
                    m_vused[static_cast<std::size_t>(y)]++;
                    assign_vertex(x + 1);
                    m_vused[static_cast<std::size_t>(y)]--;
                    if (m_stop) return;
                }
                m_v[static_cast<std::size_t>(x)] = -1;
            }

            void assign_edge(int i)
            {
                if (m_stop) return;
                const Graph& A = *m_dom;
                if (i == A.num_edges())
                {
                    finish();
                    return;
                }
                const auto& cands = targets_between(m_v[static_cast<std::size_t>(A.src(i))], m_v[static_cast<std::size_t>(A.tgt(i))]);
                for (int y : cands)
                {
                    if (m_injective_edges && m_eused[static_cast<std::size_t>(y)]) continue;
                    if (!allowed(m_constraints ? &m_constraints->edge : nullptr, i, y)) continue;
                    m_e[static_cast<std::size_t>(i)] = y;
                    m_eused[static_cast<std::size_t>(y)]++;
                    assign_edge(i + 1);
                    m_eused[static_cast<std::size_t>(y)]--;
                    if (m_stop) return;
                }
            }

            void finish()
            {
                Morphism f{m_dom, m_cod, m_v, m_e};
                bool keep = true;
                switch (m_filter)
                {
                    case HomFilter::all:
                        break;
                    case HomFilter::mono:
                        keep = is_mono(f);
                        break;
                    case HomFilter::regular_mono:
                        keep = is_regular_mono(f);
                        break;
                    case HomFilter::epi:
                        keep = is_epi(f);
                        break;
                    case HomFilter::iso:
                        keep = is_iso(f);
                        break;
                }
                if (keep && !(*m_visit)(f)) m_stop = true;
            }

            GraphRef m_dom;
            GraphRef m_cod;
            HomFilter m_filter;
            const HomConstraints* m_constraints;
            std::vector<std::vector<int>> m_between;
            std::vector<std::vector<int>> m_edges_closed_at;
            bool m_injective_vertices = false;
            bool m_injective_edges = false;
            bool m_impossible = false;
            const std::function<bool(const Morphism&)>* m_visit = nullptr;
            bool m_stop = false;
            std::vector<int> m_v;
            std::vector<int> m_e;
            std::vector<int> m_vused;
            std::vector<int> m_eused;
        };
    }

    inline void for_each_morphism(
        const GraphRef& dom,
        const GraphRef& cod,
        HomFilter filter,
        const std::function<bool(const Morphism&)>& visit,
        const HomConstraints* constraints = nullptr
    )
    {
        require_same_category(*dom, *cod);
        detail::HomSearch search(dom, cod, filter, constraints);
        search.run(visit);
    }

    /// Every morphism dom -> cod passing `filter`, lexicographically ordered by
    /// (vertex map, edge map).
    inline std::vector<Morphism>
    enumerate_morphisms(const GraphRef& dom, const GraphRef& cod, HomFilter filter = HomFilter::all, const HomConstraints* constraints = nullptr)
    {
        std::vector<Morphism> out;
        for_each_morphism(
            dom,
            cod,
            filter,
            [&](const Morphism& f)
            {
                out.push_back(f);
                return true;
            },
            constraints
        );
        return out;
    }

    inline std::optional<Morphism>
    find_morphism(const GraphRef& dom, const GraphRef& cod, HomFilter filter = HomFilter::all, const HomConstraints* constraints = nullptr)
    {
        std::optional<Morphism> out;
        for_each_morphism(
            dom,
            cod,
            filter,
            [&](const Morphism& f)
            {
                out = f;
                return false;
            },
            constraints
        );
        return out;
    }

    /// Counts morphisms, stopping once `cap` is reached.
    inline std::size_t count_morphisms(
        const GraphRef& dom,
        const GraphRef& cod,
        HomFilter filter,
        const HomConstraints* constraints,
        std::size_t cap = static_cast<std::size_t>(-1)
    )
    {
        std::size_t n = 0;
        for_each_morphism(
            dom,
            cod,
            filter,
            [&](const Morphism&)
            {
                ++n;
                return n < cap;
            },
            constraints
        );
        return n;
    }

    /// Helpers to phrase commutation requirements as candidate restrictions
    /// on an unknown morphism u: X -> Y.
    namespace constrain
    {
        /// u o s = t, for s: S -> X and t: S -> Y.
        inline void after(HomConstraints& c, const Morphism& s, const Morphism& t)
        {
            for (std::size_t i = 0; i < s.v.size(); ++i) c.fix_vertex(s.v[i], t.v[i]);
            for (std::size_t i = 0; i < s.e.size(); ++i) c.fix_edge(s.e[i], t.e[i]);
        }

        /// t o u = s, for s: X -> Z and t: Y -> Z.
        inline void before(HomConstraints& c, const Morphism& s, const Morphism& t)
        {
            const Graph& Y = *t.dom;
            for (std::size_t x = 0; x < s.v.size(); ++x)
            {
                std::vector<int> fiber;
                for (int y = 0; y < Y.num_vertices(); ++y)
                {
                    if (t.vertex(y) == s.v[x]) fiber.push_back(y);
                }
                c.restrict_vertex(static_cast<int>(x), std::move(fiber));
            }
            for (std::size_t x = 0; x < s.e.size(); ++x)
            {
                std::vector<int> fiber;
                for (int y = 0; y < Y.num_edges(); ++y)
                {
                    if (t.edge(y) == s.e[x]) fiber.push_back(y);
                }
                c.restrict_edge(static_cast<int>(x), std::move(fiber));
            }
        }
    }

    /// A requirement on an isomorphism u: X -> Y, see find_iso_commuting.
    struct IsoCondition
    {
        enum class Kind
        {
            after,
            before
        };

        Kind kind;
        Morphism x_side;
        Morphism y_side;

        /// u o from_x = from_y
        static IsoCondition under(Morphism from_x, Morphism from_y)
        {
            return {Kind::after, std::move(from_x), std::move(from_y)};
        }

        /// to_y o u = to_x
        static IsoCondition over(Morphism to_x, Morphism to_y)
        {
            return {Kind::before, std::move(to_x), std::move(to_y)};
        }
    };

    /// First isomorphism X -> Y satisfying every condition, if any.
    inline std::optional<Morphism>
    find_iso_commuting(const GraphRef& X, const GraphRef& Y, const std::vector<IsoCondition>& conditions)
    {
        if (X->category() != Y->category()) return std::nullopt;
        if (X->num_vertices() != Y->num_vertices() || X->num_edges() != Y->num_edges()) return std::nullopt;
        auto c = HomConstraints::none(*X);
        for (const auto& cond : conditions)
        {
            if (cond.kind == IsoCondition::Kind::after)
            {
                constrain::after(c, cond.x_side, cond.y_side);
            }
            else
            {
                constrain::before(c, cond.x_side, cond.y_side);
            }
        }
        return find_morphism(X, Y, HomFilter::iso, &c);
    }

}

#endif
