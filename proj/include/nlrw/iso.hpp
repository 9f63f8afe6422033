#ifndef NLRW_ISO_HPP
#define NLRW_ISO_HPP

#include <optional>
#include <sstream>
#include <tuple>
#include <vector>

#include "graph.hpp"

namespace nlrw
{

    /// Canonical representative of an isomorphism class together with the
    /// isomorphism from the input onto it.
    struct CanonicalForm
    {
        GraphRef graph;
        Morphism iso;
        /// Sorted (src, tgt) list over canonical positions; equal codes iff isomorphic.
        std::vector<std::pair<int, int>> code;
    };

    namespace detail
    {
        /// Equitable colour refinement seeded by (self-loops, out-degree, in-degree).
        inline std::vector<int> refine_colours(const Graph& g)
        {
            int n = g.num_vertices();
            std::vector<std::vector<int>> sig(static_cast<std::size_t>(n));
            for (int v = 0; v < n; ++v) sig[static_cast<std::size_t>(v)] = {0, 0, 0};
            for (const auto& e : g.edges())
            {
                if (e.src == e.tgt) sig[static_cast<std::size_t>(e.src)][0]++;
                sig[static_cast<std::size_t>(e.src)][1]++;
                sig[static_cast<std::size_t>(e.tgt)][2]++;
            }
            std::vector<int> colour(static_cast<std::size_t>(n), 0);
            auto recolour = [&](const std::vector<std::vector<int>>& s)
            {
                std::vector<std::vector<int>> keys(s.begin(), s.end());
                std::sort(keys.begin(), keys.end());
                keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
                int distinct = static_cast<int>(keys.size());
                for (int v = 0; v < n; ++v)
                {
                    colour[static_cast<std::size_t>(v)] = static_cast<int>(
                        std::lower_bound(keys.begin(), keys.end(), s[static_cast<std::size_t>(v)]) - keys.begin()
                    );
                }
                return distinct;
            };
            int classes = recolour(sig);
            while (true)
            {
                std::vector<std::vector<int>> next(static_cast<std::size_t>(n));
                for (int v = 0; v < n; ++v) next[static_cast<std::size_t>(v)] = {colour[static_cast<std::size_t>(v)]};
                std::vector<std::vector<int>> outs(static_cast<std::size_t>(n)), ins(static_cast<std::size_t>(n));
                for (const auto& e : g.edges())
                {
                    outs[static_cast<std::size_t>(e.src)].push_back(colour[static_cast<std::size_t>(e.tgt)]);
                    ins[static_cast<std::size_t>(e.tgt)].push_back(colour[static_cast<std::size_t>(e.src)]);
                }
                for (int v = 0; v < n; ++v)
                {
                    auto& o = outs[static_cast<std::size_t>(v)];
                    auto& i = ins[static_cast<std::size_t>(v)];
                    std::sort(o.begin(), o.end());
                    std::sort(i.begin(), i.end());
                    auto& s = next[static_cast<std::size_t>(v)];
                    s.push_back(-1);
                    s.insert(s.end(), o.begin(), o.end());
                    s.push_back(-2);
                    s.insert(s.end(), i.begin(), i.end());
                }
                int refined = recolour(next);
                if (refined == classes) break;
                classes = refined;
            }
            return colour;
        }

        inline std::vector<std::pair<int, int>> edge_code(const Graph& g, const std::vector<int>& pos)
        {
            std::vector<std::pair<int, int>> code;
            code.reserve(static_cast<std::size_t>(g.num_edges()));
            for (const auto& e : g.edges())
            {
                code.emplace_back(pos[static_cast<std::size_t>(e.src)], pos[static_cast<std::size_t>(e.tgt)]);
            }
            std::sort(code.begin(), code.end());
            return code;
        }

        /// Minimum edge code over all colour-respecting orderings; the colour
        /// sequence itself is part of the invariant so it is emitted first.
        class CanonSearch
        {
        public:

            explicit CanonSearch(const Graph& g)
                : m_g(g)
                , m_colour(refine_colours(g))
            {
                int n = g.num_vertices();
                std::vector<int> order(static_cast<std::size_t>(n));
                std::iota(order.begin(), order.end(), 0);
                std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return m_colour[static_cast<std::size_t>(a)] < m_colour[static_cast<std::size_t>(b)]; });
                m_slot_colour.reserve(static_cast<std::size_t>(n));
                for (int v : order) m_slot_colour.push_back(m_colour[static_cast<std::size_t>(v)]);
                m_pos.assign(static_cast<std::size_t>(n), -1);
                m_taken.assign(static_cast<std::size_t>(n), 0);
            }

            void run()
            {
                place(0);
            }

            const std::vector<int>& best_positions() const { return m_best_pos; }
            const std::vector<std::pair<int, int>>& best_code() const { return m_best_code; }
            const std::vector<int>& slot_colours() const { return m_slot_colour; }

        private:

            void place(int slot)
            {
                int n = m_g.num_vertices();
                if (slot == n)
                {
                    auto code = edge_code(m_g, m_pos);
                    if (!m_found || code < m_best_code)
                    {
                        m_found = true;
                        m_best_code = std::move(code);
                        m_best_pos = m_pos;
                    }
                    return;
                }
                for (int v = 0; v < n; ++v)
                {
                    if (m_taken[static_cast<std::size_t>(v)]) continue;
                    if (m_colour[static_cast<std::size_t>(v)] != m_slot_colour[static_cast<std::size_t>(slot)]) continue;
                    m_taken[static_cast<std::size_t>(v)] = 1;
                    m_pos[static_cast<std::size_t>(v)] = slot;
                    place(slot + 1);
                    m_taken[static_cast<std::size_t>(v)] = 0;
                    m_pos[static_cast<std::size_t>(v)] = -1;
                }
            }

            const Graph& m_g;
            std::vector<int> m_colour;
            std::vector<int> m_slot_colour;
            std::vector<int> m_pos;
            std::vector<char> m_taken;
            bool m_found = false;
            std::vector<int> m_best_pos;
            std::vector<std::pair<int, int>> m_best_code;
        };
    }

    inline CanonicalForm canonicalize(const GraphRef& g)
    {
        detail::CanonSearch search(*g);
        search.run();
        const auto& pos = search.best_positions();
        const auto& code = search.best_code();
        int n = g->num_vertices();
        Graph out(g->category());
        for (int i = 0; i < n; ++i) out.add_vertex("v" + std::to_string(i));
        for (std::size_t i = 0; i < code.size(); ++i) out.add_edge("e" + std::to_string(i), code[i].first, code[i].second);
        auto canon = make_graph(std::move(out));

        // Parallel edges are matched in index order.
        std::vector<int> emap(static_cast<std::size_t>(g->num_edges()), -1);
        std::vector<char> used(code.size(), 0);
        for (int e = 0; e < g->num_edges(); ++e)
        {
            std::pair<int, int> key{pos[static_cast<std::size_t>(g->src(e))], pos[static_cast<std::size_t>(g->tgt(e))]};
            auto it = std::lower_bound(code.begin(), code.end(), key);
            auto idx = static_cast<std::size_t>(it - code.begin());
            while (used[idx]) ++idx;
            used[idx] = 1;
            emap[static_cast<std::size_t>(e)] = static_cast<int>(idx);
        }
        std::vector<std::pair<int, int>> full_code = code;
        // Prefix the code with the vertex count so graphs differing only in
        // isolated vertices are told apart.
        full_code.insert(full_code.begin(), {n, -1});
        return CanonicalForm{canon, Morphism{g, canon, pos, emap}, std::move(full_code)};
    }

    inline GraphRef canonical_form(const GraphRef& g)
    {
        return canonicalize(g).graph;
    }

    /// Stable text rendering of a graph, used for keys and golden output.
    inline std::string serialize_compact(const Graph& g)
    {
        std::ostringstream os;
        os << to_string(g.category()) << " V[";
        for (int v = 0; v < g.num_vertices(); ++v) os << (v ? "," : "") << g.vertex_id(v);
        os << "] E[";
        for (int e = 0; e < g.num_edges(); ++e)
        {
            os << (e ? "," : "") << g.edge_id(e) << ":" << g.vertex_id(g.src(e)) << ">" << g.vertex_id(g.tgt(e));
        }
        os << "]";
        return os.str();
    }

    inline std::optional<Morphism> are_isomorphic(const GraphRef& a, const GraphRef& b)
    {
        require_same_category(*a, *b);
        if (a->num_vertices() != b->num_vertices() || a->num_edges() != b->num_edges()) return std::nullopt;
        auto ca = canonicalize(a);
        auto cb = canonicalize(b);
        if (ca.code != cb.code) return std::nullopt;
        auto to_b = retarget(inverse(cb.iso), ca.graph, b);
        return compose(to_b, ca.iso);
    }

    inline bool isomorphic(const GraphRef& a, const GraphRef& b)
    {
        return a->category() == b->category() && are_isomorphic(a, b).has_value();
    }

}

#endif
