#ifndef NLRW_CORPUS_HPP
#define NLRW_CORPUS_HPP

// Small-graph generators for exhaustive and randomized checks.

#include <random>
#include <set>
#include <vector>

#include "graph.hpp"
#include "iso.hpp"

namespace nlrw
{

    namespace detail
    {
        inline void multisets_of_pairs(
            int n,
            int k,
            int start,
            std::vector<Edge>& cur,
            std::vector<std::vector<Edge>>& out,
            bool distinct
        )
        {
            out.push_back(cur);
            if (k == 0) return;
            int pairs = n * n;
            for (int p = start; p < pairs; ++p)
            {
                cur.push_back(Edge{p / n, p % n});
                multisets_of_pairs(n, k - 1, distinct ? p + 1 : p, cur, out, distinct);
                cur.pop_back();
            }
        }
    }

    /// Every graph with exactly n vertices and at most max_edges edges, one per
    /// isomorphism class, in canonical labelling.
    inline std::vector<GraphRef> graphs_with_vertices(Category c, int n, int max_edges)
    {
        std::vector<std::vector<Edge>> edge_sets;
        std::vector<Edge> cur;
        detail::multisets_of_pairs(n, max_edges, 0, cur, edge_sets, c == Category::simplegraph);
        std::set<std::vector<std::pair<int, int>>> seen;
        std::vector<GraphRef> out;
        for (const auto& es : edge_sets)
        {
            Graph g(c);
            for (int v = 0; v < n; ++v) g.add_vertex("v" + std::to_string(v));
            for (std::size_t i = 0; i < es.size(); ++i) g.add_edge("e" + std::to_string(i), es[i].src, es[i].tgt);
            auto cf = canonicalize(make_graph(std::move(g)));
            if (seen.insert(cf.code).second) out.push_back(cf.graph);
        }
        return out;
    }

    /// Every graph with at most max_vertices vertices and max_edges edges, up to
    /// isomorphism, ordered by (vertices, edges, canonical code).
    inline std::vector<GraphRef> all_graphs(Category c, int max_vertices, int max_edges)
    {
        std::vector<GraphRef> out;
        for (int n = 0; n <= max_vertices; ++n)
        {
            auto layer = graphs_with_vertices(c, n, n == 0 ? 0 : max_edges);
            std::stable_sort(layer.begin(), layer.end(), [](const GraphRef& a, const GraphRef& b) { return a->num_edges() < b->num_edges(); });
            out.insert(out.end(), layer.begin(), layer.end());
        }
        return out;
    }

    inline GraphRef random_graph(std::mt19937& rng, Category c, int max_vertices, int max_edges)
    {
        std::uniform_int_distribution<int> nv(0, max_vertices);
        int n = nv(rng);
        Graph g(c);
        for (int v = 0; v < n; ++v) g.add_vertex("v" + std::to_string(v));
        if (n == 0) return make_graph(std::move(g));
        std::uniform_int_distribution<int> ne(0, max_edges);
        std::uniform_int_distribution<int> pick(0, n - 1);
        int m = ne(rng);
        std::set<Edge> present;
        for (int i = 0; i < m; ++i)
        {
            Edge e{pick(rng), pick(rng)};
            if (c == Category::simplegraph && !present.insert(e).second) continue;
            g.add_edge("e" + std::to_string(g.num_edges()), e.src, e.tgt);
        }
        return make_graph(std::move(g));
    }

}

#endif
