#ifndef NLRW_GRAPH_HPP
#define NLRW_GRAPH_HPP

// Objects and morphisms of Graph (directed multigraphs) and SGraph (directed
// simple graphs). Vertices and edges are addressed by index; the string ids
// are opaque labels carried along for display and serialization.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nlrw
{

    enum class Category
    {
        multigraph,
        simplegraph
    };

    inline std::string_view to_string(Category c)
    {
        return c == Category::multigraph ? "multigraph" : "simplegraph";
    }

    /// Base class of every error raised by the library.
    class error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    inline Category parse_category(std::string_view s)
    {
        if (s == "multigraph" || s == "graph" || s == "Graph") return Category::multigraph;
        if (s == "simplegraph" || s == "sgraph" || s == "SGraph") return Category::simplegraph;
        throw error("unknown category '" + std::string(s) + "'");
    }

    class invalid_graph : public error
    {
    public:
        using error::error;
    };

    class invalid_morphism : public error
    {
    public:
        using error::error;
    };

    class category_mismatch : public error
    {
    public:
        using error::error;
    };

    class not_composable : public error
    {
    public:
        using error::error;
    };

    class not_regular_mono : public error
    {
    public:
        using error::error;
    };

    struct Edge
    {
        int src = 0;
        int tgt = 0;

        friend bool operator==(const Edge&, const Edge&) = default;
        friend auto operator<=>(const Edge&, const Edge&) = default;
    };

    /// A finite directed graph tagged with its ambient category.
    ///
    /// In the simplegraph category the incidence map must be injective: no two
    /// edges share the same ordered endpoint pair. Self-loops are allowed in both.
    class Graph
    {
    public:

        Graph() = default;
        explicit Graph(Category c)
            : m_category(c)
        {
        }

        Graph(Category c, std::vector<std::string> vertex_ids, std::vector<std::string> edge_ids, std::vector<Edge> edges)
            : m_category(c)
            , m_vertex_ids(std::move(vertex_ids))
            , m_edge_ids(std::move(edge_ids))
            , m_edges(std::move(edges))
        {
            validate();
        }

        Category category() const noexcept { return m_category; }
        bool is_simple() const noexcept { return m_category == Category::simplegraph; }

        int num_vertices() const noexcept { return static_cast<int>(m_vertex_ids.size()); }
        int num_edges() const noexcept { return static_cast<int>(m_edges.size()); }
        bool empty() const noexcept { return m_vertex_ids.empty(); }

        const std::vector<std::string>& vertex_ids() const noexcept { return m_vertex_ids; }
        const std::vector<std::string>& edge_ids() const noexcept { return m_edge_ids; }
        const std::vector<Edge>& edges() const noexcept { return m_edges; }

        const std::string& vertex_id(int v) const { return m_vertex_ids.at(static_cast<std::size_t>(v)); }
        const std::string& edge_id(int e) const { return m_edge_ids.at(static_cast<std::size_t>(e)); }
        const Edge& edge(int e) const { return m_edges.at(static_cast<std::size_t>(e)); }
        int src(int e) const { return edge(e).src; }
        int tgt(int e) const { return edge(e).tgt; }

        int vertex_index(std::string_view id) const
        {
            for (int i = 0; i < num_vertices(); ++i)
            {
                if (m_vertex_ids[static_cast<std::size_t>(i)] == id) return i;
            }
            return -1;
        }

        int edge_index(std::string_view id) const
        {
            for (int i = 0; i < num_edges(); ++i)
            {
                if (m_edge_ids[static_cast<std::size_t>(i)] == id) return i;
            }
            return -1;
        }

        /// Edges running from u to v, in index order.
        std::vector<int> edges_between(int u, int v) const
        {
            std::vector<int> out;
            for (int e = 0; e < num_edges(); ++e)
            {
                if (m_edges[static_cast<std::size_t>(e)].src == u && m_edges[static_cast<std::size_t>(e)].tgt == v)
                {
                    out.push_back(e);
                }
            }
            return out;
        }

        int add_vertex(std::string id)
        {
            m_vertex_ids.push_back(std::move(id));
            return num_vertices() - 1;
        }

        int add_edge(std::string id, int s, int t)
        {
            m_edge_ids.push_back(std::move(id));
            m_edges.push_back({s, t});
            return num_edges() - 1;
        }

        /// Same shape, new labels.
        Graph relabeled(std::vector<std::string> vertex_ids, std::vector<std::string> edge_ids) const
        {
            return Graph(m_category, std::move(vertex_ids), std::move(edge_ids), m_edges);
        }

        void validate() const
        {
            if (m_edge_ids.size() != m_edges.size())
            {
                throw invalid_graph("edge id list and incidence list differ in length");
            }
            std::set<std::string_view> seen;
            for (const auto& v : m_vertex_ids)
            {
                if (!seen.insert(v).second) throw invalid_graph("duplicate vertex id '" + v + "'");
            }
            seen.clear();
            for (const auto& e : m_edge_ids)
            {
                if (!seen.insert(e).second) throw invalid_graph("duplicate edge id '" + e + "'");
            }
            std::set<Edge> pairs;
            for (std::size_t i = 0; i < m_edges.size(); ++i)
            {
                const auto& e = m_edges[i];
                if (e.src < 0 || e.src >= num_vertices() || e.tgt < 0 || e.tgt >= num_vertices())
                {
                    throw invalid_graph("edge '" + m_edge_ids[i] + "' has an endpoint outside the vertex set");
                }
                if (is_simple() && !pairs.insert(e).second)
                {
                    throw invalid_graph(
                        "simple graph has two edges from '" + vertex_id(e.src) + "' to '" + vertex_id(e.tgt) + "'"
                    );
                }
            }
        }

        friend bool operator==(const Graph&, const Graph&) = default;

    private:

        Category m_category = Category::multigraph;
        std::vector<std::string> m_vertex_ids;
        std::vector<std::string> m_edge_ids;
        std::vector<Edge> m_edges;
    };

    using GraphRef = std::shared_ptr<const Graph>;

    inline GraphRef make_graph(Graph g)
    {
        g.validate();
        return std::make_shared<const Graph>(std::move(g));
    }

    inline bool same_object(const GraphRef& a, const GraphRef& b)
    {
        return a == b || (a && b && *a == *b);
    }

    /// A vertex map plus an edge map between two graphs of the same category.
    struct Morphism
    {
        GraphRef dom;
        GraphRef cod;
        std::vector<int> v;
        std::vector<int> e;

        int vertex(int x) const { return v.at(static_cast<std::size_t>(x)); }
        int edge(int x) const { return e.at(static_cast<std::size_t>(x)); }

        friend bool operator==(const Morphism& a, const Morphism& b)
        {
            return a.v == b.v && a.e == b.e && same_object(a.dom, b.dom) && same_object(a.cod, b.cod);
        }
    };

    /// Whether the maps are total, land in the codomain and commute with incidence.
    inline bool is_valid(const Morphism& f)
    {
        if (!f.dom || !f.cod) return false;
        const Graph& A = *f.dom;
        const Graph& B = *f.cod;
        if (A.category() != B.category()) return false;
        if (static_cast<int>(f.v.size()) != A.num_vertices() || static_cast<int>(f.e.size()) != A.num_edges())
        {
            return false;
        }
        for (int x : f.v)
        {
            if (x < 0 || x >= B.num_vertices()) return false;
        }
        for (int i = 0; i < A.num_edges(); ++i)
        {
            int y = f.e[static_cast<std::size_t>(i)];
            if (y < 0 || y >= B.num_edges()) return false;
            if (B.src(y) != f.vertex(A.src(i)) || B.tgt(y) != f.vertex(A.tgt(i))) return false;
        }
        return true;
    }

    inline Morphism make_morphism(GraphRef dom, GraphRef cod, std::vector<int> v, std::vector<int> e)
    {
        Morphism f{std::move(dom), std::move(cod), std::move(v), std::move(e)};
        if (f.dom && f.cod && f.dom->category() != f.cod->category())
        {
            throw category_mismatch("morphism between objects of different categories");
        }
        if (!is_valid(f)) throw invalid_morphism("maps do not define a graph morphism");
        return f;
    }

    /// In a simple graph the edge map is determined by the vertex map.
    inline Morphism make_morphism_from_vertices(GraphRef dom, GraphRef cod, std::vector<int> v)
    {
        if (!dom->is_simple()) throw invalid_morphism("edge map can only be inferred for simple graphs");
        std::vector<int> e;
        e.reserve(static_cast<std::size_t>(dom->num_edges()));
        for (const auto& ed : dom->edges())
        {
            auto tgts = cod->edges_between(v.at(static_cast<std::size_t>(ed.src)), v.at(static_cast<std::size_t>(ed.tgt)));
            if (tgts.empty()) throw invalid_morphism("vertex map does not preserve an edge");
            e.push_back(tgts.front());
        }
        return make_morphism(std::move(dom), std::move(cod), std::move(v), std::move(e));
    }

    inline Morphism identity(const GraphRef& X)
    {
        std::vector<int> v(static_cast<std::size_t>(X->num_vertices()));
        std::vector<int> e(static_cast<std::size_t>(X->num_edges()));
        std::iota(v.begin(), v.end(), 0);
        std::iota(e.begin(), e.end(), 0);
        return Morphism{X, X, std::move(v), std::move(e)};
    }

    inline void require_same_category(const Graph& a, const Graph& b)
    {
        if (a.category() != b.category())
        {
            throw category_mismatch(
                "objects live in different categories (" + std::string(to_string(a.category())) + " vs "
                + std::string(to_string(b.category())) + ")"
            );
        }
    }

    /// g after f.
    inline Morphism compose(const Morphism& g, const Morphism& f)
    {
        require_same_category(*f.cod, *g.dom);
        if (!same_object(f.cod, g.dom)) throw not_composable("codomain of f is not the domain of g");
        Morphism h{f.dom, g.cod, {}, {}};
        h.v.reserve(f.v.size());
        h.e.reserve(f.e.size());
        for (int x : f.v) h.v.push_back(g.vertex(x));
        for (int x : f.e) h.e.push_back(g.edge(x));
        return h;
    }

    template <typename... Rest>
    Morphism compose(const Morphism& h, const Morphism& g, const Rest&... rest)
    {
        return compose(h, compose(g, rest...));
    }

    namespace detail
    {
        inline bool injective(const std::vector<int>& m)
        {
            std::set<int> s(m.begin(), m.end());
            return s.size() == m.size();
        }

        inline bool surjective(const std::vector<int>& m, int n)
        {
            std::vector<char> hit(static_cast<std::size_t>(n), 0);
            for (int x : m) hit[static_cast<std::size_t>(x)] = 1;
            return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
        }
    }

    inline bool is_mono(const Morphism& f)
    {
        if (f.dom->is_simple()) return detail::injective(f.v);
        return detail::injective(f.v) && detail::injective(f.e);
    }

    inline bool is_epi(const Morphism& f)
    {
        if (f.dom->is_simple()) return detail::surjective(f.v, f.cod->num_vertices());
        return detail::surjective(f.v, f.cod->num_vertices()) && detail::surjective(f.e, f.cod->num_edges());
    }

    inline bool is_iso(const Morphism& f)
    {
        return detail::injective(f.v) && detail::injective(f.e) && detail::surjective(f.v, f.cod->num_vertices())
               && detail::surjective(f.e, f.cod->num_edges());
    }

    /// All monos of Graph are regular; in SGraph the regular ones are the
    /// edge-reflecting monos.
    inline bool is_regular_mono(const Morphism& f)
    {
        if (!is_mono(f)) return false;
        if (!f.dom->is_simple()) return true;
        const Graph& A = *f.dom;
        const Graph& B = *f.cod;
        std::vector<int> preimage(static_cast<std::size_t>(B.num_vertices()), -1);
        for (int x = 0; x < A.num_vertices(); ++x) preimage[static_cast<std::size_t>(f.vertex(x))] = x;
        std::set<Edge> dom_edges(A.edges().begin(), A.edges().end());
        for (const auto& ed : B.edges())
        {
            int u = preimage[static_cast<std::size_t>(ed.src)];
            int w = preimage[static_cast<std::size_t>(ed.tgt)];
            if (u >= 0 && w >= 0 && !dom_edges.count(Edge{u, w})) return false;
        }
        return true;
    }

    inline Morphism inverse(const Morphism& f)
    {
        if (!is_iso(f)) throw invalid_morphism("inverse of a non-isomorphism");
        Morphism g{f.cod, f.dom, std::vector<int>(f.v.size()), std::vector<int>(f.e.size())};
        for (std::size_t i = 0; i < f.v.size(); ++i) g.v[static_cast<std::size_t>(f.v[i])] = static_cast<int>(i);
        for (std::size_t i = 0; i < f.e.size(); ++i) g.e[static_cast<std::size_t>(f.e[i])] = static_cast<int>(i);
        return g;
    }

    /// Swap in an equal (or relabeled, same-shape) graph as domain or codomain.
    inline Morphism retarget(Morphism f, GraphRef dom, GraphRef cod)
    {
        f.dom = std::move(dom);
        f.cod = std::move(cod);
        return f;
    }

    struct Span
    {
        Morphism left;
        Morphism right;

        const GraphRef& apex() const { return left.dom; }
    };

    struct Cospan
    {
        Morphism left;
        Morphism right;

        const GraphRef& target() const { return left.cod; }
    };

    inline Span make_span(Morphism left, Morphism right)
    {
        require_same_category(*left.dom, *right.dom);
        if (!same_object(left.dom, right.dom)) throw not_composable("span legs do not share their domain");
        return Span{std::move(left), std::move(right)};
    }

    inline Cospan make_cospan(Morphism left, Morphism right)
    {
        require_same_category(*left.cod, *right.cod);
        if (!same_object(left.cod, right.cod)) throw not_composable("cospan legs do not share their codomain");
        return Cospan{std::move(left), std::move(right)};
    }

    /// A commuting-square candidate:
    ///
    ///     A --top--> B
    ///     |          |
    ///    left      right
    ///     v          v
    ///     C --bottom-> D
    struct Square
    {
        Morphism top;
        Morphism left;
        Morphism right;
        Morphism bottom;
    };

    inline bool commutes(const Square& s)
    {
        if (!same_object(s.top.dom, s.left.dom) || !same_object(s.top.cod, s.right.dom)
            || !same_object(s.left.cod, s.bottom.dom) || !same_object(s.right.cod, s.bottom.cod))
        {
            return false;
        }
        return compose(s.right, s.top).v == compose(s.bottom, s.left).v
               && compose(s.right, s.top).e == compose(s.bottom, s.left).e;
    }

    /// Fresh label derived from `base`, unique within `used`.
    inline std::string fresh_id(std::string base, std::set<std::string>& used)
    {
        while (used.count(base)) base += '\'';
        used.insert(base);
        return base;
    }

    /// Builder for graphs with string ids; handy in tests and fixtures.
    class GraphBuilder
    {
    public:

        explicit GraphBuilder(Category c)
            : m_graph(c)
        {
        }

        GraphBuilder& vertex(std::string id)
        {
            m_graph.add_vertex(std::move(id));
            return *this;
        }

        GraphBuilder& vertices(std::initializer_list<std::string> ids)
        {
            for (const auto& id : ids) m_graph.add_vertex(id);
            return *this;
        }

        GraphBuilder& edge(std::string id, std::string_view s, std::string_view t)
        {
            int si = m_graph.vertex_index(s);
            int ti = m_graph.vertex_index(t);
            if (si < 0 || ti < 0) throw invalid_graph("edge '" + id + "' references an unknown vertex");
            m_graph.add_edge(std::move(id), si, ti);
            return *this;
        }

        GraphRef build() const { return make_graph(m_graph); }

    private:

        Graph m_graph;
    };

    /// Morphism given by id-to-id maps; edges may be omitted for simple graphs.
    inline Morphism morphism_by_ids(
        const GraphRef& dom,
        const GraphRef& cod,
        const std::map<std::string, std::string>& vmap,
        const std::map<std::string, std::string>& emap = {}
    )
    {
        std::vector<int> v;
        for (const auto& id : dom->vertex_ids())
        {
            auto it = vmap.find(id);
            if (it == vmap.end()) throw invalid_morphism("vertex '" + id + "' is not mapped");
            int t = cod->vertex_index(it->second);
            if (t < 0) throw invalid_morphism("vertex '" + it->second + "' not in codomain");
            v.push_back(t);
        }
        if (dom->is_simple() && emap.empty()) return make_morphism_from_vertices(dom, cod, std::move(v));
        std::vector<int> e;
        for (const auto& id : dom->edge_ids())
        {
            auto it = emap.find(id);
            if (it == emap.end()) throw invalid_morphism("edge '" + id + "' is not mapped");
            int t = cod->edge_index(it->second);
            if (t < 0) throw invalid_morphism("edge '" + it->second + "' not in codomain");
            e.push_back(t);
        }
        return make_morphism(dom, cod, std::move(v), std::move(e));
    }

}

#endif
