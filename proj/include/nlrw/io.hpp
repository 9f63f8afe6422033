#ifndef NLRW_IO_HPP
#define NLRW_IO_HPP

// Line-based documents.
//
//   graph host                 rule clone                 diagram derivation
//   category multigraph        category multigraph        category multigraph
//   vertex a                   input                      object X
//   vertex b                   vertex v                   vertex a
//   edge x a b                 k                          morphism m I X
//   end                        vertex v1                  vertex v a
//                              vertex v2                  end
//                              output
//                              vertex v
//                              ki
//                              vertex v1 v
//                              vertex v2 v
//                              ko
//                              vertex v1 v
//                              vertex v2 v
//                              end
//
// '#' starts a comment. Serialization writes elements in index order, so
// parsing a serialized document gives back the same graphs.

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "graph.hpp"
#include "concurrent.hpp"
#include "rewrite.hpp"

namespace nlrw
{

    class parse_error : public error
    {
    public:
        using error::error;
    };

    /// Named objects and morphisms between them.
    struct Diagram
    {
        struct Arrow
        {
            std::string name;
            std::string dom;
            std::string cod;
            Morphism f;
        };

        std::string title;
        std::vector<std::pair<std::string, GraphRef>> objects;
        std::vector<Arrow> arrows;

        const GraphRef* object(std::string_view name) const
        {
            for (const auto& [n, g] : objects)
            {
                if (n == name) return &g;
            }
            return nullptr;
        }

        void add_object(std::string name, GraphRef g)
        {
            if (object(name)) throw error("diagram object '" + name + "' defined twice");
            objects.emplace_back(std::move(name), std::move(g));
        }

        void add_arrow(std::string name, std::string dom, std::string cod, Morphism f)
        {
            auto d = object(dom);
            auto c = object(cod);
            if (!d || !c || !same_object(*d, f.dom) || !same_object(*c, f.cod)) throw error("arrow '" + name + "' does not fit its objects");
            arrows.push_back(Arrow{std::move(name), std::move(dom), std::move(cod), std::move(f)});
        }
    };

    namespace io_detail
    {
        struct Line
        {
            int number;
            std::vector<std::string> tokens;
        };

        inline std::vector<Line> tokenize(std::string_view text)
        {
            std::vector<Line> out;
            std::istringstream in{std::string(text)};
            std::string raw;
            int n = 0;
            while (std::getline(in, raw))
            {
                ++n;
                if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
                std::istringstream ls(raw);
                Line line{n, {}};
                for (std::string t; ls >> t;) line.tokens.push_back(t);
                if (!line.tokens.empty()) out.push_back(std::move(line));
            }
            return out;
        }

        [[noreturn]] inline void fail(const Line& l, const std::string& what)
        {
            throw parse_error("line " + std::to_string(l.number) + ": " + what);
        }

        inline void arity(const Line& l, std::size_t n)
        {
            if (l.tokens.size() != n) fail(l, "'" + l.tokens[0] + "' expects " + std::to_string(n - 1) + " argument(s)");
        }

        /// A top-level block: header, category, then body lines up to 'end'.
        struct Block
        {
            Line header;
            Category category;
            std::vector<Line> body;
        };

        inline std::vector<Block> blocks(std::string_view text)
        {
            auto lines = tokenize(text);
            std::vector<Block> out;
            std::size_t i = 0;
            while (i < lines.size())
            {
                const auto& h = lines[i];
                if (h.tokens[0] != "graph" && h.tokens[0] != "rule" && h.tokens[0] != "diagram") fail(h, "expected 'graph', 'rule' or 'diagram'");
                if (h.tokens.size() > 2) fail(h, "block header takes at most a name");
                if (++i >= lines.size() || lines[i].tokens[0] != "category") fail(h, "block must start with a 'category' line");
                arity(lines[i], 2);
                Category c;
                try
                {
                    c = parse_category(lines[i].tokens[1]);
                }
                catch (const error& e)
                {
                    fail(lines[i], e.what());
                }
                Block b{h, c, {}};
                for (++i; i < lines.size() && lines[i].tokens[0] != "end"; ++i) b.body.push_back(lines[i]);
                if (i >= lines.size()) fail(h, "block is not closed by 'end'");
                ++i;
                out.push_back(std::move(b));
            }
            return out;
        }

        struct GraphSection
        {
            Graph g;
            const Line* at = nullptr;
        };

        inline void add_graph_line(GraphSection& s, const Line& l)
        {
            if (l.tokens[0] == "vertex")
            {
                arity(l, 2);
                if (s.g.vertex_index(l.tokens[1]) >= 0) fail(l, "duplicate vertex id '" + l.tokens[1] + "'");
                s.g.add_vertex(l.tokens[1]);
            }
            else if (l.tokens[0] == "edge")
            {
                arity(l, 4);
                int a = s.g.vertex_index(l.tokens[2]);
                int b = s.g.vertex_index(l.tokens[3]);
                if (a < 0 || b < 0) fail(l, "edge '" + l.tokens[1] + "' references an unknown vertex");
                if (s.g.edge_index(l.tokens[1]) >= 0) fail(l, "duplicate edge id '" + l.tokens[1] + "'");
                s.g.add_edge(l.tokens[1], a, b);
            }
            else
            {
                fail(l, "expected 'vertex' or 'edge', got '" + l.tokens[0] + "'");
            }
        }

        inline GraphRef finish(const GraphSection& s, const Line& at)
        {
            try
            {
                return make_graph(s.g);
            }
            catch (const invalid_graph& e)
            {
                fail(s.at ? *s.at : at, e.what());
            }
        }

        struct MapSection
        {
            std::map<std::string, std::string> v;
            std::map<std::string, std::string> e;
        };

        inline void add_map_line(MapSection& s, const Line& l)
        {
            arity(l, 3);
            auto& m = l.tokens[0] == "vertex" ? s.v : l.tokens[0] == "edge" ? s.e : (fail(l, "expected 'vertex' or 'edge'"), s.v);
            if (!m.emplace(l.tokens[1], l.tokens[2]).second) fail(l, "'" + l.tokens[1] + "' mapped twice");
        }

        inline Morphism build_map(const GraphRef& dom, const GraphRef& cod, const MapSection& s, const Line& at)
        {
            try
            {
                for (const auto& [k, _] : s.v)
                {
                    if (dom->vertex_index(k) < 0) throw invalid_morphism("vertex '" + k + "' is not in the domain");
                }
                for (const auto& [k, _] : s.e)
                {
                    if (dom->edge_index(k) < 0) throw invalid_morphism("edge '" + k + "' is not in the domain");
                }
                auto f = morphism_by_ids(dom, cod, s.v, s.e);
                if (!is_valid(f)) throw invalid_morphism("map does not preserve incidence");
                return f;
            }
            catch (const invalid_morphism& e)
            {
                fail(at, e.what());
            }
        }

        inline void write_graph_body(std::ostream& os, const Graph& g)
        {
            for (const auto& v : g.vertex_ids()) os << "vertex " << v << "\n";
            for (int e = 0; e < g.num_edges(); ++e) os << "edge " << g.edge_id(e) << " " << g.vertex_id(g.src(e)) << " " << g.vertex_id(g.tgt(e)) << "\n";
        }

        inline void write_map_body(std::ostream& os, const Morphism& f)
        {
            for (int v = 0; v < f.dom->num_vertices(); ++v) os << "vertex " << f.dom->vertex_id(v) << " " << f.cod->vertex_id(f.vertex(v)) << "\n";
            for (int e = 0; e < f.dom->num_edges(); ++e) os << "edge " << f.dom->edge_id(e) << " " << f.cod->edge_id(f.edge(e)) << "\n";
        }

        inline void header(std::ostream& os, std::string_view kind, std::string_view name, Category c)
        {
            os << kind;
            if (!name.empty()) os << " " << name;
            os << "\ncategory " << to_string(c) << "\n";
        }

        inline const Block& single(const std::vector<Block>& bs, std::string_view kind)
        {
            if (bs.size() != 1) throw parse_error("expected exactly one " + std::string(kind) + " block, found " + std::to_string(bs.size()));
            if (bs[0].header.tokens[0] != kind) fail(bs[0].header, "expected a " + std::string(kind) + " block");
            return bs[0];
        }
    }

    // ---- graphs

    inline std::string serialize_graph(const Graph& g, std::string_view name = "")
    {
        std::ostringstream os;
        io_detail::header(os, "graph", name, g.category());
        io_detail::write_graph_body(os, g);
        os << "end\n";
        return os.str();
    }

    inline GraphRef parse_graph(std::string_view text)
    {
        const auto bs = io_detail::blocks(text);
        const auto& b = io_detail::single(bs, "graph");
        io_detail::GraphSection s{Graph(b.category), &b.header};
        for (const auto& l : b.body) io_detail::add_graph_line(s, l);
        return io_detail::finish(s, b.header);
    }

    // ---- rules

    inline std::string serialize_rule(const Rule& r)
    {
        std::ostringstream os;
        io_detail::header(os, "rule", r.name, r.category());
        os << "input\n";
        io_detail::write_graph_body(os, *r.I());
        os << "k\n";
        io_detail::write_graph_body(os, *r.K());
        os << "output\n";
        io_detail::write_graph_body(os, *r.O());
        os << "ki\n";
        io_detail::write_map_body(os, r.input_leg);
        os << "ko\n";
        io_detail::write_map_body(os, r.output_leg);
        os << "end\n";
        return os.str();
    }

    inline Rule parse_rule(std::string_view text)
    {
        using namespace io_detail;
        const auto bs = blocks(text);
        const auto& b = single(bs, "rule");
        std::map<std::string, GraphSection> graphs;
        std::map<std::string, MapSection> maps;
        std::map<std::string, const Line*> seen;
        std::string current;
        for (const auto& l : b.body)
        {
            const auto& t = l.tokens[0];
            if (t == "input" || t == "k" || t == "output" || t == "ki" || t == "ko")
            {
                arity(l, 1);
                if (!seen.emplace(t, &l).second) fail(l, "section '" + t + "' appears twice");
                current = t;
                if (t == "ki" || t == "ko") maps[t];
                else graphs[t] = GraphSection{Graph(b.category), &l};
                continue;
            }
            if (current.empty()) fail(l, "expected a section header (input, k, output, ki, ko)");
            if (current == "ki" || current == "ko") add_map_line(maps[current], l);
            else add_graph_line(graphs[current], l);
        }
        for (const char* s : {"input", "k", "output", "ki", "ko"})
        {
            if (!seen.count(s)) fail(b.header, std::string("rule has no '") + s + "' section");
        }
        auto I = finish(graphs["input"], b.header);
        auto K = finish(graphs["k"], b.header);
        auto O = finish(graphs["output"], b.header);
        auto ki = build_map(K, I, maps["ki"], *seen["ki"]);
        auto ko = build_map(K, O, maps["ko"], *seen["ko"]);
        std::string name = b.header.tokens.size() > 1 ? b.header.tokens[1] : "rule";
        return make_rule(name, ko, ki);
    }

    // ---- diagrams

    inline std::string serialize_diagram(const Diagram& d)
    {
        std::ostringstream os;
        Category c = d.objects.empty() ? Category::multigraph : d.objects.front().second->category();
        io_detail::header(os, "diagram", d.title, c);
        for (const auto& [name, g] : d.objects)
        {
            os << "object " << name << "\n";
            io_detail::write_graph_body(os, *g);
        }
        for (const auto& a : d.arrows)
        {
            os << "morphism " << a.name << " " << a.dom << " " << a.cod << "\n";
            io_detail::write_map_body(os, a.f);
        }
        os << "end\n";
        return os.str();
    }

    inline Diagram parse_diagram(std::string_view text)
    {
        using namespace io_detail;
        const auto bs = blocks(text);
        const auto& b = single(bs, "diagram");
        Diagram d;
        d.title = b.header.tokens.size() > 1 ? b.header.tokens[1] : "";
        std::vector<std::pair<std::string, GraphSection>> objects;
        struct PendingArrow
        {
            const Line* at;
            MapSection map;
        };
        std::vector<PendingArrow> arrows;
        for (const auto& l : b.body)
        {
            const auto& t = l.tokens[0];
            if (t == "object")
            {
                arity(l, 2);
                if (!arrows.empty()) fail(l, "objects must precede morphisms");
                objects.emplace_back(l.tokens[1], GraphSection{Graph(b.category), &l});
            }
            else if (t == "morphism")
            {
                arity(l, 4);
                arrows.push_back({&l, {}});
            }
            else if (!arrows.empty())
            {
                add_map_line(arrows.back().map, l);
            }
            else if (!objects.empty())
            {
                add_graph_line(objects.back().second, l);
            }
            else
            {
                fail(l, "expected 'object' or 'morphism'");
            }
        }
        for (const auto& [name, s] : objects)
        {
            if (d.object(name)) fail(*s.at, "object '" + name + "' defined twice");
            d.objects.emplace_back(name, finish(s, *s.at));
        }
        for (const auto& a : arrows)
        {
            const auto& tk = a.at->tokens;
            auto dom = d.object(tk[2]);
            auto cod = d.object(tk[3]);
            if (!dom || !cod) fail(*a.at, "morphism '" + tk[1] + "' refers to an unknown object");
            d.arrows.push_back(Diagram::Arrow{tk[1], tk[2], tk[3], build_map(*dom, *cod, a.map, *a.at)});
        }
        return d;
    }

    /// One cluster per object; morphisms drawn as dashed vertex traces.
    inline std::string to_dot(const Diagram& d)
    {
        auto node = [](std::size_t obj, int v) { return "o" + std::to_string(obj) + "v" + std::to_string(v); };
        auto quote = [](const std::string& s)
        {
            std::string out = "\"";
            for (char ch : s)
            {
                if (ch == '"' || ch == '\\') out += '\\';
                out += ch;
            }
            return out + "\"";
        };
        std::ostringstream os;
        os << "digraph " << quote(d.title.empty() ? "diagram" : d.title) << " {\n";
        os << "  compound=true;\n";
        for (std::size_t i = 0; i < d.objects.size(); ++i)
        {
            const auto& [name, g] = d.objects[i];
            os << "  subgraph cluster_" << i << " {\n";
            os << "    label=" << quote(name) << ";\n";
            if (g->empty()) os << "    " << node(i, -1) << " [shape=point, style=invis];\n";
            for (int v = 0; v < g->num_vertices(); ++v) os << "    " << node(i, v) << " [label=" << quote(g->vertex_id(v)) << "];\n";
            for (int e = 0; e < g->num_edges(); ++e)
            {
                os << "    " << node(i, g->src(e)) << " -> " << node(i, g->tgt(e)) << " [label=" << quote(g->edge_id(e)) << "];\n";
            }
            os << "  }\n";
        }
        auto index = [&](const std::string& n)
        {
            for (std::size_t i = 0; i < d.objects.size(); ++i)
            {
                if (d.objects[i].first == n) return i;
            }
            return d.objects.size();
        };
        for (const auto& a : d.arrows)
        {
            auto s = index(a.dom);
            auto t = index(a.cod);
            for (int v = 0; v < a.f.dom->num_vertices(); ++v)
            {
                os << "  " << node(s, v) << " -> " << node(t, a.f.vertex(v)) << " [style=dashed, color=gray, label=" << quote(a.name)
                   << ", constraint=false];\n";
            }
        }
        os << "}\n";
        return os.str();
    }

    // ---- diagrams of library results

    inline Diagram diagram_of(const DerivationDiagram& d)
    {
        Diagram out;
        out.title = std::string(to_string(d.semantics)) + "_" + d.rule.name;
        out.add_object("I", d.rule.I());
        out.add_object("K", d.rule.K());
        out.add_object("O", d.rule.O());
        out.add_object("X", d.host());
        out.add_object("Xbar", d.complement_object());
        out.add_object("Xres", d.result());
        out.add_arrow("i", "K", "I", d.rule.input_leg);
        out.add_arrow("o", "K", "O", d.rule.output_leg);
        out.add_arrow("match", "I", "X", d.match);
        out.add_arrow("k", "K", "Xbar", d.k);
        out.add_arrow("complement", "Xbar", "X", d.complement);
        out.add_arrow("comatch", "O", "Xres", d.comatch);
        out.add_arrow("result_leg", "Xbar", "Xres", d.result_leg);
        return out;
    }

    inline Diagram diagram_of(const Rule& r)
    {
        Diagram out;
        out.title = r.name;
        out.add_object("I", r.I());
        out.add_object("K", r.K());
        out.add_object("O", r.O());
        out.add_arrow("i", "K", "I", r.input_leg);
        out.add_arrow("o", "K", "O", r.output_leg);
        return out;
    }

    /// The composition diagram: both rules, the dependency and every
    /// intermediate object of the construction.
    inline Diagram diagram_of(const CompositeRule& c, const Rule& r2, const Rule& r1)
    {
        Diagram out;
        out.title = c.rule.name;
        auto arrow = [&](const char* name, const char* dom, const char* cod, const Morphism& f)
        {
            if (!f.dom) return;
            if (!out.object(dom)) out.add_object(dom, f.dom);
            if (!out.object(cod)) out.add_object(cod, f.cod);
            out.add_arrow(name, dom, cod, f);
        };
        const auto& w = c.witness;
        const bool sq = c.semantics == Semantics::sqpo;
        arrow("i1", "K1", "I1", r1.input_leg);
        arrow("o1", "K1", "O1", r1.output_leg);
        arrow("i2", "K2", "I2", r2.input_leg);
        arrow("o2", "K2", "O2", r2.output_leg);
        arrow("j2", "I2", "J21", w.j2);
        arrow("j1", "O1", "J21", w.j1);
        arrow("jbar1", "K1", "Kbar1", w.jbar1);
        arrow("obar1", "Kbar1", "J21", w.obar1);
        arrow("jbar2", "K2", "Kbar2", w.jbar2);
        arrow("ibar2", "Kbar2", "J21", w.ibar2);
        arrow("I1_to_I21", "I1", "I21", w.I1_to_I21);
        arrow("Kbar1_to_I21", "Kbar1", "I21", w.Kbar1_to_I21);
        arrow("O2_to_O21", "O2", "O21", w.O2_to_O21);
        arrow("Kbar2_to_O21", "Kbar2", "O21", w.Kbar2_to_O21);
        if (sq)
        {
            arrow("jbb1", "Kbar1", "Kbb1", w.jbb1);
            arrow("ibb1", "Kbb1", "I21bar", w.ibb1);
            arrow("iota21", "I21", "I21bar", w.iota21);
            arrow("J21_to_Jbar21", "J21", "Jbar21", w.J21_to_Jbar21);
            arrow("Kbb1_to_Jbar21", "Kbb1", "Jbar21", w.Kbb1_to_Jbar21);
            arrow("jbb2", "Kbar2", "Kbb2", w.jbb2);
            arrow("ibb2", "Kbb2", "Jbar21", w.ibb2);
            arrow("O21_to_Obar21", "O21", "Obar21", w.O21_to_Obar21);
            arrow("Kbb2_to_Obar21", "Kbb2", "Obar21", w.Kbb2_to_Obar21);
            arrow("K21_to_left", "K21", "Kbb1", w.K21_to_left);
            arrow("K21_to_right", "K21", "Kbb2", w.K21_to_right);
            arrow("i21", "K21", "I21bar", c.rule.input_leg);
            arrow("o21", "K21", "Obar21", c.rule.output_leg);
        }
        else
        {
            arrow("K21_to_left", "K21", "Kbar1", w.K21_to_left);
            arrow("K21_to_right", "K21", "Kbar2", w.K21_to_right);
            arrow("i21", "K21", "I21", c.rule.input_leg);
            arrow("o21", "K21", "O21", c.rule.output_leg);
        }
        return out;
    }

}

#endif
