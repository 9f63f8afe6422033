#ifndef NLRW_CLI_HPP
#define NLRW_CLI_HPP

// Command implementations behind tools/nlrw_cli. Each command reads its
// documents, writes to `out` and returns an exit code:
//   0 ok, 2 parse, 3 category mismatch, 4 bad selection, 5 property failure.

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nlrw.hpp"

namespace nlrw::cli
{

    enum Exit : int
    {
        ok = 0,
        other = 1,
        parse = 2,
        category = 3,
        selection = 4,
        property = 5,
    };

    class bad_selection : public error
    {
    public:
        using error::error;
    };

    enum class Format
    {
        text,
        dot
    };

    struct Options
    {
        std::vector<std::string> files;
        Semantics semantics = Semantics::sqpo;
        std::optional<Category> category;
        Format format = Format::text;
        unsigned jobs = 1;
        unsigned seed = 1;
        int max_size = 3;
        int samples = 100;
        std::optional<int> index;
        std::string oracle;  // verify-pushout | verify-pullback | verify-fpc
    };

    namespace detail
    {
        inline std::string read_file(const std::string& path)
        {
            std::ifstream in(path);
            if (!in) throw parse_error("cannot read '" + path + "'");
            std::ostringstream os;
            os << in.rdbuf();
            return os.str();
        }

        inline void check_category(const Options& o, Category c)
        {
            if (o.category && *o.category != c)
            {
                throw category_mismatch("document is " + std::string(to_string(c)) + " but --category is " + std::string(to_string(*o.category)));
            }
        }

        inline std::string where(const std::string& path, const parse_error& e)
        {
            return path + ": " + e.what();
        }

        inline GraphRef load_graph(const Options& o, const std::string& path)
        {
            try
            {
                auto g = parse_graph(read_file(path));
                check_category(o, g->category());
                return g;
            }
            catch (const parse_error& e)
            {
                throw parse_error(where(path, e));
            }
        }

        inline Rule load_rule(const Options& o, const std::string& path)
        {
            try
            {
                auto r = parse_rule(read_file(path));
                check_category(o, r.category());
                return r;
            }
            catch (const parse_error& e)
            {
                throw parse_error(where(path, e));
            }
        }

        inline Diagram load_diagram(const Options& o, const std::string& path)
        {
            try
            {
                auto d = parse_diagram(read_file(path));
                if (!d.objects.empty()) check_category(o, d.objects.front().second->category());
                return d;
            }
            catch (const parse_error& e)
            {
                throw parse_error(where(path, e));
            }
        }

        inline const Morphism& arrow(const Diagram& d, std::string_view name)
        {
            for (const auto& a : d.arrows)
            {
                if (a.name == name) return a.f;
            }
            throw bad_selection("diagram has no morphism named '" + std::string(name) + "'");
        }

        inline void require_files(const Options& o, std::size_t n, const char* usage)
        {
            if (o.files.size() != n) throw bad_selection(std::string("expected ") + usage);
        }

        inline std::string map_text(const Morphism& m)
        {
            std::ostringstream os;
            for (int x = 0; x < m.dom->num_vertices(); ++x) os << (x ? " " : "") << m.dom->vertex_id(x) << "->" << m.cod->vertex_id(m.vertex(x));
            if (m.dom->num_edges())
            {
                os << " |";
                for (int x = 0; x < m.dom->num_edges(); ++x) os << " " << m.dom->edge_id(x) << "->" << m.cod->edge_id(m.edge(x));
            }
            return os.str();
        }

        inline void emit(std::ostream& out, const Options& o, const Diagram& d)
        {
            out << (o.format == Format::dot ? to_dot(d) : serialize_diagram(d));
        }

        inline std::size_t pick(const Options& o, std::size_t count, const char* what)
        {
            if (!o.index) throw bad_selection(std::string("missing --index for ") + what);
            if (*o.index < 0 || static_cast<std::size_t>(*o.index) >= count)
            {
                throw bad_selection(std::string(what) + " index " + std::to_string(*o.index) + " out of range (" + std::to_string(count) + " available)");
            }
            return static_cast<std::size_t>(*o.index);
        }

        /// Indices selected by --index, or all of them.
        inline std::vector<std::size_t> selection(const Options& o, std::size_t count, const char* what)
        {
            if (o.index) return {pick(o, count, what)};
            std::vector<std::size_t> all(count);
            for (std::size_t i = 0; i < count; ++i) all[i] = i;
            return all;
        }

        inline std::vector<DerivationDiagram> derive_all(const Rule& r, const GraphRef& X, Semantics s)
        {
            std::vector<DerivationDiagram> out;
            if (s == Semantics::sqpo)
            {
                for (const auto& m : matches_sqpo(r, X)) out.push_back(derive_sqpo(X, r, m));
            }
            else
            {
                if (X->is_simple()) throw not_rm_adhesive("DPO needs an rm-adhesive category; simple graphs are not");
                for (const auto& m : matches_dpo(r, X)) out.push_back(derive_dpo(X, r, m));
            }
            return out;
        }

        struct TwoStep
        {
            DerivationDiagram first;
            DerivationDiagram second;
        };

        inline std::vector<TwoStep> two_steps(const Rule& r2, const Rule& r1, const GraphRef& X0, Semantics s)
        {
            std::vector<TwoStep> out;
            for (auto& d1 : derive_all(r1, X0, s))
            {
                for (auto& d2 : derive_all(r2, d1.result(), s)) out.push_back(TwoStep{d1, std::move(d2)});
            }
            return out;
        }

        struct CompositeMatch
        {
            std::size_t k;
            Morphism m;
            POCElement poc;
        };

        inline std::vector<CompositeMatch> composite_matches(const CompositeCatalog& cat, const GraphRef& X0)
        {
            std::vector<CompositeMatch> out;
            for (std::size_t k = 0; k < cat.composites.size(); ++k)
            {
                const auto& r = cat.composites[k].rule;
                if (cat.semantics == Semantics::sqpo)
                {
                    for (auto& m : matches_sqpo(r, X0)) out.push_back({k, std::move(m.m), {}});
                }
                else
                {
                    for (auto& m : matches_dpo(r, X0)) out.push_back({k, std::move(m.m), std::move(m.poc)});
                }
            }
            return out;
        }
    }

    // ---- rewriting

    inline int cmd_matches(const Options& o, std::ostream& out)
    {
        detail::require_files(o, 2, "RULE HOST");
        auto r = detail::load_rule(o, o.files[0]);
        auto X = detail::load_graph(o, o.files[1]);
        require_same_category(*r.I(), *X);
        if (o.semantics == Semantics::sqpo)
        {
            auto ms = matches_sqpo(r, X);
            out << "# " << ms.size() << " sqpo matches\n";
            for (std::size_t i = 0; i < ms.size(); ++i) out << "match " << i << ": " << detail::map_text(ms[i].m) << "\n";
        }
        else
        {
            if (X->is_simple()) throw not_rm_adhesive("DPO needs an rm-adhesive category; simple graphs are not");
            auto ms = matches_dpo(r, X);
            out << "# " << ms.size() << " dpo matches\n";
            for (std::size_t i = 0; i < ms.size(); ++i)
            {
                out << "match " << i << ": " << detail::map_text(ms[i].m) << " ; complement " << serialize_compact(*ms[i].poc.object()) << " ; d "
                    << detail::map_text(ms[i].poc.d) << "\n";
            }
        }
        return ok;
    }

    inline int cmd_apply(const Options& o, std::ostream& out)
    {
        detail::require_files(o, 2, "RULE HOST");
        auto r = detail::load_rule(o, o.files[0]);
        auto X = detail::load_graph(o, o.files[1]);
        require_same_category(*r.I(), *X);
        auto ds = detail::derive_all(r, X, o.semantics);
        const auto& d = ds[detail::pick(o, ds.size(), "match")];
        if (o.format == Format::dot)
        {
            out << to_dot(diagram_of(d));
            return ok;
        }
        out << serialize_graph(*d.result(), "result");
        out << serialize_diagram(diagram_of(d));
        return ok;
    }

    // ---- composition

    inline int cmd_compose(const Options& o, std::ostream& out)
    {
        detail::require_files(o, 2, "RULE1 RULE2");
        auto r1 = detail::load_rule(o, o.files[0]);
        auto r2 = detail::load_rule(o, o.files[1]);
        require_same_category(*r1.O(), *r2.I());
        auto cat = make_catalog(r2, r1, o.semantics);
        out << "# " << cat.composites.size() << " " << to_string(o.semantics) << " rule matches\n";
        for (auto k : detail::selection(o, cat.composites.size(), "rule match"))
        {
            const auto& c = cat.composites[k];
            if (o.format == Format::dot)
            {
                out << to_dot(diagram_of(c, r2, r1));
                continue;
            }
            out << "# rule match " << k << "\n";
            auto named = c.rule;
            named.name = r2.name + "_after_" + r1.name + "_" + std::to_string(k);
            out << serialize_rule(named);
            auto witness = diagram_of(c, r2, r1);
            witness.title = named.name + "_witness";
            out << serialize_diagram(witness);
        }
        return ok;
    }

    inline int cmd_synthesize(const Options& o, std::ostream& out)
    {
        detail::require_files(o, 3, "RULE1 RULE2 HOST");
        auto r1 = detail::load_rule(o, o.files[0]);
        auto r2 = detail::load_rule(o, o.files[1]);
        auto X = detail::load_graph(o, o.files[2]);
        require_same_category(*r1.I(), *X);
        auto steps = detail::two_steps(r2, r1, X, o.semantics);
        out << "# " << steps.size() << " two-step derivations\n";
        int failed = 0;
        for (auto i : detail::selection(o, steps.size(), "two-step derivation"))
        {
            const auto& t = steps[i];
            out << "two-step " << i << ": m1 " << detail::map_text(t.first.match) << " ; m2 " << detail::map_text(t.second.match) << "\n";
            try
            {
                Rule composite;
                Morphism m21;
                GraphRef result;
                if (o.semantics == Semantics::sqpo)
                {
                    auto s = synthesize_sqpo(t.first, t.second);
                    composite = s.composite.rule;
                    m21 = s.m21.m;
                    result = s.derivation.result();
                }
                else
                {
                    auto s = synthesize_dpo(t.first, t.second);
                    composite = s.composite.rule;
                    m21 = s.m21.m;
                    result = s.derivation.result();
                }
                composite.name = "synthesized_" + std::to_string(i);
                out << serialize_rule(composite);
                out << "m21 " << detail::map_text(m21) << "\n";
                out << "result " << serialize_compact(*result) << " iso to X2: yes\n";
            }
            catch (const theorem_failure& e)
            {
                ++failed;
                out << "FAIL " << e.what() << "\n";
            }
        }
        return failed ? property : ok;
    }

    inline int cmd_analyze(const Options& o, std::ostream& out)
    {
        detail::require_files(o, 3, "RULE1 RULE2 HOST");
        auto r1 = detail::load_rule(o, o.files[0]);
        auto r2 = detail::load_rule(o, o.files[1]);
        auto X = detail::load_graph(o, o.files[2]);
        require_same_category(*r1.I(), *X);
        if (o.semantics == Semantics::dpo && X->is_simple()) throw not_rm_adhesive("DPO needs an rm-adhesive category; simple graphs are not");
        auto cat = make_catalog(r2, r1, o.semantics);
        auto comp = detail::composite_matches(cat, X);
        out << "# " << comp.size() << " composite matches\n";
        int failed = 0;
        for (auto i : detail::selection(o, comp.size(), "composite match"))
        {
            const auto& c = comp[i];
            out << "composite " << i << ": rule match " << c.k << " ; m21 " << detail::map_text(c.m) << "\n";
            try
            {
                auto a = o.semantics == Semantics::sqpo ? analyze_sqpo(r2, cat.composites[c.k], r1, X, SqPOMatch{c.m})
                                                        : analyze_dpo(r2, cat.composites[c.k], r1, X, DPOMatch{c.m, c.poc});
                out << "m1 " << detail::map_text(a.first.match) << "\n";
                out << "X1 " << serialize_compact(*a.first.result()) << "\n";
                out << "m2 " << detail::map_text(a.second.match) << "\n";
                out << "X2 " << serialize_compact(*a.second.result()) << "\n";
            }
            catch (const theorem_failure& e)
            {
                ++failed;
                out << "FAIL " << e.what() << "\n";
            }
        }
        return failed ? property : ok;
    }

    inline int cmd_check_compat(const Options& o, std::ostream& out)
    {
        if (o.files.size() < 2) throw bad_selection("expected RULE1 RULE2 [HOST...]");
        auto r1 = detail::load_rule(o, o.files[0]);
        auto r2 = detail::load_rule(o, o.files[1]);
        std::vector<GraphRef> hosts;
        for (std::size_t i = 2; i < o.files.size(); ++i) hosts.push_back(detail::load_graph(o, o.files[i]));
        if (hosts.empty()) hosts = all_graphs(r1.category(), o.max_size, o.max_size);
        auto cat = make_catalog(r2, r1, o.semantics);
        int failed = 0;
        for (const auto& X : hosts)
        {
            require_same_category(*r1.I(), *X);
            auto rep = compatibility_check(cat, X, o.jobs);
            out << (rep.passed() ? "PASS " : "FAIL ") << serialize_compact(*X) << " two-step=" << rep.two_step.size()
                << " composite=" << rep.composite.size() << "\n";
            if (rep.passed()) continue;
            ++failed;
            for (std::size_t i = 0; i < rep.two_step.size(); ++i) out << "  two-step " << i << ": " << rep.two_step[i] << "\n";
            for (std::size_t i = 0; i < rep.composite.size(); ++i) out << "  composite " << i << ": " << rep.composite[i] << "\n";
            for (const auto& f : rep.failures) out << "  failure: " << f << "\n";
        }
        out << "# " << hosts.size() - static_cast<std::size_t>(failed) << "/" << hosts.size() << " hosts compatible\n";
        return failed ? property : ok;
    }

    // ---- constructions

    inline int cmd_multisum(const Options& o, std::ostream& out)
    {
        detail::require_files(o, 2, "GRAPH_A GRAPH_B");
        auto A = detail::load_graph(o, o.files[0]);
        auto B = detail::load_graph(o, o.files[1]);
        require_same_category(*A, *B);
        auto sums = multisum(A, B);
        out << "# " << sums.size() << " multi-sum elements\n";
        for (auto i : detail::selection(o, sums.size(), "multi-sum element"))
        {
            Diagram d;
            d.title = "multisum_" + std::to_string(i);
            d.add_object("A", A);
            d.add_object("B", B);
            d.add_object("J", sums[i].object());
            d.add_arrow("left", "A", "J", sums[i].left());
            d.add_arrow("right", "B", "J", sums[i].right());
            detail::emit(out, o, d);
        }
        return ok;
    }

    inline int cmd_mpoc(const Options& o, std::ostream& out)
    {
        detail::require_files(o, 1, "DIAGRAM with morphisms f: A->B and b: B->D");
        auto dia = detail::load_diagram(o, o.files[0]);
        const auto& f = detail::arrow(dia, "f");
        const auto& b = detail::arrow(dia, "b");
        if (!same_object(f.cod, b.dom)) throw bad_selection("f and b are not composable");
        if (!is_regular_mono(b)) throw bad_selection("b must be a regular mono");
        auto pocs = mpoc(f, b);
        out << "# " << pocs.size() << " pushout complements\n";
        for (auto i : detail::selection(o, pocs.size(), "POC element"))
        {
            Diagram d;
            d.title = "poc_" + std::to_string(i);
            d.add_object("A", f.dom);
            d.add_object("B", f.cod);
            d.add_object("D", b.cod);
            d.add_object("P", pocs[i].object());
            d.add_arrow("f", "A", "B", f);
            d.add_arrow("b", "B", "D", b);
            d.add_arrow("a", "A", "P", pocs[i].a);
            d.add_arrow("d", "P", "D", pocs[i].d);
            detail::emit(out, o, d);
        }
        return ok;
    }

    inline int cmd_fpa(const Options& o, std::ostream& out)
    {
        detail::require_files(o, 1, "DIAGRAM with morphisms alpha: A->B and a: A->C");
        auto dia = detail::load_diagram(o, o.files[0]);
        const auto& alpha = detail::arrow(dia, "alpha");
        const auto& a = detail::arrow(dia, "a");
        if (!same_object(alpha.dom, a.dom)) throw bad_selection("alpha and a must share their domain");
        if (!is_regular_mono(alpha)) throw bad_selection("alpha must be a regular mono");
        auto sq = augmentation_square(alpha, a);
        auto fpas = fpa_enumerate(sq);
        out << "# " << fpas.size() << " FPA elements\n";
        for (auto i : detail::selection(o, fpas.size(), "FPA element"))
        {
            Diagram d;
            d.title = "fpa_" + std::to_string(i);
            d.add_object("A", alpha.dom);
            d.add_object("B", alpha.cod);
            d.add_object("C", a.cod);
            d.add_object("D", sq.a_bar.cod);
            d.add_object("E", fpas[i].e.cod);
            d.add_object("F", fpas[i].n.cod);
            d.add_arrow("alpha", "A", "B", alpha);
            d.add_arrow("a", "A", "C", a);
            d.add_arrow("alpha_bar", "C", "D", sq.alpha_bar);
            d.add_arrow("a_bar", "B", "D", sq.a_bar);
            d.add_arrow("e", "D", "E", fpas[i].e);
            d.add_arrow("n", "B", "F", fpas[i].n);
            d.add_arrow("f", "F", "E", fpas[i].f);
            detail::emit(out, o, d);
        }
        return ok;
    }

    inline int cmd_fpc(const Options& o, std::ostream& out)
    {
        detail::require_files(o, 1, "DIAGRAM with morphisms f: A->B and m: B->D");
        auto dia = detail::load_diagram(o, o.files[0]);
        const auto& f = detail::arrow(dia, "f");
        const auto& m = detail::arrow(dia, "m");
        if (!same_object(f.cod, m.dom)) throw bad_selection("f and m are not composable");
        if (!is_regular_mono(m)) throw bad_selection("m must be a regular mono");
        auto r = fpc(f, m);
        Diagram d;
        d.title = "fpc";
        d.add_object("A", f.dom);
        d.add_object("B", f.cod);
        d.add_object("D", m.cod);
        d.add_object("F", r.object);
        d.add_arrow("f", "A", "B", f);
        d.add_arrow("m", "B", "D", m);
        d.add_arrow("n", "A", "F", r.n);
        d.add_arrow("g", "F", "D", r.g);
        detail::emit(out, o, d);
        return ok;
    }

    // ---- oracles

    namespace detail
    {
        inline bool oracle_on_diagram(const Options& o, const Diagram& dia)
        {
            const auto& f = arrow(dia, "f");
            const auto& g = arrow(dia, o.oracle == "verify-fpc" ? "m" : "g");
            if (o.oracle == "verify-pushout")
            {
                const auto& p = arrow(dia, "p");
                const auto& q = arrow(dia, "q");
                return verify_pushout(Span{f, g}, Cospan{p, q});
            }
            if (o.oracle == "verify-pullback")
            {
                const auto& p = arrow(dia, "p");
                const auto& q = arrow(dia, "q");
                return verify_pullback(Cospan{f, g}, Span{p, q});
            }
            return verify_fpc(f, g, arrow(dia, "n"), arrow(dia, "g"));
        }

        inline std::optional<Morphism> random_morphism(std::mt19937& rng, const GraphRef& A, const GraphRef& B, HomFilter filter)
        {
            auto hs = enumerate_morphisms(A, B, filter);
            if (hs.empty()) return std::nullopt;
            return hs[rng() % hs.size()];
        }

        /// Library construction on a random instance, checked by the oracle.
        inline std::optional<bool> oracle_on_random(const Options& o, std::mt19937& rng, Category c)
        {
            auto n = o.max_size;
            auto A = random_graph(rng, c, n, n);
            auto B = random_graph(rng, c, n, n);
            auto C = random_graph(rng, c, n, n);
            if (o.oracle == "verify-pushout")
            {
                auto f = random_morphism(rng, A, B, HomFilter::regular_mono);
                auto g = random_morphism(rng, A, C, HomFilter::all);
                if (!f || !g) return std::nullopt;
                auto po = pushout_rm(*f, *g);
                return verify_pushout(Span{*f, *g}, Cospan{po.from_left, po.from_right});
            }
            if (o.oracle == "verify-pullback")
            {
                auto f = random_morphism(rng, B, A, HomFilter::all);
                auto g = random_morphism(rng, C, A, HomFilter::all);
                if (!f || !g) return std::nullopt;
                auto pb = pullback(*f, *g);
                return verify_pullback(Cospan{*f, *g}, Span{pb.to_left, pb.to_right});
            }
            auto f = random_morphism(rng, A, B, HomFilter::all);
            auto m = random_morphism(rng, B, C, HomFilter::regular_mono);
            if (!f || !m) return std::nullopt;
            auto r = fpc(*f, *m);
            return verify_fpc(*f, *m, r.n, r.g);
        }
    }

    inline int cmd_oracle(const Options& o, std::ostream& out)
    {
        if (o.oracle != "verify-pushout" && o.oracle != "verify-pullback" && o.oracle != "verify-fpc")
        {
            throw bad_selection("oracle must be verify-pushout, verify-pullback or verify-fpc");
        }
        if (o.files.size() > 1) throw bad_selection("expected at most one DIAGRAM");
        if (o.files.size() == 1)
        {
            auto dia = detail::load_diagram(o, o.files[0]);
            bool pass = detail::oracle_on_diagram(o, dia);
            out << (pass ? "PASS " : "FAIL ") << o.oracle << "\n";
            return pass ? ok : property;
        }
        std::mt19937 rng(o.seed);
        auto c = o.category.value_or(Category::multigraph);
        int checked = 0;
        int failed = 0;
        for (int attempt = 0; checked < o.samples && attempt < o.samples * 20; ++attempt)
        {
            auto r = detail::oracle_on_random(o, rng, c);
            if (!r) continue;
            ++checked;
            if (!*r) ++failed;
        }
        out << (failed ? "FAIL " : "PASS ") << o.oracle << " " << to_string(c) << " seed=" << o.seed << " checked=" << checked
            << " failed=" << failed << "\n";
        return failed ? property : ok;
    }

    // ---- dispatch

    using Command = std::function<int(const Options&, std::ostream&)>;

    /// Run a command, mapping library errors onto exit codes.
    inline int run(const Command& cmd, const Options& o, std::ostream& out, std::ostream& err)
    {
        try
        {
            return cmd(o, out);
        }
        catch (const parse_error& e)
        {
            err << "parse error: " << e.what() << "\n";
            return parse;
        }
        catch (const category_mismatch& e)
        {
            err << "category mismatch: " << e.what() << "\n";
            return category;
        }
        catch (const not_rm_adhesive& e)
        {
            err << "category mismatch: " << e.what() << "\n";
            return category;
        }
        catch (const theorem_failure& e)
        {
            err << "property failure: " << e.what() << "\n";
            return property;
        }
        catch (const bad_selection& e)
        {
            err << "bad selection: " << e.what() << "\n";
            return selection;
        }
        catch (const invalid_match& e)
        {
            err << "bad selection: " << e.what() << "\n";
            return selection;
        }
        catch (const not_composable& e)
        {
            err << "bad selection: " << e.what() << "\n";
            return selection;
        }
        catch (const error& e)
        {
            err << "error: " << e.what() << "\n";
            return other;
        }
    }

}

#endif
