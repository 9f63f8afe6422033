// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "nlrw/nlrw.hpp"
#include "support/linear_reference.hpp"
#include "support/orbits.hpp"
#include "support/rule_fixtures.hpp"

using namespace nlrw;

namespace
{
    const Category kBoth[] = {Category::multigraph, Category::simplegraph};

    struct Outcome
    {
        bool pass = true;
        std::ostringstream detail;

        void require(bool ok, const std::string& what)
        {
            if (!ok && pass) detail << "first failure: " << what << "; ";
            pass = pass && ok;
        }
    };

    // Failures and counters shared by the sweep workers.
    struct Tally
    {
        std::atomic<long> checked{0};
        std::atomic<long> failed{0};
        std::mutex lock;
        std::string first;

        void fail(const std::string& what)
        {
            if (failed++ == 0)
            {
                std::lock_guard<std::mutex> g(lock);
                first = what;
            }
        }
    };

    unsigned workers()
    {
        if (const char* env = std::getenv("NLRW_JOBS")) return std::max(1, std::atoi(env));
        return std::max(1u, std::thread::hardware_concurrency());
    }

    void parallel(const std::function<void(std::size_t, std::size_t)>& body)
    {
        std::size_t n = workers();
        std::vector<std::thread> ts;
        for (std::size_t i = 0; i < n; ++i) ts.emplace_back(body, i, n);
        for (auto& t : ts) t.join();
    }

    std::string show(const Morphism& f)
    {
        return serialize_compact(*f.dom) + " -> " + serialize_compact(*f.cod);
    }

    void report(Outcome& out, const std::string& label, Tally& t)
    {
        out.detail << label << " " << t.checked << " checked, " << t.failed << " failed; ";
        out.require(t.failed == 0, label + ": " + t.first);
    }

    // 1. Cloning a looped vertex.
    Outcome fpc_cloning()
    {
        Outcome out;
        auto expected = [](Category c)
        {
            return GraphBuilder(c)
                .vertices({"a", "b"})
                .edge("la", "a", "a")
                .edge("lb", "b", "b")
                .edge("ab", "a", "b")
                .edge("ba", "b", "a")
                .build();
        };
        {
            auto c = Category::multigraph;
            auto r = fixtures::clone(c);
            auto X = fixtures::looped_point(c);
            auto ms = matches_sqpo(r, X);
            out.require(ms.size() == 1, "Graph: one match");
            if (!ms.empty())
            {
                auto d = derive_sqpo(X, r, ms[0]);
                out.require(isomorphic(d.result(), expected(c)), "Graph result");
                out.detail << serialize_compact(*d.result()) << "; ";
            }
        }
        {
            auto c = Category::simplegraph;
            auto I = fixtures::looped_point(c);
            auto K = expected(c);
            auto r = make_rule("clone-looped", identity(K), make_morphism(K, I, {0, 0}, {0, 0, 0, 0}));
            auto ms = matches_sqpo(r, fixtures::looped_point(c));
            out.require(ms.size() == 1, "SGraph: one match");
            if (!ms.empty())
            {
                auto d = derive_sqpo(fixtures::looped_point(c), r, ms[0]);
                out.require(isomorphic(d.result(), expected(c)), "SGraph result");
                out.detail << serialize_compact(*d.result()) << "; ";
            }
        }
        return out;
    }

    // 2. Deleting the centre of a star.
    Outcome deletion_side_effect()
    {
        Outcome out;
        for (auto c : kBoth)
        {
            std::string cat(to_string(c));
            auto X = GraphBuilder(c).vertices({"h", "x", "y", "z"}).edge("e1", "h", "x").edge("e2", "h", "y").edge("e3", "h", "z").build();
            auto r = fixtures::delete_vertex(c);
            auto isolated = GraphBuilder(c).vertices({"x", "y", "z"}).build();
            int centre = 0;
            for (const auto& m : matches_sqpo(r, X))
            {
                if (m.m.v[0] != X->vertex_index("h")) continue;
                ++centre;
                auto d = derive_sqpo(X, r, m);
                out.require(isomorphic(d.result(), isolated), cat + " result");
                out.detail << serialize_compact(*d.result()) << ", ";
            }
            out.require(centre == 1, cat + " centre match");
            // every vertex of the star has an incident edge, so no match satisfies the gluing condition
            auto dpo = matches_dpo(r, X).size();
            out.require(dpo == 0, cat + " DPO matches");
            out.detail << dpo << " DPO matches; ";
        }
        return out;
    }

    // 3. Multi-sum of two points.
    Outcome multisum_counts()
    {
        Outcome out;
        const std::size_t want[] = {2, 5};
        for (int i = 0; i < 2; ++i)
        {
            auto c = kBoth[i];
            auto p = fixtures::point(c);
            auto fast = multisum(p, p);
            auto slow = multisum_brute(p, p);
            out.require(fast.size() == want[i], std::string(to_string(c)) + " multisum size");
            out.require(slow.size() == want[i], std::string(to_string(c)) + " brute-force size");
            for (const auto& x : slow) out.require(locate(fast, x).has_value(), std::string(to_string(c)) + " element missing");
            out.detail << to_string(c) << " " << fast.size() << " (brute " << slow.size() << "); ";
        }
        return out;
    }

    bool same_pocs(const std::vector<POCElement>& xs, const std::vector<POCElement>& ys)
    {
        if (xs.size() != ys.size()) return false;
        for (const auto& y : ys)
        {
            if (!locate(xs, y)) return false;
        }
        return true;
    }

    // 4. Algorithmic against brute-force pushout complements.
    Outcome mpoc_equivalence()
    {
        Outcome out;
        for (auto c : kBoth)
        {
            orbits::Corpus corpus(c, 3, 3);
            Tally t;
            std::atomic<long> pocs{0};
            parallel([&](std::size_t shard, std::size_t shards)
            {
                orbits::for_each_composable(corpus, HomFilter::all, HomFilter::regular_mono, [&](const Morphism& f, const Morphism& b)
                {
                    ++t.checked;
                    auto fast = mpoc(f, b);
                    pocs += static_cast<long>(fast.size());
                    if (!same_pocs(fast, mpoc_brute(f, b))) t.fail("f: " + show(f) + ", b: " + show(b));
                }, shard, shards);
            });
            report(out, std::string(to_string(c)), t);
            out.detail << pocs << " POCs; ";
        }
        return out;
    }

    // 5. Universal properties over the corpus.
    Outcome universal_properties()
    {
        Outcome out;
        for (auto c : kBoth)
        {
            std::string cat(to_string(c));
            orbits::Corpus corpus(c, 3, 3);
            std::map<const Graph*, ClassifierData> T;
            for (const auto& g : corpus.graphs) T.emplace(g.get(), classify_object(g));
            auto T_of = [&](const Morphism& f, const ClassifierData& TX) { return T_on_morphism(f, TX, T.at(f.cod.get())); };
            Tally po, po_pb, pb, T_pb, fp, fact, eta;
            parallel([&](std::size_t shard, std::size_t shards)
            {
                orbits::for_each_span(corpus, HomFilter::regular_mono, HomFilter::all, [&](const Morphism& f, const Morphism& g)
                {
                    auto r = pushout_rm(f, g);
                    ++po.checked;
                    if (!verify_pushout(Span{f, g}, Cospan{r.from_left, r.from_right})) po.fail(show(f) + " / " + show(g));
                    ++po_pb.checked;
                    if (!is_pullback_square(Square{f, g, r.from_left, r.from_right})) po_pb.fail(show(f) + " / " + show(g));
                }, shard, shards);

                orbits::for_each_cospan(corpus, HomFilter::all, HomFilter::all, [&](const Morphism& f, const Morphism& g)
                {
                    auto r = pullback(f, g);
                    ++pb.checked;
                    if (!verify_pullback(Cospan{f, g}, Span{r.to_left, r.to_right})) pb.fail(show(f) + " / " + show(g));
                    ++T_pb.checked;
                    auto TP = classify_object(r.object);
                    Cospan image{T_of(f, T.at(f.dom.get())), T_of(g, T.at(g.dom.get()))};
                    if (!verify_pullback(image, Span{T_of(r.to_left, TP), T_of(r.to_right, TP)})) T_pb.fail(show(f) + " / " + show(g));
                }, shard, shards);

                orbits::for_each_composable(corpus, HomFilter::all, HomFilter::regular_mono, [&](const Morphism& f, const Morphism& m)
                {
                    auto r = fpc(f, m);
                    ++fp.checked;
                    if (!verify_fpc(f, m, r.n, r.g)) fp.fail(show(f) + " / " + show(m));
                }, shard, shards);

                orbits::for_each_morphism(corpus, HomFilter::all, [&](const Morphism& f)
                {
                    auto r = epi_rm_factorize(f);
                    ++fact.checked;
                    bool ok = is_epi(r.epi) && is_regular_mono(r.rm) && compose(r.rm, r.epi) == f;
                    // every other epi / regular-mono factorization through a corpus graph is isomorphic
                    for (const auto& M : corpus.graphs)
                    {
                        if (!ok || M->num_vertices() != r.midpoint()->num_vertices()) continue;
                        for (const auto& e2 : enumerate_morphisms(f.dom, M, HomFilter::epi))
                        {
                            auto cm = HomConstraints::none(*M);
                            constrain::after(cm, e2, f);
                            for (const auto& m2 : enumerate_morphisms(M, f.cod, HomFilter::regular_mono, &cm))
                            {
                                ok = ok && find_iso_commuting(r.midpoint(), M, {IsoCondition::under(r.epi, e2), IsoCondition::over(r.rm, m2)}).has_value();
                            }
                        }
                    }
                    if (!ok) fact.fail(show(f));

                    const auto& TX = T.at(f.dom.get());
                    const auto& TY = T.at(f.cod.get());
                    ++eta.checked;
                    if (!verify_pullback(Cospan{T_on_morphism(f, TX, TY), TY.eta}, Span{TX.eta, f})) eta.fail(show(f));
                }, shard, shards);
            });
            report(out, cat + " pushout_rm", po);
            report(out, cat + " rm-pushout is pullback", po_pb);
            report(out, cat + " pullback", pb);
            report(out, cat + " T preserves pullback", T_pb);
            report(out, cat + " fpc", fp);
            report(out, cat + " epi-rm factorization", fact);
            report(out, cat + " eta cartesian", eta);
        }
        return out;
    }

    std::vector<fixtures::RulePair> round_trip_pairs(Category c)
    {
        auto pairs = fixtures::concurrency_pairs(c);
        if (c == Category::multigraph) pairs.push_back({"clone-merge-then-keep-loops", fixtures::clone_merge(c), fixtures::two_loops_identity(), false});
        return pairs;
    }

    void round_trip(Outcome& out, Category c, Semantics s)
    {
        auto hosts = all_graphs(c, 4, 3);
        long derivations = 0;
        long composites = 0;
        for (const auto& p : round_trip_pairs(c))
        {
            auto cat = make_catalog(p.r2, p.r1, s);
            for (const auto& X : hosts)
            {
                auto rep = compatibility_check(cat, X, workers());
                derivations += static_cast<long>(rep.two_step.size());
                composites += static_cast<long>(rep.composite.size());
                std::string where = std::string(to_string(c)) + " " + p.name + " on " + serialize_compact(*X);
                out.require(rep.passed(), where + (rep.failures.empty() ? std::string(": counts differ") : ": " + rep.failures.front()));
            }
        }
        out.detail << to_string(c) << " " << round_trip_pairs(c).size() << " pairs x " << hosts.size() << " hosts, " << derivations << " two-step / "
                   << composites << " composite derivations; ";
    }

    // 6. SqPO synthesis and analysis.
    Outcome sqpo_round_trip()
    {
        Outcome out;
        for (auto c : kBoth) round_trip(out, c, Semantics::sqpo);
        return out;
    }

    // 7. DPO synthesis and analysis, multigraphs only.
    Outcome dpo_round_trip()
    {
        Outcome out;
        round_trip(out, Category::multigraph, Semantics::dpo);

        auto c = Category::simplegraph;
        auto r = fixtures::identity_on_point(c);
        auto X = fixtures::point(c);
        auto rejects = [](const std::function<void()>& f)
        {
            try
            {
                f();
            }
            catch (const not_rm_adhesive&)
            {
                return true;
            }
            catch (...)
            {
            }
            return false;
        };
        auto d1 = derive_dpo(X, r, matches_dpo(r, X)[0]);
        auto d2 = derive_dpo(d1.result(), r, matches_dpo(r, d1.result())[0]);
        out.require(rejects([&] { synthesize_dpo(d1, d2); }), "SGraph synthesis not rejected");
        auto comp = compose_dpo(r, rule_matches_dpo(r, r)[0], r);
        out.require(rejects([&] { analyze_dpo(r, comp, r, X, DPOMatch{}); }), "SGraph analysis not rejected");
        out.require(rejects([&] { make_catalog(r, r, Semantics::dpo); }), "SGraph catalog not rejected");
        out.detail << "SGraph rejected with not_rm_adhesive; ";
        return out;
    }

    // 8. Linear pairs against the set-based reference composition.
    Outcome linear_conservativity()
    {
        Outcome out;
        std::mt19937 rng(5);
        for (auto c : kBoth)
        {
            std::vector<std::pair<Rule, Rule>> corpus;
            for (const auto& p : fixtures::concurrency_pairs(c))
            {
                if (p.linear) corpus.emplace_back(p.r2, p.r1);
            }
            for (int i = 0; i < 40; ++i) corpus.emplace_back(fixtures::random_linear_rule(rng, c), fixtures::random_linear_rule(rng, c));
            for (auto s : {Semantics::sqpo, Semantics::dpo})
            {
                if (s == Semantics::dpo && c == Category::simplegraph) continue;
                int compared = 0;
                int skipped = 0;
                int mismatches = 0;
                for (const auto& [r2, r1] : corpus)
                {
                    auto cmp = linear_reference::compare(r2, r1, s);
                    compared += cmp.compared;
                    skipped += cmp.nontrivial_fpa;
                    mismatches += static_cast<int>(cmp.mismatches.size());
                    if (!cmp.mismatches.empty()) out.require(false, std::string(to_string(c)) + " " + std::string(to_string(s)) + ": " + cmp.mismatches.front());
                }
                // only simple graphs may have non-trivial augmentations for linear rules
                if (c == Category::multigraph) out.require(skipped == 0, "Graph linear pair with a non-trivial FPA");
                out.require(compared > 0, "nothing compared");
                out.detail << to_string(c) << " " << to_string(s) << " " << compared << " compared, " << mismatches << " mismatches";
                if (c == Category::simplegraph) out.detail << ", " << skipped << " non-trivial FPA matches not compared";
                out.detail << "; ";
            }
        }
        return out;
    }

    // 9. Back-propagation adds loops to the output motif.
    Outcome back_propagation()
    {
        Outcome out;
        auto r1 = fixtures::clone_merge(Category::multigraph);
        auto r2 = fixtures::two_loops_identity();
        int witnesses = 0;
        for (const auto& mu : rule_matches_sqpo(r2, r1))
        {
            if (mu.fpa.trivial()) continue;
            auto comp = compose_sqpo(r2, mu, r1);
            const auto& inc = comp.witness.O21_to_Obar21;
            out.require(verify_witness(comp, r2, r1).empty(), "witness squares");
            if (is_regular_mono(inc) && !is_iso(inc) && inc.cod->num_edges() > inc.dom->num_edges())
            {
                if (witnesses++ == 0)
                {
                    out.detail << "naive motif " << serialize_compact(*inc.dom) << " embeds properly in " << serialize_compact(*inc.cod) << "; ";
                }
            }
        }
        out.require(witnesses > 0, "no non-trivial FPA with a larger output motif");
        out.detail << witnesses << " witnessing rule matches; ";
        return out;
    }
}

int main()
{
    struct Criterion
    {
        int id;
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {1, "fpc cloning fixture", fpc_cloning},
        {2, "sqpo deletion side effect", deletion_side_effect},
        {3, "multi-sum counts", multisum_counts},
        {4, "mpoc oracle equivalence", mpoc_equivalence},
        {5, "universal-property suite", universal_properties},
        {6, "sqpo concurrency round trip", sqpo_round_trip},
        {7, "dpo concurrency round trip", dpo_round_trip},
        {8, "linear conservativity", linear_conservativity},
        {9, "back-propagation witness", back_propagation},
    };
    int failed = 0;
    for (const auto& c : criteria)
    {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = c.run();
        }
        catch (const std::exception& e)
        {
            o.require(false, std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name << " (" << std::fixed << std::setprecision(1) << secs << "s): " << o.detail.str()
                  << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
