#ifndef NLRW_CONCURRENT_HPP
#define NLRW_CONCURRENT_HPP

// Rule composition, synthesis, analysis and the compatibility check.
//
// Rules are r_j = (O_j <-o_j- K_j -i_j-> I_j); r1 is applied first. Objects
// are named as in the composition diagram: J21 is the multi-sum object,
// Kbar1/Kbar2 the complements of the rule kernels inside J21, I21/O21 the
// glued input/output motifs. SqPO adds the augmented Ibar21, Kbb1 (K double
// bar), the back-propagated Jbar21, Kbb2 and Obar21.

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "classifier.hpp"
#include "graph.hpp"
#include "homs.hpp"
#include "iso.hpp"
#include "limits.hpp"
#include "multi.hpp"
#include "oracles.hpp"
#include "rewrite.hpp"

namespace nlrw
{

    /// DPO synthesis and analysis need pushouts along regular monos to be
    /// van Kampen, which fails for simple graphs.
    class not_rm_adhesive : public error
    {
    public:
        using error::error;
    };

    /// A construction step that the concurrency theorems guarantee failed.
    class theorem_failure : public error
    {
    public:
        using error::error;
    };

    struct SqPORuleMatch
    {
        MultiSumElement sum;        // j2: I2 -> J21, j1: O1 -> J21
        POCElement poc;             // jbar1: K1 -> Kbar1, obar1: Kbar1 -> J21
        AugmentationSquare square;  // pushout of (jbar1, i1), object I21
        FPAElement fpa;             // jbb1: Kbar1 -> Kbb1, ibb1: Kbb1 -> Ibar21, iota21: I21 -> Ibar21
    };

    struct DPORuleMatch
    {
        MultiSumElement sum;
        POCElement poc2;  // jbar2: K2 -> Kbar2, ibar2: Kbar2 -> J21
        POCElement poc1;  // jbar1: K1 -> Kbar1, obar1: Kbar1 -> J21
    };

    /// Every arrow of a composition diagram. DPO leaves the SqPO-only arrows empty.
    struct CompositionWitness
    {
        Morphism j2, j1;
        Morphism jbar1, obar1;
        Morphism jbar2, ibar2;
        Morphism I1_to_I21, Kbar1_to_I21;
        Morphism O2_to_O21, Kbar2_to_O21;

        Morphism jbb1, ibb1, iota21;
        Morphism J21_to_Jbar21, Kbb1_to_Jbar21;
        Morphism jbb2, ibb2;
        Morphism O21_to_Obar21, Kbb2_to_Obar21;

        Morphism K21_to_left;   // composite kernel into Kbb1 (SqPO) or Kbar1 (DPO)
        Morphism K21_to_right;  // composite kernel into Kbb2 (SqPO) or Kbar2 (DPO)
    };

    struct CompositeRule
    {
        Semantics semantics = Semantics::sqpo;
        Rule rule;
        CompositionWitness witness;
    };

    struct WitnessSquare
    {
        std::string name;
        std::string kind;  // pushout | pullback | fpc | poc | fpa
        Square square;
    };

    namespace detail
    {
        inline Morphism induced(const Cospan& from, const Cospan& to)
        {
            auto cons = HomConstraints::none(*from.target());
            constrain::after(cons, from.left, to.left);
            constrain::after(cons, from.right, to.right);
            auto u = find_morphism(from.target(), to.target(), HomFilter::all, &cons);
            if (!u) throw theorem_failure("no induced morphism out of a pushout");
            return *u;
        }

        inline void require_rule_pair(const Rule& r2, const Rule& r1)
        {
            if (r1.category() != r2.category()) throw category_mismatch("rules live in different categories");
        }

        inline void require_multigraph(Category c, std::string_view what)
        {
            if (c != Category::multigraph)
            {
                throw not_rm_adhesive(std::string(what) + ": DPO concurrency needs an rm-adhesive category; simple graphs are not");
            }
        }

        template <typename F>
        void parallel_for(std::size_t n, unsigned jobs, F body)
        {
            if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
            if (jobs <= 1 || n <= 1)
            {
                for (std::size_t i = 0; i < n; ++i) body(i);
                return;
            }
            std::atomic<std::size_t> next{0};
            std::exception_ptr failure;
            std::mutex failure_mutex;
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < std::min<std::size_t>(jobs, n); ++t)
            {
                pool.emplace_back(
                    [&]()
                    {
                        for (std::size_t i = next++; i < n; i = next++)
                        {
                            try
                            {
                                body(i);
                            }
                            catch (...)
                            {
                                std::lock_guard<std::mutex> lock(failure_mutex);
                                if (!failure) failure = std::current_exception();
                            }
                        }
                    }
                );
            }
            for (auto& th : pool) th.join();
            if (failure) std::rethrow_exception(failure);
        }
    }

    // ------------------------------------------------------------------
    // span composition

    /// (O <- K2 -> J) o (J <- K1 -> I): the apex is the pullback of the inner legs.
    inline Span span_compose(const Span& s2, const Span& s1)
    {
        if (!same_object(s2.right.cod, s1.left.cod)) throw not_composable("span_compose: spans do not meet in a common object");
        auto pb = pullback(s1.left, s2.right);
        return Span{compose(s2.left, pb.to_right), compose(s1.right, pb.to_left)};
    }

    // ------------------------------------------------------------------
    // admissible rule matches

    inline std::vector<SqPORuleMatch> rule_matches_sqpo(const Rule& r2, const Rule& r1)
    {
        detail::require_rule_pair(r2, r1);
        std::vector<SqPORuleMatch> out;
        for (const auto& sum : multisum(r2.I(), r1.O()))
        {
            for (const auto& poc : mpoc(r1.output_leg, sum.right()))
            {
                auto sq = augmentation_square(poc.a, r1.input_leg);
                for (auto& fpa : fpa_enumerate(sq)) out.push_back(SqPORuleMatch{sum, poc, sq, std::move(fpa)});
            }
        }
        return out;
    }

    inline std::vector<DPORuleMatch> rule_matches_dpo(const Rule& r2, const Rule& r1)
    {
        detail::require_rule_pair(r2, r1);
        std::vector<DPORuleMatch> out;
        for (const auto& sum : multisum(r2.I(), r1.O()))
        {
            auto poc2s = mpoc(r2.input_leg, sum.left());
            if (poc2s.empty()) continue;
            for (const auto& poc1 : mpoc(r1.output_leg, sum.right()))
            {
                for (const auto& poc2 : poc2s) out.push_back(DPORuleMatch{sum, poc2, poc1});
            }
        }
        return out;
    }

    // ------------------------------------------------------------------
    // composition

    inline CompositeRule compose_sqpo(const Rule& r2, const SqPORuleMatch& mu, const Rule& r1)
    {
        detail::require_rule_pair(r2, r1);
        CompositionWitness w;
        w.j2 = mu.sum.left();
        w.j1 = mu.sum.right();
        if (!same_object(w.j2.dom, r2.I()) || !same_object(w.j1.dom, r1.O()))
        {
            throw invalid_match("rule match does not fit the rules");
        }
        w.jbar1 = mu.poc.a;
        w.obar1 = mu.poc.d;
        if (!same_object(w.jbar1.dom, r1.K()) || !same_object(mu.square.a.dom, r1.K()) || !same_object(mu.square.alpha.cod, w.jbar1.cod))
        {
            throw invalid_match("rule match does not fit the rules");
        }
        w.I1_to_I21 = mu.square.alpha_bar;
        w.Kbar1_to_I21 = mu.square.a_bar;
        w.jbb1 = mu.fpa.n;
        w.ibb1 = mu.fpa.f;
        w.iota21 = mu.fpa.e;

        auto c2 = fpc(r2.input_leg, w.j2);
        w.jbar2 = c2.n;
        w.ibar2 = c2.g;
        auto po2 = pushout_rm(w.jbar2, r2.output_leg);
        w.Kbar2_to_O21 = po2.from_left;
        w.O2_to_O21 = po2.from_right;

        auto back = pushout_rm(w.jbb1, w.obar1);
        w.Kbb1_to_Jbar21 = back.from_left;
        w.J21_to_Jbar21 = back.from_right;

        auto c5 = fpc(w.ibar2, w.J21_to_Jbar21);
        w.jbb2 = c5.n;
        w.ibb2 = c5.g;
        auto po4 = pushout_rm(w.jbb2, w.Kbar2_to_O21);
        w.Kbb2_to_Obar21 = po4.from_left;
        w.O21_to_Obar21 = po4.from_right;

        auto pb = pullback(w.Kbb1_to_Jbar21, w.ibb2);
        w.K21_to_left = pb.to_left;
        w.K21_to_right = pb.to_right;
        Rule rule{r2.name + "." + r1.name, compose(w.Kbb2_to_Obar21, pb.to_right), compose(w.ibb1, pb.to_left)};
        return CompositeRule{Semantics::sqpo, std::move(rule), std::move(w)};
    }

    inline CompositeRule compose_dpo(const Rule& r2, const DPORuleMatch& mu, const Rule& r1)
    {
        detail::require_rule_pair(r2, r1);
        CompositionWitness w;
        w.j2 = mu.sum.left();
        w.j1 = mu.sum.right();
        w.jbar2 = mu.poc2.a;
        w.ibar2 = mu.poc2.d;
        w.jbar1 = mu.poc1.a;
        w.obar1 = mu.poc1.d;
        if (!same_object(w.j2.dom, r2.I()) || !same_object(w.j1.dom, r1.O()) || !same_object(w.jbar2.dom, r2.K())
            || !same_object(w.jbar1.dom, r1.K()) || !same_object(w.ibar2.cod, w.j2.cod) || !same_object(w.obar1.cod, w.j1.cod))
        {
            throw invalid_match("rule match does not fit the rules");
        }
        auto poI = pushout_rm(w.jbar1, r1.input_leg);
        w.Kbar1_to_I21 = poI.from_left;
        w.I1_to_I21 = poI.from_right;
        auto poO = pushout_rm(w.jbar2, r2.output_leg);
        w.Kbar2_to_O21 = poO.from_left;
        w.O2_to_O21 = poO.from_right;
        auto pb = pullback(w.obar1, w.ibar2);
        w.K21_to_left = pb.to_left;
        w.K21_to_right = pb.to_right;
        Rule rule{r2.name + "." + r1.name, compose(w.Kbar2_to_O21, pb.to_right), compose(w.Kbar1_to_I21, pb.to_left)};
        return CompositeRule{Semantics::dpo, std::move(rule), std::move(w)};
    }

    /// The labelled squares of a composition diagram with the property each must have.
    inline std::vector<WitnessSquare> witness_squares(const CompositeRule& c, const Rule& r2, const Rule& r1)
    {
        const auto& w = c.witness;
        std::vector<WitnessSquare> out;
        if (c.semantics == Semantics::sqpo)
        {
            out.push_back({"input FPC of r2", "fpc", Square{r2.input_leg, w.jbar2, w.j2, w.ibar2}});
        }
        else
        {
            out.push_back({"input POC of r2", "poc", Square{r2.input_leg, w.jbar2, w.j2, w.ibar2}});
        }
        out.push_back({"output pushout of r2", "pushout", Square{r2.output_leg, w.jbar2, w.O2_to_O21, w.Kbar2_to_O21}});
        out.push_back({"output POC of r1", "poc", Square{r1.output_leg, w.jbar1, w.j1, w.obar1}});
        out.push_back({"input pushout of r1", "pushout", Square{r1.input_leg, w.jbar1, w.I1_to_I21, w.Kbar1_to_I21}});
        if (c.semantics == Semantics::sqpo)
        {
            out.push_back({"augmentation of r1 input", "fpa", Square{r1.input_leg, compose(w.jbb1, w.jbar1), compose(w.iota21, w.I1_to_I21), w.ibb1}});
            out.push_back({"back-propagation pushout", "pushout", Square{w.obar1, w.jbb1, w.J21_to_Jbar21, w.Kbb1_to_Jbar21}});
            out.push_back({"middle FPC of r2", "fpc", Square{w.ibar2, w.jbb2, w.J21_to_Jbar21, w.ibb2}});
            out.push_back({"augmented output pushout", "pushout", Square{w.Kbar2_to_O21, w.jbb2, w.O21_to_Obar21, w.Kbb2_to_Obar21}});
            out.push_back({"composite kernel pullback", "pullback", Square{w.K21_to_left, w.K21_to_right, w.Kbb1_to_Jbar21, w.ibb2}});
        }
        else
        {
            out.push_back({"composite kernel pullback", "pullback", Square{w.K21_to_left, w.K21_to_right, w.obar1, w.ibar2}});
        }
        return out;
    }

    /// Names of witness squares that fail their property; empty when all pass.
    inline std::vector<std::string> verify_witness(const CompositeRule& c, const Rule& r2, const Rule& r1)
    {
        std::vector<std::string> bad;
        for (const auto& ws : witness_squares(c, r2, r1))
        {
            const auto& s = ws.square;
            bool ok = false;
            if (ws.kind == "pushout") ok = is_pushout_square(s);
            else if (ws.kind == "pullback") ok = is_pullback_square(s);
            else if (ws.kind == "fpc") ok = is_regular_mono(s.right) && is_fpc_square(s);
            else if (ws.kind == "poc") ok = is_regular_mono(s.left) && is_pushout_square(s);
            else if (ws.kind == "fpa")
            {
                const auto& w = c.witness;
                ok = is_regular_mono(s.right) && is_fpc_square(s) && is_epi(w.iota21) && is_regular_mono(w.jbb1)
                    && compose(w.ibb1, w.jbb1) == compose(w.iota21, w.Kbar1_to_I21);
            }
            if (!ok) bad.push_back(ws.name);
        }
        return bad;
    }

    // ------------------------------------------------------------------
    // locating rule matches up to the compatible universal isos

    /// Isos relating two equivalent rule matches, on the composite input motif
    /// and kernel of their composites.
    struct RuleMatchIso
    {
        std::size_t index = 0;
        Morphism input;   // composite I of the given match -> listed one
        Morphism kernel;  // composite K of the given match -> listed one
    };

    namespace detail
    {
        inline std::optional<Morphism> sum_iso(const MultiSumElement& x, const MultiSumElement& y)
        {
            return find_iso_commuting(x.object(), y.object(), {IsoCondition::under(x.left(), y.left()), IsoCondition::under(x.right(), y.right())});
        }

        inline std::optional<Morphism> poc_iso_over(const POCElement& x, const POCElement& y, const Morphism& base)
        {
            return find_iso_commuting(x.object(), y.object(), {IsoCondition::under(x.a, y.a), IsoCondition::over(compose(base, x.d), y.d)});
        }

        inline std::optional<Morphism> kernel_iso(const CompositeRule& x, const CompositeRule& y, const Morphism& left, const Morphism& right)
        {
            return find_iso_commuting(
                x.rule.K(),
                y.rule.K(),
                {IsoCondition::over(compose(left, x.witness.K21_to_left), y.witness.K21_to_left),
                 IsoCondition::over(compose(right, x.witness.K21_to_right), y.witness.K21_to_right)}
            );
        }
    }

    inline std::optional<RuleMatchIso> locate_rule_match(
        const std::vector<SqPORuleMatch>& list, const std::vector<CompositeRule>& composites, const SqPORuleMatch& mu, const CompositeRule& composite
    )
    {
        for (std::size_t k = 0; k < list.size(); ++k)
        {
            const auto& nu = list[k];
            auto phiJ = detail::sum_iso(mu.sum, nu.sum);
            if (!phiJ) continue;
            auto phiK = detail::poc_iso_over(mu.poc, nu.poc, *phiJ);
            if (!phiK) continue;
            auto phiI = find_iso_commuting(
                mu.square.alpha_bar.cod,
                nu.square.alpha_bar.cod,
                {IsoCondition::under(mu.square.alpha_bar, nu.square.alpha_bar), IsoCondition::under(mu.square.a_bar, compose(nu.square.a_bar, *phiK))}
            );
            if (!phiI) continue;
            auto psi = find_iso_commuting(mu.fpa.e.cod, nu.fpa.e.cod, {IsoCondition::under(mu.fpa.e, compose(nu.fpa.e, *phiI))});
            if (!psi) continue;
            auto phiF = find_iso_commuting(
                mu.fpa.f.dom,
                nu.fpa.f.dom,
                {IsoCondition::under(mu.fpa.n, compose(nu.fpa.n, *phiK)), IsoCondition::over(compose(*psi, mu.fpa.f), nu.fpa.f)}
            );
            if (!phiF) continue;
            // Kbb2 is the FPC of the same data on both sides.
            const auto& x = composite.witness;
            const auto& y = composites[k].witness;
            auto phiJbar = find_iso_commuting(
                x.J21_to_Jbar21.cod,
                y.J21_to_Jbar21.cod,
                {IsoCondition::under(x.J21_to_Jbar21, compose(y.J21_to_Jbar21, *phiJ)), IsoCondition::under(x.Kbb1_to_Jbar21, compose(y.Kbb1_to_Jbar21, *phiF))}
            );
            if (!phiJbar) continue;
            auto phiK2bar = find_iso_commuting(x.ibar2.dom, y.ibar2.dom, {IsoCondition::under(x.jbar2, y.jbar2), IsoCondition::over(compose(*phiJ, x.ibar2), y.ibar2)});
            if (!phiK2bar) continue;
            auto phiKbb2 = find_iso_commuting(
                x.ibb2.dom, y.ibb2.dom, {IsoCondition::under(x.jbb2, compose(y.jbb2, *phiK2bar)), IsoCondition::over(compose(*phiJbar, x.ibb2), y.ibb2)}
            );
            if (!phiKbb2) continue;
            auto chi = detail::kernel_iso(composite, composites[k], *phiF, *phiKbb2);
            if (!chi) continue;
            return RuleMatchIso{k, *psi, *chi};
        }
        return std::nullopt;
    }

    inline std::optional<RuleMatchIso> locate_rule_match(
        const std::vector<DPORuleMatch>& list, const std::vector<CompositeRule>& composites, const DPORuleMatch& mu, const CompositeRule& composite
    )
    {
        for (std::size_t k = 0; k < list.size(); ++k)
        {
            const auto& nu = list[k];
            auto phiJ = detail::sum_iso(mu.sum, nu.sum);
            if (!phiJ) continue;
            auto phi1 = detail::poc_iso_over(mu.poc1, nu.poc1, *phiJ);
            if (!phi1) continue;
            auto phi2 = detail::poc_iso_over(mu.poc2, nu.poc2, *phiJ);
            if (!phi2) continue;
            const auto& x = composite.witness;
            const auto& y = composites[k].witness;
            auto phiI = find_iso_commuting(
                composite.rule.I(),
                composites[k].rule.I(),
                {IsoCondition::under(x.I1_to_I21, y.I1_to_I21), IsoCondition::under(x.Kbar1_to_I21, compose(y.Kbar1_to_I21, *phi1))}
            );
            if (!phiI) continue;
            auto chi = detail::kernel_iso(composite, composites[k], *phi1, *phi2);
            if (!chi) continue;
            return RuleMatchIso{k, *phiI, *chi};
        }
        return std::nullopt;
    }

    // ------------------------------------------------------------------
    // synthesis

    struct SqPOSynthesis
    {
        SqPORuleMatch mu;
        CompositeRule composite;
        SqPOMatch m21;
        DerivationDiagram derivation;  // composite applied to X0 along m21
        Morphism result_iso;           // derivation result -> X2
    };

    struct DPOSynthesis
    {
        DPORuleMatch mu;
        CompositeRule composite;
        DPOMatch m21;
        DerivationDiagram derivation;
        Morphism result_iso;
    };

    namespace detail
    {
        inline void require_two_steps(const DerivationDiagram& d1, const DerivationDiagram& d2, Semantics s)
        {
            if (d1.semantics != s || d2.semantics != s) throw not_composable("synthesis: derivations use the wrong semantics");
            if (!same_object(d2.host(), d1.result())) throw not_composable("synthesis: second derivation does not start at the first one's result");
        }

        struct Overlap
        {
            MultiSumElement sum;
            Morphism y;  // J21 -> X1
            POCElement poc1;
            Morphism Kbar1_to_X0bar;
            Morphism jbar2, ibar2;
            Morphism Kbar2_to_X1bar;
        };

        /// Multi-sum factorization of (m2, comatch1) and the two kernel pullbacks.
        inline Overlap overlap(const DerivationDiagram& d1, const DerivationDiagram& d2)
        {
            const Rule& r1 = d1.rule;
            const Rule& r2 = d2.rule;
            auto fz = multisum_factorize(Cospan{d2.match, d1.comatch});
            Overlap o{fz.element, fz.y, {}, {}, {}, {}, {}};
            auto pb1 = pullback(o.y, d1.result_leg);
            auto jbar1 = pb1.mediate(Span{compose(o.sum.right(), r1.output_leg), d1.k});
            if (!jbar1) throw theorem_failure("synthesis: K1 does not map into Kbar1");
            o.poc1 = POCElement{*jbar1, pb1.to_left};
            o.Kbar1_to_X0bar = pb1.to_right;
            auto pb2 = pullback(d2.complement, o.y);
            auto jbar2 = pb2.mediate(Span{d2.k, compose(o.sum.left(), r2.input_leg)});
            if (!jbar2) throw theorem_failure("synthesis: K2 does not map into Kbar2");
            o.jbar2 = *jbar2;
            o.ibar2 = pb2.to_right;
            o.Kbar2_to_X1bar = pb2.to_left;
            return o;
        }

        inline Morphism result_iso_or_throw(const DerivationDiagram& d, const GraphRef& X2)
        {
            auto iso = are_isomorphic(d.result(), X2);
            if (!iso) throw theorem_failure("composite derivation does not reproduce the two-step result");
            return *iso;
        }
    }

    inline SqPOSynthesis synthesize_sqpo(const DerivationDiagram& d1, const DerivationDiagram& d2)
    {
        detail::require_two_steps(d1, d2, Semantics::sqpo);
        const Rule& r1 = d1.rule;
        const Rule& r2 = d2.rule;
        auto o = detail::overlap(d1, d2);
        auto sq = augmentation_square(o.poc1.a, r1.input_leg);
        auto u = detail::induced(Cospan{sq.a_bar, sq.alpha_bar}, Cospan{compose(d1.complement, o.Kbar1_to_X0bar), d1.match});
        auto fr = epi_rm_factorize(u);
        auto fpa = fpa_from_epi(sq, fr.epi);
        if (!fpa) throw theorem_failure("synthesis: the epi part of I21 -> X0 is not an FPA");
        SqPORuleMatch mu{o.sum, o.poc1, sq, *fpa};
        auto composite = compose_sqpo(r2, mu, r1);
        auto m21 = retarget(fr.rm, composite.rule.I(), d1.host());
        auto d = derive_sqpo(d1.host(), composite.rule, SqPOMatch{m21});
        auto iso = detail::result_iso_or_throw(d, d2.result());
        return SqPOSynthesis{std::move(mu), std::move(composite), SqPOMatch{m21}, std::move(d), std::move(iso)};
    }

    inline DPOSynthesis synthesize_dpo(const DerivationDiagram& d1, const DerivationDiagram& d2)
    {
        detail::require_multigraph(d1.host()->category(), "synthesize_dpo");
        detail::require_two_steps(d1, d2, Semantics::dpo);
        const Rule& r1 = d1.rule;
        const Rule& r2 = d2.rule;
        auto o = detail::overlap(d1, d2);
        DPORuleMatch mu{o.sum, POCElement{o.jbar2, o.ibar2}, o.poc1};
        auto composite = compose_dpo(r2, mu, r1);
        const auto& w = composite.witness;
        auto m21 = detail::induced(Cospan{w.Kbar1_to_I21, w.I1_to_I21}, Cospan{compose(d1.complement, o.Kbar1_to_X0bar), d1.match});
        // complement of the composite step: pullback of the two complements over X1
        auto Y = pullback(d1.result_leg, d2.complement);
        auto a = Y.mediate(Span{compose(o.Kbar1_to_X0bar, w.K21_to_left), compose(o.Kbar2_to_X1bar, w.K21_to_right)});
        if (!a) throw theorem_failure("synthesis: composite kernel does not map into the joint complement");
        DPOMatch dm{m21, POCElement{*a, compose(d1.complement, Y.to_left)}};
        auto d = derive_dpo(d1.host(), composite.rule, dm);
        auto iso = detail::result_iso_or_throw(d, d2.result());
        return DPOSynthesis{std::move(mu), std::move(composite), std::move(dm), std::move(d), std::move(iso)};
    }

    // ------------------------------------------------------------------
    // analysis

    struct Analysis
    {
        DerivationDiagram first;
        DerivationDiagram second;
        DerivationDiagram composite_derivation;
        Morphism result_iso;  // second.result -> composite_derivation.result
    };

    namespace detail
    {
        /// Iso from a constructed intermediate X1 onto first.result(): it
        /// commutes with the comatch and with the complement legs.
        inline Morphism to_first_result(
            const DerivationDiagram& first, const Morphism& X0bar_to_X1, const Morphism& O1_to_X1, const Morphism& X0bar_iso
        )
        {
            auto iso = find_iso_commuting(
                X0bar_to_X1.cod,
                first.result(),
                {IsoCondition::under(X0bar_to_X1, compose(first.result_leg, X0bar_iso)), IsoCondition::under(O1_to_X1, first.comatch)}
            );
            if (!iso) throw theorem_failure("analysis: intermediate graph differs from the first derivation's result");
            return *iso;
        }

        inline Analysis finish_analysis(DerivationDiagram first, DerivationDiagram second, DerivationDiagram whole)
        {
            auto iso = are_isomorphic(second.result(), whole.result());
            if (!iso) throw theorem_failure("analysis: two-step result differs from the composite derivation");
            return Analysis{std::move(first), std::move(second), std::move(whole), std::move(*iso)};
        }
    }

    inline Analysis analyze_sqpo(const Rule& r2, const CompositeRule& composite, const Rule& r1, const GraphRef& X0, const SqPOMatch& m21)
    {
        detail::require_rule_pair(r2, r1);
        if (composite.semantics != Semantics::sqpo) throw invalid_match("analyze_sqpo needs an SqPO composite");
        const auto& w = composite.witness;
        auto whole = derive_sqpo(X0, composite.rule, m21);
        auto c9 = fpc(w.ibb1, m21.m);
        auto po10 = pushout_rm(c9.n, w.Kbb1_to_Jbar21);
        const auto& X0bar_to_X1 = po10.from_left;
        const auto& Jbar21_to_X1 = po10.from_right;

        auto m1 = compose(m21.m, w.iota21, w.I1_to_I21);
        auto first = derive_sqpo(X0, r1, SqPOMatch{m1});
        auto X0bar_iso = find_iso_commuting(
            c9.object,
            first.complement_object(),
            {IsoCondition::under(compose(c9.n, w.jbb1, w.jbar1), first.k), IsoCondition::over(c9.g, first.complement)}
        );
        if (!X0bar_iso) throw theorem_failure("analysis: complement of the first step differs");
        auto iso = detail::to_first_result(first, X0bar_to_X1, compose(Jbar21_to_X1, w.J21_to_Jbar21, w.j1), *X0bar_iso);
        auto m2 = compose(iso, Jbar21_to_X1, w.J21_to_Jbar21, w.j2);
        auto second = derive_sqpo(first.result(), r2, SqPOMatch{m2});
        return detail::finish_analysis(std::move(first), std::move(second), std::move(whole));
    }

    inline Analysis analyze_dpo(const Rule& r2, const CompositeRule& composite, const Rule& r1, const GraphRef& X0, const DPOMatch& m21)
    {
        detail::require_multigraph(X0->category(), "analyze_dpo");
        detail::require_rule_pair(r2, r1);
        if (composite.semantics != Semantics::dpo) throw invalid_match("analyze_dpo needs a DPO composite");
        const auto& w = composite.witness;
        auto whole = derive_dpo(X0, composite.rule, m21);
        const auto& a = m21.poc.a;  // K21 -> Z
        const auto& d = m21.poc.d;  // Z -> X0
        auto X0bar = pushout_rm(a, w.K21_to_left);    // Z -> X0bar, Kbar1 -> X0bar
        auto X1bar = pushout_rm(a, w.K21_to_right);   // Z -> X1bar, Kbar2 -> X1bar
        auto X0bar_to_X0 = detail::induced(Cospan{X0bar.from_left, X0bar.from_right}, Cospan{d, compose(m21.m, w.Kbar1_to_I21)});
        auto X1 = pushout_rm(X0bar.from_right, w.obar1);  // X0bar -> X1, J21 -> X1
        auto X1bar_to_X1 = detail::induced(
            Cospan{X1bar.from_left, X1bar.from_right}, Cospan{compose(X1.from_left, X0bar.from_left), compose(X1.from_right, w.ibar2)}
        );

        auto m1 = compose(m21.m, w.I1_to_I21);
        auto first = derive_dpo(X0, r1, DPOMatch{m1, POCElement{compose(X0bar.from_right, w.jbar1), X0bar_to_X0}});
        auto iso = detail::to_first_result(first, X1.from_left, compose(X1.from_right, w.j1), identity(X0bar.object));
        auto m2 = compose(iso, X1.from_right, w.j2);
        auto second = derive_dpo(first.result(), r2, DPOMatch{m2, POCElement{compose(X1bar.from_right, w.jbar2), compose(iso, X1bar_to_X1)}});
        return detail::finish_analysis(std::move(first), std::move(second), std::move(whole));
    }

    // ------------------------------------------------------------------
    // compatibility

    struct CompatibilityReport
    {
        Semantics semantics = Semantics::sqpo;
        std::vector<std::string> two_step;   // quotient representatives (m1, m2)
        std::vector<std::string> composite;  // quotient representatives (mu, m21)
        std::vector<std::pair<std::size_t, std::size_t>> pairing;  // two_step index -> composite index
        std::vector<std::string> failures;

        bool passed() const { return failures.empty() && two_step.size() == composite.size() && pairing.size() == two_step.size(); }
    };

    namespace detail
    {
        inline std::string describe(const Morphism& m)
        {
            std::ostringstream os;
            os << "[";
            for (int x = 0; x < m.dom->num_vertices(); ++x)
            {
                if (x) os << ",";
                os << m.dom->vertex_id(x) << "->" << m.cod->vertex_id(m.vertex(x));
            }
            for (int x = 0; x < m.dom->num_edges(); ++x) os << "," << m.dom->edge_id(x) << "->" << m.cod->edge_id(m.edge(x));
            os << "]";
            return os.str();
        }

        inline std::string describe(const POCElement& p)
        {
            return "poc(" + std::to_string(p.object()->num_vertices()) + "v," + std::to_string(p.object()->num_edges()) + "e)" + describe(p.d);
        }

        /// Same DPO match up to the iso of POC elements.
        inline bool same_dpo_match(const Morphism& m, const POCElement& p, const Morphism& m2, const POCElement& p2)
        {
            return m == m2 && same_poc(p, p2);
        }

        struct TwoStep
        {
            DerivationDiagram first;
            DerivationDiagram second;
        };

        template <typename Matches, typename Derive>
        std::vector<TwoStep> two_steps(const Rule& r2, const Rule& r1, const GraphRef& X0, Matches matches, Derive derive)
        {
            std::vector<TwoStep> out;
            for (const auto& m1 : matches(r1, X0))
            {
                auto d1 = derive(X0, r1, m1);
                for (const auto& m2 : matches(r2, d1.result())) out.push_back(TwoStep{d1, derive(d1.result(), r2, m2)});
            }
            return out;
        }

        /// Transport an analysis back onto the canonical two-step derivation
        /// and compare matches.
        inline bool same_two_step(const Analysis& a, const TwoStep& t, Semantics s)
        {
            if (!(a.first.match == t.first.match)) return false;
            auto iso = derivation_result_iso(a.first, t.first);
            if (!iso) return false;
            auto m2 = compose(*iso, a.second.match);
            if (!(m2 == t.second.match)) return false;
            if (s == Semantics::sqpo) return true;
            if (!detail::same_poc(POCElement{a.first.k, a.first.complement}, POCElement{t.first.k, t.first.complement})) return false;
            return same_poc(POCElement{a.second.k, compose(*iso, a.second.complement)}, POCElement{t.second.k, t.second.complement});
        }
    }

    /// Rule matches of (r2, r1) with their composites. Host independent, so
    /// sweeps over many hosts build it once.
    struct CompositeCatalog
    {
        Semantics semantics = Semantics::sqpo;
        Rule r2;
        Rule r1;
        std::vector<SqPORuleMatch> sq_mus;
        std::vector<DPORuleMatch> dpo_mus;
        std::vector<CompositeRule> composites;
    };

    inline CompositeCatalog make_catalog(const Rule& r2, const Rule& r1, Semantics s)
    {
        detail::require_rule_pair(r2, r1);
        if (s == Semantics::dpo) detail::require_multigraph(r1.category(), "make_catalog");
        CompositeCatalog cat{s, r2, r1, {}, {}, {}};
        if (s == Semantics::sqpo)
        {
            cat.sq_mus = rule_matches_sqpo(r2, r1);
            for (const auto& mu : cat.sq_mus) cat.composites.push_back(compose_sqpo(r2, mu, r1));
        }
        else
        {
            cat.dpo_mus = rule_matches_dpo(r2, r1);
            for (const auto& mu : cat.dpo_mus) cat.composites.push_back(compose_dpo(r2, mu, r1));
        }
        return cat;
    }

    inline CompatibilityReport compatibility_check(const CompositeCatalog& cat, const GraphRef& X0, unsigned jobs = 1)
    {
        const Rule& r2 = cat.r2;
        const Rule& r1 = cat.r1;
        const Semantics s = cat.semantics;
        require_same_category(*r1.I(), *X0);
        CompatibilityReport report;
        report.semantics = s;

        std::vector<detail::TwoStep> steps;
        if (s == Semantics::sqpo)
        {
            steps = detail::two_steps(r2, r1, X0, matches_sqpo, [](const GraphRef& X, const Rule& r, const SqPOMatch& m) { return derive_sqpo(X, r, m); });
        }
        else
        {
            steps = detail::two_steps(r2, r1, X0, matches_dpo, [](const GraphRef& X, const Rule& r, const DPOMatch& m) { return derive_dpo(X, r, m); });
        }
        for (const auto& t : steps)
        {
            std::string line = "m1=" + detail::describe(t.first.match) + " m2=" + detail::describe(t.second.match);
            if (s == Semantics::dpo) line += " " + detail::describe(POCElement{t.first.k, t.first.complement}) + " " + detail::describe(POCElement{t.second.k, t.second.complement});
            report.two_step.push_back(std::move(line));
        }

        // composite side: (mu_k, m21) with m21 a match of the k-th composite
        const auto& sq_mus = cat.sq_mus;
        const auto& dpo_mus = cat.dpo_mus;
        const auto& composites = cat.composites;
        struct CompositeMatch
        {
            std::size_t k;
            Morphism m;
            POCElement poc;  // DPO only
        };
        std::vector<CompositeMatch> comp;
        for (std::size_t k = 0; k < composites.size(); ++k)
        {
            if (s == Semantics::sqpo)
            {
                for (auto& m : matches_sqpo(composites[k].rule, X0)) comp.push_back({k, std::move(m.m), {}});
            }
            else
            {
                for (auto& m : matches_dpo(composites[k].rule, X0)) comp.push_back({k, std::move(m.m), std::move(m.poc)});
            }
        }
        for (const auto& c : comp)
        {
            std::string line = "mu#" + std::to_string(c.k) + " m21=" + detail::describe(c.m);
            if (s == Semantics::dpo) line += " " + detail::describe(c.poc);
            report.composite.push_back(std::move(line));
        }
        if (steps.size() != comp.size())
        {
            report.failures.push_back(
                "cardinality: " + std::to_string(steps.size()) + " two-step derivations vs " + std::to_string(comp.size()) + " composite matches"
            );
        }

        auto find_comp = [&](std::size_t k, const Morphism& m, const POCElement* poc) -> std::optional<std::size_t>
        {
            for (std::size_t i = 0; i < comp.size(); ++i)
            {
                if (comp[i].k != k || !(comp[i].m == m)) continue;
                if (poc && !detail::same_poc(comp[i].poc, *poc)) continue;
                return i;
            }
            return std::nullopt;
        };

        // synthesis on every two-step derivation, then analysis back
        std::vector<std::optional<std::size_t>> forward(steps.size());
        std::vector<std::string> errors(steps.size());
        detail::parallel_for(
            steps.size(),
            jobs,
            [&](std::size_t i)
            {
                const auto& t = steps[i];
                try
                {
                    std::optional<RuleMatchIso> loc;
                    Morphism m;
                    std::optional<POCElement> poc;
                    if (s == Semantics::sqpo)
                    {
                        auto syn = synthesize_sqpo(t.first, t.second);
                        loc = locate_rule_match(sq_mus, composites, syn.mu, syn.composite);
                        if (loc) m = compose(syn.m21.m, inverse(loc->input));
                    }
                    else
                    {
                        auto syn = synthesize_dpo(t.first, t.second);
                        loc = locate_rule_match(dpo_mus, composites, syn.mu, syn.composite);
                        if (loc)
                        {
                            m = compose(syn.m21.m, inverse(loc->input));
                            poc = POCElement{compose(syn.m21.poc.a, inverse(loc->kernel)), syn.m21.poc.d};
                        }
                    }
                    if (!loc)
                    {
                        errors[i] = "synthesized rule match is not among the enumerated rule matches";
                        return;
                    }
                    auto idx = find_comp(loc->index, m, poc ? &*poc : nullptr);
                    if (!idx)
                    {
                        errors[i] = "synthesized composite match is not among the enumerated matches";
                        return;
                    }
                    const auto& c = comp[*idx];
                    auto back = s == Semantics::sqpo ? analyze_sqpo(r2, composites[c.k], r1, X0, SqPOMatch{c.m})
                                                     : analyze_dpo(r2, composites[c.k], r1, X0, DPOMatch{c.m, c.poc});
                    if (!detail::same_two_step(back, t, s))
                    {
                        errors[i] = "analysis of the synthesized pair does not give back the two-step derivation";
                        return;
                    }
                    forward[i] = *idx;
                }
                catch (const error& e)
                {
                    errors[i] = e.what();
                }
            }
        );
        std::vector<int> hit(comp.size(), 0);
        for (std::size_t i = 0; i < steps.size(); ++i)
        {
            if (!errors[i].empty())
            {
                report.failures.push_back("two-step #" + std::to_string(i) + " (" + report.two_step[i] + "): " + errors[i]);
                continue;
            }
            if (hit[*forward[i]]++)
            {
                report.failures.push_back("two-step #" + std::to_string(i) + " maps to an already used composite match #" + std::to_string(*forward[i]));
                continue;
            }
            report.pairing.emplace_back(i, *forward[i]);
        }

        // analysis on every composite match, then synthesis back
        std::vector<std::string> back_errors(comp.size());
        detail::parallel_for(
            comp.size(),
            jobs,
            [&](std::size_t i)
            {
                const auto& c = comp[i];
                try
                {
                    std::optional<RuleMatchIso> loc;
                    Morphism m;
                    std::optional<POCElement> poc;
                    if (s == Semantics::sqpo)
                    {
                        auto a = analyze_sqpo(r2, composites[c.k], r1, X0, SqPOMatch{c.m});
                        auto syn = synthesize_sqpo(a.first, a.second);
                        loc = locate_rule_match(sq_mus, composites, syn.mu, syn.composite);
                        if (loc) m = compose(syn.m21.m, inverse(loc->input));
                    }
                    else
                    {
                        auto a = analyze_dpo(r2, composites[c.k], r1, X0, DPOMatch{c.m, c.poc});
                        auto syn = synthesize_dpo(a.first, a.second);
                        loc = locate_rule_match(dpo_mus, composites, syn.mu, syn.composite);
                        if (loc)
                        {
                            m = compose(syn.m21.m, inverse(loc->input));
                            poc = POCElement{compose(syn.m21.poc.a, inverse(loc->kernel)), syn.m21.poc.d};
                        }
                    }
                    if (!loc || loc->index != c.k || !(m == c.m) || (poc && !detail::same_poc(*poc, c.poc)))
                    {
                        back_errors[i] = "synthesis of the analyzed pair does not give back the composite match";
                    }
                }
                catch (const error& e)
                {
                    back_errors[i] = e.what();
                }
            }
        );
        for (std::size_t i = 0; i < comp.size(); ++i)
        {
            if (!back_errors[i].empty()) report.failures.push_back("composite #" + std::to_string(i) + " (" + report.composite[i] + "): " + back_errors[i]);
        }
        return report;
    }

    inline CompatibilityReport compatibility_check(const Rule& r2, const Rule& r1, const GraphRef& X0, Semantics s, unsigned jobs = 1)
    {
        detail::require_rule_pair(r2, r1);
        require_same_category(*r1.I(), *X0);
        if (s == Semantics::dpo) detail::require_multigraph(X0->category(), "compatibility_check");
        return compatibility_check(make_catalog(r2, r1, s), X0, jobs);
    }

}

#endif
