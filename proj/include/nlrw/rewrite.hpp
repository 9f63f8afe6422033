#ifndef NLRW_REWRITE_HPP
#define NLRW_REWRITE_HPP

// Rules, matches and direct derivations.
//
//     O <--o-- K --i--> I
//     |        |        |
//   comatch    k      match
//     v        v        v
//     X' <---- X̄ -----> X
//
// SqPO: the right square is an FPC, the left a pushout.
// DPO:  the right square is a chosen POC element, the left a pushout.

#include <optional>
#include <string>
#include <vector>

#include "classifier.hpp"
#include "graph.hpp"
#include "homs.hpp"
#include "iso.hpp"
#include "limits.hpp"
#include "multi.hpp"

namespace nlrw
{

    class invalid_match : public error
    {
    public:
        using error::error;
    };

    enum class Semantics
    {
        sqpo,
        dpo
    };

    inline std::string_view to_string(Semantics s)
    {
        return s == Semantics::sqpo ? "sqpo" : "dpo";
    }

    inline Semantics parse_semantics(std::string_view s)
    {
        if (s == "sqpo") return Semantics::sqpo;
        if (s == "dpo") return Semantics::dpo;
        throw error("unknown semantics '" + std::string(s) + "'");
    }

    /// O <-output_leg- K -input_leg-> I, legs arbitrary.
    struct Rule
    {
        std::string name;
        Morphism output_leg;
        Morphism input_leg;

        const GraphRef& K() const { return input_leg.dom; }
        const GraphRef& I() const { return input_leg.cod; }
        const GraphRef& O() const { return output_leg.cod; }
        Category category() const { return K()->category(); }

        bool linear() const { return is_regular_mono(input_leg) && is_regular_mono(output_leg); }

        /// I <- K -> O read the other way round.
        Rule mirrored() const { return Rule{name + "^op", input_leg, output_leg}; }
    };

    inline Rule make_rule(std::string name, Morphism output_leg, Morphism input_leg)
    {
        if (!same_object(output_leg.dom, input_leg.dom)) throw invalid_morphism("rule legs must share their domain K");
        require_same_category(*output_leg.cod, *input_leg.cod);
        if (!is_valid(output_leg) || !is_valid(input_leg)) throw invalid_morphism("rule leg is not a graph morphism");
        return Rule{std::move(name), std::move(output_leg), std::move(input_leg)};
    }

    /// Identity rule X <- X -> X.
    inline Rule identity_rule(const GraphRef& X, std::string name = "id")
    {
        return Rule{std::move(name), identity(X), identity(X)};
    }

    struct SqPOMatch
    {
        Morphism m;
    };

    struct DPOMatch
    {
        Morphism m;
        POCElement poc;
    };

    struct DerivationDiagram
    {
        Semantics semantics = Semantics::sqpo;
        Rule rule;
        Morphism match;       // I -> X
        Morphism k;           // K -> X̄
        Morphism complement;  // X̄ -> X
        Morphism comatch;     // O -> X'
        Morphism result_leg;  // X̄ -> X'
        GraphRef canonical_result;
        Morphism to_canonical;  // X' -> canonical_result

        const GraphRef& host() const { return match.cod; }
        const GraphRef& complement_object() const { return k.cod; }
        const GraphRef& result() const { return comatch.cod; }

        Square input_square() const { return Square{rule.input_leg, k, match, complement}; }
        Square output_square() const { return Square{rule.output_leg, k, comatch, result_leg}; }
    };

    namespace detail
    {
        inline void require_match(const Rule& r, const GraphRef& X, const Morphism& m)
        {
            if (!same_object(m.dom, r.I())) throw invalid_match("match domain is not the rule's input motif");
            if (!same_object(m.cod, X)) throw invalid_match("match codomain is not the host graph");
            if (!is_valid(m)) throw invalid_match("match is not a graph morphism");
            if (!is_regular_mono(m)) throw invalid_match("match is not a regular mono");
        }

        inline DerivationDiagram finish_derivation(Semantics s, const Rule& r, const Morphism& m, Morphism k, Morphism complement)
        {
            auto po = pushout_rm(k, r.output_leg);
            auto canon = canonicalize(po.object);
            return DerivationDiagram{s, r, m, std::move(k), std::move(complement), po.from_right, po.from_left, canon.graph, canon.iso};
        }
    }

    inline std::vector<SqPOMatch> matches_sqpo(const Rule& r, const GraphRef& X)
    {
        require_same_category(*r.I(), *X);
        std::vector<SqPOMatch> out;
        for (auto& m : enumerate_morphisms(r.I(), X, HomFilter::regular_mono)) out.push_back(SqPOMatch{std::move(m)});
        return out;
    }

    inline DerivationDiagram derive_sqpo(const GraphRef& X, const Rule& r, const SqPOMatch& m)
    {
        detail::require_match(r, X, m.m);
        auto c = fpc(r.input_leg, m.m);
        return detail::finish_derivation(Semantics::sqpo, r, m.m, c.n, c.g);
    }

    inline std::vector<DPOMatch> matches_dpo(const Rule& r, const GraphRef& X)
    {
        require_same_category(*r.I(), *X);
        std::vector<DPOMatch> out;
        for (const auto& m : enumerate_morphisms(r.I(), X, HomFilter::regular_mono))
        {
            for (auto& poc : mpoc(r.input_leg, m)) out.push_back(DPOMatch{m, std::move(poc)});
        }
        return out;
    }

    inline DerivationDiagram derive_dpo(const GraphRef& X, const Rule& r, const DPOMatch& dm)
    {
        detail::require_match(r, X, dm.m);
        if (!same_object(dm.poc.a.dom, r.K()) || !same_object(dm.poc.d.cod, X) || !same_object(dm.poc.a.cod, dm.poc.d.dom))
        {
            throw invalid_match("POC element does not fit the rule and host");
        }
        if (!detail::is_poc(r.input_leg, dm.m, dm.poc.a, dm.poc.d)) throw invalid_match("POC element is not a pushout complement");
        return detail::finish_derivation(Semantics::dpo, r, dm.m, dm.poc.a, dm.poc.d);
    }

    /// Iso between the results of two derivations of the same rule along the
    /// same match: the complements are related by the unique iso over X and
    /// under K, the results by the one it induces.
    inline std::optional<Morphism> derivation_result_iso(const DerivationDiagram& a, const DerivationDiagram& b)
    {
        auto iota = find_iso_commuting(
            a.complement_object(), b.complement_object(), {IsoCondition::under(a.k, b.k), IsoCondition::over(a.complement, b.complement)}
        );
        if (!iota) return std::nullopt;
        return find_iso_commuting(
            a.result(),
            b.result(),
            {IsoCondition::under(a.comatch, b.comatch), IsoCondition::under(a.result_leg, compose(b.result_leg, *iota))}
        );
    }

}

#endif
