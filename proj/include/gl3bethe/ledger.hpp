#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gl3bethe/actions.hpp"
#include "gl3bethe/bethe.hpp"
#include "gl3bethe/composite.hpp"
#include "gl3bethe/partitions.hpp"
#include "gl3bethe/verdict.hpp"

namespace gl3bethe {

// One assertion over named ledger terms.
struct LedgerCheck {
    std::string name;
    std::vector<std::string> terms;
    Verdict verdict;
};

// Every materialized contribution of the proof of a composite action, with the
// matchings, cancellations and totals checked on them.
struct TermLedger {
    std::vector<std::pair<std::string, StateVector>> terms;
    std::vector<LedgerCheck> checks;

    const StateVector& term(const std::string& id) const {
        for (const auto& [name, v] : terms)
            if (name == id) return v;
        throw RangeError("no ledger term named " + id);
    }

    Verdict overall() const {
        for (const auto& c : checks)
            if (!c.verdict.ok()) {
                Verdict v = c.verdict;
                if (v.witness) v.witness->detail = c.name;
                return v;
            }
        return {};
    }
};

// Multiplies one transcribed term by `factor` before the checks run.
struct LedgerPerturbation {
    std::string term;
    FieldScalar factor;
};

namespace detail {

class LedgerContext {
public:
    explicit LedgerContext(const SegmentedModel& model)
        : model_(model),
          rep1_(model.range(0, 1)),
          rep2_(model.range(1, 2)),
          cache1_(model.cache(0, 1)),
          cache2_(model.cache(1, 2)),
          c_(model.model_constant()),
          dim_(model.total().dimension()),
          reference_(model.total().vacuum_index()) {
        if (model.segment_count() != 2) throw SplitError("ledgers need a two-part model");
    }

    template <class X, class Y>
    FieldScalar F(const X& x, const Y& y) const {
        return set_product_f(x, y, c_);
    }
    FieldScalar G(const FieldScalar& x, const FieldScalar& y) const { return g(x, y, c_); }
    FieldScalar r1b(const FieldScalar& x) const { return rep2_.ratio(1, x); }
    FieldScalar r3a(const FieldScalar& x) const { return rep1_.ratio(3, x); }

    // Prefactor shared by every term of the outer sum over splittings.
    FieldScalar outer(const ParamSet& uI, const ParamSet& uII, const ParamSet& vI, const ParamSet& vII) const {
        return rep2_.ratio_product(1, uI) * rep1_.ratio_product(3, vII) * F(uII, uI) * F(vII, vI) / F(vII, uI);
    }

    StateVector P(const ParamSet& u1, const ParamSet& v1, const ParamSet& u2, const ParamSet& v2) const {
        return StateVector::disjoint_product(*cache1_.get({u1, v1}), *cache2_.get({u2, v2}), reference_);
    }

    StateVector zero() const { return StateVector(dim_); }

    template <class Fn>
    void for_each_outer(const ParamSet& u, const ParamSet& v, Fn&& fn) const {
        for (const auto& up : all_partitions_2(u))
            for (const auto& vp : all_partitions_2(v)) fn(up.first, up.second, vp.first, vp.second);
    }

    StateVector composite(const BetheIndex& idx) const { return composite_bethe_rhs(model_, 1, idx); }

    const SegmentedModel& model_;
    const ChainMonodromy& rep1_;
    const ChainMonodromy& rep2_;
    const BetheCache& cache1_;
    const BetheCache& cache2_;
    ModelConstant c_;
    BasisIndex dim_;
    BasisIndex reference_;
};

inline std::vector<SingletonPick> one(const ParamSet& s) { return picks_or_none(s, 1); }

// Sum over the outer splitting of G * (action of T_{k,col} on B1) * (action of T_{1,k} on B2)
// expanded term by term, bucketed by the pair of formula lines. Routes each pair through
// `label` to a ledger id.
inline std::map<std::string, StateVector> derived_products(const LedgerContext& cx, const ParamSet& u, const ParamSet& v,
                                                           const FieldScalar& z, ActionKind on_first, ActionKind on_second,
                                                           const std::function<std::string(int, int)>& label) {
    std::map<std::string, StateVector> out;
    cx.for_each_outer(u, v, [&](const ParamSet& uI, const ParamSet& uII, const ParamSet& vI, const ParamSet& vII) {
        FieldScalar w = cx.outer(uI, uII, vI, vII);
        std::vector<ActionTerm> t1;
        if (!(on_first == ActionKind::t32 && vI.empty())) t1 = action_terms(on_first, cx.rep1_, {uI, vI}, z);
        auto t2 = action_terms(on_second, cx.rep2_, {uII, vII}, z);
        for (const auto& a : t1)
            for (const auto& b : t2) {
                auto [it, inserted] = out.try_emplace(label(a.group, b.group), cx.zero());
                it->second.add_scaled(cx.P(a.target.u, a.target.v, b.target.u, b.target.v), w * a.coefficient * b.coefficient);
            }
    });
    return out;
}

// Same sum with both factors evaluated by applying the partial monodromy entries.
inline StateVector matrix_products(const LedgerContext& cx, const ParamSet& u, const ParamSet& v, const FieldScalar& z,
                                   std::pair<int, int> on_first, std::pair<int, int> on_second) {
    StateVector out = cx.zero();
    const auto& m1 = *cx.rep1_.entry(on_first.first, on_first.second, z);
    const auto& m2 = *cx.rep2_.entry(on_second.first, on_second.second, z);
    FieldScalar norm = cx.rep1_.vacuum_eigenvalue(2, z) * cx.rep2_.vacuum_eigenvalue(2, z);
    cx.for_each_outer(u, v, [&](const ParamSet& uI, const ParamSet& uII, const ParamSet& vI, const ParamSet& vII) {
        StateVector b1 = m1.apply(*cx.cache1_.get({uI, vI}));
        StateVector b2 = m2.apply(*cx.cache2_.get({uII, vII}));
        out.add_scaled(StateVector::disjoint_product(b1, b2, cx.reference_), cx.outer(uI, uII, vI, vII) / norm);
    });
    return out;
}

inline StateVector sum_of(const TermLedger& l, const std::vector<std::string>& ids) {
    StateVector s = l.term(ids.front());
    for (std::size_t i = 1; i < ids.size(); ++i) s += l.term(ids[i]);
    return s;
}

inline void check_equal(TermLedger& l, std::string name, std::vector<std::string> ids, const StateVector& a, const StateVector& b) {
    l.checks.push_back({std::move(name), std::move(ids), compare_vectors(a, b)});
}

inline void check_vanishes(TermLedger& l, const std::vector<std::string>& ids) {
    std::string name;
    for (const auto& id : ids) name += (name.empty() ? "" : " + ") + id;
    l.checks.push_back({name + " = 0", ids, expect_zero(sum_of(l, ids))});
}

inline void apply_perturbation(TermLedger& l, const std::optional<LedgerPerturbation>& p) {
    if (!p) return;
    for (auto& [name, v] : l.terms)
        if (name == p->term) {
            v = v.scaled(p->factor);
            return;
        }
    throw RangeError("no ledger term named " + p->term);
}

}  // namespace detail

// Terms of T13(z)/lambda2(z) acting on the composite vector with u (a-1 values) and v (b-1 values).
inline TermLedger ledger_T13(const SegmentedModel& model, const ParamSet& u, const ParamSet& v, const FieldScalar& z,
                             const std::optional<LedgerPerturbation>& perturb = std::nullopt) {
    require_generic(model, {u, v}, ParamSet{z});
    detail::LedgerContext cx(model);
    using detail::one;
    TermLedger l;
    std::map<std::string, StateVector> t;
    for (const char* id : {"A1", "A2", "A3", "C11", "C12", "C13", "C21", "C22", "C23", "C24", "C31", "C32", "C33"}) t.emplace(id, cx.zero());

    cx.for_each_outer(u, v, [&](const ParamSet& uI, const ParamSet& uII, const ParamSet& vI, const ParamSet& vII) {
        const FieldScalar G = cx.outer(uI, uII, vI, vII);
        t["A1"].add_scaled(cx.P(uI.with(z), vI.with(z), uII, vII), G * cx.r1b(z) * cx.F(uII, z));
        t["A2"].add_scaled(cx.P(uI, vI, uII.with(z), vII.with(z)), G * cx.r3a(z) * cx.F(z, vI));
        t["A3"].add_scaled(cx.P(uI, vI.with(z), uII.with(z), vII), G * cx.F(z, uI) * cx.F(vII, z));

        // First partial vector fixed at ({uI,z};{vI,z}).
        t["C11"].add_scaled(cx.P(uI.with(z), vI.with(z), uII, vII), G * cx.r1b(z) * cx.F(uII, z));
        for (const auto& pu : one(uII)) {
            const auto& ui = pu.picks[0];
            t["C12"].add_scaled(cx.P(uI.with(z), vI.with(z), pu.rest.with(z), vII),
                                G * cx.F(vII, z) * cx.r1b(ui) * cx.G(z, ui) * cx.F(pu.rest, ui) / cx.F(vII, ui));
            for (const auto& pv : one(vII)) {
                const auto& vi = pv.picks[0];
                t["C13"].add_scaled(cx.P(uI.with(z), vI.with(z), pu.rest.with(z), pv.rest.with(z)),
                                    G * cx.r1b(ui) * cx.G(z, vi) * cx.G(vi, ui) * cx.F(pu.rest, ui) * cx.F(pv.rest, vi) / cx.F(vII, ui));
            }
        }

        // Product of two brackets.
        t["C21"].add_scaled(cx.P(uI, vI.with(z), uII.with(z), vII), G * cx.F(z, uI) * cx.F(vII, z));
        for (const auto& pu : one(uI)) {
            const auto& ui = pu.picks[0];
            t["C22"].add_scaled(cx.P(pu.rest.with(z), vI.with(z), uII.with(z), vII), G * cx.G(ui, z) * cx.F(ui, pu.rest) * cx.F(vII, z));
        }
        for (const auto& pv : one(vII)) {
            const auto& vi = pv.picks[0];
            t["C23"].add_scaled(cx.P(uI, vI.with(z), uII.with(z), pv.rest.with(z)), G * cx.F(z, uI) * cx.G(z, vi) * cx.F(pv.rest, vi));
            for (const auto& pu : one(uI)) {
                const auto& ui = pu.picks[0];
                t["C24"].add_scaled(cx.P(pu.rest.with(z), vI.with(z), uII.with(z), pv.rest.with(z)),
                                    G * cx.G(ui, z) * cx.F(ui, pu.rest) * cx.G(z, vi) * cx.F(pv.rest, vi));
            }
        }

        // Second partial vector fixed at ({uII,z};{vII,z}).
        t["C31"].add_scaled(cx.P(uI, vI, uII.with(z), vII.with(z)), G * cx.r3a(z) * cx.F(z, vI));
        for (const auto& pv : one(vI)) {
            const auto& vi = pv.picks[0];
            t["C32"].add_scaled(cx.P(uI, pv.rest.with(z), uII.with(z), vII.with(z)),
                                G * cx.F(z, uI) * cx.r3a(vi) * cx.G(vi, z) * cx.F(vi, pv.rest) / cx.F(vi, uI));
            for (const auto& pu : one(uI)) {
                const auto& ui = pu.picks[0];
                t["C33"].add_scaled(cx.P(pu.rest.with(z), pv.rest.with(z), uII.with(z), vII.with(z)),
                                    G * cx.r3a(vi) * cx.G(ui, z) * cx.G(vi, ui) * cx.F(ui, pu.rest) * cx.F(vi, pv.rest) / cx.F(vi, uI));
            }
        }
    });
    for (const char* id : {"A1", "A2", "A3", "C11", "C12", "C13", "C21", "C22", "C23", "C24", "C31", "C32", "C33"})
        l.terms.emplace_back(id, std::move(t[id]));
    detail::apply_perturbation(l, perturb);

    detail::check_equal(l, "A1 = C11", {"A1", "C11"}, l.term("A1"), l.term("C11"));
    detail::check_equal(l, "A3 = C21", {"A3", "C21"}, l.term("A3"), l.term("C21"));
    detail::check_equal(l, "A2 = C31", {"A2", "C31"}, l.term("A2"), l.term("C31"));
    detail::check_vanishes(l, {"C12", "C22"});
    detail::check_vanishes(l, {"C23", "C32"});
    detail::check_vanishes(l, {"C13", "C24", "C33"});

    const StateVector a_total = detail::sum_of(l, {"A1", "A2", "A3"});
    const StateVector c_total = detail::sum_of(l, {"C11", "C12", "C13", "C21", "C22", "C23", "C24", "C31", "C32", "C33"});
    detail::check_equal(l, "A1 + A2 + A3 = composite vector at ({u,z};{v,z})", {"A1", "A2", "A3"}, a_total,
                        cx.composite({u.with(z), v.with(z)}));
    const auto& total = model.total();
    StateVector lhs = total.entry(1, 3, z)->apply(cx.composite({u, v})).scaled(FieldScalar(1 / total.vacuum_eigenvalue(2, z)));
    detail::check_equal(l, "C1 + C2 + C3 = T13 on composite vector", {}, c_total, lhs);

    // Each C_k recomputed from the action formulas and from the partial monodromy entries.
    auto derived1 = detail::derived_products(cx, u, v, z, ActionKind::t13, ActionKind::t11,
                                             [](int, int q) { return "C1" + std::to_string(q); });
    auto derived2 = detail::derived_products(cx, u, v, z, ActionKind::t23, ActionKind::t12,
                                             [](int p, int q) { return "C2" + std::to_string((q - 1) * 2 + p); });
    auto derived3 = detail::derived_products(cx, u, v, z, ActionKind::t33, ActionKind::t13,
                                             [](int p, int) { return "C3" + std::to_string(p); });
    for (auto* d : {&derived1, &derived2, &derived3})
        for (auto& [id, vec] : *d) detail::check_equal(l, id + " matches the action-formula expansion", {id}, l.term(id), vec);
    detail::check_equal(l, "C1 = T11(2) T13(1) products", {}, detail::sum_of(l, {"C11", "C12", "C13"}),
                        detail::matrix_products(cx, u, v, z, {1, 3}, {1, 1}));
    detail::check_equal(l, "C2 = T12(2) T23(1) products", {}, detail::sum_of(l, {"C21", "C22", "C23", "C24"}),
                        detail::matrix_products(cx, u, v, z, {2, 3}, {1, 2}));
    detail::check_equal(l, "C3 = T13(2) T33(1) products", {}, detail::sum_of(l, {"C31", "C32", "C33"}),
                        detail::matrix_products(cx, u, v, z, {3, 3}, {1, 3}));
    return l;
}

// Terms of T12(z)/lambda2(z) acting on the composite vector with u (a-1 values) and v (b values).
inline TermLedger ledger_T12(const SegmentedModel& model, const ParamSet& u, const ParamSet& v, const FieldScalar& z,
                             const std::optional<LedgerPerturbation>& perturb = std::nullopt) {
    require_generic(model, {u, v}, ParamSet{z});
    detail::LedgerContext cx(model);
    using detail::one;
    static const std::vector<std::string> gamma_ids = {"gamma11", "gamma12", "gamma13", "gamma14", "gamma15", "gamma16", "gamma21",
                                                       "gamma22", "gamma23", "gamma24", "gamma25", "gamma26", "gamma27", "gamma28",
                                                       "gamma31", "gamma32", "gamma33", "gamma34", "gamma35"};
    static const std::vector<std::string> d_ids = {"D1", "D2", "D3", "D4", "D5"};
    TermLedger l;
    std::map<std::string, StateVector> t;
    for (const auto& id : gamma_ids) t.emplace(id, cx.zero());
    for (const auto& id : d_ids) t.emplace(id, cx.zero());

    // Terms with the plain splitting v => {vI, vII}.
    cx.for_each_outer(u, v, [&](const ParamSet& uI, const ParamSet& uII, const ParamSet& vI, const ParamSet& vII) {
        const FieldScalar G = cx.outer(uI, uII, vI, vII);
        t["D1"].add_scaled(cx.P(uI.with(z), vI, uII, vII), G * cx.r1b(z) * cx.F(uII, z) * cx.F(vI, z));
        t["D3"].add_scaled(cx.P(uI, vI, uII.with(z), vII), G * cx.F(z, uI) * cx.F(v, z));

        t["gamma11"].add_scaled(cx.P(uI.with(z), vI, uII, vII), G * cx.r1b(z) * cx.F(vI, z) * cx.F(uII, z));
        for (const auto& pu : one(uII)) {
            const auto& ui = pu.picks[0];
            t["gamma12"].add_scaled(cx.P(uI.with(z), vI, pu.rest.with(z), vII),
                                    G * cx.r1b(ui) * cx.G(z, ui) * cx.F(vI, z) * cx.F(vII, z) * cx.F(pu.rest, ui) / cx.F(vII, ui));
            for (const auto& pv : one(vII)) {
                const auto& vi = pv.picks[0];
                t["gamma13"].add_scaled(cx.P(uI.with(z), vI, pu.rest.with(z), pv.rest.with(z)),
                                        G * cx.r1b(ui) * cx.G(z, vi) * cx.G(vi, ui) * cx.F(vI, z) * cx.F(pu.rest, ui) *
                                            cx.F(pv.rest, vi) / cx.F(vII, ui));
            }
        }
        for (const auto& pw : one(vI)) {
            const auto& viii = pw.picks[0];
            const ParamSet& viv = pw.rest;
            t["gamma14"].add_scaled(cx.P(uI.with(z), viv.with(z), uII, vII),
                                    G * cx.r1b(z) * cx.G(z, viii) * cx.F(viv, viii) * cx.F(uII, z));
            for (const auto& pu : one(uII)) {
                const auto& ui = pu.picks[0];
                t["gamma15"].add_scaled(cx.P(uI.with(z), viv.with(z), pu.rest.with(z), vII),
                                        G * cx.r1b(ui) * cx.G(z, ui) * cx.G(z, viii) * cx.F(viv, viii) * cx.F(vII, z) *
                                            cx.F(pu.rest, ui) / cx.F(vII, ui));
                for (const auto& pv : one(vII)) {
                    const auto& vi = pv.picks[0];
                    t["gamma16"].add_scaled(cx.P(uI.with(z), viv.with(z), pu.rest.with(z), pv.rest.with(z)),
                                            G * cx.r1b(ui) * cx.G(z, viii) * cx.G(z, vi) * cx.G(vi, ui) * cx.F(viv, viii) *
                                                cx.F(pu.rest, ui) * cx.F(pv.rest, vi) / cx.F(vII, ui));
                }
            }
        }

        t["gamma21"].add_scaled(cx.P(uI, vI, uII.with(z), vII), G * cx.F(vI, z) * cx.F(z, uI) * cx.F(vII, z));
        for (const auto& pw : one(vI)) {
            const auto& viii = pw.picks[0];
            t["gamma22"].add_scaled(cx.P(uI, pw.rest.with(z), uII.with(z), vII),
                                    G * cx.G(z, viii) * cx.F(z, uI) * cx.F(pw.rest, viii) * cx.F(vII, z));
        }
        for (const auto& pu : one(uI)) {
            const auto& ui = pu.picks[0];
            t["gamma23"].add_scaled(cx.P(pu.rest.with(z), vI, uII.with(z), vII),
                                    G * cx.G(ui, z) * cx.F(vI, z) * cx.F(ui, pu.rest) * cx.F(vII, z));
            for (const auto& pw : one(vI)) {
                const auto& viii = pw.picks[0];
                t["gamma24"].add_scaled(cx.P(pu.rest.with(z), pw.rest.with(z), uII.with(z), vII),
                                        G * cx.G(z, viii) * cx.G(ui, z) * cx.F(ui, pu.rest) * cx.F(pw.rest, viii) * cx.F(vII, z));
            }
        }
        for (const auto& pv : one(vII)) {
            const auto& vi = pv.picks[0];
            t["gamma25"].add_scaled(cx.P(uI, vI, uII.with(z), pv.rest.with(z)),
                                    G * cx.G(z, vi) * cx.F(vI, z) * cx.F(z, uI) * cx.F(pv.rest, vi));
            for (const auto& pw : one(vI)) {
                const auto& viii = pw.picks[0];
                t["gamma26"].add_scaled(cx.P(uI, pw.rest.with(z), uII.with(z), pv.rest.with(z)),
                                        G * cx.G(z, viii) * cx.G(z, vi) * cx.F(z, uI) * cx.F(pw.rest, viii) * cx.F(pv.rest, vi));
            }
            for (const auto& pu : one(uI)) {
                const auto& ui = pu.picks[0];
                t["gamma27"].add_scaled(cx.P(pu.rest.with(z), vI, uII.with(z), pv.rest.with(z)),
                                        G * cx.G(ui, z) * cx.G(z, vi) * cx.F(ui, pu.rest) * cx.F(vI, z) * cx.F(pv.rest, vi));
                for (const auto& pw : one(vI)) {
                    const auto& viii = pw.picks[0];
                    t["gamma28"].add_scaled(cx.P(pu.rest.with(z), pw.rest.with(z), uII.with(z), pv.rest.with(z)),
                                            G * cx.G(z, viii) * cx.G(ui, z) * cx.G(z, vi) * cx.F(ui, pu.rest) * cx.F(pw.rest, viii) *
                                                cx.F(pv.rest, vi));
                }
            }
        }

        const ParamSet uIIz = uII.with(z);
        const ParamSet vIIz = vII.with(z);
        for (const auto& pv : one(vI)) {
            const auto& vi = pv.picks[0];
            const ParamSet& viii = pv.rest;
            for (const auto& pu : one(uI)) {
                const auto& ui = pu.picks[0];
                t["gamma31"].add_scaled(cx.P(pu.rest.with(z), viii, uIIz, vIIz),
                                        G * cx.r3a(vi) * cx.G(ui, z) * cx.G(vi, ui) * cx.F(ui, pu.rest) * cx.F(vi, viii) *
                                            cx.F(viii, z) / cx.F(vi, uI));
            }
            t["gamma32"].add_scaled(cx.P(uI, viii, uIIz, vIIz), G * cx.r3a(z) * cx.G(z, vi) * cx.F(z, viii) * cx.F(viii, vi));
            t["gamma33"].add_scaled(cx.P(uI, viii, uIIz, vIIz),
                                    G * cx.r3a(vi) * cx.G(vi, z) * cx.F(viii, z) * cx.F(vi, viii) * cx.F(z, uI) / cx.F(vi, uI));
        }
        for (const auto& pv : picks_or_none(vI, 2)) {
            const auto& vi = pv.picks[0];
            const auto& vii = pv.picks[1];
            const ParamSet& viii = pv.rest;
            FieldScalar common = G * cx.r3a(vi) * cx.G(z, vii) * cx.F(vi, vii) * cx.F(vi, viii) * cx.F(viii, vii) / cx.F(vi, uI);
            t["gamma34"].add_scaled(cx.P(uI, viii.with(z), uIIz, vIIz), common * cx.G(vi, z) * cx.F(z, uI));
            for (const auto& pu : one(uI)) {
                const auto& ui = pu.picks[0];
                t["gamma35"].add_scaled(cx.P(pu.rest.with(z), viii.with(z), uIIz, vIIz),
                                        common * cx.G(ui, z) * cx.G(vi, ui) * cx.F(ui, pu.rest));
            }
        }
    });

    // Terms with v => {v0, vI, vII}.
    for (const auto& up : all_partitions_2(u)) {
        const ParamSet& uI = up.first;
        const ParamSet& uII = up.second;
        for (const auto& p0 : one(v)) {
            const auto& v0 = p0.picks[0];
            for (const auto& vp : all_partitions_2(p0.rest)) {
                const ParamSet& vI = vp.first;
                const ParamSet& vII = vp.second;
                FieldScalar G0 = cx.outer(uI, uII, vI, vII) * cx.G(z, v0) * cx.F(vII, v0) * cx.F(vI, v0);
                t["D2"].add_scaled(cx.P(uI.with(z), vI.with(z), uII, vII), G0 * cx.r1b(z) * cx.F(uII, z));
                t["D4"].add_scaled(cx.P(uI, vI.with(z), uII.with(z), vII), G0 * cx.F(z, uI) * cx.F(vII, z));
                t["D5"].add_scaled(cx.P(uI, vI, uII.with(z), vII.with(z)), G0 * cx.r3a(z) * cx.F(z, vI));
            }
        }
    }

    for (const auto& id : d_ids) l.terms.emplace_back(id, std::move(t[id]));
    for (const auto& id : gamma_ids) l.terms.emplace_back(id, std::move(t[id]));
    detail::apply_perturbation(l, perturb);

    detail::check_equal(l, "gamma11 = D1", {"gamma11", "D1"}, l.term("gamma11"), l.term("D1"));
    detail::check_equal(l, "gamma21 = D3", {"gamma21", "D3"}, l.term("gamma21"), l.term("D3"));
    detail::check_equal(l, "gamma14 = D2", {"gamma14", "D2"}, l.term("gamma14"), l.term("D2"));
    detail::check_equal(l, "gamma22 = D4", {"gamma22", "D4"}, l.term("gamma22"), l.term("D4"));
    detail::check_equal(l, "gamma32 = D5", {"gamma32", "D5"}, l.term("gamma32"), l.term("D5"));
    detail::check_vanishes(l, {"gamma12", "gamma23"});
    detail::check_vanishes(l, {"gamma25", "gamma33"});
    detail::check_vanishes(l, {"gamma15", "gamma24"});
    detail::check_vanishes(l, {"gamma26", "gamma34"});
    detail::check_vanishes(l, {"gamma13", "gamma27", "gamma31"});
    detail::check_vanishes(l, {"gamma16", "gamma28", "gamma35"});

    const auto& c = model.model_constant();
    StateVector d_lincomb = cx.composite({u.with(z), v}).scaled(set_product_f(v, z, c));
    for (const auto& p : one(v))
        d_lincomb.add_scaled(cx.composite({u.with(z), p.rest.with(z)}), g(z, p.picks[0], c) * set_product_f(p.rest, p.picks[0], c));
    const StateVector d_total = detail::sum_of(l, d_ids);
    const StateVector e_total = detail::sum_of(l, gamma_ids);
    detail::check_equal(l, "D1 + ... + D5 = linear combination of composite vectors", d_ids, d_total, d_lincomb);
    detail::check_equal(l, "E1 + E2 + E3 = D", {}, e_total, d_total);
    const auto& total = model.total();
    StateVector lhs = total.entry(1, 2, z)->apply(cx.composite({u, v})).scaled(FieldScalar(1 / total.vacuum_eigenvalue(2, z)));
    detail::check_equal(l, "E1 + E2 + E3 = T12 on composite vector", {}, e_total, lhs);

    auto derived1 = detail::derived_products(cx, u, v, z, ActionKind::t12, ActionKind::t11,
                                             [](int p, int q) { return "gamma1" + std::to_string((p - 1) * 3 + q); });
    auto derived2 = detail::derived_products(cx, u, v, z, ActionKind::t22, ActionKind::t12,
                                             [](int p, int q) { return "gamma2" + std::to_string((q - 1) * 4 + p); });
    auto derived3 = detail::derived_products(cx, u, v, z, ActionKind::t32, ActionKind::t13,
                                             [](int p, int) { return "gamma3" + std::to_string(p); });
    for (auto* d : {&derived1, &derived2, &derived3})
        for (auto& [id, vec] : *d) detail::check_equal(l, id + " matches the action-formula expansion", {id}, l.term(id), vec);
    detail::check_equal(l, "E1 = T11(2) T12(1) products", {},
                        detail::sum_of(l, {"gamma11", "gamma12", "gamma13", "gamma14", "gamma15", "gamma16"}),
                        detail::matrix_products(cx, u, v, z, {1, 2}, {1, 1}));
    detail::check_equal(l, "E2 = T12(2) T22(1) products", {},
                        detail::sum_of(l, {"gamma21", "gamma22", "gamma23", "gamma24", "gamma25", "gamma26", "gamma27", "gamma28"}),
                        detail::matrix_products(cx, u, v, z, {2, 2}, {1, 2}));
    detail::check_equal(l, "E3 = T13(2) T32(1) products", {},
                        detail::sum_of(l, {"gamma31", "gamma32", "gamma33", "gamma34", "gamma35"}),
                        detail::matrix_products(cx, u, v, z, {3, 2}, {1, 3}));
    return l;
}

}  // namespace gl3bethe
