#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gl3bethe/bethe.hpp"
#include "gl3bethe/errors.hpp"
#include "gl3bethe/partitions.hpp"
#include "gl3bethe/ratfun.hpp"
#include "gl3bethe/rep.hpp"
#include "gl3bethe/verdict.hpp"

namespace gl3bethe {

// The seven monodromy entries whose action on Bethe vectors has a closed form.
enum class ActionKind { t13, t12, t23, t11, t22, t33, t32 };

inline constexpr ActionKind all_action_kinds[] = {ActionKind::t13, ActionKind::t12, ActionKind::t23, ActionKind::t11,
                                                  ActionKind::t22, ActionKind::t33, ActionKind::t32};

inline std::pair<int, int> indices(ActionKind k) {
    switch (k) {
        case ActionKind::t13: return {1, 3};
        case ActionKind::t12: return {1, 2};
        case ActionKind::t23: return {2, 3};
        case ActionKind::t11: return {1, 1};
        case ActionKind::t22: return {2, 2};
        case ActionKind::t33: return {3, 3};
        case ActionKind::t32: return {3, 2};
    }
    return {0, 0};
}

inline std::string to_string(ActionKind k) {
    auto [i, j] = indices(k);
    return "T" + std::to_string(i) + std::to_string(j);
}

// One term coefficient * B(target). `group` numbers the lines of the formula from 1;
// for T32 the two halves of the single-sum line are groups 2 and 3.
struct ActionTerm {
    FieldScalar coefficient;
    BetheIndex target;
    int group;
};

// Right-hand side of T_ij(z) B(u;v) / lambda2(z) as a list of Bethe vector terms.
// The vacuum ratios r1, r3 are those of `rep`.
inline std::vector<ActionTerm> action_terms(ActionKind kind, const Representation& rep, const BetheIndex& idx,
                                            const FieldScalar& z) {
    const auto& c = rep.model_constant();
    const ParamSet& u = idx.u;
    const ParamSet& v = idx.v;
    auto F = [&](const auto& x, const auto& y) { return set_product_f(x, y, c); };
    auto G = [&](const FieldScalar& x, const FieldScalar& y) { return g(x, y, c); };
    auto r1 = [&](const FieldScalar& x) { return rep.ratio(1, x); };
    auto r3 = [&](const FieldScalar& x) { return rep.ratio(3, x); };
    std::vector<ActionTerm> out;
    auto add = [&](FieldScalar coeff, ParamSet tu, ParamSet tv, int group) {
        out.push_back({std::move(coeff), BetheIndex{std::move(tu), std::move(tv)}, group});
    };
    const auto us = picks_or_none(u, 1);
    const auto vs = picks_or_none(v, 1);

    switch (kind) {
        case ActionKind::t13:
            add(1, u.with(z), v.with(z), 1);
            break;
        case ActionKind::t12:
            add(F(v, z), u.with(z), v, 1);
            for (const auto& p : vs) add(G(z, p.picks[0]) * F(p.rest, p.picks[0]), u.with(z), p.rest.with(z), 2);
            break;
        case ActionKind::t23:
            add(F(z, u), u, v.with(z), 1);
            for (const auto& p : us) add(G(p.picks[0], z) * F(p.picks[0], p.rest), p.rest.with(z), v.with(z), 2);
            break;
        case ActionKind::t11:
            add(r1(z) * F(u, z), u, v, 1);
            for (const auto& p : us) {
                const auto& u0 = p.picks[0];
                add(F(v, z) * r1(u0) * G(z, u0) * F(p.rest, u0) / F(v, u0), p.rest.with(z), v, 2);
            }
            for (const auto& p : us)
                for (const auto& q : vs) {
                    const auto& u0 = p.picks[0];
                    const auto& v0 = q.picks[0];
                    add(r1(u0) * G(z, v0) * G(v0, u0) * F(p.rest, u0) * F(q.rest, v0) / F(v, u0), p.rest.with(z),
                        q.rest.with(z), 3);
                }
            break;
        case ActionKind::t22:
            add(F(v, z) * F(z, u), u, v, 1);
            for (const auto& q : vs) add(F(z, u) * G(z, q.picks[0]) * F(q.rest, q.picks[0]), u, q.rest.with(z), 2);
            for (const auto& p : us) add(F(v, z) * G(p.picks[0], z) * F(p.picks[0], p.rest), p.rest.with(z), v, 3);
            for (const auto& p : us)
                for (const auto& q : vs)
                    add(G(z, q.picks[0]) * G(p.picks[0], z) * F(p.picks[0], p.rest) * F(q.rest, q.picks[0]), p.rest.with(z),
                        q.rest.with(z), 4);
            break;
        case ActionKind::t33:
            add(r3(z) * F(z, v), u, v, 1);
            for (const auto& q : vs) {
                const auto& v0 = q.picks[0];
                add(F(z, u) * r3(v0) * G(v0, z) * F(v0, q.rest) / F(v0, u), u, q.rest.with(z), 2);
            }
            for (const auto& p : us)
                for (const auto& q : vs) {
                    const auto& u0 = p.picks[0];
                    const auto& v0 = q.picks[0];
                    add(r3(v0) * G(p.picks[0], z) * G(v0, u0) * F(u0, p.rest) * F(v0, q.rest) / F(v0, u), p.rest.with(z),
                        q.rest.with(z), 3);
                }
            break;
        case ActionKind::t32:
            if (v.empty()) throw RangeError("T32 acting on a vector without colour-2 parameters has no formula");
            for (const auto& p : us)
                for (const auto& q : vs) {
                    const auto& u0 = p.picks[0];
                    const auto& v0 = q.picks[0];
                    add(r3(v0) * G(u0, z) * G(v0, u0) * F(u0, p.rest) * F(v0, q.rest) * F(q.rest, z) / F(v0, u),
                        p.rest.with(z), q.rest, 1);
                }
            for (const auto& q : vs) {
                const auto& v0 = q.picks[0];
                add(G(z, v0) * r3(z) * F(z, q.rest) * F(q.rest, v0), u, q.rest, 2);
            }
            for (const auto& q : vs) {
                const auto& v0 = q.picks[0];
                add(-G(z, v0) * r3(v0) * F(q.rest, z) * F(v0, q.rest) * F(z, u) / F(v0, u), u, q.rest, 3);
            }
            for (const auto& q : picks_or_none(v, 2)) {
                const auto& v0 = q.picks[0];
                const auto& v1 = q.picks[1];
                FieldScalar common = r3(v0) * G(z, v1) * F(v0, v1) * F(v0, q.rest) * F(q.rest, v1) / F(v0, u);
                add(common * G(v0, z) * F(z, u), u, q.rest.with(z), 4);
                for (const auto& p : us) {
                    const auto& u0 = p.picks[0];
                    add(common * G(u0, z) * G(v0, u0) * F(u0, p.rest), p.rest.with(z), q.rest.with(z), 5);
                }
            }
            break;
    }
    return out;
}

inline StateVector sum_terms(const std::vector<ActionTerm>& terms, const BetheCache& cache, std::optional<int> drop_group = {}) {
    StateVector out(cache.representation().dimension());
    for (const auto& t : terms) {
        if (drop_group && t.group == *drop_group) continue;
        out.add_scaled(*cache.get(t.target), t.coefficient);
    }
    return out;
}

inline StateVector act_rhs(ActionKind kind, const BetheCache& cache, const BetheIndex& idx, const FieldScalar& z) {
    return sum_terms(action_terms(kind, cache.representation(), idx, z), cache);
}

inline StateVector act_lhs(ActionKind kind, const BetheCache& cache, const BetheIndex& idx, const FieldScalar& z) {
    const auto& rep = cache.representation();
    auto [i, j] = indices(kind);
    return rep.entry(i, j, z)->apply(*cache.get(idx)).scaled(FieldScalar(1 / rep.vacuum_eigenvalue(2, z)));
}

inline void require_generic_instance(const Representation& rep, const BetheIndex& idx, const ParamSet& extra) {
    if (auto viol = genericity_check({{"u", idx.u}, {"v", idx.v}, {"z", extra}, {"xi", rep.poles()}}, rep.model_constant()))
        throw GenericityError(viol->describe());
}

struct ActionOptions {
    // Leave out one group of terms; used as a negative control.
    std::optional<int> drop_group;
};

inline Verdict verify_action(ActionKind kind, const BetheCache& cache, const BetheIndex& idx, const FieldScalar& z,
                             const ActionOptions& options = {}) {
    require_generic_instance(cache.representation(), idx, ParamSet{z});
    if (kind == ActionKind::t32 && idx.v.empty()) return Verdict::skipped("T32 needs at least one colour-2 parameter");
    StateVector lhs = act_lhs(kind, cache, idx, z);
    StateVector rhs = sum_terms(action_terms(kind, cache.representation(), idx, z), cache, options.drop_group);
    return compare_vectors(lhs, rhs, to_string(kind));
}

}  // namespace gl3bethe
