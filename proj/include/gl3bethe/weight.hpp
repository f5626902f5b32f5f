#pragma once

#include <cstddef>
#include <vector>

#include "gl3bethe/composite.hpp"

namespace gl3bethe {

// Variable of an ordered coloured multiset: colour 1 for u, 2 for v, position in the ordering.
struct ColouredPoint {
    FieldScalar t;
    int colour;
    std::size_t order;
};

inline FieldScalar beta_factor(const ColouredPoint& i, const ColouredPoint& j, const ModelConstant& c) {
    return i.colour == j.colour ? f(j.t, i.t, c) : FieldScalar(1);
}

inline FieldScalar gamma_factor(const ColouredPoint& i, const ColouredPoint& j, const ModelConstant& c) {
    if (i.colour == j.colour + 1) return 1 / f(i.t, j.t, c);
    if (j.colour == i.colour + 1) return f(j.t, i.t, c);
    return 1;
}

// Coproduct factor for a splitting of the multiset into (first, second).
inline FieldScalar coproduct_factor(const std::vector<ColouredPoint>& first, const std::vector<ColouredPoint>& second,
                                    const ModelConstant& c) {
    FieldScalar out = 1;
    for (const auto& i : first)
        for (const auto& j : second) out *= beta_factor(i, j, c);
    for (const auto& i : second)
        for (const auto& j : first)
            if (i.order < j.order) out *= gamma_factor(i, j, c);
    return out;
}

// w = B f(v,u) lambda2(u) lambda2(v)
inline StateVector weight_vector(const BetheCache& cache, const BetheIndex& idx) {
    const Representation& rep = cache.representation();
    FieldScalar norm = set_product_f(idx.v, idx.u, rep.model_constant()) * rep.eigenvalue_product(2, idx.u) * rep.eigenvalue_product(2, idx.v);
    return cache.get(idx)->scaled(norm);
}

struct WeightOptions {
    // Evaluate lambda3 of the first part at uII instead of vII.
    bool lambda3_on_u = false;
};

// Coproduct of the weight function on a two-part model, with the coproduct factor checked
// against its closed form and the normalized coefficients checked against the composite formula.
inline Verdict weight_function_check(const SegmentedModel& model, const BetheIndex& idx, const WeightOptions& options = {}) {
    if (model.segment_count() != 2) throw SplitError("weight-function check needs a two-part model");
    require_generic(model, idx);
    const auto& c = model.model_constant();
    const ChainMonodromy& r1 = model.range(0, 1);
    const ChainMonodromy& r2 = model.range(1, 2);
    const BetheCache& c1 = model.cache(0, 1);
    const BetheCache& c2 = model.cache(1, 2);
    const BasisIndex reference = model.total().vacuum_index();

    StateVector sum(model.total().dimension());
    const std::size_t n = idx.u.size();
    const std::size_t m = idx.v.size();
    for (std::uint64_t umask = 0; umask < (std::uint64_t{1} << n); ++umask) {
        for (std::uint64_t vmask = 0; vmask < (std::uint64_t{1} << m); ++vmask) {
            std::vector<FieldScalar> uI, uII, vI, vII;
            std::vector<ColouredPoint> first, second;
            for (std::size_t i = 0; i < n; ++i) {
                bool in_first = (umask >> i) & 1;
                (in_first ? uI : uII).push_back(idx.u[i]);
                (in_first ? first : second).push_back({idx.u[i], 1, i});
            }
            for (std::size_t i = 0; i < m; ++i) {
                bool in_first = (vmask >> i) & 1;
                (in_first ? vI : vII).push_back(idx.v[i]);
                (in_first ? first : second).push_back({idx.v[i], 2, n + i});
            }
            const ParamSet UI(uI), UII(uII), VI(vI), VII(vII);

            const FieldScalar phi = coproduct_factor(first, second, c);
            const FieldScalar closed = set_product_f(UII, UI, c) * set_product_f(VII, VI, c) * set_product_f(VI, UII, c);
            if (phi != closed)
                return {Status::fail, Witness{0, phi - closed, "coproduct factor versus closed form"}, {}};

            const FieldScalar lambdas = r2.eigenvalue_product(1, UI) * r2.eigenvalue_product(2, VI) * r1.eigenvalue_product(2, UII) *
                                        r1.eigenvalue_product(3, options.lambda3_on_u ? UII : VII);

            // Dividing by the normalizations of the three vectors must give the composite-formula coefficient.
            const FieldScalar norm_total = set_product_f(idx.v, idx.u, c) * model.total().eigenvalue_product(2, idx.u) *
                                           model.total().eigenvalue_product(2, idx.v);
            const FieldScalar norm1 = set_product_f(VI, UI, c) * r1.eigenvalue_product(2, UI) * r1.eigenvalue_product(2, VI);
            const FieldScalar norm2 = set_product_f(VII, UII, c) * r2.eigenvalue_product(2, UII) * r2.eigenvalue_product(2, VII);
            const FieldScalar normalized = phi * lambdas * norm1 * norm2 / norm_total;
            const FieldScalar composite = r2.ratio_product(1, UI) * r1.ratio_product(3, VII) * set_product_f(UII, UI, c) *
                                          set_product_f(VII, VI, c) / set_product_f(VII, UI, c);
            if (normalized != composite)
                return {Status::fail, Witness{0, normalized - composite, "normalized coefficient versus composite formula"}, {}};

            StateVector w1 = weight_vector(c1, {UI, VI});
            StateVector w2 = weight_vector(c2, {UII, VII});
            sum.add_scaled(StateVector::disjoint_product(w1, w2, reference), phi * lambdas);
        }
    }
    return compare_vectors(weight_vector(model.total_cache(), idx), sum, "weight-function coproduct");
}

}  // namespace gl3bethe
