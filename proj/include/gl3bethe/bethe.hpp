#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <tuple>
#include <utility>
#include <vector>

#include "gl3bethe/errors.hpp"
#include "gl3bethe/linalg.hpp"
#include "gl3bethe/partitions.hpp"
#include "gl3bethe/ratfun.hpp"
#include "gl3bethe/rep.hpp"

namespace gl3bethe {

// Bethe parameters: u carries colour 1 (a of them), v carries colour 2 (b of them).
struct BetheIndex {
    ParamSet u;
    ParamSet v;

    std::size_t a() const { return u.size(); }
    std::size_t b() const { return v.size(); }
};

inline void require_distinct_within(const BetheIndex& idx) {
    if (idx.u.has_duplicates()) throw DegenerateError("repeated colour-1 Bethe parameter");
    if (idx.v.has_duplicates()) throw DegenerateError("repeated colour-2 Bethe parameter");
}

// Dense determinant by Gaussian elimination over the rationals.
inline FieldScalar determinant(std::vector<std::vector<FieldScalar>> m) {
    const std::size_t n = m.size();
    FieldScalar det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0) ++pivot;
        if (pivot == n) return 0;
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m[r][col] == 0) continue;
            FieldScalar factor = m[r][col] / m[col][col];
            for (std::size_t k = col; k < n; ++k) m[r][k] -= factor * m[col][k];
        }
    }
    return det;
}

namespace detail {

// Izergin determinant with the first `shared` pairs (v_k, u_k) coinciding; those pairs are
// taken in the limit v_k -> u_k after dividing by f(v_k, u_k).
inline FieldScalar izergin_core(const std::vector<FieldScalar>& v, const std::vector<FieldScalar>& u, std::size_t shared,
                                const ModelConstant& c) {
    const std::size_t n = v.size();
    FieldScalar p = 1;
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = l + 1; m < n; ++m) p *= g(v[l], v[m], c) * g(u[m], u[l], c);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j && i < shared) continue;
            // f/g = (v-u+c)/c
            p *= (v[i] - u[j] + c.value()) / c.value();
        }
    std::vector<std::vector<FieldScalar>> m(n - shared, std::vector<FieldScalar>(n - shared));
    for (std::size_t i = shared; i < n; ++i)
        for (std::size_t j = shared; j < n; ++j) {
            FieldScalar fij = f(v[i], u[j], c);
            if (fij == 0) throw PoleError("Izergin determinant entry has f(v,u) = 0");
            FieldScalar gij = g(v[i], u[j], c);
            m[i - shared][j - shared] = gij * gij / fij;
        }
    return p * determinant(std::move(m));
}

}  // namespace detail

// K_n(v|u) = prod_{l<m} g(v_l,v_m) g(u_m,u_l) * f(v,u)/g(v,u) * det[g(v_i,u_j)^2 / f(v_i,u_j)]
inline FieldScalar izergin(const ParamSet& v, const ParamSet& u, const ModelConstant& c) {
    if (v.size() != u.size()) throw CardinalityError("Izergin determinant needs |v| = |u|");
    if (v.has_duplicates() || u.has_duplicates()) throw DegenerateError("Izergin determinant with repeated parameters");
    return detail::izergin_core(v.elements(), u.elements(), 0, c);
}

// lim K_n(v|u) / prod_{s shared} f(s_v, s_u) as each shared v-value approaches its u-partner.
// Equals izergin() when nothing is shared.
inline FieldScalar izergin_regularized(const ParamSet& v, const ParamSet& u, const ModelConstant& c) {
    if (v.size() != u.size()) throw CardinalityError("Izergin determinant needs |v| = |u|");
    if (v.has_duplicates() || u.has_duplicates()) throw DegenerateError("Izergin determinant with repeated parameters");
    std::vector<FieldScalar> vv, uu, vrest, urest;
    for (const auto& x : v) (u.contains(x) ? vv : vrest).push_back(x);
    uu = vv;
    for (const auto& x : u)
        if (!v.contains(x)) urest.push_back(x);
    const std::size_t shared = vv.size();
    vv.insert(vv.end(), vrest.begin(), vrest.end());
    uu.insert(uu.end(), urest.begin(), urest.end());
    return detail::izergin_core(vv, uu, shared, c);
}

struct OperatorFactor {
    int i;
    int j;
    FieldScalar u;
    friend bool operator==(const OperatorFactor&, const OperatorFactor&) = default;
};

enum class VacuumSide { ket, bra };

// coefficient * word / prod lambda_2(eigen2_args). The word is written left to right; on the
// ket side its rightmost factor acts first, on the bra side its leftmost factor acts first.
struct PolyTerm {
    FieldScalar coefficient;
    std::vector<FieldScalar> eigen2_args;
    std::vector<OperatorFactor> word;
};

struct BethePolynomial {
    VacuumSide side = VacuumSide::ket;
    std::vector<PolyTerm> terms;
};

inline bool operator==(const PolyTerm& a, const PolyTerm& b) {
    return a.coefficient == b.coefficient && a.eigen2_args == b.eigen2_args && a.word == b.word;
}
inline bool operator==(const BethePolynomial& a, const BethePolynomial& b) {
    return a.side == b.side && a.terms == b.terms;
}

namespace detail {

// Weight of one partition in the explicit sum, with the shared-value limit applied.
// Returns nullopt when the partition does not contribute.
inline std::optional<FieldScalar> partition_weight(const BetheIndex& idx, const Partition2& up, const Partition2& vp,
                                                   const ModelConstant& c) {
    for (const auto& s : idx.u)
        if (idx.v.contains(s) && !(up.first.contains(s) && vp.first.contains(s))) return std::nullopt;
    FieldScalar denom = 1;
    for (const auto& x : idx.v)
        for (const auto& y : idx.u) {
            if (x == y) continue;
            FieldScalar fx = f(x, y, c);
            if (fx == 0)
                throw GenericityError("f(v,u) vanishes for v=" + to_string(x) + ", u=" + to_string(y));
            denom *= fx;
        }
    FieldScalar w = izergin_regularized(vp.first, up.first, c);
    w *= set_product_f(vp.second, vp.first, c);
    w *= set_product_f(up.first, up.second, c);
    return FieldScalar(w / denom);
}

inline BethePolynomial build_polynomial(const BetheIndex& idx, const ModelConstant& c, VacuumSide side) {
    require_distinct_within(idx);
    BethePolynomial poly{side, {}};
    for (const auto& up : all_partitions_2(idx.u)) {
        for (const auto& vp : partitions_with_cardinality(idx.v, up.first.size())) {
            auto w = partition_weight(idx, up, vp, c);
            if (!w || *w == 0) continue;
            PolyTerm t;
            t.coefficient = *w;
            t.eigen2_args = vp.second.elements();
            t.eigen2_args.insert(t.eigen2_args.end(), idx.u.begin(), idx.u.end());
            if (side == VacuumSide::ket) {
                for (const auto& x : up.first) t.word.push_back({1, 3, x});
                for (const auto& x : up.second) t.word.push_back({1, 2, x});
                for (const auto& x : vp.second) t.word.push_back({2, 3, x});
            } else {
                for (const auto& x : vp.second) t.word.push_back({3, 2, x});
                for (const auto& x : up.second) t.word.push_back({2, 1, x});
                for (const auto& x : up.first) t.word.push_back({3, 1, x});
            }
            poly.terms.push_back(std::move(t));
        }
    }
    return poly;
}

}  // namespace detail

// Explicit partition-sum form of the Bethe vector as a polynomial in the creation operators.
inline BethePolynomial bethe_polynomial(const BetheIndex& idx, const ModelConstant& c) {
    return detail::build_polynomial(idx, c, VacuumSide::ket);
}

// Same weights with T32, T21, T31 acting on the dual vacuum.
inline BethePolynomial dual_bethe_polynomial(const BetheIndex& idx, const ModelConstant& c) {
    return detail::build_polynomial(idx, c, VacuumSide::bra);
}

inline StateVector evaluate(const BethePolynomial& poly, const Representation& rep) {
    StateVector out(rep.dimension());
    for (const auto& t : poly.terms) {
        StateVector v = rep.vacuum();
        if (poly.side == VacuumSide::ket) {
            for (auto it = t.word.rbegin(); it != t.word.rend() && !v.is_zero(); ++it) v = rep.entry(it->i, it->j, it->u)->apply(v);
        } else {
            for (auto it = t.word.begin(); it != t.word.end() && !v.is_zero(); ++it) v = rep.entry(it->i, it->j, it->u)->apply_left(v);
        }
        if (v.is_zero()) continue;
        FieldScalar s = t.coefficient;
        for (const auto& x : t.eigen2_args) s /= rep.vacuum_eigenvalue(2, x);
        out.add_scaled(v, s);
    }
    return out;
}

inline StateVector bethe_vector(const Representation& rep, const BetheIndex& idx) {
    return evaluate(bethe_polynomial(idx, rep.model_constant()), rep);
}

inline StateVector dual_bethe_vector(const Representation& rep, const BetheIndex& idx) {
    return evaluate(dual_bethe_polynomial(idx, rep.model_constant()), rep);
}

// Builds the vector by the colour-1 recursion
//   B(u',z; v) = [T12(z) B(u';v) + sum_{v0} g(v0,z) f(v minus v0, v0) T13(z) B(u'; v minus v0)] / (lambda2(z) f(v,z))
// starting from B(;v) = T23(v)|0> / lambda2(v). z is the last colour-1 parameter.
inline StateVector bethe_vector_recursive(const Representation& rep, const BetheIndex& idx) {
    require_distinct_within(idx);
    const auto& c = rep.model_constant();
    std::map<std::pair<std::vector<FieldScalar>, std::vector<FieldScalar>>, StateVector> memo;
    auto rec = [&](auto&& self, const ParamSet& u, const ParamSet& v) -> StateVector {
        auto key = std::make_pair(u.sorted().elements(), v.sorted().elements());
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        StateVector out;
        if (u.empty()) {
            out = rep.vacuum();
            for (const auto& x : v) out = rep.entry(2, 3, x)->apply(out).scaled(FieldScalar(1 / rep.vacuum_eigenvalue(2, x)));
        } else {
            const FieldScalar z = u[u.size() - 1];
            const ParamSet rest = u.without(z);
            out = rep.entry(1, 2, z)->apply(self(self, rest, v));
            for (const auto& pick : picks_or_none(v, 1)) {
                const auto& v0 = pick.picks[0];
                FieldScalar w = g(v0, z, c) * set_product_f(pick.rest, v0, c);
                out.add_scaled(rep.entry(1, 3, z)->apply(self(self, rest, pick.rest)), w);
            }
            FieldScalar norm = rep.vacuum_eigenvalue(2, z) * set_product_f(v, z, c);
            if (norm == 0) throw GenericityError("f(v,z) vanishes in the recursion");
            out = out.scaled(FieldScalar(1 / norm));
        }
        memo.emplace(std::move(key), out);
        return out;
    };
    return rec(rec, idx.u, idx.v);
}

// psi: T_ij(u) -> T_ji(u), reversing products and exchanging vacuum and dual vacuum.
// phi: T_ij(u) -> T_{4-j,4-i}(-u), keeping the order of products.
enum class Morphism { psi, phi };

inline BethePolynomial morph(Morphism kind, const BethePolynomial& poly) {
    BethePolynomial out = poly;
    for (auto& t : out.terms) {
        if (kind == Morphism::psi) {
            std::reverse(t.word.begin(), t.word.end());
            for (auto& op : t.word) std::swap(op.i, op.j);
        } else {
            for (auto& op : t.word) {
                int i = op.i;
                op.i = 4 - op.j;
                op.j = 4 - i;
                op.u = -op.u;
            }
            for (auto& x : t.eigen2_args) x = -x;
        }
    }
    if (kind == Morphism::psi) out.side = poly.side == VacuumSide::ket ? VacuumSide::bra : VacuumSide::ket;
    return out;
}

// Image of a Bethe polynomial under the morphism, evaluated in the given representation.
inline StateVector apply_morphism(Morphism kind, const BethePolynomial& poly, const Representation& rep) {
    return evaluate(morph(kind, poly), rep);
}

// Thread-safe memo of Bethe vectors of one representation, keyed by the sorted parameter
// sets. Relies on the symmetry of Bethe vectors in each colour.
class BetheCache {
public:
    explicit BetheCache(const Representation& rep) : rep_(rep) {}

    const Representation& representation() const { return rep_; }

    std::shared_ptr<const StateVector> get(const BetheIndex& idx, VacuumSide side = VacuumSide::ket) const {
        Key key{side, idx.u.sorted().elements(), idx.v.sorted().elements()};
        {
            std::shared_lock lock(mutex_);
            if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        }
        auto v = std::make_shared<const StateVector>(side == VacuumSide::ket ? bethe_vector(rep_, idx) : dual_bethe_vector(rep_, idx));
        std::unique_lock lock(mutex_);
        return memo_.emplace(std::move(key), std::move(v)).first->second;
    }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return memo_.size();
    }

private:
    using Key = std::tuple<VacuumSide, std::vector<FieldScalar>, std::vector<FieldScalar>>;
    const Representation& rep_;
    mutable std::shared_mutex mutex_;
    mutable std::map<Key, std::shared_ptr<const StateVector>> memo_;
};

}  // namespace gl3bethe
