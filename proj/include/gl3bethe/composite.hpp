#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "gl3bethe/actions.hpp"
#include "gl3bethe/bethe.hpp"
#include "gl3bethe/errors.hpp"
#include "gl3bethe/partitions.hpp"
#include "gl3bethe/rep.hpp"
#include "gl3bethe/verdict.hpp"

namespace gl3bethe {

// A chain cut after site L1 into two sub-chains with their own twists.
struct SplitSpec {
    ChainSpec parent;
    std::size_t first_length = 0;
    Twist first_twist = untwisted();
    Twist second_twist = untwisted();

    // The second twist is fixed by requiring second * first == parent twist componentwise.
    static SplitSpec with_first_twist(ChainSpec parent, std::size_t first_length, Twist first) {
        require_valid_twist(first);
        require_valid_twist(parent.twist);
        Twist second;
        for (int k = 0; k < 3; ++k) second[k] = parent.twist[k] / first[k];
        SplitSpec s{std::move(parent), first_length, std::move(first), std::move(second)};
        s.validate();
        return s;
    }

    void validate() const {
        if (first_length > parent.length())
            throw SplitError("split position " + std::to_string(first_length) + " exceeds chain length " +
                             std::to_string(parent.length()));
        require_valid_twist(first_twist);
        require_valid_twist(second_twist);
        for (int k = 0; k < 3; ++k)
            if (first_twist[k] * second_twist[k] != parent.twist[k])
                throw SplitError("sub-chain twists do not multiply to the parent twist");
    }

    std::vector<Segment> segments() const {
        validate();
        Segment a{first_twist, {parent.sites.begin(), parent.sites.begin() + static_cast<std::ptrdiff_t>(first_length)}};
        Segment b{second_twist, {parent.sites.begin() + static_cast<std::ptrdiff_t>(first_length), parent.sites.end()}};
        return {a, b};
    }
};

// A chain made of consecutive segments. Any contiguous range of segments defines a
// representation on the full space (identity on the other sites) with its own cache.
class SegmentedModel {
public:
    SegmentedModel(ModelConstant c, std::vector<Segment> segments, std::size_t max_sites = default_max_sites)
        : c_(std::move(c)), segments_(std::move(segments)), max_sites_(max_sites) {
        // Validate size and twists eagerly.
        range(0, segments_.size());
    }

    explicit SegmentedModel(const SplitSpec& split) : SegmentedModel(split.parent.c, split.segments(), split.parent.max_sites) {}

    SegmentedModel(const SegmentedModel&) = delete;
    SegmentedModel& operator=(const SegmentedModel&) = delete;

    const ModelConstant& model_constant() const { return c_; }
    std::size_t segment_count() const { return segments_.size(); }
    const std::vector<Segment>& segments() const { return segments_; }

    // Segments [lo, hi).
    const ChainMonodromy& range(std::size_t lo, std::size_t hi) const { return entry(lo, hi).rep; }
    const BetheCache& cache(std::size_t lo, std::size_t hi) const { return entry(lo, hi).cache; }
    const ChainMonodromy& total() const { return range(0, segments_.size()); }
    const BetheCache& total_cache() const { return cache(0, segments_.size()); }

private:
    struct Entry {
        Entry(ModelConstant c, std::vector<Segment> segs, std::vector<bool> active, std::size_t max_sites)
            : rep(std::move(c), std::move(segs), std::move(active), max_sites), cache(rep) {}
        ChainMonodromy rep;
        BetheCache cache;
    };

    const Entry& entry(std::size_t lo, std::size_t hi) const {
        if (lo > hi || hi > segments_.size()) throw RangeError("segment range out of bounds");
        std::lock_guard lock(mutex_);
        auto& slot = entries_[{lo, hi}];
        if (!slot) {
            std::vector<bool> active(segments_.size(), false);
            for (std::size_t k = lo; k < hi; ++k) active[k] = true;
            slot = std::make_unique<Entry>(c_, segments_, std::move(active), max_sites_);
        }
        return *slot;
    }

    ModelConstant c_;
    std::vector<Segment> segments_;
    std::size_t max_sites_;
    mutable std::mutex mutex_;
    mutable std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<Entry>> entries_;
};

// A point of the spectral line away from every pole and from every pole shifted by +-c.
inline FieldScalar generic_probe(const Representation& rep, const FieldScalar& hint = FieldScalar(1, 7)) {
    const auto& c = rep.model_constant();
    for (int k = 1;; ++k) {
        FieldScalar u = hint + k;
        if (!genericity_check({{"probe", ParamSet{u}}, {"xi", rep.poles()}}, c)) return u;
    }
}

// Checks T_ij(u) = sum_k T2_ik(u) T1_kj(u) for the split at a generic probe point.
inline Verdict check_product_identity(const SegmentedModel& model, std::size_t cut) {
    const auto& total = model.total();
    const auto& first = model.range(0, cut);
    const auto& second = model.range(cut, model.segment_count());
    FieldScalar u = generic_probe(total);
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
            SparseMatrix prod(total.dimension());
            for (int k = 1; k <= 3; ++k) prod = prod + (*second.entry(i, k, u)) * (*first.entry(k, j, u));
            if (auto e = (*total.entry(i, j, u) - prod).first_nonzero())
                return {Status::fail, Witness{e->row * total.dimension() + e->col, e->value,
                                              "T" + std::to_string(i) + std::to_string(j)},
                        {}};
        }
    return {};
}

struct SplitReps {
    std::shared_ptr<SegmentedModel> model;
    const ChainMonodromy& first() const { return model->range(0, 1); }
    const ChainMonodromy& second() const { return model->range(1, 2); }
    const ChainMonodromy& total() const { return model->total(); }
};

// Builds the partial and total representations and certifies the product identity.
inline SplitReps split_monodromy(const SplitSpec& split) {
    auto model = std::make_shared<SegmentedModel>(split);
    auto v = check_product_identity(*model, 1);
    if (!v.ok()) throw SplitError("product identity failed at " + v.witness->detail);
    return {std::move(model)};
}

// Source of Bethe vectors for one part of a composite model together with the vacuum
// ratios of that part.
struct Part {
    const Representation* rep;
    std::function<StateVector(const BetheIndex&, VacuumSide)> vector;

    static Part direct(const BetheCache& cache) {
        return {&cache.representation(), [&cache](const BetheIndex& idx, VacuumSide side) { return *cache.get(idx, side); }};
    }
};

// Sum over splittings of both colours of products of partial vectors.
//   ket: r1^(2)(uI) r3^(1)(vII) f(uII,uI) f(vII,vI) / f(vII,uI) * B1(uI;vI) B2(uII;vII)
//   bra: r1^(1)(uII) r3^(2)(vI) f(uI,uII) f(vI,vII) / f(vI,uII) * C1(uI;vI) C2(uII;vII)
// A value shared by u and v is allowed; terms whose denominator would contain f(s,s) vanish.
inline StateVector composite_sum(const Part& first, const Part& second, const BetheIndex& idx, VacuumSide side) {
    const Representation& r1 = *first.rep;
    const Representation& r2 = *second.rep;
    const auto& c = r1.model_constant();
    const BasisIndex reference = r1.vacuum_index();
    StateVector out(r1.dimension());
    for (const auto& up : all_partitions_2(idx.u)) {
        for (const auto& vp : all_partitions_2(idx.v)) {
            const ParamSet& uI = up.first;
            const ParamSet& uII = up.second;
            const ParamSet& vI = vp.first;
            const ParamSet& vII = vp.second;
            FieldScalar w;
            if (side == VacuumSide::ket) {
                bool vanishes = false;
                for (const auto& s : vII) vanishes = vanishes || uI.contains(s);
                if (vanishes) continue;
                w = r2.ratio_product(1, uI) * r1.ratio_product(3, vII) * set_product_f(uII, uI, c) * set_product_f(vII, vI, c) /
                    set_product_f(vII, uI, c);
            } else {
                bool vanishes = false;
                for (const auto& s : vI) vanishes = vanishes || uII.contains(s);
                if (vanishes) continue;
                w = r1.ratio_product(1, uII) * r2.ratio_product(3, vI) * set_product_f(uI, uII, c) * set_product_f(vI, vII, c) /
                    set_product_f(vI, uII, c);
            }
            if (w == 0) continue;
            StateVector b1 = first.vector({uI, vI}, side);
            if (b1.is_zero()) continue;
            StateVector b2 = second.vector({uII, vII}, side);
            out.add_scaled(StateVector::disjoint_product(b1, b2, reference), w);
        }
    }
    return out;
}

// Composite-model formula for the model cut after segment `cut`, using directly
// constructed partial vectors.
inline StateVector composite_bethe_rhs(const SegmentedModel& model, std::size_t cut, const BetheIndex& idx,
                                       VacuumSide side = VacuumSide::ket) {
    return composite_sum(Part::direct(model.cache(0, cut)), Part::direct(model.cache(cut, model.segment_count())), idx, side);
}

inline void require_generic(const SegmentedModel& model, const BetheIndex& idx, const ParamSet& extra = {}) {
    require_generic_instance(model.total(), idx, extra);
}

inline Verdict theorem1_verify(const SegmentedModel& model, const BetheIndex& idx, std::size_t cut = 1) {
    require_generic(model, idx);
    return compare_vectors(*model.total_cache().get(idx), composite_bethe_rhs(model, cut, idx), "composite Bethe vector");
}

inline Verdict corollary1_verify(const SegmentedModel& model, const BetheIndex& idx, std::size_t cut = 1) {
    require_generic(model, idx);
    return compare_vectors(*model.total_cache().get(idx, VacuumSide::bra), composite_bethe_rhs(model, cut, idx, VacuumSide::bra),
                           "composite dual Bethe vector");
}

// T13(z)/lambda2(z) applied to the composite formula equals the composite formula at ({u,z};{v,z}).
inline Verdict act13_composite_verify(const SegmentedModel& model, const BetheIndex& idx, const FieldScalar& z) {
    require_generic(model, idx, ParamSet{z});
    const auto& total = model.total();
    StateVector lhs = total.entry(1, 3, z)->apply(composite_bethe_rhs(model, 1, idx)).scaled(FieldScalar(1 / total.vacuum_eigenvalue(2, z)));
    StateVector rhs = composite_bethe_rhs(model, 1, {idx.u.with(z), idx.v.with(z)});
    return compare_vectors(lhs, rhs, "T13 on composite");
}

// T12(z)/lambda2(z) applied to the composite formula equals
// f(v,z) B({u,z};v) + sum_{v0} g(z,v0) f(v0bar,v0) B({u,z};{v0bar,z}) with composite B.
inline Verdict act12_composite_verify(const SegmentedModel& model, const BetheIndex& idx, const FieldScalar& z) {
    require_generic(model, idx, ParamSet{z});
    const auto& total = model.total();
    const auto& c = model.model_constant();
    StateVector lhs = total.entry(1, 2, z)->apply(composite_bethe_rhs(model, 1, idx)).scaled(FieldScalar(1 / total.vacuum_eigenvalue(2, z)));
    StateVector rhs = composite_bethe_rhs(model, 1, {idx.u.with(z), idx.v}).scaled(set_product_f(idx.v, z, c));
    for (const auto& p : picks_or_none(idx.v, 1)) {
        const auto& v0 = p.picks[0];
        rhs.add_scaled(composite_bethe_rhs(model, 1, {idx.u.with(z), p.rest.with(z)}), g(z, v0, c) * set_product_f(p.rest, v0, c));
    }
    return compare_vectors(lhs, rhs, "T12 on composite");
}

// Three-segment model: nesting the composite formula either way reproduces the direct vector.
inline Verdict coassociativity_verify(const SegmentedModel& model, const BetheIndex& idx) {
    if (model.segment_count() != 3) throw SplitError("coassociativity needs exactly three segments");
    require_generic(model, idx);
    Part p1 = Part::direct(model.cache(0, 1));
    Part p2 = Part::direct(model.cache(1, 2));
    Part p3 = Part::direct(model.cache(2, 3));
    Part p12{&model.range(0, 2), [&](const BetheIndex& i, VacuumSide s) { return composite_sum(p1, p2, i, s); }};
    Part p23{&model.range(1, 3), [&](const BetheIndex& i, VacuumSide s) { return composite_sum(p2, p3, i, s); }};
    StateVector left = composite_sum(p12, p3, idx, VacuumSide::ket);
    StateVector right = composite_sum(p1, p23, idx, VacuumSide::ket);
    Verdict v = compare_vectors(left, right, "(12)3 versus 1(23)");
    if (!v.ok()) return v;
    return compare_vectors(left, *model.total_cache().get(idx), "(12)3 versus direct");
}

}  // namespace gl3bethe
