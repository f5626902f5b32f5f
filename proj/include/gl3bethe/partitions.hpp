#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "gl3bethe/errors.hpp"
#include "gl3bethe/ratfun.hpp"

namespace gl3bethe {

// Ordered split of a set into two disjoint parts whose union is the set.
struct Partition2 {
    ParamSet first;
    ParamSet second;
};

// k distinguished elements (in pick order) and the remaining subset.
struct SingletonPick {
    std::vector<FieldScalar> picks;
    ParamSet rest;
};

inline constexpr std::size_t max_partition_set_size = 24;

// All 2^|S| ordered two-part splits. Mask bit i set puts S[i] into the first part;
// masks are enumerated in increasing order, so S = {} yields the single split ({}, {}).
inline std::vector<Partition2> all_partitions_2(const ParamSet& s) {
    if (s.size() > max_partition_set_size) throw RangeError("set too large to enumerate partitions");
    std::vector<Partition2> out;
    const std::uint64_t count = std::uint64_t{1} << s.size();
    out.reserve(count);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        std::vector<FieldScalar> a, b;
        for (std::size_t i = 0; i < s.size(); ++i) ((mask >> i) & 1 ? a : b).push_back(s[i]);
        out.push_back({ParamSet(std::move(a)), ParamSet(std::move(b))});
    }
    return out;
}

// Splits whose first part has exactly n elements, in the same order as all_partitions_2.
inline std::vector<Partition2> partitions_with_cardinality(const ParamSet& s, std::size_t n) {
    if (s.size() > max_partition_set_size) throw RangeError("set too large to enumerate partitions");
    std::vector<Partition2> out;
    if (n > s.size()) return out;
    const std::uint64_t count = std::uint64_t{1} << s.size();
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != n) continue;
        std::vector<FieldScalar> a, b;
        for (std::size_t i = 0; i < s.size(); ++i) ((mask >> i) & 1 ? a : b).push_back(s[i]);
        out.push_back({ParamSet(std::move(a)), ParamSet(std::move(b))});
    }
    return out;
}

// Ordered choices of k distinct elements, lexicographic in element index.
inline std::vector<SingletonPick> singleton_partitions(const ParamSet& s, std::size_t k) {
    if (k > s.size()) throw RangeError("cannot pick " + std::to_string(k) + " elements from a set of " + std::to_string(s.size()));
    std::vector<SingletonPick> out;
    std::vector<std::size_t> chosen;
    std::vector<bool> used(s.size(), false);
    auto rec = [&](auto&& self) -> void {
        if (chosen.size() == k) {
            SingletonPick p;
            for (auto i : chosen) p.picks.push_back(s[i]);
            std::vector<FieldScalar> rest;
            for (std::size_t i = 0; i < s.size(); ++i)
                if (!used[i]) rest.push_back(s[i]);
            p.rest = ParamSet(std::move(rest));
            out.push_back(std::move(p));
            return;
        }
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (used[i]) continue;
            used[i] = true;
            chosen.push_back(i);
            self(self);
            chosen.pop_back();
            used[i] = false;
        }
    };
    rec(rec);
    return out;
}

// As singleton_partitions, but an empty list when the set is too small. Sums over picks
// are then simply empty.
inline std::vector<SingletonPick> picks_or_none(const ParamSet& s, std::size_t k) {
    if (k > s.size()) return {};
    return singleton_partitions(s, k);
}

}  // namespace gl3bethe
