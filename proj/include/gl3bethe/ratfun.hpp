#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gl3bethe/errors.hpp"

namespace gl3bethe {

using FieldScalar = mpq_class;

// Always "num/den", integers included, so serialized values have one shape.
inline std::string to_string(const FieldScalar& x) { return x.get_num().get_str() + "/" + x.get_den().get_str(); }

// Parses "p", "-p" or "p/q". Throws ConfigError on malformed input or a zero denominator.
inline FieldScalar parse_rational(std::string_view text) {
    std::string s(text);
    auto slash = s.find('/');
    auto digits_ok = [](std::string_view part, bool allow_sign) {
        if (allow_sign && !part.empty() && (part[0] == '-' || part[0] == '+')) part.remove_prefix(1);
        return !part.empty() && std::all_of(part.begin(), part.end(), [](unsigned char ch) { return std::isdigit(ch); });
    };
    std::string_view whole(s);
    bool ok = slash == std::string::npos ? digits_ok(whole, true)
                                         : digits_ok(whole.substr(0, slash), true) && digits_ok(whole.substr(slash + 1), false);
    if (!ok) throw ConfigError("malformed rational '" + s + "'");
    if (s[0] == '+') s.erase(0, 1);
    if (slash != std::string::npos && mpz_class(s.substr(s.find('/') + 1)) == 0)
        throw ConfigError("zero denominator in '" + s + "'");
    FieldScalar q(s);
    q.canonicalize();
    return q;
}

// The coupling constant c of the rational R-matrix. Never zero.
class ModelConstant {
public:
    explicit ModelConstant(FieldScalar value) : value_(std::move(value)) {
        if (value_ == 0) throw RangeError("model constant must be nonzero");
    }
    const FieldScalar& value() const { return value_; }
    friend bool operator==(const ModelConstant&, const ModelConstant&) = default;

private:
    FieldScalar value_;
};

// An ordered, finite list of spectral parameters. Distinctness is checked where it matters
// (genericity_check, Bethe vector construction), not on construction.
class ParamSet {
public:
    ParamSet() = default;
    ParamSet(std::initializer_list<FieldScalar> xs) : elems_(xs) {}
    explicit ParamSet(std::vector<FieldScalar> xs) : elems_(std::move(xs)) {}

    std::size_t size() const { return elems_.size(); }
    bool empty() const { return elems_.empty(); }
    const FieldScalar& operator[](std::size_t i) const { return elems_[i]; }
    auto begin() const { return elems_.begin(); }
    auto end() const { return elems_.end(); }
    const std::vector<FieldScalar>& elements() const { return elems_; }

    bool contains(const FieldScalar& x) const { return std::find(elems_.begin(), elems_.end(), x) != elems_.end(); }

    ParamSet with(const FieldScalar& x) const {
        ParamSet out = *this;
        out.elems_.push_back(x);
        return out;
    }
    ParamSet joined(const ParamSet& other) const {
        ParamSet out = *this;
        out.elems_.insert(out.elems_.end(), other.elems_.begin(), other.elems_.end());
        return out;
    }
    // Removes the first occurrence of x.
    ParamSet without(const FieldScalar& x) const {
        ParamSet out = *this;
        auto it = std::find(out.elems_.begin(), out.elems_.end(), x);
        if (it != out.elems_.end()) out.elems_.erase(it);
        return out;
    }
    ParamSet negated() const {
        ParamSet out = *this;
        for (auto& x : out.elems_) x = -x;
        return out;
    }
    ParamSet sorted() const {
        ParamSet out = *this;
        std::sort(out.elems_.begin(), out.elems_.end());
        return out;
    }
    bool has_duplicates() const {
        auto s = sorted();
        return std::adjacent_find(s.elems_.begin(), s.elems_.end()) != s.elems_.end();
    }

    friend bool operator==(const ParamSet& a, const ParamSet& b) { return a.elems_ == b.elems_; }

private:
    std::vector<FieldScalar> elems_;
};

inline std::vector<std::string> to_strings(const ParamSet& s) {
    std::vector<std::string> out;
    for (const auto& x : s) out.push_back(to_string(x));
    return out;
}

// g(x,y) = c/(x-y)
inline FieldScalar g(const FieldScalar& x, const FieldScalar& y, const ModelConstant& c) {
    if (x == y) throw PoleError("g(x,y) evaluated at x = y = " + to_string(x));
    return FieldScalar(c.value() / (x - y));
}

// f(x,y) = 1 + g(x,y) = (x-y+c)/(x-y)
inline FieldScalar f(const FieldScalar& x, const FieldScalar& y, const ModelConstant& c) {
    if (x == y) throw PoleError("f(x,y) evaluated at x = y = " + to_string(x));
    return FieldScalar((x - y + c.value()) / (x - y));
}

inline FieldScalar set_product_g(const ParamSet& xs, const ParamSet& ys, const ModelConstant& c) {
    FieldScalar p = 1;
    for (const auto& x : xs)
        for (const auto& y : ys) p *= g(x, y, c);
    return p;
}

inline FieldScalar set_product_f(const ParamSet& xs, const ParamSet& ys, const ModelConstant& c) {
    FieldScalar p = 1;
    for (const auto& x : xs)
        for (const auto& y : ys) p *= f(x, y, c);
    return p;
}

inline FieldScalar set_product_f(const FieldScalar& x, const FieldScalar& y, const ModelConstant& c) { return f(x, y, c); }
inline FieldScalar set_product_f(const FieldScalar& x, const ParamSet& ys, const ModelConstant& c) {
    return set_product_f(ParamSet{x}, ys, c);
}
inline FieldScalar set_product_f(const ParamSet& xs, const FieldScalar& y, const ModelConstant& c) {
    return set_product_f(xs, ParamSet{y}, c);
}

enum class ViolationKind { coincide, shifted_by_plus_c, shifted_by_minus_c };

struct GenericityViolation {
    std::string first_label;
    FieldScalar first;
    std::string second_label;
    FieldScalar second;
    ViolationKind kind;

    std::string describe() const {
        const char* what = kind == ViolationKind::coincide ? "coincide"
                           : kind == ViolationKind::shifted_by_plus_c ? "differ by +c"
                                                                      : "differ by -c";
        return first_label + "=" + to_string(first) + " and " + second_label + "=" + to_string(second) + " " + what;
    }
};

struct LabelledSet {
    std::string label;
    ParamSet values;
};

// Every pairwise difference across the union of the sets (including within one set)
// must avoid {0, c, -c}. Returns the first offending pair in scan order.
inline std::optional<GenericityViolation> genericity_check(const std::vector<LabelledSet>& sets, const ModelConstant& c) {
    std::vector<std::pair<const std::string*, const FieldScalar*>> all;
    for (const auto& s : sets)
        for (const auto& x : s.values) all.emplace_back(&s.label, &x);
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            FieldScalar d = *all[i].second - *all[j].second;
            std::optional<ViolationKind> kind;
            if (d == 0) kind = ViolationKind::coincide;
            else if (d == c.value()) kind = ViolationKind::shifted_by_plus_c;
            else if (d == -c.value()) kind = ViolationKind::shifted_by_minus_c;
            if (kind) return GenericityViolation{*all[i].first, *all[i].second, *all[j].first, *all[j].second, *kind};
        }
    }
    return std::nullopt;
}

}  // namespace gl3bethe
