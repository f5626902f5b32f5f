#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "gl3bethe/errors.hpp"
#include "gl3bethe/ratfun.hpp"

namespace gl3bethe {

using BasisIndex = std::uint64_t;

// Sparse vector in the tensor-product basis. Zero coefficients are never stored.
class StateVector {
public:
    StateVector() = default;
    explicit StateVector(BasisIndex dimension) : dim_(dimension) {}

    static StateVector basis(BasisIndex dimension, BasisIndex index) {
        StateVector v(dimension);
        v.add(index, FieldScalar(1));
        return v;
    }

    BasisIndex dimension() const { return dim_; }
    const std::map<BasisIndex, FieldScalar>& entries() const { return entries_; }
    bool is_zero() const { return entries_.empty(); }
    std::size_t nonzero_count() const { return entries_.size(); }

    FieldScalar at(BasisIndex i) const {
        auto it = entries_.find(i);
        return it == entries_.end() ? FieldScalar(0) : it->second;
    }

    void add(BasisIndex i, const FieldScalar& value) {
        if (i >= dim_) throw RangeError("basis index out of range");
        if (value == 0) return;
        auto [it, inserted] = entries_.try_emplace(i, value);
        if (!inserted) {
            it->second += value;
            if (it->second == 0) entries_.erase(it);
        }
    }

    StateVector& add_scaled(const StateVector& other, const FieldScalar& s) {
        check_same_dim(other);
        if (s == 0) return *this;
        for (const auto& [i, x] : other.entries_) add(i, FieldScalar(x * s));
        return *this;
    }

    StateVector scaled(const FieldScalar& s) const {
        StateVector out(dim_);
        if (s == 0) return out;
        for (const auto& [i, x] : entries_) out.entries_.emplace_hint(out.entries_.end(), i, FieldScalar(x * s));
        return out;
    }

    StateVector& operator+=(const StateVector& o) { return add_scaled(o, FieldScalar(1)); }
    StateVector& operator-=(const StateVector& o) { return add_scaled(o, FieldScalar(-1)); }
    friend StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
    friend StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
    friend bool operator==(const StateVector& a, const StateVector& b) {
        return a.dim_ == b.dim_ && a.entries_ == b.entries_;
    }

    // Lowest basis index with a nonzero coefficient.
    std::optional<std::pair<BasisIndex, FieldScalar>> first_nonzero() const {
        if (entries_.empty()) return std::nullopt;
        return *entries_.begin();
    }

    // Product of two vectors created from the common reference state by operators acting
    // on disjoint site sets. Outside its own sites each factor agrees with the reference
    // state, so base-3 digits add up as i1 + i2 - reference.
    static StateVector disjoint_product(const StateVector& a, const StateVector& b, BasisIndex reference) {
        a.check_same_dim(b);
        StateVector out(a.dim_);
        for (const auto& [i, x] : a.entries_)
            for (const auto& [j, y] : b.entries_) out.add(i + j - reference, FieldScalar(x * y));
        return out;
    }

private:
    void check_same_dim(const StateVector& o) const {
        if (o.dim_ != dim_) throw RangeError("state vector dimension mismatch");
    }

    BasisIndex dim_ = 0;
    std::map<BasisIndex, FieldScalar> entries_;
};

// 3x3 matrix of scalars acting on one site, indexed [row][col] with 0-based states.
using SiteMatrix = std::array<std::array<FieldScalar, 3>, 3>;

// Column-compressed sparse square matrix.
class SparseMatrix {
public:
    using Column = std::vector<std::pair<BasisIndex, FieldScalar>>;

    SparseMatrix() = default;
    explicit SparseMatrix(BasisIndex dimension) : cols_(dimension) {}

    static SparseMatrix identity(BasisIndex dimension) {
        SparseMatrix m(dimension);
        for (BasisIndex i = 0; i < dimension; ++i) m.cols_[i].emplace_back(i, FieldScalar(1));
        return m;
    }

    static SparseMatrix scalar(BasisIndex dimension, const FieldScalar& s) {
        if (s == 0) return SparseMatrix(dimension);
        SparseMatrix m(dimension);
        for (BasisIndex i = 0; i < dimension; ++i) m.cols_[i].emplace_back(i, s);
        return m;
    }

    BasisIndex dimension() const { return cols_.size(); }
    const Column& column(BasisIndex c) const { return cols_[c]; }

    std::size_t nonzero_count() const {
        std::size_t n = 0;
        for (const auto& c : cols_) n += c.size();
        return n;
    }

    FieldScalar at(BasisIndex r, BasisIndex c) const {
        for (const auto& [row, x] : cols_[c])
            if (row == r) return x;
        return 0;
    }

    // site ⊗ rest, with the site as the most significant base-3 digit.
    static SparseMatrix kron_site(const SiteMatrix& site, const SparseMatrix& rest) {
        const BasisIndex n = rest.dimension();
        SparseMatrix out(3 * n);
        for (int sc = 0; sc < 3; ++sc) {
            for (BasisIndex c = 0; c < n; ++c) {
                auto& col = out.cols_[sc * n + c];
                for (int sr = 0; sr < 3; ++sr) {
                    const FieldScalar& a = site[sr][sc];
                    if (a == 0) continue;
                    for (const auto& [r, x] : rest.cols_[c]) col.emplace_back(sr * n + r, FieldScalar(a * x));
                }
            }
        }
        return out;
    }

    SparseMatrix scaled(const FieldScalar& s) const {
        if (s == 0) return SparseMatrix(dimension());
        SparseMatrix out = *this;
        for (auto& col : out.cols_)
            for (auto& e : col) e.second *= s;
        return out;
    }

    friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
        a.check_same_dim(b);
        SparseMatrix out(a.dimension());
        for (BasisIndex c = 0; c < a.dimension(); ++c) {
            const auto& x = a.cols_[c];
            const auto& y = b.cols_[c];
            auto& z = out.cols_[c];
            std::size_t i = 0, j = 0;
            while (i < x.size() || j < y.size()) {
                if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
                    z.push_back(x[i++]);
                } else if (i == x.size() || y[j].first < x[i].first) {
                    z.push_back(y[j++]);
                } else {
                    FieldScalar s = x[i].second + y[j].second;
                    if (s != 0) z.emplace_back(x[i].first, std::move(s));
                    ++i;
                    ++j;
                }
            }
        }
        return out;
    }

    friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) { return a + b.scaled(-1); }

    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
        a.check_same_dim(b);
        SparseMatrix out(a.dimension());
        for (BasisIndex c = 0; c < b.dimension(); ++c) {
            std::map<BasisIndex, FieldScalar> acc;
            for (const auto& [k, y] : b.cols_[c])
                for (const auto& [r, x] : a.cols_[k]) acc[r] += x * y;
            for (auto& [r, v] : acc)
                if (v != 0) out.cols_[c].emplace_back(r, std::move(v));
        }
        return out;
    }

    friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) { return a.cols_ == b.cols_; }

    SparseMatrix transposed() const {
        SparseMatrix out(dimension());
        for (BasisIndex c = 0; c < dimension(); ++c)
            for (const auto& [r, x] : cols_[c]) out.cols_[r].emplace_back(c, x);
        return out;
    }

    // Column-vector action A·v.
    StateVector apply(const StateVector& v) const {
        check_vec(v);
        StateVector out(dimension());
        for (const auto& [c, y] : v.entries())
            for (const auto& [r, x] : cols_[c]) out.add(r, FieldScalar(x * y));
        return out;
    }

    // Row-vector action v·A.
    StateVector apply_left(const StateVector& v) const {
        check_vec(v);
        StateVector out(dimension());
        for (BasisIndex c = 0; c < dimension(); ++c) {
            FieldScalar s = 0;
            for (const auto& [r, x] : cols_[c]) {
                auto it = v.entries().find(r);
                if (it != v.entries().end()) s += x * it->second;
            }
            out.add(c, s);
        }
        return out;
    }

    struct Entry {
        BasisIndex row;
        BasisIndex col;
        FieldScalar value;
    };

    // First nonzero entry in column-major order, if any.
    std::optional<Entry> first_nonzero() const {
        for (BasisIndex c = 0; c < dimension(); ++c)
            if (!cols_[c].empty()) return Entry{cols_[c].front().first, c, cols_[c].front().second};
        return std::nullopt;
    }

private:
    void check_same_dim(const SparseMatrix& o) const {
        if (o.dimension() != dimension()) throw RangeError("matrix dimension mismatch");
    }
    void check_vec(const StateVector& v) const {
        if (v.dimension() != dimension()) throw RangeError("matrix/vector dimension mismatch");
    }

    std::vector<Column> cols_;
};

}  // namespace gl3bethe
