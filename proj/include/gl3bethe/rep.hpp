#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "gl3bethe/errors.hpp"
#include "gl3bethe/linalg.hpp"
#include "gl3bethe/ratfun.hpp"

namespace gl3bethe {

inline constexpr std::size_t default_max_sites = 8;

// Fundamental sites carry the defining representation with highest weight e1.
// Antifundamental sites carry its dual, highest weight e3.
enum class SiteKind { fundamental, antifundamental };

struct Site {
    SiteKind kind = SiteKind::fundamental;
    FieldScalar xi;
};

using Twist = std::array<FieldScalar, 3>;

inline Twist untwisted() { return {FieldScalar(1), FieldScalar(1), FieldScalar(1)}; }

inline void require_valid_twist(const Twist& d) {
    for (const auto& x : d)
        if (x == 0) throw RangeError("twist components must be nonzero");
}

// A twisted chain of sites. Site 1 is the first entry of `sites`.
struct ChainSpec {
    ModelConstant c{FieldScalar(1)};
    std::vector<Site> sites;
    Twist twist = untwisted();
    std::size_t max_sites = default_max_sites;

    static ChainSpec fundamental(ModelConstant c, const std::vector<FieldScalar>& xi, Twist twist = untwisted()) {
        ChainSpec s{std::move(c), {}, std::move(twist)};
        for (const auto& x : xi) s.sites.push_back({SiteKind::fundamental, x});
        return s;
    }

    // kinds is a string over {'f','a'}, one letter per site.
    static ChainSpec mixed(ModelConstant c, const std::string& kinds, const std::vector<FieldScalar>& xi,
                           Twist twist = untwisted()) {
        if (kinds.size() != xi.size()) throw RangeError("site kind string and inhomogeneities differ in length");
        ChainSpec s{std::move(c), {}, std::move(twist)};
        for (std::size_t i = 0; i < xi.size(); ++i) {
            if (kinds[i] != 'f' && kinds[i] != 'a') throw RangeError("site kinds must be 'f' or 'a'");
            s.sites.push_back({kinds[i] == 'f' ? SiteKind::fundamental : SiteKind::antifundamental, xi[i]});
        }
        return s;
    }

    std::size_t length() const { return sites.size(); }
    ParamSet inhomogeneities() const {
        std::vector<FieldScalar> out;
        for (const auto& s : sites) out.push_back(s.xi);
        return ParamSet(std::move(out));
    }
};

// Entry (a,b), 1-based, of the Lax operator of one site as a 3x3 matrix on that site.
// Fundamental: delta_ab + g(u,xi) E_ba.  Antifundamental: delta_ab - g(u,xi) E_ab.
inline SiteMatrix lax_entry(SiteKind kind, int a, int b, const FieldScalar& u, const FieldScalar& xi, const ModelConstant& c) {
    if (a < 1 || a > 3 || b < 1 || b > 3) throw RangeError("Lax indices must lie in 1..3");
    FieldScalar w = g(u, xi, c);
    SiteMatrix m{};
    for (auto& row : m)
        for (auto& x : row) x = 0;
    if (a == b)
        for (int s = 0; s < 3; ++s) m[s][s] = 1;
    if (kind == SiteKind::fundamental)
        m[b - 1][a - 1] += w;
    else
        m[a - 1][b - 1] -= w;
    return m;
}

inline int vacuum_digit(SiteKind kind) { return kind == SiteKind::fundamental ? 0 : 2; }

// Eigenvalue of the site Lax entry (i,i) on the site's highest weight vector.
inline FieldScalar site_vacuum_eigenvalue(const Site& s, int i, const FieldScalar& u, const ModelConstant& c) {
    if (s.kind == SiteKind::fundamental) return i == 1 ? f(u, s.xi, c) : FieldScalar(1);
    return i == 3 ? f(s.xi, u, c) : FieldScalar(1);
}

using MatrixHandle = std::shared_ptr<const SparseMatrix>;

// A representation of the monodromy algebra on a finite tensor product of sites, with a
// reference (vacuum) vector annihilated by every lower-triangular entry.
class Representation {
public:
    virtual ~Representation() = default;

    virtual const ModelConstant& model_constant() const = 0;
    virtual std::size_t site_count() const = 0;
    virtual BasisIndex dimension() const = 0;
    // Entry T_ij(u), 1-based indices.
    virtual MatrixHandle entry(int i, int j, const FieldScalar& u) const = 0;
    // lambda_i(u): eigenvalue of T_ii(u) on the vacuum.
    virtual FieldScalar vacuum_eigenvalue(int i, const FieldScalar& u) const = 0;
    virtual BasisIndex vacuum_index() const = 0;
    // Spectral values where the entries have poles.
    virtual ParamSet poles() const = 0;

    StateVector vacuum() const { return StateVector::basis(dimension(), vacuum_index()); }
    // The dual vacuum has the same coefficients, read as a row vector.
    StateVector dual_vacuum() const { return vacuum(); }

    // r_k(u) = lambda_k(u) / lambda_2(u)
    FieldScalar ratio(int k, const FieldScalar& u) const {
        return FieldScalar(vacuum_eigenvalue(k, u) / vacuum_eigenvalue(2, u));
    }
    FieldScalar ratio_product(int k, const ParamSet& us) const {
        FieldScalar p = 1;
        for (const auto& u : us) p *= ratio(k, u);
        return p;
    }
    FieldScalar eigenvalue_product(int k, const ParamSet& us) const {
        FieldScalar p = 1;
        for (const auto& u : us) p *= vacuum_eigenvalue(k, u);
        return p;
    }

    void require_regular(const FieldScalar& u) const {
        if (poles().contains(u)) throw PoleError("spectral parameter " + to_string(u) + " hits an inhomogeneity");
    }
};

struct Segment {
    Twist twist = untwisted();
    std::vector<Site> sites;
};

// Monodromy D_k L..L (segment k) ... D_1 L..L (segment 1) restricted to the active
// segments; inactive segments contribute the identity on their sites.
class ChainMonodromy final : public Representation {
public:
    ChainMonodromy(ModelConstant c, std::vector<Segment> segments, std::vector<bool> active,
                   std::size_t max_sites = default_max_sites)
        : c_(std::move(c)), segments_(std::move(segments)), active_(std::move(active)) {
        if (active_.size() != segments_.size()) throw RangeError("segment activity mask has wrong length");
        for (const auto& s : segments_) {
            require_valid_twist(s.twist);
            sites_ += s.sites.size();
        }
        if (sites_ > max_sites)
            throw RangeError("chain length " + std::to_string(sites_) + " exceeds the cap of " + std::to_string(max_sites));
        dim_ = 1;
        BasisIndex weight = 1;
        for (const auto& s : segments_)
            for (const auto& site : s.sites) {
                vac_ += weight * vacuum_digit(site.kind);
                weight *= 3;
                dim_ *= 3;
            }
    }

    explicit ChainMonodromy(const ChainSpec& spec)
        : ChainMonodromy(spec.c, {Segment{spec.twist, spec.sites}}, {true}, spec.max_sites) {}

    ChainMonodromy(const ChainMonodromy&) = delete;
    ChainMonodromy& operator=(const ChainMonodromy&) = delete;

    const ModelConstant& model_constant() const override { return c_; }
    std::size_t site_count() const override { return sites_; }
    BasisIndex dimension() const override { return dim_; }
    BasisIndex vacuum_index() const override { return vac_; }
    const std::vector<Segment>& segments() const { return segments_; }
    const std::vector<bool>& active() const { return active_; }

    ParamSet poles() const override {
        std::vector<FieldScalar> out;
        for (std::size_t k = 0; k < segments_.size(); ++k)
            if (active_[k])
                for (const auto& s : segments_[k].sites) out.push_back(s.xi);
        return ParamSet(std::move(out));
    }

    FieldScalar vacuum_eigenvalue(int i, const FieldScalar& u) const override {
        if (i < 1 || i > 3) throw RangeError("monodromy indices must lie in 1..3");
        require_regular(u);
        FieldScalar p = 1;
        for (std::size_t k = 0; k < segments_.size(); ++k) {
            if (!active_[k]) continue;
            p *= segments_[k].twist[i - 1];
            for (const auto& s : segments_[k].sites) p *= site_vacuum_eigenvalue(s, i, u, c_);
        }
        return p;
    }

    MatrixHandle entry(int i, int j, const FieldScalar& u) const override {
        if (i < 1 || i > 3 || j < 1 || j > 3) throw RangeError("monodromy indices must lie in 1..3");
        auto table = all_entries(u);
        const SparseMatrix* m = &(*table)[(i - 1) * 3 + (j - 1)];
        return MatrixHandle(std::move(table), m);
    }

private:
    using EntryTable = std::array<SparseMatrix, 9>;

    std::shared_ptr<const EntryTable> all_entries(const FieldScalar& u) const {
        {
            std::shared_lock lock(mutex_);
            auto it = cache_.find(u);
            if (it != cache_.end()) return it->second;
        }
        require_regular(u);
        auto table = std::make_shared<EntryTable>();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) (*table)[i * 3 + j] = SparseMatrix::scalar(1, FieldScalar(i == j ? 1 : 0));
        SiteMatrix id{};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) id[a][b] = a == b ? 1 : 0;
        SiteMatrix zero{};
        for (auto& row : zero)
            for (auto& x : row) x = 0;

        for (std::size_t k = 0; k < segments_.size(); ++k) {
            for (const auto& site : segments_[k].sites) {
                EntryTable next;
                for (int i = 0; i < 3; ++i) {
                    for (int j = 0; j < 3; ++j) {
                        SparseMatrix acc((*table)[0].dimension() * 3);
                        for (int m = 0; m < 3; ++m) {
                            SiteMatrix op = active_[k] ? lax_entry(site.kind, i + 1, m + 1, u, site.xi, c_) : (i == m ? id : zero);
                            acc = acc + SparseMatrix::kron_site(op, (*table)[m * 3 + j]);
                        }
                        next[i * 3 + j] = std::move(acc);
                    }
                }
                *table = std::move(next);
            }
            if (active_[k])
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) (*table)[i * 3 + j] = (*table)[i * 3 + j].scaled(segments_[k].twist[i]);
        }

        std::unique_lock lock(mutex_);
        auto [it, inserted] = cache_.emplace(u, std::move(table));
        return it->second;
    }

    ModelConstant c_;
    std::vector<Segment> segments_;
    std::vector<bool> active_;
    std::size_t sites_ = 0;
    BasisIndex dim_ = 1;
    BasisIndex vac_ = 0;
    mutable std::shared_mutex mutex_;
    mutable std::map<FieldScalar, std::shared_ptr<const EntryTable>> cache_;
};

// T'_ij(u) = T_ji(u)^T. This is the representation in which the transpose of a vector
// built in the base representation is the image under the anti-morphism T_ij -> T_ji.
class TransposedImage final : public Representation {
public:
    explicit TransposedImage(const Representation& base) : base_(base) {}

    const ModelConstant& model_constant() const override { return base_.model_constant(); }
    std::size_t site_count() const override { return base_.site_count(); }
    BasisIndex dimension() const override { return base_.dimension(); }
    BasisIndex vacuum_index() const override { return base_.vacuum_index(); }
    ParamSet poles() const override { return base_.poles(); }
    FieldScalar vacuum_eigenvalue(int i, const FieldScalar& u) const override { return base_.vacuum_eigenvalue(i, u); }

    MatrixHandle entry(int i, int j, const FieldScalar& u) const override {
        std::pair<int, FieldScalar> key{i * 3 + j, u};
        {
            std::shared_lock lock(mutex_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        auto m = std::make_shared<const SparseMatrix>(base_.entry(j, i, u)->transposed());
        std::unique_lock lock(mutex_);
        return cache_.emplace(std::move(key), std::move(m)).first->second;
    }

private:
    const Representation& base_;
    mutable std::shared_mutex mutex_;
    mutable std::map<std::pair<int, FieldScalar>, MatrixHandle> cache_;
};

// T'_ij(u) = T_{4-j,4-i}(-u), the image under the index-reflecting morphism.
class ReflectedImage final : public Representation {
public:
    explicit ReflectedImage(const Representation& base) : base_(base) {}

    const ModelConstant& model_constant() const override { return base_.model_constant(); }
    std::size_t site_count() const override { return base_.site_count(); }
    BasisIndex dimension() const override { return base_.dimension(); }
    BasisIndex vacuum_index() const override { return base_.vacuum_index(); }
    ParamSet poles() const override { return base_.poles().negated(); }
    FieldScalar vacuum_eigenvalue(int i, const FieldScalar& u) const override {
        return base_.vacuum_eigenvalue(4 - i, FieldScalar(-u));
    }
    MatrixHandle entry(int i, int j, const FieldScalar& u) const override {
        return base_.entry(4 - j, 4 - i, FieldScalar(-u));
    }

private:
    const Representation& base_;
};

struct RttCounterexample {
    int a, b, i, j;
    BasisIndex row, col;
    FieldScalar residual;
};

struct RttReport {
    bool ok = true;
    std::optional<RttCounterexample> counterexample;
};

// Checks all 81 entry equations of R(w1,w2) T1(w1) T2(w2) = T2(w2) T1(w1) R(w1,w2) with
// R = 1 + g P:
//   T_ai(w1)T_bj(w2) + g T_bi(w1)T_aj(w2) = T_bj(w2)T_ai(w1) + g T_bi(w2)T_aj(w1).
inline RttReport rtt_selftest(const Representation& rep, const FieldScalar& w1, const FieldScalar& w2) {
    if (w1 == w2) throw PoleError("RTT check needs distinct spectral parameters");
    const auto& c = rep.model_constant();
    FieldScalar gw = g(w1, w2, c);
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b)
            for (int i = 1; i <= 3; ++i)
                for (int j = 1; j <= 3; ++j) {
                    SparseMatrix lhs = (*rep.entry(a, i, w1)) * (*rep.entry(b, j, w2)) +
                                       ((*rep.entry(b, i, w1)) * (*rep.entry(a, j, w2))).scaled(gw);
                    SparseMatrix rhs = (*rep.entry(b, j, w2)) * (*rep.entry(a, i, w1)) +
                                       ((*rep.entry(b, i, w2)) * (*rep.entry(a, j, w1))).scaled(gw);
                    if (auto e = (lhs - rhs).first_nonzero())
                        return {false, RttCounterexample{a, b, i, j, e->row, e->col, e->value}};
                }
    return {};
}

struct TransposeReport {
    bool ok = true;
    int i = 0, j = 0;
    std::optional<FieldScalar> at;
};

// Whether T_ij(u)^T == T_ji(u) for all i,j at the given probe points.
inline TransposeReport transpose_realization_check(const Representation& rep, const std::vector<FieldScalar>& probes) {
    for (const auto& u : probes)
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= 3; ++j)
                if (!(rep.entry(i, j, u)->transposed() == *rep.entry(j, i, u))) return {false, i, j, u};
    return {};
}

}  // namespace gl3bethe
