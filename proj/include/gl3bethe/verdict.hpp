#pragma once

#include <optional>
#include <string>

#include "gl3bethe/linalg.hpp"
#include "gl3bethe/ratfun.hpp"

namespace gl3bethe {

enum class Status { ok, fail, skipped };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::ok: return "ok";
        case Status::fail: return "fail";
        case Status::skipped: return "skipped";
    }
    return "?";
}

// Where two sides first disagree: lowest basis index of the nonzero difference.
struct Witness {
    BasisIndex basis_index = 0;
    FieldScalar residual;
    std::string detail;
};

struct Verdict {
    Status status = Status::ok;
    std::optional<Witness> witness;
    std::string note;

    bool ok() const { return status == Status::ok; }

    static Verdict skipped(std::string why) { return {Status::skipped, std::nullopt, std::move(why)}; }
};

inline Verdict compare_vectors(const StateVector& lhs, const StateVector& rhs, const std::string& detail = {}) {
    if (auto d = (lhs - rhs).first_nonzero()) return {Status::fail, Witness{d->first, d->second, detail}, {}};
    return {};
}

inline Verdict expect_zero(const StateVector& v, const std::string& detail = {}) {
    if (auto d = v.first_nonzero()) return {Status::fail, Witness{d->first, d->second, detail}, {}};
    return {};
}

// Combines verdicts: the first failure wins, otherwise ok unless everything was skipped.
inline Verdict merge(const Verdict& a, const Verdict& b) {
    if (a.status == Status::fail) return a;
    if (b.status == Status::fail) return b;
    if (a.status == Status::skipped && b.status == Status::skipped) return a;
    return {};
}

}  // namespace gl3bethe
