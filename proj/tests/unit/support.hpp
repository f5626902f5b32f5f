#pragma once

#include <string>
#include <vector>

#include "gl3bethe/rep.hpp"

namespace testing_support {

using gl3bethe::FieldScalar;

inline FieldScalar q(long num, long den = 1) {
    FieldScalar x(num, den);
    x.canonicalize();
    return x;
}

inline gl3bethe::ParamSet set(std::initializer_list<FieldScalar> xs) { return gl3bethe::ParamSet(std::vector<FieldScalar>(xs)); }

// Twisted, inhomogeneous chains with generic inhomogeneities (c = 1).
inline gl3bethe::ChainSpec chain(std::size_t length, const std::string& kinds = {},
                                 gl3bethe::Twist twist = {q(2), q(-3), q(5, 2)}) {
    static const std::vector<FieldScalar> xi = {q(0), q(3, 7), q(-2, 5), q(9, 4), q(-11, 6), q(13, 3)};
    std::string k = kinds.empty() ? std::string(length, 'f') : kinds;
    return gl3bethe::ChainSpec::mixed(gl3bethe::ModelConstant(q(1)), k, std::vector<FieldScalar>(xi.begin(), xi.begin() + length),
                                      twist);
}

// Bethe parameters away from the inhomogeneities above.
inline const std::vector<FieldScalar>& pool() {
    static const std::vector<FieldScalar> p = {q(11, 3), q(5, 13), q(-5, 2), q(17, 4), q(-23, 7), q(29, 5), q(-31, 9), q(41, 11)};
    return p;
}

inline gl3bethe::ParamSet take(std::size_t from, std::size_t count) {
    return gl3bethe::ParamSet(std::vector<FieldScalar>(pool().begin() + from, pool().begin() + from + count));
}

}  // namespace testing_support
