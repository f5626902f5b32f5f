#include <gtest/gtest.h>

#include "gl3bethe/weight.hpp"
#include "support.hpp"

using namespace gl3bethe;
using testing_support::chain;
using testing_support::q;
using testing_support::take;

namespace {
const Twist first_twist = {q(3), q(1, 2), q(-7)};
const ModelConstant one{FieldScalar(1)};
}  // namespace

TEST(WeightFunction, VacuumIsTrivial) {
    SegmentedModel m(SplitSpec::with_first_twist(chain(2), 1, first_twist));
    EXPECT_EQ(weight_vector(m.total_cache(), {}), m.total().vacuum());
    EXPECT_TRUE(weight_function_check(m, {}).ok());
}

TEST(WeightFunction, SmallChain) {
    SegmentedModel m(SplitSpec::with_first_twist(chain(2), 1, first_twist));
    EXPECT_TRUE(weight_function_check(m, {take(0, 1), take(4, 1)}).ok());
}

TEST(WeightFunction, Grid) {
    for (std::size_t cut = 0; cut <= 3; ++cut) {
        SegmentedModel m(SplitSpec::with_first_twist(chain(3, "faf"), cut, first_twist));
        for (std::size_t a = 0; a <= 2; ++a)
            for (std::size_t b = 0; b <= 2; ++b) EXPECT_TRUE(weight_function_check(m, {take(0, a), take(4, b)}).ok()) << cut << a << b;
    }
}

TEST(WeightFunction, LambdaThreeAtColourOneFails) {
    SegmentedModel m(SplitSpec::with_first_twist(chain(3), 1, first_twist));
    Verdict v = weight_function_check(m, {take(0, 1), take(4, 1)}, {true});
    EXPECT_EQ(v.status, Status::fail);
}

TEST(CoproductFactor, ClosedForm) {
    // (a,b) = (2,1): every assignment of u1 < u2 < v1 to the two parts
    const std::vector<FieldScalar> t = {q(11, 3), q(5, 13), q(-5, 2)};
    const std::vector<int> colour = {1, 1, 2};
    for (unsigned mask = 0; mask < 8; ++mask) {
        std::vector<ColouredPoint> first, second;
        std::vector<FieldScalar> uI, uII, vI, vII;
        for (std::size_t i = 0; i < 3; ++i) {
            bool in_first = (mask >> i) & 1;
            (in_first ? first : second).push_back({t[i], colour[i], i});
            auto& dest = colour[i] == 1 ? (in_first ? uI : uII) : (in_first ? vI : vII);
            dest.push_back(t[i]);
        }
        FieldScalar closed = set_product_f(ParamSet(uII), ParamSet(uI), one) * set_product_f(ParamSet(vII), ParamSet(vI), one) *
                             set_product_f(ParamSet(vI), ParamSet(uII), one);
        EXPECT_EQ(coproduct_factor(first, second, one), closed) << mask;
    }
}

TEST(CoproductFactor, Pieces) {
    ColouredPoint u1{q(1, 2), 1, 0}, u2{q(7, 3), 1, 1}, v1{q(-4, 5), 2, 2};
    EXPECT_EQ(beta_factor(u1, u2, one), f(q(7, 3), q(1, 2), one));
    EXPECT_EQ(beta_factor(u1, v1, one), 1);
    EXPECT_EQ(gamma_factor(u1, v1, one), f(q(-4, 5), q(1, 2), one));
    EXPECT_EQ(gamma_factor(v1, u1, one), 1 / f(q(-4, 5), q(1, 2), one));
    EXPECT_EQ(gamma_factor(u1, u2, one), 1);
}
