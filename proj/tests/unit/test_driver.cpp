#include <gtest/gtest.h>

#include "gl3bethe/driver.hpp"
#include "support.hpp"

using namespace gl3bethe;
using testing_support::q;
using testing_support::set;

namespace {

JobConfig small_config(std::vector<std::string> suites) {
    JobConfig cfg;
    cfg.suites = std::move(suites);
    cfg.a_max = 1;
    cfg.b_max = 1;
    cfg.samples = 1;
    return cfg;
}

}  // namespace

TEST(Draws, Deterministic) {
    EXPECT_TRUE(draw_generic_rationals(7, 5, 20) == draw_generic_rationals(7, 5, 20));
    EXPECT_FALSE(draw_generic_rationals(7, 5, 20) == draw_generic_rationals(8, 5, 20));
    EXPECT_TRUE(draw_generic_rationals(7, 0, 20).empty());
}

TEST(Draws, JointlyGenericWithFixedValues) {
    const ModelConstant one{FieldScalar(1)};
    std::vector<LabelledSet> fixed = {{"xi", set({q(0), q(10)})}};
    ParamSet d = draw_generic_rationals(3, 8, 12, fixed, one);
    EXPECT_EQ(d.size(), 8u);
    fixed.push_back({"draw", d});
    EXPECT_FALSE(genericity_check(fixed, one));
    for (const auto& x : d) {
        EXPECT_LE(abs(x.get_num()), 12);
        EXPECT_LE(x.get_den(), 12);
    }
}

TEST(Draws, Exhaustion) {
    // bound 1 admits only -1, 0, 1 and those pairwise differ by c = 1
    EXPECT_THROW(draw_generic_rationals(1, 1, 1, {{"xi", set({q(-1), q(0), q(1)})}}, ModelConstant(q(1)), 200), RetryExhausted);
    EXPECT_THROW(draw_generic_rationals(1, 5, 3), RangeError);
}

TEST(Config, ParsesAndEchoes) {
    auto j = nlohmann::json::parse(R"({
        "c": "1/2",
        "chain": {"L": 2, "xi": ["0", "3/7"], "kinds": "fa", "twist": ["2", "-3", 5]},
        "split": {"L1": "sweep", "first_twist": ["1", "1", "1"]},
        "suites": ["rtt"], "a_max": 1, "b_max": 0, "samples": 3, "seed": 9, "bound": 30, "max_L": 5
    })");
    JobConfig cfg = parse_job_config(j);
    EXPECT_EQ(cfg.c, q(1, 2));
    EXPECT_EQ(cfg.length, 2u);
    EXPECT_EQ(cfg.kinds, "fa");
    EXPECT_EQ(cfg.twist[2], q(5));
    EXPECT_FALSE(cfg.split);
    EXPECT_EQ(cfg.samples, 3u);
    nlohmann::json echo = config_json(cfg);
    EXPECT_EQ(echo["c"], "1/2");
    EXPECT_EQ(echo["split"]["L1"], "sweep");
    EXPECT_EQ(echo["chain"]["xi"][1], "3/7");
    EXPECT_EQ(parse_job_config(echo).seed, 9u);
}

TEST(Config, Rejections) {
    EXPECT_THROW(parse_job_config(nlohmann::json::parse(R"({"colour": 3})")), ConfigError);
    EXPECT_THROW(parse_job_config(nlohmann::json::parse(R"({"c": "1/0"})")), ConfigError);
    EXPECT_THROW(parse_job_config(nlohmann::json::parse(R"({"chain": {"twist": ["1", "0", "1"]}})")), ConfigError);
    EXPECT_THROW(parse_job_config(nlohmann::json::parse(R"({"split": {"L1": "all"}})")), ConfigError);
    EXPECT_THROW(parse_job_config(nlohmann::json::parse(R"({"a_max": "two"})")), ConfigError);
    JobConfig bad_suite = small_config({"nonsense"});
    EXPECT_THROW(run(bad_suite), ConfigError);
    JobConfig too_long;
    too_long.length = 9;
    EXPECT_THROW(run(too_long), ConfigError);
}

TEST(Run, EmptySelection) {
    Report r = run(small_config({}));
    EXPECT_TRUE(r.checks.empty());
    EXPECT_EQ(r.exit_code(), 0);
    EXPECT_EQ(r.to_json()["summary"]["total"], 0);
}

TEST(Run, CoincidingInhomogeneities) {
    JobConfig cfg = small_config({"rtt"});
    cfg.xi = std::vector<FieldScalar>{q(0), q(1, 2), q(0)};
    try {
        run(cfg);
        FAIL() << "expected a genericity violation";
    } catch (const GenericityError& e) {
        EXPECT_NE(std::string(e.what()).find("coincide"), std::string::npos);
    }
}

TEST(Run, DefaultConfigAllOk) {
    JobConfig cfg;
    Report r = run(cfg);
    EXPECT_GT(r.checks.size(), 0u);
    EXPECT_EQ(r.count(Status::fail), 0u);
    EXPECT_EQ(r.exit_code(), 0);
    for (const auto& c : r.checks)
        if (c.verdict.status == Status::skipped) EXPECT_FALSE(c.verdict.note.empty()) << c.key;
}

TEST(Run, ReportIndependentOfWorkers) {
    JobConfig cfg = small_config({"actions", "theorem1", "ledgers", "morphisms"});
    cfg.split.reset();
    cfg.jobs = 1;
    const std::string serial = run(cfg).to_json().dump();
    cfg.jobs = 6;
    EXPECT_EQ(run(cfg).to_json().dump(), serial);
}

TEST(Run, RationalsSerializedAsFractions) {
    Report r = run(small_config({"bethe-equiv"}));
    nlohmann::json j = r.to_json();
    for (const auto& c : j["checks"])
        for (const auto& x : c["params"]["u"]) EXPECT_NE(x.get<std::string>().find('/'), std::string::npos);
    EXPECT_FALSE(j["checks"][0].contains("wall_ms"));
    r.timing = true;
    EXPECT_TRUE(r.to_json()["checks"][0].contains("wall_ms"));
}

TEST(Run, FailureGivesExitOne) {
    Report r;
    r.checks.push_back({"rtt", "k", {}, Verdict{Status::fail, Witness{3, q(1, 2), "x"}, {}}, 0});
    r.checks.push_back({"rtt", "l", {}, Verdict{}, 0});
    EXPECT_EQ(r.exit_code(), 1);
    nlohmann::json j = r.to_json();
    EXPECT_EQ(j["checks"][0]["witness"]["residual"], "1/2");
    EXPECT_EQ(j["checks"][0]["witness"]["basis_index"], 3);
}
