#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "gl3bethe/actions.hpp"
#include "gl3bethe/bethe.hpp"
#include "gl3bethe/composite.hpp"
#include "gl3bethe/ledger.hpp"
#include "gl3bethe/weight.hpp"

namespace gl3bethe {

inline constexpr const char* tool_version = "0.1.0";
inline constexpr int schema_version = 1;

inline const std::vector<std::string>& known_suites() {
    static const std::vector<std::string> s = {"rtt",      "actions", "bethe-equiv", "theorem1", "corollary1",
                                               "ledgers",  "weight",  "morphisms",   "coassoc"};
    return s;
}

struct JobConfig {
    FieldScalar c = 1;
    std::size_t length = 3;
    std::optional<std::vector<FieldScalar>> xi;  // drawn from xi_seed when absent
    std::optional<std::uint64_t> xi_seed;        // defaults to seed
    std::string kinds;                           // one of 'f'/'a' per site, all 'f' when empty
    Twist twist = {FieldScalar(2), FieldScalar(-3), FieldScalar(5, 2)};
    Twist first_twist = {FieldScalar(3), FieldScalar(1, 2), FieldScalar(-7)};
    Twist middle_twist = {FieldScalar(-2), FieldScalar(5), FieldScalar(1, 3)};
    std::optional<std::size_t> split = 1;  // nullopt: every cut position
    std::vector<std::string> suites = known_suites();
    std::size_t a_max = 2;
    std::size_t b_max = 2;
    std::size_t samples = 2;
    std::uint64_t seed = 1;
    long bound = 24;
    std::size_t max_length = default_max_sites;
    std::string out;
    std::size_t jobs = 1;
    bool timing = false;
};

namespace detail {

inline FieldScalar json_rational(const nlohmann::json& j, const std::string& what) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return FieldScalar(j.get<long>());
    throw ConfigError(what + " must be an integer or a \"p/q\" string");
}

inline Twist json_twist(const nlohmann::json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(what + " must be a list of three rationals");
    Twist t;
    for (int k = 0; k < 3; ++k) t[k] = json_rational(j[k], what);
    for (const auto& x : t)
        if (x == 0) throw ConfigError(what + " components must be nonzero");
    return t;
}

inline nlohmann::json twist_json(const Twist& t) { return {to_string(t[0]), to_string(t[1]), to_string(t[2])}; }

template <class T>
T json_get(const nlohmann::json& j, const std::string& key) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("config field '" + key + "' has the wrong type");
    }
}

inline void check_keys(const nlohmann::json& j, const std::vector<std::string>& allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw ConfigError("unknown field '" + it.key() + "' in " + where);
}

}  // namespace detail

inline JobConfig parse_job_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    detail::check_keys(j, {"schema_version", "c", "chain", "split", "suites", "a_max", "b_max", "samples", "seed", "bound", "max_L", "out"},
                       "config");
    JobConfig cfg;
    if (j.contains("schema_version") && detail::json_get<int>(j, "schema_version") != schema_version)
        throw ConfigError("unsupported config schema_version");
    if (j.contains("c")) cfg.c = detail::json_rational(j["c"], "c");
    if (j.contains("chain")) {
        const auto& ch = j["chain"];
        if (!ch.is_object()) throw ConfigError("chain must be an object");
        detail::check_keys(ch, {"L", "xi", "xi_seed", "kinds", "twist"}, "chain");
        if (ch.contains("L")) cfg.length = detail::json_get<std::size_t>(ch, "L");
        if (ch.contains("xi")) {
            if (!ch["xi"].is_array()) throw ConfigError("chain.xi must be a list");
            std::vector<FieldScalar> xi;
            for (const auto& x : ch["xi"]) xi.push_back(detail::json_rational(x, "chain.xi"));
            if (!ch.contains("L")) cfg.length = xi.size();
            cfg.xi = std::move(xi);
        }
        if (ch.contains("xi_seed")) cfg.xi_seed = detail::json_get<std::uint64_t>(ch, "xi_seed");
        if (ch.contains("kinds")) cfg.kinds = detail::json_get<std::string>(ch, "kinds");
        if (ch.contains("twist")) cfg.twist = detail::json_twist(ch["twist"], "chain.twist");
    }
    if (j.contains("split")) {
        const auto& sp = j["split"];
        if (!sp.is_object()) throw ConfigError("split must be an object");
        detail::check_keys(sp, {"L1", "first_twist", "middle_twist"}, "split");
        if (sp.contains("L1")) {
            if (sp["L1"].is_string()) {
                if (sp["L1"].get<std::string>() != "sweep") throw ConfigError("split.L1 must be an integer or \"sweep\"");
                cfg.split.reset();
            } else {
                cfg.split = detail::json_get<std::size_t>(sp, "L1");
            }
        }
        if (sp.contains("first_twist")) cfg.first_twist = detail::json_twist(sp["first_twist"], "split.first_twist");
        if (sp.contains("middle_twist")) cfg.middle_twist = detail::json_twist(sp["middle_twist"], "split.middle_twist");
    }
    if (j.contains("suites")) cfg.suites = detail::json_get<std::vector<std::string>>(j, "suites");
    if (j.contains("a_max")) cfg.a_max = detail::json_get<std::size_t>(j, "a_max");
    if (j.contains("b_max")) cfg.b_max = detail::json_get<std::size_t>(j, "b_max");
    if (j.contains("samples")) cfg.samples = detail::json_get<std::size_t>(j, "samples");
    if (j.contains("seed")) cfg.seed = detail::json_get<std::uint64_t>(j, "seed");
    if (j.contains("bound")) cfg.bound = detail::json_get<long>(j, "bound");
    if (j.contains("max_L")) cfg.max_length = detail::json_get<std::size_t>(j, "max_L");
    if (j.contains("out")) cfg.out = detail::json_get<std::string>(j, "out");
    return cfg;
}

// Normalized echo of the settings that determine the report content.
inline nlohmann::json config_json(const JobConfig& cfg) {
    nlohmann::json j;
    j["schema_version"] = schema_version;
    j["c"] = to_string(cfg.c);
    nlohmann::json chain;
    chain["L"] = cfg.length;
    if (cfg.xi) {
        std::vector<std::string> xs;
        for (const auto& x : *cfg.xi) xs.push_back(to_string(x));
        chain["xi"] = xs;
    } else {
        chain["xi_seed"] = cfg.xi_seed.value_or(cfg.seed);
    }
    chain["kinds"] = cfg.kinds.empty() ? std::string(cfg.length, 'f') : cfg.kinds;
    chain["twist"] = detail::twist_json(cfg.twist);
    j["chain"] = chain;
    nlohmann::json split;
    if (cfg.split) split["L1"] = *cfg.split;
    else split["L1"] = "sweep";
    split["first_twist"] = detail::twist_json(cfg.first_twist);
    split["middle_twist"] = detail::twist_json(cfg.middle_twist);
    j["split"] = split;
    j["suites"] = cfg.suites;
    j["a_max"] = cfg.a_max;
    j["b_max"] = cfg.b_max;
    j["samples"] = cfg.samples;
    j["seed"] = cfg.seed;
    j["bound"] = cfg.bound;
    j["max_L"] = cfg.max_length;
    return j;
}

// Deterministic draws p/q with |p| <= bound and 1 <= q <= bound, jointly generic with `fixed`
// and with each other. Uses raw mt19937_64 output (fully specified by the standard), so the
// draws do not depend on the standard library implementation.
inline ParamSet draw_generic_rationals(std::uint64_t seed, std::size_t count, long bound, const std::vector<LabelledSet>& fixed = {},
                                       const ModelConstant& c = ModelConstant(FieldScalar(1)), std::size_t max_attempts = 10000) {
    if (bound < 1 || static_cast<std::size_t>(bound) < count) throw RangeError("draw bound must be at least the number of draws");
    std::mt19937_64 gen(seed);
    const auto span = static_cast<std::uint64_t>(2 * bound + 1);
    std::vector<LabelledSet> sets = fixed;
    sets.push_back({"draw", {}});
    std::vector<FieldScalar> out;
    std::size_t attempts = 0;
    while (out.size() < count) {
        if (attempts++ >= max_attempts)
            throw RetryExhausted("no generic draw after " + std::to_string(max_attempts) + " attempts");
        const long num = static_cast<long>(gen() % span) - bound;
        const long den = 1 + static_cast<long>(gen() % static_cast<std::uint64_t>(bound));
        FieldScalar x(num, den);
        x.canonicalize();
        auto candidate = out;
        candidate.push_back(x);
        sets.back().values = ParamSet(candidate);
        if (!genericity_check(sets, c)) out = std::move(candidate);
    }
    return ParamSet(std::move(out));
}

struct CheckRecord {
    std::string suite;
    std::string key;
    nlohmann::json params;
    Verdict verdict;
    double wall_ms = 0;
};

struct Report {
    nlohmann::json config;
    std::vector<CheckRecord> checks;
    bool timing = false;

    std::size_t count(Status s) const {
        return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [&](const auto& r) { return r.verdict.status == s; }));
    }
    int exit_code() const { return count(Status::fail) > 0 ? 1 : 0; }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["schema_version"] = schema_version;
        j["tool"] = {{"name", "gl3bethe"}, {"version", tool_version}};
        j["config"] = config;
        j["summary"] = {{"total", checks.size()}, {"ok", count(Status::ok)}, {"fail", count(Status::fail)}, {"skipped", count(Status::skipped)}};
        nlohmann::json list = nlohmann::json::array();
        for (const auto& r : checks) {
            nlohmann::json e;
            e["suite"] = r.suite;
            e["key"] = r.key;
            e["params"] = r.params;
            e["verdict"] = to_string(r.verdict.status);
            if (r.verdict.witness)
                e["witness"] = {{"basis_index", r.verdict.witness->basis_index},
                                {"residual", to_string(r.verdict.witness->residual)},
                                {"detail", r.verdict.witness->detail}};
            if (!r.verdict.note.empty()) e["note"] = r.verdict.note;
            if (timing) e["wall_ms"] = r.wall_ms;
            list.push_back(std::move(e));
        }
        j["checks"] = std::move(list);
        return j;
    }
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

// Per-instance seed, independent of scheduling and of the other instances.
inline std::uint64_t instance_seed(std::uint64_t seed, const std::string& key) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(fnv1a(key)), static_cast<std::uint32_t>(fnv1a(key) >> 32)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (std::uint64_t{words[0]} << 32) | words[1];
}

inline std::string key_of(const std::string& suite, const std::vector<std::pair<std::string, std::size_t>>& fields,
                          const std::string& tag = {}) {
    std::string k = suite;
    if (!tag.empty()) k += " " + tag;
    char buf[32];
    for (const auto& [name, value] : fields) {
        std::snprintf(buf, sizeof buf, "%02zu", value);
        k += " " + name + "=" + buf;
    }
    return k;
}

inline nlohmann::json set_json(const ParamSet& s) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& x : s) j.push_back(to_string(x));
    return j;
}

struct Task {
    std::string suite;
    std::string key;
    nlohmann::json params;
    std::function<Verdict()> run;
};

struct Draw {
    ParamSet u, v;
    std::optional<FieldScalar> z;
};

}  // namespace detail

// Chain and models shared by the tasks of one run.
class JobPlan {
public:
    explicit JobPlan(const JobConfig& cfg) : cfg_(cfg) {
        if (cfg.length > cfg.max_length)
            throw ConfigError("chain length " + std::to_string(cfg.length) + " exceeds max-L " + std::to_string(cfg.max_length));
        for (const auto& s : cfg.suites)
            if (std::find(known_suites().begin(), known_suites().end(), s) == known_suites().end())
                throw ConfigError("unknown suite '" + s + "'");
        if (cfg.split && *cfg.split > cfg.length) throw ConfigError("split position exceeds chain length");
        if (cfg.samples == 0 && !cfg.suites.empty()) throw ConfigError("samples must be positive");
        const ModelConstant c(cfg.c);
        std::vector<FieldScalar> xi;
        if (cfg.xi) {
            if (cfg.xi->size() != cfg.length) throw ConfigError("chain.xi has " + std::to_string(cfg.xi->size()) + " entries but L is " +
                                                                std::to_string(cfg.length));
            xi = *cfg.xi;
            if (auto viol = genericity_check({{"xi", ParamSet(xi)}}, c)) throw GenericityError("inhomogeneities not generic: " + viol->describe());
        } else {
            xi = draw_generic_rationals(cfg.xi_seed.value_or(cfg.seed), cfg.length, cfg.bound, {}, c).elements();
        }
        std::string kinds = cfg.kinds.empty() ? std::string(cfg.length, 'f') : cfg.kinds;
        try {
            spec_ = ChainSpec::mixed(c, kinds, xi, cfg.twist);
        } catch (const RangeError& e) {
            throw ConfigError(e.what());
        }
        spec_.max_sites = cfg.max_length;
        rep_ = std::make_unique<ChainMonodromy>(spec_);
        cache_ = std::make_unique<BetheCache>(*rep_);
    }

    const ChainSpec& spec() const { return spec_; }
    const ChainMonodromy& rep() const { return *rep_; }
    const BetheCache& cache() const { return *cache_; }

    std::vector<std::size_t> cuts() const {
        if (cfg_.split) return {*cfg_.split};
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k <= cfg_.length; ++k) out.push_back(k);
        return out;
    }

    const SegmentedModel& split_model(std::size_t cut) {
        auto& slot = splits_[cut];
        if (!slot) slot = std::make_unique<SegmentedModel>(SplitSpec::with_first_twist(spec_, cut, cfg_.first_twist));
        return *slot;
    }

    const SegmentedModel& three_part_model(std::size_t first, std::size_t second) {
        auto& slot = triples_[{first, second}];
        if (!slot) {
            Twist last;
            for (int k = 0; k < 3; ++k) last[k] = cfg_.twist[k] / (cfg_.first_twist[k] * cfg_.middle_twist[k]);
            auto at = [&](std::size_t k) { return spec_.sites.begin() + static_cast<std::ptrdiff_t>(k); };
            std::vector<Segment> segs = {{cfg_.first_twist, {at(0), at(first)}},
                                         {cfg_.middle_twist, {at(first), at(second)}},
                                         {last, {at(second), spec_.sites.end()}}};
            slot = std::make_unique<SegmentedModel>(spec_.c, std::move(segs), spec_.max_sites);
        }
        return *slot;
    }

    // u (a values), v (b values) and optionally z, generic with xi and, if asked, with -xi.
    detail::Draw draw(const std::string& key, std::size_t a, std::size_t b, bool with_z, bool reflected = false) const {
        std::vector<LabelledSet> fixed = {{"xi", spec_.inhomogeneities()}};
        if (reflected) fixed.push_back({"-xi", spec_.inhomogeneities().negated()});
        ParamSet all = draw_generic_rationals(detail::instance_seed(cfg_.seed, key), a + b + (with_z ? 1 : 0), cfg_.bound, fixed, spec_.c);
        const auto& e = all.elements();
        detail::Draw d;
        d.u = ParamSet(std::vector<FieldScalar>(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(a)));
        d.v = ParamSet(std::vector<FieldScalar>(e.begin() + static_cast<std::ptrdiff_t>(a), e.begin() + static_cast<std::ptrdiff_t>(a + b)));
        if (with_z) d.z = e.back();
        return d;
    }

private:
    JobConfig cfg_;
    ChainSpec spec_;
    std::unique_ptr<ChainMonodromy> rep_;
    std::unique_ptr<BetheCache> cache_;
    std::map<std::size_t, std::unique_ptr<SegmentedModel>> splits_;
    std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<SegmentedModel>> triples_;
};

namespace detail {

inline nlohmann::json draw_json(const Draw& d) {
    nlohmann::json j{{"u", set_json(d.u)}, {"v", set_json(d.v)}};
    if (d.z) j["z"] = to_string(*d.z);
    return j;
}

inline Verdict rtt_verdict(const Representation& rep, const FieldScalar& w1, const FieldScalar& w2) {
    auto r = rtt_selftest(rep, w1, w2);
    if (r.ok) return {};
    const auto& e = *r.counterexample;
    char buf[96];
    std::snprintf(buf, sizeof buf, "entry (%d%d,%d%d) column %llu", e.a, e.i, e.b, e.j, static_cast<unsigned long long>(e.col));
    return {Status::fail, Witness{e.row, e.residual, buf}, {}};
}

inline std::vector<Task> plan_tasks(const JobConfig& cfg, JobPlan& plan) {
    std::vector<Task> tasks;
    const auto& rep = plan.rep();
    const auto& cache = plan.cache();
    auto want = [&](const std::string& s) { return std::find(cfg.suites.begin(), cfg.suites.end(), s) != cfg.suites.end(); };
    const std::size_t L = cfg.length;
    auto grid = [&](auto&& fn) {
        for (std::size_t a = 0; a <= cfg.a_max; ++a)
            for (std::size_t b = 0; b <= cfg.b_max; ++b)
                for (std::size_t s = 0; s < cfg.samples; ++s) fn(a, b, s);
    };

    if (want("rtt"))
        for (std::size_t s = 0; s < cfg.samples; ++s) {
            std::string key = key_of("rtt", {{"L", L}, {"sample", s}});
            Draw d = plan.draw(key, 2, 0, false);
            FieldScalar w1 = d.u[0], w2 = d.u[1];
            tasks.push_back({"rtt", key, {{"L", L}, {"w1", to_string(w1)}, {"w2", to_string(w2)}},
                             [&rep, w1, w2] { return rtt_verdict(rep, w1, w2); }});
        }

    if (want("actions"))
        for (ActionKind kind : all_action_kinds)
            grid([&](std::size_t a, std::size_t b, std::size_t s) {
                std::string key = key_of("actions", {{"L", L}, {"a", a}, {"b", b}, {"sample", s}}, to_string(kind));
                Draw d = plan.draw(key, a, b, true);
                nlohmann::json p = draw_json(d);
                p["L"] = L;
                p["action"] = to_string(kind);
                tasks.push_back({"actions", key, p, [&cache, kind, d] { return verify_action(kind, cache, {d.u, d.v}, *d.z); }});
            });

    if (want("bethe-equiv"))
        grid([&](std::size_t a, std::size_t b, std::size_t s) {
            std::string key = key_of("bethe-equiv", {{"L", L}, {"a", a}, {"b", b}, {"sample", s}});
            Draw d = plan.draw(key, a, b, false);
            nlohmann::json p = draw_json(d);
            p["L"] = L;
            tasks.push_back({"bethe-equiv", key, p, [&rep, &cache, d] {
                                 return compare_vectors(*cache.get({d.u, d.v}), bethe_vector_recursive(rep, {d.u, d.v}),
                                                        "explicit versus recursive");
                             }});
        });

    for (const char* suite : {"theorem1", "corollary1", "weight"}) {
        if (!want(suite)) continue;
        const std::string name = suite;
        for (std::size_t cut : plan.cuts()) {
            const SegmentedModel& model = plan.split_model(cut);
            grid([&](std::size_t a, std::size_t b, std::size_t s) {
                std::string key = key_of(name, {{"L", L}, {"L1", cut}, {"a", a}, {"b", b}, {"sample", s}});
                Draw d = plan.draw(key, a, b, false);
                nlohmann::json p = draw_json(d);
                p["L"] = L;
                p["L1"] = cut;
                std::function<Verdict()> run;
                if (name == "theorem1") run = [&model, d] { return theorem1_verify(model, {d.u, d.v}); };
                else if (name == "corollary1") run = [&model, d] { return corollary1_verify(model, {d.u, d.v}); };
                else run = [&model, d] { return weight_function_check(model, {d.u, d.v}); };
                tasks.push_back({name, key, p, run});
            });
        }
    }

    if (want("ledgers"))
        for (std::size_t cut : plan.cuts()) {
            const SegmentedModel& model = plan.split_model(cut);
            grid([&](std::size_t a, std::size_t b, std::size_t s) {
                if (a == 0) return;
                for (const std::string which : {"T13", "T12"}) {
                    if (which == "T13" && b == 0) continue;
                    std::string key = key_of("ledgers", {{"L", L}, {"L1", cut}, {"a", a}, {"b", b}, {"sample", s}}, which);
                    Draw d = plan.draw(key, a - 1, which == "T13" ? b - 1 : b, true);
                    nlohmann::json p = draw_json(d);
                    p["L"] = L;
                    p["L1"] = cut;
                    p["ledger"] = which;
                    p["a"] = a;
                    p["b"] = b;
                    tasks.push_back({"ledgers", key, p, [&model, d, which] {
                                         TermLedger l = which == "T13" ? ledger_T13(model, d.u, d.v, *d.z) : ledger_T12(model, d.u, d.v, *d.z);
                                         Verdict v = l.overall();
                                         if (v.ok()) v.note = std::to_string(l.terms.size()) + " terms, " + std::to_string(l.checks.size()) + " checks";
                                         return v;
                                     }});
                }
            });
        }

    if (want("morphisms")) {
        std::string probe_key = key_of("morphisms", {{"L", L}}, "probes");
        Draw probes = plan.draw(probe_key, 3, 0, false);
        const bool transposable = transpose_realization_check(rep, probes.u.elements()).ok;
        grid([&](std::size_t a, std::size_t b, std::size_t s) {
            std::string base = key_of("morphisms", {{"L", L}, {"a", a}, {"b", b}, {"sample", s}});
            Draw d = plan.draw(base, a, b, false, true);
            nlohmann::json p = draw_json(d);
            p["L"] = L;
            BetheIndex idx{d.u, d.v};
            p["morphism"] = "psi-transpose";
            tasks.push_back({"morphisms", key_of("morphisms", {{"L", L}, {"a", a}, {"b", b}, {"sample", s}}, "psi-transpose"), p,
                             [&cache, idx, transposable] {
                                 if (!transposable) return Verdict::skipped("transpose_realization_check failed: T_ij^T != T_ji");
                                 return compare_vectors(*cache.get(idx, VacuumSide::bra), *cache.get(idx), "dual vector versus transposed vector");
                             }});
            p["morphism"] = "psi-image";
            tasks.push_back({"morphisms", key_of("morphisms", {{"L", L}, {"a", a}, {"b", b}, {"sample", s}}, "psi-image"), p,
                             [&rep, &cache, idx] {
                                 TransposedImage image(rep);
                                 return compare_vectors(*cache.get(idx, VacuumSide::bra), bethe_vector(image, idx),
                                                        "dual vector versus vector of the transposed image");
                             }});
            p["morphism"] = "phi";
            tasks.push_back({"morphisms", key_of("morphisms", {{"L", L}, {"a", a}, {"b", b}, {"sample", s}}, "phi"), p,
                             [&rep, &cache, idx] {
                                 StateVector image = apply_morphism(Morphism::phi, bethe_polynomial(idx, rep.model_constant()), rep);
                                 return compare_vectors(image, *cache.get({idx.v.negated(), idx.u.negated()}), "phi image versus swapped vector");
                             }});
        });
    }

    if (want("coassoc"))
        for (std::size_t first = 0; first <= L; ++first)
            for (std::size_t second = first; second <= L; ++second) {
                const SegmentedModel& model = plan.three_part_model(first, second);
                grid([&](std::size_t a, std::size_t b, std::size_t s) {
                    std::string key = key_of("coassoc", {{"L", L}, {"L1", first}, {"L2", second}, {"a", a}, {"b", b}, {"sample", s}});
                    Draw d = plan.draw(key, a, b, false);
                    nlohmann::json p = draw_json(d);
                    p["L"] = L;
                    p["L1"] = first;
                    p["L2"] = second;
                    tasks.push_back({"coassoc", key, p, [&model, d] { return coassociativity_verify(model, {d.u, d.v}); }});
                });
            }
    return tasks;
}

}  // namespace detail

// Plans, runs and collects every selected check. Parameter draws happen while planning, on
// one thread, so RetryExhausted surfaces before any check runs.
inline Report run(const JobConfig& cfg) {
    JobPlan plan(cfg);
    std::vector<detail::Task> tasks = detail::plan_tasks(cfg, plan);
    std::vector<CheckRecord> records(tasks.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            auto start = std::chrono::steady_clock::now();
            Verdict v;
            try {
                v = tasks[i].run();
            } catch (const Error& e) {
                v = {Status::fail, std::nullopt, std::string("error: ") + e.what()};
            }
            double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            records[i] = {tasks[i].suite, tasks[i].key, std::move(tasks[i].params), std::move(v), ms};
        }
    };
    const std::size_t n = std::max<std::size_t>(1, std::min(cfg.jobs, tasks.size()));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::sort(records.begin(), records.end(), [](const auto& x, const auto& y) { return x.key < y.key; });
    Report r;
    r.config = config_json(cfg);
    r.config["chain"]["xi_resolved"] = detail::set_json(plan.spec().inhomogeneities());
    r.checks = std::move(records);
    r.timing = cfg.timing;
    return r;
}

}  // namespace gl3bethe
