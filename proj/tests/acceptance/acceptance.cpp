// Acceptance run: one PASS/FAIL line per criterion, exact rational equality throughout.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gl3bethe/driver.hpp"

using namespace gl3bethe;

namespace {

const ModelConstant c_one{FieldScalar(1)};
const long bound = 30;

FieldScalar q(long n, long d = 1) {
    FieldScalar x(n, d);
    x.canonicalize();
    return x;
}

const Twist parent_twist = {q(2), q(-3), q(5, 2)};
const Twist first_twist = {q(3), q(1, 2), q(-7)};
const Twist middle_twist = {q(-2), q(5), q(1, 3)};

struct Tally {
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::string first_failure;

    void record(bool ok, const std::string& what) {
        ++checks;
        if (!ok && failures++ == 0) first_failure = what;
    }
    void record(const Verdict& v, const std::string& what) {
        std::string detail = what;
        if (v.witness) detail += " [basis " + std::to_string(v.witness->basis_index) + ", residual " + to_string(v.witness->residual) + "]";
        if (!v.note.empty()) detail += " " + v.note;
        record(v.status != Status::fail, detail);
    }
};

std::string instance(std::size_t length, std::size_t cut, std::size_t a, std::size_t b, std::size_t draw) {
    std::ostringstream s;
    s << "L=" << length << " L1=" << cut << " a=" << a << " b=" << b << " draw=" << draw;
    return s.str();
}

ChainSpec fundamental_chain(std::size_t length, const Twist& twist, std::uint64_t seed) {
    ParamSet xi = draw_generic_rationals(seed, length, bound, {}, c_one);
    return ChainSpec::fundamental(c_one, xi.elements(), twist);
}

// u (a values), v (b values) and extra values, jointly generic with the given fixed sets.
struct Sample {
    ParamSet u, v;
    std::vector<FieldScalar> extra;
};

Sample draw_sample(std::uint64_t seed, std::size_t a, std::size_t b, std::size_t extra, const std::vector<LabelledSet>& fixed) {
    ParamSet all = draw_generic_rationals(seed, a + b + extra, bound, fixed, c_one);
    const auto& e = all.elements();
    Sample s;
    s.u = ParamSet(std::vector<FieldScalar>(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(a)));
    s.v = ParamSet(std::vector<FieldScalar>(e.begin() + static_cast<std::ptrdiff_t>(a), e.begin() + static_cast<std::ptrdiff_t>(a + b)));
    s.extra.assign(e.begin() + static_cast<std::ptrdiff_t>(a + b), e.end());
    return s;
}

std::uint64_t seed_of(int criterion, std::size_t a, std::size_t b, std::size_t c, std::size_t d, std::size_t e = 0) {
    return 1000003ull * criterion + 10007ull * a + 1009ull * b + 101ull * c + 11ull * d + e;
}

bool all_pass = true;

void report(int number, const std::string& title, const Tally& t, double seconds, double limit, const std::string& extra = {}) {
    const bool in_time = limit <= 0 || seconds < limit;
    const bool ok = t.failures == 0 && t.checks > 0 && in_time;
    all_pass = all_pass && ok;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2f s", seconds);
    std::cout << "criterion " << number << ": " << (ok ? "PASS" : "FAIL") << "  " << title << "  (" << t.checks << " checks, "
              << t.failures << " failed, " << timing;
    if (limit > 0) std::cout << ", limit " << limit << " s";
    std::cout << ")";
    if (!extra.empty()) std::cout << "  " << extra;
    if (t.failures) std::cout << "  first failure: " << t.first_failure;
    if (!in_time) std::cout << "  runtime bound exceeded";
    std::cout << std::endl;
}

template <class Fn>
void criterion(int number, const std::string& title, double limit, Fn&& body) {
    Tally t;
    std::string extra;
    auto start = std::chrono::steady_clock::now();
    try {
        body(t, extra);
    } catch (const Error& e) {
        t.record(false, std::string("error: ") + e.what());
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(number, title, t, seconds, limit, extra);
}

std::vector<LabelledSet> fixed_for(const Representation& rep) { return {{"xi", rep.poles()}}; }

}  // namespace

int main() {
    criterion(1, "RTT self-test, L in {0,1,2,3}, twisted inhomogeneous, 3 point pairs", 1.0, [](Tally& t, std::string&) {
        for (std::size_t L = 0; L <= 3; ++L) {
            ChainMonodromy rep(fundamental_chain(L, parent_twist, 10 + L));
            for (std::size_t k = 0; k < 3; ++k) {
                Sample s = draw_sample(seed_of(1, L, k, 0, 0), 0, 0, 2, fixed_for(rep));
                auto r = rtt_selftest(rep, s.extra[0], s.extra[1]);
                t.record(r.ok, "L=" + std::to_string(L) + " pair " + std::to_string(k));
            }
        }
    });

    criterion(2, "All seven action formulas, (a,b) in {0,1,2}^2, L in {2,3}, 3 draws", 30.0, [](Tally& t, std::string& extra) {
        std::size_t skipped = 0;
        for (std::size_t L = 2; L <= 3; ++L) {
            ChainMonodromy rep(fundamental_chain(L, parent_twist, 20 + L));
            BetheCache cache(rep);
            for (std::size_t a = 0; a <= 2; ++a)
                for (std::size_t b = 0; b <= 2; ++b)
                    for (std::size_t d = 0; d < 3; ++d) {
                        Sample s = draw_sample(seed_of(2, L, a, b, d), a, b, 1, fixed_for(rep));
                        for (ActionKind k : all_action_kinds) {
                            if (k == ActionKind::t32 && b == 0) {
                                ++skipped;
                                continue;
                            }
                            t.record(verify_action(k, cache, {s.u, s.v}, s.extra[0]), to_string(k) + " " + instance(L, 0, a, b, d));
                        }
                    }
        }
        extra = "T32 at b=0 skipped " + std::to_string(skipped) + "x";
    });

    criterion(3, "Explicit formula equals recursion, a+b <= 5, L <= 4", 60.0, [](Tally& t, std::string&) {
        for (std::size_t L = 0; L <= 4; ++L) {
            ChainMonodromy rep(fundamental_chain(L, parent_twist, 30 + L));
            for (std::size_t a = 0; a <= 5; ++a)
                for (std::size_t b = 0; a + b <= 5; ++b) {
                    Sample s = draw_sample(seed_of(3, L, a, b, 0), a, b, 0, fixed_for(rep));
                    BetheIndex idx{s.u, s.v};
                    t.record(compare_vectors(bethe_vector(rep, idx), bethe_vector_recursive(rep, idx)), instance(L, 0, a, b, 0));
                }
        }
    });

    ChainSpec four = fundamental_chain(4, parent_twist, 44);
    auto grid4 = [&](int number, std::size_t max_each, const std::function<Verdict(const SegmentedModel&, const BetheIndex&)>& check) {
        return [&four, number, max_each, check](Tally& t, std::string& extra) {
            for (std::size_t cut = 0; cut <= 4; ++cut) {
                SegmentedModel m(SplitSpec::with_first_twist(four, cut, first_twist));
                for (std::size_t a = 0; a <= max_each; ++a)
                    for (std::size_t b = 0; b <= max_each && a + b <= 5; ++b)
                        for (std::size_t d = 0; d < 2; ++d) {
                            Sample s = draw_sample(seed_of(number, cut, a, b, d), a, b, 0, fixed_for(m.total()));
                            t.record(check(m, {s.u, s.v}), instance(4, cut, a, b, d));
                        }
            }
            extra = "per-part twists D1=(3,1/2,-7), D2=D/D1";
        };
    };

    criterion(4, "Composite Bethe vector, 0<=a,b<=3, a+b<=5, all splits of L=4, 2 draws", 300.0,
              grid4(4, 3, [](const SegmentedModel& m, const BetheIndex& idx) { return theorem1_verify(m, idx); }));

    criterion(5, "Composite dual Bethe vector, same grid", 300.0,
              grid4(5, 3, [](const SegmentedModel& m, const BetheIndex& idx) { return corollary1_verify(m, idx); }));

    criterion(6, "Colour-2-only decomposition, a=0, b<=4, all splits of L=4", 0, [&four](Tally& t, std::string&) {
        for (std::size_t cut = 0; cut <= 4; ++cut) {
            SegmentedModel m(SplitSpec::with_first_twist(four, cut, first_twist));
            const auto& r1 = m.range(0, 1);
            const auto& r2 = m.range(1, 2);
            for (std::size_t b = 0; b <= 4; ++b)
                for (std::size_t d = 0; d < 2; ++d) {
                    Sample s = draw_sample(seed_of(6, cut, b, d, 0), 0, b, 0, fixed_for(m.total()));
                    StateVector rhs(m.total().dimension());
                    for (const auto& p : all_partitions_2(s.v))
                        rhs.add_scaled(StateVector::disjoint_product(bethe_vector(r1, {{}, p.first}), bethe_vector(r2, {{}, p.second}),
                                                                     m.total().vacuum_index()),
                                       r1.ratio_product(3, p.second) * set_product_f(p.second, p.first, c_one));
                    t.record(compare_vectors(bethe_vector(m.total(), {{}, s.v}), rhs), instance(4, cut, 0, b, d));
                }
        }
    });

    criterion(7, "Composite T13 and T12 actions up to (a,b)=(2,2), L=3", 0, [](Tally& t, std::string&) {
        ChainSpec three = fundamental_chain(3, parent_twist, 73);
        for (std::size_t cut = 0; cut <= 3; ++cut) {
            SegmentedModel m(SplitSpec::with_first_twist(three, cut, first_twist));
            for (std::size_t a = 1; a <= 2; ++a)
                for (std::size_t b = 0; b <= 2; ++b)
                    for (std::size_t d = 0; d < 2; ++d) {
                        Sample s12 = draw_sample(seed_of(7, cut, a, b, d, 1), a - 1, b, 1, fixed_for(m.total()));
                        t.record(act12_composite_verify(m, {s12.u, s12.v}, s12.extra[0]), "T12 " + instance(3, cut, a, b, d));
                        if (b == 0) continue;
                        Sample s13 = draw_sample(seed_of(7, cut, a, b, d, 2), a - 1, b - 1, 1, fixed_for(m.total()));
                        t.record(act13_composite_verify(m, {s13.u, s13.v}, s13.extra[0]), "T13 " + instance(3, cut, a, b, d));
                    }
        }
    });

    criterion(8, "T13 and T12 term ledgers at (a,b)=(2,2), L=4, with perturbation controls", 0, [&four](Tally& t, std::string& extra) {
        std::size_t controls = 0;
        for (std::size_t cut = 0; cut <= 4; ++cut) {
            SegmentedModel m(SplitSpec::with_first_twist(four, cut, first_twist));
            Sample s13 = draw_sample(seed_of(8, cut, 1, 0, 0), 1, 1, 1, fixed_for(m.total()));
            Sample s12 = draw_sample(seed_of(8, cut, 2, 0, 0), 1, 2, 1, fixed_for(m.total()));
            auto run = [&](const std::string& which, const std::optional<LedgerPerturbation>& p) {
                return which == "T13" ? ledger_T13(m, s13.u, s13.v, s13.extra[0], p) : ledger_T12(m, s12.u, s12.v, s12.extra[0], p);
            };
            for (const std::string which : {"T13", "T12"}) {
                TermLedger l = run(which, std::nullopt);
                for (const auto& ch : l.checks) t.record(ch.verdict, which + " " + ch.name + " L1=" + std::to_string(cut));
                // Doubling any nonzero term must break at least one check.
                for (const auto& [id, vec] : l.terms) {
                    if (vec.is_zero()) continue;
                    ++controls;
                    t.record(!run(which, LedgerPerturbation{id, FieldScalar(2)}).overall().ok(),
                             "perturbed " + id + " not detected, L1=" + std::to_string(cut));
                }
            }
            TermLedger flipped = run("T12", LedgerPerturbation{"gamma23", FieldScalar(-1)});
            ++controls;
            bool pair_failed = false;
            for (const auto& ch : flipped.checks)
                if (ch.name == "gamma12 + gamma23 = 0") pair_failed = ch.verdict.status == Status::fail;
            t.record(pair_failed || flipped.term("gamma23").is_zero(), "sign-flipped gamma23 not detected, L1=" + std::to_string(cut));
        }
        extra = std::to_string(controls) + " perturbation controls";
    });

    criterion(9, "Morphisms: psi(B)=C by transposition where certified (untwisted L<=3 required), phi(B)=B(-v;-u)", 0,
              [](Tally& t, std::string& extra) {
                  std::string certified, uncertified;
                  std::size_t image_checks = 0;
                  for (std::size_t L = 0; L <= 3; ++L)
                      for (bool twisted : {false, true}) {
                          ChainMonodromy rep(fundamental_chain(L, twisted ? parent_twist : untwisted(), 90 + L));
                          Sample probes = draw_sample(seed_of(9, L, twisted, 9, 9), 3, 0, 0, fixed_for(rep));
                          const bool transposable = transpose_realization_check(rep, probes.u.elements()).ok;
                          const std::string label = std::string(twisted ? "twisted" : "untwisted") + " L=" + std::to_string(L);
                          (transposable ? certified : uncertified) += (transposable ? certified : uncertified).empty() ? label : ", " + label;
                          if (!twisted) t.record(transposable, "transpose_realization_check fails on " + label);
                          BetheCache cache(rep);
                          TransposedImage image(rep);
                          for (std::size_t a = 0; a <= 2; ++a)
                              for (std::size_t b = 0; b <= 2; ++b) {
                                  Sample s = draw_sample(seed_of(9, L, twisted, a, b), a, b, 0,
                                                    {{"xi", rep.poles()}, {"-xi", rep.poles().negated()}});
                                  BetheIndex idx{s.u, s.v};
                                  const StateVector& dual = *cache.get(idx, VacuumSide::bra);
                                  if (transposable) t.record(compare_vectors(dual, *cache.get(idx)), "transposition " + label);
                                  ++image_checks;
                                  t.record(compare_vectors(dual, bethe_vector(image, idx)), "transposed image " + label);
                                  t.record(compare_vectors(apply_morphism(Morphism::phi, bethe_polynomial(idx, c_one), rep),
                                                           *cache.get({idx.v.negated(), idx.u.negated()})),
                                           "phi " + label);
                              }
                      }
                  extra = "transposition certified on: " + (certified.empty() ? std::string("none") : certified) +
                          "; not certified on: " + (uncertified.empty() ? std::string("none") : uncertified) + "; psi via transposed image " +
                          std::to_string(image_checks) + " checks" +
                          "; analysis: transposing a product of Lax operators reverses the site order, so "
                          "T_ij^T = T_ji needs L <= 1, and a non-scalar twist D^T D^-1 != 1 breaks it already at L=1";
              });

    criterion(10, "Weight-function coproduct and normalization, a,b<=2, all splits of L=4, 2 draws", 0,
              grid4(10, 2, [](const SegmentedModel& m, const BetheIndex& idx) { return weight_function_check(m, idx); }));

    criterion(11, "Coassociativity, (a,b)=(2,1), L=3, all three-part splits", 0, [](Tally& t, std::string&) {
        ChainSpec spec = fundamental_chain(3, parent_twist, 113);
        Twist last;
        for (int k = 0; k < 3; ++k) last[k] = parent_twist[k] / (first_twist[k] * middle_twist[k]);
        auto at = [&](std::size_t k) { return spec.sites.begin() + static_cast<std::ptrdiff_t>(k); };
        for (std::size_t i = 0; i <= 3; ++i)
            for (std::size_t j = i; j <= 3; ++j) {
                SegmentedModel m(spec.c, {{first_twist, {at(0), at(i)}}, {middle_twist, {at(i), at(j)}}, {last, {at(j), spec.sites.end()}}});
                Sample s = draw_sample(seed_of(11, i, j, 0, 0), 2, 1, 0, fixed_for(m.total()));
                t.record(coassociativity_verify(m, {s.u, s.v}), "cuts " + std::to_string(i) + "," + std::to_string(j));
            }
    });

    criterion(12, "Permutation symmetry in u and in v, a,b<=3", 0, [](Tally& t, std::string&) {
        ChainMonodromy rep(fundamental_chain(3, parent_twist, 123));
        for (std::size_t a = 0; a <= 3; ++a)
            for (std::size_t b = 0; b <= 3; ++b) {
                Sample s = draw_sample(seed_of(12, a, b, 0, 0), a, b, 0, fixed_for(rep));
                const StateVector ref = bethe_vector(rep, {s.u, s.v});
                std::vector<FieldScalar> u = s.u.elements(), v = s.v.elements();
                std::sort(u.begin(), u.end());
                std::sort(v.begin(), v.end());
                do {
                    do t.record(compare_vectors(bethe_vector(rep, {ParamSet(u), ParamSet(v)}), ref), instance(3, 0, a, b, 0));
                    while (std::next_permutation(v.begin(), v.end()));
                } while (std::next_permutation(u.begin(), u.end()));
            }
    });

    std::cout << (all_pass ? "all criteria passed" : "some criteria failed") << std::endl;
    return all_pass ? 0 : 1;
}
