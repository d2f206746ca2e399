#include <csb/bounds.hpp>
#include <csb/error.hpp>

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <numbers>

using namespace csb;
using namespace csb::bounds;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

GapProfile reference_known() { return gap_profile(four_arm_reference_instance(), KnownReferenceArm{2, 0.0}); }

void check_report(const BoundReport& r) {
    double c = 0, q = 0;
    for (const auto& t : r.cost_terms) {
        CHECK(t.value >= 0.0);
        c += t.value;
    }
    for (const auto& t : r.quality_terms) {
        CHECK(t.value >= 0.0);
        q += t.value;
    }
    CHECK(r.cost_total() == doctest::Approx(c));
    CHECK(r.quality_total() == doctest::Approx(q));
}

}  // namespace

TEST_CASE("known-reference lower bound") {
    const auto p = gap_profile(toy_instance(0.6), KnownReferenceArm{2, 0.2});
    const auto c = lb_known_ref(p);
    CHECK(c(0) == doctest::Approx(78.125).epsilon(1e-12));
    CHECK(c(2) == doctest::Approx(512.0).epsilon(1e-12));
    CHECK(c(1) == 0.0);
    CHECK(c(3) == 0.0);

    const auto one = gap_profile(toy_instance(0.6), KnownReferenceArm{2, 1.0});
    CHECK(lb_known_ref(one)(2) == 0.0);

    CHECK_THROWS_AS(lb_known_ref(reference_known()), DegenerateGapError);  // a* is the reference itself
    CHECK_THROWS_AS(lb_known_ref(gap_profile(toy_instance(0.6), SubsidizedBestReward{0.2})), ContractViolation);
}

TEST_CASE("subsidized lower bound") {
    const auto p = gap_profile(toy_instance(0.6), SubsidizedBestReward{0.2});
    const auto c = lb_subsidized(p);
    CHECK(c(0) == doctest::Approx(78.125).epsilon(1e-12));
    CHECK(c(2) == doctest::Approx(512.0).epsilon(1e-12));
    CHECK(c(1) == 0.0);
    // Arm 4: 2 / (0.81/0.8 - 0.8)^2
    CHECK(c(3) == doctest::Approx(2.0 / std::pow(0.81 / 0.8 - 0.8, 2)));

    // Indicator fires when a cheap arm is closer to the threshold than (1-alpha) Delta_min.
    const auto close = gap_profile(toy_instance(0.7), SubsidizedBestReward{0.2});
    CHECK(close.delta_q(0) <= 0.8 * close.delta_min);
    CHECK(lb_subsidized(close)(2) == doctest::Approx(2 * 0.64 * std::max(1 / (0.05 * 0.05), 1 / (0.06 * 0.06))));

    // No arm cheaper than a*: plain 2(1-alpha)^2 / Delta_Q,a*^2.
    const auto first = make_instance(vec({0.85, 0.6, 0.95}), vec({0.1, 0.2, 0.3}), RewardModel::bernoulli());
    const auto pf = gap_profile(first, SubsidizedBestReward{0.2});
    CHECK(pf.a_star == 0);
    CHECK(lb_subsidized(pf)(2) == doctest::Approx(2 * 0.64 / std::pow(0.85 - 0.76, 2)));

    const auto tie = make_instance(vec({0.9, 0.9}), vec({0.1, 0.2}), RewardModel::bernoulli());
    CHECK_THROWS_AS(lb_subsidized(gap_profile(tie, SubsidizedBestReward{0.1})), DegenerateGapError);
}

TEST_CASE("fixed-threshold lower bound") {
    const auto p = gap_profile(four_arm_reference_instance(), FixedThreshold{0.8});
    const auto c = lb_fixed_threshold(p);
    CHECK(c(0) == doctest::Approx(555.556).epsilon(1e-6));
    CHECK(c(1) == doctest::Approx(2.0 / 0.09));
    CHECK(c(2) == 0.0);
    CHECK(c(3) == 0.0);

    const auto low = gap_profile(four_arm_reference_instance(), FixedThreshold{0.1});
    CHECK(lb_fixed_threshold(low).isZero());

    // Doubling every gap quarters every coefficient.
    const auto a = make_instance(vec({0.7, 0.6, 0.9}), vec({0.1, 0.2, 0.3}), RewardModel::bernoulli());
    const auto b = make_instance(vec({0.6, 0.4, 0.9}), vec({0.1, 0.2, 0.3}), RewardModel::bernoulli());
    const auto ca = lb_fixed_threshold(gap_profile(a, FixedThreshold{0.8}));
    const auto cb = lb_fixed_threshold(gap_profile(b, FixedThreshold{0.8}));
    CHECK(cb(0) == doctest::Approx(ca(0) / 4));
    CHECK(cb(1) == doctest::Approx(ca(1) / 4));
}

TEST_CASE("PE upper bound") {
    const auto r = ub_pe(reference_known(), 200000);
    REQUIRE(r.cost_terms.size() == 3);
    REQUIRE(r.quality_terms.size() == 3);
    check_report(r);
    // l = a*: the reference-arm cost terms vanish.
    CHECK(r.cost_terms[0].value == 0.0);
    CHECK(r.cost_terms[1].value == 0.0);
    // Quality term 1 has one part per arm cheaper than a*; arm 1's part is frozen.
    const double arm1 = 0.06 + 32 * std::log(200000 * 0.0036) / 0.06;
    CHECK(arm1 == doctest::Approx(3508.994).epsilon(1e-6));
    const double arm2 = 0.3 + 32 * std::log(200000 * 0.09) / 0.3;
    CHECK(r.quality_terms[0].value == doctest::Approx(arm1 + arm2));
    CHECK(r.quality_terms[1].value == doctest::Approx(43 / 0.06 + 43 / 0.3));

    double prev = 0;
    for (double T = 1000; T < 1e8; T *= 2) {
        const double total = ub_pe(reference_known(), T).quality_total();
        CHECK(total > prev);
        prev = total;
    }

    CHECK(pe_low_cost_pull_bound(reference_known(), 200000, 0) == doctest::Approx(70427.677).epsilon(1e-8));
    CHECK_THROWS_AS(pe_low_cost_pull_bound(reference_known(), 200000, 2), ContractViolation);
    CHECK_THROWS_AS(ub_pe(reference_known(), 100), DegenerateGapError);  // T * 0.06^2 < 1
}

TEST_CASE("PE upper bound with an expensive reference arm") {
    // l = 4, alpha = 0.1: a* = arm 1 and the reference arm carries cost.
    const auto inst = make_instance(vec({0.8, 0.5, 0.7, 0.85}), vec({0.1, 0.2, 0.3, 0.5}), RewardModel::bernoulli());
    const auto p = gap_profile(inst, KnownReferenceArm{3, 0.1});
    CHECK(p.a_star == 0);
    const auto r = ub_pe(p, 1e6);
    check_report(r);
    const double d = std::abs(p.delta_q(0));
    CHECK(r.cost_terms[0].value == doctest::Approx((1 + 32 * std::log(1e6 * d * d) / (d * d)) * 0.4));
    CHECK(r.cost_terms[1].value == doctest::Approx(43 / (d * d) * 0.4));
    CHECK(r.cost_terms[2].value == doctest::Approx(43 / (d * d) * 0.4));
    CHECK(r.quality_total() == doctest::Approx(43 / (d * d) * p.delta_q_plus(1)));
}

TEST_CASE("PE-CS upper bound") {
    const auto p = gap_profile(toy_instance(0.6), SubsidizedBestReward{0.2});
    const auto r = ub_pe_cs(p, 5e6);
    REQUIRE(r.cost_terms.size() == 5);
    REQUIRE(r.quality_terms.size() == 5);
    check_report(r);
    CHECK(r.cost_total() >= r.cost_terms[0].value);
    // i* costs the same as a*, so the first two cost terms vanish.
    CHECK(r.cost_terms[0].value == 0.0);
    CHECK(r.cost_terms[1].value == 0.0);
    CHECK(r.quality_terms[0].value == doctest::Approx(0.16 + 32 * std::log(5e6 * 0.0256) / 0.16));

    const auto all = make_instance(vec({0.9, 0.8, 0.95}), vec({0.1, 0.5, 0.9}), RewardModel::bernoulli());
    const auto pa = gap_profile(all, SubsidizedBestReward{0.2});
    CHECK(pa.a_star == 0);
    const auto ra = ub_pe_cs(pa, 1e6);
    CHECK(ra.quality_terms[0].value == 0.0);
    CHECK(ra.quality_terms[1].value == 0.0);
    check_report(ra);

    const auto tie = make_instance(vec({0.9, 0.9}), vec({0.1, 0.2}), RewardModel::bernoulli());
    CHECK_THROWS_AS(ub_pe_cs(gap_profile(tie, SubsidizedBestReward{0.1}), 1e6), DegenerateGapError);
    CHECK_THROWS_AS(ub_pe_cs(reference_known(), 1e6), ContractViolation);
}

TEST_CASE("FT-UCB upper bound") {
    const auto p = gap_profile(four_arm_reference_instance(), FixedThreshold{0.8});
    const auto r = ub_ft_ucb(p, 400000);
    check_report(r);
    const double pi2_6 = std::numbers::pi * std::numbers::pi / 6;
    CHECK(r.cost_total() == doctest::Approx(0.04 + pi2_6 * 0.04));
    CHECK(r.cost_total() == doctest::Approx(0.1057974).epsilon(1e-6));
    const double q = 8 * std::log(400000.0) * (1 / 0.06 + 1 / 0.3) + (1 + pi2_6) * 0.36 + pi2_6 * 0.3;
    CHECK(r.quality_total() == doctest::Approx(q));
}

TEST_CASE("order ratio is exactly 16") {
    const auto p = reference_known();
    CHECK(pe_order_ratio(p, 0) == 16.0);
    CHECK(pe_order_ratio(p, 1) == 16.0);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 300; ++rep) {
        Vector m(5), c(5);
        for (Index i = 0; i < 5; ++i) {
            m(i) = u(rng);
            c(i) = u(rng);
        }
        const auto inst = make_instance(m, c, RewardModel::bernoulli());
        const auto q = gap_profile(inst, KnownReferenceArm{4, u(rng)});
        for (Index i = 0; i < q.a_star; ++i) CHECK(pe_order_ratio(q, i) == 16.0);
    }
}

TEST_CASE("bounds report JSON") {
    const auto doc = nlohmann::json::parse(
        report_json(gap_profile(toy_instance(0.6), SubsidizedBestReward{0.2}), 5e6));
    CHECK(doc["schema"] == "cs-bandits schema v1 bounds");
    CHECK(doc["profile"]["a_star"] == 2);
    CHECK(doc["profile"]["i_star"] == 3);
    CHECK(doc["lower_bound"]["per_log_t"][0].get<double>() == doctest::Approx(78.125));
    CHECK(doc["upper_bound"]["policy"] == "pe-cs");
    CHECK(doc["upper_bound"]["cost_terms"].size() == 5);

    const auto fig = nlohmann::json::parse(report_json(reference_known(), 200000));
    CHECK(fig["lower_bound"].contains("error"));
    CHECK(fig["upper_bound"]["quality_terms"].size() == 3);
}
