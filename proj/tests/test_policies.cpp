#include "oracles.hpp"

#include <csb/error.hpp>
#include <csb/policies.hpp>
#include <csb/simulator.hpp>

#include <doctest.h>

using namespace csb;

namespace {

using Kind = PEDecision::Kind;

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

}  // namespace

TEST_CASE("policy ids round trip") {
    CHECK(all_policy_ids().size() == 8);
    for (auto id : all_policy_ids()) CHECK(parse_policy_id(to_string(id)) == id);
    CHECK(to_string(PolicyId::UCBCSKnownEll) == "ucb-cs-known-ell");
    CHECK_THROWS_AS(parse_policy_id("pe_cs"), ConfigError);
}

TEST_CASE("pe_decide walks through sample, compare and round steps") {
    RoundSchedule sched(10000);
    const auto& r0 = sched[0];
    CHECK(r0.tau == 19);
    PolicyState s(3);

    CHECK(pe_decide(s, sched, 0, 2, 0.0) == PEDecision{Kind::Sample, 0});
    s.n(0) = r0.tau;
    CHECK(pe_decide(s, sched, 0, 2, 0.0) == PEDecision{Kind::Sample, 2});
    s.n(2) = r0.tau;

    s.mu_hat << 0.5, 0.0, 0.5;
    CHECK(pe_decide(s, sched, 0, 2, 0.0) == PEDecision{Kind::NextRound, 0});
    CHECK(s.omega(0) == 1);
    CHECK(s.omega(2) == 0);
    CHECK(pe_decide(s, sched, 0, 2, 0.0) == PEDecision{Kind::Sample, 0});

    PolicyState w(3);
    w.n << r0.tau, 0, r0.tau;
    w.mu_hat << 1.0, 0.0, 0.0;
    CHECK(pe_decide(w, sched, 0, 2, 0.0) == PEDecision{Kind::Winner, 0});

    PolicyState a(3);
    a.n << r0.tau, 0, r0.tau;
    a.mu_hat << 0.0, 0.0, 1.0;
    CHECK(pe_decide(a, sched, 0, 2, 0.0) == PEDecision{Kind::Advance, 1});

    // A large subsidy turns the same evidence into a win for the candidate.
    a.mu_hat << 0.6, 0.0, 1.0;
    a.omega(0) = 3;
    a.n << 10000, 0, 10000;
    CHECK(pe_decide(a, sched, 0, 2, 0.5) == PEDecision{Kind::Winner, 0});

    CHECK_THROWS_AS(pe_decide(s, sched, 2, 2, 0.0), ContractViolation);
    CHECK_THROWS_AS(pe_decide(s, sched, 2, 1, 0.0), ContractViolation);
}

TEST_CASE("pe_decide alternates the pair at the last round") {
    RoundSchedule sched(10000);
    const int cap = sched.max_round();
    PolicyState s(2);
    s.omega(0) = cap;
    s.n << sched[cap].tau, sched[cap].tau;
    s.mu_hat << 0.5, 0.5;
    CHECK(pe_decide(s, sched, 0, 1, 0.0) == PEDecision{Kind::NextRound, 0});
    CHECK(s.omega(0) == cap);
    s.n(0) += 1;
    CHECK(pe_decide(s, sched, 0, 1, 0.0) == PEDecision{Kind::NextRound, 1});
    s.n(1) += 1;
    CHECK(pe_decide(s, sched, 0, 1, 0.0) == PEDecision{Kind::NextRound, 0});
}

TEST_CASE("asymmetric comparison with kappa 0 matches the symmetric one") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::int64_t T : {1000, 50000, 2000000}) {
        RoundSchedule sched(T);
        const int cap = sched.max_round();
        for (int rep = 0; rep < 2000; ++rep) {
            PolicyState s(3);
            s.omega(0) = static_cast<int>(u(rng) * (cap + 1));
            s.omega(2) = s.omega(0) + static_cast<int>(u(rng) * (cap + 1 - s.omega(0)));
            const auto tau = sched[s.omega(0)].tau;
            s.n << static_cast<std::int64_t>(u(rng) * 2 * tau), 0, static_cast<std::int64_t>(u(rng) * 2 * tau);
            s.mu_hat << u(rng), u(rng), u(rng);
            const double alpha = u(rng) < 0.5 ? 0.0 : u(rng);
            PolicyState t = s;
            const auto d1 = pe_decide(s, sched, 0, 2, alpha);
            const auto d2 = asymmetric_pe_decide(t, sched, 0, 2, alpha, 0);
            CHECK(d1 == d2);
            CHECK(s.omega(0) == t.omega(0));
        }
    }
}

TEST_CASE("better-sampled reference arm gets a strictly smaller bonus") {
    for (std::int64_t T : {1000, 100000, 10000000}) {
        RoundSchedule sched(T);
        for (int wi = 0; wi <= sched.max_round(); ++wi) {
            for (int wl = wi + 1; wl <= sched.max_round(); ++wl) CHECK(sched[wl].beta < sched[wi].beta);
        }
    }
}

TEST_CASE("asymmetric comparison raises the reference round with the candidate") {
    RoundSchedule sched(100000);
    PolicyState s(2);
    const int kappa = 2;
    CHECK(asymmetric_pe_decide(s, sched, 0, 1, 0.0, kappa) == PEDecision{Kind::Sample, 0});
    s.n << sched[0].tau, sched[0].tau;
    s.mu_hat << 0.5, 0.5;
    CHECK(asymmetric_pe_decide(s, sched, 0, 1, 0.0, kappa).kind == Kind::NextRound);
    CHECK(s.omega(0) == 1);
    CHECK(s.omega(1) == 1);
    // Reference round is min(omega_i + kappa, omega_ell).
    s.omega(1) = 5;
    s.n << sched[1].tau, sched[3].tau - 1;
    CHECK(asymmetric_pe_decide(s, sched, 0, 1, 0.0, kappa) == PEDecision{Kind::Sample, 1});
    CHECK_THROWS_AS(asymmetric_pe_decide(s, sched, 0, 1, 0.0, -1), ContractViolation);
}

TEST_CASE("best-arm identification rounds") {
    RoundSchedule sched(10000);
    std::mt19937_64 rng(5);
    PolicyState s(3);
    s.active = {0, 1, 2};
    auto step = bai_decide(s, sched, rng);
    CHECK(step.arm == 0);
    CHECK_FALSE(step.collapsed);
    s.n << 19, 19, 19;
    s.mu_hat << 1.0, 0.0, 0.5;
    step = bai_decide(s, sched, rng);
    CHECK(s.active == std::vector<Index>{0, 2});
    CHECK(s.omega == Rounds((Rounds(3) << 1, 0, 1).finished()));
    CHECK((step.arm == 0 || step.arm == 2));
    CHECK_FALSE(step.collapsed);

    PolicyState c(3);
    c.active = {0, 1, 2};
    c.n << 19, 19, 19;
    c.mu_hat << 1.0, 0.0, 0.0;
    step = bai_decide(c, sched, rng);
    CHECK(step.collapsed);
    CHECK(step.arm == 0);

    PolicyState one(2);
    one.active = {1};
    CHECK_THROWS_AS(bai_decide(one, sched, rng), ContractViolation);
}

TEST_CASE("PE-CS commits at once when the identified arm is the cheapest") {
    const auto inst = make_instance(vec({0.9, 0.5, 0.3}), vec({0.1, 0.2, 0.3}), RewardModel::gaussian(0.0));
    PairwiseElimination pe(3, {10000, 0.1, std::nullopt, std::nullopt}, make_stream(1, "pe-cs"));
    const auto profile = gap_profile(inst, SubsidizedBestReward{0.1});
    auto r = run_policy(pe, inst, profile, 10000, 1, {10000});
    CHECK(pe.state().committed_arm == Index{0});
    CHECK(pe.state().ell == 0);
    REQUIRE(r.commit_t);
    CHECK(r.terminal_arm == 0);
    CHECK(r.trace.pulls.sum() == 10000);
}

TEST_CASE("PE-CS hands the survivor to the pairwise stage") {
    const auto inst = toy_instance(0.6);
    const BanditInstance noiseless(inst.means(), inst.costs(), RewardModel::gaussian(0.0));
    PairwiseElimination pe(4, {200000, 0.2, std::nullopt, std::nullopt}, make_stream(2, "pe-cs"));
    const auto profile = gap_profile(noiseless, SubsidizedBestReward{0.2});
    run_policy(pe, noiseless, profile, 200000, 2, {200000});
    CHECK(pe.state().ell == 2);
    CHECK(pe.state().committed_arm == Index{1});
    CHECK(pe.id() == PolicyId::PECS);
}

TEST_CASE("ETC-CS budget matches exact integer arithmetic") {
    CHECK(ExploreThenCommitCs::exploration_budget(100000, 4) == 4275);
    CHECK(ExploreThenCommitCs::exploration_budget(500000, 4) == 12500);
    CHECK(ExploreThenCommitCs::exploration_budget(5000000, 4) == 58020);
    for (std::int64_t K = 2; K <= 12; ++K) {
        for (std::int64_t x = 1; x < 3000000; x = x * 3 / 2 + 1) {
            CHECK(ExploreThenCommitCs::exploration_budget(x * K, static_cast<Index>(K)) == oracle::etc_budget(x * K, K));
        }
        for (std::int64_t c = 1; c < 200; ++c) {
            // Exact cubes: x = c^3 makes 5 x^(2/3) = 5 c^2.
            const std::int64_t x = c * c * c;
            CHECK(ExploreThenCommitCs::exploration_budget(x * K, static_cast<Index>(K)) == 5 * c * c);
        }
    }
}

TEST_CASE("Thompson sampling bookkeeping") {
    ThompsonSamplingCs ts(3, 0.1, make_stream(3, "ts-cs"));
    CHECK(ts.select(1) == 0);
    ts.observe(0, 1.0);
    CHECK(ts.select(2) == 1);
    ts.observe(1, 0.0);
    CHECK(ts.state().successes(0) == 1);
    CHECK(ts.state().failures(1) == 1);
    CHECK_THROWS_AS(ts.observe(2, 0.5), ContractViolation);

    std::mt19937_64 rng(4);
    double sum = 0.0;
    for (int i = 0; i < 40000; ++i) {
        const double x = sample_beta(3.0, 7.0, rng);
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
        sum += x;
    }
    CHECK(sum / 40000 == doctest::Approx(0.3).epsilon(0.02));
}

TEST_CASE("UCB-CS records the reference arm it uses") {
    UcbCs known(3, 1000, 0.1, Index{1}, make_stream(1, "u"));
    UcbCs free(3, 1000, 0.1, std::nullopt, make_stream(1, "u"));
    CHECK(known.id() == PolicyId::UCBCSKnownEll);
    CHECK(free.id() == PolicyId::UCBCS);
    for (std::int64_t t = 1; t <= 10; ++t) {
        known.observe(known.select(t), 1.0);
        free.observe(free.select(t), 0.0);
    }
    CHECK(known.state().ell == 1);
    CHECK(free.state().ell >= 0);
    CHECK_THROWS_AS(UcbCs(3, 1000, 0.1, Index{3}, make_stream(1, "u")), ArmIndexError);
}

TEST_CASE("FT-UCB starts round-robin and prefers the cheapest plausible arm") {
    FixedThresholdUcb ft(4, 0.5, make_stream(1, "ft"));
    for (std::int64_t t = 1; t <= 4; ++t) {
        CHECK(ft.select(t) == t - 1);
        ft.observe(t - 1, 1.0);
    }
    CHECK(ft.select(5) == 0);
}

TEST_CASE("factory compatibility rules") {
    const auto inst = four_arm_reference_instance();
    const SubsidySetting fixed = FixedThreshold{0.7}, known = KnownReferenceArm{2, 0.0},
                         sub = SubsidizedBestReward{0.1};
    const PolicyOptions opts{1000, 2};
    auto ok = [&](PolicyId id, const SubsidySetting& s) {
        return policy_supports(id, s) && make_policy(id, inst, s, opts, make_stream(0, "x"))->id() == id;
    };
    CHECK(ok(PolicyId::PE, known));
    CHECK(ok(PolicyId::AsymPE, known));
    CHECK(ok(PolicyId::UCBCSKnownEll, known));
    CHECK(ok(PolicyId::PECS, sub));
    CHECK(ok(PolicyId::FTUCB, fixed));
    for (auto id : {PolicyId::ETCCS, PolicyId::TSCS, PolicyId::UCBCS}) {
        CHECK(ok(id, known));
        CHECK(ok(id, sub));
        CHECK_FALSE(policy_supports(id, fixed));
    }
    CHECK_THROWS_AS(make_policy(PolicyId::PE, inst, sub, opts, make_stream(0, "x")), ConfigError);
    CHECK_THROWS_AS(make_policy(PolicyId::FTUCB, inst, known, opts, make_stream(0, "x")), ConfigError);
    CHECK_THROWS_AS(make_policy(PolicyId::PECS, inst, fixed, opts, make_stream(0, "x")), ConfigError);
    CHECK_THROWS_AS(make_policy(PolicyId::AsymPE, inst, known, {1000, -1}, make_stream(0, "x")), ConfigError);
    const BanditInstance gauss(inst.means(), inst.costs(), RewardModel::gaussian(0.1));
    CHECK_THROWS_AS(make_policy(PolicyId::TSCS, gauss, sub, opts, make_stream(0, "x")), ConfigError);
}

TEST_CASE("every policy is deterministic given the seed") {
    const auto inst = toy_instance(0.7);
    for (auto id : all_policy_ids()) {
        SubsidySetting s = SubsidizedBestReward{0.2};
        if (policy_supports(id, KnownReferenceArm{2, 0.2})) s = KnownReferenceArm{2, 0.2};
        if (id == PolicyId::FTUCB) s = FixedThreshold{0.76};
        RunSpec spec{id, s, 5000, {}, {}};
        const auto a = run_single(spec, inst, 9);
        const auto b = run_single(spec, inst, 9);
        CHECK(a.trace.pulls == b.trace.pulls);
        REQUIRE(a.trace.checkpoints.size() == b.trace.checkpoints.size());
        for (std::size_t i = 0; i < a.trace.checkpoints.size(); ++i) {
            CHECK(a.trace.checkpoints[i].cost_regret == b.trace.checkpoints[i].cost_regret);
            CHECK(a.trace.checkpoints[i].quality_regret == b.trace.checkpoints[i].quality_regret);
        }
        CHECK(a.terminal_arm == b.terminal_arm);
    }
}
