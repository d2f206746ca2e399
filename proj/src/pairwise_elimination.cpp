#include <csb/policies.hpp>

#include <csb/error.hpp>

#include <algorithm>
#include <limits>

namespace csb {

namespace {

// Outcome of the two confidence-interval tests of a comparison.
PEDecision compare_pair(PolicyState& s, Index i, Index ell, double alpha, double beta_i,
                        double beta_ell) {
    const double keep = 1.0 - alpha;
    if (keep * (s.mu_hat(ell) + beta_ell) < s.mu_hat(i) - beta_i) return {PEDecision::Kind::Winner, i};
    if (s.mu_hat(i) + beta_i < keep * (s.mu_hat(ell) - beta_ell)) return {PEDecision::Kind::Advance, i + 1};
    return {PEDecision::Kind::NextRound, i};
}

// Past the last round the pair keeps sampling, fewer samples first.
Index alternate(const PolicyState& s, Index i, Index ell) { return s.n(i) <= s.n(ell) ? i : ell; }

void check_pair(const PolicyState& s, Index i, Index ell) {
    if (i < 0 || ell < 0 || i >= s.num_arms() || ell >= s.num_arms() || i >= ell)
        throw ContractViolation("pairwise comparison needs candidate < reference arm");
}

}  // namespace

PEDecision pe_decide(PolicyState& s, const RoundSchedule& schedule, Index i, Index ell, double alpha) {
    check_pair(s, i, ell);
    const auto& round = schedule[s.omega(i)];
    for (Index k : {i, ell}) {
        if (s.n(k) < round.tau) return {PEDecision::Kind::Sample, k};
    }
    auto d = compare_pair(s, i, ell, alpha, round.beta, round.beta);
    if (d.kind != PEDecision::Kind::NextRound) return d;
    if (s.omega(i) < schedule.max_round()) {
        s.omega(i) += 1;
        return d;
    }
    return {PEDecision::Kind::NextRound, alternate(s, i, ell)};
}

PEDecision asymmetric_pe_decide(PolicyState& s, const RoundSchedule& schedule, Index i, Index ell,
                                double alpha, int kappa) {
    check_pair(s, i, ell);
    if (kappa < 0) throw ContractViolation("kappa must be >= 0");
    const int round_i = s.omega(i);
    const int round_ell = std::min(round_i + kappa, s.omega(ell));
    const auto& ri = schedule[round_i];
    const auto& rl = schedule[round_ell];
    if (s.n(i) < ri.tau) return {PEDecision::Kind::Sample, i};
    if (s.n(ell) < rl.tau) return {PEDecision::Kind::Sample, ell};

    auto d = compare_pair(s, i, ell, alpha, ri.beta, rl.beta);
    if (d.kind != PEDecision::Kind::NextRound) return d;
    if (s.omega(i) < schedule.max_round()) {
        s.omega(i) += 1;
        s.omega(ell) = std::max(s.omega(i), s.omega(ell));
        return d;
    }
    return {PEDecision::Kind::NextRound, alternate(s, i, ell)};
}

BaiStep bai_decide(PolicyState& s, const RoundSchedule& schedule, std::mt19937_64& rng) {
    if (s.active.size() < 2) throw ContractViolation("best-arm identification needs two active arms");
    const int current = s.omega.maxCoeff();
    const auto& round = schedule[current];
    for (Index k : s.active) {
        if (s.n(k) < round.tau) return {k, false};
    }

    double best_lcb = -std::numeric_limits<double>::infinity();
    for (Index j : s.active) best_lcb = std::max(best_lcb, s.mu_hat(j) - round.beta);
    std::vector<Index> survivors;
    for (Index i : s.active) {
        if (s.mu_hat(i) + round.beta >= best_lcb) survivors.push_back(i);
    }
    s.active = std::move(survivors);

    const bool capped = current >= schedule.max_round();
    if (!capped) {
        for (Index i : s.active) s.omega(i) += 1;
    }
    if (s.active.size() == 1) return {s.active.front(), true};
    if (capped) {
        // Round-robin over the survivors under the final quota.
        Index pick = s.active.front();
        for (Index i : s.active) {
            if (s.n(i) < s.n(pick)) pick = i;
        }
        return {pick, false};
    }
    std::uniform_int_distribution<std::size_t> uniform(0, s.active.size() - 1);
    return {s.active[uniform(rng)], false};
}

PairwiseElimination::PairwiseElimination(Index num_arms, Config config, std::mt19937_64 rng)
    : Policy(num_arms, std::move(rng)), config_(config), schedule_(config.horizon) {
    if (config_.ell) {
        if (*config_.ell < 0 || *config_.ell >= num_arms) throw ArmIndexError("reference arm out of range");
        state_.ell = *config_.ell;
        state_.phase = Phase::Pairwise;
        state_.episode = 0;
    } else {
        state_.phase = Phase::BestArmId;
        state_.active.resize(static_cast<std::size_t>(num_arms));
        for (Index k = 0; k < num_arms; ++k) state_.active[static_cast<std::size_t>(k)] = k;
    }
}

PolicyId PairwiseElimination::id() const {
    if (!config_.ell) return PolicyId::PECS;
    return config_.kappa ? PolicyId::AsymPE : PolicyId::PE;
}

Index PairwiseElimination::commit(Index arm) {
    state_.phase = Phase::Commit;
    state_.committed_arm = arm;
    state_.episode.reset();
    return arm;
}

Index PairwiseElimination::pairwise_step() {
    const Index ell = state_.ell;
    const Index i = *state_.episode;
    // Every candidate cheaper than ell has been ruled out (or none exist).
    if (i >= ell) return commit(ell);

    const auto d = config_.kappa
                       ? asymmetric_pe_decide(state_, schedule_, i, ell, config_.alpha, *config_.kappa)
                       : pe_decide(state_, schedule_, i, ell, config_.alpha);
    last_decision_ = d;
    switch (d.kind) {
        case PEDecision::Kind::Winner:
            return commit(d.arm);
        case PEDecision::Kind::Advance:
            state_.episode = d.arm;
            if (d.arm == ell) return commit(ell);
            return d.arm;
        case PEDecision::Kind::Sample:
        case PEDecision::Kind::NextRound:
            return d.arm;
    }
    return d.arm;
}

Index PairwiseElimination::select(std::int64_t /*t*/) {
    last_decision_.reset();
    if (state_.phase == Phase::Commit) return *state_.committed_arm;
    if (state_.phase == Phase::BestArmId) {
        if (state_.active.size() == 1) {
            state_.ell = state_.active.front();
        } else {
            const auto step = bai_decide(state_, schedule_, rng_);
            if (!step.collapsed) return step.arm;
            // The survivor becomes the reference; this step's recommendation is dropped.
            state_.ell = step.arm;
        }
        state_.phase = Phase::Pairwise;
        state_.episode = 0;
    }
    return pairwise_step();
}

}  // namespace csb
