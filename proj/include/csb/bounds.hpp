#pragma once

#include <csb/instance.hpp>

#include <string>
#include <vector>

namespace csb::bounds {

struct Term {
    std::string label;
    double value;
};

struct BoundReport {
    std::string name;
    std::vector<Term> cost_terms;
    std::vector<Term> quality_terms;

    double cost_total() const;
    double quality_total() const;
};

// Lower bounds: per-arm coefficients c_i with liminf E[n_i(T)] / ln T >= c_i,
// for Gaussian rewards with unit variance. Arms without a bound get 0.
// Each throws DegenerateGapError when a gap it divides by is zero and
// ContractViolation when the profile belongs to a different setting.

Vector lb_known_ref(const GapProfile& profile);
Vector lb_subsidized(const GapProfile& profile);
Vector lb_fixed_threshold(const GapProfile& profile);

// Upper bounds on expected cumulative cost and quality regret. A term
// whose multiplier is zero (empty max, zero clipped gap) is 0 without
// evaluating its coefficient; otherwise a zero gap or a log argument <= 1
// throws DegenerateGapError.

BoundReport ub_pe(const GapProfile& profile, double horizon);
BoundReport ub_pe_cs(const GapProfile& profile, double horizon);
BoundReport ub_ft_ucb(const GapProfile& profile, double horizon);

/// Expected-pull bound for an arm cheaper than a* under PE:
/// 1 + 32 ln(T d^2) / d^2 + 43 / d^2 with d its quality gap.
double pe_low_cost_pull_bound(const GapProfile& profile, double horizon, Index arm);

/// Ratio of the PE log coefficient to the lower-bound coefficient of a
/// low-cost arm: (32 / d^2) / (2 / d^2).
double pe_order_ratio(const GapProfile& profile, Index arm);

/// JSON document for the `bounds` command: profile echo, lower-bound
/// coefficients and the upper-bound terms that match the setting.
std::string report_json(const GapProfile& profile, double horizon);

}  // namespace csb::bounds
