#include <csb/bounds.hpp>

#include <csb/csv.hpp>
#include <csb/error.hpp>

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <numeric>

namespace csb::bounds {

namespace {

constexpr double kPiSquaredOverSix = std::numbers::pi * std::numbers::pi / 6.0;

double inv_sq(double gap, const std::string& what) {
    if (gap == 0.0) throw DegenerateGapError(what + " is zero");
    return 1.0 / (gap * gap);
}

double inv(double gap, const std::string& what) {
    if (gap == 0.0) throw DegenerateGapError(what + " is zero");
    return 1.0 / gap;
}

// ln(T d^2); positive by contract.
double log_arg(double horizon, double gap, const std::string& what) {
    const double arg = horizon * gap * gap;
    if (!(arg > 1.0))
        throw DegenerateGapError(what + " is too small for horizon " + std::to_string(horizon) +
                                 " (T * gap^2 <= 1)");
    return std::log(arg);
}

std::string arm_name(Index i) { return "arm " + std::to_string(i + 1); }
std::string q_gap(Index i) { return "quality gap of " + arm_name(i); }
std::string conv_gap(Index i) { return "conventional gap of " + arm_name(i); }

double sum_of(const std::vector<Term>& terms) {
    return std::accumulate(terms.begin(), terms.end(), 0.0,
                           [](double acc, const Term& t) { return acc + t.value; });
}

const KnownReferenceArm& known_ref(const GapProfile& p) {
    const auto* s = std::get_if<KnownReferenceArm>(&p.setting);
    if (!s) throw ContractViolation("bound needs a known-reference-arm profile");
    return *s;
}

const SubsidizedBestReward& subsidized(const GapProfile& p) {
    const auto* s = std::get_if<SubsidizedBestReward>(&p.setting);
    if (!s) throw ContractViolation("bound needs a subsidized-best-reward profile");
    return *s;
}

void require_fixed(const GapProfile& p) {
    if (!std::holds_alternative<FixedThreshold>(p.setting))
        throw ContractViolation("bound needs a fixed-threshold profile");
}

// Arms cheaper than a* share the same lower bound in every setting.
Vector low_cost_coefficients(const GapProfile& p) {
    Vector c = Vector::Zero(p.num_arms());
    for (Index i = 0; i < p.a_star; ++i) c(i) = 2.0 * inv_sq(p.delta_q(i), q_gap(i));
    return c;
}

// max over a* < i <= last of a per-arm quantity; 0 when the range is empty.
double max_over(const Vector& v, Index first, Index last) {
    double m = 0.0;
    for (Index i = first; i <= last && i < v.size(); ++i) m = std::max(m, v(i));
    return m;
}

}  // namespace

double BoundReport::cost_total() const { return sum_of(cost_terms); }
double BoundReport::quality_total() const { return sum_of(quality_terms); }

Vector lb_known_ref(const GapProfile& p) {
    const auto& s = known_ref(p);
    Vector c = low_cost_coefficients(p);
    const double keep = 1.0 - s.alpha;
    double ref = 0.0;
    if (keep != 0.0) {
        for (Index i = 0; i <= p.a_star; ++i)
            ref = std::max(ref, 2.0 * keep * keep * inv_sq(p.delta_q(i), q_gap(i)));
    }
    c(s.ell) = ref;
    return c;
}

Vector lb_subsidized(const GapProfile& p) {
    const auto& s = subsidized(p);
    if (!p.unique_best) throw DegenerateGapError("best-reward arm is not unique");
    Vector c = low_cost_coefficients(p);
    const double keep = 1.0 - s.alpha;
    for (Index i = p.a_star + 1; i < p.num_arms(); ++i) {
        if (i == p.i_star) continue;
        if (keep == 0.0) throw DegenerateGapError("alpha = 1 leaves the high-cost bound undefined");
        c(i) = 2.0 * inv_sq(p.means(p.a_star) / keep - p.means(i), "shifted gap of " + arm_name(i));
    }
    double best = 0.0;
    if (keep != 0.0) {
        best = inv_sq(p.delta_q(p.a_star), q_gap(p.a_star));
        if (p.a_star > 0) {
            const double min_low = p.delta_q.head(p.a_star).minCoeff();
            if (min_low <= keep * p.delta_min) {
                for (Index i = 0; i < p.a_star; ++i) best = std::max(best, inv_sq(p.delta_q(i), q_gap(i)));
            }
        }
        best *= 2.0 * keep * keep;
    }
    c(p.i_star) = best;
    return c;
}

Vector lb_fixed_threshold(const GapProfile& p) {
    require_fixed(p);
    return low_cost_coefficients(p);
}

BoundReport ub_pe(const GapProfile& p, double horizon) {
    const auto& s = known_ref(p);
    const Index a = p.a_star;
    const Index ell = s.ell;
    const double dq_a = std::abs(p.delta_q(a));
    BoundReport r{"pe", {}, {}};

    const double dc_ell = p.delta_c(ell);
    double c1 = 0.0, c2 = 0.0;
    if (dc_ell > 0.0) {
        double worst = 0.0, sum = 0.0;
        for (Index i = 0; i <= a; ++i) {
            const double d = std::abs(p.delta_q(i));
            worst = std::max(worst, 32.0 * log_arg(horizon, d, q_gap(i)) * inv_sq(d, q_gap(i)));
            sum += 43.0 * inv_sq(d, q_gap(i));
        }
        c1 = (1.0 + worst) * dc_ell;
        c2 = sum * dc_ell;
    }
    const double high_cost = max_over(p.delta_c, a + 1, ell);
    const double c3 = high_cost > 0.0 ? 43.0 * inv_sq(dq_a, q_gap(a)) * high_cost : 0.0;
    r.cost_terms = {{"reference arm, nominal end in episode a*", c1},
                    {"reference arm, wrong end in an episode <= a*", c2},
                    {"episodes after a* following a wrong end in episode a*", c3}};

    double q1 = 0.0, q2 = 0.0;
    for (Index i = 0; i < a; ++i) {
        const double d = p.delta_q(i);
        q1 += d + 32.0 * log_arg(horizon, d, q_gap(i)) * inv(d, q_gap(i));
        q2 += 43.0 * inv(d, q_gap(i));
    }
    const Vector q_plus = p.delta_q.cwiseMax(0.0);
    const double high_quality = max_over(q_plus, a + 1, ell - 1);
    const double q3 = high_quality > 0.0 ? 43.0 * inv_sq(dq_a, q_gap(a)) * high_quality : 0.0;
    r.quality_terms = {{"arms cheaper than a*, nominal end in episode a*", q1},
                       {"arms cheaper than a*, wrong end in an episode <= a*", q2},
                       {"episodes after a* following a wrong end in episode a*", q3}};
    return r;
}

BoundReport ub_pe_cs(const GapProfile& p, double horizon) {
    (void)subsidized(p);
    if (!p.unique_best) throw DegenerateGapError("best-reward arm is not unique");
    const Index a = p.a_star;
    const Index best = p.i_star;
    const Index k = p.num_arms();
    const double dq_a = std::abs(p.delta_q(a));
    const double d_a = p.delta_conv(a);
    BoundReport r{"pe-cs", {}, {}};

    // Samples of the reference arm after a proper identification stage.
    auto a_star_tail = [&] { return 32.0 * inv_sq(d_a, conv_gap(a)) + 43.0 * inv_sq(dq_a, q_gap(a)); };
    auto improper_stage = [&] {
        double s = 11.0 * inv_sq(p.delta_min, "smallest conventional gap");
        for (Index j = 0; j < k; ++j) {
            if (j != best) s += 32.0 * inv_sq(p.delta_conv(j), conv_gap(j));
        }
        return s;
    };
    auto high_cost_proper = [&](const Vector& weight) {
        double s = 0.0;
        for (Index i = a + 1; i < k; ++i) {
            if (i == best || weight(i) == 0.0) continue;
            const double d = p.delta_conv(i);
            s += weight(i) * (1.0 + 32.0 * log_arg(horizon, d, conv_gap(i)) * inv_sq(d, conv_gap(i)));
        }
        return s;
    };

    const double dc_best = p.delta_c(best);
    double c1 = 0.0, c2 = 0.0;
    if (dc_best > 0.0) {
        double worst = 32.0 * log_arg(horizon, p.delta_min, "smallest conventional gap") *
                       inv_sq(p.delta_min, "smallest conventional gap");
        for (Index j = 0; j <= a; ++j) {
            const double d = std::abs(p.delta_q(j));
            worst = std::max(worst, 32.0 * log_arg(horizon, d, q_gap(j)) * inv_sq(d, q_gap(j)));
        }
        c1 = dc_best * (1.0 + worst);
        double low = 0.0;
        for (Index i = 0; i < a; ++i) low += 43.0 * inv_sq(p.delta_q(i), q_gap(i));
        c2 = dc_best * (low + a_star_tail());
    }
    const double c3 = high_cost_proper(p.delta_c);
    const double c_high = max_over(p.delta_c, a + 1, k - 1);
    const double c4 = c_high > 0.0 ? c_high * a_star_tail() : 0.0;
    const double c_any = p.delta_c.maxCoeff();
    const double c5 = c_any > 0.0 ? c_any * improper_stage() : 0.0;
    r.cost_terms = {{"best-reward arm, nominal end in episode a*", c1},
                    {"best-reward arm, wrong end in an episode <= a*", c2},
                    {"high-cost arms, proper identification stage", c3},
                    {"episodes after a* following a wrong end in episode a*", c4},
                    {"improper end of the identification stage", c5}};

    double q1 = 0.0, q2 = 0.0;
    for (Index i = 0; i < a; ++i) {
        const double d = p.delta_q(i);
        q1 += d + 32.0 * log_arg(horizon, d, q_gap(i)) * inv(d, q_gap(i));
        q2 += 43.0 * inv(d, q_gap(i));
    }
    const Vector q_plus = p.delta_q.cwiseMax(0.0);
    const double q_high = max_over(q_plus, a + 1, k - 1);
    const double q3 = q_high > 0.0 ? q_high * a_star_tail() : 0.0;
    const double q4 = high_cost_proper(q_plus);
    const double q_any = q_plus.maxCoeff();
    const double q5 = q_any > 0.0 ? q_any * improper_stage() : 0.0;
    r.quality_terms = {{"arms cheaper than a*, nominal end in episode a*", q1},
                       {"arms cheaper than a*, wrong end in an episode <= a*", q2},
                       {"episodes after a* following a wrong end in episode a*", q3},
                       {"high-cost arms, proper identification stage", q4},
                       {"improper end of the identification stage", q5}};
    return r;
}

BoundReport ub_ft_ucb(const GapProfile& p, double horizon) {
    require_fixed(p);
    const Index a = p.a_star;
    const Index k = p.num_arms();
    BoundReport r{"ft-ucb", {}, {}};

    double high_sum = 0.0;
    for (Index i = a + 1; i < k; ++i) high_sum += p.delta_c(i);
    const double high_max = max_over(p.delta_c, a + 1, k - 1);
    r.cost_terms = {{"high-cost arms, one initial pull each", high_sum},
                    {"high-cost arms, later pulls", kPiSquaredOverSix * high_max}};

    double log_sum = 0.0, low_sum = 0.0;
    for (Index i = 0; i < a; ++i) {
        const double d = p.delta_q_plus(i);
        log_sum += 8.0 * std::log(horizon) * inv(d, q_gap(i));
        low_sum += d;
    }
    const Vector q_plus = p.delta_q.cwiseMax(0.0);
    r.quality_terms = {{"arms cheaper than a*, logarithmic pulls", log_sum},
                       {"arms cheaper than a*, constant pulls", (1.0 + kPiSquaredOverSix) * low_sum},
                       {"uniform fallback pulls", kPiSquaredOverSix * q_plus.maxCoeff()}};
    return r;
}

double pe_low_cost_pull_bound(const GapProfile& p, double horizon, Index arm) {
    (void)known_ref(p);
    if (arm < 0 || arm >= p.a_star) throw ContractViolation("arm is not cheaper than a*");
    const double d = p.delta_q(arm);
    const double w = inv_sq(d, q_gap(arm));
    return 1.0 + 32.0 * log_arg(horizon, d, q_gap(arm)) * w + 43.0 * w;
}

double pe_order_ratio(const GapProfile& p, Index arm) {
    (void)known_ref(p);
    if (arm < 0 || arm >= p.a_star) throw ContractViolation("arm is not cheaper than a*");
    const double w = inv_sq(p.delta_q(arm), q_gap(arm));
    return (32.0 * w) / (2.0 * w);
}

std::string report_json(const GapProfile& p, double horizon) {
    using nlohmann::json;
    auto vec = [](const Vector& v) {
        json a = json::array();
        for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
        return a;
    };
    auto terms = [](const std::vector<Term>& ts) {
        json a = json::array();
        for (const auto& t : ts) a.push_back({{"label", t.label}, {"value", t.value}});
        return a;
    };

    json doc;
    doc["schema"] = std::string(csv::kSchemaLine.substr(2)) + " bounds";
    doc["horizon"] = horizon;
    json setting = {{"kind", setting_name(p.setting)}};
    if (const auto* s = std::get_if<FixedThreshold>(&p.setting)) setting["mu0"] = s->mu0;
    if (const auto* s = std::get_if<KnownReferenceArm>(&p.setting)) {
        setting["ell"] = s->ell + 1;
        setting["alpha"] = s->alpha;
    }
    if (const auto* s = std::get_if<SubsidizedBestReward>(&p.setting)) setting["alpha"] = s->alpha;
    doc["setting"] = setting;
    doc["profile"] = {{"mu_cs", p.mu_cs},
                      {"a_star", p.a_star + 1},
                      {"i_star", p.i_star + 1},
                      {"delta_c", vec(p.delta_c)},
                      {"delta_q", vec(p.delta_q)},
                      {"delta_conv", vec(p.delta_conv)},
                      {"delta_min", std::isfinite(p.delta_min) ? json(p.delta_min) : json(nullptr)}};

    json lower;
    try {
        Vector c;
        if (std::holds_alternative<KnownReferenceArm>(p.setting)) c = lb_known_ref(p);
        else if (std::holds_alternative<SubsidizedBestReward>(p.setting)) c = lb_subsidized(p);
        else c = lb_fixed_threshold(p);
        lower = {{"per_log_t", vec(c)}};
    } catch (const DegenerateGapError& e) {
        lower = {{"error", e.what()}};
    }
    doc["lower_bound"] = lower;

    json upper;
    try {
        BoundReport r;
        if (std::holds_alternative<KnownReferenceArm>(p.setting)) r = ub_pe(p, horizon);
        else if (std::holds_alternative<SubsidizedBestReward>(p.setting)) r = ub_pe_cs(p, horizon);
        else r = ub_ft_ucb(p, horizon);
        upper = {{"policy", r.name},
                 {"cost_terms", terms(r.cost_terms)},
                 {"cost_total", r.cost_total()},
                 {"quality_terms", terms(r.quality_terms)},
                 {"quality_total", r.quality_total()}};
    } catch (const DegenerateGapError& e) {
        upper = {{"error", e.what()}};
    }
    doc["upper_bound"] = upper;
    return doc.dump(2);
}

}  // namespace csb::bounds
