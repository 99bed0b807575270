#include "offload/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "offload/detail/kernel.hpp"
#include "offload/dp_monotone.hpp"
#include "offload/errors.hpp"
#include "offload/oracle.hpp"
#include "offload/rng.hpp"

namespace offload {

namespace {

struct NamedProperty {
    std::string_view name;
    Property property;
};

constexpr NamedProperty kNames[] = {
    {"value-monotone-k", Property::ValueMonotoneK},
    {"value-monotone-t", Property::ValueMonotoneT},
    {"wifi-dominance", Property::WifiDominance},
    {"threshold-k", Property::ThresholdK},
    {"threshold-monotone", Property::ThresholdMonotone},
    {"cross-difference", Property::CrossDifference},
    {"increment-monotone", Property::IncrementMonotone},
    {"oracle", Property::Oracle},
    {"lemma1a", Property::ValueMonotoneK},
    {"lemma1b", Property::ValueMonotoneT},
    {"lemma2", Property::WifiDominance},
    {"theorem2", Property::ThresholdK},
    {"theorem3", Property::ThresholdMonotone},
};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

std::string where(const LatticePoint& p) {
    return "t=" + std::to_string(p.t) + " k=" + std::to_string(p.k) + " l=" + std::to_string(p.l.value);
}

// Free action at a location and whether the threshold results cover it.
struct LocationShape {
    Action free;
    bool covered;  // false when Wi-Fi moves strictly more grid steps than cellular
};

class Checker {
public:
    Checker(const NetworkModel& model, const ProblemSpec& spec, const Solution& sol, const VerifyOptions& opt)
        : model_(model), spec_(spec), sol_(sol), opt_(opt), kernel_(model, spec, opt.cost),
          T_(spec.horizon()), N_(spec.steps()), L_(model.num_locations()) {
        double scale = 1.0;
        for (int t = 1; t <= T_ + 1; ++t)
            for (int k = 0; k <= N_; ++k)
                for (int l = 0; l < L_; ++l) scale = std::max(scale, std::abs(v(t, k, l)));
        tol_ = opt.tolerance * scale;
        structure_ = structure_violation(model, spec, opt.cost);
    }

    PropertyReport run(Property p) {
        switch (p) {
            case Property::ValueMonotoneK: return value_monotone_k();
            case Property::ValueMonotoneT: return gated(p, [&] { return value_monotone_t(); });
            case Property::WifiDominance: return gated(p, [&] { return wifi_dominance(); });
            case Property::ThresholdK: return gated(p, [&] { return threshold_k(); });
            case Property::ThresholdMonotone: return gated(p, [&] { return threshold_monotone(); });
            case Property::CrossDifference: return gated(p, [&] { return cross_difference(); });
            case Property::IncrementMonotone: return gated(p, [&] { return increment_monotone(); });
            case Property::Oracle: return oracle();
        }
        throw std::logic_error("unknown property");
    }

private:
    double v(int t, int k, int l) const { return sol_.values.at(t, k, LocationId::from_zero_based(l)); }
    Action act(int t, int k, int l) const { return sol_.policy.at(t, k, LocationId::from_zero_based(l)); }

    LocationShape shape(int l) const {
        if (!kernel_.admissible(l).contains(Action::WiFi)) return {Action::Idle, true};
        return {Action::WiFi, wifi_not_faster(l)};
    }

    bool wifi_not_faster(int l) const {
        const LocationId id = LocationId::from_zero_based(l);
        return transfer_steps(spec_, model_.rate(id, Action::WiFi)) <=
               transfer_steps(spec_, model_.rate(id, Action::Cellular));
    }

    PropertyReport pass(Property p) const { return {p, CheckStatus::Pass, {}, std::nullopt}; }

    PropertyReport fail(Property p, LatticePoint at, const std::string& what) const {
        return {p, CheckStatus::Fail, where(at) + ": " + what, at};
    }

    template <class F>
    PropertyReport gated(Property p, F&& check) {
        if (structure_) return {p, CheckStatus::Skipped, "requires the structured regime: " + *structure_, std::nullopt};
        return check();
    }

    PropertyReport value_monotone_k() const {
        const Property p = Property::ValueMonotoneK;
        for (int t = 1; t <= T_ + 1; ++t)
            for (int l = 0; l < L_; ++l)
                for (int k = 0; k < N_; ++k)
                    if (v(t, k + 1, l) < v(t, k, l) - tol_)
                        return fail(p, {t, k, LocationId::from_zero_based(l)},
                                    "v(k+1)=" + fmt(v(t, k + 1, l)) + " < v(k)=" + fmt(v(t, k, l)));
        return pass(p);
    }

    PropertyReport value_monotone_t() const {
        const Property p = Property::ValueMonotoneT;
        for (int t = 1; t <= T_; ++t)
            for (int l = 0; l < L_; ++l)
                for (int k = 0; k <= N_; ++k)
                    if (v(t + 1, k, l) < v(t, k, l) - tol_)
                        return fail(p, {t, k, LocationId::from_zero_based(l)},
                                    "v_{t+1}=" + fmt(v(t + 1, k, l)) + " < v_t=" + fmt(v(t, k, l)));
        return pass(p);
    }

    PropertyReport wifi_dominance() const {
        const Property p = Property::WifiDominance;
        for (int t = 1; t <= T_; ++t) {
            const ValueSlice next = sol_.values.slice(t + 1);
            for (int l = 0; l < L_; ++l) {
                if (!kernel_.admissible(l).contains(Action::WiFi)) continue;
                const bool always_wifi = !wifi_not_faster(l) ||
                                         kernel_.next_k(N_, l, Action::WiFi) == kernel_.next_k(N_, l, Action::Cellular);
                for (int k = 0; k <= N_; ++k) {
                    const LatticePoint at{t, k, LocationId::from_zero_based(l)};
                    const double idle = kernel_.psi(next, k, l, Action::Idle);
                    const double wifi = kernel_.psi(next, k, l, Action::WiFi);
                    if (idle < wifi - tol_) return fail(p, at, "psi(Idle)=" + fmt(idle) + " < psi(WiFi)=" + fmt(wifi));
                    if (always_wifi && k > 0 && act(t, k, l) != Action::WiFi)
                        return fail(p, at, "Wi-Fi is at least as fast but the policy picks " +
                                               std::string(to_string(act(t, k, l))));
                }
            }
        }
        return pass(p);
    }

    bool optimal(int t, int k, int l, Action a) const {
        if (!kernel_.admissible(l).contains(a)) return false;
        return kernel_.psi(sol_.values.slice(t + 1), k, l, a) <= v(t, k, l) + tol_;
    }

    // Smallest k >= 1 from which Cellular is optimal all the way up to K.
    int lowest_threshold(int l, int t) const {
        int k = N_;
        while (k >= 1 && optimal(t, k, l, Action::Cellular)) --k;
        return k + 1;
    }

    // Largest k such that the free action is optimal on [1, k).
    int highest_threshold(int l, int t) const {
        const Action free = shape(l).free;
        int k = 1;
        while (k <= N_ && optimal(t, k, l, free)) ++k;
        return k;
    }

    // Some optimal policy is free below k* and Cellular from k* on. Ties
    // between the two leave a range of valid k*.
    PropertyReport threshold_k() const {
        const Property p = Property::ThresholdK;
        for (int l = 0; l < L_; ++l)
            for (int t = 1; t <= T_; ++t) {
                const int lo = lowest_threshold(l, t), hi = highest_threshold(l, t);
                if (lo > hi)
                    return fail(p, {t, hi, LocationId::from_zero_based(l)},
                                std::string(to_string(shape(l).free)) + " stops being optimal at k=" +
                                    std::to_string(hi) + " but cellular is optimal only from k=" + std::to_string(lo));
            }
        return pass(p);
    }

    // Non-increasing thresholds exist: take the largest valid k* at t = 1 and
    // keep each later one as large as the previous allows. t*(k, l) is then
    // non-increasing in k by construction.
    PropertyReport threshold_monotone() const {
        const Property p = Property::ThresholdMonotone;
        for (int l = 0; l < L_; ++l) {
            int prev = N_ + 1;
            for (int t = 1; t <= T_; ++t) {
                const int lo = lowest_threshold(l, t), hi = highest_threshold(l, t);
                if (lo > hi) return fail(p, {t, hi, LocationId::from_zero_based(l)}, "no threshold at this slot");
                const int pick = std::min(prev, hi);
                if (pick < lo)
                    return fail(p, {t, lo, LocationId::from_zero_based(l)},
                                "k*(t-1)=" + std::to_string(prev) + " < smallest valid k*(t)=" + std::to_string(lo));
                prev = pick;
            }
        }
        return pass(p);
    }

    // psi(k, Cellular) - psi(k, free) must be non-increasing in k.
    PropertyReport cross_difference() const {
        const Property p = Property::CrossDifference;
        std::vector<int> eligible;
        for (int l = 0; l < L_; ++l)
            if (shape(l).covered) eligible.push_back(l);
        if (eligible.empty() || T_ == 0) return pass(p);
        Rng rng = make_stream(opt_.seed, {0x63726f7373ULL});
        std::uniform_int_distribution<int> pick_t(1, T_);
        std::uniform_int_distribution<std::size_t> pick_l(0, eligible.size() - 1);
        std::uniform_int_distribution<int> pick_k(0, N_);
        for (int i = 0; i < opt_.cross_difference_samples; ++i) {
            const int t = pick_t(rng);
            const int l = eligible[pick_l(rng)];
            int hi = pick_k(rng), lo = pick_k(rng);
            if (hi < lo) std::swap(hi, lo);
            const ValueSlice next = sol_.values.slice(t + 1);
            const Action free = shape(l).free;
            // Actions ordered by code: the larger is a-hat.
            const Action a_hi = code(free) > code(Action::Cellular) ? free : Action::Cellular;
            const Action a_lo = a_hi == free ? Action::Cellular : free;
            const double lhs = kernel_.psi(next, hi, l, a_hi) + kernel_.psi(next, lo, l, a_lo);
            const double rhs = kernel_.psi(next, hi, l, a_lo) + kernel_.psi(next, lo, l, a_hi);
            const bool super = free == Action::WiFi;
            const bool ok = super ? lhs >= rhs - tol_ : lhs <= rhs + tol_;
            if (!ok)
                return fail(p, {t, hi, LocationId::from_zero_based(l)},
                            std::string(super ? "superadditivity" : "subadditivity") + " fails against k=" +
                                std::to_string(lo) + ": " + fmt(lhs) + " vs " + fmt(rhs));
        }
        return pass(p);
    }

    PropertyReport increment_monotone() const {
        const Property p = Property::IncrementMonotone;
        for (int l = 0; l < L_; ++l) {
            const LocationShape s = shape(l);
            if (!s.covered) continue;
            for (int t = 1; t <= T_; ++t)
                for (int k = 0; k <= N_; ++k) {
                    const int a = kernel_.next_k(k, l, s.free);
                    const int b = kernel_.next_k(k, l, Action::Cellular);
                    const double later = v(t + 1, a, l) - v(t + 1, b, l);
                    const double now = v(t, a, l) - v(t, b, l);
                    if (later < now - tol_)
                        return fail(p, {t, k, LocationId::from_zero_based(l)},
                                    "increment at t+1 " + fmt(later) + " < increment at t " + fmt(now));
                }
        }
        return pass(p);
    }

    PropertyReport oracle() const {
        const Property p = Property::Oracle;
        const OracleLimits limits;
        if (L_ > limits.max_locations || T_ > limits.max_horizon || N_ > limits.max_steps)
            return {p, CheckStatus::Skipped, "instance exceeds the exhaustive-search limits", std::nullopt};
        const State root{N_, spec_.initial_location()};
        const OracleResult ref = expectimax(model_, spec_, root, 1, opt_.cost, limits);
        const double got = sol_.values.at(1, N_, root.l);
        const LatticePoint at{1, N_, root.l};
        if (std::abs(got - ref.optimal_value) > opt_.tolerance * std::max(1.0, std::abs(ref.optimal_value)))
            return fail(p, at, "solver value " + fmt(got) + " != exhaustive " + fmt(ref.optimal_value));
        if (!ref.optimal_actions.contains(sol_.policy.at(1, N_, root.l)))
            return fail(p, at, "solver action " + std::string(to_string(sol_.policy.at(1, N_, root.l))) +
                                   " is not optimal at the root");
        return pass(p);
    }

    const NetworkModel& model_;
    const ProblemSpec& spec_;
    const Solution& sol_;
    const VerifyOptions& opt_;
    detail::StageKernel kernel_;
    int T_, N_, L_;
    double tol_ = 0.0;
    std::optional<std::string> structure_;
};

}  // namespace

std::string_view to_string(Property p) {
    for (const auto& n : kNames)
        if (n.property == p) return n.name;
    return "?";
}

std::optional<Property> parse_property(std::string_view name) {
    for (const auto& n : kNames)
        if (n.name == name) return n.property;
    return std::nullopt;
}

std::string_view to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "FAIL";
        case CheckStatus::Skipped: return "skipped";
    }
    return "?";
}

std::optional<std::string> structure_violation(const NetworkModel& model, const ProblemSpec& spec, CostModel cost) {
    if (cost != CostModel::Flat) return "cost model is not the flat cellular charge";
    if (!spec.penalty().convex_on_grid(spec.steps(), spec.sigma())) return "penalty " + spec.penalty().describe() + " is not convex";
    try {
        (void)MonotoneModel::from_network(model);
    } catch (const PreconditionError& e) {
        return std::string(e.what());
    }
    return std::nullopt;
}

std::vector<PropertyReport> verify(const NetworkModel& model, const ProblemSpec& spec, const Solution& solution,
                                   std::span<const Property> properties, const VerifyOptions& options) {
    Checker checker(model, spec, solution, options);
    std::vector<PropertyReport> out;
    for (Property p : properties) out.push_back(checker.run(p));
    return out;
}

PropertyReport verify_one(const NetworkModel& model, const ProblemSpec& spec, const Solution& solution,
                          Property property, const VerifyOptions& options) {
    return Checker(model, spec, solution, options).run(property);
}

}  // namespace offload
