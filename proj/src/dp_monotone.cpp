#include "offload/dp_monotone.hpp"

#include <numeric>

#include "offload/detail/kernel.hpp"

namespace offload {

std::string_view to_string(WifiMode m) {
    switch (m) {
        case WifiMode::NoWifi: return "no-wifi";
        case WifiMode::WifiSlower: return "wifi-slower";
        case WifiMode::WifiFaster: return "wifi-faster";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// MonotoneModel

namespace {

NetworkModel uniform_network(const NetworkModel& base, double mu1, double mu2, double price) {
    const int n = base.num_locations();
    NetworkModel::Params p;
    p.num_locations = n;
    p.wifi_locations = base.wifi_locations();
    p.mobility = base.mobility();
    p.cellular_price.assign(n, price);
    p.wifi_price.assign(n, 0.0);
    p.cellular_rate.assign(n, mu1);
    p.wifi_rate.assign(n, mu2);
    return NetworkModel(std::move(p));
}

}  // namespace

MonotoneModel::MonotoneModel(NetworkModel network, double mu1, double mu2, double price)
    : network_(std::move(network)), mu1_(mu1), mu2_(mu2), q_(mu1 * price) {}

MonotoneModel MonotoneModel::uniform(const NetworkModel& base, double cellular_rate, double wifi_rate,
                                     double cellular_price) {
    return MonotoneModel(uniform_network(base, cellular_rate, wifi_rate, cellular_price), cellular_rate,
                         wifi_rate, cellular_price);
}

MonotoneModel MonotoneModel::from_network(const NetworkModel& model, bool approximate) {
    const int n = model.num_locations();
    const auto wifi = model.wifi_locations();
    const LocationId first{1};

    if (approximate) {
        double mu1 = 0.0, price = 0.0, mu2 = 0.0;
        for (int i = 0; i < n; ++i) {
            mu1 += model.rate(LocationId::from_zero_based(i), Action::Cellular);
            price += model.price(LocationId::from_zero_based(i), Action::Cellular);
        }
        for (LocationId l : wifi) mu2 += model.rate(l, Action::WiFi);
        mu1 /= n;
        price /= n;
        mu2 = wifi.empty() ? 0.0 : mu2 / static_cast<double>(wifi.size());
        return uniform(model, mu1, mu2, price);
    }

    for (LocationId l : wifi) {
        if (model.price(l, Action::WiFi) != 0.0) {
            throw PreconditionError("free-wifi", "Wi-Fi is not free at location " + std::to_string(l.value));
        }
    }
    const double price = model.price(first, Action::Cellular);
    const double mu1 = model.rate(first, Action::Cellular);
    for (int i = 0; i < n; ++i) {
        const LocationId l = LocationId::from_zero_based(i);
        if (model.price(l, Action::Cellular) != price) {
            throw PreconditionError("uniform-cellular-price",
                                    "cellular price differs at location " + std::to_string(l.value));
        }
        if (model.rate(l, Action::Cellular) != mu1) {
            throw PreconditionError("uniform-rates", "cellular rate differs at location " + std::to_string(l.value));
        }
    }
    const double mu2 = wifi.empty() ? 0.0 : model.rate(wifi.front(), Action::WiFi);
    for (LocationId l : wifi) {
        if (model.rate(l, Action::WiFi) != mu2) {
            throw PreconditionError("uniform-rates", "Wi-Fi rate differs at location " + std::to_string(l.value));
        }
    }
    return uniform(model, mu1, mu2, price);
}

// ---------------------------------------------------------------------------
// ThresholdPolicy

ThresholdPolicy::ThresholdPolicy(int horizon, int steps, std::vector<WifiMode> modes)
    : horizon_(horizon), steps_(steps), modes_(std::move(modes)),
      k_star_(modes_.size() * static_cast<std::size_t>(horizon), steps + 1) {}

// ---------------------------------------------------------------------------
// Solver

namespace {

std::vector<WifiMode> location_modes(const MonotoneModel& mm, const ProblemSpec& spec) {
    const NetworkModel& net = mm.network();
    const int cell_steps = transfer_steps(spec, mm.cellular_rate());
    const int wifi_steps = transfer_steps(spec, mm.wifi_rate());
    std::vector<WifiMode> modes(net.num_locations());
    for (int l = 0; l < net.num_locations(); ++l) {
        if (!net.has_wifi(LocationId::from_zero_based(l))) {
            modes[l] = WifiMode::NoWifi;
        } else {
            modes[l] = wifi_steps > cell_steps ? WifiMode::WifiFaster : WifiMode::WifiSlower;
        }
    }
    return modes;
}

// Scans k = 0..K for one (l, t), writing v_t(k, l) through `out` with the
// given stride. Returns k*(l, t).
int scan_thresholds(const detail::StageKernel& kernel, WifiMode mode, int l, const ValueSlice& next,
                    int k_star_next, double* out, std::size_t stride) {
    const int steps = kernel.steps();
    const int infinity = steps + 1;
    const Action j = mode == WifiMode::NoWifi ? Action::Idle : Action::WiFi;

    out[0] = kernel.psi(next, 0, l, Action::Idle);
    if (mode == WifiMode::WifiFaster) {
        for (int k = 1; k <= steps; ++k) out[k * stride] = kernel.psi(next, k, l, Action::WiFi);
        return infinity;
    }

    // 0: only j can be optimal (k below the later threshold)
    // 1: both j and Cellular are candidates
    // 2: threshold found, only Cellular remains
    int phase = 0;
    int k_star = infinity;
    std::array<double, 3> psi{};
    for (int k = 1; k <= steps; ++k) {
        if (phase == 0 && k >= k_star_next) phase = 1;
        double v;
        if (phase == 0) {
            v = kernel.psi(next, k, l, j);
        } else if (phase == 2) {
            v = kernel.psi(next, k, l, Action::Cellular);
        } else {
            psi[code(j)] = kernel.psi(next, k, l, j);
            psi[code(Action::Cellular)] = kernel.psi(next, k, l, Action::Cellular);
            const Action best = detail::argmin_action(psi, ActionSet{j, Action::Cellular});
            v = psi[code(best)];
            if (best == Action::Cellular) {
                k_star = k;
                phase = 2;
            }
        }
        out[k * stride] = v;
    }
    return k_star;
}

void require_convex(const ProblemSpec& spec) {
    if (!spec.penalty().convex_on_grid(spec.steps(), spec.sigma())) {
        throw PreconditionError("convex-penalty",
                                "threshold solver needs a convex penalty; got " + spec.penalty().describe());
    }
}

}  // namespace

ThresholdRow threshold_pass(const MonotoneModel& mm, const ProblemSpec& spec, LocationId l, int t,
                            const ValueSlice& next, int k_star_next) {
    const int li = mm.network().checked(l);
    if (t < 1 || t > spec.horizon()) throw DomainError("time slot outside 1..T");
    if (next.steps() != spec.steps() || next.locations() != mm.network().num_locations()) {
        throw DomainError("value slice does not match the model lattice");
    }
    const detail::StageKernel kernel(mm.network(), spec, CostModel::Flat);
    const auto modes = location_modes(mm, spec);
    ThresholdRow row{0, std::vector<double>(spec.steps() + 1)};
    row.k_star = scan_thresholds(kernel, modes[li], li, next, k_star_next, row.values.data(), 1);
    return row;
}

MonotoneSolution solve_monotone(const MonotoneModel& mm, const ProblemSpec& spec, std::size_t max_cells) {
    require_convex(spec);
    const NetworkModel& net = mm.network();
    check_lattice(net, spec, max_cells);

    const int horizon = spec.horizon();
    const int steps = spec.steps();
    const int locations = net.num_locations();
    const detail::StageKernel kernel(net, spec, CostModel::Flat);

    MonotoneSolution out{ThresholdPolicy(horizon, steps, location_modes(mm, spec)),
                         ValueTable(horizon, steps, locations)};
    for (int k = 0; k <= steps; ++k) {
        const double h = spec.penalty().at(k, spec.sigma());
        for (int l = 0; l < locations; ++l) out.values.at(horizon + 1, k, LocationId::from_zero_based(l)) = h;
    }

    // No later pass exists at t = T; k*(l, T+1) = 0 makes it scan everything.
    std::vector<int> k_star_next(locations, 0);
    for (int t = horizon; t >= 1; --t) {
        const ValueSlice next = out.values.slice(t + 1);
        auto current = out.values.mutable_slice(t);
        for (int l = 0; l < locations; ++l) {
            const LocationId id = LocationId::from_zero_based(l);
            const int k_star = scan_thresholds(kernel, out.thresholds.mode(id), l, next, k_star_next[l],
                                               current.data() + l, static_cast<std::size_t>(locations));
            out.thresholds.set_k_star(id, t, k_star);
            k_star_next[l] = k_star;
        }
    }
    return out;
}

Action decide(const ThresholdPolicy& tp, State s, int t) {
    if (s.k <= 0) return Action::Idle;
    switch (tp.mode(s.l)) {
        case WifiMode::NoWifi: return s.k >= tp.k_star(s.l, t) ? Action::Cellular : Action::Idle;
        case WifiMode::WifiSlower: return s.k >= tp.k_star(s.l, t) ? Action::Cellular : Action::WiFi;
        case WifiMode::WifiFaster: return Action::WiFi;
    }
    return Action::Idle;
}

int t_star_view(const ThresholdPolicy& tp, int k, LocationId l) {
    if (k <= 0) return tp.horizon() + 1;
    for (int t = 1; t <= tp.horizon(); ++t) {
        if (k >= tp.k_star(l, t)) return t;
    }
    return tp.horizon() + 1;
}

}  // namespace offload
