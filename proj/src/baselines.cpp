#include "offload/baselines.hpp"

#include <stdexcept>

namespace offload {

Action no_offload_decide(State s) { return s.k > 0 ? Action::Cellular : Action::Idle; }

Action otso_decide(const NetworkModel& model, State s) {
    if (s.k <= 0) return Action::Idle;
    return model.has_wifi(s.l) ? Action::WiFi : Action::Cellular;
}

double encounter_rate_predictor(const WifflerState& ws, int remaining_time) {
    const auto& history = ws.history();
    if (history.empty() || remaining_time <= 0) return 0.0;
    double gap = 0.0, transfer = 0.0;
    for (const auto& e : history) {
        gap += e.inter_meeting_time;
        transfer += e.throughput * e.dwell;
    }
    const double n = static_cast<double>(history.size());
    gap /= n;
    transfer /= n;
    if (gap <= 0.0) return 0.0;
    return remaining_time / gap * transfer;
}

WifflerState::WifflerState(double theta, int window, WifflerPredictor predictor)
    : theta_(theta), window_(window), predictor_(std::move(predictor)) {
    if (!(theta > 0.0)) throw DomainError("wiffler theta must be > 0");
    if (window < 1) throw DomainError("wiffler window must be >= 1");
}

void WifflerState::push(const WifiEncounter& e) {
    history_.push_back(e);
    while (static_cast<int>(history_.size()) > window_) history_.pop_front();
}

void WifflerState::observe(int t, bool wifi_available, double wifi_rate) {
    if (!wifi_available) {
        connected_ = false;
        return;
    }
    if (!connected_) {
        connected_ = true;
        rate_sum_ = 0.0;
        push(WifiEncounter{t - last_start_, 0.0, 0});
        last_start_ = t;
    }
    // The open encounter is the newest entry; update it in place.
    auto& open = history_.back();
    rate_sum_ += wifi_rate;
    open.dwell += 1;
    open.throughput = rate_sum_ / open.dwell;
}

void WifflerState::reset() {
    history_.clear();
    connected_ = false;
    last_start_ = 0;
    rate_sum_ = 0.0;
}

double wiffler_predict(const WifflerState& ws, int remaining_time) { return ws.predict(remaining_time); }

Action wiffler_decide(const WifflerState& ws, const NetworkModel& model, const ProblemSpec& spec, State s, int t) {
    if (s.k <= 0) return Action::Idle;
    if (model.has_wifi(s.l)) return Action::WiFi;
    const double zeta = ws.predict(spec.horizon() - t);
    return zeta >= ws.theta() * (s.k * spec.sigma()) ? Action::Idle : Action::Cellular;
}

}  // namespace offload
