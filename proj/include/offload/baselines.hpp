#pragma once

// Heuristic comparison schemes: always-cellular, on-the-spot offloading and
// a history-based Wi-Fi predictor.

#include <deque>
#include <functional>

#include "offload/model.hpp"

namespace offload {

/// Cellular whenever data remains.
Action no_offload_decide(State s);

/// Wi-Fi whenever available, cellular otherwise.
Action otso_decide(const NetworkModel& model, State s);

/// One Wi-Fi encounter: entering the Wi-Fi set starts it, leaving ends it.
struct WifiEncounter {
    int inter_meeting_time = 0;  // slots since the previous encounter started
    double throughput = 0.0;     // mean Mbit per slot observed while connected
    int dwell = 0;               // slots spent connected
};

class WifflerState;

/// Estimated Mbit transferable over Wi-Fi in `remaining_time` slots.
using WifflerPredictor = std::function<double(const WifflerState&, int remaining_time)>;

/// zeta = (remaining / mean inter-meeting time) * mean per-encounter transfer,
/// where per-encounter transfer is throughput * dwell. Zero with no history.
double encounter_rate_predictor(const WifflerState& ws, int remaining_time);

class WifflerState {
public:
    explicit WifflerState(double theta = 1.0, int window = 4, WifflerPredictor predictor = encounter_rate_predictor);

    double theta() const { return theta_; }
    int window() const { return window_; }
    const std::deque<WifiEncounter>& history() const { return history_; }

    /// Records the slot-t observation. `wifi_rate` is the Wi-Fi throughput
    /// seen at this slot and is ignored when Wi-Fi is absent.
    void observe(int t, bool wifi_available, double wifi_rate);
    /// Appends a completed encounter directly (oldest entries drop out).
    void push(const WifiEncounter& e);
    void reset();

    double predict(int remaining_time) const { return predictor_(*this, remaining_time); }

private:
    double theta_;
    int window_;
    WifflerPredictor predictor_;
    std::deque<WifiEncounter> history_;
    bool connected_ = false;
    int last_start_ = 0;
    double rate_sum_ = 0.0;
};

double wiffler_predict(const WifflerState& ws, int remaining_time);

/// Wi-Fi when available; off Wi-Fi, Idle if zeta >= theta * k, else Cellular.
/// The remaining time used for the prediction is T - t slots.
Action wiffler_decide(const WifflerState& ws, const NetworkModel& model, const ProblemSpec& spec, State s, int t);

}  // namespace offload
