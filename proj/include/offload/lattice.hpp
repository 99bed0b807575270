#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "offload/model.hpp"

namespace offload {

/// Read-only view of one time slice of a value table: (k, l) -> value,
/// stored k-major with locations contiguous.
class ValueSlice {
public:
    ValueSlice(std::span<const double> data, int steps, int locations)
        : data_(data), steps_(steps), locations_(locations) {}

    double at(int k, int l_zero_based) const {
        return data_[static_cast<std::size_t>(k) * locations_ + l_zero_based];
    }
    std::span<const double> row(int k) const {
        return data_.subspan(static_cast<std::size_t>(k) * locations_, locations_);
    }
    int steps() const { return steps_; }
    int locations() const { return locations_; }

private:
    std::span<const double> data_;
    int steps_;
    int locations_;
};

/// v_t(k, l) for t = 1..T+1, k = 0..K/sigma, l = 1..L.
class ValueTable {
public:
    ValueTable() = default;
    ValueTable(int horizon, int steps, int locations);

    int horizon() const { return horizon_; }
    int steps() const { return steps_; }
    int locations() const { return locations_; }

    double at(int t, int k, LocationId l) const { return data_[index(t, k, l.zero_based())]; }
    double& at(int t, int k, LocationId l) { return data_[index(t, k, l.zero_based())]; }

    ValueSlice slice(int t) const {
        return {std::span<const double>(data_).subspan(index(t, 0, 0), slice_size()), steps_, locations_};
    }
    std::span<double> mutable_slice(int t) { return std::span<double>(data_).subspan(index(t, 0, 0), slice_size()); }

    std::size_t slice_size() const { return static_cast<std::size_t>(steps_ + 1) * locations_; }

    friend bool operator==(const ValueTable&, const ValueTable&) = default;

private:
    std::size_t index(int t, int k, int l) const {
        return (static_cast<std::size_t>(t - 1) * (steps_ + 1) + k) * locations_ + l;
    }

    int horizon_ = 0;
    int steps_ = 0;
    int locations_ = 0;
    std::vector<double> data_;
};

/// Decision table delta_t(k, l) for t = 1..T.
class Policy {
public:
    Policy() = default;
    Policy(int horizon, int steps, int locations);

    int horizon() const { return horizon_; }
    int steps() const { return steps_; }
    int locations() const { return locations_; }

    Action at(int t, int k, LocationId l) const { return data_[index(t, k, l.zero_based())]; }
    void set(int t, int k, LocationId l, Action a) { data_[index(t, k, l.zero_based())] = a; }

    friend bool operator==(const Policy&, const Policy&) = default;

private:
    std::size_t index(int t, int k, int l) const {
        return (static_cast<std::size_t>(t - 1) * (steps_ + 1) + k) * locations_ + l;
    }

    int horizon_ = 0;
    int steps_ = 0;
    int locations_ = 0;
    std::vector<Action> data_;
};

}  // namespace offload
