#pragma once

// Calibration bookkeeping shared by the simulation scenarios: fixed-width
// belief bins over [0,1], per-bin truth statistics, and the mean quadratic
// score.
//
// Binning rule: boundary values fall into the lower bin (bin i covers
// (i/k, (i+1)/k], with 0 landing in bin 0), so a belief of exactly 0.9 with
// ten bins is counted in [0.8, 0.9].

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ipw/errors.hpp"

namespace ipw {

struct CalibrationBin {
    double lo = 0.0;
    double hi = 0.0;
    std::uint64_t count = 0;
    double mean_belief = 0.0;
    double truth_fraction = 0.0;
};

struct CalibrationReport {
    std::string policy;
    std::vector<CalibrationBin> bins;
    double calibration_error = 0.0;  // max |mean belief - truth fraction|, busy bins only
    double brier = 0.0;              // mean quadratic score
};

// Accumulates (belief, truth) observations, possibly many at a time with
// integer multiplicity. Merging is plain elementwise addition, so partial
// accumulators combined in a fixed order reproduce the sequential result
// bit for bit.
class CalibrationAccumulator {
public:
    explicit CalibrationAccumulator(int bins = 10)
        : counts_(bins, 0), belief_sums_(bins, 0.0), truth_counts_(bins, 0) {
        if (bins < 1) throw DomainError("at least one calibration bin is required");
    }

    int bins() const noexcept { return static_cast<int>(counts_.size()); }

    // One observation: a reported belief and whether the statement was true.
    void add(double belief, bool truth) {
        add_group(belief, 1, truth ? 1 : 0);
    }

    // `count` statements sharing one belief value, `truths` of them true.
    void add_group(double belief, std::uint64_t count, std::uint64_t truths) {
        const int bin = bin_of(belief);
        counts_[bin] += count;
        belief_sums_[bin] += belief * static_cast<double>(count);
        truth_counts_[bin] += truths;
        const double b2 = belief * belief;
        brier_sum_ += static_cast<double>(truths) * (1.0 - belief) * (1.0 - belief) +
                      static_cast<double>(count - truths) * b2;
        total_ += count;
    }

    void merge(const CalibrationAccumulator& other) {
        if (other.bins() != bins()) throw DomainError("bin counts differ");
        for (int i = 0; i < bins(); ++i) {
            counts_[i] += other.counts_[i];
            belief_sums_[i] += other.belief_sums_[i];
            truth_counts_[i] += other.truth_counts_[i];
        }
        brier_sum_ += other.brier_sum_;
        total_ += other.total_;
    }

    int bin_of(double belief) const {
        const int k = bins();
        if (belief <= 0.0) return 0;
        int bin = static_cast<int>(std::ceil(belief * k)) - 1;
        if (bin < 0) bin = 0;
        if (bin >= k) bin = k - 1;
        return bin;
    }

    CalibrationReport report(std::string policy, std::uint64_t min_bin_count) const {
        CalibrationReport out;
        out.policy = std::move(policy);
        const int k = bins();
        out.bins.resize(k);
        for (int i = 0; i < k; ++i) {
            auto& bin = out.bins[i];
            bin.lo = static_cast<double>(i) / k;
            bin.hi = static_cast<double>(i + 1) / k;
            bin.count = counts_[i];
            if (counts_[i] > 0) {
                bin.mean_belief = belief_sums_[i] / static_cast<double>(counts_[i]);
                bin.truth_fraction = static_cast<double>(truth_counts_[i]) /
                                     static_cast<double>(counts_[i]);
            }
            if (counts_[i] >= min_bin_count) {
                const double gap = std::fabs(bin.mean_belief - bin.truth_fraction);
                if (gap > out.calibration_error) out.calibration_error = gap;
            }
        }
        if (total_ > 0) out.brier = brier_sum_ / static_cast<double>(total_);
        return out;
    }

private:
    std::vector<std::uint64_t> counts_;
    std::vector<double> belief_sums_;
    std::vector<std::uint64_t> truth_counts_;
    double brier_sum_ = 0.0;
    std::uint64_t total_ = 0;
};

}  // namespace ipw
