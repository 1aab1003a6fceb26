#pragma once

#include "qrc/types.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

namespace qrc {

struct MemoryTaskSpec {
    int sequence_length = 2350;
    int tau_max = 6;
    double encoding_noise = 0.02;
    std::uint64_t seed = 0;

    void validate() const;
};

struct MemoryInputs {
    std::vector<double> clean;   // regression targets
    std::vector<double> encoded; // drive the Werner encoding
};

/// clean ~ U[0, 1]; encoded = clamp(clean + U[-noise, noise], 0, 1).
MemoryInputs gen_memory_inputs(const MemoryTaskSpec& spec);

/// values[n] = clean[n - tau] for n >= first_valid = tau. Entries before
/// first_valid are NaN and must not be fitted.
struct DelayedTargets {
    std::vector<double> values;
    std::size_t first_valid = 0;
};

DelayedTargets memory_targets(std::span<const double> clean, int tau);

/// Mean of the per-delay capacities, i.e. their sum divided by tau_max.
double total_memory_capacity(std::span<const double> capacities);

struct MultitaskSpec {
    int sequence_length = 2350;
    std::uint64_t seed = 0;

    void validate() const;
};

struct MultitaskSequence {
    std::vector<int> bits_a;
    std::vector<int> bits_b;
    std::vector<int> targets_and;
    std::vector<int> targets_or;
    std::vector<int> targets_xor;
};

MultitaskSequence gen_multitask(const MultitaskSpec& spec);

/// Disorder strength at which an accuracy curve first drops below a
/// threshold, interpolated linearly between the bracketing grid points.
/// A curve that never drops is right-censored at the last grid point; one
/// that starts below is left-censored at the first.
struct CriticalDisorder {
    double value = 0.0;
    bool right_censored = false;
    bool left_censored = false;
};

CriticalDisorder critical_disorder(std::span<const double> grid, std::span<const double> accuracy, double threshold);

/// Mean rescaled XOR accuracy for a given (degree, disorder).
using AccuracyFn = std::function<double(int k, double delta_x)>;

/// Evaluates the curve on the ascending grid for each k, stopping at the
/// first point below the threshold.
std::map<int, CriticalDisorder> critical_disorder_scan(std::span<const int> k_values, double threshold,
                                                       std::span<const double> grid, const AccuracyFn& accuracy);

/// Columns: step, eta_clean, eta_encoded.
void write_memory_task_csv(std::ostream& os, const MemoryInputs& inputs);
/// Columns: step, a, b, and, or, xor.
void write_multitask_csv(std::ostream& os, const MultitaskSequence& seq);

} // namespace qrc
