#include "qrc/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace qrc {

void MemoryTaskSpec::validate() const {
    if (sequence_length < 1) throw DomainError("sequence length must be positive");
    if (tau_max < 1) throw DomainError("tau_max must be at least 1");
    if (!(encoding_noise >= 0.0 && encoding_noise < 1.0)) throw DomainError("encoding noise must lie in [0, 1)");
}

MemoryInputs gen_memory_inputs(const MemoryTaskSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    MemoryInputs out;
    out.clean.resize(static_cast<std::size_t>(spec.sequence_length));
    out.encoded.resize(out.clean.size());
    for (std::size_t n = 0; n < out.clean.size(); ++n) {
        out.clean[n] = unit(rng);
        out.encoded[n] = std::clamp(out.clean[n] + spec.encoding_noise * jitter(rng), 0.0, 1.0);
    }
    return out;
}

DelayedTargets memory_targets(std::span<const double> clean, int tau) {
    if (tau < 0) throw DomainError("delay must be non-negative");
    if (static_cast<std::size_t>(tau) >= clean.size()) throw DomainError("delay must be shorter than the sequence");
    DelayedTargets out;
    out.first_valid = static_cast<std::size_t>(tau);
    out.values.assign(clean.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t n = out.first_valid; n < clean.size(); ++n) out.values[n] = clean[n - out.first_valid];
    return out;
}

double total_memory_capacity(std::span<const double> capacities) {
    if (capacities.empty()) throw DomainError("total_memory_capacity: no delays");
    double sum = 0.0;
    for (double c : capacities) sum += c;
    return sum / static_cast<double>(capacities.size());
}

void MultitaskSpec::validate() const {
    if (sequence_length < 1) throw DomainError("sequence length must be positive");
}

MultitaskSequence gen_multitask(const MultitaskSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    std::bernoulli_distribution coin(0.5);
    MultitaskSequence s;
    const auto len = static_cast<std::size_t>(spec.sequence_length);
    s.bits_a.resize(len);
    s.bits_b.resize(len);
    s.targets_and.resize(len);
    s.targets_or.resize(len);
    s.targets_xor.resize(len);
    for (std::size_t n = 0; n < len; ++n) {
        const int a = coin(rng) ? 1 : 0;
        const int b = coin(rng) ? 1 : 0;
        s.bits_a[n] = a;
        s.bits_b[n] = b;
        s.targets_and[n] = a & b;
        s.targets_or[n] = a | b;
        s.targets_xor[n] = a ^ b;
    }
    return s;
}

CriticalDisorder critical_disorder(std::span<const double> grid, std::span<const double> accuracy, double threshold) {
    if (grid.empty()) throw DomainError("critical_disorder: empty grid");
    if (accuracy.size() > grid.size()) throw DimensionError("critical_disorder: more accuracies than grid points");
    if (!(threshold > 0.0 && threshold < 1.0)) throw DomainError("critical_disorder: threshold must lie in (0, 1)");
    if (!std::is_sorted(grid.begin(), grid.end())) throw DomainError("critical_disorder: grid must be ascending");

    for (std::size_t i = 0; i < accuracy.size(); ++i) {
        if (accuracy[i] >= threshold) continue;
        if (i == 0) return CriticalDisorder{grid[0], false, true};
        const double a0 = accuracy[i - 1];
        const double a1 = accuracy[i];
        const double frac = (a0 - threshold) / (a0 - a1);
        return CriticalDisorder{grid[i - 1] + frac * (grid[i] - grid[i - 1]), false, false};
    }
    return CriticalDisorder{grid.back(), true, false};
}

std::map<int, CriticalDisorder> critical_disorder_scan(std::span<const int> k_values, double threshold,
                                                       std::span<const double> grid, const AccuracyFn& accuracy) {
    std::map<int, CriticalDisorder> out;
    for (int k : k_values) {
        std::vector<double> curve;
        for (double dx : grid) {
            curve.push_back(accuracy(k, dx));
            if (curve.back() < threshold) break;
        }
        out[k] = critical_disorder(grid, curve, threshold);
    }
    return out;
}

void write_memory_task_csv(std::ostream& os, const MemoryInputs& inputs) {
    const auto old_precision = os.precision(17);
    os << "step,eta_clean,eta_encoded\n";
    for (std::size_t n = 0; n < inputs.clean.size(); ++n) {
        os << n << ',' << inputs.clean[n] << ',' << inputs.encoded[n] << '\n';
    }
    os.precision(old_precision);
}

void write_multitask_csv(std::ostream& os, const MultitaskSequence& seq) {
    os << "step,a,b,and,or,xor\n";
    for (std::size_t n = 0; n < seq.bits_a.size(); ++n) {
        os << n << ',' << seq.bits_a[n] << ',' << seq.bits_b[n] << ',' << seq.targets_and[n] << ','
           << seq.targets_or[n] << ',' << seq.targets_xor[n] << '\n';
    }
}

} // namespace qrc
