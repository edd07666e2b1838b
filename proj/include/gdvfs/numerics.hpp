#pragma once

namespace gdvfs {

/// Kahan compensated accumulator. Level sums run over up to M terms of very
/// different magnitude; compensation keeps them tight against oracle checks.
class KahanSum {
public:
    void add(double x) noexcept {
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }

    double value() const noexcept { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace gdvfs
