#pragma once

#include <memory>
#include <span>

#include "denjoy/blowup.hpp"

namespace denjoy {

/// One of the 2d standard generator directions of Z^d.
struct Generator {
    int axis = 0;
    bool inverse = false;
};

/// Evaluators for the blown-up action. On an indexed interval with an
/// indexed translate the map is the closed-form interval transfer; elsewhere
/// it is position o (rotate) o H, which collapses the (truncated) complement
/// exactly onto the rotation. Derivatives are 1 off the active intervals.
class DiffeoAction {
public:
    explicit DiffeoAction(std::shared_ptr<const BlowupModel> model);

    const BlowupModel& model() const { return *model_; }
    std::shared_ptr<const BlowupModel> model_ptr() const { return model_; }
    int dim() const { return model_->scheme().dim(); }
    double rotation(Generator s) const;

    double value(Generator s, double x) const;
    double derivative(Generator s, double x) const;
    void derivative_batch(Generator s, std::span<const double> x, std::span<double> out) const;

    /// n-fold lift iterate F^n(x0) for the lift with F(x) - x in [0, 1).
    double lift_iterate(Generator s, double x0, std::int64_t n) const;
    /// (F^n(x0) - x0) / n.
    double rotation_estimate(Generator s, double x0, std::int64_t n) const;

private:
    int dir_index(Generator s) const { return 2 * s.axis + (s.inverse ? 1 : 0); }

    std::shared_ptr<const BlowupModel> model_;
    std::vector<std::vector<std::int32_t>> target_;  // per direction, -1 = unindexed
};

}  // namespace denjoy
