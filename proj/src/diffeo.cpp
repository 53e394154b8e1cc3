#include "denjoy/diffeo.hpp"

#include <cmath>
#include <stdexcept>

#include "denjoy/common.hpp"
#include "denjoy/kernels.hpp"
#include "denjoy/yoccoz.hpp"

namespace denjoy {

DiffeoAction::DiffeoAction(std::shared_ptr<const BlowupModel> model)
    : model_(std::move(model)) {
    const auto& m = *model_;
    int d = m.scheme().dim();
    target_.assign(static_cast<std::size_t>(2 * d),
                   std::vector<std::int32_t>(m.size(), -1));
    for (int axis = 0; axis < d; ++axis) {
        for (int sign = 0; sign < 2; ++sign) {
            auto& tab = target_[static_cast<std::size_t>(2 * axis + sign)];
            parallel_for(m.size(), [&](std::size_t i) {
                auto t = m.shifted_index(i, axis, sign == 1);
                if (t) tab[i] = static_cast<std::int32_t>(*t);
            });
        }
    }
}

double DiffeoAction::rotation(Generator s) const {
    double th = model_->action().theta.at(static_cast<std::size_t>(s.axis));
    return s.inverse ? wrap01(-th) : wrap01(th);
}

double DiffeoAction::value(Generator s, double x) const {
    const auto& m = *model_;
    x = wrap01(x);
    auto j = m.interval_at(x);
    if (j) {
        std::int32_t t = target_[static_cast<std::size_t>(dir_index(s))][*j];
        if (t >= 0) {
            double a = m.len_at(*j), b = m.len_at(static_cast<std::size_t>(t));
            YoccozMap phi{a, b, b / a};
            double u = std::min(std::max(x - m.a_at(*j), 0.0), a);
            return wrap01(m.a_at(static_cast<std::size_t>(t)) + phi.value(u));
        }
    }
    return m.position(wrap01(m.semiconjugacy(x) + rotation(s)));
}

double DiffeoAction::derivative(Generator s, double x) const {
    const auto& m = *model_;
    x = wrap01(x);
    auto j = m.interval_at(x);
    if (!j) return 1.0;
    std::int32_t t = target_[static_cast<std::size_t>(dir_index(s))][*j];
    if (t < 0) return 1.0;
    double a = m.len_at(*j);
    double R = m.len_at(static_cast<std::size_t>(t)) / a;
    double u = (x - m.a_at(*j)) / a;
    // rotation base: the b/(aR) prefactor is exactly 1
    return 1.0 - (1.0 - R) * kernels::bump1(R, u);
}

void DiffeoAction::derivative_batch(Generator s, std::span<const double> x,
                                    std::span<double> out) const {
    const auto& m = *model_;
    const auto& tab = target_[static_cast<std::size_t>(dir_index(s))];
    const std::size_t n = x.size();
    std::vector<double> R(n, 1.0), u(n, 0.5);
    for (std::size_t i = 0; i < n; ++i) {
        double xi = wrap01(x[i]);
        auto j = m.interval_at(xi);
        if (!j) continue;
        std::int32_t t = tab[*j];
        if (t < 0) continue;
        double a = m.len_at(*j);
        R[i] = m.len_at(static_cast<std::size_t>(t)) / a;
        u[i] = (xi - m.a_at(*j)) / a;
    }
    kernels::active().bump(R.data(), u.data(), out.data(), n);
    for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 - (1.0 - R[i]) * out[i];
}

double DiffeoAction::lift_iterate(Generator s, double x0, std::int64_t n) const {
    if (n < 0) throw std::invalid_argument("lift iterate count must be >= 0");
    double x = wrap01(x0);
    KahanSum disp;
    for (std::int64_t i = 0; i < n; ++i) {
        double y = value(s, x);
        double dx = y - x;
        if (dx < 0.0) dx += 1.0;
        disp.add(dx);
        x = y;
    }
    return x0 + disp.value();
}

double DiffeoAction::rotation_estimate(Generator s, double x0, std::int64_t n) const {
    if (n < 1) throw std::invalid_argument("rotation estimate needs n >= 1");
    return (lift_iterate(s, x0, n) - x0) / double(n);
}

}  // namespace denjoy
