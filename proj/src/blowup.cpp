#include "denjoy/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "denjoy/common.hpp"

namespace denjoy {

namespace {

std::int64_t ball_size(int d, int n) {
    std::int64_t total = 0;
    for (int i = 0; i <= n; ++i) total += spherical_growth(d, i);
    return total;
}

}  // namespace

std::span<const std::int32_t> BlowupModel::exponents_at(std::size_t i) const {
    return std::span(exps_).subspan(i * static_cast<std::size_t>(d_),
                                    static_cast<std::size_t>(d_));
}

GroupElement BlowupModel::element_at(std::size_t i) const {
    auto e = exponents_at(i);
    return GroupElement{{e.begin(), e.end()}};
}

BlowupModel BlowupModel::build(RotationAction action, LengthScheme scheme, BuildOptions opts) {
    BlowupModel m;
    m.d_ = scheme.dim();
    if (action.rank() != m.d_)
        throw std::invalid_argument("rotation vector rank does not match scheme dimension");
    if (opts.radius_cap < 4) throw std::invalid_argument("radius_cap must be >= 4");

    m.scale_ = scheme.normalization();

    // Truncation radius: smallest N with scale * tail_bound(N) <= tail_tol,
    // clipped by radius_cap and the interval budget. The achieved bracket is
    // reported either way.
    int radius;
    if (opts.force_radius > 0) {
        radius = opts.force_radius;
    } else {
        int hi = opts.radius_cap;
        while (hi > 8 && ball_size(m.d_, hi) > opts.max_intervals) hi = hi / 2;
        auto scaled_tail = [&](int r) { return m.scale_ * scheme.total_mass(r).tail_bound; };
        radius = hi;
        if (scaled_tail(hi) <= opts.tail_tol) {
            int lo = 8;
            while (lo < hi) {  // first radius meeting the budget
                int mid = lo + (hi - lo) / 2;
                if (scaled_tail(mid) <= opts.tail_tol)
                    hi = mid;
                else
                    lo = mid + 1;
            }
            radius = lo;
        }
    }
    m.radius_ = radius;
    m.raw_mass_ = scheme.total_mass(radius);
    m.action_ = std::move(action);
    m.opts_ = opts;

    const std::size_t count = static_cast<std::size_t>(ball_size(m.d_, radius));
    std::vector<double> base(static_cast<std::size_t>(radius) + 1);
    scheme.length_at_norm_batch(0, radius, base);

    std::vector<std::int32_t> exps;
    std::vector<double> pts, lens;
    exps.reserve(count * m.d_);
    pts.reserve(count);
    lens.reserve(count);
    for (int n = 0; n <= radius; ++n) {
        double bl = m.scale_ * base[static_cast<std::size_t>(n)];
        for_each_sphere(m.d_, n, [&](std::span<const std::int32_t> g) {
            exps.insert(exps.end(), g.begin(), g.end());
            pts.push_back(m.action_.orbit_point(g));
            lens.push_back(scheme.has_weight()
                               ? m.scale_ * scheme.length(GroupElement{{g.begin(), g.end()}})
                               : bl);
        });
    }

    // circle order, exponent-lex tiebreak for determinism
    std::vector<std::uint32_t> perm(pts.size());
    std::iota(perm.begin(), perm.end(), 0u);
    auto lex_less = [&](std::uint32_t x, std::uint32_t y) {
        const std::int32_t* ex = exps.data() + std::size_t(x) * m.d_;
        const std::int32_t* ey = exps.data() + std::size_t(y) * m.d_;
        return std::lexicographical_compare(ex, ex + m.d_, ey, ey + m.d_);
    };
    std::sort(perm.begin(), perm.end(), [&](std::uint32_t x, std::uint32_t y) {
        if (pts[x] != pts[y]) return pts[x] < pts[y];
        return lex_less(x, y);
    });

    m.exps_.resize(exps.size());
    m.pts_.resize(pts.size());
    m.lens_.resize(lens.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        std::uint32_t src = perm[i];
        m.pts_[i] = pts[src];
        m.lens_[i] = lens[src];
        std::copy_n(exps.data() + std::size_t(src) * m.d_, m.d_,
                    m.exps_.data() + i * m.d_);
    }
    for (std::size_t i = 1; i < m.pts_.size(); ++i)
        if (m.pts_[i] - m.pts_[i - 1] < 1e-15) m.dup_flag_ = true;

    KahanSum run;
    m.prefix_.resize(m.pts_.size() + 1);
    for (std::size_t i = 0; i < m.lens_.size(); ++i) {
        m.prefix_[i] = run.value();
        run.add(m.lens_[i]);
    }
    m.prefix_.back() = run.value();
    m.L_ = run.value();
    if (!(m.L_ < 0.999999))
        throw InadmissibleScheme("blown mass " + std::to_string(m.L_) +
                                     " leaves no room for the minimal set",
                                 IntegrabilityReport{});

    m.a_.resize(m.pts_.size());
    for (std::size_t i = 0; i < m.pts_.size(); ++i)
        m.a_[i] = (1.0 - m.L_) * m.pts_[i] + m.prefix_[i];

    m.lexperm_.resize(perm.size());
    std::iota(m.lexperm_.begin(), m.lexperm_.end(), 0u);
    std::sort(m.lexperm_.begin(), m.lexperm_.end(), [&](std::uint32_t x, std::uint32_t y) {
        const std::int32_t* ex = m.exps_.data() + std::size_t(x) * m.d_;
        const std::int32_t* ey = m.exps_.data() + std::size_t(y) * m.d_;
        return std::lexicographical_compare(ex, ex + m.d_, ey, ey + m.d_);
    });

    m.boundary_defect_ = m.scale_ * scheme.length_at_norm(radius + 1);
    m.scheme_ = std::move(scheme);
    return m;
}

double BlowupModel::position(double z) const {
    z = wrap01(z);
    auto it = std::lower_bound(pts_.begin(), pts_.end(), z);
    std::size_t r = static_cast<std::size_t>(it - pts_.begin());
    return (1.0 - L_) * z + prefix_[r];
}

std::optional<std::size_t> BlowupModel::interval_at(double x) const {
    x = wrap01(x);
    auto it = std::upper_bound(a_.begin(), a_.end(), x);
    if (it == a_.begin()) return std::nullopt;  // cannot happen: a_[0] == 0
    std::size_t j = static_cast<std::size_t>(it - a_.begin()) - 1;
    if (x <= a_[j] + lens_[j]) return j;
    return std::nullopt;
}

bool BlowupModel::near_interval_endpoint(double x, double eps) const {
    x = wrap01(x);
    auto it = std::upper_bound(a_.begin(), a_.end(), x + eps);
    std::size_t j = it == a_.begin() ? 0 : static_cast<std::size_t>(it - a_.begin()) - 1;
    for (int back = 0; back < 2; ++back) {
        if (std::fabs(x - a_[j]) <= eps || std::fabs(x - (a_[j] + lens_[j])) <= eps)
            return true;
        if (j == 0) break;
        --j;
    }
    return false;
}

double BlowupModel::semiconjugacy(double x) const {
    x = wrap01(x);
    auto it = std::upper_bound(a_.begin(), a_.end(), x);
    if (it == a_.begin()) return pts_[0];
    std::size_t j = static_cast<std::size_t>(it - a_.begin()) - 1;
    double b = a_[j] + lens_[j];
    if (x <= b) return pts_[j];
    // clamp at the next orbit point so rounding cannot break monotonicity
    double next = j + 1 < pts_.size() ? pts_[j + 1] : 1.0;
    return std::min(pts_[j] + (x - b) / (1.0 - L_), next);
}

std::optional<std::size_t> BlowupModel::index_of(std::span<const std::int32_t> exps) const {
    if (exps.size() != static_cast<std::size_t>(d_)) return std::nullopt;
    auto it = std::lower_bound(lexperm_.begin(), lexperm_.end(), exps,
                               [&](std::uint32_t x, std::span<const std::int32_t> key) {
                                   const std::int32_t* ex = exps_.data() + std::size_t(x) * d_;
                                   return std::lexicographical_compare(ex, ex + d_, key.begin(),
                                                                       key.end());
                               });
    if (it == lexperm_.end()) return std::nullopt;
    auto e = exponents_at(*it);
    if (!std::equal(e.begin(), e.end(), exps.begin())) return std::nullopt;
    return static_cast<std::size_t>(*it);
}

std::optional<std::size_t> BlowupModel::shifted_index(std::size_t i, int axis,
                                                      bool inverse) const {
    std::vector<std::int32_t> e(exponents_at(i).begin(), exponents_at(i).end());
    e[static_cast<std::size_t>(axis)] += inverse ? -1 : 1;
    return index_of(e);
}

}  // namespace denjoy
