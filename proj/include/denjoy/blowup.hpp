#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "denjoy/group_orbit.hpp"
#include "denjoy/lengths.hpp"

namespace denjoy {

struct BuildOptions {
    double tail_tol = 1e-10;             // requested unindexed-mass bound
    int radius_cap = 200000;             // hard cap on the truncation radius
    std::int64_t max_intervals = 4000000;
    double tol = 1e-12;                  // numeric budget attached to queries
    int force_radius = 0;                // > 0: bypass the radius search
};

/// Blow-up of the rotation orbit truncated to word norm <= N.
///
/// The model is the exact measure (1-L) dm + sum of length atoms over the
/// indexed orbit points, so interval positions, disjointness and circular
/// order are exact up to floating point. The distance to the untruncated
/// construction is tracked separately: `mass_report` brackets the full mass
/// and `boundary_defect` bounds the length of the first unindexed interval.
class BlowupModel {
public:
    static BlowupModel build(RotationAction action, LengthScheme scheme, BuildOptions opts = {});

    const RotationAction& action() const { return action_; }
    const LengthScheme& scheme() const { return *scheme_; }
    const BuildOptions& options() const { return opts_; }

    int radius() const { return radius_; }
    std::size_t size() const { return pts_.size(); }
    double mass() const { return L_; }          // indexed (blown) mass
    double scale() const { return scale_; }     // normalization applied to lengths
    const MassReport& mass_report() const { return raw_mass_; }
    double tol() const { return opts_.tol; }
    double boundary_defect() const { return boundary_defect_; }
    bool duplicate_points_flagged() const { return dup_flag_; }

    // interval table in circle order
    double point_at(std::size_t i) const { return pts_[i]; }
    double len_at(std::size_t i) const { return lens_[i]; }
    double a_at(std::size_t i) const { return a_[i]; }
    double b_at(std::size_t i) const { return a_[i] + lens_[i]; }
    std::span<const std::int32_t> exponents_at(std::size_t i) const;
    GroupElement element_at(std::size_t i) const;

    /// mu[0, z) for z in [0, 1); equals a_y at indexed orbit points.
    double position(double z) const;
    /// H(x) = sup{z : mu[0,z) <= x}; collapses each interval to its point.
    double semiconjugacy(double x) const;
    /// Indexed interval containing x ([a, a+len], left-endpoint convention),
    /// or nothing when x lies in the complement.
    std::optional<std::size_t> interval_at(double x) const;
    /// True when x lies within eps of an interval endpoint, where the
    /// semiconjugacy cannot numerically separate the two endpoint preimages.
    bool near_interval_endpoint(double x, double eps) const;

    std::optional<std::size_t> index_of(std::span<const std::int32_t> exps) const;
    /// Table index of the generator translate of interval i, if indexed.
    std::optional<std::size_t> shifted_index(std::size_t i, int axis, bool inverse) const;

private:
    BlowupModel() = default;

    RotationAction action_;
    std::optional<LengthScheme> scheme_;
    BuildOptions opts_;
    int radius_ = 0;
    int d_ = 1;
    double L_ = 0.0;
    double scale_ = 1.0;
    double boundary_defect_ = 0.0;
    MassReport raw_mass_;
    bool dup_flag_ = false;

    std::vector<std::int32_t> exps_;  // d per interval, circle order
    std::vector<double> pts_;
    std::vector<double> lens_;
    std::vector<double> prefix_;      // prefix_[i] = sum of lens_[0..i)
    std::vector<double> a_;
    std::vector<std::uint32_t> lexperm_;
};

}  // namespace denjoy
