#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "denjoy/group_orbit.hpp"
#include "denjoy/modulus.hpp"

namespace denjoy {

enum class SchemeKind { herman_v, nu, alpha_inv };

/// Bracketing of the total interval mass: the full sum L lies in
/// (partial_sum, partial_sum + tail_bound]. The tail bound comes from the
/// integral comparison against the exact Z^d sphere counts, with the slack
/// factor recorded.
struct MassReport {
    double partial_sum = 0.0;
    double tail_bound = 0.0;
    int radius = 0;
    double slack = 2.0;
};

/// Raised when a scheme's mass series fails its own integrability test.
struct InadmissibleScheme : std::runtime_error {
    IntegrabilityReport report;
    InadmissibleScheme(const std::string& msg, IntegrabilityReport r)
        : std::runtime_error(msg), report(std::move(r)) {}
};

/// Interval-length schemes over orbits of Z^d:
///   herman_v:  l_i = 1/v(|i| + K),      v(x) = x^2 alpha(1/x), d = 1 only
///   nu:        l_g = 1/nu(|g| + k),     nu(x) = x^(d+1) alpha(1/x)^d
///   alpha_inv: l_g = alpha^{-1}(1/(|g| + k))
/// Values are the raw scheme formulas; blow-up models apply `normalization`
/// on top so the blown mass stays below 1.
class LengthScheme {
public:
    using Weight = std::function<double(std::span<const std::int32_t>)>;

    /// Validates parameters. For herman_v without an explicit shift, K
    /// defaults to max(2, 1/alpha(x*)) and doubles until the mass bound is
    /// at most 1.
    static LengthScheme make(SchemeKind kind, Modulus alpha, int d, int k,
                             std::optional<double> shift = std::nullopt,
                             Weight weight = nullptr);

    static SchemeKind parse_kind(const std::string& name);
    static const char* kind_name(SchemeKind k);

    SchemeKind kind() const { return kind_; }
    const Modulus& alpha() const { return alpha_; }
    int dim() const { return d_; }
    int index() const { return k_; }
    double shift() const { return shift_; }
    bool has_weight() const { return static_cast<bool>(weight_); }

    /// x^(d+1) alpha(1/x)^d; equals the herman_v decay v at d = 1.
    double decay(double x) const;

    /// Base length for word norm n (weight-free).
    double length_at_norm(int n) const;
    void length_at_norm_batch(int n_lo, int n_hi, std::span<double> out) const;
    double length(const GroupElement& g) const;

    /// Smallest blow-up index at which the scheme formula is well defined.
    int min_index() const;

    /// Global factor applied to blown lengths so that the model mass is
    /// below 1 for every k >= min_index; 1 for herman_v (K-doubling covers it).
    double normalization() const;

    /// Raw mass bracket at the scheme's own index.
    MassReport total_mass(int radius) const;

    /// A = |1 - l(to)/l(from)| / alpha(l(from)) for a generator step.
    double fundamental_ratio_norms(int n_from, int n_to) const;
    double fundamental_ratio(const GroupElement& g, const GroupElement& sg) const;

    struct SupRatio {
        double value = 0.0;
        int arg_norm = 0;
        int direction = +1;
    };
    /// max over both step directions and norms <= radius.
    SupRatio sup_fundamental_ratio(int radius) const;

private:
    LengthScheme() = default;
    double mass_partial(double kk, int radius) const;
    double mass_tail(double kk, int radius) const;

    SchemeKind kind_ = SchemeKind::nu;
    Modulus alpha_ = Modulus::power(1.0);
    int d_ = 1;
    int k_ = 1;
    double shift_ = 2.0;
    Weight weight_;
    double normalization_ = 1.0;  // fixed at construction
};

}  // namespace denjoy
