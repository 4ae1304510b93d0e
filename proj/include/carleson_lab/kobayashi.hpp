#pragma once

#include <vector>

#include "carleson_lab/geometry.hpp"

namespace clab {

/// Two-sided bracket of the infinitesimal Kobayashi metric k_D(z; v).
struct MetricBound {
    double lower = 0.0;
    double upper = 0.0;
};

/// Polydisk bracket of the Kobayashi ball {tanh d_K(center, .) < radius}:
/// inner = (r/n) D^n(z, sigma), outer = (2r/(1-r)) D^n(z, sigma).
struct BallSandwich {
    CVec center;
    double radius = 0.0;
    Polydisk inner;
    Polydisk outer;
    bool frame_unique = true;
};

enum class Membership { Inside, Outside, Uncertain };

const char* to_string(Membership m);

/// |v| / (2 delta(z; v)) <= k_D(z; v) <= |v| / delta(z; v), where delta(z; v)
/// is the boundary distance inside the complex line through z spanned by v.
MetricBound metric_bounds(const DomainSpec& spec, const CVec& z, const CVec& v);

/// Closed-form Kobayashi metric on the disk and ball.
double exact_metric_model(const DomainSpec& spec, const CVec& z, const CVec& v);

/// Closed-form Kobayashi distance on the disk and ball; CapabilityError elsewhere.
double exact_distance_model(const DomainSpec& spec, const CVec& z, const CVec& w);

/// The involutive automorphism of the unit ball exchanging a and 0.
CVec ball_automorphism(const CVec& a, const CVec& w);

/// tanh of the Kobayashi distance on the disk and ball (the pseudohyperbolic distance).
double pseudo_distance_model(const DomainSpec& spec, const CVec& z, const CVec& w);

/// Upper bound for d_K(z, w): the length of an optimized piecewise-linear path
/// measured with the upper metric. `refinement` L gives 2^L - 1 free knots;
/// the result is nonincreasing in L.
double distance_upper(const DomainSpec& spec, const CVec& z, const CVec& w, int refinement = 0);

BallSandwich ball_sandwich(const DomainSpec& spec, const CVec& z0, double r);
BallSandwich ball_sandwich(const MinimalFrame& frame, double r);

Membership ball_membership(const DomainSpec& spec, const CVec& z0, double r, const CVec& z);

/// Membership against a precomputed frame at the center; `refinement` is
/// passed to distance_upper when the sandwich is inconclusive.
Membership ball_membership(const DomainSpec& spec, const MinimalFrame& frame0, double r, const CVec& z,
                           int refinement = 0);

struct LogEnvelope {
    double c1 = 0.0;  // min of d_K(z0, z) + log(delta(z)) / 2
    double c2 = 0.0;  // max of the same residual
    /// Only the upper constant is certified when distances are upper bounds.
    bool lower_certified = true;
};

LogEnvelope calibrate_log_envelope(const DomainSpec& spec, const CVec& z0, const std::vector<CVec>& samples);

}  // namespace clab
