#pragma once

#include "carleson_lab/domains.hpp"

namespace clab {

/// Polydisk {z : |<z - center, e_i>| <= radius_i} in a unitary frame.
struct Polydisk {
    CVec center;
    CMat frame;  // columns e_1 ... e_n
    Eigen::VectorXd radii;

    /// Coordinates of z in the frame, centered.
    CVec local(const CVec& z) const { return frame.adjoint() * (z - center); }
    bool contains(const CVec& z) const;
    /// max_i |<z - center, e_i>| / radius_i; z is inside iff this is <= 1.
    double gauge(const CVec& z) const;
    /// Lebesgue volume normalized so that the unit ball of C^n has volume 1.
    double volume() const;
    Polydisk scaled(double lambda) const;
};

/// Greedy minimal basis at an interior point.
struct MinimalFrame {
    CVec center;
    CMat basis;
    Eigen::VectorXd sigma;
    /// False when tied boundary projections spanned different complex lines;
    /// the frame is then a tie-break choice.
    bool unique = true;

    Polydisk polydisk() const { return {center, basis, sigma}; }
    double sigma_product() const { return sigma.prod(); }
};

MinimalFrame minimal_frame(const DomainSpec& spec, const CVec& q);

/// McNeal polydisk P(q, eps): the greedy construction against {r = r(q) + eps}.
Polydisk mcneal_radii(const DomainSpec& spec, const CVec& q, double eps);

bool polydisk_contains(const Polydisk& p, const CVec& z);

Polydisk scale_polydisk(const Polydisk& p, double lambda);

/// inf{eps > 0 : omega in P(z, eps)}, by bisection to 1e-8.
double entry_scale(const DomainSpec& spec, const CVec& z, const CVec& omega);

}  // namespace clab
