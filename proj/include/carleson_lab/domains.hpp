#pragma once

#include <optional>
#include <vector>

#include "carleson_lab/types.hpp"

namespace clab {

enum class DomainKind { UnitDisk, UnitBall, ComplexEllipsoid, ConvexPolynomial };

/// Defining-function form for the disk and ball: r = |z|^2 - 1 or r = |z| - 1.
enum class RadialForm { Squared, Norm };

/// One monomial c * prod_i x_i^{p_i} in the real coordinates x of C^n.
struct PolyTerm {
    double coeff = 0.0;
    std::vector<int> powers;  // length 2n
};

/// A bounded convex domain {r < 0} given by a global smooth convex defining
/// function. Immutable after construction; constructors validate boundedness
/// and convexity by sampling the bounding box.
class DomainSpec {
public:
    static DomainSpec unit_disk(std::optional<double> collar = std::nullopt,
                                RadialForm form = RadialForm::Squared);
    static DomainSpec unit_ball(int n, std::optional<double> collar = std::nullopt,
                                RadialForm form = RadialForm::Squared);
    /// sum_j (|z_j| / a_j)^{2 m_j} < 1
    static DomainSpec ellipsoid(std::vector<int> exponents, std::vector<double> semi_axes,
                                std::optional<double> collar = std::nullopt);
    static DomainSpec convex_polynomial(int n, std::vector<PolyTerm> terms, double box_half_width,
                                        CVec anchor, std::optional<double> collar = std::nullopt);

    DomainKind kind() const noexcept { return kind_; }
    int dimension() const noexcept { return n_; }
    double collar_width() const noexcept { return collar_; }
    double box_half_width() const noexcept { return box_; }
    const CVec& anchor() const noexcept { return anchor_; }
    RadialForm radial_form() const noexcept { return form_; }
    const std::vector<int>& exponents() const noexcept { return exponents_; }
    const std::vector<double>& semi_axes() const noexcept { return semi_axes_; }
    const std::vector<PolyTerm>& terms() const noexcept { return terms_; }

    /// Monomials are orthogonal: disk, ball, complex ellipsoid.
    bool is_reinhardt() const noexcept { return kind_ != DomainKind::ConvexPolynomial; }
    /// Disk and ball carry closed-form Kobayashi distances.
    bool has_exact_metric() const noexcept {
        return kind_ == DomainKind::UnitDisk || kind_ == DomainKind::UnitBall;
    }
    /// D'Angelo type at the boundary point on each coordinate axis (2 m_i); declared, not inferred.
    std::vector<int> axis_boundary_types() const;

    std::string kind_name() const;

    double value(const RVec& x) const;
    double value(const CVec& z) const { return value(to_real(z)); }
    RVec gradient(const RVec& x) const;
    bool in_box(const RVec& x) const;

private:
    DomainSpec() = default;
    void validate_and_finish(std::optional<double> collar);

    DomainKind kind_ = DomainKind::UnitDisk;
    int n_ = 1;
    RadialForm form_ = RadialForm::Squared;
    std::vector<int> exponents_;
    std::vector<double> semi_axes_;
    std::vector<PolyTerm> terms_;
    double box_ = 2.0;
    double collar_ = 0.2;
    CVec anchor_;
};

/// Nearest boundary point of a level set {r = level}, with tie information.
struct BoundaryProjection {
    double distance = 0.0;
    CVec point;
    CVec direction;  // unit vector from the base point to `point`
    /// Unit directions of all minimizers that tied with the chosen one.
    std::vector<CVec> tied_directions;
};

/// r(z); r(z) < 0 iff z is in D.
double defining_value(const DomainSpec& spec, const CVec& z);

/// Euclidean distance from an interior point to the boundary.
double boundary_distance(const DomainSpec& spec, const CVec& z);

/// Full boundary projection (distance, foot point, ties).
BoundaryProjection project_to_boundary(const DomainSpec& spec, const CVec& z);

/// Distance from z to the boundary inside the complex line z + C v.
double line_boundary_distance(const DomainSpec& spec, const CVec& z, const CVec& v);

bool in_collar(const DomainSpec& spec, const CVec& z);

// Level-set search primitives shared with the geometry module.
namespace detail {

/// Smallest t > 0 with r(x0 + t u) = level; throws NumericError when the
/// ray leaves the bounding box first.
double ray_root(const DomainSpec& spec, const RVec& x0, const RVec& u, double level);

/// Minimizes the level-set distance over real unit directions in the complex
/// subspace spanned by the orthonormal columns of `basis`.
BoundaryProjection minimize_over_slice(const DomainSpec& spec, const CVec& q, double level,
                                       const CMat& basis);

}  // namespace detail

}  // namespace clab
