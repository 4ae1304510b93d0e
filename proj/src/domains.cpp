#include "carleson_lab/domains.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <random>
#include <sstream>

namespace clab {

namespace {

constexpr int kProjectionStarts = 8;
constexpr int kPhaseSamples = 64;
constexpr double kTieRelTol = 1e-7;

double ipow(double x, int p) {
    double r = 1.0;
    for (int k = 0; k < p; ++k) r *= x;
    return r;
}

}  // namespace

DomainSpec DomainSpec::unit_disk(std::optional<double> collar, RadialForm form) {
    DomainSpec d = unit_ball(1, collar, form);
    d.kind_ = DomainKind::UnitDisk;
    return d;
}

DomainSpec DomainSpec::unit_ball(int n, std::optional<double> collar, RadialForm form) {
    if (n < 1) throw ConfigError("unit_ball: dimension must be >= 1");
    DomainSpec d;
    d.kind_ = DomainKind::UnitBall;
    d.n_ = n;
    d.form_ = form;
    d.exponents_.assign(n, 1);
    d.semi_axes_.assign(n, 1.0);
    d.box_ = 2.0;
    d.anchor_ = CVec::Zero(n);
    d.validate_and_finish(collar);
    return d;
}

DomainSpec DomainSpec::ellipsoid(std::vector<int> exponents, std::vector<double> semi_axes,
                                 std::optional<double> collar) {
    if (exponents.empty() || exponents.size() != semi_axes.size())
        throw ConfigError("ellipsoid: exponents and semi_axes must be non-empty and of equal length");
    for (int m : exponents)
        if (m < 1) throw ConfigError("ellipsoid: exponents must be positive integers");
    for (double a : semi_axes)
        if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("ellipsoid: semi-axes must be positive");
    DomainSpec d;
    d.kind_ = DomainKind::ComplexEllipsoid;
    d.n_ = static_cast<int>(exponents.size());
    d.exponents_ = std::move(exponents);
    d.semi_axes_ = std::move(semi_axes);
    d.box_ = 2.0 * *std::max_element(d.semi_axes_.begin(), d.semi_axes_.end());
    d.anchor_ = CVec::Zero(d.n_);
    d.validate_and_finish(collar);
    return d;
}

DomainSpec DomainSpec::convex_polynomial(int n, std::vector<PolyTerm> terms, double box_half_width,
                                         CVec anchor, std::optional<double> collar) {
    if (n < 1) throw ConfigError("convex_polynomial: dimension must be >= 1");
    if (!(box_half_width > 0.0)) throw ConfigError("convex_polynomial: box must be positive");
    if (anchor.size() != n) throw ConfigError("convex_polynomial: anchor dimension mismatch");
    for (const auto& t : terms) {
        if (static_cast<int>(t.powers.size()) != 2 * n)
            throw ConfigError("convex_polynomial: each term needs 2n powers");
        for (int p : t.powers)
            if (p < 0) throw ConfigError("convex_polynomial: negative power");
    }
    DomainSpec d;
    d.kind_ = DomainKind::ConvexPolynomial;
    d.n_ = n;
    d.terms_ = std::move(terms);
    d.box_ = box_half_width;
    d.anchor_ = std::move(anchor);
    d.validate_and_finish(collar);
    return d;
}

void DomainSpec::validate_and_finish(std::optional<double> collar) {
    require_finite(anchor_, "DomainSpec anchor");
    if (!(value(anchor_) < 0.0)) throw ValidationError("DomainSpec: defining function not negative at the anchor");

    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unif(-box_, box_);
    const int dim = 2 * n_;
    // Boundedness: r > 0 on the faces of the box.
    for (int s = 0; s < 1000; ++s) {
        RVec x(dim);
        for (int i = 0; i < dim; ++i) x(i) = unif(rng);
        int face = s % dim;
        x(face) = (s / dim) % 2 == 0 ? box_ : -box_;
        if (!(value(x) > 0.0)) throw ValidationError("DomainSpec: sublevel set {r < 0} reaches the bounding box");
    }
    // Convexity along sampled segments.
    for (int s = 0; s < 1000; ++s) {
        RVec a(dim), b(dim);
        for (int i = 0; i < dim; ++i) {
            a(i) = unif(rng);
            b(i) = unif(rng);
        }
        double ra = value(a), rb = value(b), rm = value(RVec(0.5 * (a + b)));
        double scale = 1.0 + std::abs(ra) + std::abs(rb);
        if (rm > std::max(ra, rb) + 1e-12 * scale)
            throw ValidationError("DomainSpec: defining function fails the sampled convexity test");
    }

    if (collar) {
        if (!(*collar > 0.0)) throw ConfigError("DomainSpec: collar width must be positive");
        collar_ = *collar;
    } else {
        collar_ = 1.0;  // provisional, boundary_distance does not read it
        collar_ = 0.2 * boundary_distance(*this, anchor_);
    }
}

std::vector<int> DomainSpec::axis_boundary_types() const {
    std::vector<int> t;
    for (int m : exponents_) t.push_back(2 * m);
    return t;
}

std::string DomainSpec::kind_name() const {
    switch (kind_) {
        case DomainKind::UnitDisk: return "disk";
        case DomainKind::UnitBall: return "ball";
        case DomainKind::ComplexEllipsoid: return "ellipsoid";
        case DomainKind::ConvexPolynomial: return "polynomial";
    }
    return "unknown";
}

double DomainSpec::value(const RVec& x) const {
    switch (kind_) {
        case DomainKind::UnitDisk:
        case DomainKind::UnitBall: {
            double s = x.squaredNorm();
            return form_ == RadialForm::Squared ? s - 1.0 : std::sqrt(s) - 1.0;
        }
        case DomainKind::ComplexEllipsoid: {
            double acc = 0.0;
            for (int j = 0; j < n_; ++j) {
                double a2 = semi_axes_[j] * semi_axes_[j];
                double s = (x(2 * j) * x(2 * j) + x(2 * j + 1) * x(2 * j + 1)) / a2;
                acc += ipow(s, exponents_[j]);
            }
            return acc - 1.0;
        }
        case DomainKind::ConvexPolynomial: {
            double acc = 0.0;
            for (const auto& t : terms_) {
                double m = t.coeff;
                for (int i = 0; i < 2 * n_; ++i) m *= ipow(x(i), t.powers[i]);
                acc += m;
            }
            return acc;
        }
    }
    return 0.0;
}

RVec DomainSpec::gradient(const RVec& x) const {
    RVec g = RVec::Zero(x.size());
    switch (kind_) {
        case DomainKind::UnitDisk:
        case DomainKind::UnitBall: {
            if (form_ == RadialForm::Squared) return 2.0 * x;
            double nrm = x.norm();
            return nrm > 0.0 ? RVec(x / nrm) : g;
        }
        case DomainKind::ComplexEllipsoid: {
            for (int j = 0; j < n_; ++j) {
                double a2 = semi_axes_[j] * semi_axes_[j];
                double s = (x(2 * j) * x(2 * j) + x(2 * j + 1) * x(2 * j + 1)) / a2;
                int m = exponents_[j];
                double c = m * ipow(s, m - 1) * 2.0 / a2;
                g(2 * j) = c * x(2 * j);
                g(2 * j + 1) = c * x(2 * j + 1);
            }
            return g;
        }
        case DomainKind::ConvexPolynomial: {
            for (const auto& t : terms_) {
                for (int i = 0; i < 2 * n_; ++i) {
                    if (t.powers[i] == 0) continue;
                    double m = t.coeff * t.powers[i];
                    for (int k = 0; k < 2 * n_; ++k)
                        m *= ipow(x(k), k == i ? t.powers[k] - 1 : t.powers[k]);
                    g(i) += m;
                }
            }
            return g;
        }
    }
    return g;
}

bool DomainSpec::in_box(const RVec& x) const { return x.cwiseAbs().maxCoeff() <= box_; }

double defining_value(const DomainSpec& spec, const CVec& z) {
    require_finite(z, "defining_value");
    if (z.size() != spec.dimension()) throw InputDomainError("defining_value: dimension mismatch");
    RVec x = to_real(z);
    if (!spec.in_box(x)) throw PreconditionError("defining_value: point outside the bounding box");
    return spec.value(x);
}

namespace detail {

double ray_root(const DomainSpec& spec, const RVec& x0, const RVec& u, double level) {
    auto g = [&](double t) { return spec.value(RVec(x0 + t * u)) - level; };
    if (!(g(0.0) < 0.0)) throw PreconditionError("ray_root: base point not inside the level set");
    double lo = 0.0;
    double hi = 1e-2 * spec.box_half_width();
    const double limit = 4.0 * spec.box_half_width() * std::sqrt(2.0 * spec.dimension());
    while (g(hi) <= 0.0) {
        if (!spec.in_box(RVec(x0 + hi * u)) || hi > limit)
            throw NumericError("ray_root: level set escapes the bounding box (try a smaller epsilon)");
        lo = hi;
        hi *= 2.0;
    }
    boost::uintmax_t iters = 200;
    auto [a, b] = boost::math::tools::toms748_solve(
        g, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (a + b);
}

namespace {

// Real 2n x 2m matrix representing the complex basis acting on real coefficients.
Eigen::MatrixXd real_basis(const CMat& basis) {
    const auto n = basis.rows(), m = basis.cols();
    Eigen::MatrixXd br(2 * n, 2 * m);
    for (Eigen::Index k = 0; k < m; ++k) {
        br.col(2 * k) = to_real(basis.col(k));
        br.col(2 * k + 1) = to_real(CVec(Complex(0, 1) * basis.col(k)));
    }
    return br;
}

struct LocalMin {
    double t;
    RVec y;
};

LocalMin descend(const DomainSpec& spec, const RVec& x0, double level, const Eigen::MatrixXd& br,
                 RVec y) {
    y.normalize();
    auto eval = [&](const RVec& yy) { return ray_root(spec, x0, RVec(br * yy), level); };
    double t = eval(y);
    double step_angle = 0.5;
    for (int it = 0; it < 4000; ++it) {
        RVec u = br * y;
        RVec grad_r = spec.gradient(RVec(x0 + t * u));
        double dn = grad_r.dot(u);
        if (!(dn > 0.0)) break;
        RVec gu = -t * grad_r / dn;
        RVec gy = br.transpose() * gu;
        gy -= gy.dot(y) * y;
        double gnorm = gy.norm();
        if (gnorm <= 1e-13 * t) break;
        RVec dir = -gy / gnorm;
        bool improved = false;
        while (step_angle > 1e-13) {
            RVec cand = (y * std::cos(step_angle) + dir * std::sin(step_angle)).normalized();
            double tc = eval(cand);
            if (tc < t) {
                y = cand;
                t = tc;
                improved = true;
                step_angle = std::min(1.0, step_angle * 2.0);
                break;
            }
            step_angle *= 0.5;
        }
        if (!improved) break;
    }
    return {t, y};
}

BoundaryProjection pick(std::vector<std::pair<double, CVec>> cands, const CVec& q) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : cands) best = std::min(best, c.first);
    BoundaryProjection out;
    bool have = false;
    for (const auto& [t, u] : cands) {
        if (t > best * (1.0 + kTieRelTol)) continue;
        CVec p = q + t * u;
        out.tied_directions.push_back(u);
        if (!have || lex_less(out.point, p)) {
            out.point = p;
            out.direction = u;
            out.distance = t;
            have = true;
        }
    }
    out.distance = best;
    return out;
}

BoundaryProjection minimize_over_line(const DomainSpec& spec, const CVec& q, double level,
                                      const CVec& v) {
    RVec x0 = to_real(q);
    auto t_at = [&](double theta) {
        return ray_root(spec, x0, to_real(CVec(std::polar(1.0, theta) * v)), level);
    };
    std::vector<double> ts(kPhaseSamples);
    const double h = 2.0 * kPi / kPhaseSamples;
    for (int k = 0; k < kPhaseSamples; ++k) ts[k] = t_at(k * h);
    double tmin = *std::min_element(ts.begin(), ts.end());
    double tmax = *std::max_element(ts.begin(), ts.end());

    std::vector<std::pair<double, CVec>> cands;
    if (tmax - tmin <= kTieRelTol * tmin) {
        // Rotationally symmetric slice.
        for (int k = 0; k < kPhaseSamples; ++k) cands.emplace_back(ts[k], std::polar(1.0, k * h) * v);
        return pick(std::move(cands), q);
    }
    for (int k = 0; k < kPhaseSamples; ++k) {
        double prev = ts[(k + kPhaseSamples - 1) % kPhaseSamples];
        double next = ts[(k + 1) % kPhaseSamples];
        if (!(ts[k] <= prev && ts[k] <= next)) continue;
        if (ts[k] > tmin * (1.0 + 1e-3) + 1e-14) continue;
        auto [theta, t] = boost::math::tools::brent_find_minima(t_at, (k - 1) * h, (k + 1) * h, 40);
        cands.emplace_back(t, std::polar(1.0, theta) * v);
    }
    return pick(std::move(cands), q);
}

}  // namespace

BoundaryProjection minimize_over_slice(const DomainSpec& spec, const CVec& q, double level,
                                       const CMat& basis) {
    if (basis.cols() == 1) return minimize_over_line(spec, q, level, CVec(basis.col(0)));

    RVec x0 = to_real(q);
    Eigen::MatrixXd br = real_basis(basis);
    const auto dim = br.cols();

    std::vector<RVec> starts;
    RVec g = br.transpose() * spec.gradient(x0);
    if (g.norm() > 1e-12) starts.push_back(g.normalized());
    for (Eigen::Index k = 0; k < dim && static_cast<int>(starts.size()) < kProjectionStarts; ++k)
        starts.push_back(RVec::Unit(dim, k));
    for (Eigen::Index k = 0; k < dim && static_cast<int>(starts.size()) < kProjectionStarts; ++k)
        starts.push_back(-RVec::Unit(dim, k));
    std::mt19937_64 rng(0xfeed);
    std::normal_distribution<double> gauss;
    while (static_cast<int>(starts.size()) < kProjectionStarts) {
        RVec y(dim);
        for (Eigen::Index i = 0; i < dim; ++i) y(i) = gauss(rng);
        starts.push_back(y.normalized());
    }

    std::vector<std::pair<double, CVec>> cands;
    for (const auto& s : starts) {
        LocalMin lm = descend(spec, x0, level, br, s);
        cands.emplace_back(lm.t, to_complex(RVec(br * lm.y)));
    }
    return pick(std::move(cands), q);
}

}  // namespace detail

BoundaryProjection project_to_boundary(const DomainSpec& spec, const CVec& z) {
    double rz = defining_value(spec, z);
    if (!(rz < 0.0)) throw PreconditionError("boundary_distance: point is not inside the domain");
    return detail::minimize_over_slice(spec, z, 0.0, CMat::Identity(spec.dimension(), spec.dimension()));
}

double boundary_distance(const DomainSpec& spec, const CVec& z) {
    if (spec.has_exact_metric()) {
        // Radial symmetry: the foot point is z / |z|.
        if (!(defining_value(spec, z) < 0.0))
            throw PreconditionError("boundary_distance: point is not inside the domain");
        return 1.0 - z.norm();
    }
    return project_to_boundary(spec, z).distance;
}

double line_boundary_distance(const DomainSpec& spec, const CVec& z, const CVec& v) {
    double rz = defining_value(spec, z);
    if (!(rz < 0.0)) throw PreconditionError("line_boundary_distance: point is not inside the domain");
    require_finite(v, "line_boundary_distance");
    double nv = v.norm();
    if (std::abs(nv - 1.0) > 1e-9) throw PreconditionError("line_boundary_distance: direction must be a unit vector");
    CMat b(spec.dimension(), 1);
    b.col(0) = v;
    return detail::minimize_over_slice(spec, z, 0.0, b).distance;
}

bool in_collar(const DomainSpec& spec, const CVec& z) {
    return boundary_distance(spec, z) < spec.collar_width();
}

}  // namespace clab
