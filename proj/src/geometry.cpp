#include "carleson_lab/geometry.hpp"

#include <sstream>

namespace clab {

namespace {

// Orthonormal basis of the orthogonal complement of `chosen` inside span(remaining).
CMat complement(const CMat& remaining, const CVec& e) {
    std::vector<CVec> out;
    for (Eigen::Index k = 0; k < remaining.cols(); ++k) {
        CVec v = remaining.col(k);
        v -= hermitian(v, e) * e;
        for (const auto& w : out) v -= hermitian(v, w) * w;
        double nv = v.norm();
        if (nv > 1e-8) out.push_back(v / nv);
        if (static_cast<Eigen::Index>(out.size()) == remaining.cols() - 1) break;
    }
    CMat c(remaining.rows(), static_cast<Eigen::Index>(out.size()));
    for (std::size_t k = 0; k < out.size(); ++k) c.col(static_cast<Eigen::Index>(k)) = out[k];
    return c;
}

MinimalFrame greedy_frame(const DomainSpec& spec, const CVec& q, double level) {
    const int n = spec.dimension();
    MinimalFrame f;
    f.center = q;
    f.basis = CMat(n, n);
    f.sigma = Eigen::VectorXd(n);
    CMat remaining = CMat::Identity(n, n);
    for (int k = 0; k < n; ++k) {
        BoundaryProjection p = detail::minimize_over_slice(spec, q, level, remaining);
        for (const auto& u : p.tied_directions)
            if (std::abs(hermitian(u, p.direction)) < 1.0 - 1e-6) f.unique = false;
        f.basis.col(k) = p.direction;
        f.sigma(k) = p.distance;
        if (k + 1 < n) remaining = complement(remaining, p.direction);
    }
    return f;
}

}  // namespace

bool Polydisk::contains(const CVec& z) const { return gauge(z) <= 1.0; }

double Polydisk::gauge(const CVec& z) const {
    CVec w = local(z);
    double g = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) g = std::max(g, std::abs(w(i)) / radii(i));
    return g;
}

double Polydisk::volume() const {
    const auto n = static_cast<int>(radii.size());
    return factorial(n) * radii.array().square().prod();
}

Polydisk Polydisk::scaled(double lambda) const { return {center, frame, lambda * radii}; }

MinimalFrame minimal_frame(const DomainSpec& spec, const CVec& q) {
    double rq = defining_value(spec, q);
    if (!(rq < 0.0)) throw PreconditionError("minimal_frame: point is not inside the domain");
    return greedy_frame(spec, q, 0.0);
}

Polydisk mcneal_radii(const DomainSpec& spec, const CVec& q, double eps) {
    double rq = defining_value(spec, q);
    if (!(rq < 0.0)) throw PreconditionError("mcneal_radii: point is not inside the domain");
    if (!(eps > 0.0) || !std::isfinite(eps)) throw PreconditionError("mcneal_radii: epsilon must be positive");
    return greedy_frame(spec, q, rq + eps).polydisk();
}

bool polydisk_contains(const Polydisk& p, const CVec& z) { return p.contains(z); }

Polydisk scale_polydisk(const Polydisk& p, double lambda) {
    if (!(lambda > 0.0)) throw PreconditionError("scale_polydisk: lambda must be positive");
    return p.scaled(lambda);
}

double entry_scale(const DomainSpec& spec, const CVec& z, const CVec& omega) {
    if (!(defining_value(spec, z) < 0.0) || !(defining_value(spec, omega) < 0.0))
        throw PreconditionError("entry_scale: points must lie in the domain");
    if ((omega - z).norm() == 0.0) return 0.0;
    auto inside = [&](double eps) { return mcneal_radii(spec, z, eps).contains(omega); };

    double lo = 0.0;
    double hi = 1e-3;
    while (!inside(hi)) {
        lo = hi;
        hi *= 2.0;  // mcneal_radii throws once the level set leaves the box
    }
    while (hi - lo > 1e-8) {
        double mid = 0.5 * (lo + hi);
        (inside(mid) ? hi : lo) = mid;
    }
    // Nested polydisks: a slightly larger eps must still contain omega.
    if (!inside(hi * 1.1)) {
        std::ostringstream os;
        os << "entry_scale: membership predicate is not monotone between " << hi << " and " << hi * 1.1;
        throw NumericError(os.str());
    }
    return 0.5 * (lo + hi);
}

}  // namespace clab
