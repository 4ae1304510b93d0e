#include "carleson_lab/kobayashi.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <limits>

namespace clab {

const char* to_string(Membership m) {
    switch (m) {
        case Membership::Inside: return "inside";
        case Membership::Outside: return "outside";
        case Membership::Uncertain: return "uncertain";
    }
    return "?";
}

MetricBound metric_bounds(const DomainSpec& spec, const CVec& z, const CVec& v) {
    require_finite(v, "metric_bounds");
    if (!(defining_value(spec, z) < 0.0)) throw PreconditionError("metric_bounds: point is not inside the domain");
    double nv = v.norm();
    if (nv == 0.0) return {0.0, 0.0};
    double slice = line_boundary_distance(spec, z, CVec(v / nv));
    return {nv / (2.0 * slice), nv / slice};
}

double exact_metric_model(const DomainSpec& spec, const CVec& z, const CVec& v) {
    if (!spec.has_exact_metric()) throw CapabilityError("exact_metric_model: only the disk and ball are supported");
    double s = 1.0 - z.squaredNorm();
    if (!(s > 0.0)) throw PreconditionError("exact_metric_model: point is not inside the domain");
    double zv = std::norm(hermitian(v, z));
    return std::sqrt(v.squaredNorm() / s + zv / (s * s));
}

CVec ball_automorphism(const CVec& a, const CVec& w) {
    double a2 = a.squaredNorm();
    Complex wa = hermitian(w, a);
    CVec pw = a2 > 0.0 ? CVec(a * (wa / a2)) : CVec::Zero(a.size());
    double s = std::sqrt(1.0 - a2);
    return (a - pw - s * (w - pw)) / (1.0 - wa);
}

double pseudo_distance_model(const DomainSpec& spec, const CVec& z, const CVec& w) {
    if (!spec.has_exact_metric()) throw CapabilityError("exact_distance_model: only the disk and ball are supported");
    if (!(z.squaredNorm() < 1.0) || !(w.squaredNorm() < 1.0))
        throw PreconditionError("exact_distance_model: points must lie in the domain");
    const auto n = z.size();
    // |1 - <z,w>|^2 - (1 - |z|^2)(1 - |w|^2) = |z - w|^2 - (|z|^2 |w|^2 - |<z,w>|^2),
    // the bracket via Lagrange's identity.
    double cross = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            cross += std::norm(z(i) * w(j) - z(j) * w(i));
    double num = std::max(0.0, (z - w).squaredNorm() - cross);
    double den = std::norm(1.0 - hermitian(z, w));
    return std::min(1.0, std::sqrt(num / den));
}

double exact_distance_model(const DomainSpec& spec, const CVec& z, const CVec& w) {
    double rho = pseudo_distance_model(spec, z, w);
    // atanh(rho) = log((1 + rho) / sqrt(1 - rho^2)), with 1 - rho^2 in product form.
    double one_minus_sq = (1.0 - z.squaredNorm()) * (1.0 - w.squaredNorm()) / std::norm(1.0 - hermitian(z, w));
    return std::log1p(rho) - 0.5 * std::log(one_minus_sq);
}

namespace {

double upper_metric(const DomainSpec& spec, const CVec& z, const CVec& v) {
    double nv = v.norm();
    if (nv == 0.0) return 0.0;
    return nv / line_boundary_distance(spec, z, CVec(v / nv));
}

double segment_length(const DomainSpec& spec, const CVec& a, const CVec& b) {
    CVec d = b - a;
    if (d.norm() == 0.0) return 0.0;
    auto f = [&](double s) { return upper_metric(spec, CVec(a + s * d), d); };
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, 0.0, 1.0, 12, 1e-7);
}

struct Path {
    std::vector<CVec> nodes;  // includes both endpoints
    std::vector<double> seg;  // lengths

    double total() const {
        double t = 0.0;
        for (double s : seg) t += s;
        return t;
    }
};

Path make_path(const DomainSpec& spec, std::vector<CVec> nodes) {
    Path p{std::move(nodes), {}};
    for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i)
        p.seg.push_back(segment_length(spec, p.nodes[i], p.nodes[i + 1]));
    return p;
}

void coordinate_descent(const DomainSpec& spec, Path& p) {
    if (p.nodes.size() < 3) return;
    double h = 0.1 * (p.nodes.back() - p.nodes.front()).norm() / static_cast<double>(p.nodes.size() - 1);
    const auto n = p.nodes.front().size();
    for (int sweep = 0; sweep < 200 && h > 1e-9; ++sweep) {
        double before = p.total();
        for (std::size_t k = 1; k + 1 < p.nodes.size(); ++k) {
            for (Eigen::Index c = 0; c < 2 * n; ++c) {
                for (double sign : {1.0, -1.0}) {
                    CVec trial = p.nodes[k];
                    Complex step = (c % 2 == 0) ? Complex(sign * h, 0) : Complex(0, sign * h);
                    trial(c / 2) += step;
                    if (!(spec.value(trial) < 0.0)) continue;
                    double l0 = segment_length(spec, p.nodes[k - 1], trial);
                    double l1 = segment_length(spec, trial, p.nodes[k + 1]);
                    if (l0 + l1 < p.seg[k - 1] + p.seg[k]) {
                        p.nodes[k] = trial;
                        p.seg[k - 1] = l0;
                        p.seg[k] = l1;
                        break;
                    }
                }
            }
        }
        double gain = before - p.total();
        if (gain < 1e-6) h *= 0.5;
    }
}

}  // namespace

double distance_upper(const DomainSpec& spec, const CVec& z, const CVec& w, int refinement) {
    if (!(defining_value(spec, z) < 0.0) || !(defining_value(spec, w) < 0.0))
        throw PreconditionError("distance_upper: points must lie in the domain");
    if (refinement < 0 || refinement > 8) throw ConfigError("distance_upper: refinement must be in [0, 8]");
    if ((z - w).norm() == 0.0) return 0.0;
    Path p = make_path(spec, {z, w});
    for (int level = 1; level <= refinement; ++level) {
        std::vector<CVec> nodes;
        for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
            nodes.push_back(p.nodes[i]);
            nodes.push_back(0.5 * (p.nodes[i] + p.nodes[i + 1]));
        }
        nodes.push_back(p.nodes.back());
        Path refined = make_path(spec, std::move(nodes));
        coordinate_descent(spec, refined);
        if (refined.total() <= p.total()) p = std::move(refined);
    }
    double len = p.total();
    if (!std::isfinite(len)) throw NumericError("distance_upper: path length is not finite");
    return len;
}

BallSandwich ball_sandwich(const MinimalFrame& frame, double r) {
    if (!(r > 0.0 && r < 1.0)) throw PreconditionError("ball_sandwich: radius must lie in (0, 1)");
    const double n = static_cast<double>(frame.sigma.size());
    Polydisk base = frame.polydisk();
    return {frame.center, r, base.scaled(r / n), base.scaled(2.0 * r / (1.0 - r)), frame.unique};
}

BallSandwich ball_sandwich(const DomainSpec& spec, const CVec& z0, double r) {
    if (!(r > 0.0 && r < 1.0)) throw PreconditionError("ball_sandwich: radius must lie in (0, 1)");
    return ball_sandwich(minimal_frame(spec, z0), r);
}

Membership ball_membership(const DomainSpec& spec, const MinimalFrame& frame0, double r, const CVec& z,
                           int refinement) {
    if (!(r > 0.0 && r < 1.0)) throw PreconditionError("ball_membership: radius must lie in (0, 1)");
    if ((z - frame0.center).norm() == 0.0) return Membership::Inside;
    if (spec.has_exact_metric())
        return pseudo_distance_model(spec, frame0.center, z) < r ? Membership::Inside : Membership::Outside;
    BallSandwich s = ball_sandwich(frame0, r);
    if (s.inner.gauge(z) < 1.0) return Membership::Inside;
    if (!(s.outer.gauge(z) < 1.0)) return Membership::Outside;
    if (!(spec.value(z) < 0.0)) return Membership::Outside;
    if (std::tanh(distance_upper(spec, frame0.center, z, refinement)) < r) return Membership::Inside;
    return Membership::Uncertain;
}

Membership ball_membership(const DomainSpec& spec, const CVec& z0, double r, const CVec& z) {
    if (!(defining_value(spec, z0) < 0.0) || !(defining_value(spec, z) < 0.0))
        throw PreconditionError("ball_membership: points must lie in the domain");
    if (spec.has_exact_metric()) {
        if (!(r > 0.0 && r < 1.0)) throw PreconditionError("ball_membership: radius must lie in (0, 1)");
        return pseudo_distance_model(spec, z0, z) < r ? Membership::Inside : Membership::Outside;
    }
    return ball_membership(spec, minimal_frame(spec, z0), r, z);
}

LogEnvelope calibrate_log_envelope(const DomainSpec& spec, const CVec& z0, const std::vector<CVec>& samples) {
    if (samples.size() < 10) throw ConfigError("calibrate_log_envelope: at least 10 samples are required");
    LogEnvelope env;
    env.c1 = std::numeric_limits<double>::infinity();
    env.c2 = -std::numeric_limits<double>::infinity();
    env.lower_certified = spec.has_exact_metric();
    double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
    for (const auto& z : samples) {
        double delta = boundary_distance(spec, z);
        dmin = std::min(dmin, delta);
        dmax = std::max(dmax, delta);
        double d = spec.has_exact_metric() ? exact_distance_model(spec, z0, z) : distance_upper(spec, z0, z, 0);
        double residual = d + 0.5 * std::log(delta);
        env.c1 = std::min(env.c1, residual);
        env.c2 = std::max(env.c2, residual);
    }
    if (dmax / dmin < 1e4) throw ConfigError("calibrate_log_envelope: samples must span at least 4 decades of delta");
    return env;
}

}  // namespace clab
