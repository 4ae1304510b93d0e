#include "carleson_lab/sampling.hpp"

#include <boost/random/sobol.hpp>
#include <random>
#include <vector>

namespace clab {

namespace {

constexpr int kReplicates = 16;

ComplexEstimate finish(const std::vector<Complex>& means, std::size_t samples, double per_mean_scale) {
    Complex m{0.0, 0.0};
    for (const auto& x : means) m += x;
    m /= static_cast<double>(means.size());
    double var = 0.0;
    for (const auto& x : means) var += std::norm(x - m);
    var /= static_cast<double>(means.size() - 1);
    return {m, std::sqrt(var / static_cast<double>(means.size())) * per_mean_scale, samples};
}

}  // namespace

ComplexEstimate estimate_mean(int dim, const SamplingConfig& cfg,
                              const std::function<Complex(std::span<const double>)>& f) {
    if (cfg.samples < 2) throw ConfigError("estimate_mean: need at least 2 samples");
    std::vector<double> u(static_cast<std::size_t>(dim));
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    if (cfg.scheme == SamplingScheme::PlainMc) {
        // Batch means double as the variance estimate.
        std::vector<Complex> batch(kReplicates, Complex{0, 0});
        const std::size_t per = (cfg.samples + kReplicates - 1) / kReplicates;
        for (int b = 0; b < kReplicates; ++b) {
            Complex acc{0, 0};
            for (std::size_t i = 0; i < per; ++i) {
                for (auto& x : u) x = unif(rng);
                acc += f(u);
            }
            batch[b] = acc / static_cast<double>(per);
        }
        return finish(batch, per * kReplicates, 1.0);
    }

    const std::size_t per = std::max<std::size_t>(1, (cfg.samples + kReplicates - 1) / kReplicates);
    std::vector<double> shift(static_cast<std::size_t>(dim));
    std::vector<Complex> means(kReplicates);
    for (int rep = 0; rep < kReplicates; ++rep) {
        for (auto& s : shift) s = unif(rng);
        boost::random::sobol gen(static_cast<std::size_t>(dim));
        const double scale = 1.0 / (static_cast<double>(gen.max()) + 1.0);
        Complex acc{0, 0};
        for (std::size_t i = 0; i < per; ++i) {
            for (int d = 0; d < dim; ++d) {
                double x = static_cast<double>(gen()) * scale + shift[d];
                u[d] = x >= 1.0 ? x - 1.0 : x;
            }
            acc += f(u);
        }
        means[rep] = acc / static_cast<double>(per);
    }
    return finish(means, per * kReplicates, 1.0);
}

double DomainSampler::map(std::span<const double> u, CVec& point) const {
    const int n = spec_.dimension();
    point.resize(n);
    if (spec_.is_reinhardt()) {
        // Sequential conditional sampling of |z_j|^2 under the remaining budget
        // 1 - sum (|z_i| / a_i)^{2 m_i}; the weight is n! prod L_j.
        double budget = 1.0;
        double weight = factorial(n);
        for (int j = 0; j < n; ++j) {
            double a = spec_.semi_axes()[j];
            int m = spec_.exponents()[j];
            double len = a * a * std::pow(std::max(budget, 0.0), 1.0 / m);
            double rho2 = u[2 * j] * len;
            point(j) = std::polar(std::sqrt(rho2), 2.0 * kPi * u[2 * j + 1]);
            weight *= len;
            budget -= std::pow(rho2 / (a * a), m);
        }
        return weight;
    }
    const double b = spec_.box_half_width();
    for (int j = 0; j < n; ++j) point(j) = Complex(b * (2 * u[2 * j] - 1), b * (2 * u[2 * j + 1] - 1));
    if (!(spec_.value(point) < 0.0)) return 0.0;
    return std::pow(2.0 * b, 2 * n) / unit_ball_volume(n);
}

double PolydiskSampler::map(std::span<const double> u, CVec& point) const {
    const auto n = p_.radii.size();
    CVec local(n);
    for (Eigen::Index j = 0; j < n; ++j)
        local(j) = std::polar(p_.radii(j) * std::sqrt(u[2 * j]), 2.0 * kPi * u[2 * j + 1]);
    point = p_.center + p_.frame * local;
    if (clip_ && !(clip_->in_box(to_real(point)) && clip_->value(point) < 0.0)) return 0.0;
    return p_.volume();
}

ComplexEstimate integrate_region(const RegionSampler& sampler, const SamplingConfig& cfg,
                                 const std::function<Complex(const CVec&)>& g) {
    CVec point;
    return estimate_mean(sampler.cube_dimension(), cfg, [&](std::span<const double> u) {
        double w = sampler.map(u, point);
        return w == 0.0 ? Complex{0, 0} : w * g(point);
    });
}

}  // namespace clab
