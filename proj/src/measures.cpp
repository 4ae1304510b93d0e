#include "carleson_lab/measures.hpp"

#include <random>

namespace clab {

namespace {

void check_density(const DomainSpec& spec, const Measure::DensityFn& f, const std::string& name) {
    DomainSampler sampler(spec);
    std::mt19937_64 rng(0xd0d0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> u(static_cast<std::size_t>(sampler.cube_dimension()));
    CVec z;
    for (int s = 0; s < 1000; ++s) {
        for (auto& x : u) x = unif(rng);
        if (sampler.map(u, z) == 0.0) continue;
        double v = f(z);
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ValidationError("Measure '" + name + "': density is negative or not finite at a sample point");
    }
}

double parse_power(const std::string& name, const std::string& prefix) {
    try {
        std::size_t used = 0;
        std::string tail = name.substr(prefix.size());
        double p = std::stod(tail, &used);
        if (used != tail.size()) throw ConfigError("");
        return p;
    } catch (const std::exception&) {
        throw ConfigError("Measure catalog: cannot parse the exponent in '" + name + "'");
    }
}

}  // namespace

Measure Measure::atomic(const DomainSpec& spec, std::vector<Atom> atoms) {
    for (const auto& a : atoms) {
        if (!(a.weight > 0.0) || !std::isfinite(a.weight)) throw ValidationError("Measure: atom weights must be positive");
        if (a.point.size() != spec.dimension()) throw ValidationError("Measure: atom dimension mismatch");
        if (!(defining_value(spec, a.point) < 0.0)) throw ValidationError("Measure: atom outside the domain");
    }
    Measure m;
    m.kind_ = MeasureKind::Atomic;
    m.name_ = "atomic";
    m.atoms_ = std::move(atoms);
    return m;
}

Measure Measure::density(const DomainSpec& spec, std::string name, DensityFn f, SamplingConfig sampling) {
    if (!f) throw CapabilityError("Measure: density measure needs a density function");
    check_density(spec, f, name);
    Measure m;
    m.kind_ = MeasureKind::Density;
    m.name_ = std::move(name);
    m.density_ = std::move(f);
    m.sampling_ = sampling;
    return m;
}

Measure Measure::lebesgue(const DomainSpec&, RegionFn region, SamplingConfig sampling, std::string name) {
    Measure m;
    m.kind_ = MeasureKind::LebesgueRestriction;
    m.name_ = std::move(name);
    m.region_ = std::move(region);
    m.sampling_ = sampling;
    return m;
}

Measure Measure::from_catalog(const DomainSpec& spec, const std::string& name, SamplingConfig sampling, double cap) {
    if (name == "lebesgue") return lebesgue(spec, {}, sampling);
    const DomainSpec* d = &spec;
    if (name.rfind("delta^", 0) == 0) {
        double p = parse_power(name, "delta^");
        return density(spec, name, [d, p, cap](const CVec& z) {
            return std::min(cap, std::pow(boundary_distance(*d, z), p));
        }, sampling);
    }
    if (name.rfind("one_minus_delta^", 0) == 0) {
        double p = parse_power(name, "one_minus_delta^");
        return density(spec, name, [d, p, cap](const CVec& z) {
            double base = std::max(0.0, 1.0 - boundary_distance(*d, z));
            return base == 0.0 && p < 0 ? cap : std::min(cap, std::pow(base, p));
        }, sampling);
    }
    throw ConfigError("Measure catalog: unknown density '" + name + "'");
}

double Measure::density_at(const CVec& z) const {
    switch (kind_) {
        case MeasureKind::Atomic: return 0.0;
        case MeasureKind::Density: return density_(z);
        case MeasureKind::LebesgueRestriction: return (!region_ || region_(z)) ? 1.0 : 0.0;
    }
    return 0.0;
}

Estimate Measure::integrate(const DomainSpec& spec, const std::function<double(const CVec&)>& g) const {
    return integrate(spec, g, sampling_);
}

Estimate Measure::integrate(const DomainSpec& spec, const std::function<double(const CVec&)>& g,
                            const SamplingConfig& sampling) const {
    if (kind_ == MeasureKind::Atomic) {
        double acc = 0.0;
        for (const auto& a : atoms_) acc += a.weight * g(a.point);
        return {acc, 0.0, atoms_.size()};
    }
    DomainSampler sampler(spec);
    auto est = integrate_region(sampler, sampling, [&](const CVec& z) {
        double w = density_at(z);
        return Complex(w == 0.0 ? 0.0 : w * g(z), 0.0);
    });
    return {est.value.real(), est.std_error, est.samples};
}

Estimate mass(const DomainSpec& spec, const Measure& mu, const Polydisk& region) {
    if (mu.kind() == MeasureKind::Atomic) {
        double acc = 0.0;
        for (const auto& a : mu.atoms())
            if (region.gauge(a.point) < 1.0) acc += a.weight;
        return {acc, 0.0, mu.atoms().size()};
    }
    if (region.volume() == 0.0) return {0.0, 0.0, 0};
    PolydiskSampler sampler(region, &spec);
    auto est = integrate_region(sampler, mu.sampling(), [&](const CVec& z) { return Complex(mu.density_at(z), 0.0); });
    return {est.value.real(), est.std_error, est.samples};
}

std::pair<Estimate, Estimate> mass(const DomainSpec& spec, const Measure& mu, const BallSandwich& region) {
    return {mass(spec, mu, region.inner), mass(spec, mu, region.outer)};
}

Estimate total_mass(const DomainSpec& spec, const Measure& mu) {
    return mu.integrate(spec, [](const CVec&) { return 1.0; });
}

}  // namespace clab
