#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "carleson_lab/domains.hpp"
#include "carleson_lab/geometry.hpp"

namespace clab {

/// A Monte Carlo estimate with its standard error.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

struct ComplexEstimate {
    Complex value{0.0, 0.0};
    double std_error = 0.0;
    std::size_t samples = 0;
};

enum class SamplingScheme {
    /// Sobol points under independent random shifts; the standard error comes
    /// from the spread of the replicate means.
    RandomizedQmc,
    /// Independent uniform draws.
    PlainMc,
};

struct SamplingConfig {
    std::size_t samples = 100'000;
    std::uint64_t seed = 1;
    SamplingScheme scheme = SamplingScheme::RandomizedQmc;
};

/// E[f(U)] for U uniform on [0,1)^dim.
ComplexEstimate estimate_mean(int dim, const SamplingConfig& cfg,
                              const std::function<Complex(std::span<const double>)>& f);

/// Maps unit-cube coordinates to a weighted sample of nu restricted to a
/// region: the integral of g over the region is E[weight * g(point)].
class RegionSampler {
public:
    virtual ~RegionSampler() = default;
    virtual int cube_dimension() const = 0;
    /// Writes the point; returns the weight (0 for points outside the region).
    virtual double map(std::span<const double> u, CVec& point) const = 0;
};

/// Samples nu on D. Reinhardt domains use exact conditional radial sampling;
/// other domains use the bounding box with an indicator.
class DomainSampler final : public RegionSampler {
public:
    explicit DomainSampler(const DomainSpec& spec) : spec_(spec) {}
    int cube_dimension() const override { return 2 * spec_.dimension(); }
    double map(std::span<const double> u, CVec& point) const override;

private:
    const DomainSpec& spec_;
};

/// Samples nu on a polydisk, optionally intersected with D.
class PolydiskSampler final : public RegionSampler {
public:
    PolydiskSampler(const Polydisk& p, const DomainSpec* clip) : p_(p), clip_(clip) {}
    int cube_dimension() const override { return 2 * static_cast<int>(p_.radii.size()); }
    double map(std::span<const double> u, CVec& point) const override;

private:
    const Polydisk& p_;
    const DomainSpec* clip_;
};

/// Integral of g d nu over the sampler's region.
ComplexEstimate integrate_region(const RegionSampler& sampler, const SamplingConfig& cfg,
                                 const std::function<Complex(const CVec&)>& g);

}  // namespace clab
