#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "carleson_lab/kobayashi.hpp"
#include "carleson_lab/sampling.hpp"

namespace clab {

struct Atom {
    CVec point;
    double weight = 0.0;
};

enum class MeasureKind { Atomic, Density, LebesgueRestriction };

/// A finite positive Borel measure on D: weighted atoms, a nonnegative density
/// times nu, or nu restricted to a region. Immutable; estimates are
/// deterministic given the stored sampling config.
class Measure {
public:
    using DensityFn = std::function<double(const CVec&)>;
    using RegionFn = std::function<bool(const CVec&)>;

    static Measure atomic(const DomainSpec& spec, std::vector<Atom> atoms);
    static Measure density(const DomainSpec& spec, std::string name, DensityFn f, SamplingConfig sampling = {});
    /// nu restricted to {region(z)}; the empty function means all of D.
    static Measure lebesgue(const DomainSpec& spec, RegionFn region = {}, SamplingConfig sampling = {},
                            std::string name = "lebesgue");
    /// Named densities: "lebesgue", "delta^p", "one_minus_delta^p" (truncated at `cap`).
    static Measure from_catalog(const DomainSpec& spec, const std::string& name, SamplingConfig sampling = {},
                                double cap = 1e3);

    MeasureKind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    const SamplingConfig& sampling() const noexcept { return sampling_; }
    bool is_lebesgue() const noexcept { return kind_ == MeasureKind::LebesgueRestriction && !region_; }

    /// Density w.r.t. nu at z (the indicator for Lebesgue restrictions); 0 for atomic.
    double density_at(const CVec& z) const;

    /// Integral of g over D against the measure: exact sum for atoms, sampled otherwise.
    Estimate integrate(const DomainSpec& spec, const std::function<double(const CVec&)>& g) const;
    Estimate integrate(const DomainSpec& spec, const std::function<double(const CVec&)>& g,
                       const SamplingConfig& sampling) const;

    std::optional<double> total_mass_hint;

private:
    Measure() = default;

    MeasureKind kind_ = MeasureKind::Atomic;
    std::string name_;
    std::vector<Atom> atoms_;
    DensityFn density_;
    RegionFn region_;
    SamplingConfig sampling_;
};

/// mu(P) with the polydisk clipped to D.
Estimate mass(const DomainSpec& spec, const Measure& mu, const Polydisk& region);

/// mu of the inner and outer polydisks; these bracket mu(B_D(z, r)).
std::pair<Estimate, Estimate> mass(const DomainSpec& spec, const Measure& mu, const BallSandwich& region);

Estimate total_mass(const DomainSpec& spec, const Measure& mu);

}  // namespace clab
