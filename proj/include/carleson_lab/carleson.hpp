#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "carleson_lab/bergman.hpp"

namespace clab {

/// A test center. Level k >= 1 sits at relative depth 2^-k along a ray toward
/// the boundary; level 0 marks interior samples.
struct GridPoint {
    CVec point;
    int level = 0;
    double delta = 0.0;
};

struct GridConfig {
    int levels = 10;
    /// Rays per coordinate axis, phases evenly spaced over the window
    /// [phase_center - phase_half_width, phase_center + phase_half_width].
    int rays = 32;
    double phase_center = 0.0;
    double phase_half_width = kPi;
    int interior = 8;
    std::uint64_t seed = 1;
};

/// Dyadic rays from the anchor toward boundary points of every axis (the flat
/// and the curved directions of an ellipsoid), plus interior samples.
std::vector<GridPoint> make_grid(const DomainSpec& spec, const GridConfig& cfg);

enum class Verdict { Bounded, Diverging, Inconclusive };

const char* to_string(Verdict v);

/// Per-level maxima: entry k is the sup over grid points of level k.
std::vector<double> level_sups(const std::vector<GridPoint>& grid, const std::vector<double>& values);

/// Diverging when the last four level sups increase strictly with cumulative
/// factor >= 4; Bounded when the running sup grows by at most 20% over the
/// last four levels; Inconclusive otherwise.
Verdict tail_verdict(const std::vector<double>& sups);

struct CriterionTrace {
    std::vector<double> values;  // per grid point (the upper bracket for the geometric criterion)
    std::vector<double> lower;   // geometric criterion only
    std::vector<double> errors;  // standard errors of sampled values
    std::vector<double> level_sup;
    double sup = 0.0;
    Verdict verdict = Verdict::Inconclusive;
};

/// B mu on the grid.
CriterionTrace criterion_berezin(const DomainSpec& spec, const KernelModel& model, const Measure& mu,
                                 const std::vector<GridPoint>& grid);

/// [mu(inner) / nu(outer), mu(outer) / nu(inner)] with exact polydisk volumes.
CriterionTrace criterion_geometric(const DomainSpec& spec, const Measure& mu, double r,
                                   const std::vector<GridPoint>& grid);

struct DictionaryConfig {
    int polynomials = 16;
    /// Capped at half the series degree for series kernels.
    int degree = 4;
    std::uint64_t seed = 1;
};

struct OperatorTrace {
    CriterionTrace kernels;             // quotient at k_{z0} for every grid point
    std::vector<double> polynomials;    // quotient for every random polynomial
    double sup = 0.0;
};

/// sup of integral |f|^2 d mu / ||f||^2 over normalized kernels on the grid
/// and random polynomials; a lower estimate of the Carleson constant.
OperatorTrace criterion_operator(const DomainSpec& spec, const KernelModel& model, const Measure& mu,
                                 const std::vector<GridPoint>& grid, const DictionaryConfig& dict);

struct CarlesonConfig {
    double r = 0.3;
    double r0 = 0.9;
    GridConfig grid;
    DictionaryConfig dictionary;
};

struct CarlesonReport {
    CarlesonConfig config;
    std::string measure_name;
    std::vector<GridPoint> grid;
    OperatorTrace criterion1;
    CriterionTrace criterion2;
    CriterionTrace criterion3;
    double criterion1_sup = 0.0;
    double criterion2_sup = 0.0;
    double criterion3_sup = 0.0;
    /// Fitted constants: C from the operator criterion, C_r from the geometric one.
    double fitted_c = 0.0;
    double fitted_cr = 0.0;
    /// max |criterion1 kernel value - criterion2 value| / max(1, criterion2 value).
    double identity_gap = 0.0;
};

CarlesonReport carleson_test(const DomainSpec& spec, const KernelModel& model, const Measure& mu,
                             const CarlesonConfig& cfg);

/// One row per grid point per criterion, then one row per dictionary polynomial.
void write_report_csv(std::ostream& os, const CarlesonReport& report);

// Covering (bounded overlap of Kobayashi balls).

struct CoverConfig {
    /// Candidates and test points are drawn from {r(z) < -level}.
    double level = 0.2;
    std::size_t candidates = 40'000;
    std::size_t test_points = 10'000;
    std::uint64_t seed = 1;
    /// Throw ResourceError when a test point is not certified covered.
    bool require_full_coverage = true;
    int refinement = 0;
    /// Off the model domains, the distance upper bound is tried on at most this many
    /// centers per test point, in increasing outer-polydisk gauge.
    int upper_checks = 1;
};

struct CoverResult {
    std::vector<CVec> centers;
    double r = 0.0;
    std::size_t tested = 0;
    std::size_t covered = 0;
    /// Test points not certified covered but inside some outer polydisk.
    std::size_t uncertain = 0;
    /// Max over test points of overlap_count with R = (1 + r) / 2.
    int max_overlap = 0;
    double coverage() const { return tested ? double(covered) / double(tested) : 1.0; }
};

/// Greedy maximal family of pairwise-disjoint balls of radius r/3 over a
/// quasi-random candidate sequence (Uncertain counts as intersecting); the
/// radius-r balls at the centers are then checked against a test sample.
CoverResult kobayashi_cover(const DomainSpec& spec, double r, const CoverConfig& cfg);

/// Number of centers whose radius-R ball may contain z (Uncertain counts).
int overlap_count(const DomainSpec& spec, const std::vector<CVec>& centers, double R, const CVec& z);
int overlap_count(const DomainSpec& spec, const std::vector<MinimalFrame>& frames, double R, const CVec& z);

// Sub-mean value inequalities for phi = |f|^2.

struct SubmeanResult {
    double phi = 0.0;          // phi(z0)
    double bound = 0.0;        // (2n/(1-r)) * average of phi over B(z0, r)
    double margin = 0.0;       // bound - phi
    double sub_margin = 0.0;   // min over test points z of the corollary margin with R = (1+r)/2
    bool exact_balls = false;  // true when the ball indicator is exact (disk, ball)
    bool pass() const { return margin >= 0.0 && sub_margin >= 0.0; }
};

/// On the disk and ball the averages run over the exact Kobayashi balls; elsewhere
/// the inner polydisk carries the integral and the outer one the volume.
SubmeanResult submean_check(const DomainSpec& spec, const HoloPolynomial& f, const CVec& z0, double r,
                            const SamplingConfig& sampling);

}  // namespace clab
