#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "carleson_lab/carleson.hpp"

namespace clab {

/// A finite sequence of distinct interior points, in index order.
class SequenceSet {
public:
    SequenceSet() = default;
    /// Validates distinctness and membership in D.
    SequenceSet(const DomainSpec& spec, std::vector<CVec> points);

    const std::vector<CVec>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const CVec& operator[](std::size_t i) const { return points_[i]; }

private:
    std::vector<CVec> points_;
};

/// Pairwise lower bound for tanh d_K: exact on the disk and ball; elsewhere
/// s/(2 + s) with s the larger of the two sigma-polydisk gauges, since a
/// point outside the outer polydisk of B(z, t) is outside the ball.
double pseudo_distance_lower(const DomainSpec& spec, const MinimalFrame& a, const MinimalFrame& b);

/// min over pairs of tanh d_K (a lower bound off the model domains); +infinity below two points.
double separation(const DomainSpec& spec, const SequenceSet& gamma);

struct BallCount {
    int count = 0;
    /// Points counted because membership was Uncertain.
    int uncertain = 0;
};

/// M(x, r, Gamma); Uncertain members are counted.
BallCount count_in_ball(const DomainSpec& spec, const CVec& x, double r, const SequenceSet& gamma);

/// Greedy coloring in index order: each point takes the smallest color not used by an
/// earlier point within tanh-distance r (Uncertain counts as within). Colors per point.
std::vector<int> greedy_colors(const DomainSpec& spec, const SequenceSet& gamma, double r);

/// The color classes of greedy_colors, each in index order.
std::vector<SequenceSet> greedy_decompose(const DomainSpec& spec, const SequenceSet& gamma, double r);

/// Candidate region for packing: points anchor + (1 - t) * reach(u) * u with u a unit
/// direction whose phase angle in coordinate `axis` lies within `half_angle` of `angle`,
/// and depth t distributed with density proportional to t^-2 on [t_min, t_max].
struct PackRegion {
    double t_min = 1.0 / 1024.0;
    double t_max = 1.0;
    int axis = 0;
    double angle = 0.0;
    double half_angle = kPi;
};

struct PackResult {
    SequenceSet set;
    std::size_t candidates = 0;
    /// True when the last tenth of the candidates still added points, so more
    /// candidates would have grown the packing.
    bool exhausted = false;
};

/// Greedy packing of quasi-random candidates at tanh-distance >= delta_sep.
PackResult greedy_packing(const DomainSpec& spec, double delta_sep, const PackRegion& region, std::uint64_t seed,
                          std::size_t candidates = 40'000);

/// Atoms at the points with weights (prod sigma_i)^power; power 1 is the weight of the
/// sequence criterion, power 2 matches the volume of a Kobayashi ball.
Measure sequence_measure(const DomainSpec& spec, const SequenceSet& gamma, int power = 1);

/// Points accumulating at the boundary in clusters: around c_k = (1 - 2^-k) e_axis for
/// k = 1..levels, 2^k points at consecutive tanh-distance about 2^-(k+1). Disk and ball only.
SequenceSet boundary_cluster(const DomainSpec& spec, int levels, int axis = 0);

struct Thm42Config {
    CarlesonConfig carleson;
    double decompose_r = 0.3;
    int weight_power = 1;
};

struct Thm42Report {
    CarlesonReport carleson;
    std::size_t points = 0;
    double separation = 0.0;
    int colors = 0;
    int max_count = 0;  // max over Gamma of M(x, decompose_r, Gamma)
    /// sup over the dictionary of sum w_k |f(z_k)|^2 / ||f||^2.
    double statement3_sup = 0.0;
    /// 2n^2 / (r(1 - r)) with r = min(separation / 2, r0); infinite without separation.
    double envelope = std::numeric_limits<double>::infinity();
    bool separated = false;
    /// separated => Bounded (criterion 2), and Diverging => not separated.
    bool directions_agree = false;
};

Thm42Report thm42_pipeline(const DomainSpec& spec, const KernelModel& model, const SequenceSet& gamma,
                           const Thm42Config& cfg);

/// CSV with columns x1,y1,...,xn,yn; an extra "color" column when colors are given.
void write_points_csv(std::ostream& os, const std::vector<CVec>& points, const std::vector<int>* colors = nullptr);
std::vector<CVec> read_points_csv(std::istream& is, int n);

}  // namespace clab
