#include "carleson_lab/sequences.hpp"

#include <boost/random/sobol.hpp>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "parallel.hpp"

namespace clab {

SequenceSet::SequenceSet(const DomainSpec& spec, std::vector<CVec> points) : points_(std::move(points)) {
    std::set<std::vector<double>> seen;
    for (const auto& z : points_) {
        if (z.size() != spec.dimension()) throw InputDomainError("SequenceSet: point dimension mismatch");
        if (!(defining_value(spec, z) < 0.0)) throw InputDomainError("SequenceSet: every point must lie in D");
        RVec x = to_real(z);
        if (!seen.insert(std::vector<double>(x.data(), x.data() + x.size())).second)
            throw InputDomainError("SequenceSet: points must be pairwise distinct");
    }
}

namespace {

MinimalFrame frame_or_center(const DomainSpec& spec, const CVec& z) {
    if (spec.has_exact_metric()) {
        MinimalFrame f;
        f.center = z;
        return f;
    }
    return minimal_frame(spec, z);
}

std::vector<MinimalFrame> frames_of(const DomainSpec& spec, const SequenceSet& gamma) {
    std::vector<MinimalFrame> frames(gamma.size());
    detail::parallel_for(gamma.size(), [&](std::size_t i) { frames[i] = frame_or_center(spec, gamma[i]); });
    return frames;
}

double gauge_bound(const MinimalFrame& a, const CVec& z) {
    double g = a.polydisk().gauge(z);
    return g / (2.0 + g);
}

}  // namespace

double pseudo_distance_lower(const DomainSpec& spec, const MinimalFrame& a, const MinimalFrame& b) {
    if (spec.has_exact_metric()) return pseudo_distance_model(spec, a.center, b.center);
    return std::max(gauge_bound(a, b.center), gauge_bound(b, a.center));
}

double separation(const DomainSpec& spec, const SequenceSet& gamma) {
    if (gamma.size() < 2) return std::numeric_limits<double>::infinity();
    auto frames = frames_of(spec, gamma);
    std::vector<double> row(gamma.size(), std::numeric_limits<double>::infinity());
    detail::parallel_for(gamma.size(), [&](std::size_t i) {
        for (std::size_t j = i + 1; j < gamma.size(); ++j)
            row[i] = std::min(row[i], pseudo_distance_lower(spec, frames[i], frames[j]));
    });
    return *std::min_element(row.begin(), row.end());
}

BallCount count_in_ball(const DomainSpec& spec, const CVec& x, double r, const SequenceSet& gamma) {
    if (!(r > 0.0 && r < 1.0)) throw PreconditionError("count_in_ball: r must lie in (0, 1)");
    if (!(defining_value(spec, x) < 0.0)) throw PreconditionError("count_in_ball: x must lie in D");
    BallCount out;
    if (spec.has_exact_metric()) {
        for (const auto& z : gamma.points()) out.count += pseudo_distance_model(spec, x, z) < r;
        return out;
    }
    MinimalFrame fx = minimal_frame(spec, x);
    for (const auto& z : gamma.points()) {
        Membership m = ball_membership(spec, fx, r, z);
        out.count += m != Membership::Outside;
        out.uncertain += m == Membership::Uncertain;
    }
    return out;
}

std::vector<int> greedy_colors(const DomainSpec& spec, const SequenceSet& gamma, double r) {
    if (!(r > 0.0 && r < 1.0)) throw PreconditionError("greedy_decompose: r must lie in (0, 1)");
    auto frames = frames_of(spec, gamma);
    std::vector<int> color(gamma.size(), 0);
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        std::vector<char> used;
        for (std::size_t j = 0; j < i; ++j) {
            if (pseudo_distance_lower(spec, frames[j], frames[i]) >= r) continue;
            if (static_cast<std::size_t>(color[j]) >= used.size()) used.resize(color[j] + 1, 0);
            used[color[j]] = 1;
        }
        int c = 0;
        while (c < static_cast<int>(used.size()) && used[c]) ++c;
        color[i] = c;
    }
    return color;
}

std::vector<SequenceSet> greedy_decompose(const DomainSpec& spec, const SequenceSet& gamma, double r) {
    auto color = greedy_colors(spec, gamma, r);
    int k = color.empty() ? 0 : *std::max_element(color.begin(), color.end()) + 1;
    std::vector<std::vector<CVec>> parts(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < gamma.size(); ++i) parts[color[i]].push_back(gamma[i]);
    std::vector<SequenceSet> out;
    for (auto& p : parts) out.emplace_back(spec, std::move(p));
    return out;
}

PackResult greedy_packing(const DomainSpec& spec, double delta_sep, const PackRegion& region, std::uint64_t seed,
                          std::size_t candidates) {
    if (!(delta_sep > 0.0 && delta_sep < 1.0)) throw PreconditionError("greedy_packing: delta_sep must lie in (0, 1)");
    if (!(region.t_min > 0.0 && region.t_min < region.t_max && region.t_max <= 1.0))
        throw ConfigError("greedy_packing: depth range must satisfy 0 < t_min < t_max <= 1");
    const int n = spec.dimension();
    if (region.axis < 0 || region.axis >= n) throw ConfigError("greedy_packing: axis out of range");
    const CVec anchor = spec.anchor();
    const RVec x0 = to_real(anchor);

    const int dim = 2 + (n > 1 ? 2 * n : 0);
    boost::random::sobol gen(static_cast<std::size_t>(dim));
    const double scale = 1.0 / (static_cast<double>(gen.max()) + 1.0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> shift(static_cast<std::size_t>(dim)), u(static_cast<std::size_t>(dim));
    for (auto& s : shift) s = unif(rng);

    // Exact domains: 1 - |z|^2 changes by at most a factor (1 + s)/(1 - s) within
    // tanh-distance s, so only nearby dyadic shells need checking.
    const bool exact = spec.has_exact_metric();
    const int window = exact ? static_cast<int>(std::ceil(std::log2((1 + delta_sep) / (1 - delta_sep)))) + 1 : 0;
    std::map<int, std::vector<std::size_t>> shells;
    auto shell_of = [](const CVec& z) { return static_cast<int>(std::floor(std::log2(1.0 - z.squaredNorm()))); };

    std::vector<CVec> accepted;
    std::vector<MinimalFrame> frames;
    std::size_t last_accept = 0;
    const double a = 1.0 / region.t_min, b = 1.0 / region.t_max;
    for (std::size_t c = 0; c < candidates; ++c) {
        for (int d = 0; d < dim; ++d) {
            double x = static_cast<double>(gen()) * scale + shift[d];
            u[d] = x >= 1.0 ? x - 1.0 : x;
        }
        double t = 1.0 / (a - u[0] * (a - b));
        double phase = region.angle + region.half_angle * (2.0 * u[1] - 1.0);
        CVec dir = CVec::Zero(n);
        if (n == 1) {
            dir(0) = std::polar(1.0, phase);
        } else {
            for (int j = 0; j < n; ++j) {
                // Box-Muller on consecutive coordinates.
                double r1 = std::sqrt(-2.0 * std::log(std::max(u[2 + 2 * j], 1e-300)));
                dir(j) = std::polar(r1, 2.0 * kPi * u[3 + 2 * j]);
            }
            dir /= dir.norm();
            dir *= std::polar(1.0, phase - std::arg(dir(region.axis)));
        }
        double reach = detail::ray_root(spec, x0, to_real(dir), 0.0);
        CVec z = anchor + (1.0 - t) * reach * dir;
        if (!(spec.value(z) < 0.0)) continue;

        bool ok = true;
        if (exact) {
            int sh = shell_of(z);
            for (int k = sh - window; k <= sh + window && ok; ++k) {
                auto it = shells.find(k);
                if (it == shells.end()) continue;
                for (std::size_t idx : it->second)
                    if (pseudo_distance_model(spec, accepted[idx], z) < delta_sep) {
                        ok = false;
                        break;
                    }
            }
        } else {
            for (const auto& f : frames)
                if (gauge_bound(f, z) < delta_sep) {
                    ok = false;
                    break;
                }
        }
        if (!ok) continue;
        if (exact) {
            shells[shell_of(z)].push_back(accepted.size());
        } else {
            MinimalFrame f = minimal_frame(spec, z);
            // The reverse bound must hold too so that separation() certifies delta_sep.
            bool both = true;
            for (const auto& g : frames)
                if (std::max(gauge_bound(f, g.center), gauge_bound(g, z)) < delta_sep) both = false;
            if (!both) continue;
            frames.push_back(std::move(f));
        }
        accepted.push_back(z);
        last_accept = c;
    }
    PackResult res;
    res.candidates = candidates;
    res.exhausted = !accepted.empty() && last_accept >= candidates - candidates / 10;
    res.set = SequenceSet(spec, std::move(accepted));
    return res;
}

Measure sequence_measure(const DomainSpec& spec, const SequenceSet& gamma, int power) {
    if (power < 1) throw ConfigError("sequence_measure: weight power must be >= 1");
    std::vector<Atom> atoms(gamma.size());
    detail::parallel_for(gamma.size(), [&](std::size_t i) {
        double p = minimal_frame(spec, gamma[i]).sigma_product();
        atoms[i] = {gamma[i], std::pow(p, power)};
    });
    Measure mu = Measure::atomic(spec, std::move(atoms));
    return mu;
}

SequenceSet boundary_cluster(const DomainSpec& spec, int levels, int axis) {
    if (!spec.has_exact_metric()) throw CapabilityError("boundary_cluster: needs the disk or the ball");
    if (levels < 1 || levels > 20) throw ConfigError("boundary_cluster: levels must lie in [1, 20]");
    const int n = spec.dimension();
    if (axis < 0 || axis >= n) throw ConfigError("boundary_cluster: axis out of range");
    std::vector<CVec> pts;
    for (int k = 1; k <= levels; ++k) {
        CVec c = CVec::Zero(n);
        c(axis) = 1.0 - std::ldexp(1.0, -k);
        const int m = 1 << k;
        for (int j = 0; j < m; ++j) {
            CVec w = CVec::Zero(n);
            w(axis) = Complex(0.0, j * std::ldexp(1.0, -(k + 1)));
            pts.push_back(ball_automorphism(c, w));
        }
    }
    return SequenceSet(spec, std::move(pts));
}

Thm42Report thm42_pipeline(const DomainSpec& spec, const KernelModel& model, const SequenceSet& gamma,
                           const Thm42Config& cfg) {
    if (gamma.empty()) throw PreconditionError("thm42_pipeline: the sequence is empty");
    Thm42Report rep;
    rep.points = gamma.size();
    Measure mu = sequence_measure(spec, gamma, cfg.weight_power);
    rep.carleson = carleson_test(spec, model, mu, cfg.carleson);
    rep.statement3_sup = rep.carleson.criterion1_sup;
    rep.separation = separation(spec, gamma);

    auto colors = greedy_colors(spec, gamma, cfg.decompose_r);
    rep.colors = *std::max_element(colors.begin(), colors.end()) + 1;
    std::vector<int> counts(gamma.size());
    if (spec.has_exact_metric()) {
        detail::parallel_for(gamma.size(), [&](std::size_t i) {
            counts[i] = count_in_ball(spec, gamma[i], cfg.decompose_r, gamma).count;
        });
    } else {
        for (std::size_t i = 0; i < gamma.size(); ++i) counts[i] = count_in_ball(spec, gamma[i], cfg.decompose_r, gamma).count;
    }
    rep.max_count = *std::max_element(counts.begin(), counts.end());

    const int nn = spec.dimension() * spec.dimension();
    if (std::isfinite(rep.separation)) {
        double r = std::min(rep.separation / 2.0, cfg.carleson.r0);
        rep.envelope = 2.0 * nn / (r * (1.0 - r));
    }
    rep.separated = rep.colors == 1;
    Verdict v = rep.carleson.criterion2.verdict;
    rep.directions_agree = (!rep.separated || v == Verdict::Bounded) && (v != Verdict::Diverging || !rep.separated);
    return rep;
}

void write_points_csv(std::ostream& os, const std::vector<CVec>& points, const std::vector<int>* colors) {
    const int n = points.empty() ? 1 : static_cast<int>(points.front().size());
    for (int j = 1; j <= n; ++j) os << (j > 1 ? "," : "") << "x" << j << ",y" << j;
    if (colors) os << ",color";
    os << "\n" << std::setprecision(17);
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (int j = 0; j < n; ++j) os << (j ? "," : "") << points[i](j).real() << "," << points[i](j).imag();
        if (colors) os << "," << (*colors)[i];
        os << "\n";
    }
}

std::vector<CVec> read_points_csv(std::istream& is, int n) {
    std::vector<CVec> out;
    std::string line;
    std::size_t lineno = 0;
    bool first = true;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        bool header = first && !cells.empty() && !cells[0].empty() &&
                      std::isalpha(static_cast<unsigned char>(cells[0][0])) != 0;
        first = false;
        if (header) continue;
        if (cells.size() < static_cast<std::size_t>(2 * n))
            throw ConfigError("points CSV: line " + std::to_string(lineno) + " has fewer than " +
                              std::to_string(2 * n) + " coordinate columns");
        CVec z(n);
        try {
            for (int j = 0; j < n; ++j) z(j) = Complex(std::stod(cells[2 * j]), std::stod(cells[2 * j + 1]));
        } catch (const std::exception&) {
            throw ConfigError("points CSV: line " + std::to_string(lineno) + " has a non-numeric coordinate");
        }
        out.push_back(z);
    }
    return out;
}

}  // namespace clab
