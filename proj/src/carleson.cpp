#include "carleson_lab/carleson.hpp"

#include <algorithm>
#include <boost/random/sobol.hpp>
#include <iomanip>
#include <ostream>
#include <random>

#include "parallel.hpp"

namespace clab {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

CVec axis_direction(int n, int j, double theta) {
    CVec d = CVec::Zero(n);
    d(j) = std::polar(1.0, theta);
    return d;
}

// Distance along the unit complex direction d from the anchor to the boundary.
double boundary_reach(const DomainSpec& spec, const CVec& d) {
    return detail::ray_root(spec, to_real(spec.anchor()), to_real(d), 0.0);
}

}  // namespace

std::vector<GridPoint> make_grid(const DomainSpec& spec, const GridConfig& cfg) {
    if (cfg.levels < 1 || cfg.levels > 40) throw ConfigError("make_grid: levels must lie in [1, 40]");
    if (cfg.rays < 1) throw ConfigError("make_grid: at least one ray is required");
    if (!(cfg.phase_half_width > 0.0 && cfg.phase_half_width <= kPi))
        throw ConfigError("make_grid: phase half width must lie in (0, pi]");
    if (cfg.interior < 0) throw ConfigError("make_grid: interior count must be nonnegative");
    const int n = spec.dimension();
    const CVec anchor = spec.anchor();
    std::vector<GridPoint> grid;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < cfg.rays; ++i) {
            // Offset the phases per axis so that different axes do not share angles.
            double frac = (i + 0.5 * (j % 2)) / cfg.rays;
            double theta = cfg.phase_center + cfg.phase_half_width * (2.0 * frac - 1.0);
            CVec d = axis_direction(n, j, theta);
            double reach = boundary_reach(spec, d);
            for (int k = 1; k <= cfg.levels; ++k)
                grid.push_back({CVec(anchor + (1.0 - std::ldexp(1.0, -k)) * reach * d), k, 0.0});
        }
    }
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss;
    for (int i = 0; i < cfg.interior; ++i) {
        CVec d(n);
        for (int j = 0; j < n; ++j) d(j) = Complex(gauss(rng), gauss(rng));
        d /= d.norm();
        double reach = boundary_reach(spec, d);
        grid.push_back({CVec(anchor + 0.5 * unif(rng) * reach * d), 0, 0.0});
    }
    detail::parallel_for(grid.size(), [&](std::size_t i) { grid[i].delta = boundary_distance(spec, grid[i].point); });
    return grid;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Bounded: return "Bounded";
        case Verdict::Diverging: return "Diverging";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

std::vector<double> level_sups(const std::vector<GridPoint>& grid, const std::vector<double>& values) {
    int top = 0;
    for (const auto& g : grid) top = std::max(top, g.level);
    std::vector<double> sups(static_cast<std::size_t>(top + 1), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) sups[grid[i].level] = std::max(sups[grid[i].level], values[i]);
    return sups;
}

Verdict tail_verdict(const std::vector<double>& s) {
    if (s.size() < 5) return Verdict::Inconclusive;
    const std::size_t L = s.size() - 1;
    bool increasing = s[L - 3] < s[L - 2] && s[L - 2] < s[L - 1] && s[L - 1] < s[L];
    if (increasing && s[L] >= 4.0 * s[L - 3]) return Verdict::Diverging;
    double before = *std::max_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(L - 3) + 1);
    double after = *std::max_element(s.begin(), s.end());
    if (after <= 1.2 * before) return Verdict::Bounded;
    return Verdict::Inconclusive;
}

namespace {

void finish_trace(CriterionTrace& t, const std::vector<GridPoint>& grid) {
    t.level_sup = level_sups(grid, t.values);
    t.sup = t.values.empty() ? 0.0 : *std::max_element(t.values.begin(), t.values.end());
    t.verdict = tail_verdict(t.level_sup);
}

}  // namespace

CriterionTrace criterion_berezin(const DomainSpec& spec, const KernelModel& model, const Measure& mu,
                                 const std::vector<GridPoint>& grid) {
    CriterionTrace t;
    t.values.resize(grid.size());
    t.errors.resize(grid.size());
    detail::parallel_for(grid.size(), [&](std::size_t i) {
        Estimate e = berezin(spec, model, mu, grid[i].point);
        t.values[i] = e.value;
        t.errors[i] = e.std_error;
    });
    finish_trace(t, grid);
    return t;
}

CriterionTrace criterion_geometric(const DomainSpec& spec, const Measure& mu, double r,
                                   const std::vector<GridPoint>& grid) {
    if (!(r > 0.0 && r < 1.0)) throw PreconditionError("criterion_geometric: r must lie in (0, 1)");
    CriterionTrace t;
    t.values.resize(grid.size());
    t.lower.resize(grid.size());
    t.errors.resize(grid.size());
    detail::parallel_for(grid.size(), [&](std::size_t i) {
        BallSandwich s = ball_sandwich(spec, grid[i].point, r);
        auto [inner, outer] = mass(spec, mu, s);
        double v_inner = s.inner.volume();
        double v_outer = s.outer.volume();
        t.lower[i] = inner.value / v_outer;
        t.values[i] = outer.value / v_inner;
        t.errors[i] = outer.std_error / v_inner;
    });
    finish_trace(t, grid);
    return t;
}

OperatorTrace criterion_operator(const DomainSpec& spec, const KernelModel& model, const Measure& mu,
                                 const std::vector<GridPoint>& grid, const DictionaryConfig& dict) {
    OperatorTrace out;
    auto& k = out.kernels;
    k.values.resize(grid.size());
    k.errors.resize(grid.size());
    detail::parallel_for(grid.size(), [&](std::size_t i) {
        Estimate e = kernel_quotient(spec, model, mu, grid[i].point);
        k.values[i] = e.value;
        k.errors[i] = e.std_error;
    });
    finish_trace(k, grid);

    int degree = dict.degree;
    if (model.variant() == KernelModel::Variant::ReinhardtSeries) degree = std::min(degree, model.degree() / 2);
    std::mt19937_64 rng(dict.seed);
    std::vector<HoloPolynomial> polys;
    for (int i = 0; i < dict.polynomials; ++i) polys.push_back(random_polynomial(spec.dimension(), degree, rng));
    out.polynomials.resize(polys.size());
    detail::parallel_for(polys.size(), [&](std::size_t i) {
        const auto& f = polys[i];
        double norm2 = polynomial_norm_squared(model, f);
        Estimate e = mu.integrate(spec, [&](const CVec& z) { return std::norm(f(z)); });
        out.polynomials[i] = e.value / norm2;
    });
    out.sup = k.sup;
    for (double v : out.polynomials) out.sup = std::max(out.sup, v);
    return out;
}

CarlesonReport carleson_test(const DomainSpec& spec, const KernelModel& model, const Measure& mu,
                             const CarlesonConfig& cfg) {
    if (!(cfg.r > 0.0 && cfg.r < cfg.r0 && cfg.r0 <= 1.0))
        throw PreconditionError("carleson_test: r must lie in (0, r0)");
    if (model.dimension() != spec.dimension()) throw ConfigError("carleson_test: kernel dimension mismatch");
    CarlesonReport rep;
    rep.config = cfg;
    rep.measure_name = mu.name();
    rep.grid = make_grid(spec, cfg.grid);
    rep.criterion1 = criterion_operator(spec, model, mu, rep.grid, cfg.dictionary);
    rep.criterion2 = criterion_berezin(spec, model, mu, rep.grid);
    rep.criterion3 = criterion_geometric(spec, mu, cfg.r, rep.grid);
    rep.criterion1_sup = rep.criterion1.sup;
    rep.criterion2_sup = rep.criterion2.sup;
    rep.criterion3_sup = rep.criterion3.sup;
    rep.fitted_c = rep.criterion1_sup;
    rep.fitted_cr = rep.criterion3_sup;
    for (std::size_t i = 0; i < rep.grid.size(); ++i) {
        double a = rep.criterion1.kernels.values[i], b = rep.criterion2.values[i];
        rep.identity_gap = std::max(rep.identity_gap, std::abs(a - b) / std::max(1.0, std::abs(b)));
    }
    return rep;
}

void write_report_csv(std::ostream& os, const CarlesonReport& rep) {
    const int n = rep.grid.empty() ? 1 : static_cast<int>(rep.grid.front().point.size());
    os << "criterion,index,level,delta";
    for (int j = 1; j <= n; ++j) os << ",x" << j << ",y" << j;
    os << ",value,lower,std_error\n";
    os << std::setprecision(17);
    auto rows = [&](const char* name, const CriterionTrace& t) {
        for (std::size_t i = 0; i < rep.grid.size(); ++i) {
            const auto& g = rep.grid[i];
            os << name << "," << i << "," << g.level << "," << g.delta;
            for (int j = 0; j < n; ++j) os << "," << g.point(j).real() << "," << g.point(j).imag();
            os << "," << t.values[i] << ",";
            if (!t.lower.empty()) os << t.lower[i];
            os << "," << (t.errors.empty() ? 0.0 : t.errors[i]) << "\n";
        }
    };
    rows("operator_kernel", rep.criterion1.kernels);
    rows("berezin", rep.criterion2);
    rows("geometric", rep.criterion3);
    for (std::size_t i = 0; i < rep.criterion1.polynomials.size(); ++i) {
        os << "operator_polynomial," << i << ",,";
        for (int j = 0; j < n; ++j) os << ",,";
        os << "," << rep.criterion1.polynomials[i] << ",,\n";
    }
}

// ---------------------------------------------------------------------------
// Covering

namespace {

bool in_region(const DomainSpec& spec, const CVec& z, double level) {
    return spec.in_box(to_real(z)) && spec.value(z) < -level;
}

std::vector<CVec> cover_candidates(const DomainSpec& spec, const CoverConfig& cfg) {
    const int dim = 2 * spec.dimension();
    DomainSampler sampler(spec);
    boost::random::sobol gen(static_cast<std::size_t>(dim));
    const double scale = 1.0 / (static_cast<double>(gen.max()) + 1.0);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> shift(static_cast<std::size_t>(dim)), u(static_cast<std::size_t>(dim));
    for (auto& s : shift) s = unif(rng);
    std::vector<CVec> out;
    CVec z;
    const std::size_t attempts = 64 * cfg.candidates + 1024;
    for (std::size_t a = 0; a < attempts && out.size() < cfg.candidates; ++a) {
        for (int d = 0; d < dim; ++d) {
            double x = static_cast<double>(gen()) * scale + shift[d];
            u[d] = x >= 1.0 ? x - 1.0 : x;
        }
        if (sampler.map(u, z) > 0.0 && in_region(spec, z, cfg.level)) out.push_back(z);
    }
    return out;
}

std::vector<CVec> cover_test_points(const DomainSpec& spec, const CoverConfig& cfg) {
    // Uniform in the region by rejection from the bounding box.
    const int n = spec.dimension();
    const double b = spec.box_half_width();
    std::mt19937_64 rng(cfg.seed ^ kGolden);
    std::uniform_real_distribution<double> unif(-b, b);
    std::vector<CVec> out;
    CVec z(n);
    const std::size_t attempts = 100'000 * (cfg.test_points + 1);
    for (std::size_t a = 0; a < attempts && out.size() < cfg.test_points; ++a) {
        for (int j = 0; j < n; ++j) z(j) = Complex(unif(rng), unif(rng));
        if (in_region(spec, z, cfg.level)) out.push_back(z);
    }
    if (out.size() < cfg.test_points) throw ResourceError("kobayashi_cover: the test region is too thin to sample");
    return out;
}

// True when tanh d_K(center, z) >= s is certified.
bool certified_outside(const DomainSpec& spec, const MinimalFrame& frame, double s, const CVec& z) {
    if (spec.has_exact_metric()) return !(pseudo_distance_model(spec, frame.center, z) < s);
    Polydisk outer = frame.polydisk().scaled(2.0 * s / (1.0 - s));
    return !(outer.gauge(z) < 1.0);
}

MinimalFrame frame_or_center(const DomainSpec& spec, const CVec& z) {
    if (spec.has_exact_metric()) {
        MinimalFrame f;
        f.center = z;
        return f;
    }
    return minimal_frame(spec, z);
}

}  // namespace

int overlap_count(const DomainSpec& spec, const std::vector<MinimalFrame>& frames, double R, const CVec& z) {
    if (!(R > 0.0 && R < 1.0)) throw PreconditionError("overlap_count: R must lie in (0, 1)");
    int count = 0;
    for (const auto& f : frames)
        if (!certified_outside(spec, f, R, z)) ++count;
    return count;
}

int overlap_count(const DomainSpec& spec, const std::vector<CVec>& centers, double R, const CVec& z) {
    std::vector<MinimalFrame> frames;
    frames.reserve(centers.size());
    for (const auto& c : centers) frames.push_back(frame_or_center(spec, c));
    return overlap_count(spec, frames, R, z);
}

CoverResult kobayashi_cover(const DomainSpec& spec, double r, const CoverConfig& cfg) {
    if (!(r > 0.0 && r < 1.0)) throw PreconditionError("kobayashi_cover: r must lie in (0, 1)");
    if (cfg.candidates == 0 || cfg.test_points == 0) throw ConfigError("kobayashi_cover: empty candidate or test set");
    if (!(cfg.level >= 0.0) || !(defining_value(spec, spec.anchor()) < -cfg.level))
        throw ConfigError("kobayashi_cover: the region level must leave the anchor inside");

    // Balls of radius r/3 at a and c can meet only when d(a, c) < 2 artanh(r/3).
    const double s = std::tanh(2.0 * std::atanh(r / 3.0));
    std::vector<MinimalFrame> frames;
    for (const auto& c : cover_candidates(spec, cfg)) {
        bool disjoint = true;
        for (const auto& f : frames)
            if (!certified_outside(spec, f, s, c)) {
                disjoint = false;
                break;
            }
        if (disjoint) frames.push_back(frame_or_center(spec, c));
    }

    CoverResult res;
    res.r = r;
    for (const auto& f : frames) res.centers.push_back(f.center);
    const auto tests = cover_test_points(spec, cfg);
    res.tested = tests.size();
    const double R = 0.5 * (1.0 + r);
    std::vector<int> state(tests.size(), 0), overlap(tests.size(), 0);
    detail::parallel_for(tests.size(), [&](std::size_t i) {
        const CVec& x = tests[i];
        overlap[i] = overlap_count(spec, frames, R, x);
        std::vector<std::pair<double, const MinimalFrame*>> maybe;
        for (const auto& f : frames) {
            if (spec.has_exact_metric()) {
                if (pseudo_distance_model(spec, f.center, x) < r) {
                    state[i] = 1;
                    return;
                }
                continue;
            }
            BallSandwich sw = ball_sandwich(f, r);
            if (sw.inner.gauge(x) < 1.0) {
                state[i] = 1;
                return;
            }
            double g = sw.outer.gauge(x);
            if (g < 1.0) maybe.emplace_back(g, &f);
        }
        // The path bound is costly; try the closest centers in outer gauge first.
        std::sort(maybe.begin(), maybe.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        if (maybe.size() > static_cast<std::size_t>(cfg.upper_checks)) maybe.resize(cfg.upper_checks);
        for (const auto& [g, f] : maybe)
            if (std::tanh(distance_upper(spec, f->center, x, cfg.refinement)) < r) {
                state[i] = 1;
                return;
            }
        state[i] = maybe.empty() ? 0 : 2;
    });
    for (std::size_t i = 0; i < tests.size(); ++i) {
        res.covered += state[i] == 1;
        res.uncertain += state[i] == 2;
        res.max_overlap = std::max(res.max_overlap, overlap[i]);
    }
    if (cfg.require_full_coverage && res.covered < res.tested)
        throw ResourceError("kobayashi_cover: " + std::to_string(res.tested - res.covered) + " of " +
                            std::to_string(res.tested) +
                            " test points are not certified covered; use denser candidates");
    return res;
}

// ---------------------------------------------------------------------------
// Sub-mean value inequalities

namespace {

// nu on the exact ball B(a, rad) of the unit ball: the automorphism carries rad * B onto it,
// with real Jacobian ((1 - |a|^2) / |1 - <v, a>|^2)^{n+1}.
class AutomorphicBallSampler final : public RegionSampler {
public:
    AutomorphicBallSampler(const DomainSpec& unit, const CVec& a, double rad) : base_(unit), a_(a), rad_(rad) {}
    int cube_dimension() const override { return base_.cube_dimension(); }
    double map(std::span<const double> u, CVec& point) const override {
        CVec v;
        double w = base_.map(u, v);
        v *= rad_;
        point = ball_automorphism(a_, v);
        const double jac = (1.0 - a_.squaredNorm()) / std::norm(1.0 - hermitian(v, a_));
        return w * std::pow(rad_, 2 * v.size()) * std::pow(jac, v.size() + 1);
    }

private:
    DomainSampler base_;
    CVec a_;
    double rad_;
};

}  // namespace

SubmeanResult submean_check(const DomainSpec& spec, const HoloPolynomial& f, const CVec& z0, double r,
                            const SamplingConfig& sampling) {
    if (!(r > 0.0 && r < 1.0)) throw PreconditionError("submean_check: r must lie in (0, 1)");
    if (!in_collar(spec, z0)) throw PreconditionError("submean_check: z0 must lie in the collar");
    const int n = spec.dimension();
    const double R = 0.5 * (1.0 + r);
    auto phi = [&](const CVec& z) { return std::norm(f(z)); };
    MinimalFrame frame = minimal_frame(spec, z0);
    BallSandwich br = ball_sandwich(frame, r);
    BallSandwich bR = ball_sandwich(frame, R);

    SubmeanResult res;
    res.phi = phi(z0);
    res.exact_balls = spec.has_exact_metric();
    const double lemma_factor = 2.0 * n / (1.0 - r);
    const double cor_factor = 8.0 * n * n * r / std::pow(1.0 - r, 3);

    double integral_r, volume_r, integral_R;
    if (res.exact_balls) {
        // Real part: phi on the ball; imaginary part: its volume.
        AutomorphicBallSampler sr(spec, z0, r);
        auto er = integrate_region(sr, sampling, [&](const CVec& z) { return Complex(phi(z), 1.0); });
        integral_r = er.value.real();
        volume_r = er.value.imag();
        AutomorphicBallSampler sR(spec, z0, R);
        integral_R = integrate_region(sR, sampling, [&](const CVec& z) { return Complex(phi(z), 0.0); }).value.real();
    } else {
        // Conservative: integrals over inner polydisks, volumes of outer ones.
        PolydiskSampler sr(br.inner, &spec);
        integral_r = integrate_region(sr, sampling, [&](const CVec& z) { return Complex(phi(z), 0.0); }).value.real();
        volume_r = br.outer.volume();
        PolydiskSampler sR(bR.inner, &spec);
        integral_R = integrate_region(sR, sampling, [&](const CVec& z) { return Complex(phi(z), 0.0); }).value.real();
    }
    if (!(volume_r > 0.0)) throw NumericError("submean_check: empty ball sample; increase the sample count");
    res.bound = lemma_factor * integral_r / volume_r;
    res.margin = res.bound - res.phi;

    // Corollary points: z0 and three points of the inner polydisk of B(z0, r).
    const double cor_bound = cor_factor * integral_R / volume_r;
    std::mt19937_64 rng(sampling.seed ^ kGolden);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    res.sub_margin = cor_bound - res.phi;
    for (int k = 0; k < 3; ++k) {
        CVec local(n);
        for (int j = 0; j < n; ++j) local(j) = std::polar(br.inner.radii(j) * std::sqrt(unif(rng)), 2.0 * kPi * unif(rng));
        CVec z = z0 + frame.basis * local;
        res.sub_margin = std::min(res.sub_margin, cor_bound - phi(z));
    }
    return res;
}

}  // namespace clab
