#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <json.hpp>
#include <random>
#include <sstream>

#include "carleson_lab/io.hpp"
#include "carleson_lab/sequences.hpp"

namespace clab::cli {

namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Options {
    std::string domain;
    std::string measure = "lebesgue";
    std::string point;
    std::string points;
    std::string out = ".";
    double r = 0.3;
    double r0 = 0.9;
    double sep = 0.5;
    double t_min = 1.0 / 1024.0;
    double half_angle = kPi;
    double angle = 0.0;
    double level = 0.2;
    std::uint64_t seed = 1;
    std::size_t samples = 20'000;
    std::size_t candidates = 40'000;
    std::size_t test_points = 10'000;
    std::size_t pairs = 1'000;
    int degree = 60;
    double tolerance = 1e-10;
    int levels = 8;
    int rays = 32;
    int polynomials = 16;
    int poly_degree = 4;
    int axis = 0;
    int weight_power = 1;
    int cluster = 0;
    int upper_checks = 1;
};

struct Context {
    std::string command;
    Options opt;
    DomainSpec spec;
    ojson config;
    std::ostream* out = nullptr;
};

// ---------------------------------------------------------------------------
// Validation and loading

void require_open_unit(double x, const char* name) {
    if (!(x > 0.0 && x < 1.0)) throw ConfigError(std::string("--") + name + " must lie in (0, 1)");
}

void check_samples(std::size_t s) {
    if (s < 2 || s > 100'000'000) throw ConfigError("--samples must lie in [2, 1e8]");
}

void check_degree(int d) {
    if (d < 0 || d > 200) throw ConfigError("--degree must lie in [0, 200]");
}

std::vector<double> parse_reals(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(cell, &used);
        } catch (const std::exception&) {
            throw ConfigError("--point: '" + cell + "' is not a number");
        }
        if (used != cell.size()) throw ConfigError("--point: '" + cell + "' is not a number");
        v.push_back(x);
    }
    return v;
}

CVec parse_point(const DomainSpec& spec, const std::string& text) {
    auto v = parse_reals(text);
    const int n = spec.dimension();
    if (v.size() != static_cast<std::size_t>(2 * n))
        throw ConfigError("--point needs " + std::to_string(2 * n) + " comma-separated reals x1,y1,...");
    CVec z(n);
    for (int j = 0; j < n; ++j) z(j) = Complex(v[2 * j], v[2 * j + 1]);
    return z;
}

std::vector<CVec> load_points(const Context& c) {
    if (!c.opt.point.empty() && !c.opt.points.empty()) throw ConfigError("give either --point or --points, not both");
    if (!c.opt.point.empty()) return {parse_point(c.spec, c.opt.point)};
    if (c.opt.points.empty()) throw ConfigError("--point or --points is required");
    std::istringstream in(read_file(c.opt.points));
    return read_points_csv(in, c.spec.dimension());
}

/// A catalog name, or an atomic measure CSV when the argument names a file.
Measure load_measure(const Context& c) {
    SamplingConfig s{c.opt.samples, c.opt.seed};
    if (fs::is_regular_file(c.opt.measure)) {
        std::istringstream in(read_file(c.opt.measure));
        return read_atomic_csv(c.spec, in);
    }
    return Measure::from_catalog(c.spec, c.opt.measure, s);
}

KernelModel model_for(const DomainSpec& spec, int degree, double tolerance) {
    if (spec.has_exact_metric()) return KernelModel::closed_form_ball(spec.dimension());
    if (spec.is_reinhardt()) return KernelModel::reinhardt_series(spec, degree, tolerance);
    throw CapabilityError("no Bergman kernel model for polynomial domains");
}

GridConfig grid_config(const Options& o) {
    GridConfig g;
    g.levels = o.levels;
    g.rays = o.rays;
    g.phase_center = o.angle;
    g.phase_half_width = o.half_angle;
    g.seed = o.seed;
    return g;
}

PackRegion pack_region(const Options& o) {
    PackRegion p;
    p.t_min = o.t_min;
    p.axis = o.axis;
    p.angle = o.angle;
    p.half_angle = o.half_angle;
    return p;
}

// ---------------------------------------------------------------------------
// Artifacts

std::string header_lines(const ojson& config) {
    return std::string("# carleson_lab ") + CARLESON_LAB_VERSION + "\n# config " + config.dump() + "\n";
}

void write_file(const Context& c, const std::string& name, const std::string& body) {
    fs::path dir(c.opt.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write '" + (dir / name).string() + "'");
    f << body;
    if (!f) throw ConfigError("cannot write '" + (dir / name).string() + "'");
}

void write_csv(const Context& c, const std::string& name, const std::function<void(std::ostream&)>& body) {
    std::ostringstream os;
    os << header_lines(c.config);
    body(os);
    write_file(c, name, os.str());
}

void write_summary(const Context& c, const ojson& results) {
    ojson doc;
    doc["version"] = CARLESON_LAB_VERSION;
    doc["command"] = c.command;
    doc["config"] = c.config;
    doc["results"] = results;
    std::string text = doc.dump(2) + "\n";
    write_file(c, c.command + ".json", text);
    *c.out << text;
}

ojson point_json(const CVec& z) {
    ojson a = ojson::array();
    for (Eigen::Index j = 0; j < z.size(); ++j) {
        a.push_back(z(j).real());
        a.push_back(z(j).imag());
    }
    return a;
}

void coords(std::ostream& os, const CVec& z) {
    for (Eigen::Index j = 0; j < z.size(); ++j) os << z(j).real() << "," << z(j).imag() << ",";
}

void coord_header(std::ostream& os, int n) {
    for (int j = 1; j <= n; ++j) os << "x" << j << ",y" << j << ",";
}

// ---------------------------------------------------------------------------
// Commands

void cmd_domain_info(Context& c) {
    const auto& s = c.spec;
    ojson res;
    res["kind"] = s.kind_name();
    res["dimension"] = s.dimension();
    res["reinhardt"] = s.is_reinhardt();
    res["exact_metric"] = s.has_exact_metric();
    res["collar"] = s.collar_width();
    res["box_half_width"] = s.box_half_width();
    res["anchor"] = point_json(s.anchor());
    res["anchor_boundary_distance"] = boundary_distance(s, s.anchor());
    if (s.is_reinhardt()) res["axis_boundary_types"] = s.axis_boundary_types();
    write_csv(c, "domain-info.csv", [&](std::ostream& os) {
        // Boundary distance along each coordinate axis at dyadic depths: plot data for the collar.
        os << "axis,level,";
        coord_header(os, s.dimension());
        os << "delta,in_collar\n" << std::setprecision(17);
        GridConfig g;
        g.levels = c.opt.levels;
        g.rays = 1;
        g.interior = 0;
        g.phase_half_width = kPi;
        auto grid = make_grid(s, g);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            os << i / static_cast<std::size_t>(g.levels) << "," << grid[i].level << ",";
            coords(os, grid[i].point);
            os << grid[i].delta << "," << (in_collar(s, grid[i].point) ? 1 : 0) << "\n";
        }
    });
    write_summary(c, res);
}

void cmd_frame(Context& c) {
    auto pts = load_points(c);
    const int n = c.spec.dimension();
    std::vector<MinimalFrame> frames;
    for (const auto& z : pts) frames.push_back(minimal_frame(c.spec, z));
    write_csv(c, "frame.csv", [&](std::ostream& os) {
        coord_header(os, n);
        for (int i = 1; i <= n; ++i) os << "sigma" << i << ",";
        os << "sigma_product,unique\n" << std::setprecision(17);
        for (const auto& f : frames) {
            coords(os, f.center);
            for (int i = 0; i < n; ++i) os << f.sigma(i) << ",";
            os << f.sigma_product() << "," << (f.unique ? 1 : 0) << "\n";
        }
    });
    ojson res = ojson::array();
    for (const auto& f : frames) {
        ojson e;
        e["point"] = point_json(f.center);
        e["sigma"] = std::vector<double>(f.sigma.data(), f.sigma.data() + f.sigma.size());
        e["unique"] = f.unique;
        res.push_back(e);
    }
    write_summary(c, {{"frames", res}});
}

void cmd_kernel_check(Context& c) {
    const auto& s = c.spec;
    if (!s.is_reinhardt()) throw CapabilityError("kernel-check needs a Reinhardt domain");
    const int n = s.dimension();
    auto series = KernelModel::reinhardt_series(s, c.opt.degree, c.opt.tolerance);
    ojson res;
    std::mt19937_64 rng(c.opt.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss;
    std::vector<double> rel;
    if (s.has_exact_metric()) {
        // Random pairs with |z|, |w| <= 0.7 against the closed form.
        auto exact = KernelModel::closed_form_ball(n);
        auto draw = [&] {
            CVec z(n);
            for (int j = 0; j < n; ++j) z(j) = Complex(gauss(rng), gauss(rng));
            return CVec(z / z.norm() * (0.7 * std::pow(unif(rng), 1.0 / (2 * n))));
        };
        double worst = 0.0;
        for (std::size_t i = 0; i < c.opt.pairs; ++i) {
            CVec z = draw(), w = draw();
            Complex a = kernel(series, z, w), b = kernel(exact, z, w);
            rel.push_back(std::abs(a - b) / std::abs(b));
            worst = std::max(worst, rel.back());
        }
        res["pairs"] = c.opt.pairs;
        res["max_relative_error"] = worst;
    }
    std::vector<double> residuals;
    const int deg = std::min(5, c.opt.degree - 2);
    if (deg >= 0) {
        for (int i = 0; i < 5; ++i) {
            auto f = random_polynomial(n, deg, rng);
            CVec z(n);
            for (int j = 0; j < n; ++j) z(j) = 0.0;
            z(0) = Complex(0.3 * unif(rng), 0.3 * unif(rng));
            residuals.push_back(reproduce_check(s, series, f, z, SamplingConfig{c.opt.samples, c.opt.seed + i}).residual);
        }
        res["reproduce_residuals"] = residuals;
    }
    write_csv(c, "kernel-check.csv", [&](std::ostream& os) {
        os << "check,index,value\n" << std::setprecision(17);
        for (std::size_t i = 0; i < rel.size(); ++i) os << "relative_error," << i << "," << rel[i] << "\n";
        for (std::size_t i = 0; i < residuals.size(); ++i) os << "reproduce_residual," << i << "," << residuals[i] << "\n";
    });
    write_csv(c, "moments.csv", [&](std::ostream& os) {
        os << std::setprecision(17);
        write_moment_csv(os, series.table());
    });
    write_summary(c, res);
}

void cmd_berezin(Context& c) {
    auto pts = load_points(c);
    auto mu = load_measure(c);
    auto model = model_for(c.spec, c.opt.degree, c.opt.tolerance);
    std::vector<Estimate> est;
    for (const auto& z : pts) est.push_back(berezin(c.spec, model, mu, z));
    write_csv(c, "berezin.csv", [&](std::ostream& os) {
        coord_header(os, c.spec.dimension());
        os << "value,std_error\n" << std::setprecision(17);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            coords(os, pts[i]);
            os << est[i].value << "," << est[i].std_error << "\n";
        }
    });
    ojson res = ojson::array();
    for (std::size_t i = 0; i < pts.size(); ++i)
        res.push_back({{"point", point_json(pts[i])}, {"value", est[i].value}, {"std_error", est[i].std_error}});
    write_summary(c, {{"berezin", res}});
}

CarlesonConfig carleson_config(const Options& o) {
    CarlesonConfig cfg;
    cfg.r = o.r;
    cfg.r0 = o.r0;
    cfg.grid = grid_config(o);
    cfg.dictionary.polynomials = o.polynomials;
    cfg.dictionary.degree = o.poly_degree;
    cfg.dictionary.seed = o.seed;
    return cfg;
}

ojson report_json(const CarlesonReport& rep) {
    ojson j;
    j["measure"] = rep.measure_name;
    j["grid_points"] = rep.grid.size();
    j["criterion1_sup"] = rep.criterion1_sup;
    j["criterion2_sup"] = rep.criterion2_sup;
    j["criterion3_sup"] = rep.criterion3_sup;
    j["verdict1"] = to_string(rep.criterion1.kernels.verdict);
    j["verdict2"] = to_string(rep.criterion2.verdict);
    j["verdict3"] = to_string(rep.criterion3.verdict);
    j["fitted_c"] = rep.fitted_c;
    j["fitted_cr"] = rep.fitted_cr;
    j["identity_gap"] = rep.identity_gap;
    j["level_sup2"] = rep.criterion2.level_sup;
    j["level_sup3"] = rep.criterion3.level_sup;
    return j;
}

void write_levels(const Context& c, const std::string& name, const CarlesonReport& rep) {
    write_csv(c, name, [&](std::ostream& os) {
        os << "level,delta,operator_kernel,berezin,geometric\n" << std::setprecision(17);
        const auto& s1 = rep.criterion1.kernels.level_sup;
        std::vector<double> delta(s1.size(), 0.0);
        for (const auto& g : rep.grid)
            if (g.level > 0) delta[g.level] = std::max(delta[g.level], g.delta);
        for (std::size_t k = 1; k < s1.size(); ++k)
            os << k << "," << delta[k] << "," << s1[k] << "," << rep.criterion2.level_sup[k] << ","
               << rep.criterion3.level_sup[k] << "\n";
    });
}

void cmd_carleson(Context& c) {
    auto mu = load_measure(c);
    auto model = model_for(c.spec, c.opt.degree, c.opt.tolerance);
    auto rep = carleson_test(c.spec, model, mu, carleson_config(c.opt));
    write_csv(c, "carleson.csv", [&](std::ostream& os) { write_report_csv(os, rep); });
    write_levels(c, "carleson-levels.csv", rep);
    write_summary(c, report_json(rep));
}

void cmd_cover(Context& c) {
    CoverConfig cfg;
    cfg.level = c.opt.level;
    cfg.candidates = c.opt.candidates;
    cfg.test_points = c.opt.test_points;
    cfg.seed = c.opt.seed;
    cfg.require_full_coverage = false;
    cfg.upper_checks = c.opt.upper_checks;
    auto res = kobayashi_cover(c.spec, c.opt.r, cfg);
    write_csv(c, "cover.csv", [&](std::ostream& os) { write_points_csv(os, res.centers); });
    ojson j;
    j["centers"] = res.centers.size();
    j["tested"] = res.tested;
    j["covered"] = res.covered;
    j["uncertain"] = res.uncertain;
    j["coverage"] = res.coverage();
    j["overlap_R"] = (1.0 + c.opt.r) / 2.0;
    j["max_overlap"] = res.max_overlap;
    write_summary(c, j);
    if (res.covered < res.tested)
        throw ResourceError("kobayashi_cover: " + std::to_string(res.tested - res.covered) +
                            " test points not certified covered; try more --candidates");
}

void cmd_decompose(Context& c) {
    SequenceSet gamma(c.spec, load_points(c));
    auto colors = greedy_colors(c.spec, gamma, c.opt.r);
    auto parts = greedy_decompose(c.spec, gamma, c.opt.r);
    int max_count = 0;
    for (const auto& x : gamma.points()) max_count = std::max(max_count, count_in_ball(c.spec, x, c.opt.r, gamma).count);
    write_csv(c, "decompose.csv", [&](std::ostream& os) { write_points_csv(os, gamma.points(), &colors); });
    ojson seps = ojson::array();
    for (const auto& p : parts) {
        double s = separation(c.spec, p);
        seps.push_back(std::isinf(s) ? ojson("inf") : ojson(s));
    }
    write_summary(c, {{"points", gamma.size()}, {"parts", parts.size()}, {"max_count", max_count},
                      {"part_separations", seps}});
}

void cmd_pack(Context& c) {
    require_open_unit(c.opt.sep, "sep");
    auto res = greedy_packing(c.spec, c.opt.sep, pack_region(c.opt), c.opt.seed, c.opt.candidates);
    double s = separation(c.spec, res.set);
    write_csv(c, "pack.csv", [&](std::ostream& os) { write_points_csv(os, res.set.points()); });
    write_summary(c, {{"points", res.set.size()},
                      {"separation", std::isinf(s) ? ojson("inf") : ojson(s)},
                      {"candidates", res.candidates},
                      {"exhausted", res.exhausted}});
}

void cmd_thm42(Context& c) {
    SequenceSet gamma;
    std::string source;
    if (c.opt.cluster > 0) {
        gamma = boundary_cluster(c.spec, c.opt.cluster, c.opt.axis);
        source = "cluster";
    } else if (!c.opt.points.empty() || !c.opt.point.empty()) {
        gamma = SequenceSet(c.spec, load_points(c));
        source = "points";
    } else {
        require_open_unit(c.opt.sep, "sep");
        gamma = greedy_packing(c.spec, c.opt.sep, pack_region(c.opt), c.opt.seed, c.opt.candidates).set;
        source = "packing";
    }
    Thm42Config cfg;
    cfg.carleson = carleson_config(c.opt);
    cfg.decompose_r = c.opt.r;
    cfg.weight_power = c.opt.weight_power;
    auto model = model_for(c.spec, c.opt.degree, c.opt.tolerance);
    auto rep = thm42_pipeline(c.spec, model, gamma, cfg);
    write_csv(c, "thm42-points.csv", [&](std::ostream& os) { write_points_csv(os, gamma.points()); });
    write_csv(c, "thm42.csv", [&](std::ostream& os) { write_report_csv(os, rep.carleson); });
    write_levels(c, "thm42-levels.csv", rep.carleson);
    ojson j;
    j["source"] = source;
    j["points"] = rep.points;
    j["separation"] = std::isinf(rep.separation) ? ojson("inf") : ojson(rep.separation);
    j["colors"] = rep.colors;
    j["max_count"] = rep.max_count;
    j["statement3_sup"] = rep.statement3_sup;
    j["envelope"] = std::isinf(rep.envelope) ? ojson("inf") : ojson(rep.envelope);
    j["separated"] = rep.separated;
    j["directions_agree"] = rep.directions_agree;
    j["carleson"] = report_json(rep.carleson);
    write_summary(c, j);
}

// ---------------------------------------------------------------------------
// Wiring

struct Command {
    const char* name;
    const char* help;
    void (*fn)(Context&);
    std::vector<std::string> keys;  // options that enter the config echo
};

const std::vector<Command>& commands() {
    static const std::vector<Command> table = {
        {"domain-info", "Summarize a domain and write boundary-distance plot data", cmd_domain_info, {"levels"}},
        {"frame", "Minimal frames sigma_i at points", cmd_frame, {"point", "points"}},
        {"kernel-check", "Series kernel vs closed form and reproducing residuals", cmd_kernel_check,
         {"degree", "tolerance", "seed", "samples", "pairs"}},
        {"berezin", "Berezin transform of a measure at points", cmd_berezin,
         {"measure", "point", "points", "seed", "samples", "degree", "tolerance"}},
        {"carleson", "Run the three Carleson criteria on a grid", cmd_carleson,
         {"measure", "r", "r0", "seed", "samples", "degree", "tolerance", "levels", "rays", "angle", "half-angle", "polynomials",
          "poly-degree"}},
        {"cover", "Greedy Kobayashi-ball cover and overlap", cmd_cover,
         {"r", "seed", "candidates", "test-points", "level", "upper-checks"}},
        {"decompose", "Greedy decomposition into r-separated parts", cmd_decompose, {"points", "point", "r"}},
        {"pack", "Greedy separated packing", cmd_pack,
         {"sep", "seed", "candidates", "t-min", "axis", "angle", "half-angle"}},
        {"thm42", "Sequence-measure pipeline", cmd_thm42,
         {"points", "point", "cluster", "sep", "seed", "candidates", "t-min", "axis", "angle", "half-angle", "r",
          "r0", "weight-power", "degree", "tolerance", "levels", "rays", "polynomials", "poly-degree"}},
    };
    return table;
}

ojson option_value(const Options& o, const std::string& key) {
    if (key == "measure") return o.measure;
    if (key == "point") return o.point;
    if (key == "points") return o.points;
    if (key == "r") return o.r;
    if (key == "r0") return o.r0;
    if (key == "sep") return o.sep;
    if (key == "t-min") return o.t_min;
    if (key == "half-angle") return o.half_angle;
    if (key == "angle") return o.angle;
    if (key == "level") return o.level;
    if (key == "seed") return o.seed;
    if (key == "samples") return o.samples;
    if (key == "candidates") return o.candidates;
    if (key == "test-points") return o.test_points;
    if (key == "pairs") return o.pairs;
    if (key == "degree") return o.degree;
    if (key == "tolerance") return o.tolerance;
    if (key == "levels") return o.levels;
    if (key == "rays") return o.rays;
    if (key == "polynomials") return o.polynomials;
    if (key == "poly-degree") return o.poly_degree;
    if (key == "axis") return o.axis;
    if (key == "weight-power") return o.weight_power;
    if (key == "cluster") return o.cluster;
    if (key == "upper-checks") return o.upper_checks;
    return nullptr;
}

void add_options(CLI::App* sub, Options& o, const std::vector<std::string>& keys) {
    sub->add_option("--domain", o.domain, "Domain JSON file")->required();
    sub->add_option("--out", o.out, "Output directory")->capture_default_str();
    auto has = [&](const char* k) { return std::find(keys.begin(), keys.end(), k) != keys.end(); };
    if (has("measure")) sub->add_option("--measure", o.measure, "Catalog name or atomic CSV file")->capture_default_str();
    if (has("point")) sub->add_option("--point", o.point, "Point as x1,y1,...,xn,yn");
    if (has("points")) sub->add_option("--points", o.points, "CSV point list");
    if (has("r")) sub->add_option("--r", o.r, "Ball radius (tanh scale)")->capture_default_str();
    if (has("r0")) sub->add_option("--r0", o.r0, "Upper limit for r")->capture_default_str();
    if (has("sep")) sub->add_option("--sep", o.sep, "Packing separation")->capture_default_str();
    if (has("t-min")) sub->add_option("--t-min", o.t_min, "Smallest relative depth of packing candidates")->capture_default_str();
    if (has("half-angle")) sub->add_option("--half-angle", o.half_angle, "Phase half width")->capture_default_str();
    if (has("angle")) sub->add_option("--angle", o.angle, "Phase center")->capture_default_str();
    if (has("level")) sub->add_option("--level", o.level, "Region {r < -level}")->capture_default_str();
    if (has("seed")) sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    if (has("samples")) sub->add_option("--samples", o.samples, "Monte Carlo samples")->capture_default_str();
    if (has("candidates")) sub->add_option("--candidates", o.candidates, "Candidate count")->capture_default_str();
    if (has("test-points")) sub->add_option("--test-points", o.test_points, "Coverage test points")->capture_default_str();
    if (has("pairs")) sub->add_option("--pairs", o.pairs, "Random kernel pairs")->capture_default_str();
    if (has("degree")) sub->add_option("--degree", o.degree, "Series degree N")->capture_default_str();
    if (has("tolerance"))
        sub->add_option("--tolerance", o.tolerance, "Series tail tolerance relative to the kernel size")->capture_default_str();
    if (has("levels")) sub->add_option("--levels", o.levels, "Dyadic grid levels")->capture_default_str();
    if (has("rays")) sub->add_option("--rays", o.rays, "Rays per axis")->capture_default_str();
    if (has("polynomials")) sub->add_option("--polynomials", o.polynomials, "Dictionary polynomials")->capture_default_str();
    if (has("poly-degree")) sub->add_option("--poly-degree", o.poly_degree, "Dictionary polynomial degree")->capture_default_str();
    if (has("axis")) sub->add_option("--axis", o.axis, "Coordinate axis (0-based)")->capture_default_str();
    if (has("weight-power")) sub->add_option("--weight-power", o.weight_power, "Power of prod sigma_i in the weights")->capture_default_str();
    if (has("upper-checks"))
        sub->add_option("--upper-checks", o.upper_checks, "Distance upper bounds tried per test point")->capture_default_str();
    if (has("cluster")) sub->add_option("--cluster", o.cluster, "Use a boundary cluster with this many levels")->capture_default_str();
}

void validate(const Options& o, const std::vector<std::string>& keys) {
    auto has = [&](const char* k) { return std::find(keys.begin(), keys.end(), k) != keys.end(); };
    if (has("r")) require_open_unit(o.r, "r");
    if (has("samples")) check_samples(o.samples);
    if (has("degree")) check_degree(o.degree);
    if (has("tolerance") && !(o.tolerance > 0.0 && o.tolerance < 1.0)) throw ConfigError("--tolerance must lie in (0, 1)");
    if (has("candidates") && o.candidates == 0) throw ConfigError("--candidates must be positive");
    if (has("pairs") && o.pairs == 0) throw ConfigError("--pairs must be positive");
    if (has("polynomials") && o.polynomials < 0) throw ConfigError("--polynomials must be nonnegative");
    if (has("poly-degree") && o.poly_degree < 0) throw ConfigError("--poly-degree must be nonnegative");
    if (has("upper-checks") && o.upper_checks < 0) throw ConfigError("--upper-checks must be nonnegative");
    if (has("cluster") && (o.cluster < 0 || o.cluster > 20)) throw ConfigError("--cluster must lie in [0, 20]");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"carleson-lab: Carleson measure experiments on convex domains"};
    app.set_version_flag("--version", std::string(CARLESON_LAB_VERSION));
    app.require_subcommand(1);
    std::vector<Options> opts(commands().size());
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < commands().size(); ++i) {
        const auto& c = commands()[i];
        auto* sub = app.add_subcommand(c.name, c.help);
        add_options(sub, opts[i], c.keys);
        subs.push_back(sub);
    }
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << CARLESON_LAB_VERSION << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        if (!app.get_subcommands().empty()) {
            auto* s = app.get_subcommands().front();
            if (s->get_help_ptr() && s->get_help_ptr()->count() > 0) {
                out << s->help();
                return 0;
            }
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    std::size_t which = 0;
    while (!subs[which]->parsed()) ++which;
    const auto& cmd = commands()[which];
    try {
        validate(opts[which], cmd.keys);
        Context c{cmd.name, opts[which], load_domain(opts[which].domain), {}, &out};
        c.config["command"] = cmd.name;
        c.config["domain"] = ojson::parse(domain_json(c.spec));
        for (const auto& k : cmd.keys) c.config[k] = option_value(c.opt, k);
        cmd.fn(c);
    } catch (const ValidationError& e) {
        err << "error (" << cmd.name << "): " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        err << "numeric error (" << cmd.name << "): " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        err << "numeric error (" << cmd.name << "): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "numeric error (" << cmd.name << "): " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace clab::cli
