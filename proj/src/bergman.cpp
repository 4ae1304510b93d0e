#include "carleson_lab/bergman.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace clab {

std::vector<MultiIndex> multi_indices(int n, int degree) {
    std::vector<MultiIndex> out;
    MultiIndex a(static_cast<std::size_t>(n), 0);
    // Enumerate each total degree d in lexicographic order (descending first entry).
    for (int d = 0; d <= degree; ++d) {
        std::function<void(int, int)> rec = [&](int j, int left) {
            if (j == n - 1) {
                a[j] = left;
                out.push_back(a);
                return;
            }
            for (int k = left; k >= 0; --k) {
                a[j] = k;
                rec(j + 1, left - k);
            }
        };
        rec(0, d);
    }
    return out;
}

std::size_t MomentTable::index_of(const MultiIndex& alpha) const {
    // Offset of the degree block plus the rank inside it.
    int d = 0;
    for (int a : alpha) d += a;
    if (d > degree) throw PreconditionError("MomentTable: multi-index exceeds the table degree");
    for (std::size_t i = 0; i < alphas.size(); ++i)
        if (alphas[i] == alpha) return i;
    throw PreconditionError("MomentTable: multi-index not found");
}

namespace {

double ipow(double x, int p) {
    double r = 1.0;
    for (int k = 0; k < p; ++k) r *= x;
    return r;
}

double moment_by_quadrature(const DomainSpec& spec, const MultiIndex& alpha) {
    const int n = spec.dimension();
    const auto& axes = spec.semi_axes();
    const auto& exps = spec.exponents();
    boost::math::quadrature::tanh_sinh<double> ts;
    double worst_rel_err = 0.0;

    // Nested radial integrals: the last coordinate is integrated in closed form.
    std::function<double(int, double)> level = [&](int j, double budget) -> double {
        if (budget <= 0.0) return 0.0;
        const double a = axes[j];
        const int m = exps[j];
        const double rmax = a * std::pow(budget, 1.0 / (2.0 * m));
        if (j == n - 1) return std::pow(rmax, 2 * alpha[j] + 2) / (2 * alpha[j] + 2);
        auto f = [&](double rho) {
            double rest = budget - std::pow(rho / a, 2 * m);
            return ipow(rho, 2 * alpha[j] + 1) * level(j + 1, std::max(rest, 0.0));
        };
        double err = 0.0, l1 = 0.0;
        double v = ts.integrate(f, 0.0, rmax, 1e-12, &err, &l1);
        // Inner levels feed the outer integrand; the outermost error covers their noise.
        if (j == 0 && v > 0.0) worst_rel_err = err / v;
        return v;
    };
    double v = factorial(n) * std::pow(2.0, n) * level(0, 1.0);
    if (!(v > 0.0) || !std::isfinite(v) || worst_rel_err > 1e-10) {
        std::ostringstream os;
        os << "moments: quadrature did not converge for alpha = (";
        for (std::size_t i = 0; i < alpha.size(); ++i) os << (i ? "," : "") << alpha[i];
        os << ")";
        throw NumericError(os.str());
    }
    return v;
}

double ball_moment(int n, const MultiIndex& alpha) {
    // alpha! n! / (n + |alpha|)!
    int total = 0;
    double lg = std::lgamma(n + 1.0);
    for (int a : alpha) {
        total += a;
        lg += std::lgamma(a + 1.0);
    }
    return std::exp(lg - std::lgamma(n + total + 1.0));
}

}  // namespace

MomentTable moments(const DomainSpec& spec, int degree) {
    if (!spec.is_reinhardt()) throw CapabilityError("moments: the domain is not Reinhardt");
    if (degree < 0 || degree > 200) throw ConfigError("moments: degree must lie in [0, 200]");
    MomentTable t;
    t.dimension = spec.dimension();
    t.degree = degree;
    t.alphas = multi_indices(t.dimension, degree);
    t.values.reserve(t.alphas.size());
    for (const auto& a : t.alphas) t.values.push_back(moment_by_quadrature(spec, a));
    return t;
}

void write_moment_csv(std::ostream& os, const MomentTable& table) {
    for (int j = 0; j < table.dimension; ++j) os << "a" << (j + 1) << ",";
    os << "moment\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < table.alphas.size(); ++i) {
        for (int a : table.alphas[i]) os << a << ",";
        os << table.values[i] << "\n";
    }
}

MomentTable read_moment_csv(std::istream& is) {
    std::string line;
    do {
        if (!std::getline(is, line)) throw ConfigError("moment CSV: empty input");
    } while (!line.empty() && line[0] == '#');
    int cols = 1;
    for (char c : line) cols += (c == ',');
    MomentTable t;
    t.dimension = cols - 1;
    if (t.dimension < 1) throw ConfigError("moment CSV: header needs multi-index columns");
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        MultiIndex a;
        for (int j = 0; j < t.dimension; ++j) {
            if (!std::getline(ss, cell, ',')) throw ConfigError("moment CSV: short row");
            a.push_back(std::stoi(cell));
        }
        if (!std::getline(ss, cell, ',')) throw ConfigError("moment CSV: missing moment value");
        double v = std::stod(cell);
        if (!(v > 0.0)) throw ValidationError("moment CSV: moments must be positive");
        int d = 0;
        for (int x : a) d += x;
        t.degree = std::max(t.degree, d);
        t.alphas.push_back(std::move(a));
        t.values.push_back(v);
    }
    if (t.alphas.size() != multi_indices(t.dimension, t.degree).size())
        throw ConfigError("moment CSV: table is not complete up to its degree");
    return t;
}

Complex HoloPolynomial::operator()(const CVec& z) const {
    Complex acc{0, 0};
    for (const auto& [alpha, c] : terms) {
        Complex m = c;
        for (std::size_t j = 0; j < alpha.size(); ++j) m *= std::pow(z(static_cast<Eigen::Index>(j)), alpha[j]);
        acc += m;
    }
    return acc;
}

int HoloPolynomial::degree() const {
    int d = 0;
    for (const auto& [alpha, c] : terms) {
        int s = 0;
        for (int a : alpha) s += a;
        d = std::max(d, s);
    }
    return d;
}

HoloPolynomial random_polynomial(int n, int degree, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    HoloPolynomial f;
    for (auto& a : multi_indices(n, degree)) f.terms.emplace_back(std::move(a), Complex(g(rng), g(rng)));
    return f;
}

KernelModel KernelModel::closed_form_ball(int n) {
    if (n < 1) throw ConfigError("closed_form_ball: dimension must be >= 1");
    KernelModel k;
    k.variant_ = Variant::ClosedFormBall;
    k.n_ = n;
    k.table_.dimension = n;
    return k;
}

KernelModel KernelModel::reinhardt_series(const DomainSpec& spec, int degree, double tolerance) {
    return from_table(moments(spec, degree), tolerance);
}

KernelModel KernelModel::from_table(MomentTable table, double tolerance) {
    for (double v : table.values)
        if (!(v > 0.0)) throw ValidationError("KernelModel: moments must be strictly positive");
    KernelModel k;
    k.variant_ = Variant::ReinhardtSeries;
    k.n_ = table.dimension;
    k.table_ = std::move(table);
    k.tolerance_ = tolerance;
    return k;
}

double KernelModel::moment(const MultiIndex& alpha) const {
    if (variant_ == Variant::ClosedFormBall) return ball_moment(n_, alpha);
    return table_.values[table_.index_of(alpha)];
}

KernelValue kernel_with_tail(const KernelModel& model, const CVec& z, const CVec& w) {
    if (z.size() != model.dimension() || w.size() != model.dimension())
        throw InputDomainError("kernel: dimension mismatch");
    if (model.variant() == KernelModel::Variant::ClosedFormBall) {
        Complex s = 1.0 - hermitian(z, w);
        return {std::pow(s, -(model.dimension() + 1)), 0.0};
    }
    const auto& t = model.table();
    const int n = t.dimension;
    const int N = t.degree;
    // Powers of z_j conj(w_j).
    std::vector<Complex> pw(static_cast<std::size_t>(n * (N + 1)));
    std::vector<double> apw(pw.size());
    for (int j = 0; j < n; ++j) {
        Complex x = z(j) * std::conj(w(j));
        double ax = std::abs(x);
        pw[j * (N + 1)] = 1.0;
        apw[j * (N + 1)] = 1.0;
        for (int k = 1; k <= N; ++k) {
            pw[j * (N + 1) + k] = pw[j * (N + 1) + k - 1] * x;
            apw[j * (N + 1) + k] = apw[j * (N + 1) + k - 1] * ax;
        }
    }
    std::vector<double> block(static_cast<std::size_t>(N + 1), 0.0);
    Complex sum{0, 0};
    for (std::size_t i = 0; i < t.alphas.size(); ++i) {
        const auto& alpha = t.alphas[i];
        Complex term = 1.0 / t.values[i];
        double mag = term.real();
        int d = 0;
        for (int j = 0; j < n; ++j) {
            term *= pw[j * (N + 1) + alpha[j]];
            mag *= apw[j * (N + 1) + alpha[j]];
            d += alpha[j];
        }
        sum += term;
        block[d] += mag;
    }
    double tail = 0.0;
    if (N >= 1 && block[N] > 0.0) {
        double q = block[N - 1] > 0.0 ? block[N] / block[N - 1] : 1.0;
        tail = q < 1.0 ? block[N] * q / (1.0 - q) : std::numeric_limits<double>::infinity();
    }
    // Scaled by the absolutely convergent sum so cancellation off the diagonal does not trip the check.
    double scale = 0.0;
    for (double b : block) scale += b;
    if (tail > model.tolerance() * std::max(scale, 1e-300)) {
        std::ostringstream os;
        os << "kernel: series tail estimate " << tail << " exceeds tolerance at degree " << N;
        throw TruncationError(os.str(), N, tail);
    }
    return {sum, tail};
}

Complex kernel(const KernelModel& model, const CVec& z, const CVec& w) { return kernel_with_tail(model, z, w).value; }

double kernel_diagonal(const KernelModel& model, const CVec& z) { return kernel(model, z, z).real(); }

Complex normalized_kernel(const KernelModel& model, const CVec& z, const CVec& z0) {
    double d = kernel_diagonal(model, z0);
    if (!(d > 0.0)) throw NumericError("normalized_kernel: K(z0, z0) is not positive");
    return kernel(model, z, z0) / std::sqrt(d);
}

double polynomial_norm_squared(const KernelModel& model, const HoloPolynomial& f) {
    double acc = 0.0;
    for (const auto& [alpha, c] : f.terms) acc += std::norm(c) * model.moment(alpha);
    return acc;
}

ReproduceResult reproduce_check(const DomainSpec& spec, const KernelModel& model, const HoloPolynomial& f,
                                const CVec& z, const SamplingConfig& sampling) {
    if (model.variant() == KernelModel::Variant::ReinhardtSeries && f.degree() > model.degree() - 2)
        throw PreconditionError("reproduce_check: polynomial degree must be at most N - 2");
    if (f.terms.empty()) return {{0, 0}, 0.0, 0.0};
    DomainSampler sampler(spec);
    auto est = integrate_region(sampler, sampling, [&](const CVec& zeta) { return kernel(model, z, zeta) * f(zeta); });
    return {est.value, std::abs(est.value - f(z)), est.std_error};
}

namespace {

// integral of factor(zeta) d mu(zeta), where factor carries |k_z(zeta)|^2. On the disk
// and ball with the closed-form kernel, zeta = ball_automorphism(z, u) turns |k_z|^2 d nu into d nu(u),
// which removes the peak at z from the sampled integrand.
Estimate kernel_average(const DomainSpec& spec, const KernelModel& model, const Measure& mu, const CVec& z,
                        const std::function<double(const CVec&)>& factor) {
    if (mu.kind() == MeasureKind::Atomic) return mu.integrate(spec, factor);
    const int n = spec.dimension();
    if (model.variant() == KernelModel::Variant::ClosedFormBall && spec.has_exact_metric() &&
        model.dimension() == n) {
        const double scale = std::pow(1.0 - z.squaredNorm(), n + 1);
        DomainSampler sampler(spec);
        auto est = integrate_region(sampler, mu.sampling(), [&](const CVec& u) {
            CVec zeta = ball_automorphism(z, u);
            double d = mu.density_at(zeta);
            if (d == 0.0) return Complex{0, 0};
            double jac = scale / std::pow(std::norm(1.0 - hermitian(u, z)), n + 1);
            return Complex(d * factor(zeta) * jac, 0.0);
        });
        return {est.value.real(), est.std_error, est.samples};
    }
    return mu.integrate(spec, factor);
}

}  // namespace

Estimate berezin(const DomainSpec& spec, const KernelModel& model, const Measure& mu, const CVec& z) {
    double kzz = kernel_diagonal(model, z);
    if (!(kzz > 0.0)) throw NumericError("berezin: K(z, z) is not positive");
    return kernel_average(spec, model, mu, z, [&](const CVec& zeta) { return std::norm(kernel(model, zeta, z)) / kzz; });
}

Estimate kernel_quotient(const DomainSpec& spec, const KernelModel& model, const Measure& mu, const CVec& z0) {
    return kernel_average(spec, model, mu, z0,
                          [&](const CVec& zeta) { return std::norm(normalized_kernel(model, zeta, z0)); });
}

double diagonal_lowerbound_check(const DomainSpec& spec, const KernelModel& model, const std::vector<CVec>& samples) {
    double inf = std::numeric_limits<double>::infinity();
    for (const auto& z : samples) {
        double s = minimal_frame(spec, z).sigma_product();
        inf = std::min(inf, kernel_diagonal(model, z) * s * s);
    }
    return inf;
}

OffDiagonalCheck offdiagonal_lowerbound_check(const DomainSpec& spec, const KernelModel& model, double r,
                                              const std::vector<CVec>& samples, int per_center, std::uint64_t seed,
                                              double r0) {
    if (!(r > 0.0 && r < r0)) throw PreconditionError("offdiagonal_lowerbound_check: r must lie in (0, r0)");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    OffDiagonalCheck out{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0};
    for (const auto& z0 : samples) {
        MinimalFrame f = minimal_frame(spec, z0);
        BallSandwich s = ball_sandwich(f, r);
        double p2 = f.sigma_product() * f.sigma_product();
        for (int k = 0; k < per_center; ++k) {
            CVec local(spec.dimension());
            for (Eigen::Index j = 0; j < local.size(); ++j)
                local(j) = std::polar(s.inner.radii(j) * std::sqrt(unif(rng)), 2.0 * kPi * unif(rng));
            CVec w = k == 0 ? z0 : CVec(z0 + f.basis * local);
            out.kernel_inf = std::min(out.kernel_inf, kernel(model, z0, w).real() * p2);
            out.normalized_inf = std::min(out.normalized_inf, std::norm(normalized_kernel(model, w, z0)) * p2);
            ++out.pairs;
        }
    }
    return out;
}

double first_order_bound_check(const DomainSpec& spec, const KernelModel& model, double r,
                               const std::vector<CVec>& samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double sup = 0.0;
    for (const auto& z : samples) {
        MinimalFrame f = minimal_frame(spec, z);
        BallSandwich s = ball_sandwich(f, r);
        double p2 = f.sigma_product() * f.sigma_product();
        CVec local(spec.dimension());
        for (Eigen::Index j = 0; j < local.size(); ++j)
            local(j) = std::polar(s.inner.radii(j) * std::sqrt(unif(rng)), 2.0 * kPi * unif(rng));
        CVec w = z + f.basis * local;
        for (Eigen::Index k = 0; k < local.size(); ++k) {
            // K(z, .) is antiholomorphic, so a real-step difference along e_k gives dbar_k.
            double h = 1e-4 * f.sigma(k);
            CVec e = f.basis.col(k);
            Complex d = (kernel(model, z, CVec(w + h * e)) - kernel(model, z, CVec(w - h * e))) / (2.0 * h);
            sup = std::max(sup, std::abs(d) * f.sigma(k) * p2);
        }
    }
    return sup;
}

}  // namespace clab
