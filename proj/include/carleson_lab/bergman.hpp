#pragma once

#include <iosfwd>
#include <random>
#include <vector>

#include "carleson_lab/measures.hpp"

namespace clab {

using MultiIndex = std::vector<int>;

/// m_alpha = integral of |z^alpha|^2 d nu for all |alpha| <= degree, graded
/// lexicographic order.
struct MomentTable {
    int dimension = 1;
    int degree = 0;
    std::vector<MultiIndex> alphas;
    std::vector<double> values;

    std::size_t index_of(const MultiIndex& alpha) const;
};

/// All multi-indices of length n with |alpha| <= degree, graded lexicographic.
std::vector<MultiIndex> multi_indices(int n, int degree);

/// Moments by radial reduction and adaptive quadrature (relative tolerance 1e-10).
MomentTable moments(const DomainSpec& spec, int degree);

void write_moment_csv(std::ostream& os, const MomentTable& table);
MomentTable read_moment_csv(std::istream& is);

/// A holomorphic polynomial sum c_alpha z^alpha.
struct HoloPolynomial {
    std::vector<std::pair<MultiIndex, Complex>> terms;

    Complex operator()(const CVec& z) const;
    int degree() const;
};

/// Random polynomial with complex Gaussian coefficients on all |alpha| <= degree.
HoloPolynomial random_polynomial(int n, int degree, std::mt19937_64& rng);

/// Bergman kernel of a model domain, normalized against nu (nu(unit ball) = 1).
class KernelModel {
public:
    enum class Variant { ClosedFormBall, ReinhardtSeries };

    /// (1 - <z, w>)^{-(n+1)}; the disk is n = 1.
    static KernelModel closed_form_ball(int n);
    /// sum_{|alpha| <= degree} z^alpha conj(w)^alpha / m_alpha.
    static KernelModel reinhardt_series(const DomainSpec& spec, int degree = 60, double tolerance = 1e-10);
    static KernelModel from_table(MomentTable table, double tolerance = 1e-10);

    Variant variant() const noexcept { return variant_; }
    int dimension() const noexcept { return n_; }
    int degree() const noexcept { return table_.degree; }
    double tolerance() const noexcept { return tolerance_; }
    const MomentTable& table() const noexcept { return table_; }

    /// ||z^alpha||^2.
    double moment(const MultiIndex& alpha) const;

private:
    KernelModel() = default;
    Variant variant_ = Variant::ClosedFormBall;
    int n_ = 1;
    MomentTable table_;
    double tolerance_ = 1e-10;
};

struct KernelValue {
    Complex value;
    /// Geometric tail estimate of the omitted terms (0 for closed forms).
    double tail_bound = 0.0;
};

/// K(z, w); throws TruncationError when the tail estimate exceeds the model tolerance.
KernelValue kernel_with_tail(const KernelModel& model, const CVec& z, const CVec& w);
Complex kernel(const KernelModel& model, const CVec& z, const CVec& w);
double kernel_diagonal(const KernelModel& model, const CVec& z);

/// K(z, z0) / sqrt(K(z0, z0)).
Complex normalized_kernel(const KernelModel& model, const CVec& z, const CVec& z0);

/// ||f||_2^2 = sum |c_alpha|^2 m_alpha (monomials are orthogonal).
double polynomial_norm_squared(const KernelModel& model, const HoloPolynomial& f);

struct ReproduceResult {
    Complex integral;
    double residual = 0.0;
    double std_error = 0.0;
};

/// |integral K(z, zeta) f(zeta) d nu(zeta) - f(z)| by sampling.
ReproduceResult reproduce_check(const DomainSpec& spec, const KernelModel& model, const HoloPolynomial& f,
                                const CVec& z, const SamplingConfig& sampling);

/// B mu(z) = integral |K(zeta, z)|^2 / K(z, z) d mu(zeta).
Estimate berezin(const DomainSpec& spec, const KernelModel& model, const Measure& mu, const CVec& z);

/// integral |k_{z0}|^2 d mu, the Carleson quotient of the unit vector k_{z0}; equals B mu(z0).
Estimate kernel_quotient(const DomainSpec& spec, const KernelModel& model, const Measure& mu, const CVec& z0);

/// inf over the samples of K(z, z) prod sigma_i(z)^2.
double diagonal_lowerbound_check(const DomainSpec& spec, const KernelModel& model, const std::vector<CVec>& samples);

struct OffDiagonalCheck {
    double kernel_inf = 0.0;      // inf Re K(z0, w) prod sigma_i(z0)^2
    double normalized_inf = 0.0;  // inf |k_{z0}(w)|^2 prod sigma_i(z0)^2
    std::size_t pairs = 0;
};

/// Samples w in the inner polydisk of B_D(z0, r) for every collar sample z0.
OffDiagonalCheck offdiagonal_lowerbound_check(const DomainSpec& spec, const KernelModel& model, double r,
                                              const std::vector<CVec>& samples, int per_center = 16,
                                              std::uint64_t seed = 1, double r0 = 0.1);

/// sup over samples and frame directions k of |dbar_k K(z, w)| sigma_k(z) prod sigma_i(z)^2,
/// w drawn from the inner polydisk of B_D(z, r); central differences.
double first_order_bound_check(const DomainSpec& spec, const KernelModel& model, double r,
                               const std::vector<CVec>& samples, std::uint64_t seed = 1);

}  // namespace clab
