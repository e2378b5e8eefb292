#ifndef PGBAND_HERMITIAN_HPP
#define PGBAND_HERMITIAN_HPP

#include <algorithm>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

namespace pgband {

class EigenError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense complex Hermitian matrix. Only the upper triangle of the source is
/// read; the lower triangle is its mirror, so entries(j,k) == conj(entries(k,j))
/// holds exactly.
template <typename Real>
class HermitianMatrix {
public:
    using Scalar = std::complex<Real>;
    using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    HermitianMatrix() = default;

    template <typename Derived>
    explicit HermitianMatrix(const Eigen::MatrixBase<Derived>& source)
    {
        if (source.rows() != source.cols()) throw std::invalid_argument("Hermitian matrix must be square");
        const Eigen::Index n = source.rows();
        entries_.resize(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            entries_(j, j) = Scalar(std::real(Scalar(source(j, j))), Real(0));
            for (Eigen::Index k = j + 1; k < n; ++k) {
                const Scalar v(source(j, k));
                entries_(j, k) = v;
                entries_(k, j) = std::conj(v);
            }
        }
    }

    static HermitianMatrix zero(Eigen::Index n) { return HermitianMatrix(Dense::Zero(n, n)); }

    Eigen::Index order() const { return entries_.rows(); }
    const Dense& matrix() const { return entries_; }
    Scalar operator()(Eigen::Index j, Eigen::Index k) const { return entries_(j, k); }

    /// Real part, for matrices known to be real symmetric.
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> real() const { return entries_.real(); }

    Real frobenius_norm() const { return entries_.norm(); }

    friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b)
    {
        if (a.order() != b.order()) throw std::invalid_argument("Hermitian sum: order mismatch");
        return HermitianMatrix(a.entries_ + b.entries_);
    }

private:
    Dense entries_;
};

template <typename Real>
struct Spectrum {
    Eigen::Matrix<Real, Eigen::Dynamic, 1> values;  ///< nondecreasing, with multiplicity
    std::optional<Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>> vectors;  ///< columns
};

/// Full spectrum of a Hermitian matrix, eigenvalues ascending and repeated
/// according to multiplicity. Rejects non-finite entries.
template <typename Real>
Spectrum<Real> eigen_decompose(const HermitianMatrix<Real>& a, bool want_vectors = false)
{
    Spectrum<Real> out;
    if (a.order() == 0) {
        out.values.resize(0);
        if (want_vectors) out.vectors.emplace(0, 0);
        return out;
    }
    if (!a.matrix().allFinite()) throw EigenError("eigen_decompose: non-finite matrix entry");
    using Dense = typename HermitianMatrix<Real>::Dense;
    Eigen::SelfAdjointEigenSolver<Dense> solver(
        a.matrix(), want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw EigenError("eigen_decompose: no convergence for matrix of order " + std::to_string(a.order()));
    out.values = solver.eigenvalues();
    if (want_vectors) out.vectors = solver.eigenvectors();
    return out;
}

template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, 1> eigenvalues(const HermitianMatrix<Real>& a)
{
    return eigen_decompose(a, false).values;
}

struct WeylVerdict {
    bool holds = true;
    double worst_violation = 0.0;  ///< largest amount by which a bound is exceeded (<= 0 when holding)
};

/// Checks lambda_n(A) + lambda_1(B) <= lambda_n(A+B) <= lambda_n(A) + lambda_max(B)
/// for every n.
template <typename Real>
WeylVerdict weyl_check(const HermitianMatrix<Real>& a, const HermitianMatrix<Real>& b, double tol = 1e-9)
{
    if (a.order() != b.order()) throw std::invalid_argument("weyl_check: order mismatch");
    WeylVerdict verdict;
    if (a.order() == 0) return verdict;
    const auto la = eigenvalues(a);
    const auto lb = eigenvalues(b);
    const auto ls = eigenvalues(a + b);
    const Eigen::Index n = a.order();
    double worst = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        worst = std::max(worst, static_cast<double>(la(i) + lb(0) - ls(i)));
        worst = std::max(worst, static_cast<double>(ls(i) - la(i) - lb(n - 1)));
    }
    verdict.worst_violation = worst;
    verdict.holds = worst <= tol;
    return verdict;
}

using HermitianMatrixd = HermitianMatrix<double>;
using Spectrumd = Spectrum<double>;

}  // namespace pgband

#endif  // PGBAND_HERMITIAN_HPP
