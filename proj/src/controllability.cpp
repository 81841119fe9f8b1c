#include "simcon/controllability.hpp"

#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "simcon/errors.hpp"

namespace simcon {

ControllabilityReport hautus_check(const AugmentedSystem& aug, double rank_tol) {
    if (!(rank_tol > 0.0))
        throw ValidationError("hautus_check: rank tolerance must be positive");

    const Eigen::Index n = aug.cal_a.rows();
    const Eigen::Index m = aug.cal_b.cols();

    Eigen::EigenSolver<Matrix> eig(aug.cal_a, /*computeEigenvectors=*/false);
    if (eig.info() != Eigen::Success)
        throw SolverError("hautus_check: eigenvalue computation did not converge");

    ControllabilityReport report;
    report.rank_required = static_cast<int>(n);
    report.controllable = true;

    Eigen::MatrixXcd compound(n, n + m);
    compound.rightCols(m) = aug.cal_b.cast<std::complex<double>>();
    for (Eigen::Index e = 0; e < n; ++e) {
        const std::complex<double> lambda = eig.eigenvalues()(e);
        compound.leftCols(n) = aug.cal_a.cast<std::complex<double>>();
        compound.leftCols(n).diagonal().array() -= lambda;

        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(compound);
        const auto& sv = svd.singularValues();
        const double threshold = rank_tol * sv(0);
        int rank = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > threshold)
                ++rank;

        report.rank_found = rank;
        report.tolerance_used = threshold;
        if (rank < n) {
            report.controllable = false;
            report.failing_eigenvalue = lambda;
            return report;
        }
    }
    return report;
}

Matrix gramian(const AugmentedSystem& aug, double t_final, int quad_steps) {
    if (!(t_final > 0.0))
        throw ValidationError("gramian: horizon must be positive");
    if (quad_steps < 16)
        throw ValidationError("gramian: needs at least 16 quadrature steps");

    const double h = t_final / quad_steps;
    const Matrix step = (h * aug.cal_a).exp();

    // E_j = e^{A t_j} B accumulated one interval at a time; integrand E E^T.
    Matrix e = aug.cal_b;
    Matrix w = 0.5 * (e * e.transpose());
    for (int j = 1; j < quad_steps; ++j) {
        e = step * e;
        w += e * e.transpose();
    }
    e = step * e;
    w += 0.5 * (e * e.transpose());
    w *= h;

    return 0.5 * (w + w.transpose());
}

double condition_number(const Matrix& w, double rank_tol) {
    if (w.rows() != w.cols())
        throw ValidationError("condition_number: matrix must be square");
    const double scale = w.cwiseAbs().maxCoeff();
    if ((w - w.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (scale > 0.0 ? scale : 1.0))
        throw ValidationError("condition_number: matrix is not symmetric");

    Eigen::SelfAdjointEigenSolver<Matrix> eig(w);
    if (eig.info() != Eigen::Success)
        throw SolverError("condition_number: eigenvalue computation did not converge");
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (lo <= rank_tol * hi)
        return std::numeric_limits<double>::infinity();
    return hi / lo;
}

} // namespace simcon
