#include "eqwalk/transducer.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "eqwalk/errors.hpp"

namespace eqwalk {

namespace {

constexpr double kUnitarityTolerance = 1e-10;

struct PrivateBlockSvd {
    Eigen::VectorXd singular;
    Eigen::MatrixXcd u;
    Eigen::MatrixXcd v;
    Eigen::Index rank = 0;

    Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const {
        const Eigen::Index r = rank;
        Eigen::VectorXcd coeffs = u.leftCols(r).adjoint() * rhs;
        coeffs.array() /= singular.head(r).array().cast<std::complex<double>>();
        return v.leftCols(r) * coeffs;
    }
};

template <typename Svd>
PrivateBlockSvd collect(const Svd& svd, bool want_u) {
    PrivateBlockSvd out;
    out.singular = svd.singularValues();
    if (want_u) out.u = svd.matrixU();
    out.v = svd.matrixV();
    const double cutoff = out.singular.size() > 0 ? kRankCutoff * out.singular[0] : 0.0;
    while (out.rank < out.singular.size() && out.singular[out.rank] > cutoff) ++out.rank;
    return out;
}

bool finite(const PrivateBlockSvd& d) {
    return d.singular.allFinite() && d.v.allFinite() && (d.u.size() == 0 || d.u.allFinite());
}

// SVD of I - S_LL. BDCSVD occasionally returns NaN on Eigen 3.4 (deflation of
// clustered singular values), in which case the Jacobi SVD is used instead.
PrivateBlockSvd decompose_private_block(const Eigen::MatrixXcd& m, Eigen::Index dim_public, bool want_u) {
    const Eigen::Index l = m.rows() - dim_public;
    const Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(l, l) - m.bottomRightCorner(l, l);
    const unsigned options = want_u ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : Eigen::ComputeFullV;
    PrivateBlockSvd out = collect(Eigen::BDCSVD<Eigen::MatrixXcd>(a, options), want_u);
    if (!finite(out)) {
        out = collect(Eigen::JacobiSVD<Eigen::MatrixXcd>(a, options), want_u);
    }
    return out;
}

std::string format_double(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

}  // namespace

Transducer::Transducer(Eigen::MatrixXcd unitary, Eigen::Index dim_public)
    : dim_(unitary.rows()), dim_public_(dim_public) {
    if (unitary.rows() != unitary.cols()) {
        throw DomainError("transducer matrix must be square");
    }
    if (dim_public < 0 || dim_public > dim_) {
        throw DomainError("public dimension out of range");
    }
    const double defect =
        (unitary.adjoint() * unitary - Eigen::MatrixXcd::Identity(dim_, dim_)).cwiseAbs().maxCoeff();
    if (dim_ > 0 && defect > kUnitarityTolerance) {
        throw DomainError("transducer matrix is not unitary (defect " + std::to_string(defect) + ")");
    }
    dense_ = std::make_shared<const Eigen::MatrixXcd>(std::move(unitary));
}

Transducer::Transducer(WalkOperator walk)
    : dim_(walk.dim()), dim_public_(2), walk_(std::make_shared<const WalkOperator>(std::move(walk))) {}

Eigen::VectorXcd Transducer::apply(const Eigen::VectorXcd& x) const {
    if (dense_) {
        return *dense_ * x;
    }
    return walk_->apply(x);
}

Eigen::MatrixXcd Transducer::matrix() const {
    if (dense_) {
        return *dense_;
    }
    return walk_->matrix();
}

TransductionResult solve_transduction(const Transducer& s, const Eigen::VectorXcd& xi, double tol) {
    const Eigen::Index h = s.dim_public();
    const Eigen::Index l = s.dim_private();
    if (xi.size() != h) {
        throw DomainError("input vector does not live on the public space");
    }
    if (xi.norm() == 0.0) {
        throw DomainError("input vector must be nonzero");
    }
    const Eigen::MatrixXcd m = s.matrix();

    TransductionResult out;
    out.catalyst = Eigen::VectorXcd::Zero(l);
    if (l > 0) {
        const Eigen::VectorXcd rhs = m.bottomLeftCorner(l, h) * xi;
        const auto svd = decompose_private_block(m, h, true);
        out.catalyst = svd.solve(rhs);
    }
    out.tau = m.topLeftCorner(h, h) * xi + m.topRightCorner(h, l) * out.catalyst;
    out.complexity = out.catalyst.squaredNorm();

    Eigen::VectorXcd input(h + l);
    input << xi, out.catalyst;
    Eigen::VectorXcd expected(h + l);
    expected << out.tau, out.catalyst;
    out.residual = (m * input - expected).norm();
    if (!(out.residual <= tol)) {
        throw NumericalFailureError("transduction residual " + format_double(out.residual) +
                                    " exceeds tolerance " + format_double(tol));
    }
    return out;
}

Eigen::MatrixXcd private_fixed_space(const Transducer& s) {
    const Eigen::Index l = s.dim_private();
    if (l == 0) {
        return Eigen::MatrixXcd(0, 0);
    }
    const Eigen::MatrixXcd m = s.matrix();
    const auto svd = decompose_private_block(m, s.dim_public(), false);
    return svd.v.rightCols(l - svd.rank);
}

Eigen::VectorXcd run_iterative(const Transducer& s, const Eigen::VectorXcd& xi, int k) {
    if (k < 1) {
        throw DomainError("number of controlled applications must be positive");
    }
    const Eigen::Index h = s.dim_public();
    const Eigen::Index l = s.dim_private();
    if (xi.size() != h) {
        throw DomainError("input vector does not live on the public space");
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(k));

    // Slot j of the counter is touched only by the j-th application, so it is enough
    // to keep the shared private register and accumulate each slot once it is final.
    Eigen::VectorXcd state(h + l);
    state.tail(l).setZero();
    Eigen::VectorXcd accumulated = Eigen::VectorXcd::Zero(h);
    for (int j = 0; j < k; ++j) {
        state.head(h) = scale * xi;
        state = s.apply(state);
        accumulated += state.head(h);
    }
    return scale * accumulated;
}

double rebalance_alpha(double w, double r) {
    if (!(w > 0.0) || !(r > 0.0)) {
        throw DomainError("total weight and resistance must be positive");
    }
    return std::sqrt(r / w);
}

double success_probability(const Eigen::VectorXcd& tau_prime, const Eigen::VectorXcd& target) {
    return std::norm(target.dot(tau_prime));
}

}  // namespace eqwalk
