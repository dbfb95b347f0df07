#pragma once

#include <memory>
#include <optional>

#include <Eigen/Dense>

#include "eqwalk/walk.hpp"

namespace eqwalk {

/// A unitary S on H (+) L. Public coordinates precede private ones.
///
/// Backed either by a dense matrix or by a walk operator applied matrix-free. The
/// dense form is built on demand for the exact solver.
class Transducer {
  public:
    /// Throws DomainError if `unitary` is not square, not unitary within 1e-10, or
    /// `dim_public` is out of range.
    Transducer(Eigen::MatrixXcd unitary, Eigen::Index dim_public);

    /// Walk step on G' with public space span{|ss'>, |t't>}.
    explicit Transducer(WalkOperator walk);

    Eigen::Index dim() const { return dim_; }
    Eigen::Index dim_public() const { return dim_public_; }
    Eigen::Index dim_private() const { return dim_ - dim_public_; }

    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
    Eigen::MatrixXcd matrix() const;

  private:
    Eigen::Index dim_;
    Eigen::Index dim_public_;
    std::shared_ptr<const Eigen::MatrixXcd> dense_;
    std::shared_ptr<const WalkOperator> walk_;
};

struct TransductionResult {
    Eigen::VectorXcd tau;
    /// Minimum-norm catalyst.
    Eigen::VectorXcd catalyst;
    /// ||catalyst||^2.
    double complexity = 0.0;
    /// ||S(xi + v) - (tau + v)||.
    double residual = 0.0;
};

/// Relative singular-value cutoff below which I - S_LL is treated as singular.
inline constexpr double kRankCutoff = 1e-10;

/// Solves S: xi (+) v -> tau (+) v for the minimum-norm catalyst v.
/// Throws DomainError on a zero input and NumericalFailureError when the residual
/// exceeds `tol`.
TransductionResult solve_transduction(const Transducer& s, const Eigen::VectorXcd& xi, double tol = 1e-9);

/// Orthonormal basis of ker(I - S_LL), one vector per column.
Eigen::MatrixXcd private_fixed_space(const Transducer& s);

/// Approximate transduction with k controlled applications of S.
///
/// Runs on (C^k (x) H) (+) L starting from the uniform counter state times xi and an
/// empty private register; step j applies S to slot j together with the shared
/// private register. The result is the projection onto the uniform counter state.
Eigen::VectorXcd run_iterative(const Transducer& s, const Eigen::VectorXcd& xi, int k);

/// alpha = sqrt(r / w); scaling all weights by alpha equalizes W and R at sqrt(r w).
double rebalance_alpha(double w, double r);

/// |<target, tau'>|^2.
double success_probability(const Eigen::VectorXcd& tau_prime, const Eigen::VectorXcd& target);

}  // namespace eqwalk
