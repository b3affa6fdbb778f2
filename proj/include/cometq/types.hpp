#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace cometq {

using cx = std::complex<double>;
using cxmat = Eigen::MatrixXcd;
using cxvec = Eigen::VectorXcd;
using rvec = Eigen::VectorXd;
using rmat = Eigen::MatrixXd;

// Error hierarchy. Everything user-facing derives from Error so the CLI can
// map validation failures to a single exit code.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidFlag : Error { using Error::Error; };
struct MismatchedCentralRank : Error { using Error::Error; };
struct UnsupportedFlagType : Error { using Error::Error; };
struct NonIdenticalArms : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct ArmNotBased : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct InvalidLevel : Error { using Error::Error; };
struct DuplicatePunctures : Error { using Error::Error; };
struct EvaluationAtPole : Error { using Error::Error; };
struct NotOnShell : Error { using Error::Error; };
struct SingularPoint : Error { using Error::Error; };
struct Inconclusive : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

inline cxmat trace_free(const cxmat& m) {
    return m - (m.trace() / static_cast<double>(m.rows())) * cxmat::Identity(m.rows(), m.cols());
}

inline double frob(const cxmat& m) { return m.norm(); }

// Fixed Frobenius-orthonormal Hermitian basis of the trace-free r x r matrices.
// Order: for each p < q (row-major over pairs) the symmetric then antisymmetric
// unit, then the r-1 diagonal elements diag(1,..,1,-l,0,..)/sqrt(l(l+1)).
// Hermitian + orthonormal means tr(B_i B_j) = delta_ij, which the canonical
// loop pairing of the Poisson bracket relies on.
std::vector<cxmat> trace_free_basis(int r);

}  // namespace cometq
