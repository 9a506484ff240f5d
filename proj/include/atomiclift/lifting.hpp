// lifting.hpp - the linear measurement operator X and its adjoint X*
// induced by lifting the bilinear model to the rank-one matrix Z = x h^T.
//
//   X(Z)_n   = e_n^T Z b_n                 (unconjugated bilinear form)
//   X*(p)    = sum_n p_n e_n b_n^H         (entry (n,i) = p_n conj(B_{n,i}))
//
// Pairing convention, fixed project-wide: <A, C> = trace(C^H A), so
//   sum_n conj(p_n) X(Z)_n = <Z, X*(p)>.

#pragma once

#include "atomiclift/signal_model.hpp"
#include "atomiclift/types.hpp"

#include <Eigen/SparseCore>

namespace atomiclift {

CVec lift_forward(const CMat& Z, const SubspaceModel& subspace);

CMat lift_adjoint(const CVec& p, const SubspaceModel& subspace);

// X materialized as an N x (N*L) sparse matrix acting on vec(Z) with
// row-major vectorization (Z_{n,i} at index n*L + i). Small-N debugging aid.
Eigen::SparseMatrix<Complex> lift_matrix(const SubspaceModel& subspace);

CVec vec_rowmajor(const CMat& Z);

}  // namespace atomiclift
