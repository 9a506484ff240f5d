#include "atomiclift/lifting.hpp"

#include <vector>

namespace atomiclift {

CVec lift_forward(const CMat& Z, const SubspaceModel& subspace) {
  const auto& B = subspace.matrix();
  if (Z.rows() != B.rows() || Z.cols() != B.cols())
    throw std::domain_error("lift_forward: Z dimensions do not match subspace");
  // y_n = (row n of Z) . b_n
  return Z.cwiseProduct(B).rowwise().sum();
}

CMat lift_adjoint(const CVec& p, const SubspaceModel& subspace) {
  const auto& B = subspace.matrix();
  if (p.size() != B.rows())
    throw std::domain_error("lift_adjoint: p length does not match subspace rows");
  return p.asDiagonal() * B.conjugate();
}

Eigen::SparseMatrix<Complex> lift_matrix(const SubspaceModel& subspace) {
  const auto& B = subspace.matrix();
  const int N = static_cast<int>(B.rows());
  const int L = static_cast<int>(B.cols());
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(static_cast<std::size_t>(N) * L);
  for (int n = 0; n < N; ++n)
    for (int i = 0; i < L; ++i) trips.emplace_back(n, n * L + i, B(n, i));
  Eigen::SparseMatrix<Complex> X(N, N * L);
  X.setFromTriplets(trips.begin(), trips.end());
  return X;
}

CVec vec_rowmajor(const CMat& Z) {
  CVec v(Z.size());
  for (Eigen::Index n = 0; n < Z.rows(); ++n)
    for (Eigen::Index i = 0; i < Z.cols(); ++i) v(n * Z.cols() + i) = Z(n, i);
  return v;
}

}  // namespace atomiclift
