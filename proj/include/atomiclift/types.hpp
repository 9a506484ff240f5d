// types.hpp - scalar aliases and the frequency-indexing convention.
//
// All dense linear algebra is backed by Eigen; complex data is
// std::complex<double> throughout.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace atomiclift {

using Real    = double;
using Complex = std::complex<double>;

using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;

inline constexpr Real kPi    = 3.14159265358979323846;
inline constexpr Real kTwoPi = 2.0 * kPi;

// Frequency-sample index set. Symmetric runs n = -2M..2M (N = 4M+1);
// shifted runs n = 0..N-1.
class IndexingConvention {
 public:
  enum class Kind { Symmetric, Shifted };

  static IndexingConvention symmetric(int M) {
    if (M < 1) throw std::domain_error("IndexingConvention: M must be >= 1");
    return IndexingConvention(Kind::Symmetric, 4 * M + 1);
  }

  static IndexingConvention symmetric_n(int N) {
    if (N < 5 || N % 4 != 1)
      throw std::domain_error("IndexingConvention: symmetric requires N = 4M+1");
    return IndexingConvention(Kind::Symmetric, N);
  }

  static IndexingConvention shifted(int N) {
    if (N < 2) throw std::domain_error("IndexingConvention: shifted requires N >= 2");
    return IndexingConvention(Kind::Shifted, N);
  }

  Kind kind() const { return kind_; }
  int size() const { return n_; }

  // Half-bandwidth M with N = 4M+1 (symmetric only).
  int half_band() const {
    if (kind_ != Kind::Symmetric)
      throw std::domain_error("IndexingConvention: M defined only for symmetric indexing");
    return (n_ - 1) / 4;
  }

  // Frequency index n of the i-th entry.
  int index(int i) const {
    return kind_ == Kind::Symmetric ? i - 2 * half_band() : i;
  }

  int first_index() const { return index(0); }

  bool operator==(const IndexingConvention& o) const {
    return kind_ == o.kind_ && n_ == o.n_;
  }

  std::string str() const {
    return (kind_ == Kind::Symmetric ? "symmetric(N=" : "shifted(N=") +
           std::to_string(n_) + ")";
  }

 private:
  IndexingConvention(Kind k, int n) : kind_(k), n_(n) {}
  Kind kind_;
  int n_;
};

}  // namespace atomiclift
