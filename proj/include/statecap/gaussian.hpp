#pragma once
// Mutual information between blocks of a zero-mean Gaussian vector, from
// covariance determinants. Rank-aware: singular blocks are evaluated on
// their regular subspace via pseudo-determinants and flagged, so degenerate
// corners (zero powers, |rho| = 1) stay finite.

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace statecap {

struct LogPdet {
  double value = 0.0; // log of the product of nonzero eigenvalues
  int rank = 0;
  bool deficient = false;
};

inline LogPdet log_pdet(const Eigen::MatrixXd& m) {
  LogPdet r;
  if (m.rows() == 0) return r;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const auto& ev = es.eigenvalues();
  double cutoff = 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] > cutoff) {
      r.value += std::log(ev[i]);
      ++r.rank;
    } else {
      r.deficient = true;
    }
  }
  return r;
}

inline Eigen::MatrixXd submatrix(const Eigen::MatrixXd& cov, const std::vector<int>& idx) {
  Eigen::MatrixXd m(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = cov(idx[i], idx[j]);
  return m;
}

/// I(A;B) in bits for index blocks of a covariance matrix. Rank-deficient
/// blocks contribute their regular subspace; `flagged` reports that case.
inline double gaussian_mi_bits(const Eigen::MatrixXd& cov, const std::vector<int>& a,
                               const std::vector<int>& b, bool* flagged = nullptr) {
  std::vector<int> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  LogPdet la = log_pdet(submatrix(cov, a));
  LogPdet lb = log_pdet(submatrix(cov, b));
  LogPdet lab = log_pdet(submatrix(cov, ab));
  if (flagged && (la.deficient || lb.deficient || lab.deficient)) *flagged = true;
  const double two_pi_e = std::log(2.0 * M_PI * M_E);
  double nats = 0.5 * ((la.rank + lb.rank - lab.rank) * two_pi_e + la.value + lb.value - lab.value);
  double bits = nats / std::log(2.0);
  if (bits < 0.0 && bits > -1e-9) bits = 0.0;
  return bits;
}

/// I(A;B|C) = I(A; B,C) - I(A; C).
inline double gaussian_cmi_bits(const Eigen::MatrixXd& cov, const std::vector<int>& a,
                                const std::vector<int>& b, const std::vector<int>& c,
                                bool* flagged = nullptr) {
  std::vector<int> bc = b;
  bc.insert(bc.end(), c.begin(), c.end());
  return gaussian_mi_bits(cov, a, bc, flagged) - gaussian_mi_bits(cov, a, c, flagged);
}

}  // namespace statecap
