#include "rdciag/matrix.hpp"

#include <cmath>

namespace rdciag {

double spectral_norm(const Matrix& m) {
  const int n = m.cols;
  if (n == 0 || m.rows == 0) return 0.0;

  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> mv(m.rows), w(n);

  double est = 0.0;
  for (int it = 0; it < 200; ++it) {
    // w = M^T (M v)
    std::fill(mv.begin(), mv.end(), 0.0);
    m.apply_add(v, mv);
    std::fill(w.begin(), w.end(), 0.0);
    m.apply_transpose_add(mv, w);

    double wn = 0.0;
    for (double c : w) wn += c * c;
    wn = std::sqrt(wn);
    if (wn == 0.0) return 0.0;  // v in the null space of M^T M; zero map
    double next = std::sqrt(wn);  // ||M^T M v|| -> lambda_max, norm = sqrt
    for (int c = 0; c < n; ++c) v[c] = w[c] / wn;
    if (it > 0 && std::abs(next - est) <= 1e-12 * next) {
      est = next;
      break;
    }
    est = next;
  }
  return est;
}

}  // namespace rdciag
