#include "joycekit/frame.hpp"

namespace joycekit {

DarbouxFrame make_frame(const Eigen::MatrixXi& omega) {
  const int n = static_cast<int>(omega.rows());
  if (n <= 0 || n % 2 != 0 || omega.cols() != n)
    throw DegenerateFrame("pairing must be square with even positive size");
  if ((omega.transpose() + omega).cwiseAbs().maxCoeff() != 0)
    throw NotSkew("pairing must be skew");

  DarbouxFrame f;
  f.n = n;
  f.d = n / 2;
  f.omega = omega;

  std::vector<std::vector<Rational>> om(n, std::vector<Rational>(n, Rational(0)));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) om[p][q] = Rational(omega(p, q));
  f.eta_exact = rational_inverse(om);

  f.eta = Eigen::MatrixXcd::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) f.eta(p, q) = f.eta_exact[p][q].to_double();
  return f;
}

DarbouxFrame make_frame(int d) {
  if (d <= 0) throw DegenerateFrame("half rank must be positive");
  const int n = 2 * d;
  Eigen::MatrixXi omega = Eigen::MatrixXi::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (q - p == d) omega(p, q) = 1;
      if (p - q == d) omega(p, q) = -1;
    }
  return make_frame(omega);
}

}  // namespace joycekit
