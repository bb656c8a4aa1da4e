#include "spiky/factorization.hpp"

#include <cmath>

#include "spiky/errors.hpp"

namespace spiky {

Embeddings make_embeddings(const Factorization& fac, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("embedding exponent must lie in [0, 1]");
  }
  Embeddings out;
  out.e.resize(fac.n(), fac.f());
  for (std::int64_t a = 0; a < fac.f(); ++a) {
    out.e.col(a) = fac.u.col(a) * std::pow(fac.sigma(a), p);
  }
  out.p = p;
  out.row_ids = fac.row_ids;
  return out;
}

Matrix reconstruct(const Factorization& fac) {
  if (fac.n() > 5000) {
    throw InvalidArgument("reconstruct is guarded to n <= 5000");
  }
  Vector d(fac.f());
  for (std::int64_t a = 0; a < fac.f(); ++a) {
    d(a) = fac.sigma(a) * fac.signs[static_cast<std::size_t>(a)];
  }
  Matrix out = fac.u * d.asDiagonal() * fac.u.transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace spiky
