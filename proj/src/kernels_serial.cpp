#include <bit>

#include "geminal/errors.hpp"
#include "geminal/kernels.hpp"

namespace geminal::kernels::serial {

CMatrix gdm_contraction(const CIVector& psi) {
  const ConfigurationSpace& space = psi.space();
  const GeminalBasis basis(space.n_orbitals());
  const CVector& c = psi.coefficients();
  CMatrix d = CMatrix::Zero(basis.size(), basis.size());

  for (std::size_t a = 0; a < space.size(); ++a) {
    if (c[a] == cplx(0.0)) continue;
    const Configuration& alpha = space[a];
    for (std::size_t b = 0; b < space.size(); ++b) {
      if (c[b] == cplx(0.0)) continue;
      const Configuration& beta = space[b];
      // Configurations sharing fewer than N-2 orbitals never contribute.
      if (std::popcount(alpha.mask() ^ beta.mask()) > 4) continue;
      for (const OrbitalPair m : alpha.pairs()) {
        const ReducedConfiguration ra = reduced_configuration(alpha, m);
        for (const OrbitalPair n : beta.pairs()) {
          const ReducedConfiguration rb = reduced_configuration(beta, n);
          if (!(ra.rest == rb.rest)) continue;
          d(basis.row(m), basis.row(n)) +=
              c[a] * static_cast<double>(ra.sign) * std::conj(c[b]) *
              static_cast<double>(rb.sign);
        }
      }
    }
  }
  return d;
}

SparseCMatrix many_body_hamiltonian(const ConfigurationSpace& space,
                                    const ManyBodyTerms& terms) {
  const int k = space.n_orbitals();
  if (terms.one_body.rows() != k || terms.pair_diag.rows() != k)
    throw InputError("many-body terms do not match the configuration space");
  const auto& masks = space.masks();
  const Eigen::Index dim = static_cast<Eigen::Index>(space.size());
  std::vector<Eigen::Triplet<cplx>> triplets;

  for (Eigen::Index r = 0; r < dim; ++r) {
    const std::uint64_t bra = masks[r];
    for (Eigen::Index c = 0; c < dim; ++c) {
      const std::uint64_t ket = masks[c];
      const int degree = std::popcount(bra ^ ket) / 2;
      if (degree > 1) continue;
      cplx value = 0.0;
      if (degree == 0) {
        for (int p = 0; p < k; ++p) {
          if (!((ket >> p) & 1U)) continue;
          value += terms.one_body(p, p);
          for (int q = p + 1; q < k; ++q)
            if ((ket >> q) & 1U) value += terms.pair_diag(p, q);
        }
      } else {
        const int p = std::countr_zero(bra & ~ket);  // created
        const int q = std::countr_zero(ket & ~bra);  // annihilated
        // Parity of occupied orbitals strictly between p and q.
        int between = 0;
        for (int s = std::min(p, q) + 1; s < std::max(p, q); ++s)
          between += static_cast<int>((ket >> s) & 1U);
        value = terms.one_body(p, q) * (between % 2 == 0 ? 1.0 : -1.0);
      }
      if (value != cplx(0.0)) triplets.emplace_back(r, c, value);
    }
  }
  SparseCMatrix h(dim, dim);
  h.setFromTriplets(triplets.begin(), triplets.end());
  return h;
}

RMatrix density_series(const DensityTerms& terms, std::span<const double> times) {
  const Eigen::Index g = terms.frequencies.size();
  const Eigen::Index k = static_cast<Eigen::Index>(terms.weights.size());
  RMatrix out = RMatrix::Zero(static_cast<Eigen::Index>(times.size()), k);
  for (std::size_t s = 0; s < times.size(); ++s) {
    for (Eigen::Index x = 0; x < k; ++x) {
      cplx acc = 0.0;
      for (Eigen::Index m = 0; m < g; ++m)
        for (Eigen::Index n = 0; n < g; ++n)
          acc += terms.weights[x](m, n) *
                 std::polar(1.0, -(terms.frequencies[m] - terms.frequencies[n]) *
                                     times[s]);
      out(static_cast<Eigen::Index>(s), x) = acc.real();
    }
  }
  return out;
}

}  // namespace geminal::kernels::serial
