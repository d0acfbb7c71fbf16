#include <omp.h>

#include <bit>

#include "geminal/errors.hpp"
#include "geminal/kernels.hpp"

namespace geminal::kernels {

int available_threads() { return omp_get_max_threads(); }

namespace omp {

CMatrix gdm_contraction(const CIVector& psi) {
  const ConfigurationSpace& space = psi.space();
  const int k = space.n_orbitals();
  const int n = space.n_electrons();
  if (n < 2) throw InputError("a GDM needs at least two electrons");
  const GeminalBasis basis(k);

  // Columns of Theta are the (N-2)-electron reduced configurations.
  std::optional<ConfigurationSpace> reduced;
  if (n > 2) reduced.emplace(k, n - 2);
  const Eigen::Index columns =
      reduced ? static_cast<Eigen::Index>(reduced->size()) : 1;

  CMatrix theta = CMatrix::Zero(basis.size(), columns);
  const CVector& c = psi.coefficients();
  const auto count = static_cast<std::int64_t>(space.size());

  // Each (pair, reduced configuration) cell is reached from exactly one
  // configuration, so the writes below never collide.
#pragma omp parallel for schedule(static)
  for (std::int64_t a = 0; a < count; ++a) {
    const cplx coefficient = c[a];
    if (coefficient == cplx(0.0)) continue;
    const Configuration& alpha = space[static_cast<std::size_t>(a)];
    for (int j = 1; j < n; ++j) {
      for (int i = 0; i < j; ++i) {
        const int m1 = alpha[i], m2 = alpha[j];
        const std::uint64_t rest = alpha.mask() & ~(std::uint64_t{1} << (m1 - 1)) &
                                   ~(std::uint64_t{1} << (m2 - 1));
        const Eigen::Index col =
            reduced ? static_cast<Eigen::Index>(*reduced->index_of(rest)) : 0;
        // 1-based positions i+1, j+1: sign (-1)^{(i+1)+(j+1)-1}.
        const double sign = ((i + j + 1) % 2 == 0) ? 1.0 : -1.0;
        theta(basis.row(m1, m2), col) = coefficient * sign;
      }
    }
  }

  const Eigen::Index g = basis.size();
  CMatrix d(g, g);
  const CMatrix theta_adj = theta.adjoint();
#pragma omp parallel for schedule(static)
  for (Eigen::Index r = 0; r < g; ++r) d.row(r).noalias() = theta.row(r) * theta_adj;
  return d;
}

SparseCMatrix many_body_hamiltonian(const ConfigurationSpace& space,
                                    const ManyBodyTerms& terms) {
  const int k = space.n_orbitals();
  if (terms.one_body.rows() != k || terms.pair_diag.rows() != k)
    throw InputError("many-body terms do not match the configuration space");
  const auto& masks = space.masks();
  const auto dim = static_cast<std::int64_t>(space.size());
  std::vector<std::vector<std::pair<Eigen::Index, cplx>>> rows(
      static_cast<std::size_t>(dim));

#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t r = 0; r < dim; ++r) {
    const std::uint64_t bra = masks[r];
    auto& row = rows[static_cast<std::size_t>(r)];

    cplx diagonal = 0.0;
    for (int p = 0; p < k; ++p) {
      if (!((bra >> p) & 1U)) continue;
      diagonal += terms.one_body(p, p);
      for (int q = p + 1; q < k; ++q)
        if ((bra >> q) & 1U) diagonal += terms.pair_diag(p, q);
    }
    if (diagonal != cplx(0.0)) row.emplace_back(r, diagonal);

    // <bra| a+_p a_q |ket> with ket = bra - p + q.
    for (int p = 0; p < k; ++p) {
      if (!((bra >> p) & 1U)) continue;
      for (int q = 0; q < k; ++q) {
        if ((bra >> q) & 1U) continue;
        const cplx h = terms.one_body(p, q);
        if (h == cplx(0.0)) continue;
        const std::uint64_t ket = (bra & ~(std::uint64_t{1} << p)) | (std::uint64_t{1} << q);
        const int lo = std::min(p, q), hi = std::max(p, q);
        const std::uint64_t between =
            ((std::uint64_t{1} << hi) - 1) & ~((std::uint64_t{2} << lo) - 1);
        const double sign = std::popcount(bra & between) % 2 == 0 ? 1.0 : -1.0;
        row.emplace_back(static_cast<Eigen::Index>(*space.index_of(ket)), h * sign);
      }
    }
  }

  std::vector<Eigen::Triplet<cplx>> triplets;
  for (std::int64_t r = 0; r < dim; ++r)
    for (const auto& [c, v] : rows[static_cast<std::size_t>(r)])
      triplets.emplace_back(static_cast<Eigen::Index>(r), c, v);
  SparseCMatrix h(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  h.setFromTriplets(triplets.begin(), triplets.end());
  return h;
}

RMatrix density_series(const DensityTerms& terms, std::span<const double> times) {
  const Eigen::Index g = terms.frequencies.size();
  const Eigen::Index k = static_cast<Eigen::Index>(terms.weights.size());
  CMatrix stacked(g * k, g);
  for (Eigen::Index x = 0; x < k; ++x) stacked.middleRows(x * g, g) = terms.weights[x];

  const auto total = static_cast<std::int64_t>(times.size());
  RMatrix out(static_cast<Eigen::Index>(total), k);
  constexpr std::int64_t chunk = 512;
  const std::int64_t chunks = (total + chunk - 1) / chunk;

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t ci = 0; ci < chunks; ++ci) {
    const std::int64_t begin = ci * chunk;
    const Eigen::Index width = static_cast<Eigen::Index>(std::min(chunk, total - begin));
    CMatrix phases(g, width);
    for (Eigen::Index s = 0; s < width; ++s)
      for (Eigen::Index m = 0; m < g; ++m)
        phases(m, s) = std::polar(1.0, -terms.frequencies[m] * times[begin + s]);
    const CMatrix partial = stacked * phases.conjugate();
    for (Eigen::Index s = 0; s < width; ++s)
      for (Eigen::Index x = 0; x < k; ++x)
        out(begin + s, x) =
            (phases.col(s).transpose() * partial.block(x * g, s, g, 1))(0, 0).real();
  }
  return out;
}

}  // namespace omp
}  // namespace geminal::kernels
