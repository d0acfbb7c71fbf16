#pragma once

#include <bit>
#include <random>
#include <string>

#include "geminal/gdm.hpp"
#include "geminal/io.hpp"
#include "geminal/model.hpp"

namespace geminal::testing {

inline std::string model_path(const std::string& name) {
  return std::string(GEMINAL_MODELS_DIR) + "/" + name + ".json";
}

inline std::string data_path(const std::string& name) {
  return std::string(GEMINAL_DATA_DIR) + "/" + name + ".json";
}

inline LatticeModel load(const std::string& name) {
  return LatticeModel(load_model(model_path(name)));
}

/// Two sites, hopping 0.5, no nuclei.
inline ModelDescription two_site(InteractionKind kind = InteractionKind::none,
                                 double strength = 0.0) {
  ModelDescription d;
  d.n_sites = 2;
  d.spacing = 1.0;
  d.kinetic = KineticForm::tight_binding;
  d.interaction.kind = kind;
  d.interaction.strength = strength;
  d.perturbation_seed = 1;
  return d;
}

inline CIVector random_ci(std::shared_ptr<const ConfigurationSpace> space,
                          std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  CVector c(static_cast<Eigen::Index>(space->size()));
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = cplx(gauss(rng), gauss(rng));
  c.normalize();
  return CIVector(std::move(space), c);
}

inline CMatrix random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cplx(gauss(rng), gauss(rng));
  return 0.5 * (a + a.adjoint());
}

// Fermionic operators on bit-coded determinants |alpha> = a+_a1 ... a+_aN |0>
// with a1 < ... < aN. Returns false when the result vanishes.
inline bool annihilate(std::uint64_t& mask, int& sign, int orbital) {
  const std::uint64_t bit = std::uint64_t{1} << (orbital - 1);
  if (!(mask & bit)) return false;
  if (std::popcount(mask & (bit - 1)) % 2) sign = -sign;
  mask &= ~bit;
  return true;
}

inline bool create(std::uint64_t& mask, int& sign, int orbital) {
  const std::uint64_t bit = std::uint64_t{1} << (orbital - 1);
  if (mask & bit) return false;
  if (std::popcount(mask & (bit - 1)) % 2) sign = -sign;
  mask |= bit;
  return true;
}

// <psi| a+_n1 a+_n2 a_m2 a_m1 |psi> for every pair of pairs (m, n), laid out
// as [m][n] to match D = Theta Theta^dagger.
inline CMatrix brute_force_pair_matrix(const CIVector& psi) {
  const ConfigurationSpace& s = psi.space();
  const GeminalBasis basis(s.n_orbitals());
  const int g = basis.size();
  CMatrix out = CMatrix::Zero(g, g);
  for (int m = 0; m < g; ++m)
    for (int n = 0; n < g; ++n) {
      const OrbitalPair pm = basis.pair(m), pn = basis.pair(n);
      cplx sum = 0.0;
      for (std::size_t a = 0; a < s.size(); ++a) {
        std::uint64_t mask = s.masks()[a];
        int sign = 1;
        if (!annihilate(mask, sign, pm.first) || !annihilate(mask, sign, pm.second) ||
            !create(mask, sign, pn.second) || !create(mask, sign, pn.first))
          continue;
        const auto b = s.index_of(mask);
        sum += std::conj(psi.coefficients()[static_cast<Eigen::Index>(*b)]) *
               psi.coefficients()[static_cast<Eigen::Index>(a)] * static_cast<double>(sign);
      }
      out(m, n) = sum;
    }
  return out;
}

}  // namespace geminal::testing
