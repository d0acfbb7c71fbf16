#include "geminal/basis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "geminal/errors.hpp"

namespace geminal {

SpinOrbitalBasis::SpinOrbitalBasis(int n_sites, double spacing)
    : n_sites_(n_sites), spacing_(spacing) {
  if (n_sites < 1) throw InputError("n_sites must be positive");
  if (n_sites > Configuration::max_orbitals / 2)
    throw InputError("at most 32 sites are supported");
  if (!(spacing > 0.0)) throw InputError("spacing must be positive");
}

int SpinOrbitalBasis::site(int orbital) const {
  if (orbital < 1 || orbital > n_orbitals())
    throw InputError("spin-orbital index out of range: " +
                     std::to_string(orbital));
  return (orbital + 1) / 2;
}

Spin SpinOrbitalBasis::spin(int orbital) const {
  if (orbital < 1 || orbital > n_orbitals())
    throw InputError("spin-orbital index out of range: " +
                     std::to_string(orbital));
  return orbital % 2 == 1 ? Spin::up : Spin::down;
}

int SpinOrbitalBasis::orbital(int site, Spin spin) const {
  if (site < 1 || site > n_sites_)
    throw InputError("site index out of range: " + std::to_string(site));
  return 2 * site - (spin == Spin::up ? 1 : 0);
}

Configuration::Configuration(std::vector<int> orbitals)
    : orbitals_(std::move(orbitals)) {
  for (std::size_t i = 0; i < orbitals_.size(); ++i) {
    const int k = orbitals_[i];
    if (k < 1 || k > max_orbitals)
      throw InputError("orbital index out of range: " + std::to_string(k));
    if (i > 0 && orbitals_[i - 1] >= k)
      throw InputError("configuration must be strictly increasing");
    mask_ |= std::uint64_t{1} << (k - 1);
  }
}

Configuration Configuration::from_mask(std::uint64_t mask) {
  std::vector<int> orbitals;
  orbitals.reserve(static_cast<std::size_t>(std::popcount(mask)));
  while (mask != 0) {
    orbitals.push_back(std::countr_zero(mask) + 1);
    mask &= mask - 1;
  }
  return Configuration(std::move(orbitals));
}

bool Configuration::contains(int orbital) const {
  if (orbital < 1 || orbital > max_orbitals) return false;
  return (mask_ >> (orbital - 1)) & 1U;
}

int Configuration::position(int orbital) const {
  if (!contains(orbital)) return 0;
  const std::uint64_t below = (std::uint64_t{1} << (orbital - 1)) - 1;
  return std::popcount(mask_ & below) + 1;
}

std::vector<OrbitalPair> Configuration::pairs() const {
  std::vector<OrbitalPair> out;
  const int n = size();
  out.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  // Outer loop over the larger orbital reproduces pair_index order.
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) out.push_back({orbitals_[i], orbitals_[j]});
  return out;
}

int pair_count(int n_orbitals) { return n_orbitals * (n_orbitals - 1) / 2; }

int pair_index(int i, int j) {
  if (i < 1 || j <= i)
    throw InputError("pair index requires 1 <= i < j, got (" +
                     std::to_string(i) + "," + std::to_string(j) + ")");
  return (j - 1) * (j - 2) / 2 + i;
}

int pair_index(OrbitalPair pair) { return pair_index(pair.first, pair.second); }

OrbitalPair pair_from_index(int index) {
  if (index < 1)
    throw InputError("pair flat index must be >= 1, got " +
                     std::to_string(index));
  // Largest j with (j-1)(j-2)/2 < index.
  int j = static_cast<int>(
      std::ceil((3.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(index))) / 2.0));
  while ((j - 1) * (j - 2) / 2 >= index) --j;
  while ((j - 1) * j / 2 < index) ++j;
  return {index - (j - 1) * (j - 2) / 2, j};
}

ReducedConfiguration reduced_configuration(const Configuration& alpha,
                                           OrbitalPair m) {
  const int p1 = alpha.position(m.first);
  const int p2 = alpha.position(m.second);
  if (p1 == 0 || p2 == 0 || m.first == m.second)
    throw PairNotPresentError("pair (" + std::to_string(m.first) + "," +
                              std::to_string(m.second) +
                              ") is not contained in the configuration");
  const std::uint64_t removed =
      (std::uint64_t{1} << (m.first - 1)) | (std::uint64_t{1} << (m.second - 1));
  const int sign = ((p1 + p2 - 1) % 2 == 0) ? 1 : -1;
  return {Configuration::from_mask(alpha.mask() & ~removed), sign};
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i)
    result = result * static_cast<std::uint64_t>(n - k + i) /
             static_cast<std::uint64_t>(i);
  return result;
}

std::vector<Configuration> enumerate_configurations(int n_orbitals,
                                                    int n_electrons) {
  if (n_electrons <= 0) throw InputError("electron count must be positive");
  if (n_electrons > n_orbitals)
    throw InputError("electron count exceeds orbital count");
  if (n_orbitals > Configuration::max_orbitals)
    throw InputError("at most 64 spin-orbitals are supported");

  std::vector<Configuration> out;
  out.reserve(binomial(n_orbitals, n_electrons));
  std::vector<int> current(static_cast<std::size_t>(n_electrons));
  for (int i = 0; i < n_electrons; ++i) current[i] = i + 1;
  while (true) {
    out.emplace_back(current);
    int i = n_electrons - 1;
    while (i >= 0 && current[i] == n_orbitals - n_electrons + i + 1) --i;
    if (i < 0) break;
    ++current[i];
    for (int j = i + 1; j < n_electrons; ++j) current[j] = current[j - 1] + 1;
  }
  return out;
}

GeminalBasis::GeminalBasis(int n_orbitals) : n_orbitals_(n_orbitals) {
  if (n_orbitals < 2) throw InputError("a geminal basis needs K >= 2");
  pairs_.reserve(static_cast<std::size_t>(pair_count(n_orbitals)));
  for (int j = 2; j <= n_orbitals; ++j)
    for (int i = 1; i < j; ++i) pairs_.push_back({i, j});
}

int GeminalBasis::row(OrbitalPair pair) const {
  if (pair.second > n_orbitals_)
    throw InputError("pair orbital exceeds basis size");
  return pair_index(pair) - 1;
}

}  // namespace geminal
