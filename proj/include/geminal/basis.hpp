#pragma once

// Spin-orbital and geminal bookkeeping.
//
// Orbital indices are 1-based throughout the public interface. Spin-orbital k
// lives on site ceil(k/2) with spin up for odd k and spin down for even k.
// Geminal (pair) flat indices follow the ordering
//   (1,2) (1,3) (2,3) (1,4) (2,4) (3,4) ...
// i.e. pair_index(i, j) = (j-1)(j-2)/2 + i.

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace geminal {

enum class Spin { up, down };

/// An ordered spin-orbital pair (first < second), 1-based.
struct OrbitalPair {
  int first = 0;
  int second = 0;

  auto operator<=>(const OrbitalPair&) const = default;
};

class SpinOrbitalBasis {
 public:
  SpinOrbitalBasis(int n_sites, double spacing);

  int n_sites() const { return n_sites_; }
  double spacing() const { return spacing_; }
  int n_orbitals() const { return 2 * n_sites_; }

  int site(int orbital) const;
  Spin spin(int orbital) const;
  int orbital(int site, Spin spin) const;

 private:
  int n_sites_;
  double spacing_;
};

/// Strictly increasing list of occupied spin-orbitals (a Slater determinant
/// label). Orbitals up to 64 are supported so that the bit mask is exact.
class Configuration {
 public:
  static constexpr int max_orbitals = 64;

  Configuration() = default;
  explicit Configuration(std::vector<int> orbitals);

  static Configuration from_mask(std::uint64_t mask);

  std::span<const int> orbitals() const { return orbitals_; }
  int size() const { return static_cast<int>(orbitals_.size()); }
  int operator[](int i) const { return orbitals_[static_cast<std::size_t>(i)]; }

  bool contains(int orbital) const;
  /// 1-based position of `orbital` inside the configuration, 0 when absent.
  int position(int orbital) const;
  std::uint64_t mask() const { return mask_; }
  int max_orbital() const { return orbitals_.empty() ? 0 : orbitals_.back(); }

  /// All N(N-1)/2 pairs in pair_index order.
  std::vector<OrbitalPair> pairs() const;

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.mask_ == b.mask_;
  }
  friend std::strong_ordering operator<=>(const Configuration& a,
                                          const Configuration& b) {
    return a.orbitals_ <=> b.orbitals_;
  }

 private:
  std::vector<int> orbitals_;
  std::uint64_t mask_ = 0;
};

int pair_count(int n_orbitals);
int pair_index(OrbitalPair pair);
int pair_index(int i, int j);
OrbitalPair pair_from_index(int index);

struct ReducedConfiguration {
  Configuration rest;
  int sign = 1;
};

/// Removes the pair m from alpha; sign = (-1)^(I[m1] + I[m2] - 1) with I the
/// 1-based positions of m1, m2 in alpha.
ReducedConfiguration reduced_configuration(const Configuration& alpha,
                                           OrbitalPair m);

/// All C(K, N) configurations in lexicographic order.
std::vector<Configuration> enumerate_configurations(int n_orbitals,
                                                    int n_electrons);

std::uint64_t binomial(int n, int k);

/// Pair bookkeeping over K spin-orbitals. Rows are 0-based:
/// row(pair) == pair_index(pair) - 1.
class GeminalBasis {
 public:
  explicit GeminalBasis(int n_orbitals);

  int n_orbitals() const { return n_orbitals_; }
  int size() const { return static_cast<int>(pairs_.size()); }
  OrbitalPair pair(int row) const { return pairs_[static_cast<std::size_t>(row)]; }
  int row(OrbitalPair pair) const;
  int row(int i, int j) const { return row(OrbitalPair{i, j}); }
  std::span<const OrbitalPair> pairs() const { return pairs_; }

 private:
  int n_orbitals_;
  std::vector<OrbitalPair> pairs_;
};

}  // namespace geminal
