#pragma once

/**
 * @file matgrp.hpp
 * @brief Finite subgroups of GL2(Z/N): closure, reductions, standard
 *        constructors, Dickson-type classification and subgroup enumeration.
 */

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "galimage/residue.hpp"

namespace galimage {

inline constexpr std::size_t kDefaultClosureCap = std::size_t{1} << 22;

class FiniteMatrixGroup {
 public:
  /// Breadth-first closure of the generators; throws CapExceeded past cap.
  static FiniteMatrixGroup closure(std::uint32_t modulus, const std::vector<Mat2>& gens,
                                   std::size_t cap = kDefaultClosureCap);
  /// Wraps a known closed element set; a small generating set is chosen greedily.
  static FiniteMatrixGroup from_elements(std::uint32_t modulus, std::vector<Mat2> elements);
  /// Trusted constructor for sets already known to be closed and generated by gens.
  static FiniteMatrixGroup from_closed(std::uint32_t modulus, std::vector<Mat2> gens,
                                       std::vector<std::uint64_t> sorted_keys);

  std::uint32_t modulus() const { return modulus_; }
  const std::vector<Mat2>& generators() const { return gens_; }
  /// Elements in lexicographic order of (a, b, c, d).
  const std::vector<Mat2>& elements() const { return elems_; }
  const std::vector<std::uint64_t>& keys() const { return keys_; }
  std::size_t order() const { return elems_.size(); }

  bool contains(const Mat2& g) const;
  /// Index into elements(); throws if absent.
  std::size_t index_of(const Mat2& g) const;
  std::optional<std::size_t> find(const Mat2& g) const;
  bool is_subgroup_of(const FiniteMatrixGroup& other) const;

  /// Units lambda with lambda * Id in the group, ascending.
  const std::vector<std::uint32_t>& scalar_subgroup() const { return scalars_; }
  /// Determinants of elements, ascending.
  const std::vector<std::uint32_t>& determinant_image() const { return dets_; }

  /// Image under reduction modulo a divisor of the modulus.
  FiniteMatrixGroup reduce(std::uint32_t divisor) const;
  /// Elements congruent to Id modulo the divisor.
  FiniteMatrixGroup kernel_of_reduction(std::uint32_t divisor) const;
  /// Subgroup of elements with determinant 1.
  FiniteMatrixGroup intersect_sl2() const;
  /// Text form `modulus=N; gens=a,b,c,d | ...`.
  std::string to_text() const;

  friend bool operator==(const FiniteMatrixGroup& a, const FiniteMatrixGroup& b) {
    return a.modulus_ == b.modulus_ && a.keys_ == b.keys_;
  }

 private:
  void finish();

  std::uint32_t modulus_ = 1;
  std::vector<Mat2> gens_;
  std::vector<Mat2> elems_;
  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> scalars_;
  std::vector<std::uint32_t> dets_;
};

/// Parses `modulus=N; gens=a,b,c,d | e,f,g,h`.  Throws DomainError.
std::pair<std::uint32_t, std::vector<Mat2>> parse_group_text(const std::string& text);
FiniteMatrixGroup group_from_text(const std::string& text, std::size_t cap = kDefaultClosureCap);

/// A small generating set of (Z/N)^x, ascending.
std::vector<std::uint32_t> unit_group_generators(std::uint32_t modulus);

// Standard groups -----------------------------------------------------------

FiniteMatrixGroup gl2(std::uint32_t modulus, std::size_t cap = kDefaultClosureCap);
FiniteMatrixGroup sl2(std::uint32_t modulus, std::size_t cap = kDefaultClosureCap);
/// Upper-triangular invertible matrices.
FiniteMatrixGroup borel(std::uint32_t modulus, std::size_t cap = kDefaultClosureCap);
FiniteMatrixGroup upper_unitriangular(std::uint32_t modulus);
/// Full preimage of G under GL2(Z/l^k) -> GL2(Z/l^j); both moduli powers of l.
FiniteMatrixGroup full_preimage(const FiniteMatrixGroup& g, std::uint32_t modulus,
                                std::size_t cap = kDefaultClosureCap);
/// Generators of the full preimage without forming its closure.
std::vector<Mat2> full_preimage_generators(const FiniteMatrixGroup& g, std::uint32_t modulus);

struct CartanSpec {
  std::uint32_t ell = 0;
  std::uint32_t delta = 1;
  /// Conjugated model {[[x + eps w, -w], [w, x - eps w]]}, eps = (delta+1)/(delta-1);
  /// for delta = 1 the diagonal torus.
  bool starred = false;
};

bool is_square_mod(std::uint32_t x, std::uint32_t p);
FiniteMatrixGroup cartan(const CartanSpec& spec);
FiniteMatrixGroup cartan_normalizer(const CartanSpec& spec);
/// The starred-model parameter eps = (delta+1)/(delta-1) mod l.
std::uint32_t starred_epsilon(std::uint32_t ell, std::uint32_t delta);

// Classification ------------------------------------------------------------

enum class DicksonTag {
  kContainsSL2,
  kBorel,
  kCartanNormalizerSplit,
  kCartanNormalizerNonsplit,
  kExceptionalA4,
  kExceptionalS4,
  kExceptionalA5,
  kSubline,
};

std::string to_string(DicksonTag tag);

struct DicksonVerdict {
  DicksonTag tag;
  /// Stable line [x:y] for Borel; for Cartan normalizers the line pair as
  /// slopes: split lines use entries of F_l (l encodes the line [0:1]),
  /// nonsplit lines encode t = t0 + t1 r with r^2 the fixed non-residue.
  std::vector<std::uint32_t> witness;
  /// Order of the projective image.
  std::size_t projective_order = 0;
  std::string witness_text;
};

DicksonVerdict dickson_classify(const FiniteMatrixGroup& g);

enum class Irreducibility { kReducible, kIrreducible, kAbsolutelyIrreducible };
std::string to_string(Irreducibility r);
Irreducibility irreducibility_report(const FiniteMatrixGroup& g);

/// Lines of P^1(F_p) fixed by every generator, as [x:y] with x in {0,1}.
std::vector<std::array<std::uint32_t, 2>> stable_lines(const FiniteMatrixGroup& g);

/// Order of the image of the group in PGL2.
std::size_t projective_order(const FiniteMatrixGroup& g);
/// Least t >= 1 with g^t scalar.
std::uint64_t projective_element_order(const Mat2& g);
std::uint64_t element_order(const Mat2& g);

// Enumeration ---------------------------------------------------------------

struct SubgroupEnumerationOptions {
  std::size_t order_cap = 512;
  /// Keep one representative per conjugacy class under `ambient` (default: G).
  bool up_to_conjugacy = false;
  const FiniteMatrixGroup* ambient = nullptr;
  std::function<bool(const FiniteMatrixGroup&)> filter;
};

/// All subgroups, ordered by (order, element keys).
std::vector<FiniteMatrixGroup> enumerate_subgroups(const FiniteMatrixGroup& g,
                                                   const SubgroupEnumerationOptions& opts = {});

/// Generators of the order-288 group used in the mod-13 analysis.
FiniteMatrixGroup s4_type_group_mod13();
/// Conditions: surjective determinant, an involution of trace 0,
/// projective exponent at least 3, and no stable line.
bool s4_class_filter(const FiniteMatrixGroup& h);
/// Exponent of the projective image.
std::uint64_t projective_exponent(const FiniteMatrixGroup& g);

}  // namespace galimage
