#pragma once

// Finite point groups given by exact character tables, and the
// representation algebra (products, reduction, conjugation) built on them.

#include "polsel/scalar.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace polsel {

enum class IrrepKind { Single, Extra };

struct ConjugacyClass {
  std::string label;
  int size = 0;
};

struct Irrep {
  std::string label;
  IrrepKind kind = IrrepKind::Single;
  std::vector<Scalar> characters;  // one per class, identity class first

  int dimension() const;
};

/// Raw character-table data. Nothing here is trusted until verify_table()
/// passes; use PointGroup for anything downstream.
struct CharacterTable {
  std::string name;
  int order = 0;
  std::vector<ConjugacyClass> classes;
  std::vector<Irrep> irreps;
};

struct TableCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<TableCheck> checks;

  bool ok() const;
  std::vector<TableCheck> failures() const;
  const TableCheck* find(std::string_view name) const;
};

/// Runs every structural invariant on a table: class sizes sum to the order,
/// squared dimensions sum to the order, row and column orthogonality, a
/// unique trivial irrep, identity class first. Failures are reported, never
/// thrown.
VerificationReport verify_table(const CharacterTable& table);

/// A verified, immutable character table. Copies share the same table, and
/// two PointGroup values are the same group iff they share it.
class PointGroup {
 public:
  /// Verifies `table` and throws InvalidTable listing failed checks.
  static PointGroup from_table(CharacterTable table);

  const CharacterTable& table() const { return *table_; }
  const std::string& name() const { return table_->name; }
  int order() const { return table_->order; }
  std::size_t class_count() const { return table_->classes.size(); }
  std::size_t irrep_count() const { return table_->irreps.size(); }

  const Irrep& irrep(std::size_t index) const { return table_->irreps.at(index); }
  /// Throws UnknownIrrep with the list of valid labels.
  std::size_t irrep_index(std::string_view label) const;
  bool has_irrep(std::string_view label) const;
  std::size_t trivial_index() const { return trivial_; }
  std::vector<std::string> irrep_labels() const;

  friend bool operator==(const PointGroup& a, const PointGroup& b) {
    return a.table_ == b.table_;
  }

 private:
  PointGroup(std::shared_ptr<const CharacterTable> t, std::size_t trivial)
      : table_(std::move(t)), trivial_(trivial) {}

  std::shared_ptr<const CharacterTable> table_;
  std::size_t trivial_ = 0;
};

/// Built-in groups: "C3v", "C1h", "C3v_double". Each call returns the same
/// shared instance. Throws UnknownGroup otherwise.
PointGroup builtin_group(std::string_view name);
std::vector<std::string> builtin_group_names();

/// Character-table text for a built-in group, in the load_table() format.
std::string_view builtin_table_text(std::string_view name);

/// Parses the plain-text table format:
///
///   # comment
///   name C3v
///   order 6
///   class E 1
///   class 2C3 2
///   class 3sv 3
///   irrep A1 single 1 1 1
///   irrep E  single 2 -1 0
///
/// Characters are exact Gaussian rationals ("1", "-1/2", "i", "-i").
CharacterTable parse_table(std::string_view text);
std::string format_table(const CharacterTable& table);

/// parse_table() followed by verification.
PointGroup load_group(std::string_view text);

/// A class function on a group; not necessarily a character.
class RepVector {
 public:
  RepVector(PointGroup group, std::vector<Scalar> characters);

  static RepVector irrep(const PointGroup& group, std::string_view label);
  static RepVector trivial(const PointGroup& group);

  const PointGroup& group() const { return group_; }
  const std::vector<Scalar>& characters() const { return chars_; }
  /// Character on the identity class.
  Scalar dimension() const { return chars_.front(); }

  friend bool operator==(const RepVector& a, const RepVector& b) {
    return a.group_ == b.group_ && a.chars_ == b.chars_;
  }

 private:
  PointGroup group_;
  std::vector<Scalar> chars_;
};

class Multiplicities {
 public:
  Multiplicities(PointGroup group, std::vector<int> counts);

  const PointGroup& group() const { return group_; }
  const std::vector<int>& counts() const { return counts_; }
  int count(std::string_view label) const;
  int total_dimension() const;

  /// Sum of multiplicity-weighted irreducible characters.
  RepVector reconstruct() const;
  /// Direct-sum notation, e.g. "A1 ⊕ A2 ⊕ E" or "2A1 ⊕ E"; "0" if empty.
  std::string to_string(std::string_view separator = " ⊕ ") const;

  friend bool operator==(const Multiplicities& a, const Multiplicities& b) {
    return a.group_ == b.group_ && a.counts_ == b.counts_;
  }

 private:
  PointGroup group_;
  std::vector<int> counts_;
};

/// Class-wise product of characters. Throws GroupMismatch.
RepVector tensor_product(const RepVector& a, const RepVector& b);
RepVector direct_sum(const RepVector& a, const RepVector& b);
RepVector conjugate(const RepVector& rep);

/// Reduction formula m_k = (1/|G|) sum_c n_c chi(c) conj(chi_k(c)).
/// Throws InvalidRepresentation unless every m_k is a non-negative integer.
Multiplicities decompose(const RepVector& rep);

/// Exact multiplicity of the trivial irrep without the integrality check.
Scalar trivial_multiplicity(const RepVector& rep);

bool contains_trivial(const RepVector& rep);

/// Product of irreps by label, left to right.
RepVector product_of(const PointGroup& group, const std::vector<std::string>& labels);

/// Returns the label of the irrep whose character row equals `rep`, or an
/// empty string.
std::string matching_irrep(const RepVector& rep);

/// Normalizes typographic label variants (U+2032 prime, U+2033 double prime,
/// subscript digits) to the ASCII forms used in tables.
std::string normalize_label(std::string_view label);

}  // namespace polsel
