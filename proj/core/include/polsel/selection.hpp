#pragma once

// Dipole selection rules for direct (zero-phonon) and phonon-assisted
// transitions, with the displacement/field collinearity override.

#include "polsel/group.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polsel {

/// Direction of the light's electric field relative to the crystal c axis.
class Polarization {
 public:
  enum class Kind { ParallelC, PerpendicularC, InPlaneAngle };

  static Polarization parallel_c() { return Polarization(Kind::ParallelC, 0.0); }
  static Polarization perpendicular_c() { return Polarization(Kind::PerpendicularC, 0.0); }
  /// Azimuth in the basal plane, measured from the mirror plane of C1h.
  static Polarization in_plane(double azimuth_deg) {
    return Polarization(Kind::InPlaneAngle, azimuth_deg);
  }

  Kind kind() const { return kind_; }
  double azimuth_deg() const { return azimuth_; }
  bool along_c() const { return kind_ == Kind::ParallelC; }

  std::string to_string() const;

  friend bool operator==(const Polarization&, const Polarization&) = default;

 private:
  Polarization(Kind k, double az) : kind_(k), azimuth_(az) {}
  Kind kind_;
  double azimuth_;
};

/// Parses "par", "parallel", "||c", "perp", "perpendicular", "_|_c", or
/// "inplane:<deg>".
Polarization parse_polarization(std::string_view text);

enum class DisplacementAxis {
  AlongC,
  InBasalPlane,
  Mixed,  // components both along c and in the basal plane (A' of C1h)
};

struct PhononMode {
  std::string irrep;
  DisplacementAxis axis = DisplacementAxis::AlongC;
};

/// Phonon of the given symmetry with its conventional displacement axis:
/// in C3v (and its double group) A1, A2 along c and E in the basal plane;
/// in C1h A' mixed and A'' in the basal plane.
PhononMode phonon_mode(const PointGroup& group, std::string_view irrep);

struct TransitionQuery {
  PointGroup group;
  std::string initial;
  std::string final;
  Polarization polarization = Polarization::perpendicular_c();
  std::optional<PhononMode> phonon;
};

enum class Outcome { Allowed, Forbidden, FormallyAllowedPhysicallyForbidden };

struct Verdict {
  Outcome value = Outcome::Forbidden;
  bool group_theory_allowed = false;
  bool physical_coupling = false;

  /// "A", "F" or "A*".
  std::string symbol() const;
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

enum class Policy { GroupTheoryOnly, PhysicalOverride };

Policy parse_policy(std::string_view text);
std::string to_string(Policy policy);

/// Representation carried by the dipole operator for a field direction.
/// C3v and its double group: parallel -> A1, perpendicular -> E.
/// C1h: parallel -> A', perpendicular -> A' + A'', in-plane azimuth 0 -> A',
/// 90 -> A'', anything else -> A' + A''.
RepVector dipole_rep(const PointGroup& group, const Polarization& pol);

/// Zero-phonon transition: allowed iff conj(final) x dipole x initial
/// contains the trivial irrep.
Verdict direct_verdict(const TransitionQuery& q);

/// Phonon-assisted transition. Under PhysicalOverride a formally allowed
/// transition additionally needs the field to overlap the phonon
/// displacement, unless the direct transition with the same polarization is
/// already allowed. Under GroupTheoryOnly coupling is not assessed and is
/// reported as true.
Verdict phonon_assisted_verdict(const TransitionQuery& q,
                                Policy policy = Policy::PhysicalOverride);

/// Dispatches on whether q.phonon is set.
Verdict evaluate(const TransitionQuery& q, Policy policy = Policy::PhysicalOverride);

/// True if a field with this polarization has a nonzero projection on the
/// displacement axis.
bool field_couples(const Polarization& pol, DisplacementAxis axis);

/// Spin sublevel classes of a half-integer-spin state in the double group.
enum class KramersLevel {
  Half,      // |Sz| = 1/2, E1/2
  ThreeHalf  // |Sz| = 3/2, 1E3/2 + 2E3/2
};

std::vector<std::string> sublevel_irreps(KramersLevel level);
KramersLevel parse_kramers_level(std::string_view text);

/// Summed trivial-irrep multiplicity over all sublevel pairs
/// conj(final) x dipole x initial, computed from C3v_double characters.
int kramers_trivial_count(KramersLevel initial, KramersLevel final,
                          const Polarization& pol);

/// Allowed iff any sublevel pair is allowed.
Verdict kramers_verdict(KramersLevel initial, KramersLevel final, const Polarization& pol);

enum class DefectClass {
  TripletAxial,              // 3A2 <-> 3E in C3v (axial VV, NV)
  SiliconVacancySingleGroup  // 4A2 <-> 4A2 in single-group C3v
};

DefectClass parse_defect_class(std::string_view text);
std::string to_string(DefectClass dc);

struct SelectionRow {
  Polarization polarization;
  /// ZPL, then phonon A1, A2, E.
  std::array<Verdict, 4> cells;
};

struct SelectionTable {
  DefectClass defect_class;
  Policy policy;
  std::string transition;  // e.g. "3A2 <-> 3E"
  std::array<std::string, 4> columns;
  std::vector<SelectionRow> rows;  // perpendicular first, then parallel
};

SelectionTable selection_table(DefectClass dc, Policy policy = Policy::PhysicalOverride);

/// Delimited text: header row, then one row per polarization.
std::string to_delimited(const SelectionTable& table, char delimiter = '\t');
/// Aligned human-readable grid.
std::string to_text(const SelectionTable& table);
/// JSON document mirroring the grid layout.
std::string to_json(const SelectionTable& table);

}  // namespace polsel
