#include "polsel/selection.hpp"

#include "polsel/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>

namespace polsel {

namespace {

bool is_c3v_family(const PointGroup& g) { return g.name() == "C3v" || g.name() == "C3v_double"; }

// Azimuth reduced into [0, 180).
double reduce_azimuth(double deg) {
  double r = std::fmod(deg, 180.0);
  return r < 0 ? r + 180.0 : r;
}

bool near(double a, double b) { return std::abs(a - b) < 1e-9; }

RepVector sum_of(const PointGroup& g, std::initializer_list<std::string_view> labels) {
  std::vector<Scalar> chars(g.class_count());
  for (auto label : labels) {
    const auto& row = g.irrep(g.irrep_index(label)).characters;
    for (std::size_t c = 0; c < chars.size(); ++c) chars[c] += row[c];
  }
  return RepVector(g, std::move(chars));
}

bool group_theory_allows(const PointGroup& g, std::string_view initial, std::string_view final,
                         const RepVector& dipole, const RepVector* phonon) {
  RepVector prod = tensor_product(conjugate(RepVector::irrep(g, final)), dipole);
  if (phonon) prod = tensor_product(prod, *phonon);
  prod = tensor_product(prod, RepVector::irrep(g, initial));
  return contains_trivial(prod);
}

Verdict make_verdict(bool gt, bool coupling) {
  Verdict v;
  v.group_theory_allowed = gt;
  v.physical_coupling = coupling;
  if (!gt) {
    v.value = Outcome::Forbidden;
  } else if (!coupling) {
    v.value = Outcome::FormallyAllowedPhysicallyForbidden;
  } else {
    v.value = Outcome::Allowed;
  }
  return v;
}

}  // namespace

std::string Polarization::to_string() const {
  switch (kind_) {
    case Kind::ParallelC:
      return "par";
    case Kind::PerpendicularC:
      return "perp";
    case Kind::InPlaneAngle: {
      std::ostringstream os;
      os << "inplane:" << azimuth_;
      return os.str();
    }
  }
  return {};
}

Polarization parse_polarization(std::string_view text) {
  if (text == "par" || text == "parallel" || text == "||c" || text == "par-c")
    return Polarization::parallel_c();
  if (text == "perp" || text == "perpendicular" || text == "_|_c" || text == "perp-c")
    return Polarization::perpendicular_c();
  if (text.rfind("inplane:", 0) == 0) {
    std::string num(text.substr(8));
    try {
      std::size_t used = 0;
      double deg = std::stod(num, &used);
      if (used == num.size() && std::isfinite(deg)) return Polarization::in_plane(deg);
    } catch (const std::exception&) {
    }
  }
  throw InvalidArgument("unknown polarization '" + std::string(text) +
                        "' (expected par, perp or inplane:<deg>)");
}

PhononMode phonon_mode(const PointGroup& group, std::string_view irrep) {
  std::size_t k = group.irrep_index(irrep);
  const Irrep& ir = group.irrep(k);
  if (ir.kind == IrrepKind::Extra)
    throw InvalidArgument("phonon irrep " + ir.label + " is an extra (spinor) representation");
  if (is_c3v_family(group)) {
    if (ir.label == "A1" || ir.label == "A2") return {ir.label, DisplacementAxis::AlongC};
    return {ir.label, DisplacementAxis::InBasalPlane};
  }
  if (group.name() == "C1h") {
    if (ir.label == "A'") return {ir.label, DisplacementAxis::Mixed};
    return {ir.label, DisplacementAxis::InBasalPlane};
  }
  throw UnsupportedPolarization("no displacement convention for phonons of group " +
                                group.name());
}

std::string Verdict::symbol() const {
  switch (value) {
    case Outcome::Allowed:
      return "A";
    case Outcome::Forbidden:
      return "F";
    case Outcome::FormallyAllowedPhysicallyForbidden:
      return "A*";
  }
  return "?";
}

Policy parse_policy(std::string_view text) {
  if (text == "group-theory-only") return Policy::GroupTheoryOnly;
  if (text == "physical-override") return Policy::PhysicalOverride;
  throw InvalidArgument("unknown policy '" + std::string(text) +
                        "' (expected group-theory-only or physical-override)");
}

std::string to_string(Policy policy) {
  return policy == Policy::GroupTheoryOnly ? "group-theory-only" : "physical-override";
}

RepVector dipole_rep(const PointGroup& group, const Polarization& pol) {
  if (is_c3v_family(group)) {
    // Every in-plane direction is equivalent under C3v.
    return RepVector::irrep(group, pol.along_c() ? "A1" : "E");
  }
  if (group.name() == "C1h") {
    switch (pol.kind()) {
      case Polarization::Kind::ParallelC:
        return RepVector::irrep(group, "A'");
      case Polarization::Kind::PerpendicularC:
        return sum_of(group, {"A'", "A''"});
      case Polarization::Kind::InPlaneAngle: {
        double az = reduce_azimuth(pol.azimuth_deg());
        if (near(az, 0.0) || near(az, 180.0)) return RepVector::irrep(group, "A'");
        if (near(az, 90.0)) return RepVector::irrep(group, "A''");
        return sum_of(group, {"A'", "A''"});
      }
    }
  }
  throw UnsupportedPolarization("no dipole convention for group " + group.name() +
                                " with polarization " + pol.to_string());
}

Verdict direct_verdict(const TransitionQuery& q) {
  if (q.phonon) throw InvalidArgument("direct_verdict called with a phonon");
  RepVector d = dipole_rep(q.group, q.polarization);
  return make_verdict(group_theory_allows(q.group, q.initial, q.final, d, nullptr), true);
}

bool field_couples(const Polarization& pol, DisplacementAxis axis) {
  if (axis == DisplacementAxis::Mixed) return true;
  return pol.along_c() ? axis == DisplacementAxis::AlongC
                       : axis == DisplacementAxis::InBasalPlane;
}

Verdict phonon_assisted_verdict(const TransitionQuery& q, Policy policy) {
  if (!q.phonon) throw InvalidArgument("phonon_assisted_verdict needs a phonon");
  const PhononMode& ph = *q.phonon;
  if (q.group.irrep(q.group.irrep_index(ph.irrep)).kind == IrrepKind::Extra)
    throw InvalidArgument("phonon irrep " + ph.irrep + " is an extra (spinor) representation");

  RepVector d = dipole_rep(q.group, q.polarization);
  RepVector p = RepVector::irrep(q.group, ph.irrep);
  bool gt = group_theory_allows(q.group, q.initial, q.final, d, &p);
  if (policy == Policy::GroupTheoryOnly) return make_verdict(gt, true);

  bool direct_ok = group_theory_allows(q.group, q.initial, q.final, d, nullptr);
  bool coupling = direct_ok || field_couples(q.polarization, ph.axis);
  return make_verdict(gt, coupling);
}

Verdict evaluate(const TransitionQuery& q, Policy policy) {
  return q.phonon ? phonon_assisted_verdict(q, policy) : direct_verdict(q);
}

std::vector<std::string> sublevel_irreps(KramersLevel level) {
  if (level == KramersLevel::Half) return {"E1/2"};
  return {"1E3/2", "2E3/2"};
}

KramersLevel parse_kramers_level(std::string_view text) {
  if (text == "1/2" || text == "half" || text == "E1/2") return KramersLevel::Half;
  if (text == "3/2" || text == "three-half" || text == "E3/2") return KramersLevel::ThreeHalf;
  throw InvalidArgument("unknown Kramers level '" + std::string(text) + "' (expected 1/2 or 3/2)");
}

int kramers_trivial_count(KramersLevel initial, KramersLevel final, const Polarization& pol) {
  if (pol.kind() == Polarization::Kind::InPlaneAngle)
    throw UnsupportedPolarization("Kramers rules take par or perp polarization");
  PointGroup g = builtin_group("C3v_double");
  RepVector d = dipole_rep(g, pol);
  int total = 0;
  for (const auto& fi : sublevel_irreps(initial)) {
    for (const auto& ff : sublevel_irreps(final)) {
      RepVector prod = tensor_product(
          tensor_product(conjugate(RepVector::irrep(g, ff)), d), RepVector::irrep(g, fi));
      total += decompose(prod).counts()[g.trivial_index()];
    }
  }
  return total;
}

Verdict kramers_verdict(KramersLevel initial, KramersLevel final, const Polarization& pol) {
  return make_verdict(kramers_trivial_count(initial, final, pol) > 0, true);
}

DefectClass parse_defect_class(std::string_view text) {
  if (text == "triplet-axial") return DefectClass::TripletAxial;
  if (text == "vsi-single-group") return DefectClass::SiliconVacancySingleGroup;
  throw InvalidArgument("unknown defect class '" + std::string(text) +
                        "' (expected triplet-axial or vsi-single-group)");
}

std::string to_string(DefectClass dc) {
  return dc == DefectClass::TripletAxial ? "triplet-axial" : "vsi-single-group";
}

SelectionTable selection_table(DefectClass dc, Policy policy) {
  PointGroup g = builtin_group("C3v");
  SelectionTable t{dc, policy, {}, {"ZPL", "A1", "A2", "E"}, {}};
  std::string initial = "A2";
  std::string final = dc == DefectClass::TripletAxial ? "E" : "A2";
  t.transition = dc == DefectClass::TripletAxial ? "3A2 <-> 3E" : "4A2 <-> 4A2";

  for (const auto& pol : {Polarization::perpendicular_c(), Polarization::parallel_c()}) {
    SelectionRow row{pol, {}};
    row.cells[0] = direct_verdict({g, initial, final, pol, std::nullopt});
    for (std::size_t k = 1; k < 4; ++k)
      row.cells[k] = phonon_assisted_verdict(
          {g, initial, final, pol, phonon_mode(g, t.columns[k])}, policy);
    t.rows.push_back(row);
  }
  return t;
}

namespace {

std::string row_name(const Polarization& p) { return p.along_c() ? "E||c" : "E_|_c"; }

}  // namespace

std::string to_delimited(const SelectionTable& t, char delim) {
  std::ostringstream out;
  out << "polarization";
  for (const auto& c : t.columns) out << delim << c;
  out << "\n";
  for (const auto& row : t.rows) {
    out << row.polarization.to_string();
    for (const auto& v : row.cells) out << delim << v.symbol();
    out << "\n";
  }
  return out.str();
}

std::string to_text(const SelectionTable& t) {
  std::ostringstream out;
  out << "C3v " << t.transition << " (" << to_string(t.defect_class)
      << ", policy " << to_string(t.policy) << ")\n";
  out << "              ZPL  phonon-assisted\n";
  out << "polarization       A1   A2   E\n";
  auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size(), ' '); };
  for (const auto& row : t.rows) {
    out << pad(row_name(row.polarization), 14);
    for (std::size_t k = 0; k < row.cells.size(); ++k) {
      std::string sym = row.cells[k].symbol();
      out << (k + 1 < row.cells.size() ? pad(sym, 5) : sym);
    }
    out << "\n";
  }
  bool any_star = false;
  for (const auto& row : t.rows)
    for (const auto& v : row.cells) any_star |= v.value == Outcome::FormallyAllowedPhysicallyForbidden;
  out << "A allowed, F forbidden";
  if (any_star) out << ", A* allowed by group theory but the field is orthogonal to the phonon displacement";
  out << "\n";
  return out.str();
}

std::string to_json(const SelectionTable& t) {
  nlohmann::ordered_json doc;
  doc["defect_class"] = to_string(t.defect_class);
  doc["group"] = "C3v";
  doc["transition"] = t.transition;
  doc["policy"] = to_string(t.policy);
  doc["columns"] = t.columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r;
    r["polarization"] = row.polarization.to_string();
    r["cells"] = nlohmann::ordered_json::array();
    for (const auto& v : row.cells)
      r["cells"].push_back({{"symbol", v.symbol()},
                            {"group_theory_allowed", v.group_theory_allowed},
                            {"physical_coupling", v.physical_coupling}});
    doc["rows"].push_back(std::move(r));
  }
  return doc.dump(2) + "\n";
}

}  // namespace polsel
