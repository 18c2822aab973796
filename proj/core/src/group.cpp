#include "polsel/group.hpp"

#include "embedded_data.hpp"
#include "polsel/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace polsel {

int Irrep::dimension() const {
  if (characters.empty() || !characters.front().is_integer()) return 0;
  return static_cast<int>(characters.front().re().numerator());
}

bool VerificationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const TableCheck& c) { return c.passed; });
}

std::vector<TableCheck> VerificationReport::failures() const {
  std::vector<TableCheck> out;
  std::copy_if(checks.begin(), checks.end(), std::back_inserter(out),
               [](const TableCheck& c) { return !c.passed; });
  return out;
}

const TableCheck* VerificationReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

bool is_trivial_row(const Irrep& irrep) {
  return std::all_of(irrep.characters.begin(), irrep.characters.end(),
                     [](const Scalar& s) { return s == Scalar(1); });
}

}  // namespace

VerificationReport verify_table(const CharacterTable& t) {
  VerificationReport report;
  auto add = [&](std::string name, bool passed, std::string detail) {
    report.checks.push_back({std::move(name), passed, std::move(detail)});
  };

  const std::size_t nc = t.classes.size();
  const std::size_t ni = t.irreps.size();

  add("order-positive", t.order > 0, "|G| = " + std::to_string(t.order));

  bool shape_ok = nc > 0 && nc == ni;
  std::string shape_detail = std::to_string(ni) + " irreps, " + std::to_string(nc) + " classes";
  for (const auto& ir : t.irreps) {
    if (ir.characters.size() != nc) {
      shape_ok = false;
      shape_detail = "irrep " + ir.label + " has " + std::to_string(ir.characters.size()) +
                     " characters, expected " + std::to_string(nc);
    }
  }
  add("square", shape_ok, shape_detail);

  {
    std::vector<std::string> labels;
    for (const auto& ir : t.irreps) labels.push_back(ir.label);
    for (const auto& c : t.classes) labels.push_back("class:" + c.label);
    std::vector<std::string> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    bool unique = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    add("unique-labels", unique, unique ? "" : "duplicate irrep or class label");
  }

  {
    bool ok = nc > 0 && t.classes.front().size == 1;
    for (const auto& c : t.classes) ok = ok && c.size > 0;
    add("identity-first", ok, ok ? "" : "first class must be the identity with size 1");
  }

  {
    int sum = 0;
    for (const auto& c : t.classes) sum += c.size;
    add("class-sum", sum == t.order,
        std::to_string(sum) + (sum == t.order ? " = " : " != ") + "|G| = " +
            std::to_string(t.order));
  }

  if (!shape_ok) {
    for (const char* name :
         {"dimension-sum", "row-orthogonality", "column-orthogonality", "trivial-irrep"})
      add(name, false, "skipped: table is not square");
    return report;
  }

  {
    bool dims_ok = true;
    int sum = 0;
    std::string terms;
    for (const auto& ir : t.irreps) {
      int d = ir.dimension();
      if (d <= 0) dims_ok = false;
      sum += d * d;
      if (!terms.empty()) terms += "+";
      terms += std::to_string(d * d);
    }
    bool ok = dims_ok && sum == t.order;
    add("dimension-sum", ok,
        terms + " = " + std::to_string(sum) + (ok ? " = |G|" : ", |G| = " + std::to_string(t.order)));
  }

  {
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < ni && ok; ++i) {
      for (std::size_t j = 0; j < ni; ++j) {
        Scalar s;
        for (std::size_t c = 0; c < nc; ++c)
          s += Scalar(t.classes[c].size) * t.irreps[i].characters[c] *
               t.irreps[j].characters[c].conj();
        Scalar expected = i == j ? Scalar(t.order) : Scalar(0);
        if (!(s == expected)) {
          ok = false;
          detail = "<" + t.irreps[i].label + "," + t.irreps[j].label + "> = " + s.to_string() +
                   ", expected " + expected.to_string();
          break;
        }
      }
    }
    add("row-orthogonality", ok, detail);
  }

  {
    bool ok = true;
    std::string detail;
    for (std::size_t c = 0; c < nc && ok; ++c) {
      for (std::size_t d = 0; d < nc; ++d) {
        Scalar s;
        for (const auto& ir : t.irreps) s += ir.characters[c] * ir.characters[d].conj();
        Scalar expected = c == d ? Scalar(Rational(t.order, t.classes[c].size)) : Scalar(0);
        if (!(s == expected)) {
          ok = false;
          detail = "columns " + t.classes[c].label + "," + t.classes[d].label + " give " +
                   s.to_string() + ", expected " + expected.to_string();
          break;
        }
      }
    }
    add("column-orthogonality", ok, detail);
  }

  {
    auto n = std::count_if(t.irreps.begin(), t.irreps.end(), is_trivial_row);
    add("trivial-irrep", n == 1, std::to_string(n) + " all-ones rows");
  }

  return report;
}

PointGroup PointGroup::from_table(CharacterTable table) {
  auto report = verify_table(table);
  if (!report.ok()) {
    std::string msg = "character table '" + table.name + "' failed verification:";
    for (const auto& f : report.failures()) msg += " [" + f.name + ": " + f.detail + "]";
    throw InvalidTable(msg);
  }
  std::size_t trivial = 0;
  for (std::size_t k = 0; k < table.irreps.size(); ++k)
    if (is_trivial_row(table.irreps[k])) trivial = k;
  return PointGroup(std::make_shared<const CharacterTable>(std::move(table)), trivial);
}

std::size_t PointGroup::irrep_index(std::string_view label) const {
  std::string norm = normalize_label(label);
  const auto& irs = table_->irreps;
  for (std::size_t k = 0; k < irs.size(); ++k)
    if (irs[k].label == norm) return k;
  std::string valid;
  for (const auto& ir : irs) valid += (valid.empty() ? "" : ", ") + ir.label;
  throw UnknownIrrep("unknown irrep '" + std::string(label) + "' in " + table_->name +
                     " (valid: " + valid + ")");
}

bool PointGroup::has_irrep(std::string_view label) const {
  std::string norm = normalize_label(label);
  return std::any_of(table_->irreps.begin(), table_->irreps.end(),
                     [&](const Irrep& ir) { return ir.label == norm; });
}

std::vector<std::string> PointGroup::irrep_labels() const {
  std::vector<std::string> out;
  for (const auto& ir : table_->irreps) out.push_back(ir.label);
  return out;
}

std::string_view builtin_table_text(std::string_view name) {
  if (name == "C3v") return detail::embedded_table_c3v();
  if (name == "C1h") return detail::embedded_table_c1h();
  if (name == "C3v_double") return detail::embedded_table_c3v_double();
  throw UnknownGroup("unknown group '" + std::string(name) +
                     "' (built-in: C3v, C1h, C3v_double)");
}

std::vector<std::string> builtin_group_names() { return {"C3v", "C1h", "C3v_double"}; }

PointGroup builtin_group(std::string_view name) {
  static const PointGroup c3v = load_group(builtin_table_text("C3v"));
  static const PointGroup c1h = load_group(builtin_table_text("C1h"));
  static const PointGroup c3v_double = load_group(builtin_table_text("C3v_double"));
  if (name == "C3v") return c3v;
  if (name == "C1h") return c1h;
  if (name == "C3v_double") return c3v_double;
  throw UnknownGroup("unknown group '" + std::string(name) +
                     "' (built-in: C3v, C1h, C3v_double)");
}

CharacterTable parse_table(std::string_view text) {
  CharacterTable t;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  bool have_name = false, have_order = false;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "name") {
      if (!(ls >> t.name)) throw ParseError("missing group name", lineno);
      have_name = true;
    } else if (key == "order") {
      if (!(ls >> t.order)) throw ParseError("missing or malformed order", lineno);
      have_order = true;
    } else if (key == "class") {
      ConjugacyClass c;
      if (!(ls >> c.label >> c.size)) throw ParseError("expected 'class <label> <size>'", lineno);
      t.classes.push_back(std::move(c));
    } else if (key == "irrep") {
      Irrep ir;
      std::string kind;
      if (!(ls >> ir.label >> kind))
        throw ParseError("expected 'irrep <label> single|extra <characters...>'", lineno);
      ir.label = normalize_label(ir.label);
      if (kind == "single") {
        ir.kind = IrrepKind::Single;
      } else if (kind == "extra") {
        ir.kind = IrrepKind::Extra;
      } else {
        throw ParseError("irrep kind must be 'single' or 'extra', got '" + kind + "'", lineno);
      }
      std::string tok;
      while (ls >> tok) {
        try {
          ir.characters.push_back(Scalar::parse(tok));
        } catch (const ParseError& e) {
          throw ParseError(e.what(), lineno);
        }
      }
      t.irreps.push_back(std::move(ir));
    } else {
      throw ParseError("unknown key '" + key + "'", lineno);
    }
  }
  if (!have_name) throw ParseError("missing 'name'", 0);
  if (!have_order) throw ParseError("missing 'order'", 0);
  return t;
}

std::string format_table(const CharacterTable& t) {
  std::ostringstream out;
  out << "name " << t.name << "\norder " << t.order << "\n";
  for (const auto& c : t.classes) out << "class " << c.label << " " << c.size << "\n";
  for (const auto& ir : t.irreps) {
    out << "irrep " << ir.label << (ir.kind == IrrepKind::Single ? " single" : " extra");
    for (const auto& ch : ir.characters) out << " " << ch;
    out << "\n";
  }
  return out.str();
}

PointGroup load_group(std::string_view text) { return PointGroup::from_table(parse_table(text)); }

RepVector::RepVector(PointGroup group, std::vector<Scalar> characters)
    : group_(std::move(group)), chars_(std::move(characters)) {
  if (chars_.size() != group_.class_count())
    throw InvalidArgument("character vector has " + std::to_string(chars_.size()) +
                          " entries; " + group_.name() + " has " +
                          std::to_string(group_.class_count()) + " classes");
}

RepVector RepVector::irrep(const PointGroup& group, std::string_view label) {
  return RepVector(group, group.irrep(group.irrep_index(label)).characters);
}

RepVector RepVector::trivial(const PointGroup& group) {
  return RepVector(group, group.irrep(group.trivial_index()).characters);
}

Multiplicities::Multiplicities(PointGroup group, std::vector<int> counts)
    : group_(std::move(group)), counts_(std::move(counts)) {
  if (counts_.size() != group_.irrep_count())
    throw InvalidArgument("multiplicity vector length does not match irrep count");
}

int Multiplicities::count(std::string_view label) const {
  return counts_[group_.irrep_index(label)];
}

int Multiplicities::total_dimension() const {
  int d = 0;
  for (std::size_t k = 0; k < counts_.size(); ++k) d += counts_[k] * group_.irrep(k).dimension();
  return d;
}

RepVector Multiplicities::reconstruct() const {
  std::vector<Scalar> chars(group_.class_count());
  for (std::size_t k = 0; k < counts_.size(); ++k)
    for (std::size_t c = 0; c < chars.size(); ++c)
      chars[c] += Scalar(counts_[k]) * group_.irrep(k).characters[c];
  return RepVector(group_, std::move(chars));
}

std::string Multiplicities::to_string(std::string_view separator) const {
  std::string out;
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    if (counts_[k] == 0) continue;
    if (!out.empty()) out += separator;
    if (counts_[k] > 1) out += std::to_string(counts_[k]);
    out += group_.irrep(k).label;
  }
  return out.empty() ? "0" : out;
}

namespace {

void require_same_group(const RepVector& a, const RepVector& b) {
  if (!(a.group() == b.group()))
    throw GroupMismatch("representations belong to different groups (" + a.group().name() +
                        " vs " + b.group().name() + ")");
}

Scalar inner_with_irrep(const RepVector& rep, std::size_t k) {
  const auto& g = rep.group();
  Scalar s;
  for (std::size_t c = 0; c < g.class_count(); ++c)
    s += Scalar(g.table().classes[c].size) * rep.characters()[c] *
         g.irrep(k).characters[c].conj();
  return s / Scalar(g.order());
}

}  // namespace

RepVector tensor_product(const RepVector& a, const RepVector& b) {
  require_same_group(a, b);
  std::vector<Scalar> out(a.characters().size());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = a.characters()[c] * b.characters()[c];
  return RepVector(a.group(), std::move(out));
}

RepVector direct_sum(const RepVector& a, const RepVector& b) {
  require_same_group(a, b);
  std::vector<Scalar> out(a.characters().size());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = a.characters()[c] + b.characters()[c];
  return RepVector(a.group(), std::move(out));
}

RepVector conjugate(const RepVector& rep) {
  std::vector<Scalar> out;
  out.reserve(rep.characters().size());
  for (const auto& s : rep.characters()) out.push_back(s.conj());
  return RepVector(rep.group(), std::move(out));
}

Multiplicities decompose(const RepVector& rep) {
  const auto& g = rep.group();
  std::vector<int> counts(g.irrep_count());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    Scalar m = inner_with_irrep(rep, k);
    if (!m.is_integer() || m.re() < Rational(0))
      throw InvalidRepresentation("multiplicity of " + g.irrep(k).label + " is " + m.to_string() +
                                  "; not a character of " + g.name());
    counts[k] = static_cast<int>(m.re().numerator());
  }
  return Multiplicities(g, std::move(counts));
}

Scalar trivial_multiplicity(const RepVector& rep) {
  return inner_with_irrep(rep, rep.group().trivial_index());
}

bool contains_trivial(const RepVector& rep) {
  return decompose(rep).counts()[rep.group().trivial_index()] >= 1;
}

RepVector product_of(const PointGroup& group, const std::vector<std::string>& labels) {
  if (labels.empty()) return RepVector::trivial(group);
  RepVector acc = RepVector::irrep(group, labels.front());
  for (std::size_t k = 1; k < labels.size(); ++k)
    acc = tensor_product(acc, RepVector::irrep(group, labels[k]));
  return acc;
}

std::string matching_irrep(const RepVector& rep) {
  const auto& g = rep.group();
  for (std::size_t k = 0; k < g.irrep_count(); ++k)
    if (g.irrep(k).characters == rep.characters()) return g.irrep(k).label;
  return {};
}

std::string normalize_label(std::string_view label) {
  static const std::pair<std::string_view, std::string_view> kMap[] = {
      {"′", "'"},  {"″", "''"}, {"₀", "0"}, {"₁", "1"}, {"₂", "2"},
      {"₃", "3"},  {"¹", "1"},  {"²", "2"}, {"³", "3"}, {"⁄", "/"},
  };
  std::string out;
  std::size_t i = 0;
  while (i < label.size()) {
    bool matched = false;
    for (const auto& [from, to] : kMap) {
      if (label.substr(i, from.size()) == from) {
        out += to;
        i += from.size();
        matched = true;
        break;
      }
    }
    if (!matched) out += label[i++];
  }
  return out;
}

}  // namespace polsel
