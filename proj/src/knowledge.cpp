#include "safeplan/knowledge.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "safeplan/automaton.hpp"
#include "safeplan/error.hpp"

namespace safeplan {

std::string_view to_string(AddOutcome o) {
  switch (o) {
    case AddOutcome::AddedNew: return "added_new";
    case AddOutcome::MergedDuplicate: return "merged_duplicate";
    case AddOutcome::Conflict: return "conflict";
  }
  return "";
}

bool is_conflicting(std::span<const Formula> fs) {
  const Formula phi = conjoin(fs);
  if (phi.is_constant()) return phi.is_false();
  const auto alphabet = atoms_of(phi);
  if (alphabet.size() > kMaxAlphabetAtoms) throw AlphabetTooLarge(alphabet.size(), kMaxAlphabetAtoms);
  return !satisfiable(phi);
}

// ---------------------------------------------------------------------------

namespace {

std::set<Atom> atom_set(const Formula& f) {
  const auto v = atoms_of(f);
  return {v.begin(), v.end()};
}

bool shares_atoms(const std::set<Atom>& a, const std::set<Atom>& b) {
  return std::any_of(a.begin(), a.end(), [&](const Atom& x) { return b.contains(x); });
}

}  // namespace

void ConstraintStore::append(StoreEntry e) {
  e.added_at = entries_.size() + 1;
  if (e.status == StoreEntry::Status::Representative) ++unique_;
  if (e.status == StoreEntry::Status::Quarantined) ++conflicts_;
  entries_.push_back(std::move(e));
}

AddOutcome ConstraintStore::add(const Formula& raw, std::string source) {
  const Formula f = simplify(raw);
  const auto reps = representatives();
  for (const auto& r : reps) {
    if (prefix_equivalent(f, r)) {
      append({f, std::move(source), 0, StoreEntry::Status::Duplicate, false});
      return AddOutcome::MergedDuplicate;
    }
  }

  // Representatives over atoms disjoint from f's cannot interact with it, and
  // are jointly satisfiable already; only f's atom-sharing component matters.
  std::vector<Formula> group{f};
  std::set<Atom> atoms = atom_set(f);
  std::vector<bool> taken(reps.size(), false);
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      if (taken[i]) continue;
      const auto ra = atom_set(reps[i]);
      if (!shares_atoms(ra, atoms)) continue;
      taken[i] = grew = true;
      group.push_back(reps[i]);
      atoms.insert(ra.begin(), ra.end());
    }
  }
  if (atoms.size() > kMaxAlphabetAtoms) throw AlphabetTooLarge(atoms.size(), kMaxAlphabetAtoms);
  if (is_conflicting(group)) {
    append({f, std::move(source), 0, StoreEntry::Status::Quarantined, false});
    return AddOutcome::Conflict;
  }
  append({f, std::move(source), 0, StoreEntry::Status::Representative, false});
  return AddOutcome::AddedNew;
}

void ConstraintStore::force(const Formula& f, std::string source) {
  append({simplify(f), std::move(source), 0, StoreEntry::Status::Representative, true});
}

std::vector<Formula> ConstraintStore::representatives() const {
  std::vector<Formula> out;
  for (const auto& e : entries_) {
    if (e.status == StoreEntry::Status::Representative) out.push_back(e.formula);
  }
  return out;
}

Formula ConstraintStore::active() const { return conjoin(representatives()); }

// Layout:
//   # safeplan constraint store
//   # total=N unique=N conflicts=N
//   # added=1 source=...
//   G !p
//   #= added=2 source=...
//   #= G !p
//   #! added=3 source=...
//   #! G p
std::string ConstraintStore::serialize() const {
  std::ostringstream out;
  out << "# safeplan constraint store\n";
  out << "# total=" << total() << " unique=" << unique() << " conflicts=" << conflicts_detected() << "\n";
  for (const auto& e : entries_) {
    std::string mark = "#";
    std::string body_prefix;
    if (e.status == StoreEntry::Status::Duplicate) mark = body_prefix = "#=";
    if (e.status == StoreEntry::Status::Quarantined) mark = body_prefix = "#!";
    if (!body_prefix.empty()) body_prefix += " ";
    out << mark << " added=" << e.added_at << (e.forced ? " forced" : "") << " source=" << e.source << "\n";
    out << body_prefix << e.formula.to_string() << "\n";
  }
  return out.str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    lines.push_back(text.substr(0, nl));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

}  // namespace

ConstraintStore ConstraintStore::deserialize(std::string_view text) {
  ConstraintStore store;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    auto status = StoreEntry::Status::Representative;
    std::string_view meta;
    if (line.starts_with("#=") || line.starts_with("#!")) {
      status = line[1] == '=' ? StoreEntry::Status::Duplicate : StoreEntry::Status::Quarantined;
      meta = trim(line.substr(2));
    } else if (line.starts_with("#")) {
      meta = trim(line.substr(1));
      if (!meta.starts_with("added=")) continue;  // header or free comment
    } else {
      // A bare formula without metadata, as in a hand-written file.
      store.append({parse_ltl(line), {}, 0, status, false});
      continue;
    }
    StoreEntry e;
    e.status = status;
    const auto src = meta.find("source=");
    if (src != std::string_view::npos) e.source = std::string(meta.substr(src + 7));
    e.forced = meta.substr(0, src).find("forced") != std::string_view::npos;
    if (i + 1 >= lines.size()) throw Error("constraint store: metadata line without a formula");
    std::string_view body = trim(lines[++i]);
    if (status != StoreEntry::Status::Representative) {
      const std::string_view mark = status == StoreEntry::Status::Duplicate ? "#=" : "#!";
      if (!body.starts_with(mark)) throw Error("constraint store: expected '" + std::string(mark) + "' formula line");
      body = trim(body.substr(2));
    }
    e.formula = parse_ltl(body);
    store.append(std::move(e));
  }
  return store;
}

std::vector<std::string> formula_lines(std::string_view text) {
  std::vector<std::string> out;
  for (auto line : split_lines(text)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    out.emplace_back(line);
  }
  return out;
}

}  // namespace safeplan
