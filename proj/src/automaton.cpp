#include "safeplan/automaton.hpp"

#include <algorithm>
#include <deque>
#include <string>
#include <unordered_map>
#include <utility>

#include "safeplan/error.hpp"

namespace safeplan {

std::optional<std::size_t> ResidualAutomaton::find(const Formula& f) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] == f) return i;
  }
  return std::nullopt;
}

AtomSet ResidualAutomaton::letter(std::uint32_t mask) const {
  AtomSet s;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (mask & (1u << i)) s.insert(alphabet[i]);
  }
  return s;
}

namespace {

constexpr std::size_t kMaxStates = 1u << 16;
constexpr std::size_t kMaxCubes = 512;

// A conjunction of temporal literals (atoms and X/G/F/U nodes), sorted.
using Cube = std::vector<std::pair<Formula, bool>>;
using Dnf = std::vector<Cube>;

// Drops contradictory cubes and any cube that contains another one.
void absorb(Dnf& d) {
  std::sort(d.begin(), d.end(), [](const Cube& a, const Cube& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
  d.erase(std::unique(d.begin(), d.end()), d.end());
  Dnf kept;
  for (auto& c : d) {
    const bool subsumed = std::any_of(kept.begin(), kept.end(), [&](const Cube& k) {
      return std::includes(c.begin(), c.end(), k.begin(), k.end());
    });
    if (!subsumed) kept.push_back(std::move(c));
  }
  d = std::move(kept);
}

std::optional<Cube> merge(const Cube& a, const Cube& b) {
  Cube out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].first == out[i - 1].first) return std::nullopt;
  }
  return out;
}

std::optional<Dnf> to_dnf(const Formula& f, bool neg) {
  switch (f.op()) {
    case LtlOp::True: return neg ? Dnf{} : Dnf{Cube{}};
    case LtlOp::False: return neg ? Dnf{Cube{}} : Dnf{};
    case LtlOp::Not: return to_dnf(f.child(), !neg);
    case LtlOp::And:
    case LtlOp::Or: {
      if ((f.op() == LtlOp::Or) != neg) {
        Dnf out;
        for (const auto& c : f.children()) {
          auto d = to_dnf(c, neg);
          if (!d) return std::nullopt;
          out.insert(out.end(), d->begin(), d->end());
        }
        absorb(out);
        return out;
      }
      Dnf out{Cube{}};
      for (const auto& c : f.children()) {
        auto d = to_dnf(c, neg);
        if (!d) return std::nullopt;
        Dnf next;
        for (const auto& x : out)
          for (const auto& y : *d)
            if (auto m = merge(x, y)) next.push_back(std::move(*m));
        if (next.size() > kMaxCubes) return std::nullopt;
        absorb(next);
        out = std::move(next);
      }
      return out;
    }
    default: return Dnf{Cube{{f, !neg}}};
  }
}

// Progression never distributes or absorbs, so residuals such as
// `F a | (F b & (F a | ...))` keep growing. States are kept in absorbed DNF
// over their temporal literals, of which there are finitely many.
Formula normal_form(const Formula& f) {
  if (f.is_constant()) return f;
  const auto d = to_dnf(f, false);
  if (!d) return f;
  std::vector<Formula> disjuncts;
  for (const auto& cube : *d) {
    std::vector<Formula> lits;
    for (const auto& [g, pos] : cube) lits.push_back(pos ? g : Formula::make_not(g));
    disjuncts.push_back(lits.empty() ? Formula::truth() : lits.size() == 1 ? lits[0] : Formula::make_and(std::move(lits)));
  }
  if (disjuncts.empty()) return Formula::falsity();
  return simplify(disjuncts.size() == 1 ? disjuncts[0] : Formula::make_or(std::move(disjuncts)));
}

}  // namespace

ResidualAutomaton residual_automaton(const Formula& f, std::span<const Atom> alphabet) {
  if (alphabet.size() > kMaxAlphabetAtoms) throw AlphabetTooLarge(alphabet.size(), kMaxAlphabetAtoms);
  ResidualAutomaton aut;
  aut.alphabet.assign(alphabet.begin(), alphabet.end());
  const std::size_t letters = aut.letter_count();
  std::vector<AtomSet> letter_sets;
  letter_sets.reserve(letters);
  for (std::uint32_t m = 0; m < letters; ++m) letter_sets.push_back(aut.letter(m));

  std::unordered_map<Formula, std::uint32_t, FormulaHash> index;
  auto intern = [&](const Formula& g) {
    auto [it, fresh] = index.emplace(g, static_cast<std::uint32_t>(aut.states.size()));
    if (fresh) {
      if (aut.states.size() >= kMaxStates)
        throw Error("residual automaton exceeds " + std::to_string(kMaxStates) + " states");
      aut.states.push_back(g);
    }
    return it->second;
  };
  intern(simplify(f));
  for (std::size_t q = 0; q < aut.states.size(); ++q) {
    std::vector<std::uint32_t> row(letters);
    const Formula current = aut.states[q];
    for (std::uint32_t m = 0; m < letters; ++m) {
      row[m] = current.is_constant() ? static_cast<std::uint32_t>(q) : intern(normal_form(progress(current, letter_sets[m])));
    }
    aut.transitions.push_back(std::move(row));
  }
  return aut;
}

namespace {

// Product of two residual automata over a shared alphabet, explored from the
// pair of initial states. Calls visit(left, right) on every reachable pair;
// stops early when visit returns false.
template <typename Visit>
bool explore_product(const ResidualAutomaton& a, const ResidualAutomaton& b, Visit visit) {
  const std::size_t letters = a.letter_count();
  std::vector<std::vector<bool>> seen(a.size(), std::vector<bool>(b.size(), false));
  std::deque<std::pair<std::uint32_t, std::uint32_t>> queue{{0, 0}};
  seen[0][0] = true;
  while (!queue.empty()) {
    auto [l, r] = queue.front();
    queue.pop_front();
    if (!visit(a.states[l], b.states[r])) return false;
    for (std::uint32_t m = 0; m < letters; ++m) {
      const auto nl = a.transitions[l][m];
      const auto nr = b.transitions[r][m];
      if (!seen[nl][nr]) {
        seen[nl][nr] = true;
        queue.emplace_back(nl, nr);
      }
    }
  }
  return true;
}

std::pair<ResidualAutomaton, ResidualAutomaton> joint_automata(const Formula& a, const Formula& b) {
  const Formula both[] = {a, b};
  const auto alphabet = atoms_of(both);
  if (alphabet.size() > kMaxAlphabetAtoms) throw AlphabetTooLarge(alphabet.size(), kMaxAlphabetAtoms);
  return {residual_automaton(a, alphabet), residual_automaton(b, alphabet)};
}

}  // namespace

bool prefix_equivalent(const Formula& a, const Formula& b) {
  const Formula ca = simplify(a);
  const Formula cb = simplify(b);
  if (ca == cb) return true;
  auto [left, right] = joint_automata(ca, cb);
  return explore_product(left, right, [](const Formula& l, const Formula& r) {
    return l.is_false() == r.is_false() && l.is_true() == r.is_true();
  });
}

double semantic_similarity(const Formula& a, const Formula& b, int depth) {
  if (depth < 1) throw Error("semantic_similarity: depth must be at least 1");
  auto [left, right] = joint_automata(simplify(a), simplify(b));
  const std::size_t letters = left.letter_count();
  const std::size_t nb = right.size();
  auto key = [nb](std::size_t l, std::size_t r) { return l * nb + r; };

  // counts[(l, r)] = number of traces of the current length ending in (l, r)
  std::vector<double> counts(left.size() * nb, 0.0);
  counts[key(0, 0)] = 1.0;
  double both = 0.0;
  double either = 0.0;
  for (int len = 1; len <= depth; ++len) {
    std::vector<double> next(counts.size(), 0.0);
    for (std::size_t l = 0; l < left.size(); ++l) {
      for (std::size_t r = 0; r < nb; ++r) {
        const double c = counts[key(l, r)];
        if (c == 0.0) continue;
        for (std::uint32_t m = 0; m < letters; ++m) {
          next[key(left.transitions[l][m], right.transitions[r][m])] += c;
        }
      }
    }
    counts = std::move(next);
    for (std::size_t l = 0; l < left.size(); ++l) {
      for (std::size_t r = 0; r < nb; ++r) {
        const double c = counts[key(l, r)];
        const bool bad_l = left.states[l].is_false();
        const bool bad_r = right.states[r].is_false();
        if (bad_l && bad_r) both += c;
        if (bad_l || bad_r) either += c;
      }
    }
  }
  return either == 0.0 ? 1.0 : both / either;
}

}  // namespace safeplan
