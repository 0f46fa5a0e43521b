#include "safeplan/ltl.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "safeplan/error.hpp"

namespace safeplan {

// ---------------------------------------------------------------------------
// Construction and structural order

Formula Formula::build(LtlOp op, Atom atom, std::vector<Formula> children) {
  std::size_t h = std::hash<unsigned>{}(static_cast<unsigned>(op)) * 0x100000001b3ULL;
  std::size_t size = 1;
  if (op == LtlOp::Atom) h = hash_combine(h, atom.hash());
  for (const auto& c : children) {
    h = hash_combine(h, c.hash());
    size += c.size();
  }
  return Formula(std::make_shared<const Node>(Node{op, std::move(atom), std::move(children), h, size}));
}

Formula Formula::truth() {
  static const Formula t = build(LtlOp::True, {}, {});
  return t;
}

Formula Formula::falsity() {
  static const Formula f = build(LtlOp::False, {}, {});
  return f;
}

Formula::Formula() : Formula(truth()) {}

Formula Formula::make_atom(Atom atom) { return build(LtlOp::Atom, std::move(atom), {}); }
Formula Formula::make_not(Formula f) { return build(LtlOp::Not, {}, {std::move(f)}); }
Formula Formula::make_and(std::vector<Formula> children) { return build(LtlOp::And, {}, std::move(children)); }
Formula Formula::make_or(std::vector<Formula> children) { return build(LtlOp::Or, {}, std::move(children)); }
Formula Formula::make_next(Formula f) { return build(LtlOp::Next, {}, {std::move(f)}); }
Formula Formula::make_globally(Formula f) { return build(LtlOp::Globally, {}, {std::move(f)}); }
Formula Formula::make_finally(Formula f) { return build(LtlOp::Finally, {}, {std::move(f)}); }
Formula Formula::make_until(Formula lhs, Formula rhs) {
  return build(LtlOp::Until, {}, {std::move(lhs), std::move(rhs)});
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.op() != b.op() || a.size() != b.size()) return false;
  if (a.op() == LtlOp::Atom) return a.atom() == b.atom();
  auto ca = a.children();
  auto cb = b.children();
  return std::equal(ca.begin(), ca.end(), cb.begin(), cb.end());
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.op() <=> b.op(); c != 0) return c;
  if (a.op() == LtlOp::Atom) return a.atom() <=> b.atom();
  auto ca = a.children();
  auto cb = b.children();
  return std::lexicographical_compare_three_way(ca.begin(), ca.end(), cb.begin(), cb.end());
}

// ---------------------------------------------------------------------------
// Canonicalizing constructors. Arguments must already be canonical.

namespace {

Formula canon_not(const Formula& f) {
  switch (f.op()) {
    case LtlOp::True: return Formula::falsity();
    case LtlOp::False: return Formula::truth();
    case LtlOp::Not: return f.child();
    default: return Formula::make_not(f);
  }
}

Formula canon_nary(LtlOp op, std::span<const Formula> kids) {
  const bool is_and = op == LtlOp::And;
  std::vector<Formula> flat;
  flat.reserve(kids.size());
  for (const auto& k : kids) {
    if (k.is_constant()) {
      // absorbing element short-circuits, unit element disappears
      if (k.is_false() == is_and) return k;
      continue;
    }
    if (k.op() == op) {
      flat.insert(flat.end(), k.children().begin(), k.children().end());
    } else {
      flat.push_back(k);
    }
  }
  if (!std::is_sorted(flat.begin(), flat.end())) std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.empty()) return Formula::constant(is_and);
  if (flat.size() == 1) return flat.front();
  return is_and ? Formula::make_and(std::move(flat)) : Formula::make_or(std::move(flat));
}

Formula canon_and(std::span<const Formula> kids) { return canon_nary(LtlOp::And, kids); }
Formula canon_or(std::span<const Formula> kids) { return canon_nary(LtlOp::Or, kids); }

Formula canon_unary(LtlOp op, const Formula& f) {
  if (f.is_constant()) return f;
  switch (op) {
    case LtlOp::Next: return Formula::make_next(f);
    case LtlOp::Globally: return Formula::make_globally(f);
    default: return Formula::make_finally(f);
  }
}

Formula canon_until(const Formula& lhs, const Formula& rhs) {
  if (rhs.is_constant()) return rhs;
  if (lhs.is_false()) return rhs;
  return Formula::make_until(lhs, rhs);
}

}  // namespace

Formula simplify(const Formula& f) {
  switch (f.op()) {
    case LtlOp::True:
    case LtlOp::False:
    case LtlOp::Atom:
      return f;
    case LtlOp::Not:
      return canon_not(simplify(f.child()));
    case LtlOp::And:
    case LtlOp::Or: {
      std::vector<Formula> kids;
      kids.reserve(f.children().size());
      for (const auto& c : f.children()) kids.push_back(simplify(c));
      return canon_nary(f.op(), kids);
    }
    case LtlOp::Next:
    case LtlOp::Globally:
    case LtlOp::Finally:
      return canon_unary(f.op(), simplify(f.child()));
    case LtlOp::Until:
      return canon_until(simplify(f.child(0)), simplify(f.child(1)));
  }
  return f;
}

Formula conjoin(std::span<const Formula> fs) {
  std::vector<Formula> kids;
  kids.reserve(fs.size());
  for (const auto& f : fs) kids.push_back(simplify(f));
  return canon_and(kids);
}

// ---------------------------------------------------------------------------
// Progression

namespace {

Formula progress_rec(const Formula& f, const AtomSet& s, std::size_t* visits) {
  if (visits) ++*visits;
  switch (f.op()) {
    case LtlOp::True:
    case LtlOp::False:
      return f;
    case LtlOp::Atom:
      return Formula::constant(s.contains(f.atom()));
    case LtlOp::Not:
      return canon_not(progress_rec(f.child(), s, visits));
    case LtlOp::And:
    case LtlOp::Or: {
      const bool is_and = f.op() == LtlOp::And;
      std::vector<Formula> kids;
      kids.reserve(f.children().size());
      bool unchanged = true;
      for (const auto& c : f.children()) {
        Formula r = progress_rec(c, s, visits);
        if (r.is_constant() && r.is_false() == is_and) return r;
        unchanged = unchanged && r.same_node(c);
        kids.push_back(std::move(r));
      }
      // Canonical children that all progressed to themselves leave the
      // node as is; reusing it keeps residual comparisons pointer-cheap.
      if (unchanged) return f;
      return canon_nary(f.op(), kids);
    }
    case LtlOp::Next:
      return f.child();
    case LtlOp::Globally: {
      Formula now = progress_rec(f.child(), s, visits);
      if (now.is_false()) return now;
      const Formula parts[] = {now, f};
      return canon_and(parts);
    }
    case LtlOp::Finally: {
      Formula now = progress_rec(f.child(), s, visits);
      if (now.is_true()) return now;
      const Formula parts[] = {now, f};
      return canon_or(parts);
    }
    case LtlOp::Until: {
      Formula r = progress_rec(f.child(1), s, visits);
      if (r.is_true()) return r;
      Formula l = progress_rec(f.child(0), s, visits);
      // Left side violated: only the right side can still discharge the
      // obligation now. With a propositional right side r is already ⊥.
      if (l.is_false()) return r;
      const Formula keep[] = {l, f};
      const Formula parts[] = {r, canon_and(keep)};
      return canon_or(parts);
    }
  }
  return f;
}

}  // namespace

Formula progress(const Formula& f, const AtomSet& state, std::size_t* visits) {
  return progress_rec(f, state, visits);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Binding strength used to decide where parentheses are required.
int level(const Formula& f) {
  switch (f.op()) {
    case LtlOp::Until: return 0;
    case LtlOp::Or: return 1;
    case LtlOp::And: return 2;
    default: return 3;
  }
}

void print(const Formula& f, int min_level, std::string& out) {
  const bool paren = level(f) < min_level;
  if (paren) out += '(';
  switch (f.op()) {
    case LtlOp::True: out += "true"; break;
    case LtlOp::False: out += "false"; break;
    case LtlOp::Atom: out += f.atom().to_string(); break;
    case LtlOp::Not:
      out += '!';
      print(f.child(), 3, out);
      break;
    case LtlOp::Next:
    case LtlOp::Globally:
    case LtlOp::Finally:
      out += f.op() == LtlOp::Next ? "X " : f.op() == LtlOp::Globally ? "G " : "F ";
      print(f.child(), 3, out);
      break;
    case LtlOp::And:
    case LtlOp::Or: {
      const bool is_and = f.op() == LtlOp::And;
      bool first = true;
      for (const auto& c : f.children()) {
        if (!first) out += is_and ? " & " : " | ";
        first = false;
        print(c, is_and ? 3 : 2, out);
      }
      break;
    }
    case LtlOp::Until:
      print(f.child(0), 1, out);
      out += " U ";
      print(f.child(1), 1, out);
      break;
  }
  if (paren) out += ')';
}

}  // namespace

std::string Formula::to_string() const {
  std::string out;
  print(*this, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { Ident, True, False, Not, And, Or, Implies, G, F, X, U, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

std::string describe(const Token& t) {
  return t.kind == Tok::End ? std::string("end of input") : "'" + t.text + "'";
}

class LtlParser {
 public:
  explicit LtlParser(std::string_view text) : text_(text) { lex(); }

  Formula parse() {
    Formula f = implication();
    expect_end();
    return f;
  }

 private:
  void lex() {
    std::size_t i = 0;
    auto starts = [&](std::string_view lit) { return text_.substr(i).starts_with(lit); };
    while (i < text_.size()) {
      const auto c = static_cast<unsigned char>(text_[i]);
      if (std::isspace(c)) {
        ++i;
        continue;
      }
      const std::size_t at = i;
      auto push = [&](Tok k, std::size_t len) {
        tokens_.push_back({k, std::string(text_.substr(at, len)), at});
        i += len;
      };
      if (c == '!') push(Tok::Not, 1);
      else if (c == '&') push(Tok::And, 1);
      else if (c == '|') push(Tok::Or, 1);
      else if (c == '(') push(Tok::LParen, 1);
      else if (c == ')') push(Tok::RParen, 1);
      else if (c == ',') push(Tok::Comma, 1);
      else if (starts("->")) push(Tok::Implies, 2);
      else if (starts("\xC2\xAC")) push(Tok::Not, 2);          // ¬
      else if (starts("\xE2\x88\xA7")) push(Tok::And, 3);      // ∧
      else if (starts("\xE2\x88\xA8")) push(Tok::Or, 3);       // ∨
      else if (starts("\xE2\x8A\xA4")) push(Tok::True, 3);     // ⊤
      else if (starts("\xE2\x8A\xA5")) push(Tok::False, 3);    // ⊥
      else if (starts("\xE2\x86\x92")) push(Tok::Implies, 3);  // →
      else if (std::isalpha(c) || c == '_') {
        std::size_t j = i + 1;
        while (j < text_.size()) {
          const auto d = static_cast<unsigned char>(text_[j]);
          if (d == '-' && j + 1 < text_.size() && text_[j + 1] == '>') break;
          if (!(std::isalnum(d) || d == '_' || d == '-')) break;
          ++j;
        }
        std::string_view word = text_.substr(i, j - i);
        Tok k = Tok::Ident;
        if (word == "true") k = Tok::True;
        else if (word == "false") k = Tok::False;
        else if (word == "G") k = Tok::G;
        else if (word == "F") k = Tok::F;
        else if (word == "X") k = Tok::X;
        else if (word == "U") k = Tok::U;
        push(k, j - i);
      } else {
        // Take the whole UTF-8 sequence for the error message.
        std::size_t len = 1;
        if (c >= 0xF0) len = 4;
        else if (c >= 0xE0) len = 3;
        else if (c >= 0xC0) len = 2;
        len = std::min(len, text_.size() - i);
        throw LtlSyntaxError(at, {"formula"}, "'" + std::string(text_.substr(at, len)) + "'");
      }
    }
    tokens_.push_back({Tok::End, "", text_.size()});
  }

  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }

  [[noreturn]] void fail(std::set<std::string> expected) const {
    throw LtlSyntaxError(peek().offset, std::move(expected), describe(peek()));
  }

  void expect_end() {
    if (peek().kind != Tok::End) fail({"&", "|", "U", "->", "end of input"});
  }

  Formula implication() {
    Formula lhs = until();
    if (peek().kind != Tok::Implies) return lhs;
    take();
    Formula rhs = implication();
    const Formula parts[] = {canon_not(lhs), rhs};
    return canon_or(parts);
  }

  Formula until() {
    std::vector<Formula> operands{disjunction()};
    while (peek().kind == Tok::U) {
      take();
      operands.push_back(disjunction());
    }
    Formula acc = operands.back();
    for (auto it = operands.rbegin() + 1; it != operands.rend(); ++it) acc = canon_until(*it, acc);
    return acc;
  }

  Formula disjunction() {
    std::vector<Formula> kids{conjunction()};
    while (peek().kind == Tok::Or) {
      take();
      kids.push_back(conjunction());
    }
    return kids.size() == 1 ? kids.front() : canon_or(kids);
  }

  Formula conjunction() {
    std::vector<Formula> kids{unary()};
    while (peek().kind == Tok::And) {
      take();
      kids.push_back(unary());
    }
    return kids.size() == 1 ? kids.front() : canon_and(kids);
  }

  Formula unary() {
    switch (peek().kind) {
      case Tok::Not: take(); return canon_not(unary());
      case Tok::G: take(); return canon_unary(LtlOp::Globally, unary());
      case Tok::F: take(); return canon_unary(LtlOp::Finally, unary());
      case Tok::X: take(); return canon_unary(LtlOp::Next, unary());
      case Tok::True: take(); return Formula::truth();
      case Tok::False: take(); return Formula::falsity();
      case Tok::Ident: return atom();
      case Tok::LParen: {
        take();
        Formula inner = implication();
        if (peek().kind != Tok::RParen) fail({")", "&", "|", "U", "->"});
        take();
        return inner;
      }
      default:
        fail({"!", "G", "F", "X", "(", "true", "false", "identifier"});
    }
  }

  Formula atom() {
    std::string pred = take().text;
    std::vector<std::string> args;
    if (peek().kind == Tok::LParen) {
      take();
      for (;;) {
        if (peek().kind != Tok::Ident) fail({"identifier"});
        args.push_back(take().text);
        if (peek().kind == Tok::Comma) {
          take();
          continue;
        }
        if (peek().kind == Tok::RParen) {
          take();
          break;
        }
        fail({",", ")"});
      }
    }
    return Formula::make_atom(Atom(std::move(pred), std::move(args)));
  }

  std::string_view text_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_ltl(std::string_view text) { return LtlParser(text).parse(); }

// ---------------------------------------------------------------------------
// Queries

namespace {

void collect_atoms(const Formula& f, std::set<Atom>& out) {
  if (f.op() == LtlOp::Atom) {
    out.insert(f.atom());
    return;
  }
  for (const auto& c : f.children()) collect_atoms(c, out);
}

}  // namespace

std::vector<Atom> atoms_of(const Formula& f) {
  std::set<Atom> out;
  collect_atoms(f, out);
  return {out.begin(), out.end()};
}

std::vector<Atom> atoms_of(std::span<const Formula> fs) {
  std::set<Atom> out;
  for (const auto& f : fs) collect_atoms(f, out);
  return {out.begin(), out.end()};
}

namespace {

// Satisfaction vector over the lasso positions; position n-1 loops back to
// `loop_start`.
std::vector<bool> sat(const Formula& f, std::span<const AtomSet* const> trace, std::size_t loop_start) {
  const std::size_t n = trace.size();
  auto succ = [&](std::size_t i) { return i + 1 < n ? i + 1 : loop_start; };
  std::vector<bool> out(n);
  switch (f.op()) {
    case LtlOp::True:
    case LtlOp::False:
      out.assign(n, f.is_true());
      break;
    case LtlOp::Atom:
      for (std::size_t i = 0; i < n; ++i) out[i] = trace[i]->contains(f.atom());
      break;
    case LtlOp::Not: {
      auto a = sat(f.child(), trace, loop_start);
      for (std::size_t i = 0; i < n; ++i) out[i] = !a[i];
      break;
    }
    case LtlOp::And:
    case LtlOp::Or: {
      const bool is_and = f.op() == LtlOp::And;
      out.assign(n, is_and);
      for (const auto& c : f.children()) {
        auto a = sat(c, trace, loop_start);
        for (std::size_t i = 0; i < n; ++i) out[i] = is_and ? (out[i] && a[i]) : (out[i] || a[i]);
      }
      break;
    }
    case LtlOp::Next: {
      auto a = sat(f.child(), trace, loop_start);
      for (std::size_t i = 0; i < n; ++i) out[i] = a[succ(i)];
      break;
    }
    case LtlOp::Globally: {
      // greatest fixpoint of  x = a & X x
      auto a = sat(f.child(), trace, loop_start);
      out = a;
      for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t k = n; k-- > 0;) {
          if (out[k] && !out[succ(k)]) {
            out[k] = false;
            changed = true;
          }
        }
      }
      break;
    }
    case LtlOp::Finally:
    case LtlOp::Until: {
      // least fixpoint of  x = b | (a & X x)
      const bool is_until = f.op() == LtlOp::Until;
      auto b = sat(is_until ? f.child(1) : f.child(), trace, loop_start);
      std::vector<bool> a = is_until ? sat(f.child(0), trace, loop_start) : std::vector<bool>(n, true);
      out = b;
      for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t k = n; k-- > 0;) {
          if (!out[k] && a[k] && out[succ(k)]) {
            out[k] = true;
            changed = true;
          }
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace

bool evaluate_lasso(const Formula& f, std::span<const AtomSet> prefix, std::span<const AtomSet> loop) {
  if (loop.empty()) throw Error("evaluate_lasso: loop must be nonempty");
  std::vector<const AtomSet*> trace;
  trace.reserve(prefix.size() + loop.size());
  for (const auto& s : prefix) trace.push_back(&s);
  for (const auto& s : loop) trace.push_back(&s);
  return sat(f, trace, prefix.size()).front();
}

}  // namespace safeplan
