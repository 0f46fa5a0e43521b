#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <tuple>

#include "safeplan/knowledge.hpp"

// Satisfiability by a tableau: the formula is put in negation normal form,
// each state is the set of obligations for the next position, and every
// Until contributes one acceptance set (transitions that do not postpone it).
// A satisfying trace exists iff some reachable SCC with an internal edge
// carries all acceptance sets.

namespace safeplan {

namespace {

enum class Op : unsigned char { True, False, Lit, And, Or, Next, Until, Release };

struct Node {
  Op op;
  int a = -1;  // atom index for Lit, else first operand
  int b = -1;  // polarity for Lit, else second operand
};

class Nnf {
 public:
  int convert(const Formula& f, bool neg) {
    switch (f.op()) {
      case LtlOp::True: return node({neg ? Op::False : Op::True});
      case LtlOp::False: return node({neg ? Op::True : Op::False});
      case LtlOp::Atom: return node({Op::Lit, atom(f.atom()), neg ? 0 : 1});
      case LtlOp::Not: return convert(f.child(), !neg);
      case LtlOp::And:
      case LtlOp::Or: {
        const bool conj = (f.op() == LtlOp::And) != neg;
        int acc = convert(f.child(0), neg);
        for (std::size_t i = 1; i < f.children().size(); ++i)
          acc = node({conj ? Op::And : Op::Or, acc, convert(f.child(i), neg)});
        return acc;
      }
      case LtlOp::Next: return node({Op::Next, convert(f.child(), neg)});
      case LtlOp::Globally:
        return neg ? node({Op::Until, node({Op::True}), convert(f.child(), true)})
                   : node({Op::Release, node({Op::False}), convert(f.child(), false)});
      case LtlOp::Finally:
        return neg ? node({Op::Release, node({Op::False}), convert(f.child(), true)})
                   : node({Op::Until, node({Op::True}), convert(f.child(), false)});
      case LtlOp::Until:
        return node({neg ? Op::Release : Op::Until, convert(f.child(0), neg), convert(f.child(1), neg)});
    }
    return node({Op::True});
  }

  const Node& operator[](int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  std::size_t atom_count() const { return atoms_.size(); }
  // Dense index per Until node, -1 otherwise.
  std::vector<int> until_index(std::size_t& count) const {
    std::vector<int> out(nodes_.size(), -1);
    count = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].op == Op::Until) out[i] = static_cast<int>(count++);
    return out;
  }

 private:
  int atom(const Atom& a) { return atoms_.try_emplace(a, static_cast<int>(atoms_.size())).first->second; }
  int node(Node n) {
    const auto key = std::make_tuple(n.op, n.a, n.b);
    const auto [it, fresh] = ids_.try_emplace(key, static_cast<int>(nodes_.size()));
    if (fresh) nodes_.push_back(n);
    return it->second;
  }

  std::vector<Node> nodes_;
  std::map<std::tuple<Op, int, int>, int> ids_;
  std::map<Atom, int> atoms_;
};

using Obligations = std::vector<int>;  // sorted formula ids

struct Cover {
  Obligations next;
  std::vector<bool> postponed;  // by Until index
  auto operator<=>(const Cover&) const = default;
};

class Tableau {
 public:
  explicit Tableau(const Nnf& nnf) : nnf_(nnf), until_(nnf.until_index(untils_)) {}

  std::set<Cover> expand(const Obligations& state) const {
    std::set<Cover> out;
    Branch start;
    start.todo = state;
    start.lits.assign(nnf_.atom_count(), -1);
    start.postponed.assign(untils_, false);
    run(std::move(start), out);
    return out;
  }

  std::size_t untils() const { return untils_; }

 private:
  struct Branch {
    std::vector<int> todo;
    std::set<int> seen;
    std::vector<int> lits;  // -1 free, else required polarity
    std::set<int> next;
    std::vector<bool> postponed;
  };

  void run(Branch br, std::set<Cover>& out) const {
    while (!br.todo.empty()) {
      const int f = br.todo.back();
      br.todo.pop_back();
      if (!br.seen.insert(f).second) continue;
      const Node& n = nnf_[f];
      switch (n.op) {
        case Op::True: break;
        case Op::False: return;
        case Op::Lit: {
          int& slot = br.lits[static_cast<std::size_t>(n.a)];
          if (slot >= 0 && slot != n.b) return;
          slot = n.b;
          break;
        }
        case Op::And:
          br.todo.push_back(n.a);
          br.todo.push_back(n.b);
          break;
        case Op::Or: {
          Branch other = br;
          other.todo.push_back(n.b);
          run(std::move(other), out);
          br.todo.push_back(n.a);
          break;
        }
        case Op::Next: br.next.insert(n.a); break;
        case Op::Until: {
          Branch now = br;
          now.todo.push_back(n.b);
          run(std::move(now), out);
          br.todo.push_back(n.a);
          br.next.insert(f);
          br.postponed[static_cast<std::size_t>(until_[static_cast<std::size_t>(f)])] = true;
          break;
        }
        case Op::Release: {
          Branch now = br;
          now.todo.push_back(n.a);
          now.todo.push_back(n.b);
          run(std::move(now), out);
          br.todo.push_back(n.b);
          br.next.insert(f);
          break;
        }
      }
    }
    out.insert({Obligations(br.next.begin(), br.next.end()), std::move(br.postponed)});
  }

  const Nnf& nnf_;
  std::size_t untils_ = 0;
  std::vector<int> until_;
};

}  // namespace

bool satisfiable(const Formula& f) {
  if (f.is_true()) return true;
  if (f.is_false()) return false;
  Nnf nnf;
  const int root = nnf.convert(f, false);
  const Tableau tab(nnf);

  struct Edge {
    std::size_t to;
    std::vector<bool> postponed;
  };
  std::map<Obligations, std::size_t> index;
  std::vector<std::vector<Edge>> edges;
  std::vector<Obligations> states;
  auto intern = [&](const Obligations& s) {
    const auto [it, fresh] = index.try_emplace(s, states.size());
    if (fresh) {
      states.push_back(s);
      edges.emplace_back();
    }
    return it->second;
  };
  intern({root});
  for (std::size_t q = 0; q < states.size(); ++q) {
    for (const Cover& c : tab.expand(states[q])) {
      const std::size_t to = intern(c.next);
      edges[q].push_back({to, c.postponed});
    }
  }

  // Tarjan, then check each SCC's internal edges for every acceptance set.
  const std::size_t n = states.size();
  std::vector<int> comp(n, -1), order(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  int next_order = 0, next_comp = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    order[v] = low[v] = next_order++;
    stack.push_back(v);
    on_stack[v] = true;
    for (const auto& e : edges[v]) {
      if (order[e.to] < 0) {
        visit(e.to);
        low[v] = std::min(low[v], low[e.to]);
      } else if (on_stack[e.to]) {
        low[v] = std::min(low[v], order[e.to]);
      }
    }
    if (low[v] == order[v]) {
      for (;;) {
        const std::size_t w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = next_comp;
        if (w == v) break;
      }
      ++next_comp;
    }
  };
  visit(0);

  std::vector<bool> internal(static_cast<std::size_t>(next_comp), false);
  std::vector<std::vector<bool>> seen(static_cast<std::size_t>(next_comp), std::vector<bool>(tab.untils(), false));
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& e : edges[v]) {
      if (comp[v] != comp[e.to]) continue;
      const auto c = static_cast<std::size_t>(comp[v]);
      internal[c] = true;
      for (std::size_t u = 0; u < tab.untils(); ++u)
        if (!e.postponed[u]) seen[c][u] = true;
    }
  }
  for (std::size_t c = 0; c < internal.size(); ++c) {
    if (internal[c] && std::all_of(seen[c].begin(), seen[c].end(), [](bool b) { return b; })) return true;
  }
  return false;
}

}  // namespace safeplan
