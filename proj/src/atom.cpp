#include "safeplan/atom.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "safeplan/error.hpp"

namespace safeplan {

namespace {

std::size_t mix(std::size_t x) {
  // splitmix64 finalizer; spreads atom hashes before they are summed.
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Atom::Atom(std::string predicate, std::vector<std::string> args)
    : predicate_(std::move(predicate)), args_(std::move(args)) {
  std::hash<std::string> h;
  hash_ = h(predicate_);
  for (const auto& a : args_) hash_ = hash_combine(hash_, h(a));
}

std::string Atom::to_string() const {
  if (args_.empty()) return predicate_;
  std::string out = predicate_ + "(";
  for (std::size_t i = 0; i < args_.size(); ++i) {
    if (i) out += ", ";
    out += args_[i];
  }
  return out + ")";
}

std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
  if (auto c = a.predicate_ <=> b.predicate_; c != 0) return c;
  return a.args_ <=> b.args_;
}

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  auto c0 = static_cast<unsigned char>(name[0]);
  if (!(std::isalpha(c0) || c0 == '_')) return false;
  return std::all_of(name.begin() + 1, name.end(), [](char ch) {
    auto c = static_cast<unsigned char>(ch);
    return std::isalnum(c) || c == '_' || c == '-';
  });
}

Atom parse_atom(std::string_view text) {
  text = trim(text);
  std::vector<std::string> parts;
  auto split_words = [&](std::string_view body, auto is_sep) {
    std::string cur;
    for (char ch : body) {
      if (is_sep(ch)) {
        if (!cur.empty()) parts.push_back(std::move(cur));
        cur.clear();
      } else {
        cur += ch;
      }
    }
    if (!cur.empty()) parts.push_back(std::move(cur));
  };
  if (!text.empty() && text.front() == '(') {
    if (text.back() != ')') throw Error("malformed atom: " + std::string(text));
    split_words(text.substr(1, text.size() - 2),
                [](char ch) { return std::isspace(static_cast<unsigned char>(ch)) != 0; });
  } else {
    auto open = text.find('(');
    if (open == std::string_view::npos) {
      parts.emplace_back(text);
    } else {
      if (text.back() != ')') throw Error("malformed atom: " + std::string(text));
      parts.emplace_back(trim(text.substr(0, open)));
      split_words(text.substr(open + 1, text.size() - open - 2), [](char ch) {
        return ch == ',' || std::isspace(static_cast<unsigned char>(ch)) != 0;
      });
    }
  }
  if (parts.empty()) throw Error("empty atom");
  for (const auto& p : parts) {
    if (!is_identifier(p)) throw Error("invalid identifier in atom: '" + p + "'");
  }
  std::string pred = std::move(parts.front());
  parts.erase(parts.begin());
  return Atom(std::move(pred), std::move(parts));
}

AtomSet::AtomSet(std::initializer_list<Atom> atoms) {
  for (const auto& a : atoms) insert(a);
}

bool AtomSet::insert(const Atom& a) {
  if (!atoms_.insert(a).second) return false;
  hash_ += mix(a.hash());
  return true;
}

bool AtomSet::erase(const Atom& a) {
  if (atoms_.erase(a) == 0) return false;
  hash_ -= mix(a.hash());
  return true;
}

std::vector<Atom> AtomSet::sorted() const {
  std::vector<Atom> out(atoms_.begin(), atoms_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::string AtomSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& a : sorted()) {
    if (!first) out += ", ";
    first = false;
    out += a.to_string();
  }
  return out + "}";
}

}  // namespace safeplan
