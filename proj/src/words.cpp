#include "anosovlab/words.hpp"

#include <algorithm>
#include <sstream>

#include "anosovlab/errors.hpp"

namespace anosov::words {

Alphabet::Alphabet(std::vector<std::string> names, std::vector<Letter> inverse)
    : names_(std::move(names)), inverse_(std::move(inverse)) {
  if (names_.size() != inverse_.size())
    throw InputError("alphabet: names/inverse size mismatch");
  for (std::size_t i = 0; i < inverse_.size(); ++i) {
    const Letter j = inverse_[i];
    if (j >= inverse_.size() || j == i || inverse_[j] != i)
      throw InputError("alphabet: involution is not fixed-point-free");
  }
}

Alphabet Alphabet::free_rank(int rank) {
  if (rank < 1 || rank > 13) throw InputError("free_rank: rank out of range");
  std::vector<std::string> names;
  std::vector<Letter> inv;
  for (int i = 0; i < rank; ++i) {
    std::string g(1, static_cast<char>('a' + i));
    names.push_back(g);
    names.push_back(g + "^-1");
    inv.push_back(static_cast<Letter>(2 * i + 1));
    inv.push_back(static_cast<Letter>(2 * i));
  }
  return Alphabet(std::move(names), std::move(inv));
}

Letter Alphabet::parse_letter(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<Letter>(i);
  throw InputError("unknown generator symbol: " + name);
}

Word reduce(const Alphabet& a, std::span<const Letter> letters) {
  Word out;
  out.letters.reserve(letters.size());
  for (Letter l : letters) {
    if (l >= a.size()) throw InputError("letter index out of range");
    if (!out.letters.empty() && out.letters.back() == a.inv(l))
      out.letters.pop_back();
    else
      out.letters.push_back(l);
  }
  return out;
}

Word inverse(const Alphabet& a, const Word& w) {
  Word out;
  out.letters.reserve(w.letters.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    out.letters.push_back(a.inv(*it));
  return out;
}

Word concat(const Alphabet& a, const Word& u, const Word& v) {
  std::vector<Letter> all = u.letters;
  all.insert(all.end(), v.letters.begin(), v.letters.end());
  return reduce(a, all);
}

Word power(const Alphabet& a, const Word& w, int n) {
  Word base = n < 0 ? inverse(a, w) : w;
  Word out;
  for (int i = 0; i < std::abs(n); ++i) out = concat(a, out, base);
  return out;
}

bool is_reduced(const Alphabet& a, std::span<const Letter> letters) {
  for (std::size_t i = 0; i + 1 < letters.size(); ++i)
    if (letters[i + 1] == a.inv(letters[i])) return false;
  return true;
}

bool is_cyclically_reduced(const Alphabet& a, const Word& w) {
  if (!is_reduced(a, w.letters)) return false;
  if (w.length() < 2) return true;
  return w.letters.front() != a.inv(w.letters.back());
}

Word canonical_rotation(const Word& w) {
  const int n = w.length();
  if (n < 2) return w;
  Word best = w;
  Word rot = w;
  for (int r = 1; r < n; ++r) {
    std::rotate(rot.letters.begin(), rot.letters.begin() + 1, rot.letters.end());
    if (rot.letters < best.letters) best = rot;
  }
  return best;
}

CyclicReduction cyclic_reduce(const Alphabet& a, const Word& w) {
  if (!is_reduced(a, w.letters)) throw InputError("cyclic_reduce: word not reduced");
  std::size_t lo = 0, hi = w.letters.size();
  while (hi - lo >= 2 && w.letters[lo] == a.inv(w.letters[hi - 1])) {
    ++lo;
    --hi;
  }
  Word core{std::vector<Letter>(w.letters.begin() + lo, w.letters.begin() + hi)};
  Word prefix{std::vector<Letter>(w.letters.begin(), w.letters.begin() + lo)};
  // rotate the core to its canonical representative; each left-rotation by one
  // letter extends the conjugator by that letter
  const Word canon = canonical_rotation(core);
  Word conj = prefix;
  Word rot = core;
  for (int r = 0; r < core.length(); ++r) {
    if (rot == canon) break;
    Word head{std::vector<Letter>{rot.letters.front()}};
    conj = concat(a, conj, head);
    std::rotate(rot.letters.begin(), rot.letters.begin() + 1, rot.letters.end());
  }
  return {canon, conj};
}

Word conjugacy_shorten(const Presentation& p, const Word& w) {
  Word core = cyclic_reduce(p.alphabet, w).core;
  if (p.relators.empty() || core.empty()) return core;

  // rotations of each relator and its inverse
  std::vector<Word> rotations;
  for (const Word& r : p.relators) {
    for (Word rot : {r, inverse(p.alphabet, r)}) {
      for (int k = 0; k < rot.length(); ++k) {
        rotations.push_back(rot);
        std::rotate(rot.letters.begin(), rot.letters.begin() + 1, rot.letters.end());
      }
    }
  }

  bool changed = true;
  while (changed && core.length() >= 2) {
    changed = false;
    const int n = core.length();
    for (const Word& rot : rotations) {
      const int rl = rot.length();
      const int need = rl / 2 + 1;  // strictly more than half the relator
      if (n < need) continue;
      for (int start = 0; start < n && !changed; ++start) {
        int match = 0;
        while (match < std::min(n, rl) &&
               core.letters[(start + match) % n] == rot.letters[match])
          ++match;
        if (match < need) continue;
        // core window equals rot[0..match); relator says it equals the
        // inverse of rot[match..rl), which is shorter
        std::vector<Letter> replacement;
        for (int i = rl - 1; i >= match; --i)
          replacement.push_back(p.alphabet.inv(rot.letters[i]));
        std::vector<Letter> rest;
        for (int i = 0; i < n - match; ++i)
          rest.push_back(core.letters[(start + match + i) % n]);
        replacement.insert(replacement.end(), rest.begin(), rest.end());
        core = cyclic_reduce(p.alphabet, reduce(p.alphabet, replacement)).core;
        changed = true;
      }
      if (changed) break;
    }
  }
  return canonical_rotation(core);
}

Presentation Presentation::free_group(int rank) {
  return Presentation{Alphabet::free_rank(rank), {}, Kind::Free};
}

Presentation Presentation::surface_genus2() {
  std::vector<std::string> names;
  std::vector<Letter> inv;
  for (const char* g : {"a1", "b1", "a2", "b2"}) {
    names.push_back(g);
    names.push_back(std::string(g) + "^-1");
    const Letter i = static_cast<Letter>(names.size() - 2);
    inv.push_back(static_cast<Letter>(i + 1));
    inv.push_back(i);
  }
  Alphabet a(std::move(names), std::move(inv));
  const Word relator = parse_word(
      a, "a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1");
  return Presentation{a, {relator}, Kind::SurfaceGenus2};
}

namespace {

void emit_length(const Alphabet& a, int len, EnumMode mode,
                 const std::function<void(const Word&)>& visit) {
  Word w;
  w.letters.reserve(len);
  const int n = a.size();
  std::function<void()> rec = [&] {
    if (w.length() == len) {
      if (mode == EnumMode::CyclicClasses) {
        if (len >= 2 && w.letters.front() == a.inv(w.letters.back())) return;
        if (canonical_rotation(w) != w) return;
      }
      visit(w);
      return;
    }
    for (Letter l = 0; l < n; ++l) {
      if (!w.letters.empty() && w.letters.back() == a.inv(l)) continue;
      w.letters.push_back(l);
      rec();
      w.letters.pop_back();
    }
  };
  rec();
}

}  // namespace

void enumerate(const Presentation& p, int max_len, EnumMode mode,
               const std::function<void(const Word&)>& visit) {
  if (max_len < 1) throw InputError("enumerate: max_len must be >= 1");
  for (int len = 1; len <= max_len; ++len) emit_length(p.alphabet, len, mode, visit);
}

std::vector<Word> enumerate_vec(const Presentation& p, int max_len, EnumMode mode) {
  std::vector<Word> out;
  enumerate(p, max_len, mode, [&](const Word& w) { out.push_back(w); });
  return out;
}

std::string format_word(const Alphabet& a, const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (i) out += ' ';
    out += a.name(w.letters[i]);
  }
  return out;
}

Word parse_word(const Alphabet& a, const std::string& text) {
  std::istringstream in(text);
  std::vector<Letter> letters;
  std::string tok;
  while (in >> tok) letters.push_back(a.parse_letter(tok));
  return reduce(a, letters);
}

}  // namespace anosov::words
