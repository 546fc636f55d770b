#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace anosov::words {

using Letter = std::uint8_t;

// Inverse-closed generating alphabet.  `names` fixes the total order used for
// enumeration and for canonical (lexicographically minimal) rotations;
// `inverse` is a fixed-point-free involution on letter indices.
class Alphabet {
 public:
  Alphabet(std::vector<std::string> names, std::vector<Letter> inverse);

  static Alphabet free_rank(int rank);  // a, a^-1, b, b^-1, ...

  int size() const { return static_cast<int>(names_.size()); }
  Letter inv(Letter l) const { return inverse_[l]; }
  const std::string& name(Letter l) const { return names_[l]; }
  Letter parse_letter(const std::string& name) const;  // InputError on unknown

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<Letter> inverse_;
};

// Freely reduced word; the empty word is the identity.
struct Word {
  std::vector<Letter> letters;

  int length() const { return static_cast<int>(letters.size()); }
  bool empty() const { return letters.empty(); }
  bool operator==(const Word&) const = default;
  // length-then-lex, matching enumeration order
  bool operator<(const Word& o) const {
    if (letters.size() != o.letters.size()) return letters.size() < o.letters.size();
    return letters < o.letters;
  }
};

Word reduce(const Alphabet& a, std::span<const Letter> letters);
Word inverse(const Alphabet& a, const Word& w);
Word concat(const Alphabet& a, const Word& u, const Word& v);  // reduced product
Word power(const Alphabet& a, const Word& w, int n);
bool is_reduced(const Alphabet& a, std::span<const Letter> letters);
bool is_cyclically_reduced(const Alphabet& a, const Word& w);

// Lexicographically minimal rotation of a cyclically reduced word.
Word canonical_rotation(const Word& w);

struct CyclicReduction {
  Word core;        // cyclically reduced, canonical rotation
  Word conjugator;  // input = conjugator * core * conjugator^-1
};
CyclicReduction cyclic_reduce(const Alphabet& a, const Word& w);


struct Presentation {
  enum class Kind { Free, SurfaceGenus2 };

  Alphabet alphabet;
  std::vector<Word> relators;
  Kind kind;

  static Presentation free_group(int rank);
  static Presentation surface_genus2();  // <a1,b1,a2,b2 | [a1,b1][a2,b2]>
};

// A short word in the conjugacy class of w: free cyclic reduction, plus (for
// presentations with relators) greedy Dehn-style replacement of any cyclic
// window matching more than half of a relator rotation by the inverse of the
// complement.  Used to evaluate conjugation-invariant spectral data on a
// well-conditioned representative; enumeration semantics are unaffected.
Word conjugacy_shorten(const Presentation& p, const Word& w);

enum class EnumMode { AllReduced, CyclicClasses };

// Deterministic stream of words, in length-then-lex order.  AllReduced yields
// every freely reduced word of length in [1, max_len] exactly once;
// CyclicClasses yields the canonical representative of each rotation class of
// cyclically reduced words (inverses are distinct entries).  Surface-group
// words are not normalized modulo the relator.
void enumerate(const Presentation& p, int max_len, EnumMode mode,
               const std::function<void(const Word&)>& visit);
std::vector<Word> enumerate_vec(const Presentation& p, int max_len, EnumMode mode);

// serialization: whitespace-separated names, inverses suffixed "^-1"
std::string format_word(const Alphabet& a, const Word& w);
Word parse_word(const Alphabet& a, const std::string& text);

}  // namespace anosov::words
