#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace foldspace {

// Letters of a free group F_n are nonzero integers in [-n, n]; -k is the
// inverse of k.  Words are always kept freely reduced.

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Alphabet {
  int rank = 1;
  explicit Alphabet(int r = 1) : rank(r) {
    if (r < 1) throw Error("alphabet rank must be >= 1");
  }
  bool contains(int letter) const {
    return letter != 0 && letter >= -rank && letter <= rank;
  }
  bool operator==(const Alphabet&) const = default;
};

using Letters = std::vector<int>;

struct Word {
  Alphabet alphabet;
  Letters letters;  // freely reduced

  int size() const { return static_cast<int>(letters.size()); }
  bool empty() const { return letters.empty(); }
  bool operator==(const Word&) const = default;
};

// Canonical form of an unoriented conjugacy class: cyclically reduced,
// lexicographically least over all rotations of both orientations with
// letter order 1 < -1 < 2 < -2 < ...
struct CyclicWord {
  Alphabet alphabet;
  Letters letters;

  int size() const { return static_cast<int>(letters.size()); }
  bool operator==(const CyclicWord&) const = default;
};

Letters free_reduce(Letters raw);
Word reduce(const Alphabet& a, const Letters& raw);
Word concat(const Word& u, const Word& v);
Word inverse(const Word& w);
Letters inverse_letters(const Letters& w);

// key used for the canonical letter order 1 < -1 < 2 < -2 < ...
int letter_key(int letter);

// Cyclic reduction of a reduced word (strips matching first/last letters).
Letters cyclic_reduce(Letters w);

// Least rotation under letter_key order; does not consider the inverse.
Letters least_rotation(const Letters& w);

// Oriented canonical form: least rotation of the cyclic reduction.
Letters oriented_cyclic_canonical(const Letters& w);

CyclicWord cyclic_canonical(const Word& w);  // throws on trivial element

std::pair<CyclicWord, int> root(const CyclicWord& c);

bool is_conjugate(const Word& u, const Word& v);
bool are_distinct_classes(const std::vector<Word>& ws);

// Whitehead automorphisms.  Type I: signed permutation of the generators.
// Type II: multiplier letter `a` and a set A of letters with a in A and
// a^-1 not in A; letters x in A pick up a right factor a, letters with
// x^-1 in A pick up a left factor a^-1.
struct WhiteheadAut {
  enum class Kind { Permutation, TypeII } kind = Kind::TypeII;
  Alphabet alphabet;
  // Permutation: image[k-1] = signed image letter of generator k.
  std::vector<int> image;
  // TypeII data.
  int multiplier = 0;
  std::vector<int> set;  // letters of A, sorted

  Word apply(const Word& w) const;
  Letters apply_letters(const Letters& w) const;
  WhiteheadAut inverse() const;
  std::string describe() const;
};

std::vector<WhiteheadAut> all_type_ii(const Alphabet& a);

struct WhiteheadResult {
  int min_length = 0;
  CyclicWord minimal;
  std::vector<WhiteheadAut> trace;
};

WhiteheadResult whitehead_minimize(const CyclicWord& c);
bool is_primitive(const CyclicWord& c);
bool is_primitive_word(const Word& w);

// Serialization: a..z for generators 1..26, capitals for inverses.
std::string word_to_string(const Letters& w);
Letters parse_letters(const std::string& s, const Alphabet& a);
Word parse_word(const std::string& s, const Alphabet& a);

}  // namespace foldspace
