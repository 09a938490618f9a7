#include "foldspace/words.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace foldspace {

Letters free_reduce(Letters raw) {
  Letters out;
  out.reserve(raw.size());
  for (int x : raw) {
    if (!out.empty() && out.back() == -x) {
      out.pop_back();
    } else {
      out.push_back(x);
    }
  }
  return out;
}

Word reduce(const Alphabet& a, const Letters& raw) {
  for (int x : raw) {
    if (!a.contains(x)) throw Error("letter out of range for alphabet");
  }
  return Word{a, free_reduce(raw)};
}

Word concat(const Word& u, const Word& v) {
  Letters raw = u.letters;
  raw.insert(raw.end(), v.letters.begin(), v.letters.end());
  return Word{u.alphabet, free_reduce(std::move(raw))};
}

Letters inverse_letters(const Letters& w) {
  Letters out(w.rbegin(), w.rend());
  for (int& x : out) x = -x;
  return out;
}

Word inverse(const Word& w) { return Word{w.alphabet, inverse_letters(w.letters)}; }

int letter_key(int letter) {
  int k = std::abs(letter);
  return (k - 1) * 2 + (letter < 0 ? 1 : 0);
}

Letters cyclic_reduce(Letters w) {
  while (w.size() >= 2 && w.front() == -w.back()) {
    w.erase(w.begin());
    w.pop_back();
  }
  return w;
}

static bool key_less(const Letters& a, const Letters& b) {
  return std::lexicographical_compare(
      a.begin(), a.end(), b.begin(), b.end(),
      [](int x, int y) { return letter_key(x) < letter_key(y); });
}

Letters least_rotation(const Letters& w) {
  if (w.empty()) return w;
  Letters best = w;
  Letters rot = w;
  for (size_t i = 1; i < w.size(); ++i) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (key_less(rot, best)) best = rot;
  }
  return best;
}

Letters oriented_cyclic_canonical(const Letters& w) {
  return least_rotation(cyclic_reduce(free_reduce(w)));
}

CyclicWord cyclic_canonical(const Word& w) {
  Letters c = cyclic_reduce(w.letters);
  if (c.empty()) throw Error("cyclic canonical form of the trivial element");
  Letters a = least_rotation(c);
  Letters b = least_rotation(inverse_letters(c));
  return CyclicWord{w.alphabet, key_less(b, a) ? b : a};
}

std::pair<CyclicWord, int> root(const CyclicWord& c) {
  int n = c.size();
  if (n == 0) throw Error("root of the empty cyclic word");
  for (int p = 1; p <= n / 2; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (int i = 0; i + p < n && periodic; ++i) {
      if (c.letters[i] != c.letters[i + p]) periodic = false;
    }
    if (periodic) {
      Letters r(c.letters.begin(), c.letters.begin() + p);
      Word w{c.alphabet, free_reduce(r)};
      return {cyclic_canonical(w), n / p};
    }
  }
  return {c, 1};
}

bool is_conjugate(const Word& u, const Word& v) {
  if (u.alphabet.rank != v.alphabet.rank) throw Error("alphabet mismatch");
  return oriented_cyclic_canonical(u.letters) == oriented_cyclic_canonical(v.letters);
}

bool are_distinct_classes(const std::vector<Word>& ws) {
  std::vector<Letters> canon;
  for (const auto& w : ws) canon.push_back(oriented_cyclic_canonical(w.letters));
  for (size_t i = 0; i < canon.size(); ++i) {
    for (size_t j = i + 1; j < canon.size(); ++j) {
      if (canon[i] == canon[j]) return false;
      if (canon[i] == oriented_cyclic_canonical(inverse_letters(canon[j]))) return false;
    }
  }
  return true;
}

Letters WhiteheadAut::apply_letters(const Letters& w) const {
  Letters out;
  if (kind == Kind::Permutation) {
    for (int x : w) {
      int img = image[std::abs(x) - 1];
      out.push_back(x > 0 ? img : -img);
    }
    return free_reduce(out);
  }
  std::set<int> inA(set.begin(), set.end());
  for (int x : w) {
    if (x == multiplier || x == -multiplier) {
      out.push_back(x);
      continue;
    }
    if (inA.count(-x)) out.push_back(-multiplier);
    out.push_back(x);
    if (inA.count(x)) out.push_back(multiplier);
  }
  return free_reduce(out);
}

Word WhiteheadAut::apply(const Word& w) const {
  return Word{w.alphabet, apply_letters(w.letters)};
}

WhiteheadAut WhiteheadAut::inverse() const {
  WhiteheadAut inv = *this;
  if (kind == Kind::Permutation) {
    inv.image.assign(image.size(), 0);
    for (size_t k = 0; k < image.size(); ++k) {
      int img = image[k];
      inv.image[std::abs(img) - 1] = img > 0 ? static_cast<int>(k) + 1 : -(static_cast<int>(k) + 1);
    }
    return inv;
  }
  inv.multiplier = -multiplier;
  inv.set.clear();
  for (int x : set) inv.set.push_back(x == multiplier ? -multiplier : x);
  std::sort(inv.set.begin(), inv.set.end());
  return inv;
}

std::string WhiteheadAut::describe() const {
  if (kind == Kind::Permutation) {
    std::string s = "perm[";
    for (size_t i = 0; i < image.size(); ++i) {
      if (i) s += ' ';
      s += word_to_string({image[i]});
    }
    return s + "]";
  }
  std::string s = "(" + word_to_string({multiplier}) + "; ";
  for (size_t i = 0; i < set.size(); ++i) {
    if (i) s += ' ';
    s += word_to_string({set[i]});
  }
  return s + ")";
}

std::vector<WhiteheadAut> all_type_ii(const Alphabet& alpha) {
  std::vector<WhiteheadAut> out;
  std::vector<int> letters;
  for (int k = 1; k <= alpha.rank; ++k) {
    letters.push_back(k);
    letters.push_back(-k);
  }
  for (int a : letters) {
    std::vector<int> rest;
    for (int x : letters) {
      if (x != a && x != -a) rest.push_back(x);
    }
    int m = static_cast<int>(rest.size());
    for (uint32_t mask = 0; mask < (1u << m); ++mask) {
      WhiteheadAut w;
      w.kind = WhiteheadAut::Kind::TypeII;
      w.alphabet = alpha;
      w.multiplier = a;
      w.set.push_back(a);
      for (int i = 0; i < m; ++i) {
        if (mask & (1u << i)) w.set.push_back(rest[i]);
      }
      std::sort(w.set.begin(), w.set.end());
      if (w.set.size() == 1) continue;  // identity
      out.push_back(std::move(w));
    }
  }
  return out;
}

WhiteheadResult whitehead_minimize(const CyclicWord& c) {
  WhiteheadResult res;
  res.minimal = c;
  auto auts = all_type_ii(c.alphabet);
  Letters cur = c.letters;
  // Greedy descent; by peak reduction a strict length decrease exists
  // whenever the cyclic length is not minimal in the Aut-orbit.
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& aut : auts) {
      Letters img = cyclic_reduce(aut.apply_letters(cur));
      if (img.size() < cur.size()) {
        cur = img;
        res.trace.push_back(aut);
        progress = true;
        break;
      }
    }
  }
  res.min_length = static_cast<int>(cur.size());
  res.minimal = cyclic_canonical(Word{c.alphabet, free_reduce(cur)});
  return res;
}

bool is_primitive(const CyclicWord& c) { return whitehead_minimize(c).min_length == 1; }

bool is_primitive_word(const Word& w) {
  return is_primitive(cyclic_canonical(w));
}

std::string word_to_string(const Letters& w) {
  std::string s;
  for (int x : w) {
    int k = std::abs(x);
    if (k < 1 || k > 26) throw Error("letter outside printable range a..z");
    s += static_cast<char>((x > 0 ? 'a' : 'A') + k - 1);
  }
  return s;
}

Letters parse_letters(const std::string& s, const Alphabet& a) {
  Letters out;
  for (char ch : s) {
    if (ch == ' ' || ch == '.') continue;
    int x = 0;
    if (ch >= 'a' && ch <= 'z') x = ch - 'a' + 1;
    else if (ch >= 'A' && ch <= 'Z') x = -(ch - 'A' + 1);
    else throw Error(std::string("bad letter '") + ch + "' in word");
    if (!a.contains(x)) throw Error(std::string("letter '") + ch + "' out of rank");
    out.push_back(x);
  }
  return out;
}

Word parse_word(const std::string& s, const Alphabet& a) {
  return Word{a, free_reduce(parse_letters(s, a))};
}

}  // namespace foldspace
