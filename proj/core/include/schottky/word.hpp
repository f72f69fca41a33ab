#pragma once

#include <string>
#include <vector>

namespace schottky {

// A reduced word in a free group. Letters are nonzero integers: +i is the
// i-th generator (1-based) and -i its inverse. Words are stored reduced (no
// adjacent cancelling pair); the default-constructed word is the identity.
class Word {
 public:
  Word() = default;

  // Reduces the letter sequence; rejects zero letters.
  static Word of(std::vector<int> letters);
  static Word letter(int l) { return of({l}); }

  // Letters as 'a'..'z' for generators and 'A'..'Z' for inverses; the
  // identity parses from and renders to the empty string. Letters beyond
  // `generators` are rejected.
  static Word parse(const std::string& s, int generators);
  std::string to_string() const;

  const std::vector<int>& letters() const { return letters_; }
  size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  Word inverse() const;
  Word operator*(const Word& o) const;  // concatenation, then reduction
  bool operator==(const Word& o) const { return letters_ == o.letters_; }

 private:
  std::vector<int> letters_;
};

// Letter order +1 < -1 < +2 < -2 < ...; words compare by length first.
bool letter_less(int a, int b);
bool shortlex_less(const Word& a, const Word& b);

// w = h c h^{-1} with c cyclically reduced (its first and last letters are
// not mutually inverse); returns c, and the prefix h through `conjugator`.
Word cyclic_reduction(const Word& w, Word* conjugator = nullptr);

// Is w a power u^k with k >= 2 (up to conjugacy-free exact equality)?
bool is_proper_power(const Word& w);

// All reduced words of length at most n over g generators, in shortlex
// order, starting with the identity.
std::vector<Word> reduced_words_up_to(int g, int n);

}  // namespace schottky
