#include "schottky/word.hpp"

#include <algorithm>

#include "schottky/errors.hpp"

namespace schottky {

namespace {

std::vector<int> reduce(const std::vector<int>& letters) {
  std::vector<int> out;
  for (int l : letters) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

}  // namespace

Word Word::of(std::vector<int> letters) {
  for (int l : letters)
    if (l == 0) throw Error(ErrorKind::InvalidArgument, "word letters must be nonzero");
  Word w;
  w.letters_ = reduce(letters);
  return w;
}

Word Word::parse(const std::string& s, int generators) {
  std::vector<int> letters;
  for (char c : s) {
    int l = 0;
    if (c >= 'a' && c <= 'z')
      l = c - 'a' + 1;
    else if (c >= 'A' && c <= 'Z')
      l = -(c - 'A' + 1);
    else
      throw ParseError(std::string("invalid word character: '") + c + "'");
    if (std::abs(l) > generators)
      throw ParseError(std::string("letter '") + c + "' exceeds the generator count");
    letters.push_back(l);
  }
  return of(std::move(letters));
}

std::string Word::to_string() const {
  std::string s;
  for (int l : letters_) {
    int i = std::abs(l) - 1;
    if (i >= 26)
      throw Error(ErrorKind::InvalidArgument, "cannot render words on more than 26 generators");
    s += static_cast<char>((l > 0 ? 'a' : 'A') + i);
  }
  return s;
}

Word Word::inverse() const {
  Word w;
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(-*it);
  return w;
}

Word Word::operator*(const Word& o) const {
  std::vector<int> cat = letters_;
  cat.insert(cat.end(), o.letters_.begin(), o.letters_.end());
  Word w;
  w.letters_ = reduce(cat);
  return w;
}

bool letter_less(int a, int b) {
  int ra = (std::abs(a) - 1) * 2 + (a < 0 ? 1 : 0);
  int rb = (std::abs(b) - 1) * 2 + (b < 0 ? 1 : 0);
  return ra < rb;
}

bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  const auto& la = a.letters();
  const auto& lb = b.letters();
  for (size_t i = 0; i < la.size(); ++i)
    if (la[i] != lb[i]) return letter_less(la[i], lb[i]);
  return false;
}

Word cyclic_reduction(const Word& w, Word* conjugator) {
  const std::vector<int>& ls = w.letters();
  size_t lo = 0, hi = ls.size();
  while (hi - lo >= 2 && ls[lo] == -ls[hi - 1]) {
    ++lo;
    --hi;
  }
  if (conjugator)
    *conjugator = Word::of(std::vector<int>(ls.begin(), ls.begin() + lo));
  return Word::of(std::vector<int>(ls.begin() + lo, ls.begin() + hi));
}

bool is_proper_power(const Word& w) {
  Word c = cyclic_reduction(w);
  size_t n = c.size();
  if (n == 0) return false;
  for (size_t p = 1; p * 2 <= n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (size_t i = p; i < n && periodic; ++i)
      periodic = c.letters()[i] == c.letters()[i - p];
    if (periodic) return true;
  }
  return false;
}

std::vector<Word> reduced_words_up_to(int g, int n) {
  if (g < 1) throw Error(ErrorKind::InvalidArgument, "need at least one generator");
  std::vector<int> alphabet;
  for (int i = 1; i <= g; ++i) {
    alphabet.push_back(i);
    alphabet.push_back(-i);
  }
  std::vector<Word> out = {Word()};
  size_t level_begin = 0;  // first index of the previous length level
  for (int len = 1; len <= n; ++len) {
    size_t level_end = out.size();
    for (size_t i = level_begin; i < level_end; ++i) {
      for (int l : alphabet) {
        const auto& base = out[i].letters();
        if (!base.empty() && base.back() == -l) continue;
        std::vector<int> next = base;
        next.push_back(l);
        Word w;
        w = Word::of(std::move(next));
        out.push_back(std::move(w));
      }
    }
    level_begin = level_end;
  }
  return out;
}

}  // namespace schottky
