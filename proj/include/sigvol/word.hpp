#ifndef SIGVOL_WORD_HPP
#define SIGVOL_WORD_HPP

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace sigvol {

// Letters are 1-based indices into the alphabet. Letter 1 is reserved for
// the time coordinate throughout.
using Letter = int;

// A word over a finite alphabet, indexing one tensor/signature entry.
// The empty word is the unique word of length 0.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<std::uint8_t> letters);
  Word(std::initializer_list<int> letters);

  // Parses "221" (single-digit letters) or "1.2.10" (dot-separated).
  // The empty string parses to the empty word.
  static Word parse(std::string_view text);

  // The word i i ... i (n copies), e.g. repeated(2, 5) = 22222.
  static Word repeated(Letter letter, std::size_t n);

  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter letter(std::size_t i) const { return letters_[i]; }
  const std::vector<std::uint8_t>& letters() const { return letters_; }

  Letter max_letter() const;
  int count_letter(Letter letter) const;

  Word concat(const Word& other) const;
  Word prefix(std::size_t n) const;

  // Cyclic left rotation by k positions.
  Word rotated(std::size_t k) const;

  // Digit string for letters <= 9, dot-separated otherwise; "" when empty.
  std::string str() const;

  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  std::vector<std::uint8_t> letters_;
};

Word concat(const Word& w, const Word& v);
int count_letter(const Word& w, Letter letter);

// Graded lexicographic: by length, then lexicographic on letter indices.
// Canonical term order for serialization.
struct GradedLexLess {
  bool operator()(const Word& a, const Word& b) const {
    if (a.length() != b.length()) return a.length() < b.length();
    return a.letters() < b.letters();
  }
};

}  // namespace sigvol

#endif
