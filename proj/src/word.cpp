#include "sigvol/word.hpp"

#include <algorithm>
#include <stdexcept>

namespace sigvol {

namespace {

std::uint8_t checked_letter(long v) {
  if (v < 1 || v > 255) throw std::invalid_argument("letter index out of range: " + std::to_string(v));
  return static_cast<std::uint8_t>(v);
}

}  // namespace

Word::Word(std::vector<std::uint8_t> letters) : letters_(std::move(letters)) {
  for (auto l : letters_)
    if (l < 1) throw std::invalid_argument("letter index must be >= 1");
}

Word::Word(std::initializer_list<int> letters) {
  letters_.reserve(letters.size());
  for (int l : letters) letters_.push_back(checked_letter(l));
}

Word Word::parse(std::string_view text) {
  std::vector<std::uint8_t> letters;
  if (text.empty()) return Word{};
  if (text.find('.') != std::string_view::npos) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t dot = text.find('.', pos);
      std::string_view piece = text.substr(pos, dot == std::string_view::npos ? dot : dot - pos);
      if (piece.empty()) throw std::invalid_argument("malformed word: empty letter in \"" + std::string(text) + "\"");
      long v = 0;
      for (char c : piece) {
        if (c < '0' || c > '9') throw std::invalid_argument("malformed word: \"" + std::string(text) + "\"");
        v = v * 10 + (c - '0');
        if (v > 255) throw std::invalid_argument("letter index out of range in \"" + std::string(text) + "\"");
      }
      letters.push_back(checked_letter(v));
      if (dot == std::string_view::npos) break;
      pos = dot + 1;
    }
  } else {
    letters.reserve(text.size());
    for (char c : text) {
      if (c < '1' || c > '9') throw std::invalid_argument("malformed word: \"" + std::string(text) + "\"");
      letters.push_back(static_cast<std::uint8_t>(c - '0'));
    }
  }
  return Word(std::move(letters));
}

Word Word::repeated(Letter letter, std::size_t n) {
  return Word(std::vector<std::uint8_t>(n, checked_letter(letter)));
}

Letter Word::max_letter() const {
  Letter m = 0;
  for (auto l : letters_) m = std::max<Letter>(m, l);
  return m;
}

int Word::count_letter(Letter letter) const {
  return static_cast<int>(std::count(letters_.begin(), letters_.end(), letter));
}

Word Word::concat(const Word& other) const {
  std::vector<std::uint8_t> out = letters_;
  out.insert(out.end(), other.letters_.begin(), other.letters_.end());
  return Word(std::move(out));
}

Word Word::prefix(std::size_t n) const {
  return Word(std::vector<std::uint8_t>(letters_.begin(), letters_.begin() + n));
}

Word Word::rotated(std::size_t k) const {
  if (letters_.empty()) return *this;
  k %= letters_.size();
  std::vector<std::uint8_t> out;
  out.reserve(letters_.size());
  out.insert(out.end(), letters_.begin() + k, letters_.end());
  out.insert(out.end(), letters_.begin(), letters_.begin() + k);
  return Word(std::move(out));
}

std::string Word::str() const {
  if (letters_.empty()) return "";
  if (max_letter() <= 9) {
    std::string s;
    s.reserve(letters_.size());
    for (auto l : letters_) s.push_back(static_cast<char>('0' + l));
    return s;
  }
  std::string s;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) s.push_back('.');
    s += std::to_string(static_cast<int>(letters_[i]));
  }
  return s;
}

Word concat(const Word& w, const Word& v) { return w.concat(v); }
int count_letter(const Word& w, Letter letter) { return w.count_letter(letter); }

}  // namespace sigvol
