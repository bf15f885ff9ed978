#pragma once

#include <cctype>
#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcrl/core/error.hpp"

namespace gcrl::lang {

struct Token {
  std::string text;  // lower-cased
  std::size_t begin = 0;
  std::size_t end = 0;
};

inline bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '/' || c == '\'' || c == '-' || c == '_';
}

// Splits an instruction into lower-cased words and single-character
// punctuation. Speaker tags such as "<Architect>" are skipped.
inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '<') {
      const std::size_t close = text.find('>', i);
      if (close == std::string_view::npos) throw ParseError("unterminated speaker tag", i, text.size());
      i = close + 1;
    } else if (c == ',' || c == '.' || c == ';' || c == '!' || c == ':') {
      out.push_back({std::string(1, c), i, i + 1});
      ++i;
    } else if (is_word_char(c)) {
      const std::size_t start = i;
      while (i < text.size() && is_word_char(text[i])) ++i;
      std::string w(text.substr(start, i - start));
      for (char& ch : w) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      out.push_back({std::move(w), start, i});
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", i, i + 1);
    }
  }
  return out;
}

inline constexpr std::string_view kNumberWords[] = {"zero", "one", "two",   "three", "four", "five",
                                                    "six",  "seven", "eight", "nine",  "ten"};

inline std::optional<int> number_value(std::string_view w) {
  for (int i = 0; i < 11; ++i) {
    if (kNumberWords[i] == w) return i;
  }
  int v = 0;
  const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
  if (ec == std::errc() && ptr == w.data() + w.size()) return v;
  return std::nullopt;
}

inline std::string number_word(int n) { return n >= 0 && n <= 10 ? std::string(kNumberWords[n]) : std::to_string(n); }

// Cursor over a token list with span-aware errors.
class TokenCursor {
 public:
  TokenCursor(std::vector<Token> tokens, std::size_t text_size) : toks_(std::move(tokens)), size_(text_size) {}

  bool done() const { return pos_ >= toks_.size(); }
  std::size_t pos() const { return pos_; }
  void seek(std::size_t p) { pos_ = p; }

  const Token* peek(std::size_t ahead = 0) const {
    return pos_ + ahead < toks_.size() ? &toks_[pos_ + ahead] : nullptr;
  }
  bool peek_is(std::string_view w, std::size_t ahead = 0) const {
    const Token* t = peek(ahead);
    return t && t->text == w;
  }
  template <class Range>
  bool peek_in(const Range& words, std::size_t ahead = 0) const {
    const Token* t = peek(ahead);
    if (!t) return false;
    for (std::string_view w : words) {
      if (t->text == w) return true;
    }
    return false;
  }

  bool accept(std::string_view w) {
    if (!peek_is(w)) return false;
    ++pos_;
    return true;
  }
  template <class Range>
  std::optional<std::string> accept_in(const Range& words) {
    if (!peek_in(words)) return std::nullopt;
    return toks_[pos_++].text;
  }

  const Token& next() {
    if (done()) fail("unexpected end of instruction");
    return toks_[pos_++];
  }

  void expect(std::string_view w) {
    if (!accept(w)) fail("expected '" + std::string(w) + "'");
  }

  std::size_t begin_offset() const { return done() ? size_ : toks_[pos_].begin; }
  std::size_t end_offset_before() const { return pos_ == 0 ? 0 : toks_[pos_ - 1].end; }

  [[noreturn]] void fail(const std::string& what) const {
    if (done()) throw ParseError(what + " (end of input)", size_, size_);
    const Token& t = toks_[pos_];
    throw ParseError(what + ", got '" + t.text + "'", t.begin, t.end);
  }

 private:
  std::vector<Token> toks_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

}  // namespace gcrl::lang
