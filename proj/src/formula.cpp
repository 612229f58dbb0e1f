#include "condreg/formula.hpp"

#include <cctype>
#include <set>

#include "condreg/error.hpp"

namespace condreg {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ModelSpec formula() {
    ModelSpec spec;
    spec.response = identifier();
    expect('~');
    bool first = true;
    bool negate = false;
    while (true) {
      skip_blanks();
      if (!first || peek() == '-') {
        if (!first && !accept('+') && peek() != '-') fail("expected '+'");
        negate = accept('-');
      }
      item(spec, negate);
      first = false;
      skip_blanks();
      if (at_end()) break;
    }
    if (spec.terms.empty() && !spec.intercept) fail("formula has no terms");
    try {
      spec.validate();
    } catch (const Error& e) {
      throw Error(ErrorCode::Parse, std::string("formula: ") + e.what());
    }
    return spec;
  }

  Term lone_term() {
    Term t = term();
    skip_blanks();
    if (!at_end()) fail("trailing characters after term");
    return t;
  }

 private:
  void item(ModelSpec& spec, bool negate) {
    skip_blanks();
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      const auto start = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      const auto digits = text_.substr(start, pos_ - start);
      if (digits == "0" && !negate) {
        spec.intercept = false;
      } else if (digits == "1") {
        spec.intercept = !negate;
      } else {
        fail("unexpected number '" + std::string(digits) + "'");
      }
      return;
    }
    if (negate) fail("only '- 1' may be subtracted");
    const auto save = pos_;
    const auto name = identifier();
    skip_blanks();
    if (name == "quad" && peek() == '(') {
      ++pos_;
      std::vector<std::string> args;
      do {
        args.push_back(identifier());
        skip_blanks();
      } while (accept(','));
      expect(')');
      for (auto& t : full_quadratic(args, spec.response).terms) add(spec, std::move(t));
      return;
    }
    pos_ = save;
    add(spec, term());
  }

  void add(ModelSpec& spec, Term t) {
    if (spec.contains(t)) fail("duplicate term '" + t.label() + "'");
    spec.terms.push_back(std::move(t));
  }

  Term term() {
    std::vector<Factor> factors;
    do {
      Factor f{identifier(), 1};
      skip_blanks();
      if (accept('^')) {
        skip_blanks();
        const auto start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (start == pos_) fail("expected an integer power");
        const auto digits = text_.substr(start, pos_ - start);
        if (digits.size() > 1) fail("power '" + std::string(digits) + "' exceeds 3");
        f.power = digits.front() - '0';
        if (f.power < 1) fail("power must be at least 1");
      }
      factors.push_back(std::move(f));
      skip_blanks();
    } while (accept(':'));
    Term t(std::move(factors));
    if (t.degree() > kMaxFormulaDegree) {
      fail("term '" + t.label() + "' has degree " + std::to_string(t.degree()) + " (max 3)");
    }
    return t;
  }

  std::string identifier() {
    skip_blanks();
    const auto start = pos_;
    auto is_head = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto is_tail = [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    };
    if (!is_head(peek())) fail("expected a name");
    while (is_tail(peek())) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_blanks() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  bool accept(char c) {
    skip_blanks();
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::Parse,
                "formula: " + what + " at column " + std::to_string(pos_ + 1));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

ModelSpec parse_formula(std::string_view text) { return Parser(text).formula(); }

Term parse_term(std::string_view text) { return Parser(text).lone_term(); }

std::string print_formula(const ModelSpec& spec) {
  std::string out = spec.response + " ~ ";
  bool first = true;
  if (!spec.intercept) {
    out += "0";
    first = false;
  }
  for (const auto& t : spec.terms) {
    if (!first) out += " + ";
    out += t.label();
    first = false;
  }
  if (first) out += "1";
  return out;
}

}  // namespace condreg
