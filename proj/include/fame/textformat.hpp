#pragma once

#include <istream>
#include <string>
#include <vector>

#include "fame/error.hpp"

namespace fame::textfmt {

// Section-based structured text shared by the model file, the run-config
// file and the small input files consumed by the CLI.
//
//   # comment
//   [section]
//   token token token ...
//
// Tokens are whitespace separated. Everything after '#' on a line is
// ignored. Section names repeat freely; order is preserved.

struct Line {
  int number = 0;  // 1-based line number in the source
  std::vector<std::string> tokens;
};

struct Section {
  std::string name;
  int number = 0;
  std::vector<Line> lines;
};

struct Document {
  std::string origin;  // file path or "<memory>", for error messages
  std::vector<Section> sections;

  const Section* find(const std::string& name) const;
  const Section& require(const std::string& name) const;
  bool has(const std::string& name) const { return find(name) != nullptr; }
};

Document parse(std::istream& in, const std::string& origin);
Document parse_file(const std::string& path);

// Cursor over one line's tokens with typed extraction and strict
// end-of-line checking. All failures throw ParseError naming the origin,
// line and token.
class Cursor {
 public:
  Cursor(const Document& doc, const Section& sec, const Line& line)
      : doc_(doc), sec_(sec), line_(line) {}

  bool done() const { return pos_ >= line_.tokens.size(); }
  std::size_t remaining() const { return line_.tokens.size() - pos_; }

  std::string next_token(const char* what);
  double next_double(const char* what);
  long next_int(const char* what);
  bool next_bool(const char* what);

  // Consumes the literal keyword `key`; error if the next token differs.
  void expect(const char* key);

  // True (and consumes) if the next token equals `key`.
  bool accept(const std::string& key);

  void expect_done() const;

  [[noreturn]] void fail(const std::string& msg) const;

 private:
  const Document& doc_;
  const Section& sec_;
  const Line& line_;
  std::size_t pos_ = 0;
};

double to_double(const std::string& token, const std::string& context);
long to_int(const std::string& token, const std::string& context);

}  // namespace fame::textfmt
