#include "fame/textformat.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fame::textfmt {

const Section* Document::find(const std::string& name) const {
  for (const auto& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const Section& Document::require(const std::string& name) const {
  const Section* s = find(name);
  if (!s) throw ParseError(origin + ": missing required section [" + name + "]");
  return *s;
}

Document parse(std::istream& in, const std::string& origin) {
  Document doc;
  doc.origin = origin;
  std::string raw;
  int lineno = 0;
  Section* current = nullptr;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream tok(raw);
    std::vector<std::string> tokens;
    std::string t;
    while (tok >> t) tokens.push_back(t);
    if (tokens.empty()) continue;

    const std::string& first = tokens.front();
    if (first.size() >= 2 && first.front() == '[' && first.back() == ']') {
      if (tokens.size() != 1) {
        throw ParseError(origin + ":" + std::to_string(lineno) +
                         ": unexpected tokens after section header");
      }
      Section sec;
      sec.name = first.substr(1, first.size() - 2);
      sec.number = lineno;
      if (sec.name.empty()) {
        throw ParseError(origin + ":" + std::to_string(lineno) + ": empty section name");
      }
      doc.sections.push_back(std::move(sec));
      current = &doc.sections.back();
      continue;
    }
    if (!current) {
      throw ParseError(origin + ":" + std::to_string(lineno) +
                       ": content before first [section] header");
    }
    current->lines.push_back(Line{lineno, std::move(tokens)});
  }
  return doc;
}

Document parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  return parse(in, path);
}

double to_double(const std::string& token, const std::string& context) {
  const char* begin = token.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  if (end != begin + token.size() || token.empty() || errno == ERANGE) {
    throw ParseError(context + ": expected a number, got '" + token + "'");
  }
  return v;
}

long to_int(const std::string& token, const std::string& context) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(context + ": expected an integer, got '" + token + "'");
  }
  return v;
}

std::string Cursor::next_token(const char* what) {
  if (done()) fail(std::string("missing ") + what);
  return line_.tokens[pos_++];
}

double Cursor::next_double(const char* what) {
  std::string t = next_token(what);
  return to_double(t, doc_.origin + ":" + std::to_string(line_.number) + ": " + what);
}

long Cursor::next_int(const char* what) {
  std::string t = next_token(what);
  return to_int(t, doc_.origin + ":" + std::to_string(line_.number) + ": " + what);
}

bool Cursor::next_bool(const char* what) {
  std::string t = next_token(what);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  fail(std::string(what) + ": expected true/false, got '" + t + "'");
}

void Cursor::expect(const char* key) {
  std::string t = next_token(key);
  if (t != key) fail(std::string("expected '") + key + "', got '" + t + "'");
}

bool Cursor::accept(const std::string& key) {
  if (done() || line_.tokens[pos_] != key) return false;
  ++pos_;
  return true;
}

void Cursor::expect_done() const {
  if (!done()) {
    fail("unknown key '" + line_.tokens[pos_] + "' in section [" + sec_.name + "]");
  }
}

void Cursor::fail(const std::string& msg) const {
  throw ParseError(doc_.origin + ":" + std::to_string(line_.number) + ": " + msg);
}

}  // namespace fame::textfmt
