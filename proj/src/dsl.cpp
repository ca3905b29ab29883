#include "cubealg/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cubealg/sorted_set.hpp"

namespace cubealg {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> splitList(const std::string& s, char delim) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == delim) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool isWordStart(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool isWordChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         c == '+' || c == ':' || c == '@' || c == '/';
}

const char* const kKeywords[] = {"QUERY", "FROM",  "WHERE", "AND", "GROUP",
                                 "BY",    "AGG",   "AS",    "IN"};

bool isKeyword(const std::string& word) {
  std::string u = upper(word);
  for (const char* k : kKeywords) {
    if (u == k) return true;
  }
  return false;
}

// --- query text tokenizer ---------------------------------------------------

struct Token {
  enum Kind { Word, Quoted, Punct, Op, End } kind = End;
  std::string text;
  int line = 1, col = 1;
};

class Lexer {
 public:
  Lexer(const std::string& src, std::vector<Diagnostic>* diags)
      : src_(src), diags_(diags) {
    advance();
  }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void countChar(char c) {
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
  }

  char cur() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

  void bump() {
    countChar(src_[pos_]);
    ++pos_;
  }

  void advance() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      bump();
    }
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::End;
      return;
    }
    char c = cur();
    if (c == '"') {
      bump();
      std::string text;
      while (pos_ < src_.size() && cur() != '"') {
        if (cur() == '\\' && pos_ + 1 < src_.size()) bump();
        text += cur();
        bump();
      }
      if (pos_ >= src_.size()) {
        diags_->push_back({tok_.line, tok_.col, "unterminated string"});
      } else {
        bump();  // closing quote
      }
      tok_.kind = Token::Quoted;
      tok_.text = std::move(text);
      return;
    }
    if (isWordStart(c)) {
      std::string text;
      while (pos_ < src_.size() && isWordChar(cur())) {
        text += cur();
        bump();
      }
      tok_.kind = Token::Word;
      tok_.text = std::move(text);
      return;
    }
    if (c == '.' || c == ',' || c == '{' || c == '}' || c == '(' || c == ')') {
      tok_.kind = Token::Punct;
      tok_.text = std::string(1, c);
      bump();
      return;
    }
    if (c == '=' ) {
      tok_.kind = Token::Op;
      tok_.text = "=";
      bump();
      return;
    }
    if (c == '!' || c == '<' || c == '>') {
      std::string text(1, c);
      bump();
      if (cur() == '=') {
        text += '=';
        bump();
      }
      if (text == "!") {
        diags_->push_back({tok_.line, tok_.col, "stray '!'"});
        advance();
        return;
      }
      tok_.kind = Token::Op;
      tok_.text = std::move(text);
      return;
    }
    diags_->push_back(
        {tok_.line, tok_.col, std::string("unexpected character '") + c + "'"});
    bump();
    advance();
  }

  const std::string& src_;
  std::vector<Diagnostic>* diags_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

// --- query parser -----------------------------------------------------------

class QueryParser {
 public:
  QueryParser(const std::string& text, const Catalog& cat,
              std::vector<Diagnostic>* diags)
      : cat_(cat), diags_(diags), lex_(text, diags) {}

  bool run(CubeQuery* out) {
    parse();
    if (!diags_->empty()) return false;
    CubeQuery q;
    q.name = name_;
    q.dataset = dataset_;
    q.atoms = atoms_;
    q.groupers = groupers_;
    q.measures = measures_;
    try {
      *out = normalized(cat_, std::move(q));
    } catch (const Error& e) {
      diags_->push_back({1, 1, e.what()});
      return false;
    }
    return true;
  }

 private:
  void error(const Token& t, const std::string& message) {
    diags_->push_back({t.line, t.col, message});
  }

  bool keyword(const char* kw) {
    const Token& t = lex_.peek();
    if (t.kind == Token::Word && upper(t.text) == kw) {
      lex_.next();
      return true;
    }
    return false;
  }

  bool expectKeyword(const char* kw) {
    const Token& t = lex_.peek();
    if (!keyword(kw)) {
      error(t, std::string("expected ") + kw);
      return false;
    }
    return true;
  }

  bool expectPunct(char c) {
    const Token& t = lex_.peek();
    if (t.kind == Token::Punct && t.text[0] == c) {
      lex_.next();
      return true;
    }
    error(t, std::string("expected '") + c + "'");
    return false;
  }

  // A name position: a bare word (keywords do not qualify) or quoted text.
  bool ident(std::string* out, Token* where, const char* what) {
    const Token& t = lex_.peek();
    if (t.kind == Token::Quoted ||
        (t.kind == Token::Word && !isKeyword(t.text))) {
      if (where) *where = t;
      *out = lex_.next().text;
      return true;
    }
    error(t, std::string("expected ") + what);
    return false;
  }

  // A value position: keywords are plain values here.
  bool value(std::string* out, Token* where) {
    const Token& t = lex_.peek();
    if (t.kind == Token::Word || t.kind == Token::Quoted) {
      if (where) *where = t;
      *out = lex_.next().text;
      return true;
    }
    error(t, "expected a member value");
    return false;
  }

  // dim.level, resolved; returns false on structural failure, leaves
  // *dim = -1 when only the resolution failed (parsing may continue).
  bool dimLevel(int* dim, LevelIndex* level) {
    std::string dimName, levelName;
    Token dimTok, levelTok;
    *dim = -1;
    *level = kNoLevel;
    if (!ident(&dimName, &dimTok, "a dimension name")) return false;
    if (!expectPunct('.')) return false;
    if (!ident(&levelName, &levelTok, "a level name")) return false;
    int d = cat_.findDimension(dimName);
    if (d < 0) {
      error(dimTok, "unknown dimension '" + dimName + "'");
      return true;
    }
    LevelIndex l = cat_.dimension(d).findLevel(levelName);
    if (l == kNoLevel) {
      error(levelTok, "dimension " + dimName + " has no level '" + levelName +
                          "'");
      return true;
    }
    *dim = d;
    *level = l;
    return true;
  }

  bool atom() {
    int dim;
    LevelIndex level;
    if (!dimLevel(&dim, &level)) return false;
    const Token& t = lex_.peek();
    if (t.kind == Token::Word && upper(t.text) == "IN") {
      lex_.next();
      if (!expectPunct('{')) return false;
      std::vector<MemberIndex> values;
      while (true) {
        std::string v;
        Token vt;
        if (!value(&v, &vt)) return false;
        if (dim >= 0) {
          const Dimension& d = cat_.dimension(dim);
          try {
            values.push_back(d.memberAtLevel(level, v));
          } catch (const Error& e) {
            error(vt, e.what());
          }
        }
        if (lex_.peek().kind == Token::Punct && lex_.peek().text == ",") {
          lex_.next();
          continue;
        }
        break;
      }
      if (!expectPunct('}')) return false;
      if (dim >= 0) {
        atoms_.push_back(Atom{dim, level, std::move(values)});
      }
      return true;
    }
    if (t.kind == Token::Op) {
      Token opTok = lex_.next();
      CmpOp op;
      if (opTok.text == "=") op = CmpOp::Eq;
      else if (opTok.text == "!=") op = CmpOp::Ne;
      else if (opTok.text == "<") op = CmpOp::Lt;
      else if (opTok.text == "<=") op = CmpOp::Le;
      else if (opTok.text == ">") op = CmpOp::Gt;
      else op = CmpOp::Ge;
      std::string v;
      Token vt;
      if (!value(&v, &vt)) return false;
      if (dim >= 0) {
        const Dimension& d = cat_.dimension(dim);
        try {
          MemberIndex m = d.memberAtLevel(level, v);
          if (op == CmpOp::Eq) {
            atoms_.push_back(Atom{dim, level, {m}});
          } else {
            atoms_.push_back(comparisonToDetailed(cat_, dim, level, op, m));
          }
        } catch (const Error& e) {
          error(vt, e.what());
        }
      }
      return true;
    }
    error(t, "expected IN or a comparison operator");
    return false;
  }

  bool measure() {
    std::string fnName, src, name;
    Token fnTok, srcTok, nameTok;
    if (!ident(&fnName, &fnTok, "an aggregate function")) return false;
    if (!expectPunct('(')) return false;
    if (!ident(&src, &srcTok, "a measure name")) return false;
    if (!expectPunct(')')) return false;
    if (!expectKeyword("AS")) return false;
    if (!ident(&name, &nameTok, "an output name")) return false;
    auto fn = parseAggFn(lower(fnName));
    if (!fn) {
      error(fnTok, "unknown aggregate function '" + fnName + "'");
      return true;
    }
    if (cat_.findMeasure(src) < 0) {
      error(srcTok, "dataset has no measure '" + src + "'");
      return true;
    }
    for (const AggMeasure& m : measures_) {
      if (m.name == name) {
        error(nameTok, "duplicate output name '" + name + "'");
        return true;
      }
    }
    measures_.push_back(AggMeasure{name, *fn, src});
    return true;
  }

  void parse() {
    if (!expectKeyword("QUERY")) return;
    if (!ident(&name_, nullptr, "a query name")) return;
    if (!expectKeyword("FROM")) return;
    Token dsTok;
    if (!ident(&dataset_, &dsTok, "a dataset name")) return;
    if (dataset_ != cat_.dataset().name) {
      error(dsTok, "unknown dataset '" + dataset_ + "' (catalog provides '" +
                       cat_.dataset().name + "')");
    }

    if (keyword("WHERE")) {
      if (!atom()) return;
      while (keyword("AND")) {
        if (!atom()) return;
      }
    }

    if (!expectKeyword("GROUP") || !expectKeyword("BY")) return;
    groupers_.assign(cat_.dimensionCount(), kNoLevel);
    while (true) {
      int dim;
      LevelIndex level;
      Token at = lex_.peek();
      if (!dimLevel(&dim, &level)) return;
      if (dim >= 0) {
        if (groupers_[dim] != kNoLevel) {
          error(at, "dimension " + cat_.dimension(dim).name() +
                        " grouped twice");
        } else {
          groupers_[dim] = level;
        }
      }
      if (lex_.peek().kind == Token::Punct && lex_.peek().text == ",") {
        lex_.next();
        continue;
      }
      break;
    }
    for (int dim = 0; dim < cat_.dimensionCount(); ++dim) {
      if (groupers_[dim] == kNoLevel) {
        groupers_[dim] = cat_.dimension(dim).top();
      }
    }

    if (!expectKeyword("AGG")) return;
    if (!measure()) return;
    while (lex_.peek().kind == Token::Punct && lex_.peek().text == ",") {
      lex_.next();
      if (!measure()) return;
    }

    const Token& t = lex_.peek();
    if (t.kind != Token::End) {
      error(t, "unexpected trailing input");
    }
  }

  const Catalog& cat_;
  std::vector<Diagnostic>* diags_;
  Lexer lex_;
  std::string name_, dataset_;
  std::vector<Atom> atoms_;
  std::vector<LevelIndex> groupers_;
  std::vector<AggMeasure> measures_;
};

std::string quoteValue(const std::string& v) {
  bool needs = v.empty() || !isWordStart(v[0]) || isKeyword(v);
  for (char c : v) {
    if (!isWordChar(c)) needs = true;
  }
  if (!needs) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string formatDiagnostics(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const Diagnostic& d : diags) {
    if (!out.empty()) out += "\n";
    out += std::to_string(d.line) + ":" + std::to_string(d.col) + ": " +
           d.message;
  }
  return out;
}

bool tryParseQuery(const std::string& text, const Catalog& cat, CubeQuery* out,
                   std::vector<Diagnostic>* diagnostics) {
  std::vector<Diagnostic> local;
  std::vector<Diagnostic>* diags = diagnostics ? diagnostics : &local;
  diags->clear();
  QueryParser p(text, cat, diags);
  return p.run(out);
}

CubeQuery parseQuery(const std::string& text, const Catalog& cat) {
  CubeQuery q;
  std::vector<Diagnostic> diags;
  if (!tryParseQuery(text, cat, &q, &diags)) {
    fail(ErrorKind::ParseError, formatDiagnostics(diags));
  }
  return q;
}

std::string serializeQuery(const Catalog& cat, const CubeQuery& q) {
  std::ostringstream out;
  out << "QUERY " << (q.name.empty() ? "q" : q.name) << " FROM " << q.dataset
      << "\nWHERE ";
  for (int dim = 0; dim < cat.dimensionCount(); ++dim) {
    const Dimension& d = cat.dimension(dim);
    const Atom& a = q.atoms[dim];
    if (dim) out << " AND ";
    out << d.name() << "." << d.levelName(a.level) << " IN {";
    for (size_t i = 0; i < a.values.size(); ++i) {
      if (i) out << ", ";
      out << quoteValue(d.memberValue(a.values[i]));
    }
    out << "}";
  }
  out << "\nGROUP BY ";
  for (int dim = 0; dim < cat.dimensionCount(); ++dim) {
    const Dimension& d = cat.dimension(dim);
    if (dim) out << ", ";
    out << d.name() << "." << d.levelName(q.groupers[dim]);
  }
  out << "\nAGG ";
  for (size_t j = 0; j < q.measures.size(); ++j) {
    const AggMeasure& m = q.measures[j];
    if (j) out << ", ";
    out << aggFnName(m.fn) << "(" << m.source << ") AS " << m.name;
  }
  out << "\n";
  return out.str();
}

// --- catalog files ----------------------------------------------------------

namespace {

struct DimDecl {
  std::string name;
  std::string file;  // empty means auto (from the fact column)
  bool ordered = false;
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::pair<std::string, std::string>> annotations;
};

struct Manifest {
  std::filesystem::path dir;
  std::string catalogName;
  char delimiter = ',';
  std::vector<DimDecl> dims;
  std::string factsName;
  std::string factsFile;
  std::vector<std::string> measures;

  DimDecl& dim(const std::string& name) {
    for (DimDecl& d : dims) {
      if (d.name == name) return d;
    }
    dims.push_back(DimDecl{name, "", false, {}, {}});
    return dims.back();
  }
};

std::string readFileOrFail(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Manifest parseManifest(const std::string& path) {
  Manifest m;
  m.dir = std::filesystem::path(path).parent_path();
  std::istringstream in(readFileOrFail(path));
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos) {
      fail(ErrorKind::ParseError,
           path + ":" + std::to_string(lineNo) + ": expected key = value");
    }
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    auto keyParts = splitList(key, '.');

    if (key == "catalog") {
      m.catalogName = value;
    } else if (key == "delimiter") {
      m.delimiter = (value == "tab") ? '\t' : (value.empty() ? ',' : value[0]);
    } else if (keyParts.size() >= 2 && keyParts[0] == "dimension") {
      DimDecl& d = m.dim(keyParts[1]);
      if (keyParts.size() == 2) {
        d.file = (value == "auto") ? "" : value;
        if (value.empty()) {
          fail(ErrorKind::ParseError,
               path + ":" + std::to_string(lineNo) + ": empty dimension file");
        }
      } else if (keyParts.size() == 3 && keyParts[2] == "ordered") {
        d.ordered = (value == "true" || value == "1" || value == "yes");
      } else if (keyParts.size() == 3 && keyParts[2] == "edges") {
        for (const std::string& e : splitList(value, ',')) {
          size_t lt = e.find('<');
          if (lt == std::string::npos) {
            fail(ErrorKind::ParseError,
                 path + ":" + std::to_string(lineNo) +
                     ": edge must look like Child<Parent");
          }
          d.edges.emplace_back(trim(e.substr(0, lt)), trim(e.substr(lt + 1)));
        }
      } else if (keyParts.size() == 4 && keyParts[2] == "annotation") {
        d.annotations.emplace_back(keyParts[3], value);
      } else {
        fail(ErrorKind::ParseError,
             path + ":" + std::to_string(lineNo) + ": unknown key " + key);
      }
    } else if (keyParts.size() >= 2 && keyParts[0] == "facts") {
      if (keyParts.size() == 2) {
        m.factsName = keyParts[1];
        m.factsFile = value;
      } else if (keyParts.size() == 3 && keyParts[2] == "measures") {
        m.factsName = keyParts[1];
        m.measures = splitList(value, ',');
      } else {
        fail(ErrorKind::ParseError,
             path + ":" + std::to_string(lineNo) + ": unknown key " + key);
      }
    } else {
      fail(ErrorKind::ParseError,
           path + ":" + std::to_string(lineNo) + ": unknown key " + key);
    }
  }
  if (m.dims.empty()) {
    fail(ErrorKind::ParseError, path + ": no dimensions declared");
  }
  if (m.factsFile.empty()) {
    fail(ErrorKind::ParseError, path + ": no fact file declared");
  }
  if (m.measures.empty()) {
    fail(ErrorKind::ParseError, path + ": no measures declared");
  }
  if (m.catalogName.empty()) m.catalogName = m.factsName;
  return m;
}

// One delimiter-separated row; double quotes protect fields, doubled quotes
// escape a quote character.  Unquoted fields are trimmed.
std::vector<std::string> splitRow(const std::string& line, char delim,
                                  const std::string& where) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false, wasQuoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && trim(field).empty() && !wasQuoted) {
      quoted = true;
      wasQuoted = true;
      field.clear();
    } else if (c == delim) {
      out.push_back(wasQuoted ? field : trim(field));
      field.clear();
      wasQuoted = false;
    } else {
      field += c;
    }
  }
  if (quoted) {
    fail(ErrorKind::ParseError, where + ": unterminated quoted field");
  }
  out.push_back(wasQuoted ? field : trim(field));
  return out;
}

std::vector<std::string> readLines(const std::string& path) {
  std::vector<std::string> lines;
  std::istringstream in(readFileOrFail(path));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

DimensionBuilder makeBuilderFromFile(const DimDecl& decl,
                                     const std::string& path, char delim) {
  DimensionBuilder b(decl.name);
  b.setOrdered(decl.ordered);
  auto lines = readLines(path);
  if (lines.empty()) {
    fail(ErrorKind::ParseError, path + ": empty dimension file");
  }
  auto header = splitRow(lines[0], delim, path + ":1");
  for (const std::string& levelName : header) {
    if (levelName.empty()) {
      fail(ErrorKind::ParseError, path + ":1: empty level name");
    }
    std::string annotation;
    for (const auto& [lvl, text] : decl.annotations) {
      if (lvl == levelName) annotation = text;
    }
    b.addLevel(levelName, annotation);
  }
  for (const auto& [lvl, text] : decl.annotations) {
    if (std::find(header.begin(), header.end(), lvl) == header.end() &&
        lvl != "ALL") {
      fail(ErrorKind::ParseError,
           path + ": annotation for unknown level " + lvl);
    }
  }

  // Without explicit edges the header order is taken as a chain.
  std::vector<std::pair<std::string, std::string>> edges = decl.edges;
  if (edges.empty()) {
    for (size_t i = 0; i + 1 < header.size(); ++i) {
      edges.emplace_back(header[i], header[i + 1]);
    }
  }
  struct EdgeColumns {
    size_t child, parent;
  };
  std::vector<EdgeColumns> edgeColumns;
  for (const auto& [child, parent] : edges) {
    b.addEdge(child, parent);
    size_t ci = std::find(header.begin(), header.end(), child) - header.begin();
    size_t pi = std::find(header.begin(), header.end(), parent) - header.begin();
    if (ci >= header.size() || pi >= header.size()) {
      fail(ErrorKind::ParseError,
           path + ": edge " + child + "<" + parent +
               " names a level missing from the header");
    }
    edgeColumns.push_back({ci, pi});
  }

  for (size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const std::string where = path + ":" + std::to_string(i + 1);
    auto row = splitRow(lines[i], delim, where);
    if (row.size() != header.size()) {
      fail(ErrorKind::ParseError,
           where + ": expected " + std::to_string(header.size()) +
               " fields, found " + std::to_string(row.size()));
    }
    for (size_t c = 0; c < row.size(); ++c) {
      if (row[c].empty()) {
        fail(ErrorKind::ParseError, where + ": empty member value");
      }
      b.addMember(header[c], row[c]);
    }
    for (size_t e = 0; e < edges.size(); ++e) {
      b.setAncestor(edges[e].first, edges[e].second, row[edgeColumns[e].child],
                    row[edgeColumns[e].parent]);
    }
  }
  b.ensureAllLevel();
  return b;
}

double parseMeasureField(const std::string& field, const std::string& where) {
  if (field.empty()) return std::numeric_limits<double>::quiet_NaN();
  const char* begin = field.data();
  const char* end = begin + field.size();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    fail(ErrorKind::ParseError,
         where + ": '" + field + "' is not a number");
  }
  return v;
}

DetailedDataset loadFacts(const Manifest& m, const std::vector<Dimension>& dims,
                          const std::string& path) {
  DetailedDataset ds;
  ds.name = m.factsName;
  ds.measures = m.measures;
  auto lines = readLines(path);
  if (lines.empty()) fail(ErrorKind::ParseError, path + ": empty fact file");
  auto header = splitRow(lines[0], m.delimiter, path + ":1");
  const size_t n = dims.size(), k = m.measures.size();
  if (header.size() != n + k) {
    fail(ErrorKind::ParseError,
         path + ":1: expected " + std::to_string(n + k) + " columns (" +
             std::to_string(n) + " dimensions + " + std::to_string(k) +
             " measures), found " + std::to_string(header.size()));
  }
  for (size_t i = 0; i < n; ++i) {
    if (header[i] != dims[i].name()) {
      fail(ErrorKind::ParseError,
           path + ":1: column " + std::to_string(i + 1) + " is '" + header[i] +
               "', expected dimension " + dims[i].name());
    }
  }
  for (size_t j = 0; j < k; ++j) {
    if (header[n + j] != m.measures[j]) {
      fail(ErrorKind::ParseError,
           path + ":1: column " + std::to_string(n + j + 1) + " is '" +
               header[n + j] + "', expected measure " + m.measures[j]);
    }
  }

  for (size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const std::string where = path + ":" + std::to_string(i + 1);
    auto row = splitRow(lines[i], m.delimiter, where);
    if (row.size() != n + k) {
      fail(ErrorKind::ParseError,
           where + ": expected " + std::to_string(n + k) + " fields, found " +
               std::to_string(row.size()));
    }
    Cell cell;
    cell.coords.resize(n);
    for (size_t d = 0; d < n; ++d) {
      try {
        cell.coords[d] = dims[d].memberAtLevel(dims[d].bottom(), row[d]);
      } catch (const Error& e) {
        fail(e.kind(), where + ": " + e.what());
      }
    }
    cell.measures.reserve(k);
    for (size_t j = 0; j < k; ++j) {
      cell.measures.push_back(parseMeasureField(row[n + j], where));
    }
    ds.cells.push_back(std::move(cell));
  }
  return ds;
}

// Degenerate dimensions declared `auto` take their members from the fact
// column, in first-appearance order.
DimensionBuilder makeAutoBuilder(const DimDecl& decl, const Manifest& m,
                                 size_t column, const std::string& factsPath) {
  DimensionBuilder b(decl.name);
  b.setOrdered(decl.ordered);
  b.addLevel(decl.name);
  auto lines = readLines(factsPath);
  for (size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto row = splitRow(lines[i], m.delimiter,
                        factsPath + ":" + std::to_string(i + 1));
    if (column < row.size()) b.addMember(decl.name, row[column]);
  }
  b.ensureAllLevel();
  return b;
}

std::vector<DimensionBuilder> makeBuilders(const Manifest& m) {
  std::vector<DimensionBuilder> builders;
  for (size_t i = 0; i < m.dims.size(); ++i) {
    const DimDecl& decl = m.dims[i];
    if (decl.file.empty()) {
      builders.push_back(
          makeAutoBuilder(decl, m, i, (m.dir / m.factsFile).string()));
    } else {
      builders.push_back(makeBuilderFromFile(
          decl, (m.dir / decl.file).string(), m.delimiter));
    }
  }
  return builders;
}

}  // namespace

Catalog loadCatalog(const std::string& manifestPath) {
  Manifest m = parseManifest(manifestPath);
  std::vector<Dimension> dims;
  for (const DimensionBuilder& b : makeBuilders(m)) {
    dims.push_back(b.build());
  }
  DetailedDataset ds = loadFacts(m, dims, (m.dir / m.factsFile).string());
  return Catalog(m.catalogName, std::move(dims), std::move(ds));
}

CatalogReport validateCatalogFiles(const std::string& manifestPath) {
  CatalogReport report;
  Manifest m = parseManifest(manifestPath);
  auto builders = makeBuilders(m);
  for (const DimensionBuilder& b : builders) {
    auto v = b.validate();
    report.violations.insert(report.violations.end(), v.begin(), v.end());
  }
  if (!report.violations.empty()) return report;
  std::vector<Dimension> dims;
  for (const DimensionBuilder& b : builders) dims.push_back(b.build());
  try {
    DetailedDataset ds = loadFacts(m, dims, (m.dir / m.factsFile).string());
    Catalog(m.catalogName, std::move(dims), std::move(ds));
  } catch (const Error& e) {
    report.dataFaults.push_back(e.what());
  }
  return report;
}

CubeQuery loadQueryFile(const std::string& path, const Catalog& cat) {
  try {
    return parseQuery(readFileOrFail(path), cat);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ParseError) throw;
    fail(ErrorKind::ParseError, path + ":" + std::string(e.what()));
  }
}

// --- result files -----------------------------------------------------------

std::string formatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

namespace {

std::string csvField(const std::string& v, char delim) {
  bool needs = v.find(delim) != std::string::npos ||
               v.find('"') != std::string::npos ||
               v.find('\n') != std::string::npos ||
               (!v.empty() && (v.front() == ' ' || v.back() == ' '));
  if (!needs) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void writeResultFile(std::ostream& out, const Catalog& cat,
                     const QueryResult& result) {
  out << "# cube-result v1\n";
  out << "# dataset " << result.dataset << "\n";
  out << "# levels ";
  for (size_t d = 0; d < result.levels.size(); ++d) {
    if (d) out << ",";
    out << cat.dimension(static_cast<int>(d)).name() << "."
        << cat.dimension(static_cast<int>(d)).levelName(result.levels[d]);
  }
  out << "\n# measures ";
  for (size_t j = 0; j < result.measureNames.size(); ++j) {
    if (j) out << ",";
    out << result.measureNames[j];
  }
  out << "\n";
  for (const ResultCell& cell : result.cells) {
    for (size_t d = 0; d < cell.coords.size(); ++d) {
      if (d) out << ",";
      out << csvField(
          cat.dimension(static_cast<int>(d)).memberValue(cell.coords[d]), ',');
    }
    for (double v : cell.measures) {
      out << "," << (std::isnan(v) ? "" : formatDouble(v));
    }
    out << "\n";
  }
}

QueryResult readResultFile(std::istream& in, const Catalog& cat) {
  QueryResult r;
  std::string line;
  if (!std::getline(in, line) || trim(line) != "# cube-result v1") {
    fail(ErrorKind::ParseError, "result file: missing '# cube-result v1' header");
  }
  if (!std::getline(in, line) || line.rfind("# dataset ", 0) != 0) {
    fail(ErrorKind::ParseError, "result file: missing '# dataset' header");
  }
  r.dataset = trim(line.substr(10));
  if (!std::getline(in, line) || line.rfind("# levels ", 0) != 0) {
    fail(ErrorKind::ParseError, "result file: missing '# levels' header");
  }
  auto levelRefs = splitList(trim(line.substr(9)), ',');
  if (static_cast<int>(levelRefs.size()) != cat.dimensionCount()) {
    fail(ErrorKind::ParseError,
         "result file: expected one level per catalog dimension");
  }
  for (int d = 0; d < cat.dimensionCount(); ++d) {
    size_t dot = levelRefs[d].find('.');
    if (dot == std::string::npos) {
      fail(ErrorKind::ParseError,
           "result file: level reference '" + levelRefs[d] +
               "' must be Dimension.Level");
    }
    std::string dimName = levelRefs[d].substr(0, dot);
    if (dimName != cat.dimension(d).name()) {
      fail(ErrorKind::ParseError,
           "result file: column " + std::to_string(d + 1) + " is for '" +
               dimName + "', expected " + cat.dimension(d).name());
    }
    r.levels.push_back(cat.dimension(d).level(levelRefs[d].substr(dot + 1)));
  }
  if (!std::getline(in, line) || line.rfind("# measures ", 0) != 0) {
    fail(ErrorKind::ParseError, "result file: missing '# measures' header");
  }
  r.measureNames = splitList(trim(line.substr(11)), ',');

  const size_t n = static_cast<size_t>(cat.dimensionCount());
  const size_t k = r.measureNames.size();
  int lineNo = 4;
  while (std::getline(in, line)) {
    ++lineNo;
    if (trim(line).empty()) continue;
    auto row = splitRow(line, ',', "result file:" + std::to_string(lineNo));
    if (row.size() != n + k) {
      fail(ErrorKind::ParseError,
           "result file:" + std::to_string(lineNo) + ": expected " +
               std::to_string(n + k) + " fields, found " +
               std::to_string(row.size()));
    }
    ResultCell cell;
    cell.coords.resize(n);
    for (size_t d = 0; d < n; ++d) {
      cell.coords[d] =
          cat.dimension(static_cast<int>(d)).memberAtLevel(r.levels[d], row[d]);
    }
    for (size_t j = 0; j < k; ++j) {
      cell.measures.push_back(parseMeasureField(
          row[n + j], "result file:" + std::to_string(lineNo)));
    }
    r.cells.push_back(std::move(cell));
  }
  std::sort(r.cells.begin(), r.cells.end(),
            [](const ResultCell& a, const ResultCell& b) {
              return a.coords < b.coords;
            });
  for (size_t i = 1; i < r.cells.size(); ++i) {
    if (r.cells[i].coords == r.cells[i - 1].coords) {
      fail(ErrorKind::DuplicateCoordinates,
           "result file: two rows share the same coordinates");
    }
  }
  return r;
}

}  // namespace cubealg
