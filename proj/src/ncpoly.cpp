#include "iqa/ncpoly.hpp"

#include <cctype>
#include <sstream>

namespace iqa {

char32_t GenSymbol::pack() const {
  return static_cast<char32_t>((static_cast<std::uint32_t>(kind) << 16) |
                               (static_cast<std::uint32_t>(node & 0xff) << 8) |
                               static_cast<std::uint32_t>((aux + 128) & 0xff));
}

GenSymbol GenSymbol::unpack(char32_t c) {
  GenSymbol s;
  s.kind = static_cast<SymKind>((c >> 16) & 0xff);
  s.node = static_cast<int>((c >> 8) & 0xff);
  s.aux = static_cast<int>(c & 0xff) - 128;
  return s;
}

std::string GenSymbol::str() const {
  std::ostringstream os;
  switch (kind) {
    case SymKind::E: os << "E(" << node << ")"; break;
    case SymKind::F: os << "F(" << node << ")"; break;
    case SymKind::Kt: os << "Kt(" << node << ")"; break;
    case SymKind::Ktp: os << "Ktp(" << node << ")"; break;
    case SymKind::KtI: os << "Kt(" << node << ")^-1"; break;
    case SymKind::KtpI: os << "Ktp(" << node << ")^-1"; break;
    case SymKind::B: os << "B(" << node << ")"; break;
    case SymKind::Kb: os << "K(" << node << ")"; break;
    case SymKind::KbI: os << "K(" << node << ")^-1"; break;
    case SymKind::Bk: os << "B(" << node << "," << aux << ")"; break;
    case SymKind::Th: os << "Th(" << node << "," << aux << ")"; break;
    case SymKind::ThA: os << "Tha(" << node << "," << aux << ")"; break;
    case SymKind::H: os << "H(" << node << "," << aux << ")"; break;
    case SymKind::Cc: os << "C"; break;
    case SymKind::CcI: os << "C^-1"; break;
  }
  return os.str();
}

Word wordOf(std::initializer_list<GenSymbol> syms) {
  Word w;
  for (const auto& s : syms) w.push_back(s.pack());
  return w;
}

std::string wordStr(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += "*";
    out += GenSymbol::unpack(w[i]).str();
  }
  return out;
}

bool symbolAllowed(AlphabetKind a, SymKind k) {
  switch (a) {
    case AlphabetKind::Any:
      return true;
    case AlphabetKind::UAlg:
      return k == SymKind::E || k == SymKind::F || k == SymKind::Kt || k == SymKind::Ktp ||
             k == SymKind::KtI || k == SymKind::KtpI;
    case AlphabetKind::IAlg:
      return k == SymKind::B || k == SymKind::Kb || k == SymKind::KbI;
    case AlphabetKind::Drinfeld:
      return k == SymKind::Bk || k == SymKind::Th || k == SymKind::ThA || k == SymKind::H ||
             k == SymKind::Kb || k == SymKind::KbI || k == SymKind::Cc || k == SymKind::CcI;
  }
  return false;
}

NCPoly::NCPoly(const RationalFunc& c) {
  if (!c.isZero()) t_.emplace(Word(), c);
}

NCPoly NCPoly::gen(GenSymbol s) {
  NCPoly p;
  Word w;
  w.push_back(s.pack());
  p.t_.emplace(std::move(w), RationalFunc(1));
  return p;
}

NCPoly NCPoly::monomial(const Word& w, const RationalFunc& c) {
  NCPoly p;
  if (!c.isZero()) p.t_.emplace(w, c);
  return p;
}

int NCPoly::maxWordLen() const {
  int m = 0;
  for (const auto& [w, c] : t_) m = std::max<int>(m, static_cast<int>(w.size()));
  return m;
}

void NCPoly::addTerm(const Word& w, const RationalFunc& c) {
  if (c.isZero()) return;
  auto [it, inserted] = t_.emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.isZero()) t_.erase(it);
  }
}

NCPoly NCPoly::operator-() const {
  NCPoly r = *this;
  for (auto& [w, c] : r.t_) c = -c;
  return r;
}

NCPoly& NCPoly::operator+=(const NCPoly& o) {
  for (const auto& [w, c] : o.t_) addTerm(w, c);
  return *this;
}

NCPoly& NCPoly::operator-=(const NCPoly& o) {
  for (const auto& [w, c] : o.t_) addTerm(w, -c);
  return *this;
}

NCPoly operator*(const NCPoly& a, const NCPoly& b) {
  NCPoly r;
  for (const auto& [wa, ca] : a.t_)
    for (const auto& [wb, cb] : b.t_) r.addTerm(wa + wb, ca * cb);
  return r;
}

NCPoly operator*(const RationalFunc& c, const NCPoly& a) {
  NCPoly r;
  if (c.isZero()) return r;
  for (const auto& [w, x] : a.terms()) r.addTerm(w, c * x);
  return r;
}

std::string NCPoly::str() const { return format(*this); }

NCPoly qbracket(const NCPoly& x, const NCPoly& y, int a) {
  return x * y - vpow(a) * (y * x);
}

IntVec weightOf(const SatakeDiagram& d, const Word& w) {
  IntVec wt = IntVec::Zero(d.n);
  for (char32_t c : w) {
    GenSymbol s = GenSymbol::unpack(c);
    if (s.node < 0 || s.node >= d.n) throw MathError("symbol node out of range: " + s.str());
    switch (s.kind) {
      case SymKind::E: wt(s.node) += 1; break;
      case SymKind::F: wt(s.node) -= 1; break;
      case SymKind::B:
      case SymKind::Bk: wt(s.node) -= 1; break;  // associated-graded degree
      case SymKind::Kt:
      case SymKind::Ktp:
      case SymKind::KtI:
      case SymKind::KtpI:
      case SymKind::Kb:
      case SymKind::KbI:
      case SymKind::Th:
      case SymKind::ThA:
      case SymKind::H:
      case SymKind::Cc:
      case SymKind::CcI: break;
    }
  }
  return wt;
}

bool isWeightHomogeneous(const SatakeDiagram& d, const NCPoly& p, IntVec* weightOut) {
  bool first = true;
  IntVec wt;
  for (const auto& [w, c] : p.terms()) {
    IntVec x = weightOf(d, w);
    if (first) {
      wt = x;
      first = false;
    } else if (x != wt) {
      return false;
    }
  }
  if (!first && weightOut) *weightOut = wt;
  return true;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Lexer {
  const std::string& s;
  std::size_t pos = 0;

  void skipWs() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  char peek() {
    skipWs();
    return pos < s.size() ? s[pos] : '\0';
  }
  char get() {
    skipWs();
    return pos < s.size() ? s[pos++] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) throw ParseError(std::string("expected '") + c + "'", pos);
  }
  long integer() {
    skipWs();
    std::size_t start = pos;
    bool neg = false;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
      neg = s[pos] == '-';
      ++pos;
    }
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      throw ParseError("expected integer", start);
    long val = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      val = val * 10 + (s[pos] - '0');
      ++pos;
    }
    return neg ? -val : val;
  }
  std::string ident() {
    skipWs();
    std::size_t start = pos;
    while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw ParseError("expected identifier", start);
    return s.substr(start, pos - start);
  }
};

struct Parser {
  Lexer lex;
  const SatakeDiagram& d;
  AlphabetKind alphabet;

  NCPoly expr() {
    NCPoly acc = term();
    while (true) {
      char c = lex.peek();
      if (c == '+') {
        lex.get();
        acc += term();
      } else if (c == '-') {
        lex.get();
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  NCPoly term() {
    NCPoly acc = factor();
    while (true) {
      char c = lex.peek();
      if (c == '*') {
        lex.get();
        acc = acc * factor();
      } else if (c == '/') {
        lex.get();
        NCPoly rhs = factor();
        acc = acc * NCPoly(scalarOf(rhs, "division").inverse());
      } else if (c == '(' || c == '[' || std::isalpha(static_cast<unsigned char>(c)) ||
                 std::isdigit(static_cast<unsigned char>(c))) {
        // implicit product, e.g. "2 B(1)"
        acc = acc * factor();
      } else {
        return acc;
      }
    }
  }

  RationalFunc scalarOf(const NCPoly& p, const char* what) {
    if (p.isZero()) return RationalFunc(0);
    if (p.termCount() == 1 && p.terms().begin()->first.empty()) return p.terms().begin()->second;
    throw ParseError(std::string(what) + " requires a scalar operand", lex.pos);
  }

  NCPoly factor() {
    NCPoly base = atom();
    while (lex.peek() == '^') {
      lex.get();
      long e = lex.integer();
      base = power(base, e);
    }
    return base;
  }

  NCPoly power(const NCPoly& base, long e) {
    if (e == 0) return NCPoly::one();
    // Single-symbol words may invert if the symbol has an inverse kind.
    if (e < 0) {
      if (base.termCount() == 1) {
        const auto& [w, c] = *base.terms().begin();
        if (w.empty()) return NCPoly(pow(c, e));
        if (w.size() == 1) {
          GenSymbol s = GenSymbol::unpack(w[0]);
          GenSymbol inv = s;
          bool ok = true;
          switch (s.kind) {
            case SymKind::Kt: inv.kind = SymKind::KtI; break;
            case SymKind::Ktp: inv.kind = SymKind::KtpI; break;
            case SymKind::KtI: inv.kind = SymKind::Kt; break;
            case SymKind::KtpI: inv.kind = SymKind::Ktp; break;
            case SymKind::Kb: inv.kind = SymKind::KbI; break;
            case SymKind::KbI: inv.kind = SymKind::Kb; break;
            case SymKind::Cc: inv.kind = SymKind::CcI; break;
            case SymKind::CcI: inv.kind = SymKind::Cc; break;
            default: ok = false;
          }
          if (ok) {
            NCPoly r = NCPoly(pow(c, e));
            for (long k = 0; k < -e; ++k) r = r * NCPoly::gen(inv);
            return r;
          }
        }
      }
      throw ParseError("negative power of a non-invertible factor", lex.pos);
    }
    NCPoly r = NCPoly::one();
    for (long k = 0; k < e; ++k) r = r * base;
    return r;
  }

  static RationalFunc pow(const RationalFunc& c, long e) {
    RationalFunc r(1);
    RationalFunc b = e < 0 ? c.inverse() : c;
    for (long k = 0; k < std::abs(e); ++k) r = r * b;
    return r;
  }

  NCPoly atom() {
    char c = lex.peek();
    if (c == '(') {
      lex.get();
      NCPoly e = expr();
      lex.expect(')');
      return e;
    }
    if (c == '[') {
      lex.get();
      NCPoly x = expr();
      lex.expect(',');
      NCPoly y = expr();
      lex.expect(']');
      int a = 0;
      if (lex.peek() == '_') {
        lex.get();
        lex.expect('{');
        std::string id = lex.ident();
        if (id != "v") throw ParseError("expected v in bracket subscript", lex.pos);
        lex.expect('^');
        a = static_cast<int>(lex.integer());
        lex.expect('}');
      }
      return qbracket(x, y, a);
    }
    if (c == '-') {
      lex.get();
      return -atom();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      long n = lex.integer();
      return NCPoly(RationalFunc(Rat(static_cast<long>(n))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string id = lex.ident();
      if (id == "v") return NCPoly(RationalFunc::v());
      return symbolAtom(id);
    }
    throw ParseError("unexpected character", lex.pos);
  }

  NCPoly symbolAtom(const std::string& id) {
    if (id == "C") {
      checkAllowed(SymKind::Cc);
      return NCPoly::gen(GenSymbol{SymKind::Cc, 0, 0});
    }
    lex.expect('(');
    long a = lex.integer();
    bool hasSecond = false;
    long b = 0;
    if (lex.eat(',')) {
      hasSecond = true;
      b = lex.integer();
    }
    lex.expect(')');
    GenSymbol s;
    s.node = static_cast<int>(a);
    s.aux = static_cast<int>(b);
    if (id == "E") s.kind = SymKind::E;
    else if (id == "F") s.kind = SymKind::F;
    else if (id == "Kt") s.kind = SymKind::Kt;
    else if (id == "Ktp") s.kind = SymKind::Ktp;
    else if (id == "K") s.kind = SymKind::Kb;
    else if (id == "B") s.kind = hasSecond ? SymKind::Bk : SymKind::B;
    else if (id == "Th") s.kind = SymKind::Th;
    else if (id == "Tha") s.kind = SymKind::ThA;
    else if (id == "H") s.kind = SymKind::H;
    else throw ParseError("unknown symbol '" + id + "'", lex.pos);
    bool needsAux = s.kind == SymKind::Bk || s.kind == SymKind::Th || s.kind == SymKind::ThA || s.kind == SymKind::H;
    if (needsAux != hasSecond) throw ParseError("wrong index arity for '" + id + "'", lex.pos);
    if (s.node < 0 || s.node >= d.n) throw ParseError("node index out of range", lex.pos);
    checkAllowed(s.kind);
    return NCPoly::gen(s);
  }

  void checkAllowed(SymKind k) {
    if (!symbolAllowed(alphabet, k)) throw ParseError("symbol not in this algebra's alphabet", lex.pos);
  }
};

}  // namespace

NCPoly parseExpr(const std::string& text, const SatakeDiagram& d, AlphabetKind alphabet) {
  Parser p{Lexer{text}, d, alphabet};
  NCPoly r = p.expr();
  p.lex.skipWs();
  if (p.lex.pos != text.size()) throw ParseError("trailing input", p.lex.pos);
  return r;
}

RationalFunc parseScalar(const std::string& text) {
  SatakeDiagram dummy = buildDiagram(Family::SplitA1, 1);
  NCPoly p = parseExpr(text, dummy, AlphabetKind::Any);
  if (p.isZero()) return RationalFunc(0);
  if (p.termCount() == 1 && p.terms().begin()->first.empty()) return p.terms().begin()->second;
  throw MathError("expected a scalar literal");
}

std::string format(const NCPoly& p) {
  if (p.isZero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const Word& w = it->first;
    const RationalFunc& c = it->second;
    std::string cs = c.str();
    bool negated = false;
    if (!cs.empty() && cs[0] == '-' && cs.find(" + ") == std::string::npos &&
        cs.find(" - ") == std::string::npos) {
      negated = true;
      cs = cs.substr(1);
    }
    if (first) {
      if (negated) os << "-";
    } else {
      os << (negated ? " - " : " + ");
    }
    first = false;
    bool wrap = cs.find(' ') != std::string::npos || cs.find('/') != std::string::npos;
    bool coeffIsOne = !wrap && cs == "1";
    if (w.empty()) {
      os << (wrap ? "(" + cs + ")" : cs);
      continue;
    }
    if (!coeffIsOne) os << (wrap ? "(" + cs + ")" : cs) << "*";
    os << wordStr(w);
  }
  return os.str();
}

}  // namespace iqa
