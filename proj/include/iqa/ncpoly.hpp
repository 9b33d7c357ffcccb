#ifndef IQA_NCPOLY_HPP
#define IQA_NCPOLY_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "iqa/satake.hpp"

namespace iqa {

enum class SymKind : std::uint8_t {
  E, F, Kt, Ktp, KtI, KtpI,   // double quantum group
  B, Kb, KbI,                 // iquantum group
  Bk, Th, ThA, H, Cc, CcI     // Drinfeld generators
};

/// One indexed generator symbol packed into 32 bits.
struct GenSymbol {
  SymKind kind;
  int node = 0;
  int aux = 0;  // loop index k (Bk) or m (Th/ThA/H)

  char32_t pack() const;
  static GenSymbol unpack(char32_t c);
  std::string str() const;
  bool operator==(const GenSymbol& o) const { return pack() == o.pack(); }
};

using Word = std::u32string;

Word wordOf(std::initializer_list<GenSymbol> syms);
std::string wordStr(const Word& w);

/// Degree-lexicographic word order; the canonical term order everywhere.
struct DegLexLess {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

enum class AlphabetKind { UAlg, IAlg, Drinfeld, Any };

bool symbolAllowed(AlphabetKind a, SymKind k);

/// Sparse noncommutative polynomial over Q(v).
class NCPoly {
 public:
  using TermMap = std::map<Word, RationalFunc, DegLexLess>;

  NCPoly() = default;
  explicit NCPoly(const RationalFunc& c);
  static NCPoly one() { return NCPoly(RationalFunc(1)); }
  static NCPoly gen(GenSymbol s);
  static NCPoly monomial(const Word& w, const RationalFunc& c);

  const TermMap& terms() const { return t_; }
  bool isZero() const { return t_.empty(); }
  std::size_t termCount() const { return t_.size(); }
  int maxWordLen() const;

  void addTerm(const Word& w, const RationalFunc& c);

  NCPoly operator-() const;
  NCPoly& operator+=(const NCPoly& o);
  NCPoly& operator-=(const NCPoly& o);
  friend NCPoly operator+(NCPoly a, const NCPoly& b) { return a += b; }
  friend NCPoly operator-(NCPoly a, const NCPoly& b) { return a -= b; }
  friend NCPoly operator*(const NCPoly& a, const NCPoly& b);
  NCPoly& operator*=(const NCPoly& o) { return *this = *this * o; }
  friend NCPoly operator*(const RationalFunc& c, const NCPoly& a);
  bool operator==(const NCPoly& o) const { return t_ == o.t_; }
  bool operator!=(const NCPoly& o) const { return !(*this == o); }

  std::string str() const;

 private:
  TermMap t_;
};

/// [x,y]_{v^a} = x*y - v^a * y*x.
NCPoly qbracket(const NCPoly& x, const NCPoly& y, int a);

/// Formal Z*I weight of a word: E_i -> +alpha_i, F_i/B-type -> -alpha_i,
/// Cartan-type symbols -> 0. Throws on symbols with no declared weight.
IntVec weightOf(const SatakeDiagram& d, const Word& w);
bool isWeightHomogeneous(const SatakeDiagram& d, const NCPoly& p, IntVec* weightOut = nullptr);

struct ParseError : MathError {
  ParseError(const std::string& what, std::size_t pos)
      : MathError(what + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

/// Parses the expression grammar:
///   expr := term (('+'|'-') term)*
///   term := factor (('*'|'/') factor)*
///   factor := scalar | symbol | bracket | '(' expr ')' | factor '^' int
///   bracket := '[' expr ',' expr ']' ('_' '{' 'v' '^' int '}')?
NCPoly parseExpr(const std::string& text, const SatakeDiagram& d, AlphabetKind alphabet);

/// Canonical rendering; parseExpr(format(p)) == p.
std::string format(const NCPoly& p);

/// Convenience: parse a pure scalar literal.
RationalFunc parseScalar(const std::string& text);

}  // namespace iqa

#endif
