#ifndef IQA_QGROUP_HPP
#define IQA_QGROUP_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "iqa/ncpoly.hpp"

namespace iqa {

struct BudgetExceeded : MathError {
  explicit BudgetExceeded(const std::string& what) : MathError(what) {}
};

struct OracleOptions {
  // Components whose raw word count stays below this bound are reduced with
  // the per-weight echelon cache; larger ones go through the truncated
  // Groebner-Shirshov rewriting engine.
  std::size_t echelonMaxWords = 600;
  // Abort threshold: no component taller than this is ever reduced.
  int maxComponentHeight = 30;
  // Word-count abort threshold for a single weight component (spec budget).
  std::size_t maxComponentWords = 50000000;
  std::string cacheDir;  // empty: no disk cache
};

/// Side word: sequence of node indices (one char per letter) inside U^+ / U^-.
using SideWord = std::u32string;
/// Combination of side words of one weight.
using SideComb = std::map<SideWord, RationalFunc, DegLexLess>;

/// Triangular normal-form term F_w * K-monomial * E_u.
struct NFTerm {
  SideWord f;
  std::vector<int> kexp;  // size 2n: exponents of Kt_i then Ktp_i
  SideWord e;
  RationalFunc coeff;
};

struct NormalForm {
  std::vector<NFTerm> terms;
  bool isZero() const { return terms.empty(); }
  NCPoly toPoly(const SatakeDiagram& d) const;
};

/// Reduction engine for one side of the triangular decomposition. The E and
/// F Serre ideals have the same shape, so a single instance serves both.
class SideReducer {
 public:
  SideReducer(const SatakeDiagram& d, const OracleOptions& opts);
  ~SideReducer();

  /// Canonical form of a single word modulo the Serre ideal (memoized).
  const SideComb& reduceWord(const SideWord& w);
  SideComb reduceComb(const SideComb& comb);

  /// Raw word count of the weight component containing w.
  static double componentWordCount(const IntVec& weight);

  std::size_t peakComponentWords() const { return peakWords_; }
  std::size_t basisSize() const;
  std::size_t echelonComponents() const;

  /// Component dimension probe used by tests: number of irreducible words
  /// of the given weight (enumerates the component; small weights only).
  std::vector<SideWord> irreducibleWords(const IntVec& weight);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::size_t peakWords_ = 0;
};

/// The Drinfeld double quantum group of the diagram with its equality oracle.
class UAlgebra {
 public:
  explicit UAlgebra(const SatakeDiagram& d, OracleOptions opts = {});

  const SatakeDiagram& diagram() const { return d_; }
  const OracleOptions& options() const { return opts_; }

  // Packed normal-form representation: key encodes (f, kvec, e).
  using NF = std::map<std::u32string, RationalFunc>;

  static std::u32string packKey(const SideWord& f, const std::vector<int>& k, const SideWord& e);
  void unpackKey(const std::u32string& key, SideWord& f, std::vector<int>& k, SideWord& e) const;

  NF nfScalar(const RationalFunc& c) const;
  NF nfGenerator(GenSymbol s) const;
  NF nfMul(const NF& a, const NF& b);
  NF nfAdd(NF a, const NF& b) const;
  void nfScale(NF& a, const RationalFunc& c) const;

  /// Straighten + Serre-reduce an NCPoly over the U alphabet.
  NF nfFromPoly(const NCPoly& p);

  NormalForm toNormalForm(const NF& nf) const;
  NormalForm straighten(const NCPoly& p);  // spec operation

  bool uIsZero(const NCPoly& p);
  bool uEqual(const NCPoly& a, const NCPoly& b);
  bool nfIsZero(const NF& nf) const { return nf.empty(); }

  /// Reduce a one-weight combination in the + or - half (spec operation).
  NCPoly serreReduceSide(bool plusSide, const NCPoly& sideComb);

  /// Lusztig braid automorphism T_i (direction -: inverse).
  NCPoly lusztigT(int i, bool inverse, const NCPoly& x);

  /// Anti-automorphism fixing E_i, F_i and swapping Kt_i <-> Ktp_i.
  NCPoly sigmaU(const NCPoly& x) const;

  std::size_t peakComponentWords() const;

 private:
  struct CrossTerm {
    bool hasF;
    std::vector<int> kexp;
    SideWord e;
    RationalFunc c;
  };
  const std::vector<CrossTerm>& crossOneF(const SideWord& e, int b);
  // E_e * F_f as sum of F * K * E triples.
  struct CrossFull {
    SideWord f;
    std::vector<int> kexp;
    SideWord e;
    RationalFunc c;
  };
  const std::vector<CrossFull>& crossing(const SideWord& e, const SideWord& f);

  std::int64_t cartanPair(const std::vector<int>& kexp, const IntVec& weight) const;
  IntVec sideWeight(const SideWord& w) const;

  SatakeDiagram d_;
  OracleOptions opts_;
  std::shared_ptr<SideReducer> reducer_;
  std::map<std::pair<std::u32string, int>, std::vector<CrossTerm>> crossMemo_;
  std::map<std::pair<std::u32string, std::u32string>, std::vector<CrossFull>> crossFullMemo_;
  std::mutex mu_;
};

}  // namespace iqa

#endif
