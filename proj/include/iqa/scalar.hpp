#ifndef IQA_SCALAR_HPP
#define IQA_SCALAR_HPP

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace iqa {

using Rat = mpq_class;

struct MathError : std::runtime_error {
  explicit MathError(const std::string& what) : std::runtime_error(what) {}
};

/// Laurent polynomial in v with exact rational coefficients.
/// Stored densely as coefficients of v^{lo}, v^{lo+1}, ... with nonzero ends.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(int n) : LaurentPoly(Rat(n)) {}  // NOLINT: implicit by design
  LaurentPoly(const Rat& r) {
    if (r != 0) {
      lo_ = 0;
      c_.push_back(r);
    }
  }
  static LaurentPoly monomial(const Rat& coeff, int exp) {
    LaurentPoly p;
    if (coeff != 0) {
      p.lo_ = exp;
      p.c_.push_back(coeff);
    }
    return p;
  }
  static LaurentPoly v(int exp = 1) { return monomial(1, exp); }

  bool isZero() const { return c_.empty(); }
  bool isOne() const { return c_.size() == 1 && lo_ == 0 && c_[0] == 1; }
  int lowExp() const { return lo_; }
  int highExp() const { return lo_ + static_cast<int>(c_.size()) - 1; }
  const Rat& leading() const;  // coefficient of highExp
  Rat coeff(int exp) const;
  int termCount() const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
  bool operator==(const LaurentPoly& o) const { return eq(o); }
  bool operator!=(const LaurentPoly& o) const { return !eq(o); }

  /// Exact division; throws MathError if the division leaves a remainder.
  friend LaurentPoly divExact(const LaurentPoly& a, const LaurentPoly& b);

  /// Evaluate at a nonzero rational (nonzero required when lo < 0).
  Rat eval(const Rat& x) const;

  /// Content (gcd of coefficients, sign of leading) and primitive part.
  Rat content() const;

  /// Primitive gcd with positive leading coefficient and lowExp 0.
  friend LaurentPoly gcd(const LaurentPoly& a, const LaurentPoly& b);

  std::string str() const;

  /// v^k * this.
  LaurentPoly shifted(int k) const;

  /// this(v) -> this(v^{-1}).
  LaurentPoly barInvolution() const;

  std::size_t hashValue() const;

 private:
  bool eq(const LaurentPoly& o) const { return lo_ == o.lo_ && c_ == o.c_; }
  void trim();
  int lo_ = 0;
  std::vector<Rat> c_;
  friend class RationalFunc;
};

LaurentPoly vint(int n);               // [n]
LaurentPoly vfact(int n);              // [n]!
LaurentPoly vbinom(int m, int k);      // Gaussian binomial, 0 when k<0 or k>m

/// Element of Q(v): num/den with den primitive, positive leading coefficient,
/// lowest exponent 0, and gcd(num,den)=1. Equal values have equal fields.
class RationalFunc {
 public:
  RationalFunc() = default;
  RationalFunc(int n) : num_(n) {}  // NOLINT
  RationalFunc(const Rat& r) : num_(r) {}  // NOLINT
  RationalFunc(const LaurentPoly& p) : num_(p) {}  // NOLINT
  RationalFunc(LaurentPoly num, LaurentPoly den);

  static RationalFunc v(int exp = 1) { return RationalFunc(LaurentPoly::v(exp)); }

  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }
  bool isZero() const { return num_.isZero(); }
  bool isOne() const { return num_.isOne() && den_.isOne(); }
  bool isInteger(int n) const { return den_.isOne() && num_ == LaurentPoly(n); }

  RationalFunc operator-() const;
  friend RationalFunc operator+(const RationalFunc& a, const RationalFunc& b);
  friend RationalFunc operator-(const RationalFunc& a, const RationalFunc& b);
  friend RationalFunc operator*(const RationalFunc& a, const RationalFunc& b);
  friend RationalFunc operator/(const RationalFunc& a, const RationalFunc& b);
  RationalFunc& operator+=(const RationalFunc& o) { return *this = *this + o; }
  RationalFunc& operator-=(const RationalFunc& o) { return *this = *this - o; }
  RationalFunc& operator*=(const RationalFunc& o) { return *this = *this * o; }
  RationalFunc& operator/=(const RationalFunc& o) { return *this = *this / o; }
  bool operator==(const RationalFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RationalFunc& o) const { return !(*this == o); }

  RationalFunc inverse() const;

  /// Exact evaluation at a rational; throws MathError on a pole.
  Rat eval(const Rat& x) const;

  /// v -> v^{-1}.
  RationalFunc barInvolution() const;

  std::string str() const;
  std::size_t hashValue() const;

 private:
  void canonicalize();
  LaurentPoly num_;
  LaurentPoly den_ = LaurentPoly(1);
};

inline RationalFunc vOne() { return RationalFunc(1); }
RationalFunc vpow(int k);                    // v^k as a RationalFunc
RationalFunc quantumInt(int n);              // [n]
RationalFunc quantumBinom(int m, int k);

}  // namespace iqa

#endif
