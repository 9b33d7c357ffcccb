#include "iqa/scalar.hpp"

#include <algorithm>
#include <sstream>

namespace iqa {

void LaurentPoly::trim() {
  std::size_t drop = 0;
  while (drop < c_.size() && c_[drop] == 0) ++drop;
  if (drop == c_.size()) {
    c_.clear();
    lo_ = 0;
    return;
  }
  if (drop > 0) {
    c_.erase(c_.begin(), c_.begin() + static_cast<long>(drop));
    lo_ += static_cast<int>(drop);
  }
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

const Rat& LaurentPoly::leading() const {
  if (c_.empty()) throw MathError("leading() of zero polynomial");
  return c_.back();
}

Rat LaurentPoly::coeff(int exp) const {
  int idx = exp - lo_;
  if (idx < 0 || idx >= static_cast<int>(c_.size())) return Rat(0);
  return c_[static_cast<std::size_t>(idx)];
}

int LaurentPoly::termCount() const {
  int n = 0;
  for (const auto& x : c_)
    if (x != 0) ++n;
  return n;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  if (o.c_.empty()) return *this;
  if (c_.empty()) {
    *this = o;
    return *this;
  }
  int nlo = std::min(lo_, o.lo_);
  int nhi = std::max(highExp(), o.highExp());
  std::vector<Rat> nc(static_cast<std::size_t>(nhi - nlo + 1));
  for (std::size_t i = 0; i < c_.size(); ++i) nc[static_cast<std::size_t>(lo_ - nlo) + i] = c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i)
    nc[static_cast<std::size_t>(o.lo_ - nlo) + i] += o.c_[i];
  lo_ = nlo;
  c_ = std::move(nc);
  trim();
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) { return *this += -o; }

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly r;
  if (a.c_.empty() || b.c_.empty()) return r;
  r.lo_ = a.lo_ + b.lo_;
  r.c_.assign(a.c_.size() + b.c_.size() - 1, Rat(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j)
      if (b.c_[j] != 0) r.c_[i + j] += a.c_[i] * b.c_[j];
  }
  r.trim();
  return r;
}

LaurentPoly divExact(const LaurentPoly& a, const LaurentPoly& b) {
  if (b.isZero()) throw MathError("division by zero polynomial");
  if (a.isZero()) return LaurentPoly();
  // Ordinary polynomial long division on the coefficient arrays.
  std::vector<Rat> rem = a.c_;
  const std::vector<Rat>& d = b.c_;
  if (rem.size() < d.size()) throw MathError("inexact polynomial division");
  std::vector<Rat> quot(rem.size() - d.size() + 1);
  for (int qi = static_cast<int>(quot.size()) - 1; qi >= 0; --qi) {
    Rat q = rem[static_cast<std::size_t>(qi) + d.size() - 1] / d.back();
    quot[static_cast<std::size_t>(qi)] = q;
    if (q != 0)
      for (std::size_t j = 0; j < d.size(); ++j) rem[static_cast<std::size_t>(qi) + j] -= q * d[j];
  }
  for (const auto& x : rem)
    if (x != 0) throw MathError("inexact polynomial division");
  LaurentPoly r;
  r.lo_ = a.lo_ - b.lo_;
  r.c_ = std::move(quot);
  r.trim();
  return r;
}

Rat LaurentPoly::eval(const Rat& x) const {
  if (c_.empty()) return Rat(0);
  if (x == 0) {
    if (lo_ < 0) throw MathError("pole at v=0");
    return lo_ == 0 ? c_[0] : Rat(0);
  }
  // Horner on the nonnegative-shifted polynomial, then multiply x^{lo}.
  Rat acc(0);
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  Rat p(1);
  int e = lo_;
  Rat base = e >= 0 ? x : Rat(1) / x;
  for (int k = 0; k < std::abs(e); ++k) p *= base;
  return acc * p;
}

Rat LaurentPoly::content() const {
  if (c_.empty()) return Rat(0);
  mpz_class num(0), den(1);
  for (const auto& x : c_) {
    if (x == 0) continue;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), x.get_num().get_mpz_t());
    num = g;
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), den.get_mpz_t(), x.get_den().get_mpz_t());
    den = l;
  }
  Rat c(num, den);
  c.canonicalize();
  if (leading() < 0) c = -c;
  return c;
}

namespace {

// Primitive integer coefficient vector (lowest term first), used by gcd.
std::vector<mpz_class> primitiveVec(const LaurentPoly& p) {
  Rat c = p.content();
  std::vector<mpz_class> out;
  LaurentPoly q = divExact(p, LaurentPoly(c));
  for (int e = q.lowExp(); e <= q.highExp(); ++e) out.push_back(q.coeff(e).get_num());
  return out;
}

std::vector<mpz_class> stripContentZ(std::vector<mpz_class> a) {
  mpz_class g(0);
  for (auto& x : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g != 0 && a.back() < 0) g = -g;
  if (g != 0 && g != 1)
    for (auto& x : a) x /= g;
  return a;
}

// Pseudo-remainder of a by b (integer vectors, lowest first), degrees da>=db.
std::vector<mpz_class> pseudoRem(std::vector<mpz_class> a, const std::vector<mpz_class>& b) {
  while (a.size() >= b.size() && !a.empty()) {
    if (a.back() == 0) {
      a.pop_back();
      continue;
    }
    mpz_class lb = b.back();
    mpz_class la = a.back();
    for (auto& x : a) x *= lb;
    std::size_t shift = a.size() - b.size();
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= la * b[j];
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  return a;
}

}  // namespace

LaurentPoly gcd(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.isZero() && b.isZero()) return LaurentPoly();
  if (a.isZero() || b.isZero()) {
    const LaurentPoly& p = a.isZero() ? b : a;
    LaurentPoly g = divExact(p, LaurentPoly(p.content()));
    return g.shifted(-g.lowExp());
  }
  // Primitive PRS over Z[v] after dropping v-powers.
  std::vector<mpz_class> r0 = primitiveVec(a);
  std::vector<mpz_class> r1 = primitiveVec(b);
  if (r0.size() < r1.size()) std::swap(r0, r1);
  while (!r1.empty()) {
    std::vector<mpz_class> r2 = stripContentZ(pseudoRem(r0, r1));
    r0 = std::move(r1);
    r1 = std::move(r2);
  }
  r0 = stripContentZ(std::move(r0));
  LaurentPoly g;
  for (std::size_t i = 0; i < r0.size(); ++i) g += LaurentPoly::monomial(Rat(r0[i]), static_cast<int>(i));
  return g;
}

LaurentPoly LaurentPoly::shifted(int k) const {
  LaurentPoly r = *this;
  if (!r.c_.empty()) r.lo_ += k;
  return r;
}

LaurentPoly LaurentPoly::barInvolution() const {
  LaurentPoly r;
  for (int e = lowExp(); e <= highExp(); ++e) r += monomial(coeff(e), -e);
  return r;
}

std::string LaurentPoly::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int e = highExp(); e >= lowExp(); --e) {
    Rat c = coeff(e);
    if (c == 0) continue;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    Rat ac = abs(c);
    bool needCoeff = (ac != 1) || e == 0;
    if (needCoeff) os << ac.get_str();
    if (e != 0) {
      if (needCoeff) os << "*";
      os << "v";
      if (e != 1) os << "^" << e;
    }
    first = false;
  }
  return os.str();
}

std::size_t LaurentPoly::hashValue() const {
  std::size_t h = static_cast<std::size_t>(lo_) * 1099511628211ULL;
  for (const auto& x : c_) {
    h ^= std::hash<std::string>()(x.get_str()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

LaurentPoly vint(int n) {
  if (n < 0) return -vint(-n);
  LaurentPoly r;
  for (int k = 0; k < n; ++k) r += LaurentPoly::v(n - 1 - 2 * k);
  return r;
}

LaurentPoly vfact(int n) {
  LaurentPoly r(1);
  for (int k = 2; k <= n; ++k) r *= vint(k);
  return r;
}

LaurentPoly vbinom(int m, int k) {
  if (k < 0 || k > m) return LaurentPoly();
  return divExact(vfact(m), vfact(k) * vfact(m - k));
}

RationalFunc::RationalFunc(LaurentPoly num, LaurentPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.isZero()) throw MathError("RationalFunc with zero denominator");
  canonicalize();
}

void RationalFunc::canonicalize() {
  if (num_.isZero()) {
    den_ = LaurentPoly(1);
    return;
  }
  LaurentPoly g = gcd(num_, den_);
  if (!g.isOne()) {
    num_ = divExact(num_, g);
    den_ = divExact(den_, g);
  }
  // den: primitive integer, positive leading coefficient, lowExp 0.
  Rat c = den_.content();
  int sh = den_.lowExp();
  den_ = divExact(den_, LaurentPoly::monomial(c, sh));
  num_ = divExact(num_, LaurentPoly::monomial(c, sh));
}

RationalFunc RationalFunc::operator-() const {
  RationalFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunc operator+(const RationalFunc& a, const RationalFunc& b) {
  return RationalFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunc operator-(const RationalFunc& a, const RationalFunc& b) { return a + (-b); }

RationalFunc operator*(const RationalFunc& a, const RationalFunc& b) {
  if (a.isZero() || b.isZero()) return RationalFunc();
  return RationalFunc(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunc operator/(const RationalFunc& a, const RationalFunc& b) {
  if (b.isZero()) throw MathError("division by zero in Q(v)");
  return RationalFunc(a.num_ * b.den_, a.den_ * b.num_);
}

RationalFunc RationalFunc::inverse() const {
  if (isZero()) throw MathError("inverse of zero in Q(v)");
  return RationalFunc(den_, num_);
}

Rat RationalFunc::eval(const Rat& x) const {
  Rat d = den_.eval(x);
  if (d == 0) throw MathError("pole of rational function");
  return num_.eval(x) / d;
}

RationalFunc RationalFunc::barInvolution() const {
  return RationalFunc(num_.barInvolution(), den_.barInvolution());
}

std::string RationalFunc::str() const {
  if (den_.isOne()) return num_.str();
  std::string n = num_.str();
  std::string d = den_.str();
  bool nPar = num_.termCount() > 1;
  bool dPar = den_.termCount() > 1;
  std::string out = nPar ? "(" + n + ")" : n;
  out += " / ";
  out += dPar ? "(" + d + ")" : d;
  return out;
}

std::size_t RationalFunc::hashValue() const {
  return num_.hashValue() * 31 + den_.hashValue();
}

RationalFunc vpow(int k) { return RationalFunc(LaurentPoly::v(k)); }
RationalFunc quantumInt(int n) { return RationalFunc(vint(n)); }
RationalFunc quantumBinom(int m, int k) { return RationalFunc(vbinom(m, k)); }

}  // namespace iqa
