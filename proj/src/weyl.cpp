#include "iqa/weyl.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

namespace iqa {

int AffRoot::level(const SatakeDiagram& d) const {
  std::int64_t c0 = coeffs(0);
  if (doubled) {
    if (c0 % 2 != 0) throw MathError("odd delta coefficient in doubled relative root");
    return static_cast<int>(c0 / 2);
  }
  (void)d;
  return static_cast<int>(c0);
}

IntVec AffRoot::finitePart(const SatakeDiagram& d) const {
  IntVec f = coeffs;
  std::int64_t c0 = coeffs(0);
  f -= c0 * d.marks;
  return f;  // doubled vectors keep the doubling
}

bool AffRoot::isPositive(const SatakeDiagram& d) const {
  int k = level(d);
  if (k > 0) return true;
  if (k < 0) return false;
  IntVec f = finitePart(d);
  bool pos = false;
  for (int i = 0; i < f.size(); ++i) {
    if (f(i) > 0) pos = true;
    if (f(i) < 0) return false;
  }
  return pos;
}

std::string AffRoot::str(const SatakeDiagram& d) const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < coeffs.size(); ++i) {
    if (i) os << ",";
    if (doubled) {
      std::int64_t c = coeffs(i);
      if (c % 2 == 0)
        os << c / 2;
      else
        os << c << "/2";
    } else {
      os << coeffs(i);
    }
  }
  os << "]";
  os << " (level " << level(d) << ")";
  return os.str();
}

WeylElt::WeylElt(const SatakeDiagram* d, WeylMode mode) : d_(d), mode_(mode) {
  m_ = IntMat::Identity(d->n, d->n);
}

WeylElt WeylElt::identity(const SatakeDiagram& d, WeylMode mode) { return WeylElt(&d, mode); }

WeylElt WeylElt::fromMatrix(const SatakeDiagram& d, WeylMode mode, IntMat m) {
  WeylElt x(&d, mode);
  x.m_ = std::move(m);
  return x;
}

WeylElt WeylElt::simpleRefl(const SatakeDiagram& d, int i) {
  WeylElt x(&d, WeylMode::Ordinary);
  for (int j = 0; j < d.n; ++j) x.m_(i, j) -= d.cartan(i, j);
  return x;
}

WeylElt WeylElt::relRefl(const SatakeDiagram& d, int i) {
  int ti = d.tau[static_cast<std::size_t>(i)];
  WeylElt x = simpleRefl(d, i);
  if (ti != i) {
    if (d.cartan(i, ti) != 0) throw MathError("r_i only defined for c(i,tau i) in {0,2}");
    x = x * simpleRefl(d, ti);
  }
  x.mode_ = WeylMode::Relative;
  return x;
}

WeylElt WeylElt::translation(const SatakeDiagram& d, const IntVec& fw) {
  // lambda = sum_{j>=1} fw[j] omega_j; fw[0] ignored.
  WeylElt x(&d, WeylMode::Ordinary);
  IntVec deltaVec = d.marks;
  std::int64_t pairTheta = 0;  // <lambda, theta>
  for (int j = 1; j < d.n; ++j) pairTheta += fw(j) * d.marks(j);
  // columns: alpha_j -> alpha_j - <lambda,alpha_j> delta (j>0); alpha_0 -> alpha_0 + <lambda,theta> delta
  for (int j = 1; j < d.n; ++j) x.m_.col(j) -= fw(j) * deltaVec;
  x.m_.col(0) += pairTheta * deltaVec;
  return x;
}

AffRoot WeylElt::act(const AffRoot& r) const {
  AffRoot out;
  out.coeffs = m_ * r.coeffs;
  out.doubled = r.doubled;
  return out;
}

WeylElt WeylElt::operator*(const WeylElt& o) const {
  WeylElt x = *this;
  x.m_ = m_ * o.m_;
  return x;
}

WeylElt WeylElt::inverse() const {
  int n = static_cast<int>(m_.rows());
  // Exact inverse via rational Gauss-Jordan; entries must come out integral.
  std::vector<std::vector<Rat>> a(static_cast<std::size_t>(n), std::vector<Rat>(static_cast<std::size_t>(2 * n)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Rat(static_cast<long>(m_(i, j)));
    a[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + i)] = 1;
  }
  for (int col = 0; col < n; ++col) {
    int p = -1;
    for (int r = col; r < n; ++r)
      if (a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
        p = r;
        break;
      }
    if (p < 0) throw MathError("singular Weyl matrix");
    std::swap(a[static_cast<std::size_t>(p)], a[static_cast<std::size_t>(col)]);
    Rat lead = a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
    for (int j = 0; j < 2 * n; ++j) a[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)] /= lead;
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      Rat f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
      if (f == 0) continue;
      for (int j = 0; j < 2 * n; ++j)
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] -= f * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)];
    }
  }
  WeylElt x = *this;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rat e = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + j)];
      if (e.get_den() != 1) throw MathError("non-integral Weyl inverse");
      x.m_(i, j) = static_cast<std::int64_t>(e.get_num().get_si());
    }
  return x;
}

bool WeylElt::isIdentity() const { return m_ == IntMat::Identity(d_->n, d_->n); }

std::string WeylElt::matrixKey() const {
  std::ostringstream os;
  for (int i = 0; i < m_.rows(); ++i)
    for (int j = 0; j < m_.cols(); ++j) os << m_(i, j) << ",";
  return os.str();
}

namespace {

std::map<std::string, std::vector<IntVec>>& rootCache() {
  static std::map<std::string, std::vector<IntVec>> cache;
  return cache;
}

std::map<std::string, std::vector<IntVec>>& relRootCache() {
  static std::map<std::string, std::vector<IntVec>> cache;
  return cache;
}

bool vecPositive(const IntVec& v) {
  bool pos = false;
  for (int i = 0; i < v.size(); ++i) {
    if (v(i) > 0) pos = true;
    if (v(i) < 0) return false;
  }
  return pos;
}

}  // namespace

const std::vector<IntVec>& finitePositiveRoots(const SatakeDiagram& d) {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto& cache = rootCache();
  auto it = cache.find(d.key());
  if (it != cache.end()) return it->second;
  // Orbit closure of the finite simple roots under finite reflections.
  std::set<std::vector<std::int64_t>> seen;
  std::vector<IntVec> queue;
  for (int i = 1; i < d.n; ++i) {
    IntVec e = IntVec::Zero(d.n);
    e(i) = 1;
    queue.push_back(e);
  }
  std::vector<IntVec> all;
  while (!queue.empty()) {
    IntVec r = queue.back();
    queue.pop_back();
    std::vector<std::int64_t> key(r.data(), r.data() + r.size());
    if (!seen.insert(key).second) continue;
    all.push_back(r);
    for (int i = 1; i < d.n; ++i) {
      IntVec s = r;
      std::int64_t pair = 0;  // <alpha_i^vee, r>
      for (int j = 1; j < d.n; ++j) pair += d.cartan(i, j) * r(j);
      s(i) -= pair;
      std::vector<std::int64_t> k2(s.data(), s.data() + s.size());
      if (!seen.count(k2)) queue.push_back(s);
    }
  }
  std::vector<IntVec> pos;
  for (const auto& r : all)
    if (vecPositive(r)) pos.push_back(r);
  std::sort(pos.begin(), pos.end(), [](const IntVec& a, const IntVec& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  return cache.emplace(d.key(), std::move(pos)).first->second;
}

const std::vector<IntVec>& relativeFinitePositiveRoots(const SatakeDiagram& d) {
  static std::recursive_mutex mu;
  std::lock_guard<std::recursive_mutex> lock(mu);
  auto& cache = relRootCache();
  auto it = cache.find(d.key());
  if (it != cache.end()) return it->second;
  std::set<std::vector<std::int64_t>> seen;
  std::vector<IntVec> out;
  for (const auto& r : finitePositiveRoots(d)) {
    IntVec dbl = r;
    for (int j = 0; j < d.n; ++j) dbl(j) += r(d.tau[static_cast<std::size_t>(j)]);
    // dbl = r + tau(r) = 2*rbar. (tau acts by permuting coordinates.)
    std::vector<std::int64_t> key(dbl.data(), dbl.data() + dbl.size());
    if (seen.insert(key).second) out.push_back(dbl);
  }
  std::sort(out.begin(), out.end(), [](const IntVec& a, const IntVec& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  return cache.emplace(d.key(), std::move(out)).first->second;
}

AffRoot simpleRoot(const SatakeDiagram& d, int i, WeylMode mode) {
  AffRoot r;
  r.coeffs = IntVec::Zero(d.n);
  if (mode == WeylMode::Ordinary) {
    r.coeffs(i) = 1;
  } else {
    r.doubled = true;
    r.coeffs(i) += 1;
    r.coeffs(d.tau[static_cast<std::size_t>(i)]) += 1;
  }
  return r;
}

int length(const WeylElt& x) {
  const SatakeDiagram& d = x.diagram();
  const std::vector<IntVec>& roots = x.mode() == WeylMode::Ordinary
                                         ? finitePositiveRoots(d)
                                         : relativeFinitePositiveRoots(d);
  bool doubled = x.mode() == WeylMode::Relative;
  int total = 0;
  for (const auto& rv : roots) {
    AffRoot r{rv, doubled};
    AffRoot img = x.act(r);
    int m = img.level(d);
    IntVec gamma = img.finitePart(d);
    bool gpos = vecPositive(gamma);
    if (!gpos && !vecPositive(IntVec(-gamma))) throw MathError("image finite part is not a root sign pattern");
    total += gpos ? std::abs(m) : std::abs(m - 1);
  }
  return total;
}

namespace {

bool rootNegative(const SatakeDiagram& d, const AffRoot& r) {
  int k = r.level(d);
  if (k < 0) return true;
  if (k > 0) return false;
  IntVec f = r.finitePart(d);
  return vecPositive(IntVec(-f));
}

}  // namespace

bool isDiagramAutomorphism(const SatakeDiagram& d, const std::vector<int>& perm) {
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j)
      if (d.cartan(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) != d.cartan(i, j))
        return false;
  return true;
}

bool ReducedWord::outerIsIdentity() const {
  for (std::size_t i = 0; i < outerPerm.size(); ++i)
    if (outerPerm[i] != static_cast<int>(i)) return false;
  return true;
}

ReducedWord reducedWord(const WeylElt& x0) {
  const SatakeDiagram& d = x0.diagram();
  WeylElt x = x0;
  std::vector<int> gens;
  if (x.mode() == WeylMode::Ordinary)
    for (int i = 0; i < d.n; ++i) gens.push_back(i);
  else
    gens = d.reps;
  std::vector<int> peeled;
  bool progress = true;
  while (progress) {
    progress = false;
    for (int i : gens) {
      AffRoot a = simpleRoot(d, i, x.mode());
      if (rootNegative(d, x.act(a))) {
        WeylElt refl = x.mode() == WeylMode::Ordinary ? WeylElt::simpleRefl(d, i) : WeylElt::relRefl(d, i);
        x = x * refl;
        peeled.push_back(i);
        progress = true;
        break;
      }
    }
  }
  // Residual has length 0: must send every ordinary simple root to one.
  ReducedWord rw;
  rw.outerPerm.assign(static_cast<std::size_t>(d.n), -1);
  for (int j = 0; j < d.n; ++j) {
    AffRoot a = simpleRoot(d, j, WeylMode::Ordinary);
    AffRoot img{x.matrix() * a.coeffs, false};
    int target = -1;
    for (int t = 0; t < d.n; ++t) {
      IntVec e = IntVec::Zero(d.n);
      e(t) = 1;
      if (img.coeffs == e) target = t;
    }
    if (target < 0) throw MathError("residual element is not a diagram automorphism");
    rw.outerPerm[static_cast<std::size_t>(j)] = target;
  }
  if (!isDiagramAutomorphism(d, rw.outerPerm)) throw MathError("residual permutation is not a diagram automorphism");
  rw.word.assign(peeled.rbegin(), peeled.rend());
  return rw;
}

WeylElt permutationElt(const SatakeDiagram& d, WeylMode mode, const std::vector<int>& perm) {
  IntMat m = IntMat::Zero(d.n, d.n);
  for (int j = 0; j < d.n; ++j) m(perm[static_cast<std::size_t>(j)], j) = 1;
  return WeylElt::fromMatrix(d, mode, std::move(m));
}

WeylElt recompose(const SatakeDiagram& d, WeylMode mode, const ReducedWord& rw) {
  WeylElt x = permutationElt(d, mode, rw.outerPerm);
  for (int i : rw.word) {
    WeylElt refl = mode == WeylMode::Ordinary ? WeylElt::simpleRefl(d, i) : WeylElt::relRefl(d, i);
    x = x * refl;
  }
  return x;
}

WeylElt tVarpi(const SatakeDiagram& d, int i, bool primed) {
  if (i == 0) throw MathError("t_varpi is indexed by nonzero representatives");
  if (!d.isRep(i)) throw MathError("t_varpi expects an orbit representative");
  IntVec fw = IntVec::Zero(d.n);
  fw(i) = 1;
  int ti = d.tau[static_cast<std::size_t>(i)];
  if (ti != i) fw(ti) = 1;
  WeylElt t = WeylElt::translation(d, fw);
  WeylElt tr = WeylElt::fromMatrix(d, WeylMode::Relative, t.matrix());
  if (primed) tr = tr * WeylElt::relRefl(d, i);
  return tr;
}

WeylElt tOmega(const SatakeDiagram& d, int i, bool primed) {
  IntVec fw = IntVec::Zero(d.n);
  fw(i) = 1;
  WeylElt t = WeylElt::translation(d, fw);
  if (primed) t = t * WeylElt::simpleRefl(d, i);
  return t;
}

InversionSet deltaSet(const SatakeDiagram& d, int i, DeltaMode mode) {
  InversionSet out;
  if (mode == DeltaMode::OrdinaryOmega) {
    if (d.tau[static_cast<std::size_t>(i)] != i) throw MathError("Delta(omega') needs tau(i)=i");
    WeylElt t = tOmega(d, i, true);
    ReducedWord rw = reducedWord(t);
    WeylElt prefix = permutationElt(d, WeylMode::Ordinary, rw.outerPerm);
    for (std::size_t p = 0; p < rw.word.size(); ++p) {
      AffRoot a = simpleRoot(d, rw.word[p], WeylMode::Ordinary);
      out.roots.push_back(prefix.act(a));
      prefix = prefix * WeylElt::simpleRefl(d, rw.word[p]);
    }
  } else {
    int ti = d.tau[static_cast<std::size_t>(i)];
    if (ti == i || d.cartan(i, ti) != 0) throw MathError("Delta(varpi') needs c(i,tau i)=0");
    WeylElt t = tVarpi(d, d.rep(i), true);
    ReducedWord rw = reducedWord(t);
    WeylElt prefix = permutationElt(d, WeylMode::Relative, rw.outerPerm);
    for (std::size_t p = 0; p < rw.word.size(); ++p) {
      AffRoot a = simpleRoot(d, rw.word[p], WeylMode::Relative);
      out.roots.push_back(prefix.act(a));
      prefix = prefix * WeylElt::relRefl(d, rw.word[p]);
    }
  }
  return out;
}

}  // namespace iqa
