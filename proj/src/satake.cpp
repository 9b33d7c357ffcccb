#include "iqa/satake.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace iqa {

std::string familyName(Family f) {
  switch (f) {
    case Family::AIII: return "AIII";
    case Family::DI: return "DI";
    case Family::EI6: return "EI6";
    case Family::SplitA1: return "A1split";
  }
  return "?";
}

Family familyFromName(const std::string& name) {
  std::string s;
  for (char c : name) s.push_back(static_cast<char>(std::tolower(c)));
  if (s == "aiii") return Family::AIII;
  if (s == "di") return Family::DI;
  if (s == "ei6" || s == "ei") return Family::EI6;
  if (s == "a1split" || s == "onsager" || s == "a1") return Family::SplitA1;
  throw MathError("unknown family: " + name);
}

bool SatakeDiagram::isRep(int i) const {
  return std::find(reps.begin(), reps.end(), i) != reps.end();
}

int SatakeDiagram::rep(int i) const { return std::min(i, tau[static_cast<std::size_t>(i)]); }

std::string SatakeDiagram::key() const {
  return familyName(family) + "-" + std::to_string(rank);
}

std::uint64_t SatakeDiagram::presentationHash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t x) {
    h ^= x;
    h *= 1099511628211ULL;
  };
  mix(static_cast<std::uint64_t>(family));
  mix(static_cast<std::uint64_t>(rank));
  for (int i = 0; i < n; ++i) {
    mix(static_cast<std::uint64_t>(tau[static_cast<std::size_t>(i)]) + 17);
    for (int j = 0; j < n; ++j) mix(static_cast<std::uint64_t>(cartan(i, j) + 5));
  }
  return h;
}

namespace {

IntMat cartanFromEdges(int n, const std::vector<std::pair<int, int>>& edges) {
  IntMat c = IntMat::Zero(n, n);
  for (int i = 0; i < n; ++i) c(i, i) = 2;
  for (auto [a, b] : edges) {
    c(a, b) = -1;
    c(b, a) = -1;
  }
  return c;
}

// Integer null vector of the affine Cartan matrix, normalized to marks[0]=1.
IntVec nullMarks(const IntMat& c) {
  int n = static_cast<int>(c.rows());
  // Exact Gaussian elimination over Q.
  std::vector<std::vector<Rat>> m(static_cast<std::size_t>(n), std::vector<Rat>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Rat(static_cast<long>(c(i, j)));
  std::vector<int> pivotCol(static_cast<std::size_t>(n), -1);
  int row = 0;
  for (int col = 0; col < n && row < n; ++col) {
    int p = -1;
    for (int r = row; r < n; ++r)
      if (m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
        p = r;
        break;
      }
    if (p < 0) continue;
    std::swap(m[static_cast<std::size_t>(p)], m[static_cast<std::size_t>(row)]);
    Rat lead = m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
    for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] /= lead;
    for (int r = 0; r < n; ++r) {
      if (r == row) continue;
      Rat f = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
      if (f == 0) continue;
      for (int j = 0; j < n; ++j)
        m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] -= f * m[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)];
    }
    pivotCol[static_cast<std::size_t>(row)] = col;
    ++row;
  }
  if (row != n - 1) throw MathError("affine Cartan matrix must have 1-dimensional kernel");
  // Free column = the one that is no pivot; set it to 1 and back-substitute.
  std::vector<bool> isPivot(static_cast<std::size_t>(n), false);
  for (int r = 0; r < row; ++r) isPivot[static_cast<std::size_t>(pivotCol[static_cast<std::size_t>(r)])] = true;
  int freeCol = -1;
  for (int jj = 0; jj < n; ++jj)
    if (!isPivot[static_cast<std::size_t>(jj)]) freeCol = jj;
  std::vector<Rat> sol(static_cast<std::size_t>(n), Rat(0));
  sol[static_cast<std::size_t>(freeCol)] = 1;
  for (int r = 0; r < row; ++r) {
    int pc = pivotCol[static_cast<std::size_t>(r)];
    sol[static_cast<std::size_t>(pc)] = -m[static_cast<std::size_t>(r)][static_cast<std::size_t>(freeCol)];
  }
  // Scale so all entries are positive integers with sol[0] smallest = 1.
  mpz_class den(1);
  for (auto& x : sol) {
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), den.get_mpz_t(), x.get_den().get_mpz_t());
    den = l;
  }
  IntVec v(n);
  for (int i = 0; i < n; ++i) {
    Rat x = sol[static_cast<std::size_t>(i)] * Rat(den);
    v(i) = static_cast<std::int64_t>(x.get_num().get_si());
  }
  if (v(0) < 0) v = -v;
  if (v(0) == 0) throw MathError("degenerate null vector");
  std::int64_t g = 0;
  for (int i = 0; i < n; ++i) g = std::gcd(g, std::abs(v(i)));
  v /= g;
  if (v(0) != 1) throw MathError("unexpected affine mark at node 0");
  return v;
}

}  // namespace

std::vector<int> signFunction(const SatakeDiagram& d) {
  std::vector<int> o(static_cast<std::size_t>(d.n), 0);
  // 2-coloring of the finite diagram (a tree), o(1)=+1 by convention.
  o[1] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 1; i < d.n; ++i) {
      if (o[static_cast<std::size_t>(i)] == 0) continue;
      for (int j = 1; j < d.n; ++j) {
        if (i == j || d.cartan(i, j) >= 0) continue;
        int want = -o[static_cast<std::size_t>(i)];
        if (o[static_cast<std::size_t>(j)] == 0) {
          o[static_cast<std::size_t>(j)] = want;
          changed = true;
        } else if (o[static_cast<std::size_t>(j)] != want) {
          throw MathError("finite diagram is not 2-colorable");
        }
      }
    }
  }
  for (int i = 1; i < d.n; ++i)
    if (o[static_cast<std::size_t>(i)] == 0) throw MathError("finite diagram is not connected");
  return o;
}

SatakeDiagram buildDiagram(Family family, int rank) {
  SatakeDiagram d;
  d.family = family;
  d.rank = rank;
  switch (family) {
    case Family::AIII: {
      if (rank < 2) throw MathError("AIII requires r >= 2");
      int n = 2 * rank;  // nodes 0..2r-1, cycle
      std::vector<std::pair<int, int>> edges;
      for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
      d.n = n;
      d.cartan = cartanFromEdges(n, edges);
      d.tau.resize(static_cast<std::size_t>(n));
      d.tau[0] = 0;
      for (int k = 1; k < n; ++k) d.tau[static_cast<std::size_t>(k)] = n - k;
      break;
    }
    case Family::DI: {
      if (rank < 4) throw MathError("DI requires r >= 4");
      int n = rank + 1;
      std::vector<std::pair<int, int>> edges = {{0, 2}, {1, 2}};
      for (int j = 2; j < rank - 2; ++j) edges.emplace_back(j, j + 1);
      edges.emplace_back(rank - 2, rank - 1);
      edges.emplace_back(rank - 2, rank);
      d.n = n;
      d.cartan = cartanFromEdges(n, edges);
      d.tau.resize(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) d.tau[static_cast<std::size_t>(i)] = i;
      d.tau[static_cast<std::size_t>(rank - 1)] = rank;
      d.tau[static_cast<std::size_t>(rank)] = rank - 1;
      break;
    }
    case Family::EI6: {
      if (rank != 6) throw MathError("EI requires rank 6");
      d.n = 7;
      std::vector<std::pair<int, int>> edges = {{3, 5}, {5, 6}, {3, 2}, {2, 1}, {3, 4}, {4, 0}};
      d.cartan = cartanFromEdges(7, edges);
      d.tau = {0, 6, 5, 3, 4, 2, 1};
      break;
    }
    case Family::SplitA1: {
      d.n = 2;
      d.cartan = IntMat(2, 2);
      d.cartan << 2, -2, -2, 2;
      d.tau = {0, 1};
      break;
    }
  }
  for (int i = 0; i < d.n; ++i) {
    if (d.tau[static_cast<std::size_t>(d.tau[static_cast<std::size_t>(i)])] != i)
      throw MathError("tau is not an involution");
    for (int j = 0; j < d.n; ++j)
      if (d.cartan(d.tau[static_cast<std::size_t>(i)], d.tau[static_cast<std::size_t>(j)]) != d.cartan(i, j))
        throw MathError("tau does not preserve the Cartan matrix");
  }
  for (int i = 0; i < d.n; ++i)
    if (i <= d.tau[static_cast<std::size_t>(i)]) d.reps.push_back(i);
  d.marks = nullMarks(d.cartan);
  d.osign = signFunction(d);
  return d;
}

namespace {

struct Candidate {
  std::string name;
  IntMat cartan;
};

IntMat candA1aff() {
  IntMat c(2, 2);
  c << 2, -2, -2, 2;
  return c;
}

// C_m^{(1)}: 0 and m long ends, middle short. c(0,1)=-1, c(1,0)=-2, c(m-1,m)=-2, c(m,m-1)=-1.
IntMat candC(int m) {
  int n = m + 1;
  IntMat c = IntMat::Zero(n, n);
  for (int i = 0; i < n; ++i) c(i, i) = 2;
  c(0, 1) = -1;
  c(1, 0) = -2;
  for (int i = 1; i + 1 < m; ++i) {
    c(i, i + 1) = -1;
    c(i + 1, i) = -1;
  }
  c(m - 1, m) = -2;
  c(m, m - 1) = -1;
  return c;
}

// B_m^{(1)}: fork 0,1 -> 2, chain, short end m: c(m-1,m)=-1, c(m,m-1)=-2.
IntMat candB(int m) {
  int n = m + 1;
  IntMat c = IntMat::Zero(n, n);
  for (int i = 0; i < n; ++i) c(i, i) = 2;
  auto edge = [&c](int a, int b) {
    c(a, b) = -1;
    c(b, a) = -1;
  };
  edge(0, 2);
  edge(1, 2);
  for (int i = 2; i + 1 < m; ++i) edge(i, i + 1);
  c(m - 1, m) = -1;
  c(m, m - 1) = -2;
  return c;
}

// F_4^{(1)}: chain 0-1-2=>3-4 with alpha_3, alpha_4 short.
IntMat candF4() {
  IntMat c = IntMat::Zero(5, 5);
  for (int i = 0; i < 5; ++i) c(i, i) = 2;
  c(0, 1) = c(1, 0) = -1;
  c(1, 2) = c(2, 1) = -1;
  c(2, 3) = -1;
  c(3, 2) = -2;
  c(3, 4) = c(4, 3) = -1;
  return c;
}

bool matchUpToPermutation(const IntMat& a, const IntMat& b) {
  int n = static_cast<int>(a.rows());
  if (b.rows() != n) return false;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = 0; j < n && ok; ++j)
        if (a(i, j) != b(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)])) ok = false;
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace

RelativeData relativeCartan(const SatakeDiagram& d) {
  RelativeData rd;
  rd.nodes = d.reps;
  int m = static_cast<int>(rd.nodes.size());
  rd.pairing2 = IntMat::Zero(m, m);
  rd.relCartan = IntMat::Zero(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      int i = rd.nodes[static_cast<std::size_t>(a)];
      int j = rd.nodes[static_cast<std::size_t>(b)];
      rd.pairing2(a, b) = d.cartan(i, j) + d.cartan(d.tau[static_cast<std::size_t>(i)], j);
    }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      std::int64_t num = 2 * rd.pairing2(a, b);
      std::int64_t den = rd.pairing2(a, a);
      if (num % den != 0) throw MathError("relative Cartan entry not integral");
      rd.relCartan(a, b) = num / den;
    }
  // Classify by canonical matching against the built-in affine table.
  std::vector<Candidate> table;
  table.push_back({"A1(1)", candA1aff()});
  for (int k = 2; k <= m; ++k) table.push_back({"C" + std::to_string(k) + "(1)", candC(k)});
  for (int k = 3; k <= m; ++k) table.push_back({"B" + std::to_string(k) + "(1)", candB(k)});
  table.push_back({"F4(1)", candF4()});
  rd.relType = "?";
  for (const auto& cand : table) {
    if (cand.cartan.rows() == m && matchUpToPermutation(rd.relCartan, cand.cartan)) {
      rd.relType = cand.name;
      break;
    }
  }
  // Coxeter exponents from products of off-diagonal pairs.
  rd.coxeterM = IntMat::Zero(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (a == b) {
        rd.coxeterM(a, b) = 1;
        continue;
      }
      std::int64_t p = rd.relCartan(a, b) * rd.relCartan(b, a);
      rd.coxeterM(a, b) = p == 0 ? 2 : p == 1 ? 3 : p == 2 ? 4 : p == 3 ? 6 : 0;  // 0 = infinite
    }
  return rd;
}

}  // namespace iqa
