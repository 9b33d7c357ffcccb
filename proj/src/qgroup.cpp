#include "iqa/qgroup.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace iqa {

namespace {

constexpr char32_t kSep1 = 0xFFFF01;
constexpr char32_t kSep2 = 0xFFFF02;

IntVec sideWordWeight(const SatakeDiagram& d, const SideWord& w) {
  IntVec v = IntVec::Zero(d.n);
  for (char32_t c : w) v(static_cast<int>(c)) += 1;
  return v;
}

int htOf(const IntVec& v) {
  int h = 0;
  for (int i = 0; i < v.size(); ++i) h += static_cast<int>(v(i));
  return h;
}

bool leqBox(const IntVec& a, const IntVec& b) {
  for (int i = 0; i < a.size(); ++i)
    if (a(i) > b(i)) return false;
  return true;
}

std::string weightKey(const IntVec& v) {
  std::string s;
  for (int i = 0; i < v.size(); ++i) {
    if (i) s += "-";
    s += std::to_string(v(i));
  }
  return s;
}

std::string sideWordAscii(const SideWord& w) {
  std::string s;
  for (char32_t c : w) s += static_cast<char>('0' + static_cast<int>(c));
  return s;
}

SideWord sideWordFromAscii(const std::string& s) {
  SideWord w;
  for (char c : s) w.push_back(static_cast<char32_t>(c - '0'));
  return w;
}

void enumerateWordsRec(const IntVec& remaining, SideWord& cur, std::vector<SideWord>& out) {
  bool done = true;
  for (int i = 0; i < remaining.size(); ++i)
    if (remaining(i) > 0) {
      done = false;
      break;
    }
  if (done) {
    out.push_back(cur);
    return;
  }
  for (int i = 0; i < remaining.size(); ++i) {
    if (remaining(i) == 0) continue;
    IntVec next = remaining;
    next(i) -= 1;
    cur.push_back(static_cast<char32_t>(i));
    enumerateWordsRec(next, cur, out);
    cur.pop_back();
  }
}

std::vector<SideWord> enumerateWords(const IntVec& weight) {
  std::vector<SideWord> out;
  SideWord cur;
  enumerateWordsRec(weight, cur, out);
  return out;
}

void combAdd(SideComb& a, const SideWord& w, const RationalFunc& c) {
  if (c.isZero()) return;
  auto [it, inserted] = a.emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.isZero()) a.erase(it);
  }
}

void combAxpy(SideComb& a, const RationalFunc& c, const SideComb& b) {
  for (const auto& [w, x] : b) combAdd(a, w, c * x);
}

}  // namespace

// ---------------------------------------------------------------------------
// SideReducer
// ---------------------------------------------------------------------------

struct SideReducer::Impl {
  SatakeDiagram d;
  OracleOptions opts;

  std::vector<SideComb> gens;  // quantum Serre generators (monic)

  // Truncated Groebner-Shirshov state.
  std::vector<SideComb> basis;
  std::vector<IntVec> basisWt;
  struct CompDesc {
    int fi, gi;
    int t;      // overlap length; -1 for inclusion
    int pos;    // inclusion position
    IntVec wt;
  };
  std::multimap<int, CompDesc> pending;  // keyed by ht(wt)
  std::vector<IntVec> completedBoxes;

  // Echelon caches per weight: lead word -> monic row.
  std::map<std::string, std::map<SideWord, SideComb, DegLexLess>> echelons;
  std::set<std::string> echelonSaved;

  std::map<SideWord, SideComb, DegLexLess> wordMemo;
  std::recursive_mutex mu;
  bool gsDirty = false;

  explicit Impl(const SatakeDiagram& diag, const OracleOptions& o) : d(diag), opts(o) {
    buildGenerators();
    for (std::size_t i = 0; i < basis.size(); ++i) addComps(static_cast<int>(i));
    loadGS();
  }

  void buildGenerators() {
    for (int i = 0; i < d.n; ++i) {
      for (int j = 0; j < d.n; ++j) {
        if (i == j) continue;
        std::int64_t c = d.cartan(i, j);
        if (c == 0) {
          if (i < j) continue;  // orient: lead = x_i x_j with i > j
          SideComb g;
          SideWord a{static_cast<char32_t>(i), static_cast<char32_t>(j)};
          SideWord b{static_cast<char32_t>(j), static_cast<char32_t>(i)};
          combAdd(g, a, RationalFunc(1));
          combAdd(g, b, RationalFunc(-1));
          pushGen(std::move(g));
        } else if (c < 0) {
          int m = static_cast<int>(1 - c);
          SideComb g;
          for (int s = 0; s <= m; ++s) {
            SideWord w;
            for (int t = 0; t < s; ++t) w.push_back(static_cast<char32_t>(i));
            w.push_back(static_cast<char32_t>(j));
            for (int t = 0; t < m - s; ++t) w.push_back(static_cast<char32_t>(i));
            RationalFunc coeff = quantumBinom(m, s);
            if (s % 2 == 1) coeff = -coeff;
            combAdd(g, w, coeff);
          }
          pushGen(std::move(g));
        }
      }
    }
  }

  void pushGen(SideComb g) {
    monicize(g);
    gens.push_back(g);
    basis.push_back(g);
    basisWt.push_back(sideWordWeight(d, g.rbegin()->first));
  }

  static void monicize(SideComb& g) {
    if (g.empty()) return;
    RationalFunc lead = g.rbegin()->second;
    if (lead.isOne()) return;
    RationalFunc inv = lead.inverse();
    for (auto& [w, c] : g) c = c * inv;
  }

  const SideWord& lead(int idx) const { return basis[static_cast<std::size_t>(idx)].rbegin()->first; }

  void addComps(int ni) {
    for (int j = 0; j <= ni; ++j) {
      enumerateComps(ni, j);
      if (j != ni) enumerateComps(j, ni);
    }
  }

  void enumerateComps(int fi, int gi) {
    const SideWord& wf = lead(fi);
    const SideWord& wg = lead(gi);
    int maxT = static_cast<int>(std::min(wf.size(), wg.size())) - 1;
    for (int t = 1; t <= maxT; ++t) {
      if (wf.compare(wf.size() - static_cast<std::size_t>(t), static_cast<std::size_t>(t), wg, 0,
                     static_cast<std::size_t>(t)) != 0)
        continue;
      SideWord word = wf + wg.substr(static_cast<std::size_t>(t));
      IntVec wt = sideWordWeight(d, word);
      if (htOf(wt) > opts.maxComponentHeight) continue;
      pending.emplace(htOf(wt), CompDesc{fi, gi, t, 0, wt});
    }
    if (fi != gi && wg.size() < wf.size()) {
      for (std::size_t p = 0; p + wg.size() <= wf.size(); ++p) {
        if (wf.compare(p, wg.size(), wg) != 0) continue;
        IntVec wt = sideWordWeight(d, wf);
        pending.emplace(htOf(wt), CompDesc{fi, gi, -1, static_cast<int>(p), wt});
      }
    }
  }

  SideComb sPoly(const CompDesc& cd) const {
    const SideComb& f = basis[static_cast<std::size_t>(cd.fi)];
    const SideComb& g = basis[static_cast<std::size_t>(cd.gi)];
    const SideWord& wf = f.rbegin()->first;
    const SideWord& wg = g.rbegin()->first;
    SideComb s;
    if (cd.t >= 0) {
      SideWord suffix = wg.substr(static_cast<std::size_t>(cd.t));
      SideWord prefix = wf.substr(0, wf.size() - static_cast<std::size_t>(cd.t));
      for (const auto& [w, c] : f) combAdd(s, w + suffix, c);
      for (const auto& [w, c] : g) combAdd(s, prefix + w, -c);
    } else {
      SideWord a = wf.substr(0, static_cast<std::size_t>(cd.pos));
      SideWord b = wf.substr(static_cast<std::size_t>(cd.pos) + wg.size());
      s = f;
      for (const auto& [w, c] : g) combAdd(s, a + w + b, -c);
    }
    return s;
  }

  // Plain rewriting against the current basis (leads as substrings).
  SideComb reduceGS(const SideComb& comb) {
    SideComb work = comb;
    SideComb out;
    while (!work.empty()) {
      auto it = std::prev(work.end());
      SideWord w = it->first;
      RationalFunc c = it->second;
      int hitIdx = -1;
      std::size_t hitPos = 0;
      for (std::size_t bi = 0; bi < basis.size(); ++bi) {
        std::size_t pos = w.find(basis[bi].rbegin()->first);
        if (pos != SideWord::npos) {
          hitIdx = static_cast<int>(bi);
          hitPos = pos;
          break;
        }
      }
      if (hitIdx < 0) {
        combAdd(out, w, c);
        work.erase(it);
        continue;
      }
      const SideComb& g = basis[static_cast<std::size_t>(hitIdx)];
      const SideWord& wg = g.rbegin()->first;
      SideWord a = w.substr(0, hitPos);
      SideWord b = w.substr(hitPos + wg.size());
      for (const auto& [gw, gc] : g) combAdd(work, a + gw + b, -(c * gc));
      // the leading term cancels: w itself was added with -c * 1
    }
    return out;
  }

  bool covered(const IntVec& wt) const {
    for (const auto& b : completedBoxes)
      if (leqBox(wt, b)) return true;
    return false;
  }

  void ensureComplete(const IntVec& wt) {
    if (covered(wt)) return;
    bool progress = true;
    while (progress) {
      progress = false;
      for (auto it = pending.begin(); it != pending.end();) {
        if (it->first > htOf(wt)) break;
        if (!leqBox(it->second.wt, wt)) {
          ++it;
          continue;
        }
        CompDesc cd = it->second;
        it = pending.erase(it);
        SideComb r = reduceGS(sPoly(cd));
        if (!r.empty()) {
          monicize(r);
          basis.push_back(r);
          basisWt.push_back(sideWordWeight(d, r.rbegin()->first));
          addComps(static_cast<int>(basis.size()) - 1);
          gsDirty = true;
          progress = true;
          // memoized word reductions computed against the smaller basis in
          // other boxes stay valid (their boxes are already complete).
          it = pending.begin();
        }
      }
    }
    completedBoxes.push_back(wt);
    gsDirty = true;
    saveGS();
  }

  // ---- echelon path ----

  std::map<SideWord, SideComb, DegLexLess>& echelonFor(const IntVec& wt, char sideTag) {
    std::string key = weightKey(wt);
    auto it = echelons.find(key);
    if (it != echelons.end()) {
      maybeSaveEchelon(wt, sideTag);
      return it->second;
    }
    auto& rows = echelons[key];
    if (loadEchelon(wt, rows)) {
      maybeSaveEchelon(wt, sideTag);
      return rows;
    }
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
      const SideComb& g = gens[gi];
      IntVec gw = sideWordWeight(d, g.rbegin()->first);
      IntVec rem = wt - gw;
      bool ok = true;
      for (int i = 0; i < rem.size(); ++i)
        if (rem(i) < 0) ok = false;
      if (!ok) continue;
      // all splits rem = a + b
      std::vector<IntVec> splits;
      IntVec a = IntVec::Zero(d.n);
      std::function<void(int)> rec = [&](int i) {
        if (i == d.n) {
          splits.push_back(a);
          return;
        }
        for (std::int64_t x = 0; x <= rem(i); ++x) {
          a(i) = x;
          rec(i + 1);
        }
        a(i) = 0;
      };
      rec(0);
      for (const auto& av : splits) {
        IntVec bv = rem - av;
        for (const auto& u : enumerateWords(av)) {
          for (const auto& w : enumerateWords(bv)) {
            SideComb row;
            for (const auto& [gwd, gc] : g) combAdd(row, u + gwd + w, gc);
            addEchelonRow(rows, std::move(row));
          }
        }
      }
    }
    maybeSaveEchelon(wt, sideTag);
    return rows;
  }

  void addEchelonRow(std::map<SideWord, SideComb, DegLexLess>& rows, SideComb row) {
    while (!row.empty()) {
      auto it = std::prev(row.end());
      auto hit = rows.find(it->first);
      if (hit == rows.end()) {
        monicize(row);
        SideWord leadWord = row.rbegin()->first;
        rows.emplace(leadWord, std::move(row));
        return;
      }
      RationalFunc c = it->second;
      combAxpy(row, -c, hit->second);
    }
  }

  SideComb reduceEch(std::map<SideWord, SideComb, DegLexLess>& rows, const SideComb& comb) {
    SideComb work = comb;
    SideComb out;
    while (!work.empty()) {
      auto it = std::prev(work.end());
      auto hit = rows.find(it->first);
      if (hit == rows.end()) {
        combAdd(out, it->first, it->second);
        work.erase(it);
        continue;
      }
      RationalFunc c = it->second;
      combAxpy(work, -c, hit->second);
    }
    return out;
  }

  // ---- disk cache ----

  std::filesystem::path gsPath() const {
    return std::filesystem::path(opts.cacheDir) / ("gs_" + d.key() + ".txt");
  }

  void saveComb(std::ostream& os, const SideComb& g) const {
    for (const auto& [w, c] : g) os << "  " << sideWordAscii(w) << "\t" << c.str() << "\n";
  }

  bool loadComb(std::istream& is, SideComb& g) {
    g.clear();
    std::string line;
    while (std::getline(is, line)) {
      if (line == "end") return true;
      auto tab = line.find('\t');
      if (tab == std::string::npos) return false;
      std::string ws = line.substr(2, tab - 2);
      RationalFunc c = parseScalar(line.substr(tab + 1));
      combAdd(g, sideWordFromAscii(ws), c);
    }
    return false;
  }

  void saveGS() {
    if (opts.cacheDir.empty() || !gsDirty) return;
    std::error_code ec;
    std::filesystem::create_directories(opts.cacheDir, ec);
    std::ofstream os(gsPath());
    if (!os) return;
    os << "hash " << d.presentationHash() << "\n";
    os << "nbasis " << basis.size() << "\n";
    for (const auto& g : basis) {
      os << "elem\n";
      saveComb(os, g);
      os << "end\n";
    }
    for (const auto& b : completedBoxes) os << "box " << weightKey(b) << "\n";
    gsDirty = false;
  }

  void loadGS() {
    if (opts.cacheDir.empty()) return;
    std::ifstream is(gsPath());
    if (!is) return;
    std::string tag;
    std::uint64_t h = 0;
    is >> tag >> h;
    if (tag != "hash" || h != d.presentationHash()) return;
    std::size_t nb = 0;
    is >> tag >> nb;
    if (tag != "nbasis") return;
    std::string line;
    std::getline(is, line);
    std::vector<SideComb> loaded;
    for (std::size_t i = 0; i < nb; ++i) {
      std::getline(is, line);
      if (line != "elem") return;
      SideComb g;
      if (!loadComb(is, g)) return;
      loaded.push_back(std::move(g));
    }
    std::vector<IntVec> boxes;
    while (std::getline(is, line)) {
      if (line.rfind("box ", 0) != 0) continue;
      std::string wk = line.substr(4);
      IntVec v = IntVec::Zero(d.n);
      std::stringstream ss(wk);
      std::string piece;
      int idx = 0;
      while (std::getline(ss, piece, '-') && idx < d.n) v(idx++) = std::stol(piece);
      boxes.push_back(v);
    }
    // Accept only supersets of the generator list.
    if (loaded.size() < basis.size()) return;
    basis = std::move(loaded);
    basisWt.clear();
    for (const auto& g : basis) basisWt.push_back(sideWordWeight(d, g.rbegin()->first));
    pending.clear();
    for (std::size_t i = 0; i < basis.size(); ++i) addComps(static_cast<int>(i));
    // Completed boxes absorb the pending compositions inside them.
    completedBoxes = std::move(boxes);
    for (auto it = pending.begin(); it != pending.end();) {
      if (covered(it->second.wt))
        it = pending.erase(it);
      else
        ++it;
    }
    gsDirty = false;
  }

  std::filesystem::path echPath(const IntVec& wt, char sideTag) const {
    return std::filesystem::path(opts.cacheDir) /
           ("ech_" + std::string(1, sideTag) + "_" + d.key() + "_" + weightKey(wt) + ".txt");
  }

  void maybeSaveEchelon(const IntVec& wt, char /*sideTag*/) {
    if (opts.cacheDir.empty()) return;
    std::string mark = weightKey(wt);
    if (echelonSaved.count(mark)) return;
    echelonSaved.insert(mark);
    std::error_code ec;
    std::filesystem::create_directories(opts.cacheDir, ec);
    // One reducer serves both triangular halves; the ideal shape is the
    // same, so the per-sign cache files share their contents.
    for (char tag : {'p', 'm'}) {
      auto p = echPath(wt, tag);
      if (std::filesystem::exists(p)) continue;
      std::ofstream os(p);
      if (!os) continue;
      const auto& rows = echelons[weightKey(wt)];
      os << "hash " << d.presentationHash() << "\n";
      os << "rows " << rows.size() << "\n";
      for (const auto& [leadWord, row] : rows) {
        os << "row\n";
        saveComb(os, row);
        os << "end\n";
      }
    }
  }

  bool loadEchelon(const IntVec& wt, std::map<SideWord, SideComb, DegLexLess>& rows) {
    if (opts.cacheDir.empty()) return false;
    for (char sideTag : {'p', 'm'}) {
      std::ifstream is(echPath(wt, sideTag));
      if (!is) continue;
      std::string tag;
      std::uint64_t h = 0;
      is >> tag >> h;
      if (tag != "hash" || h != d.presentationHash()) continue;
      std::size_t nr = 0;
      is >> tag >> nr;
      std::string line;
      std::getline(is, line);
      bool ok = true;
      std::map<SideWord, SideComb, DegLexLess> tmp;
      for (std::size_t i = 0; i < nr && ok; ++i) {
        std::getline(is, line);
        if (line != "row") {
          ok = false;
          break;
        }
        SideComb row;
        if (!loadComb(is, row) || row.empty()) {
          ok = false;
          break;
        }
        SideWord leadWord = row.rbegin()->first;
        tmp.emplace(leadWord, std::move(row));
      }
      if (ok) {
        rows = std::move(tmp);
        return true;
      }
    }
    return false;
  }
};

SideReducer::SideReducer(const SatakeDiagram& d, const OracleOptions& opts)
    : impl_(std::make_unique<Impl>(d, opts)) {}

SideReducer::~SideReducer() {
  std::lock_guard<std::recursive_mutex> lock(impl_->mu);
  impl_->saveGS();
}

double SideReducer::componentWordCount(const IntVec& weight) {
  double total = 1.0;
  int n = 0;
  for (int i = 0; i < weight.size(); ++i) {
    for (int k = 1; k <= weight(i); ++k) {
      ++n;
      total = total * n / k;
      if (total > 1e15) return total;
    }
  }
  return total;
}

const SideComb& SideReducer::reduceWord(const SideWord& w) {
  auto& I = *impl_;
  std::lock_guard<std::recursive_mutex> lock(I.mu);
  auto it = I.wordMemo.find(w);
  if (it != I.wordMemo.end()) return it->second;
  IntVec wt = sideWordWeight(I.d, w);
  if (htOf(wt) > I.opts.maxComponentHeight)
    throw BudgetExceeded("weight component height " + std::to_string(htOf(wt)) + " exceeds budget");
  double cnt = componentWordCount(wt);
  if (cnt > static_cast<double>(I.opts.maxComponentWords))
    throw BudgetExceeded("weight component has ~" + std::to_string(cnt) + " words, over budget");
  peakWords_ = std::max(peakWords_, static_cast<std::size_t>(cnt));
  SideComb in;
  combAdd(in, w, RationalFunc(1));
  SideComb red;
  if (cnt <= static_cast<double>(I.opts.echelonMaxWords)) {
    auto& rows = I.echelonFor(wt, 'p');
    red = I.reduceEch(rows, in);
  } else {
    I.ensureComplete(wt);
    red = I.reduceGS(in);
  }
  return I.wordMemo.emplace(w, std::move(red)).first->second;
}

SideComb SideReducer::reduceComb(const SideComb& comb) {
  SideComb out;
  for (const auto& [w, c] : comb) combAxpy(out, c, reduceWord(w));
  return out;
}

std::size_t SideReducer::basisSize() const {
  std::lock_guard<std::recursive_mutex> lock(impl_->mu);
  return impl_->basis.size();
}

std::size_t SideReducer::echelonComponents() const {
  std::lock_guard<std::recursive_mutex> lock(impl_->mu);
  return impl_->echelons.size();
}

std::vector<SideWord> SideReducer::irreducibleWords(const IntVec& weight) {
  auto& I = *impl_;
  std::lock_guard<std::recursive_mutex> lock(I.mu);
  std::vector<SideWord> out;
  double cnt = componentWordCount(weight);
  if (cnt > 200000) throw BudgetExceeded("irreducibleWords probe too large");
  if (cnt <= static_cast<double>(I.opts.echelonMaxWords)) {
    auto& rows = I.echelonFor(weight, 'p');
    for (const auto& w : enumerateWords(weight))
      if (!rows.count(w)) out.push_back(w);
  } else {
    I.ensureComplete(weight);
    for (const auto& w : enumerateWords(weight)) {
      bool reducible = false;
      for (const auto& g : I.basis)
        if (w.find(g.rbegin()->first) != SideWord::npos) {
          reducible = true;
          break;
        }
      if (!reducible) out.push_back(w);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// UAlgebra
// ---------------------------------------------------------------------------

UAlgebra::UAlgebra(const SatakeDiagram& d, OracleOptions opts)
    : d_(d), opts_(std::move(opts)), reducer_(std::make_shared<SideReducer>(d_, opts_)) {}

std::u32string UAlgebra::packKey(const SideWord& f, const std::vector<int>& k, const SideWord& e) {
  std::u32string key;
  key.reserve(f.size() + k.size() + e.size() + 2);
  key += f;
  key.push_back(kSep1);
  for (int x : k) key.push_back(static_cast<char32_t>(x + 0x8000));
  key.push_back(kSep2);
  key += e;
  return key;
}

void UAlgebra::unpackKey(const std::u32string& key, SideWord& f, std::vector<int>& k, SideWord& e) const {
  f.clear();
  k.clear();
  e.clear();
  std::size_t i = 0;
  while (i < key.size() && key[i] != kSep1) f.push_back(key[i++]);
  ++i;
  while (i < key.size() && key[i] != kSep2) k.push_back(static_cast<int>(key[i++]) - 0x8000);
  ++i;
  while (i < key.size()) e.push_back(key[i++]);
}

UAlgebra::NF UAlgebra::nfScalar(const RationalFunc& c) const {
  NF nf;
  if (!c.isZero()) nf.emplace(packKey({}, std::vector<int>(static_cast<std::size_t>(2 * d_.n), 0), {}), c);
  return nf;
}

UAlgebra::NF UAlgebra::nfGenerator(GenSymbol s) const {
  std::vector<int> k(static_cast<std::size_t>(2 * d_.n), 0);
  NF nf;
  switch (s.kind) {
    case SymKind::E:
      nf.emplace(packKey({}, k, SideWord{static_cast<char32_t>(s.node)}), RationalFunc(1));
      return nf;
    case SymKind::F:
      nf.emplace(packKey(SideWord{static_cast<char32_t>(s.node)}, k, {}), RationalFunc(1));
      return nf;
    case SymKind::Kt:
      k[static_cast<std::size_t>(s.node)] = 1;
      break;
    case SymKind::KtI:
      k[static_cast<std::size_t>(s.node)] = -1;
      break;
    case SymKind::Ktp:
      k[static_cast<std::size_t>(d_.n + s.node)] = 1;
      break;
    case SymKind::KtpI:
      k[static_cast<std::size_t>(d_.n + s.node)] = -1;
      break;
    default:
      throw MathError("nfGenerator: not a U-algebra symbol: " + s.str());
  }
  nf.emplace(packKey({}, k, {}), RationalFunc(1));
  return nf;
}

IntVec UAlgebra::sideWeight(const SideWord& w) const { return sideWordWeight(d_, w); }

std::int64_t UAlgebra::cartanPair(const std::vector<int>& kexp, const IntVec& weight) const {
  std::int64_t total = 0;
  for (int i = 0; i < d_.n; ++i) {
    std::int64_t diff = kexp[static_cast<std::size_t>(d_.n + i)] - kexp[static_cast<std::size_t>(i)];
    if (diff == 0) continue;
    for (int j = 0; j < d_.n; ++j) total += diff * d_.cartan(i, j) * weight(j);
  }
  return total;
}

const std::vector<UAlgebra::CrossTerm>& UAlgebra::crossOneF(const SideWord& e, int b) {
  auto key = std::make_pair(e, b);
  auto it = crossMemo_.find(key);
  if (it != crossMemo_.end()) return it->second;
  std::vector<CrossTerm> out;
  if (e.empty()) {
    out.push_back(CrossTerm{true, std::vector<int>(static_cast<std::size_t>(2 * d_.n), 0), {}, RationalFunc(1)});
  } else {
    SideWord e1 = e.substr(0, e.size() - 1);
    int a = static_cast<int>(e.back());
    // E_{e1} (E_a F_b) = E_{e1} F_b E_a + delta_{ab} E_{e1} (Kt_a - Ktp_a)/(v - v^{-1})
    const auto& rec = crossOneF(e1, b);
    for (const auto& t : rec) {
      CrossTerm nt = t;
      nt.e.push_back(static_cast<char32_t>(a));
      out.push_back(std::move(nt));
    }
    if (a == b) {
      IntVec w1 = sideWeight(e1);
      std::int64_t s = 0;
      for (int j = 0; j < d_.n; ++j) s += d_.cartan(a, j) * w1(j);
      RationalFunc denom = vpow(1) - vpow(-1);
      CrossTerm kt;
      kt.hasF = false;
      kt.kexp.assign(static_cast<std::size_t>(2 * d_.n), 0);
      kt.kexp[static_cast<std::size_t>(a)] = 1;
      kt.e = e1;
      kt.c = vpow(static_cast<int>(-s)) / denom;
      out.push_back(std::move(kt));
      CrossTerm ktp;
      ktp.hasF = false;
      ktp.kexp.assign(static_cast<std::size_t>(2 * d_.n), 0);
      ktp.kexp[static_cast<std::size_t>(d_.n + a)] = 1;
      ktp.e = e1;
      ktp.c = -(vpow(static_cast<int>(s)) / denom);
      out.push_back(std::move(ktp));
    }
  }
  return crossMemo_.emplace(std::move(key), std::move(out)).first->second;
}

const std::vector<UAlgebra::CrossFull>& UAlgebra::crossing(const SideWord& e, const SideWord& f) {
  auto key = std::make_pair(e, f);
  auto it = crossFullMemo_.find(key);
  if (it != crossFullMemo_.end()) return it->second;
  std::vector<CrossFull> out;
  if (f.empty() || e.empty()) {
    out.push_back(CrossFull{f, std::vector<int>(static_cast<std::size_t>(2 * d_.n), 0), e, RationalFunc(1)});
  } else {
    int b = static_cast<int>(f.front());
    SideWord rest = f.substr(1);
    const auto& step = crossOneF(e, b);
    for (const auto& t : step) {
      const auto& tail = crossing(t.e, rest);
      for (const auto& u : tail) {
        CrossFull nt;
        nt.f = (t.hasF ? SideWord{static_cast<char32_t>(b)} : SideWord{}) + u.f;
        nt.kexp = t.kexp;
        for (std::size_t i = 0; i < nt.kexp.size(); ++i) nt.kexp[i] += u.kexp[i];
        nt.e = u.e;
        // move K^{t.kexp} right past F-part u.f
        std::int64_t tw = cartanPair(t.kexp, sideWeight(u.f));
        nt.c = t.c * u.c * vpow(static_cast<int>(tw));
        out.push_back(std::move(nt));
      }
    }
  }
  return crossFullMemo_.emplace(std::move(key), std::move(out)).first->second;
}

UAlgebra::NF UAlgebra::nfAdd(NF a, const NF& b) const {
  for (const auto& [k, c] : b) {
    auto [it, inserted] = a.emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second.isZero()) a.erase(it);
    }
  }
  return a;
}

void UAlgebra::nfScale(NF& a, const RationalFunc& c) const {
  if (c.isZero()) {
    a.clear();
    return;
  }
  for (auto& [k, x] : a) x = x * c;
}

UAlgebra::NF UAlgebra::nfMul(const NF& a, const NF& b) {
  std::lock_guard<std::mutex> lock(mu_);
  NF raw;
  auto addRaw = [&raw](const std::u32string& key, const RationalFunc& c) {
    auto [it, inserted] = raw.emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (it->second.isZero()) raw.erase(it);
    }
  };
  SideWord f1, e1, f2, e2;
  std::vector<int> k1, k2;
  for (const auto& [ka, ca] : a) {
    unpackKey(ka, f1, k1, e1);
    for (const auto& [kb, cb] : b) {
      unpackKey(kb, f2, k2, e2);
      const auto& crossTerms = crossing(e1, f2);
      for (const auto& t : crossTerms) {
        std::vector<int> k(k1);
        for (std::size_t i = 0; i < k.size(); ++i) k[i] += t.kexp[i] + k2[i];
        std::int64_t tw = cartanPair(k1, sideWeight(t.f)) + cartanPair(k2, sideWeight(t.e));
        RationalFunc c = ca * cb * t.c * vpow(static_cast<int>(tw));
        addRaw(packKey(f1 + t.f, k, t.e + e2), c);
      }
    }
  }
  // Serre-reduce both sides of every raw term.
  NF out;
  SideWord f, e;
  std::vector<int> k;
  for (const auto& [key, c] : raw) {
    unpackKey(key, f, k, e);
    const SideComb& rf = reducer_->reduceWord(f);
    const SideComb& re = reducer_->reduceWord(e);
    for (const auto& [fw, fc] : rf)
      for (const auto& [ew, ec] : re) {
        RationalFunc cc = c * fc * ec;
        if (cc.isZero()) continue;
        auto kk = packKey(fw, k, ew);
        auto [it, inserted] = out.emplace(kk, cc);
        if (!inserted) {
          it->second += cc;
          if (it->second.isZero()) out.erase(it);
        }
      }
  }
  return out;
}

UAlgebra::NF UAlgebra::nfFromPoly(const NCPoly& p) {
  NF acc;
  for (const auto& [w, c] : p.terms()) {
    NF cur = nfScalar(c);
    for (char32_t ch : w) {
      GenSymbol s = GenSymbol::unpack(ch);
      cur = nfMul(cur, nfGenerator(s));
    }
    acc = nfAdd(std::move(acc), cur);
  }
  return acc;
}

NormalForm UAlgebra::toNormalForm(const NF& nf) const {
  NormalForm out;
  for (const auto& [key, c] : nf) {
    NFTerm t;
    t.coeff = c;
    unpackKey(key, t.f, t.kexp, t.e);
    out.terms.push_back(std::move(t));
  }
  return out;
}

NormalForm UAlgebra::straighten(const NCPoly& p) { return toNormalForm(nfFromPoly(p)); }

NCPoly NormalForm::toPoly(const SatakeDiagram& d) const {
  NCPoly out;
  for (const auto& t : terms) {
    Word w;
    for (char32_t c : t.f) w.push_back(GenSymbol{SymKind::F, static_cast<int>(c), 0}.pack());
    for (int i = 0; i < d.n; ++i) {
      int x = t.kexp[static_cast<std::size_t>(i)];
      for (int r = 0; r < std::abs(x); ++r)
        w.push_back(GenSymbol{x > 0 ? SymKind::Kt : SymKind::KtI, i, 0}.pack());
    }
    for (int i = 0; i < d.n; ++i) {
      int x = t.kexp[static_cast<std::size_t>(d.n + i)];
      for (int r = 0; r < std::abs(x); ++r)
        w.push_back(GenSymbol{x > 0 ? SymKind::Ktp : SymKind::KtpI, i, 0}.pack());
    }
    for (char32_t c : t.e) w.push_back(GenSymbol{SymKind::E, static_cast<int>(c), 0}.pack());
    out.addTerm(w, t.coeff);
  }
  return out;
}

bool UAlgebra::uIsZero(const NCPoly& p) { return nfFromPoly(p).empty(); }

bool UAlgebra::uEqual(const NCPoly& a, const NCPoly& b) { return uIsZero(a - b); }

NCPoly UAlgebra::serreReduceSide(bool plusSide, const NCPoly& sideComb) {
  SideComb in;
  IntVec wt;
  bool first = true;
  for (const auto& [w, c] : sideComb.terms()) {
    SideWord sw;
    for (char32_t ch : w) {
      GenSymbol s = GenSymbol::unpack(ch);
      if (plusSide ? s.kind != SymKind::E : s.kind != SymKind::F)
        throw MathError("serre_reduce: word contains a symbol of the wrong side");
      sw.push_back(static_cast<char32_t>(s.node));
    }
    IntVec x = sideWeight(sw);
    if (first) {
      wt = x;
      first = false;
    } else if (x != wt) {
      throw MathError("serre_reduce: weight mixing");
    }
    combAdd(in, sw, c);
  }
  SideComb red = reducer_->reduceComb(in);
  NCPoly out;
  for (const auto& [sw, c] : red) {
    Word w;
    for (char32_t ch : sw)
      w.push_back(GenSymbol{plusSide ? SymKind::E : SymKind::F, static_cast<int>(ch), 0}.pack());
    out.addTerm(w, c);
  }
  return out;
}

std::size_t UAlgebra::peakComponentWords() const { return reducer_->peakComponentWords(); }

// ---- Lusztig braid operators ----

namespace {

NCPoly kMonomialPoly(const SatakeDiagram& d, const IntVec& exp, bool primed) {
  Word w;
  for (int i = 0; i < d.n; ++i) {
    int x = static_cast<int>(exp(i));
    SymKind pos = primed ? SymKind::Ktp : SymKind::Kt;
    SymKind neg = primed ? SymKind::KtpI : SymKind::KtI;
    for (int r = 0; r < std::abs(x); ++r) w.push_back(GenSymbol{x > 0 ? pos : neg, i, 0}.pack());
  }
  return NCPoly::monomial(w, RationalFunc(1));
}

NCPoly genPow(SymKind kind, int node, int r) {
  NCPoly p = NCPoly::one();
  for (int t = 0; t < r; ++t) p = p * NCPoly::gen(GenSymbol{kind, node, 0});
  return p;
}

}  // namespace

NCPoly UAlgebra::sigmaU(const NCPoly& x) const {
  NCPoly out;
  for (const auto& [w, c] : x.terms()) {
    Word r;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      GenSymbol s = GenSymbol::unpack(*it);
      switch (s.kind) {
        case SymKind::Kt: s.kind = SymKind::Ktp; break;
        case SymKind::Ktp: s.kind = SymKind::Kt; break;
        case SymKind::KtI: s.kind = SymKind::KtpI; break;
        case SymKind::KtpI: s.kind = SymKind::KtI; break;
        default: break;
      }
      r.push_back(s.pack());
    }
    out.addTerm(r, c);
  }
  return out;
}

NCPoly UAlgebra::lusztigT(int i, bool inverse, const NCPoly& x) {
  if (inverse) return sigmaU(lusztigT(i, false, sigmaU(x)));
  NCPoly out;
  for (const auto& [w, c] : x.terms()) {
    NCPoly acc(c);
    for (char32_t ch : w) {
      GenSymbol s = GenSymbol::unpack(ch);
      NCPoly img;
      IntVec alpha = IntVec::Zero(d_.n);
      switch (s.kind) {
        case SymKind::E:
          if (s.node == i) {
            img = -(NCPoly::gen(GenSymbol{SymKind::F, i, 0}) * NCPoly::gen(GenSymbol{SymKind::KtpI, i, 0}));
          } else {
            int cij = static_cast<int>(d_.cartan(i, s.node));
            for (int r = 0; r <= -cij; ++r) {
              RationalFunc coeff = vpow(-r) / RationalFunc(vfact(-cij - r) * vfact(r));
              if (r % 2 == 1) coeff = -coeff;
              img += coeff * (genPow(SymKind::E, i, -cij - r) * NCPoly::gen(GenSymbol{SymKind::E, s.node, 0}) *
                              genPow(SymKind::E, i, r));
            }
          }
          break;
        case SymKind::F:
          if (s.node == i) {
            img = -(NCPoly::gen(GenSymbol{SymKind::KtI, i, 0}) * NCPoly::gen(GenSymbol{SymKind::E, i, 0}));
          } else {
            int cij = static_cast<int>(d_.cartan(i, s.node));
            for (int r = 0; r <= -cij; ++r) {
              RationalFunc coeff = vpow(r) / RationalFunc(vfact(r) * vfact(-cij - r));
              if (r % 2 == 1) coeff = -coeff;
              img += coeff * (genPow(SymKind::F, i, r) * NCPoly::gen(GenSymbol{SymKind::F, s.node, 0}) *
                              genPow(SymKind::F, i, -cij - r));
            }
          }
          break;
        case SymKind::Kt:
        case SymKind::KtI: {
          alpha(s.node) = s.kind == SymKind::Kt ? 1 : -1;
          IntVec img_exp = alpha;
          img_exp(i) -= d_.cartan(i, s.node) * alpha(s.node);
          img = kMonomialPoly(d_, img_exp, false);
          break;
        }
        case SymKind::Ktp:
        case SymKind::KtpI: {
          alpha(s.node) = s.kind == SymKind::Ktp ? 1 : -1;
          IntVec img_exp = alpha;
          img_exp(i) -= d_.cartan(i, s.node) * alpha(s.node);
          img = kMonomialPoly(d_, img_exp, true);
          break;
        }
        default:
          throw MathError("lusztigT: not a U-algebra symbol");
      }
      acc = acc * img;
    }
    out += acc;
  }
  return out;
}

}  // namespace iqa
