#ifndef IQA_WEYL_HPP
#define IQA_WEYL_HPP

#include <optional>
#include <string>
#include <vector>

#include "iqa/satake.hpp"

namespace iqa {

/// Real affine roots live in Z^I as coefficient vectors over the simple
/// affine roots. Relative roots are stored doubled (2*abar) to stay integral.
struct AffRoot {
  IntVec coeffs;
  bool doubled = false;  // true: vector is 2*abar

  int level(const SatakeDiagram& d) const;       // coefficient of delta
  IntVec finitePart(const SatakeDiagram& d) const;
  bool isPositive(const SatakeDiagram& d) const;
  bool isZero() const { return coeffs.isZero(); }
  std::string str(const SatakeDiagram& d) const;
};

enum class WeylMode { Ordinary, Relative };

/// Element of the extended affine Weyl group (or its tau-relative form),
/// stored as its action matrix on the affine root lattice.
class WeylElt {
 public:
  WeylElt() = default;
  WeylElt(const SatakeDiagram* d, WeylMode mode);

  static WeylElt identity(const SatakeDiagram& d, WeylMode mode);
  static WeylElt fromMatrix(const SatakeDiagram& d, WeylMode mode, IntMat m);
  static WeylElt simpleRefl(const SatakeDiagram& d, int i);             // ordinary s_i
  static WeylElt relRefl(const SatakeDiagram& d, int i);                // r_i (i a rep)
  static WeylElt translation(const SatakeDiagram& d, const IntVec& fw); // t_lambda, lambda = sum fw[i] omega_i

  const IntMat& matrix() const { return m_; }
  WeylMode mode() const { return mode_; }
  const SatakeDiagram& diagram() const { return *d_; }

  AffRoot act(const AffRoot& r) const;
  WeylElt operator*(const WeylElt& o) const;
  WeylElt inverse() const;
  bool operator==(const WeylElt& o) const { return m_ == o.m_; }
  bool isIdentity() const;

  std::string matrixKey() const;  // for hashing in search oracles

 private:
  const SatakeDiagram* d_ = nullptr;
  WeylMode mode_ = WeylMode::Ordinary;
  IntMat m_;
};

/// Finite positive roots of the underlying finite diagram, as lattice vectors.
const std::vector<IntVec>& finitePositiveRoots(const SatakeDiagram& d);

/// Deduplicated doubled relative finite positive roots {2*abar}.
const std::vector<IntVec>& relativeFinitePositiveRoots(const SatakeDiagram& d);

/// Simple root of the ordinary (doubled relative) system.
AffRoot simpleRoot(const SatakeDiagram& d, int i, WeylMode mode);

int length(const WeylElt& x);

struct ReducedWord {
  std::vector<int> word;        // left-to-right product of reflections
  std::vector<int> outerPerm;   // diagram automorphism on nodes
  bool outerIsIdentity() const;
};

ReducedWord reducedWord(const WeylElt& x);
WeylElt recompose(const SatakeDiagram& d, WeylMode mode, const ReducedWord& rw);

/// Applies a node permutation to the lattice (diagram automorphism action).
WeylElt permutationElt(const SatakeDiagram& d, WeylMode mode, const std::vector<int>& perm);

/// t_{varpi_i} (primed: times r_i). i must be a nonzero representative.
WeylElt tVarpi(const SatakeDiagram& d, int i, bool primed);

/// t_{omega_i} (primed: times s_i) in ordinary mode; requires tau(i)=i for
/// the Delta-set use below.
WeylElt tOmega(const SatakeDiagram& d, int i, bool primed);

enum class DeltaMode { OrdinaryOmega, RelativeVarpi };

struct InversionSet {
  std::vector<AffRoot> roots;
};

/// Delta(omega_i') for tau(i)=i, or Delta(varpi_i') for c_{i,tau i}=0.
InversionSet deltaSet(const SatakeDiagram& d, int i, DeltaMode mode);

bool isDiagramAutomorphism(const SatakeDiagram& d, const std::vector<int>& perm);

}  // namespace iqa

#endif
