#ifndef IQA_SATAKE_HPP
#define IQA_SATAKE_HPP

#include <Eigen/Core>

#include <string>
#include <vector>

#include "iqa/scalar.hpp"

namespace iqa {

using IntMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

enum class Family { AIII, DI, EI6, SplitA1 };

std::string familyName(Family f);
Family familyFromName(const std::string& name);

/// Affine Satake diagram: nodes {0} ∪ I_0 with the affine node 0,
/// affine ADE Cartan matrix, involution τ fixing 0.
struct SatakeDiagram {
  Family family = Family::AIII;
  int rank = 2;           // family parameter r
  int n = 0;              // number of nodes |I|
  IntMat cartan;          // n x n
  std::vector<int> tau;   // involution on 0..n-1
  std::vector<int> reps;  // orbit representatives, ascending (includes 0)
  IntVec marks;           // delta = sum marks[j] alpha_j, marks[0] = 1
  std::vector<int> osign; // o(i) for i >= 1; osign[0] unused (= 0)

  bool isRep(int i) const;
  int rep(int i) const;  // representative of i's orbit
  std::string key() const;  // cache key, e.g. "AIII-2"
  std::uint64_t presentationHash() const;
};

SatakeDiagram buildDiagram(Family family, int rank);

struct RelativeData {
  std::vector<int> nodes;   // = diagram reps
  IntMat relCartan;         // indexed by reps order
  IntMat pairing2;          // 2*(abar_i, abar_j)
  std::string relType;      // e.g. "C2(1)"
  IntMat coxeterM;          // m(i,j) for braid relations
};

RelativeData relativeCartan(const SatakeDiagram& d);

/// o : I_0 -> {±1}, o(j) = -o(i) on edges, o(min finite node) = +1.
std::vector<int> signFunction(const SatakeDiagram& d);

}  // namespace iqa

#endif
