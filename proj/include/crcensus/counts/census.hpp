#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crcensus/critical/profile.hpp"
#include "crcensus/interaction/matrix.hpp"
#include "crcensus/quadrature/constants.hpp"

namespace crcensus::counts {

/// An unordered subset of K1 whose interaction matrix is positive definite.
struct TupleEntry {
  std::vector<std::size_t> positions;  // indices into the K1 input list, increasing
  std::vector<std::string> members;
  std::vector<int> m;
  double rho = 0.0;

  int m_sum() const noexcept;
};

struct SingleEntry {
  std::string id;
  int m = 0;
};

struct EnumerationConfig {
  interaction::GreenKernelConfig green;
  double pd_margin = interaction::kDefaultPdMargin;
};

/// Level-wise enumeration of the positive definite subsets: a (p+1)-subset is
/// tested only if all of its p-subsets passed. Output is sorted by size, then
/// lexicographically by position. MarginalCase becomes ConditionCViolation.
std::vector<TupleEntry> enumerate_k1_plus(std::span<const critical::CriticalPointProfile> k1,
                                          const quadrature::StructuralConstants& constants_beta2,
                                          const EnumerationConfig& config = {});

enum class AtInfinityKind { Single, Tuple };

struct CriticalAtInfinity {
  AtInfinityKind kind = AtInfinityKind::Single;
  int index = 0;
  std::vector<std::string> members;
  int m_sum = 0;
  std::optional<double> rho;
};

struct Census {
  std::vector<CriticalAtInfinity> points;  // K2 singles first, then tuples in enumeration order
  std::vector<SingleEntry> k2;
  std::vector<TupleEntry> k1_plus;
  int l_plus = 0;
  int L0 = 0;  // 0 when there is no critical point at infinity
};

/// Single: 3 - m; tuple of size p: 4p - 1 - sum m.
Census indices_at_infinity(std::span<const TupleEntry> k1_plus, std::span<const SingleEntry> k2);

struct GateResult {
  int k = 0;
  int sum = 0;
  bool cond1 = false;
  bool cond2 = false;
  bool verdict = false;
};

/// Existence gate at k >= 1 using the m-based selections;
/// throws InternalInconsistency if it disagrees with the index-based selection.
GateResult existence_gate(const Census& census, int k);

/// Sum of (-1)^index over critical points at infinity with index <= k - 1.
int index_filtered_sum(const Census& census, int k);

/// |1 - index_filtered_sum|.
int multiplicity_bound(const Census& census, int k);

/// |1 + sum_{K2, m <= 4-k} (-1)^m - sum_{tuples, sum m >= 4p-k} (-1)^{sum m}|, as printed.
int printed_multiplicity_bound(const Census& census, int k);

struct FullCriterion {
  int k = 0;  // L0 + 1
  bool exists = false;
  int total_bound = 0;
  int printed_bound = 0;
  GateResult gate;
};

/// Gate and bound at k = L0 + 1; throws InternalInconsistency if condition 2 fails there.
FullCriterion full_criterion(const Census& census);

}  // namespace crcensus::counts
