#include "crcensus/counts/census.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "crcensus/errors.hpp"

namespace crcensus::counts {

namespace {

int parity(int n) { return (n % 2 == 0) ? 1 : -1; }

void check_k(int k) {
  if (k < 1) throw DomainError("k must be a positive integer");
}

}  // namespace

int TupleEntry::m_sum() const noexcept { return std::accumulate(m.begin(), m.end(), 0); }

std::vector<TupleEntry> enumerate_k1_plus(std::span<const critical::CriticalPointProfile> k1,
                                          const quadrature::StructuralConstants& constants_beta2,
                                          const EnumerationConfig& config) {
  std::vector<int> m(k1.size());
  for (std::size_t i = 0; i < k1.size(); ++i) {
    const auto cls = critical::classify_point(k1[i], constants_beta2);
    if (cls.set != critical::PointSet::K1) throw DomainError("profile '" + k1[i].id + "' is not in K1");
    m[i] = cls.m;
  }

  auto test = [&](const std::vector<std::size_t>& positions) -> std::optional<TupleEntry> {
    std::vector<critical::CriticalPointProfile> subset;
    for (std::size_t p : positions) subset.push_back(k1[p]);
    const auto matrix = interaction::assemble_matrix(subset, constants_beta2, config.green);
    bool pd = false;
    try {
      pd = interaction::is_positive_definite(matrix.entries, config.pd_margin);
    } catch (const MarginalCase& e) {
      std::ostringstream msg;
      msg << "condition (C) cannot be decided: least eigenvalue " << e.rho() << " of {";
      for (std::size_t i = 0; i < matrix.labels.size(); ++i) msg << (i ? ", " : "") << matrix.labels[i];
      msg << "} lies within pd_margin " << config.pd_margin;
      throw ConditionCViolation(msg.str(), matrix.labels, e.rho());
    }
    if (!pd) return std::nullopt;
    TupleEntry entry;
    entry.positions = positions;
    entry.members = matrix.labels;
    for (std::size_t p : positions) entry.m.push_back(m[p]);
    entry.rho = matrix.rho;
    return entry;
  };

  std::vector<TupleEntry> out;
  std::vector<std::vector<std::size_t>> level;
  for (std::size_t i = 0; i < k1.size(); ++i) {
    if (auto e = test({i})) {
      level.push_back(e->positions);
      out.push_back(std::move(*e));
    }
  }
  while (level.size() > 1) {
    const std::set<std::vector<std::size_t>> passed(level.begin(), level.end());
    std::vector<std::vector<std::size_t>> next;
    // join sets that agree on all but the last element; `level` is lexicographically sorted
    for (std::size_t a = 0; a < level.size(); ++a) {
      for (std::size_t b = a + 1; b < level.size(); ++b) {
        const auto& x = level[a];
        const auto& y = level[b];
        if (!std::equal(x.begin(), x.end() - 1, y.begin())) break;
        std::vector<std::size_t> candidate = x;
        candidate.push_back(y.back());
        bool closed = true;
        for (std::size_t drop = 0; drop + 2 < candidate.size() && closed; ++drop) {
          std::vector<std::size_t> face = candidate;
          face.erase(face.begin() + static_cast<std::ptrdiff_t>(drop));
          closed = passed.count(face) > 0;
        }
        if (!closed) continue;
        if (auto e = test(candidate)) {
          next.push_back(candidate);
          out.push_back(std::move(*e));
        }
      }
    }
    level = std::move(next);
  }
  return out;
}

Census indices_at_infinity(std::span<const TupleEntry> k1_plus, std::span<const SingleEntry> k2) {
  Census out;
  out.k2.assign(k2.begin(), k2.end());
  out.k1_plus.assign(k1_plus.begin(), k1_plus.end());
  bool any = false;
  for (const auto& s : k2) {
    if (s.m < 0 || s.m > 3) throw DomainError("m must lie in [0,3] for '" + s.id + "'");
    CriticalAtInfinity c;
    c.kind = AtInfinityKind::Single;
    c.index = 3 - s.m;
    c.members = {s.id};
    c.m_sum = s.m;
    out.L0 = any ? std::max(out.L0, c.index) : c.index;
    any = true;
    out.points.push_back(std::move(c));
  }
  for (const auto& t : k1_plus) {
    const int p = static_cast<int>(t.members.size());
    if (p == 0 || t.m.size() != t.members.size()) throw DomainError("malformed K1+ tuple");
    CriticalAtInfinity c;
    c.kind = AtInfinityKind::Tuple;
    c.m_sum = t.m_sum();
    c.index = 4 * p - 1 - c.m_sum;
    c.members = t.members;
    c.rho = t.rho;
    out.l_plus = std::max(out.l_plus, p);
    out.L0 = any ? std::max(out.L0, c.index) : c.index;
    any = true;
    out.points.push_back(std::move(c));
  }
  return out;
}

int index_filtered_sum(const Census& census, int k) {
  check_k(k);
  int sum = 0;
  for (const auto& c : census.points) {
    if (c.index <= k - 1) sum += parity(c.index);
  }
  return sum;
}

GateResult existence_gate(const Census& census, int k) {
  check_k(k);
  GateResult out;
  out.k = k;
  out.cond2 = true;
  for (const auto& s : census.k2) {
    if (s.m >= 4 - k) out.sum += parity(s.m + 1);
    if (3 - s.m == k) out.cond2 = false;
  }
  for (const auto& t : census.k1_plus) {
    const int p = static_cast<int>(t.members.size());
    const int msum = t.m_sum();
    if (msum >= 4 * p - k) out.sum += parity(4 * p - 1 - msum);
    if (msum == 4 * p - (k + 1)) out.cond2 = false;
  }
  const int cross = index_filtered_sum(census, k);
  if (cross != out.sum) {
    std::ostringstream msg;
    msg << "gate sum " << out.sum << " differs from the index-filtered sum " << cross << " at k = " << k;
    throw InternalInconsistency(msg.str());
  }
  out.cond1 = out.sum != 1;
  out.verdict = out.cond1 && out.cond2;
  return out;
}

int multiplicity_bound(const Census& census, int k) { return std::abs(1 - index_filtered_sum(census, k)); }

int printed_multiplicity_bound(const Census& census, int k) {
  check_k(k);
  int value = 1;
  for (const auto& s : census.k2) {
    if (s.m <= 4 - k) value += parity(s.m);
  }
  for (const auto& t : census.k1_plus) {
    const int p = static_cast<int>(t.members.size());
    const int msum = t.m_sum();
    if (msum >= 4 * p - k) value -= parity(msum);
  }
  return std::abs(value);
}

FullCriterion full_criterion(const Census& census) {
  FullCriterion out;
  out.k = census.L0 + 1;
  out.gate = existence_gate(census, out.k);
  if (!out.gate.cond2) {
    std::ostringstream msg;
    msg << "condition 2 fails at k = L0 + 1 = " << out.k << " although every index is at most L0";
    throw InternalInconsistency(msg.str());
  }
  out.exists = out.gate.verdict;
  out.total_bound = multiplicity_bound(census, out.k);
  out.printed_bound = printed_multiplicity_bound(census, out.k);
  return out;
}

}  // namespace crcensus::counts
