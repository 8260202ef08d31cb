#pragma once

#include <cstdint>
#include <vector>

#include "rsr/model.hpp"

namespace rsr {

/// Lower references bound S <= m' from above; upper references bound
/// S >= m' + 1 from below.
enum class Side { Lower, Upper };

const char* to_string(Side side);

struct ReferenceState {
  StateVector vector;
  Side side;
  int threshold;
};

enum class InsertOutcome { Inserted, Redundant };

/// Non-dominated set of reference states for one side and threshold.
/// Lower sets keep componentwise-maximal members, upper sets minimal ones.
class ReferenceSet {
 public:
  ReferenceSet(Side side, int threshold) : side_(side), threshold_(threshold) {}

  Side side() const { return side_; }
  int threshold() const { return threshold_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<StateVector>& members() const { return members_; }
  /// Stage-1 iteration that produced each member, or -1 when unknown.
  const std::vector<std::int64_t>& found_at() const { return found_at_; }

  /// True if x is classified by some member.
  bool covers(StateView x) const;

  /// Inserts unless a member already makes `candidate` redundant; drops
  /// members the candidate makes redundant.
  InsertOutcome insert(const ReferenceState& candidate, std::int64_t found_at = -1);

 private:
  // a makes b redundant: Lower b <= a, Upper b >= a.
  bool makes_redundant(StateView a, StateView b) const;

  Side side_;
  int threshold_;
  std::vector<StateVector> members_;
  std::vector<std::int64_t> found_at_;
};

InsertOutcome insert_nondominated(ReferenceSet& set, const ReferenceState& candidate);

struct BoundarySearchResult {
  ReferenceState reference;
  int evaluations = 0;
};

/// Componentwise boundary search from x0 at threshold m'. If Phi(x0) <= m'
/// each component in index order is raised one unit at a time while Phi
/// stays <= m'; otherwise components are lowered while Phi stays >= m'+1.
/// Uses at most N * (M - 1) + 1 evaluations.
BoundarySearchResult boundary_search(const SystemModel& model, StateView x0, int threshold);

/// Classifies x0 with a single evaluation and returns it unchanged as a
/// reference (the search-free ablation).
BoundarySearchResult raw_reference(const SystemModel& model, StateView x0, int threshold);

}  // namespace rsr
