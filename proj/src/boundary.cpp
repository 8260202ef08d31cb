#include "rsr/boundary.hpp"

#include <string>

namespace rsr {

namespace {

bool leq(StateView a, StateView b) {
  for (std::size_t n = 0; n < a.size(); ++n)
    if (a[n] > b[n]) return false;
  return true;
}

void check_threshold(const SystemModel& model, int threshold) {
  if (threshold < 0 || threshold > model.n_system_states() - 2)
    throw ModelError("threshold " + std::to_string(threshold) + " outside [0, " +
                     std::to_string(model.n_system_states() - 2) + "]");
}

}  // namespace

const char* to_string(Side side) { return side == Side::Lower ? "lower" : "upper"; }

bool ReferenceSet::makes_redundant(StateView a, StateView b) const {
  return side_ == Side::Lower ? leq(b, a) : leq(a, b);
}

bool ReferenceSet::covers(StateView x) const {
  for (const auto& m : members_)
    if (makes_redundant(m, x)) return true;
  return false;
}

InsertOutcome ReferenceSet::insert(const ReferenceState& candidate, std::int64_t found_at) {
  if (candidate.side != side_ || candidate.threshold != threshold_)
    throw ModelError(std::string("candidate is a ") + to_string(candidate.side) + " reference at m'=" +
                     std::to_string(candidate.threshold) + " but the set is " + to_string(side_) +
                     " at m'=" + std::to_string(threshold_));
  if (!members_.empty() && members_.front().size() != candidate.vector.size())
    throw ModelError("candidate length does not match the set");
  if (covers(candidate.vector)) return InsertOutcome::Redundant;
  std::size_t kept = 0;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (makes_redundant(candidate.vector, members_[i])) continue;
    if (kept != i) {
      members_[kept] = std::move(members_[i]);
      found_at_[kept] = found_at_[i];
    }
    ++kept;
  }
  members_.resize(kept);
  found_at_.resize(kept);
  members_.push_back(candidate.vector);
  found_at_.push_back(found_at);
  return InsertOutcome::Inserted;
}

InsertOutcome insert_nondominated(ReferenceSet& set, const ReferenceState& candidate) {
  return set.insert(candidate);
}

BoundarySearchResult boundary_search(const SystemModel& model, StateView x0, int threshold) {
  check_threshold(model, threshold);
  StateVector x(x0.begin(), x0.end());
  BoundarySearchResult result;
  auto phi = [&](const StateVector& v) {
    ++result.evaluations;
    return model.evaluate(v);
  };

  const int top = model.n_component_states() - 1;
  const bool lower = phi(x) <= threshold;
  for (std::size_t n = 0; n < x.size(); ++n) {
    if (lower) {
      while (x[n] < top) {
        ++x[n];
        if (phi(x) > threshold) {
          --x[n];
          break;
        }
      }
    } else {
      while (x[n] > 0) {
        --x[n];
        if (phi(x) <= threshold) {
          ++x[n];
          break;
        }
      }
    }
  }
  result.reference = {std::move(x), lower ? Side::Lower : Side::Upper, threshold};
  return result;
}

BoundarySearchResult raw_reference(const SystemModel& model, StateView x0, int threshold) {
  check_threshold(model, threshold);
  const int s = model.evaluate(x0);
  return {{StateVector(x0.begin(), x0.end()), s <= threshold ? Side::Lower : Side::Upper, threshold},
          1};
}

}  // namespace rsr
