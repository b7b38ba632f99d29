#pragma once

#include "regret/errors.hpp"
#include "regret/oracle.hpp"

namespace regret {

/// One complete problem statement: the parametric family both pipelines fit,
/// the data-generating law, and the decision cost, plus solver accuracy
/// knobs.  Everything downstream (estimators, theory, experiments) consumes
/// an Instance.
struct Instance {
  FamilyPtr family;
  TrueDistribution truth;
  CostModel cost;
  OracleOptions oracle;
  QuadSpec quad;

  void validate() const {
    if (!family) throw DomainError("instance: family is missing");
    cost.validate();
    if (family->data_dim() != cost.dim) {
      throw DomainError("instance: family data dimension != cost dimension");
    }
    if (truth.dim() != cost.dim) {
      throw DomainError("instance: true-distribution dimension != cost dimension");
    }
  }
};

}  // namespace regret
