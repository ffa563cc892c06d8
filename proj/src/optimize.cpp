#include "cdforge/optimize.hpp"

#include <cmath>
#include <map>

namespace cdforge {

RegionPlan RegionPlan::covering(int n_sites, int width, int stride) {
  if (width < 1 || stride < 1) throw DomainError("RegionPlan: width and stride must be >= 1");
  RegionPlan plan;
  plan.width = width;
  plan.stride = stride;
  if (width >= n_sites) {
    plan.regions.emplace_back(0, n_sites);
    return plan;
  }
  for (int start = 0;; start += stride) {
    int hi = std::min(start + width, n_sites);
    plan.regions.emplace_back(start, hi);
    if (hi == n_sites) break;
  }
  return plan;
}

OptimizeResult optimize_global(const OperatorSum& h, const OperatorSum& dh, int order,
                               AnsatzMode mode, const EnumerationOptions& opts) {
  OptimizeResult res;
  res.set = mode == AnsatzMode::Wnc ? enumerate_terms(h, dh, order, opts)
                                    : nc_merged_set(h, dh, order, opts);
  GramSystem gram = build_gram(res.set, h, dh);
  SolveResult sol = solve(gram);
  res.alpha = std::move(sol.alpha);
  res.residual = sol.residual;
  res.rank = sol.rank;
  res.dh_norm2 = gram.dh_norm2;
  res.action = action_value(gram, res.alpha);
  return res;
}

namespace {

// Key identifying a tuple by its order and global term indices.
using TupleKey = std::pair<int, std::vector<int>>;

}  // namespace

OptimizeResult optimize_local(const OperatorSum& h, const OperatorSum& dh, int order,
                              const RegionPlan& plan, AnsatzMode mode,
                              const EnumerationOptions& opts) {
  if (h.size() != dh.size())
    throw DomainError("optimize_local: H and dH term lists differ in length");
  if (plan.regions.empty()) throw DomainError("optimize_local: empty region plan");

  OptimizeResult res;
  res.set = mode == AnsatzMode::Wnc ? enumerate_terms(h, dh, order, opts)
                                    : nc_merged_set(h, dh, order, opts);

  std::map<TupleKey, std::pair<double, int>> votes;  // key -> (sum, count)
  for (const SiteWindow& region : plan.regions) {
    OperatorSum h_r(h.n_sites, h.local_dim);
    OperatorSum dh_r(h.n_sites, h.local_dim);
    std::vector<int> to_global;
    for (std::size_t j = 0; j < h.size(); ++j) {
      if (!region.contains(h.terms[j].window)) continue;
      h_r.add(h.terms[j]);
      dh_r.add(dh.terms[j]);
      to_global.push_back(static_cast<int>(j));
    }
    if (h_r.size() == 0) {
      res.warnings.push_back("region " + to_string(region) + " holds no terms; skipped");
      continue;
    }
    AnsatzTermSet set_r = enumerate_terms(h_r, dh_r, order, opts);
    if (set_r.terms.empty()) {
      res.warnings.push_back("region " + to_string(region) + " yields no ansatz terms; skipped");
      continue;
    }
    if (mode == AnsatzMode::Nc) set_r = tie_nc(set_r);
    GramSystem gram = build_gram(set_r, h_r, dh_r);
    RealVector alpha_r = solve(gram).alpha;
    if (mode == AnsatzMode::Nc) {
      for (int k = 1; k <= set_r.max_order; ++k) {
        auto& slot = votes[{k, {}}];
        slot.first += alpha_r(k - 1);
        slot.second += 1;
      }
    } else {
      for (std::size_t i = 0; i < set_r.terms.size(); ++i) {
        std::vector<int> tuple;
        for (int local_idx : set_r.terms[i].index_tuple)
          tuple.push_back(to_global[local_idx]);
        auto& slot = votes[{set_r.terms[i].order, tuple}];
        slot.first += alpha_r(static_cast<int>(i));
        slot.second += 1;
      }
    }
  }

  res.alpha = RealVector::Zero(res.set.group_count);
  if (mode == AnsatzMode::Nc) {
    for (int k = 1; k <= order; ++k) {
      auto it = votes.find({k, {}});
      if (it == votes.end())
        res.warnings.push_back("order " + std::to_string(k) + " never optimized; coefficient 0");
      else
        res.alpha(k - 1) = it->second.first / it->second.second;
    }
  } else {
    for (std::size_t i = 0; i < res.set.terms.size(); ++i) {
      auto it = votes.find({res.set.terms[i].order, res.set.terms[i].index_tuple});
      if (it == votes.end())
        res.warnings.push_back("tuple " + res.set.group_labels[i] +
                               " not covered by any region; coefficient 0");
      else
        res.alpha(static_cast<int>(i)) = it->second.first / it->second.second;
    }
  }
  res.action = std::nan("");
  res.dh_norm2 = std::nan("");
  return res;
}

OptimizeResult optimize_global(const HamiltonianPath& path, double s, int order,
                               AnsatzMode mode, const EnumerationOptions& opts) {
  return optimize_global(path_terms(path, s), path_dterms(path, s), order, mode, opts);
}

OptimizeResult optimize_local(const HamiltonianPath& path, double s, int order,
                              const RegionPlan& plan, AnsatzMode mode,
                              const EnumerationOptions& opts) {
  return optimize_local(path_terms(path, s), path_dterms(path, s), order, plan, mode, opts);
}

}  // namespace cdforge
