#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cotorsion/homological.hpp"

namespace cotorsion {

/// Membership predicate for a full subcategory closed under isomorphism.
class SubcategorySpec {
 public:
  enum class Kind { All, Zero, Projectives, Injectives, FiniteInjDimWithin, ExplicitList, Intersection, Predicate };

  static SubcategorySpec all() { return SubcategorySpec(Kind::All); }
  static SubcategorySpec zero() { return SubcategorySpec(Kind::Zero); }
  static SubcategorySpec projectives() { return SubcategorySpec(Kind::Projectives); }
  static SubcategorySpec injectives() { return SubcategorySpec(Kind::Injectives); }
  static SubcategorySpec finite_inj_dim_within(std::size_t bound) {
    SubcategorySpec s(Kind::FiniteInjDimWithin);
    s.bound_ = bound;
    return s;
  }
  static SubcategorySpec explicit_list(std::vector<Module> members) {
    SubcategorySpec s(Kind::ExplicitList);
    s.members_ = std::move(members);
    return s;
  }
  static SubcategorySpec intersection(std::vector<SubcategorySpec> parts) {
    SubcategorySpec s(Kind::Intersection);
    s.parts_ = std::make_shared<std::vector<SubcategorySpec>>(std::move(parts));
    return s;
  }
  static SubcategorySpec predicate(std::string name, std::function<bool(const Module&)> f) {
    SubcategorySpec s(Kind::Predicate);
    s.name_ = std::move(name);
    s.pred_ = std::move(f);
    return s;
  }

  Kind kind() const { return kind_; }

  bool contains(const Module& m) const {
    switch (kind_) {
      case Kind::All:
        return true;
      case Kind::Zero:
        return m.dim() == 0;
      case Kind::Projectives:
        return is_projective(m);
      case Kind::Injectives:
        return is_injective(m);
      case Kind::FiniteInjDimWithin:
        return injective_dimension_within(m, bound_);
      case Kind::ExplicitList:
        if (m.dim() == 0) return true;
        for (const auto& x : members_)
          if (x.dim() == m.dim() && is_isomorphic(x, m)) return true;
        return false;
      case Kind::Intersection:
        for (const auto& s : *parts_)
          if (!s.contains(m)) return false;
        return true;
      case Kind::Predicate:
        return pred_(m);
    }
    return false;
  }

  std::string describe() const {
    switch (kind_) {
      case Kind::All:
        return "all";
      case Kind::Zero:
        return "zero";
      case Kind::Projectives:
        return "projectives";
      case Kind::Injectives:
        return "injectives";
      case Kind::FiniteInjDimWithin:
        return "inj-dim<=" + std::to_string(bound_);
      case Kind::ExplicitList:
        return "explicit(" + std::to_string(members_.size()) + ")";
      case Kind::Intersection: {
        std::string s = "intersection(";
        for (std::size_t i = 0; i < parts_->size(); ++i) s += (i ? "," : "") + (*parts_)[i].describe();
        return s + ")";
      }
      case Kind::Predicate:
        return name_;
    }
    return "?";
  }

  /// Injective dimension at most `bound`, via iterated cosyzygies.
  static bool injective_dimension_within(const Module& m, std::size_t bound) {
    Module cur = m;
    for (std::size_t k = 0; k <= bound; ++k) {
      if (is_injective(cur)) return true;
      cur = cokernel(injective_embedding(cur)).object;
    }
    return false;
  }

 private:
  explicit SubcategorySpec(Kind k) : kind_(k) {}

  Kind kind_;
  std::size_t bound_ = 0;
  std::vector<Module> members_;
  std::shared_ptr<std::vector<SubcategorySpec>> parts_;
  std::string name_;
  std::function<bool(const Module&)> pred_;
};

inline SubcategorySpec parse_subcategory(const std::string& s) {
  if (s == "all") return SubcategorySpec::all();
  if (s == "zero") return SubcategorySpec::zero();
  if (s == "projectives") return SubcategorySpec::projectives();
  if (s == "injectives") return SubcategorySpec::injectives();
  const std::string pre = "inj-dim<=";
  if (s.rfind(pre, 0) == 0) return SubcategorySpec::finite_inj_dim_within(std::stoul(s.substr(pre.size())));
  throw MalformedInput("unknown subcategory '" + s + "'");
}

}  // namespace cotorsion
