#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "lae/errors.hpp"
#include "lae/grades.hpp"
#include "lae/world_set.hpp"

namespace lae {

enum class Direction { le, ge };

enum class SpaceLaw {
  reflexivity,     // S(w,w) = 1
  strictness,      // S(u,v) = 1 only for u = v
  symmetry,
  transitivity,    // S(u,w) >= S(u,v) * S(v,w)
  order,           // the order is not a permutation of the worlds
  compatibility,   // u <= v <= w implies min(S(u,v), S(v,w)) >= S(u,w)
  component,       // a product component is itself invalid
};

inline std::string_view to_string(SpaceLaw l) {
  switch (l) {
    case SpaceLaw::reflexivity: return "reflexivity";
    case SpaceLaw::strictness: return "strictness";
    case SpaceLaw::symmetry: return "symmetry";
    case SpaceLaw::transitivity: return "transitivity";
    case SpaceLaw::order: return "order";
    case SpaceLaw::compatibility: return "compatibility";
    case SpaceLaw::component: return "component";
  }
  return "?";
}

struct LawViolation {
  SpaceLaw law;
  std::vector<std::size_t> witness;
  std::string message;
};

using ScalePtr = std::shared_ptr<const GradeScale>;

inline ScalePtr share(GradeScale s) { return std::make_shared<const GradeScale>(std::move(s)); }

/// Finite set of worlds with a grade-valued similarity matrix. Construction only checks
/// shapes; validate() reports every violated law.
class SimilaritySpace {
 public:
  SimilaritySpace() = default;

  /// `sim` is row-major n*n.
  SimilaritySpace(ScalePtr scale, std::vector<std::string> names, std::vector<Grade> sim)
      : scale_(std::move(scale)), names_(std::move(names)), sim_(std::move(sim)) {
    const std::size_t n = names_.size();
    if (!scale_) throw ModelError("similarity space needs a scale");
    if (n == 0) throw ModelError("a similarity space needs at least one world");
    if (sim_.size() != n * n) throw ModelError("similarity matrix size does not match world count");
    for (Grade g : sim_)
      if (!scale_->contains(g)) throw UnknownGrade("similarity grade outside the scale");
    build_balls();
  }

  /// Worlds w0..w{n-1}, every distinct pair at grade 0.
  static SimilaritySpace discrete(ScalePtr scale, std::size_t n) {
    std::vector<Grade> sim(n * n, scale->bottom());
    for (std::size_t i = 0; i < n; ++i) sim[i * n + i] = scale->top();
    return SimilaritySpace(scale, default_names(n), std::move(sim));
  }

  static std::vector<std::string> default_names(std::size_t n, const std::string& prefix = "w") {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + 1));
    return out;
  }

  std::size_t size() const { return names_.size(); }
  const GradeScale& scale() const { return *scale_; }
  const ScalePtr& scale_ptr() const { return scale_; }
  const std::string& name(std::size_t w) const { return names_.at(w); }
  const std::vector<std::string>& names() const { return names_; }
  Grade sim(std::size_t u, std::size_t v) const { return sim_[u * size() + v]; }
  const std::vector<Grade>& matrix() const { return sim_; }

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    return std::nullopt;
  }

  WorldSet empty_set() const { return WorldSet(size()); }
  WorldSet all() const { return WorldSet::full(size()); }

  /// U_c({w}).
  const WorldSet& ball(Grade c, std::size_t w) const { return balls_[c.index * size() + w]; }

  /// U_c(A): worlds with similarity at least c to some member of A.
  WorldSet neighborhood(Grade c, const WorldSet& a) const {
    WorldSet out(size());
    a.for_each([&](std::size_t x) { out |= ball(c, x); });
    return out;
  }

  std::vector<LawViolation> validate() const {
    std::vector<LawViolation> out;
    const std::size_t n = size();
    const GradeScale& s = *scale_;
    auto grade = [&](Grade g) { return s.value(g).str(); };
    for (std::size_t u = 0; u < n; ++u) {
      if (sim(u, u) != s.top())
        out.push_back({SpaceLaw::reflexivity, {u}, "S(" + name(u) + "," + name(u) + ") = " + grade(sim(u, u))});
      for (std::size_t v = 0; v < n; ++v) {
        if (u < v && sim(u, v) == s.top())
          out.push_back({SpaceLaw::strictness, {u, v}, "S(" + name(u) + "," + name(v) + ") = 1 for distinct worlds"});
        if (u < v && sim(u, v) != sim(v, u))
          out.push_back({SpaceLaw::symmetry, {u, v},
                         "S(" + name(u) + "," + name(v) + ") = " + grade(sim(u, v)) + " but S(" + name(v) + "," +
                             name(u) + ") = " + grade(sim(v, u))});
      }
    }
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        for (std::size_t w = 0; w < n; ++w) {
          const Grade need = s.combine(sim(u, v), sim(v, w));
          if (sim(u, w) < need)
            out.push_back({SpaceLaw::transitivity, {u, v, w},
                           "S(" + name(u) + "," + name(w) + ") = " + grade(sim(u, w)) + " < S(" + name(u) + "," +
                               name(v) + ") * S(" + name(v) + "," + name(w) + ") = " + grade(need)});
        }
    return out;
  }

  bool is_valid() const { return validate().empty(); }

  friend bool operator==(const SimilaritySpace& a, const SimilaritySpace& b) {
    return *a.scale_ == *b.scale_ && a.names_ == b.names_ && a.sim_ == b.sim_;
  }

 private:
  void build_balls() {
    const std::size_t n = size();
    balls_.assign(scale_->size() * n, WorldSet(n));
    for (Grade c : scale_->grades())
      for (std::size_t w = 0; w < n; ++w) {
        WorldSet& b = balls_[c.index * n + w];
        for (std::size_t x = 0; x < n; ++x)
          if (sim(w, x) >= c) b.set(x);
      }
  }

  ScalePtr scale_;
  std::vector<std::string> names_;
  std::vector<Grade> sim_;
  std::vector<WorldSet> balls_;
};

/// Similarity space with a total order; `order` lists the worlds from bottom to top.
class ChainSpace {
 public:
  ChainSpace() = default;

  ChainSpace(SimilaritySpace base, std::vector<std::size_t> order)
      : base_(std::move(base)), order_(std::move(order)) {
    const std::size_t n = base_.size();
    rank_.assign(n, n);
    permutation_ = order_.size() == n;
    for (std::size_t r = 0; r < order_.size() && permutation_; ++r) {
      if (order_[r] >= n || rank_[order_[r]] != n) {
        permutation_ = false;
        break;
      }
      rank_[order_[r]] = r;
    }
    if (!permutation_) {
      // Keep the space usable for diagnostics; validate() reports the bad order.
      order_.resize(n);
      std::iota(order_.begin(), order_.end(), std::size_t{0});
      std::iota(rank_.begin(), rank_.end(), std::size_t{0});
    }
    down_.assign(n, WorldSet(n));
    up_.assign(n, WorldSet(n));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t k = 0; k <= r; ++k) down_[r].set(order_[k]);
      for (std::size_t k = r; k < n; ++k) up_[r].set(order_[k]);
    }
  }

  /// Worlds already listed in ascending order.
  static ChainSpace identity_order(SimilaritySpace base) {
    std::vector<std::size_t> order(base.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    return ChainSpace(std::move(base), std::move(order));
  }

  const SimilaritySpace& base() const { return base_; }
  std::size_t size() const { return base_.size(); }
  const std::vector<std::size_t>& order() const { return order_; }
  std::size_t rank(std::size_t w) const { return rank_[w]; }
  bool leq(std::size_t u, std::size_t v) const { return rank_[u] <= rank_[v]; }

  /// (-inf, w] and [w, inf).
  const WorldSet& down_set(std::size_t w) const { return down_[rank_[w]]; }
  const WorldSet& up_set(std::size_t w) const { return up_[rank_[w]]; }
  const WorldSet& down_to_rank(std::size_t r) const { return down_[r]; }
  const WorldSet& up_from_rank(std::size_t r) const { return up_[r]; }

  /// (-inf, max A] or [min A, inf); empty for empty A.
  WorldSet diamond(Direction dir, const WorldSet& a) const {
    if (a.empty()) return WorldSet(size());
    std::size_t lo = size(), hi = 0;
    a.for_each([&](std::size_t w) {
      lo = std::min(lo, rank_[w]);
      hi = std::max(hi, rank_[w]);
    });
    return dir == Direction::le ? down_[hi] : up_[lo];
  }

  std::vector<LawViolation> validate() const {
    auto out = base_.validate();
    if (!permutation_) {
      out.push_back({SpaceLaw::order, {}, "order must list every world exactly once"});
      return out;
    }
    const std::size_t n = size();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b)
        for (std::size_t c = b; c < n; ++c) {
          const std::size_t u = order_[a], v = order_[b], w = order_[c];
          const Grade lhs = std::min(base_.sim(u, v), base_.sim(v, w));
          if (lhs < base_.sim(u, w))
            out.push_back({SpaceLaw::compatibility, {u, v, w},
                           base_.name(u) + " <= " + base_.name(v) + " <= " + base_.name(w) + " but min(S(" +
                               base_.name(u) + "," + base_.name(v) + "), S(" + base_.name(v) + "," +
                               base_.name(w) + ")) < S(" + base_.name(u) + "," + base_.name(w) + ")"});
        }
    return out;
  }

  bool is_valid() const { return validate().empty(); }

  friend bool operator==(const ChainSpace& a, const ChainSpace& b) {
    return a.base_ == b.base_ && a.order_ == b.order_;
  }

 private:
  SimilaritySpace base_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> rank_;
  std::vector<WorldSet> down_;
  std::vector<WorldSet> up_;
  bool permutation_ = true;
};

inline constexpr std::size_t kMaxProductWorlds = 4096;

/// Product of chains, one per sort. Worlds are all coordinate tuples, enumerated in
/// mixed radix with the first component most significant; similarity is the minimum
/// over components.
class ProductSpace {
 public:
  ProductSpace() = default;

  explicit ProductSpace(std::vector<ChainSpace> components) : components_(std::move(components)) {
    if (components_.empty()) throw ModelError("a product space needs at least one component");
    const ScalePtr& scale = components_.front().base().scale_ptr();
    std::size_t total = 1;
    for (const auto& c : components_) {
      if (!(c.base().scale() == *scale)) throw ModelError("product components use different scales");
      total *= c.size();
      if (total > kMaxProductWorlds)
        throw ResourceLimit("product space exceeds " + std::to_string(kMaxProductWorlds) + " worlds");
    }
    const std::size_t m = components_.size();
    stride_.assign(m, 1);
    for (std::size_t i = m - 1; i-- > 0;) stride_[i] = stride_[i + 1] * components_[i + 1].size();

    coords_.resize(total * m);
    std::vector<std::string> names(total);
    for (std::size_t w = 0; w < total; ++w) {
      std::string name = "(";
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t x = (w / stride_[i]) % components_[i].size();
        coords_[w * m + i] = x;
        name += (i ? "," : "") + components_[i].base().name(x);
      }
      names[w] = name + ")";
    }
    std::vector<Grade> sim(total * total);
    for (std::size_t u = 0; u < total; ++u)
      for (std::size_t v = 0; v < total; ++v) {
        Grade g = scale->top();
        for (std::size_t i = 0; i < m; ++i) g = std::min(g, components_[i].base().sim(coord(u, i), coord(v, i)));
        sim[u * total + v] = g;
      }
    base_ = SimilaritySpace(scale, std::move(names), std::move(sim));

    cyl_down_.resize(m);
    cyl_up_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const auto& ci = components_[i];
      for (std::size_t r = 0; r < ci.size(); ++r) {
        cyl_down_[i].push_back(cylinder(i, ci.down_to_rank(r)));
        cyl_up_[i].push_back(cylinder(i, ci.up_from_rank(r)));
      }
    }
  }

  const SimilaritySpace& base() const { return base_; }
  std::size_t size() const { return base_.size(); }
  std::size_t dimension() const { return components_.size(); }
  const std::vector<ChainSpace>& components() const { return components_; }
  const ChainSpace& component(std::size_t i) const { return components_.at(i); }

  std::size_t coord(std::size_t w, std::size_t i) const { return coords_[w * components_.size() + i]; }

  std::size_t world_of(const std::vector<std::size_t>& tuple) const {
    if (tuple.size() != components_.size()) throw ModelError("tuple has wrong arity");
    std::size_t w = 0;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (tuple[i] >= components_[i].size()) throw ModelError("tuple coordinate out of range");
      w += tuple[i] * stride_[i];
    }
    return w;
  }

  /// The preorder comparing coordinate i only.
  bool leq(std::size_t i, std::size_t u, std::size_t v) const {
    return components_[i].leq(coord(u, i), coord(v, i));
  }

  /// pi C for C a subset of component i.
  WorldSet cylinder(std::size_t i, const WorldSet& c) const {
    WorldSet out(size());
    for (std::size_t w = 0; w < size(); ++w)
      if (c.test(coord(w, i))) out.set(w);
    return out;
  }

  /// pi A for A a set of tuples over the listed components (tuple entries aligned with `sorts`).
  WorldSet cylinder(const std::vector<std::size_t>& sorts, const std::vector<std::vector<std::size_t>>& tuples) const {
    if (sorts.empty()) throw ModelError("cylinder needs at least one component");
    for (std::size_t s : sorts)
      if (s >= components_.size()) throw ModelError("cylinder over unknown component");
    WorldSet out(size());
    for (std::size_t w = 0; w < size(); ++w)
      for (const auto& t : tuples) {
        if (t.size() != sorts.size()) throw ModelError("cylinder tuple has wrong arity");
        bool match = true;
        for (std::size_t k = 0; k < sorts.size() && match; ++k) match = coord(w, sorts[k]) == t[k];
        if (match) {
          out.set(w);
          break;
        }
      }
    return out;
  }

  /// Coordinate-wise closure: intersection over components of the cylinders over
  /// (-inf, x_i] (or [x_i, inf)) with x_i the extreme coordinate i reached by A.
  WorldSet diamond(Direction dir, const WorldSet& a) const {
    if (a.empty()) return WorldSet(size());
    WorldSet out = WorldSet::full(size());
    for (std::size_t i = 0; i < components_.size(); ++i) {
      const auto& ci = components_[i];
      std::size_t lo = ci.size(), hi = 0;
      a.for_each([&](std::size_t w) {
        const std::size_t r = ci.rank(coord(w, i));
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      });
      out &= dir == Direction::le ? cyl_down_[i][hi] : cyl_up_[i][lo];
    }
    return out;
  }

  /// Component diagnostics, plus a full check of the derived similarity on small products.
  std::vector<LawViolation> validate() const {
    std::vector<LawViolation> out;
    for (std::size_t i = 0; i < components_.size(); ++i)
      for (auto& v : components_[i].validate())
        out.push_back({SpaceLaw::component, v.witness,
                       "component " + std::to_string(i + 1) + ": " + std::string(to_string(v.law)) + ": " + v.message});
    if (out.empty() && size() <= 512)
      for (auto& v : base_.validate()) out.push_back(std::move(v));
    return out;
  }

  bool is_valid() const { return validate().empty(); }

  friend bool operator==(const ProductSpace& a, const ProductSpace& b) { return a.components_ == b.components_; }

 private:
  std::vector<ChainSpace> components_;
  std::vector<std::size_t> stride_;
  std::vector<std::size_t> coords_;
  SimilaritySpace base_;
  std::vector<std::vector<WorldSet>> cyl_down_;
  std::vector<std::vector<WorldSet>> cyl_up_;
};

using Space = std::variant<SimilaritySpace, ChainSpace, ProductSpace>;

inline const SimilaritySpace& base_of(const Space& s) {
  return std::visit(
      [](const auto& x) -> const SimilaritySpace& {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, SimilaritySpace>)
          return x;
        else
          return x.base();
      },
      s);
}

inline bool has_order(const Space& s) { return !std::holds_alternative<SimilaritySpace>(s); }

inline WorldSet neighborhood(const Space& s, Grade c, const WorldSet& a) { return base_of(s).neighborhood(c, a); }

inline WorldSet diamond(const Space& s, Direction dir, const WorldSet& a) {
  if (auto c = std::get_if<ChainSpace>(&s)) return c->diamond(dir, a);
  if (auto p = std::get_if<ProductSpace>(&s)) return p->diamond(dir, a);
  throw VariantError("diamonds need an ordered space");
}

inline std::vector<LawViolation> validate(const Space& s) {
  return std::visit([](const auto& x) { return x.validate(); }, s);
}

}  // namespace lae
