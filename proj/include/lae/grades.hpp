#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lae/errors.hpp"

namespace lae {

/// Exact non-negative-or-negative rational with a positive, reduced denominator.
class Rational {
 public:
  constexpr Rational() = default;

  Rational(std::int64_t num, std::int64_t den = 1) {
    if (den == 0) throw Error("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    num_ = g ? num / g : num;
    den_ = g ? den / g : den;
  }

  /// Accepts `3`, `1/2` and finite decimals such as `0.25`.
  static Rational parse(std::string_view text) {
    auto bad = [&] { return Error("not a rational number: '" + std::string(text) + "'"); };
    if (text.empty()) throw bad();
    auto parse_int = [&](std::string_view s) -> std::int64_t {
      if (s.empty() || s.size() > 17) throw bad();
      std::int64_t v = 0;
      for (char ch : s) {
        if (ch < '0' || ch > '9') throw bad();
        v = v * 10 + (ch - '0');
      }
      return v;
    };
    bool negative = false;
    if (text.front() == '-') {
      negative = true;
      text.remove_prefix(1);
    }
    Rational r;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      r = Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
      auto whole = text.substr(0, dot);
      auto frac = text.substr(dot + 1);
      if (frac.empty() || frac.size() > 12) throw bad();
      std::int64_t den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      r = Rational((whole.empty() ? 0 : parse_int(whole)) * den + parse_int(frac), den);
    } else {
      r = Rational(parse_int(text));
    }
    return negative ? Rational(-r.num_, r.den_) : r;
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// A level of a GradeScale, referenced by its position in the ascending level list.
/// Index order coincides with numeric order.
struct Grade {
  std::uint8_t index = 0;

  friend constexpr bool operator==(Grade, Grade) = default;
  friend constexpr auto operator<=>(Grade, Grade) = default;
};

/// A finite totally ordered set of grades V in [0,1] with a monoidal operation (a finite
/// t-norm). Immutable once built; every instance satisfies the laws checked by build().
class GradeScale {
 public:
  enum class Law {
    dimension_mismatch,
    unordered_levels,
    missing_zero,
    missing_one,
    index_out_of_range,
    missing_neutral,
    non_commutative,
    non_monotone,
    non_associative,
    exceeds_minimum,
  };

  class ScaleError : public Error {
   public:
    ScaleError(Law law, const std::string& what) : Error("scale: " + what), law_(law) {}
    Law law() const { return law_; }

   private:
    Law law_;
  };

  using Table = std::vector<std::vector<std::size_t>>;

  /// Validates the laws in a fixed order and throws on the first violated one.
  static GradeScale build(std::vector<Rational> levels, const Table& table) {
    const std::size_t n = levels.size();
    if (n < 2 || n > 255) throw ScaleError(Law::dimension_mismatch, "need between 2 and 255 levels");
    if (table.size() != n) throw ScaleError(Law::dimension_mismatch, "table has wrong row count");
    for (const auto& row : table)
      if (row.size() != n) throw ScaleError(Law::dimension_mismatch, "table has a row of wrong length");
    for (std::size_t i = 1; i < n; ++i)
      if (!(levels[i - 1] < levels[i]))
        throw ScaleError(Law::unordered_levels, "levels must be strictly ascending");
    if (levels.front() != Rational(0)) throw ScaleError(Law::missing_zero, "first level must be 0");
    if (levels.back() != Rational(1)) throw ScaleError(Law::missing_one, "last level must be 1");

    GradeScale s;
    s.levels_ = std::move(levels);
    s.table_.resize(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (table[a][b] >= n) throw ScaleError(Law::index_out_of_range, "table entry out of range");
        s.table_[a * n + b] = static_cast<std::uint8_t>(table[a][b]);
      }

    auto at = [&](std::size_t a, std::size_t b) -> std::size_t { return s.table_[a * n + b]; };
    const std::size_t one = n - 1;
    for (std::size_t a = 0; a < n; ++a)
      if (at(a, one) != a || at(one, a) != a)
        throw ScaleError(Law::missing_neutral,
                         "1 is not neutral: " + s.levels_[a].str() + " * 1 != " + s.levels_[a].str());
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (at(a, b) != at(b, a))
          throw ScaleError(Law::non_commutative, "not commutative at (" + s.levels_[a].str() + ", " +
                                                     s.levels_[b].str() + ")");
    for (std::size_t a = 0; a + 1 < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (at(a, b) > at(a + 1, b))
          throw ScaleError(Law::non_monotone, "not monotone at (" + s.levels_[a].str() + ", " +
                                                  s.levels_[b].str() + ")");
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (at(at(a, b), c) != at(a, at(b, c)))
            throw ScaleError(Law::non_associative,
                             "not associative at (" + s.levels_[a].str() + ", " + s.levels_[b].str() +
                                 ", " + s.levels_[c].str() + ")");
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (at(a, b) > std::min(a, b))
          throw ScaleError(Law::exceeds_minimum, "product exceeds minimum");
    return s;
  }

  /// Pointwise minimum on the given levels.
  static GradeScale godel(std::vector<Rational> levels) {
    const std::size_t n = levels.size();
    Table t(n, std::vector<std::size_t>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) t[a][b] = std::min(a, b);
    return build(std::move(levels), t);
  }

  /// max(0, a + b - 1) on evenly spaced levels 0, 1/k, ..., 1.
  static GradeScale lukasiewicz(std::vector<Rational> levels) {
    const std::size_t n = levels.size();
    if (n < 2) throw ScaleError(Law::dimension_mismatch, "need at least 2 levels");
    const std::size_t k = n - 1;
    for (std::size_t i = 0; i < n; ++i)
      if (levels[i] != Rational(static_cast<std::int64_t>(i), static_cast<std::int64_t>(k)))
        throw ScaleError(Law::unordered_levels, "lukasiewicz scale needs evenly spaced levels");
    Table t(n, std::vector<std::size_t>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) t[a][b] = a + b >= k ? a + b - k : 0;
    return build(std::move(levels), t);
  }

  static GradeScale lukasiewicz_steps(std::size_t k) {
    std::vector<Rational> levels;
    for (std::size_t i = 0; i <= k; ++i)
      levels.emplace_back(static_cast<std::int64_t>(i), static_cast<std::int64_t>(k));
    return lukasiewicz(std::move(levels));
  }

  std::size_t size() const { return levels_.size(); }
  const std::vector<Rational>& levels() const { return levels_; }
  Grade bottom() const { return Grade{0}; }
  Grade top() const { return Grade{static_cast<std::uint8_t>(levels_.size() - 1)}; }
  bool contains(Grade g) const { return g.index < levels_.size(); }

  const Rational& value(Grade g) const {
    check(g);
    return levels_[g.index];
  }

  Grade combine(Grade a, Grade b) const {
    check(a);
    check(b);
    return Grade{table_[a.index * size() + b.index]};
  }

  std::optional<Grade> find(const Rational& r) const {
    for (std::size_t i = 0; i < levels_.size(); ++i)
      if (levels_[i] == r) return Grade{static_cast<std::uint8_t>(i)};
    return std::nullopt;
  }

  Grade grade_of(const Rational& r) const {
    if (auto g = find(r)) return *g;
    throw UnknownGrade("grade " + r.str() + " is not a level of the scale");
  }

  std::vector<Grade> grades() const {
    std::vector<Grade> out;
    for (std::size_t i = 0; i < levels_.size(); ++i) out.push_back(Grade{static_cast<std::uint8_t>(i)});
    return out;
  }

  bool is_godel() const {
    for (std::size_t a = 0; a < size(); ++a)
      for (std::size_t b = 0; b < size(); ++b)
        if (table_[a * size() + b] != std::min(a, b)) return false;
    return true;
  }

  /// Row-major table of level indices.
  std::vector<std::size_t> table_indices() const { return {table_.begin(), table_.end()}; }

  friend bool operator==(const GradeScale&, const GradeScale&) = default;

 private:
  GradeScale() = default;

  void check(Grade g) const {
    if (!contains(g)) throw UnknownGrade("grade index " + std::to_string(g.index) + " outside the scale");
  }

  std::vector<Rational> levels_;
  std::vector<std::uint8_t> table_;
};

using ScaleError = GradeScale::ScaleError;

inline Rational combine(const GradeScale& s, const Rational& a, const Rational& b) {
  return s.value(s.combine(s.grade_of(a), s.grade_of(b)));
}

}  // namespace lae
