#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wcg/rational.hpp"

namespace wcg {

enum class Relation { LessEq, Equal, GreaterEq };
enum class Sense { Maximize, Minimize };
enum class LPStatus { Optimal, Infeasible, Unbounded };

std::string to_string(LPStatus s);

struct Bounds {
  std::optional<Rational> lower = Rational(0);  // nullopt: free below
  std::optional<Rational> upper;
};

struct Constraint {
  std::vector<Rational> coeffs;
  Relation rel = Relation::LessEq;
  Rational rhs;
};

class LinearProgram {
 public:
  explicit LinearProgram(std::size_t num_vars);

  std::size_t num_vars() const { return num_vars_; }
  std::size_t add_constraint(std::vector<Rational> coeffs, Relation rel, Rational rhs);
  void set_objective(std::vector<Rational> coeffs, Sense sense);
  void set_bounds(std::size_t var, Bounds b);

  const std::vector<Constraint>& constraints() const { return rows_; }
  const std::vector<Rational>& objective() const { return objective_; }
  Sense sense() const { return sense_; }
  const std::vector<Bounds>& bounds() const { return bounds_; }

  /// Plain text dump, one line per item, for external cross-checking.
  void dump(std::ostream& os) const;

 private:
  std::size_t num_vars_;
  std::vector<Constraint> rows_;
  std::vector<Rational> objective_;
  Sense sense_ = Sense::Maximize;
  std::vector<Bounds> bounds_;
};

/// Multipliers proving infeasibility: row i gets row_multipliers[i] (>= 0 on
/// <= rows, <= 0 on >= rows, free on = rows) and each finite upper bound gets
/// a nonnegative multiplier. The aggregated row g = sum Y_i a_i + U is
/// nonnegative (zero on free variables) and Y.b + U.u - g.l < 0.
struct FarkasCertificate {
  std::vector<Rational> row_multipliers;
  std::vector<Rational> upper_bound_multipliers;
};

struct LPResult {
  LPStatus status = LPStatus::Optimal;
  std::vector<Rational> primal;
  Rational objective_value;
  /// Optimal: dual multipliers in the same sign convention as the Farkas
  /// rows, oriented for maximization of the (possibly negated) objective.
  std::vector<Rational> dual;
  std::vector<Rational> dual_upper;
  std::optional<FarkasCertificate> farkas;
  std::vector<Rational> ray;
  std::uint64_t pivots = 0;
};

/// Exact solve. Deterministic: Bland's rule over a fixed column order. Runs
/// on int64 rationals first and repeats on GMP rationals on overflow.
LPResult solve(const LinearProgram& lp);

bool verify_primal(const LinearProgram& lp, const std::vector<Rational>& x);
bool verify_farkas(const LinearProgram& lp, const FarkasCertificate& cert);
/// Checks primal feasibility, the objective value, and that the dual bound
/// equals it.
bool verify_optimal(const LinearProgram& lp, const LPResult& res);

}  // namespace wcg
