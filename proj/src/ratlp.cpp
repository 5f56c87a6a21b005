#include "wcg/ratlp.hpp"

#include <stdexcept>

#include "wcg/simplex_core.hpp"

namespace wcg {

std::string to_string(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
  }
  return "?";
}

LinearProgram::LinearProgram(std::size_t num_vars)
    : num_vars_(num_vars), objective_(num_vars, Rational(0)), bounds_(num_vars) {}

std::size_t LinearProgram::add_constraint(std::vector<Rational> coeffs, Relation rel,
                                          Rational rhs) {
  if (coeffs.size() != num_vars_) {
    throw std::invalid_argument("constraint has " + std::to_string(coeffs.size()) +
                                " coefficients, expected " + std::to_string(num_vars_));
  }
  for (auto& c : coeffs) c.canonicalize();
  rhs.canonicalize();
  rows_.push_back({std::move(coeffs), rel, std::move(rhs)});
  return rows_.size() - 1;
}

void LinearProgram::set_objective(std::vector<Rational> coeffs, Sense sense) {
  if (coeffs.size() != num_vars_) throw std::invalid_argument("objective dimension mismatch");
  for (auto& c : coeffs) c.canonicalize();
  objective_ = std::move(coeffs);
  sense_ = sense;
}

void LinearProgram::set_bounds(std::size_t var, Bounds b) {
  if (var >= num_vars_) throw std::invalid_argument("bounds: variable out of range");
  if (b.lower) b.lower->canonicalize();
  if (b.upper) b.upper->canonicalize();
  bounds_[var] = std::move(b);
}

void LinearProgram::dump(std::ostream& os) const {
  os << "vars " << num_vars_ << "\n";
  os << (sense_ == Sense::Maximize ? "max" : "min");
  for (const auto& c : objective_) os << ' ' << c.get_str();
  os << "\n";
  for (const auto& r : rows_) {
    os << "row";
    for (const auto& c : r.coeffs) os << ' ' << c.get_str();
    os << (r.rel == Relation::LessEq ? " <= " : r.rel == Relation::Equal ? " = " : " >= ")
       << r.rhs.get_str() << "\n";
  }
  for (std::size_t j = 0; j < num_vars_; ++j) {
    os << "bound " << j << ' ' << (bounds_[j].lower ? bounds_[j].lower->get_str() : "-inf") << ' '
       << (bounds_[j].upper ? bounds_[j].upper->get_str() : "+inf") << "\n";
  }
}

namespace {

// Where each internal row came from.
struct RowOrigin {
  enum Kind { Row, Upper } kind;
  std::size_t index;
  int sign;  // +1 or -1: internal row = sign * original row
};

// Internal variable layout: each original var j maps to a column (shifted by
// its lower bound) or, when free, to a +/- pair.
struct Layout {
  std::vector<std::size_t> pos;  // column of x_j (or x_j^+)
  std::vector<std::size_t> neg;  // column of x_j^- for free vars, else npos
  std::size_t cols = 0;
};

constexpr std::size_t npos = static_cast<std::size_t>(-1);

template <class T, class Conv>
detail::CoreProblem<T> build_core(const LinearProgram& lp, const Layout& lay,
                                  std::vector<RowOrigin>& origin, Conv conv) {
  const std::size_t nv = lp.num_vars();
  std::vector<Rational> shift(nv, Rational(0));
  for (std::size_t j = 0; j < nv; ++j) {
    if (lp.bounds()[j].lower) shift[j] = *lp.bounds()[j].lower;
  }
  detail::CoreProblem<T> pr;
  pr.cols = lay.cols;
  auto emit = [&](const std::vector<Rational>& coeffs, const Rational& rhs, int dir,
                  RowOrigin o) {
    Rational b = rhs;
    for (std::size_t j = 0; j < nv; ++j) {
      if (sgn(coeffs[j]) != 0 && sgn(shift[j]) != 0) b -= coeffs[j] * shift[j];
    }
    for (std::size_t j = 0; j < lay.cols; ++j) pr.a.push_back(T(0));
    const std::size_t base = pr.a.size() - lay.cols;
    for (std::size_t j = 0; j < nv; ++j) {
      if (sgn(coeffs[j]) == 0) continue;
      Rational v = dir > 0 ? Rational(coeffs[j]) : Rational(-coeffs[j]);
      pr.a[base + lay.pos[j]] = conv(v);
      if (lay.neg[j] != npos) pr.a[base + lay.neg[j]] = conv(Rational(-v));
    }
    pr.b.push_back(conv(dir > 0 ? b : Rational(-b)));
    origin.push_back(o);
  };
  for (std::size_t i = 0; i < lp.constraints().size(); ++i) {
    const auto& r = lp.constraints()[i];
    if (r.rel != Relation::GreaterEq) emit(r.coeffs, r.rhs, +1, {RowOrigin::Row, i, +1});
    if (r.rel != Relation::LessEq) emit(r.coeffs, r.rhs, -1, {RowOrigin::Row, i, -1});
  }
  for (std::size_t j = 0; j < nv; ++j) {
    if (!lp.bounds()[j].upper) continue;
    std::vector<Rational> e(nv, Rational(0));
    e[j] = 1;
    emit(e, *lp.bounds()[j].upper, +1, {RowOrigin::Upper, j, +1});
  }
  pr.rows = origin.size();
  const bool negate = lp.sense() == Sense::Minimize;
  pr.c.assign(lay.cols, T(0));
  for (std::size_t j = 0; j < nv; ++j) {
    Rational v = negate ? Rational(-lp.objective()[j]) : lp.objective()[j];
    pr.c[lay.pos[j]] = conv(v);
    if (lay.neg[j] != npos) pr.c[lay.neg[j]] = conv(Rational(-v));
  }
  return pr;
}

template <class T, class Conv, class Back>
LPResult solve_with(const LinearProgram& lp, Conv conv, Back back) {
  const std::size_t nv = lp.num_vars();
  Layout lay;
  lay.pos.resize(nv);
  lay.neg.assign(nv, npos);
  for (std::size_t j = 0; j < nv; ++j) lay.pos[j] = lay.cols++;
  for (std::size_t j = 0; j < nv; ++j) {
    if (!lp.bounds()[j].lower) lay.neg[j] = lay.cols++;
  }
  std::vector<RowOrigin> origin;
  auto pr = build_core<T>(lp, lay, origin, conv);
  auto core = detail::solve_core(pr);

  LPResult res;
  res.pivots = core.pivots;
  auto map_rows = [&](const std::vector<T>& y, std::vector<Rational>& rows,
                      std::vector<Rational>& upper) {
    rows.assign(lp.constraints().size(), Rational(0));
    upper.assign(nv, Rational(0));
    for (std::size_t i = 0; i < origin.size(); ++i) {
      if (is_zero(y[i])) continue;
      Rational v = back(y[i]);
      if (origin[i].kind == RowOrigin::Row) {
        rows[origin[i].index] += origin[i].sign > 0 ? v : Rational(-v);
      } else {
        upper[origin[i].index] += v;
      }
    }
  };
  switch (core.status) {
    case detail::CoreStatus::Infeasible: {
      res.status = LPStatus::Infeasible;
      FarkasCertificate cert;
      map_rows(core.y, cert.row_multipliers, cert.upper_bound_multipliers);
      res.farkas = std::move(cert);
      break;
    }
    case detail::CoreStatus::Unbounded: {
      res.status = LPStatus::Unbounded;
      res.ray.assign(nv, Rational(0));
      for (std::size_t j = 0; j < nv; ++j) {
        res.ray[j] = back(core.ray[lay.pos[j]]);
        if (lay.neg[j] != npos) res.ray[j] -= back(core.ray[lay.neg[j]]);
      }
      break;
    }
    case detail::CoreStatus::Optimal: {
      res.status = LPStatus::Optimal;
      res.primal.assign(nv, Rational(0));
      for (std::size_t j = 0; j < nv; ++j) {
        res.primal[j] = back(core.x[lay.pos[j]]);
        if (lay.neg[j] != npos) res.primal[j] -= back(core.x[lay.neg[j]]);
        if (lp.bounds()[j].lower) res.primal[j] += *lp.bounds()[j].lower;
      }
      Rational obj = 0;
      for (std::size_t j = 0; j < nv; ++j) obj += lp.objective()[j] * res.primal[j];
      res.objective_value = obj;
      map_rows(core.y, res.dual, res.dual_upper);
      break;
    }
  }
  return res;
}

}  // namespace

LPResult solve(const LinearProgram& lp) {
  try {
    return solve_with<SmallRational>(
        lp, [](const Rational& v) { return to_small(v); },
        [](const SmallRational& v) { return to_rational(v); });
  } catch (const RationalOverflow&) {
    return solve_with<Rational>(
        lp, [](const Rational& v) { return v; }, [](const Rational& v) { return v; });
  }
}

bool verify_primal(const LinearProgram& lp, const std::vector<Rational>& x) {
  if (x.size() != lp.num_vars()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const auto& b = lp.bounds()[j];
    if (b.lower && x[j] < *b.lower) return false;
    if (b.upper && x[j] > *b.upper) return false;
  }
  for (const auto& r : lp.constraints()) {
    Rational lhs = 0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += r.coeffs[j] * x[j];
    if (r.rel == Relation::LessEq && lhs > r.rhs) return false;
    if (r.rel == Relation::GreaterEq && lhs < r.rhs) return false;
    if (r.rel == Relation::Equal && lhs != r.rhs) return false;
  }
  return true;
}

namespace {

// Shared by the Farkas and duality checks: validates row/bound multiplier
// signs and returns g = sum Y_i a_i + U, or nullopt on a sign violation.
std::optional<std::vector<Rational>> aggregate(const LinearProgram& lp,
                                               const std::vector<Rational>& rows,
                                               const std::vector<Rational>& upper) {
  const std::size_t nv = lp.num_vars();
  if (rows.size() != lp.constraints().size() || upper.size() != nv) return std::nullopt;
  std::vector<Rational> g(nv, Rational(0));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = lp.constraints()[i];
    if (r.rel == Relation::LessEq && sgn(rows[i]) < 0) return std::nullopt;
    if (r.rel == Relation::GreaterEq && sgn(rows[i]) > 0) return std::nullopt;
    if (sgn(rows[i]) == 0) continue;
    for (std::size_t j = 0; j < nv; ++j) g[j] += rows[i] * r.coeffs[j];
  }
  for (std::size_t j = 0; j < nv; ++j) {
    if (sgn(upper[j]) < 0) return std::nullopt;
    if (sgn(upper[j]) > 0 && !lp.bounds()[j].upper) return std::nullopt;
    g[j] += upper[j];
  }
  return g;
}

}  // namespace

bool verify_farkas(const LinearProgram& lp, const FarkasCertificate& cert) {
  auto g = aggregate(lp, cert.row_multipliers, cert.upper_bound_multipliers);
  if (!g) return false;
  Rational bound = 0;
  for (std::size_t i = 0; i < cert.row_multipliers.size(); ++i) {
    bound += cert.row_multipliers[i] * lp.constraints()[i].rhs;
  }
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    if (sgn(cert.upper_bound_multipliers[j]) != 0) {
      bound += cert.upper_bound_multipliers[j] * *lp.bounds()[j].upper;
    }
    const auto& lo = lp.bounds()[j].lower;
    if (!lo) {
      if (sgn((*g)[j]) != 0) return false;
    } else {
      if (sgn((*g)[j]) < 0) return false;
      bound -= (*g)[j] * *lo;
    }
  }
  return sgn(bound) < 0;
}

bool verify_optimal(const LinearProgram& lp, const LPResult& res) {
  if (res.status != LPStatus::Optimal) return false;
  if (!verify_primal(lp, res.primal)) return false;
  const std::size_t nv = lp.num_vars();
  Rational obj = 0;
  for (std::size_t j = 0; j < nv; ++j) obj += lp.objective()[j] * res.primal[j];
  if (obj != res.objective_value) return false;
  // Work with the maximization form: c' = c (max) or -c (min).
  const bool negate = lp.sense() == Sense::Minimize;
  auto g = aggregate(lp, res.dual, res.dual_upper);
  if (!g) return false;
  Rational bound = 0;
  for (std::size_t i = 0; i < res.dual.size(); ++i) bound += res.dual[i] * lp.constraints()[i].rhs;
  for (std::size_t j = 0; j < nv; ++j) {
    if (sgn(res.dual_upper[j]) != 0) bound += res.dual_upper[j] * *lp.bounds()[j].upper;
    Rational cj = negate ? Rational(-lp.objective()[j]) : lp.objective()[j];
    Rational slack = (*g)[j] - cj;
    const auto& lo = lp.bounds()[j].lower;
    if (!lo) {
      if (sgn(slack) != 0) return false;
    } else {
      if (sgn(slack) < 0) return false;
      bound -= slack * *lo;
    }
  }
  Rational target = negate ? Rational(-obj) : obj;
  return bound == target;
}

}  // namespace wcg
