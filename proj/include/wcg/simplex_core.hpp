#pragma once

// Dense tableau simplex with Bland's rule, generic over an exact number type.
// Solves   maximize c.x  subject to  A x <= b,  x >= 0.
// Everything above this layer (bounds, equalities, >= rows, minimization) is
// reduced to this form by ratlp.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wcg/rational.hpp"

namespace wcg::detail {

enum class CoreStatus { Optimal, Infeasible, Unbounded };

template <class T>
struct CoreProblem {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> a;  // row-major, rows x cols
  std::vector<T> b;
  std::vector<T> c;
};

template <class T>
struct CoreResult {
  CoreStatus status = CoreStatus::Optimal;
  std::vector<T> x;      // primal (Optimal)
  T value{};             // objective (Optimal)
  std::vector<T> y;      // duals (Optimal) or Farkas multipliers (Infeasible)
  std::vector<T> ray;    // improving direction (Unbounded)
  std::uint64_t pivots = 0;
};

template <class T>
class Tableau {
 public:
  explicit Tableau(const CoreProblem<T>& pr)
      : m_(pr.rows), n_(pr.cols), width_(pr.cols + pr.rows + 1) {
    t_.assign(m_ * width_, T(0));
    rhs_.assign(m_, T(0));
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = pr.a[i * n_ + j];
      at(i, n_ + i) = T(1);
      rhs_[i] = pr.b[i];
      basis_[i] = n_ + i;
    }
    obj_.assign(width_, T(0));
  }

  CoreResult<T> run(const std::vector<T>& c) {
    CoreResult<T> res;
    const std::size_t art = n_ + m_;
    std::size_t worst = m_;
    for (std::size_t i = 0; i < m_; ++i) {
      if (sign(rhs_[i]) < 0 && (worst == m_ || rhs_[i] < rhs_[worst])) worst = i;
    }
    if (worst != m_) {
      // Phase 1: one artificial column with -1 in every row, maximize -x_art.
      for (std::size_t i = 0; i < m_; ++i) at(i, art) = T(-1);
      std::fill(obj_.begin(), obj_.end(), T(0));
      obj_[art] = T(-1);
      obj_val_ = T(0);
      art_active_ = true;
      pivot(worst, art);
      ++pivots_;
      optimize();
      if (sign(obj_val_) < 0) {
        res.status = CoreStatus::Infeasible;
        res.y.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) res.y[i] = -obj_[n_ + i];
        res.pivots = pivots_;
        return res;
      }
      // Drive the artificial out of the basis if it stayed at level zero.
      for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] != art) continue;
        for (std::size_t j = 0; j < art; ++j) {
          if (!is_zero(at(i, j))) {
            pivot(i, j);
            ++pivots_;
            break;
          }
        }
        break;
      }
      for (std::size_t i = 0; i < m_; ++i) at(i, art) = T(0);
      art_active_ = false;
    }
    // Phase 2 objective row: d_j = c_j - sum_i c_B(i) t_ij.
    std::fill(obj_.begin(), obj_.end(), T(0));
    for (std::size_t j = 0; j < n_; ++j) obj_[j] = c[j];
    obj_val_ = T(0);
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t bv = basis_[i];
      if (bv >= n_ || is_zero(c[bv])) continue;
      const T cb = c[bv];
      for (std::size_t j = 0; j < width_; ++j) {
        if (!is_zero(at(i, j))) obj_[j] -= cb * at(i, j);
      }
      obj_val_ += cb * rhs_[i];
    }
    const std::size_t blocked = optimize();
    res.pivots = pivots_;
    if (blocked != npos) {
      res.status = CoreStatus::Unbounded;
      res.ray.assign(n_, T(0));
      if (blocked < n_) res.ray[blocked] = T(1);
      for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] < n_) res.ray[basis_[i]] = -at(i, blocked);
      }
      return res;
    }
    res.status = CoreStatus::Optimal;
    res.x.assign(n_, T(0));
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) res.x[basis_[i]] = rhs_[i];
    }
    res.value = obj_val_;
    res.y.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) res.y[i] = -obj_[n_ + i];
    return res;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  T& at(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }

  // Runs Bland's rule to optimality. Returns npos, or the entering column
  // that proved unboundedness.
  std::size_t optimize() {
    const std::size_t limit = art_active_ ? width_ : width_ - 1;
    for (;;) {
      std::size_t enter = npos;
      for (std::size_t j = 0; j < limit; ++j) {
        if (sign(obj_[j]) > 0) {
          enter = j;
          break;
        }
      }
      if (enter == npos) return npos;
      std::size_t leave = npos;
      T best{};
      for (std::size_t i = 0; i < m_; ++i) {
        const T& a = at(i, enter);
        if (sign(a) <= 0) continue;
        T ratio = rhs_[i] / a;
        if (leave == npos || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == npos) return enter;
      pivot(leave, enter);
      ++pivots_;
    }
  }

  void pivot(std::size_t r, std::size_t s) {
    const T inv = T(1) / at(r, s);
    T* row = &t_[r * width_];
    for (std::size_t j = 0; j < width_; ++j) {
      if (!is_zero(row[j])) row[j] *= inv;
    }
    rhs_[r] *= inv;
    nz_.clear();
    for (std::size_t j = 0; j < width_; ++j) {
      if (!is_zero(row[j])) nz_.push_back(j);
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      T f = at(i, s);
      if (is_zero(f)) continue;
      T* other = &t_[i * width_];
      for (std::size_t j : nz_) other[j] -= f * row[j];
      rhs_[i] -= f * rhs_[r];
    }
    T f = obj_[s];
    if (!is_zero(f)) {
      for (std::size_t j : nz_) obj_[j] -= f * row[j];
      obj_val_ += f * rhs_[r];
    }
    basis_[r] = s;
  }

  std::size_t m_, n_, width_;
  std::vector<T> t_;
  std::vector<T> rhs_;
  std::vector<T> obj_;
  T obj_val_{};
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nz_;
  bool art_active_ = false;
  std::uint64_t pivots_ = 0;
};

template <class T>
CoreResult<T> solve_core(const CoreProblem<T>& pr) {
  Tableau<T> tab(pr);
  return tab.run(pr.c);
}

}  // namespace wcg::detail
