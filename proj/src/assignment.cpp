#include "mmwcarry/assignment.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace mmw {

namespace {

// Dense square LAPJV: column reduction, reduction transfer, two rounds of
// augmenting row reduction, then Dijkstra-style augmentation per free row.
std::vector<int> lapjv(const Eigen::MatrixXd& c) {
  const int n = static_cast<int>(c.rows());
  constexpr double kBig = std::numeric_limits<double>::max();
  std::vector<int> rowsol(n, -1), colsol(n, -1), matches(n, 0), free_rows(n), collist(n), pred(n);
  std::vector<double> v(n), d(n);

  // column reduction
  for (int j = n - 1; j >= 0; --j) {
    double mn = c(0, j);
    int imin = 0;
    for (int i = 1; i < n; ++i) {
      if (c(i, j) < mn) {
        mn = c(i, j);
        imin = i;
      }
    }
    v[j] = mn;
    if (++matches[imin] == 1) {
      rowsol[imin] = j;
      colsol[j] = imin;
    } else {
      colsol[j] = -1;
    }
  }

  // reduction transfer
  int numfree = 0;
  for (int i = 0; i < n; ++i) {
    if (matches[i] == 0) {
      free_rows[numfree++] = i;
    } else if (matches[i] == 1) {
      const int j1 = rowsol[i];
      double mn = kBig;
      for (int j = 0; j < n; ++j) {
        if (j != j1) mn = std::min(mn, c(i, j) - v[j]);
      }
      if (n > 1) v[j1] -= mn;
    }
  }

  // augmenting row reduction
  for (int loop = 0; loop < 2; ++loop) {
    int k = 0;
    const int prvnumfree = numfree;
    numfree = 0;
    while (k < prvnumfree) {
      const int i = free_rows[k++];
      double umin = c(i, 0) - v[0];
      int j1 = 0;
      int j2 = 0;
      double usubmin = kBig;
      for (int j = 1; j < n; ++j) {
        const double h = c(i, j) - v[j];
        if (h < usubmin) {
          if (h >= umin) {
            usubmin = h;
            j2 = j;
          } else {
            usubmin = umin;
            umin = h;
            j2 = j1;
            j1 = j;
          }
        }
      }
      int i0 = colsol[j1];
      // A gap below one ulp of v[j1] (large sentinel duals) would leave v
      // unchanged and bounce the same two rows forever; treat it as a tie.
      const double lowered = v[j1] - (usubmin - umin);
      const bool strict = lowered < v[j1];
      if (strict) {
        v[j1] = lowered;
      } else if (i0 > -1) {
        j1 = j2;
        i0 = colsol[j2];
      }
      rowsol[i] = j1;
      colsol[j1] = i;
      if (i0 > -1) {
        if (strict) {
          free_rows[--k] = i0;
        } else {
          free_rows[numfree++] = i0;
        }
      }
    }
  }

  // augmentation
  for (int f = 0; f < numfree; ++f) {
    const int freerow = free_rows[f];
    for (int j = 0; j < n; ++j) {
      d[j] = c(freerow, j) - v[j];
      pred[j] = freerow;
      collist[j] = j;
    }
    int low = 0;
    int up = 0;
    int last = 0;
    int endofpath = -1;
    double mn = 0.0;
    bool found = false;
    do {
      if (up == low) {
        last = low - 1;
        mn = d[collist[up++]];
        for (int k = up; k < n; ++k) {
          const int j = collist[k];
          const double h = d[j];
          if (h <= mn) {
            if (h < mn) {
              up = low;
              mn = h;
            }
            collist[k] = collist[up];
            collist[up++] = j;
          }
        }
        for (int k = low; k < up; ++k) {
          if (colsol[collist[k]] < 0) {
            endofpath = collist[k];
            found = true;
            break;
          }
        }
      }
      if (!found) {
        const int j1 = collist[low++];
        const int i = colsol[j1];
        const double h = c(i, j1) - v[j1] - mn;
        for (int k = up; k < n; ++k) {
          const int j = collist[k];
          const double v2 = c(i, j) - v[j] - h;
          if (v2 < d[j]) {
            pred[j] = i;
            if (v2 == mn) {
              if (colsol[j] < 0) {
                endofpath = j;
                found = true;
                break;
              }
              collist[k] = collist[up];
              collist[up++] = j;
            }
            d[j] = v2;
          }
        }
      }
    } while (!found);

    for (int k = 0; k <= last; ++k) {
      const int j1 = collist[k];
      v[j1] += d[j1] - mn;
    }
    int i;
    do {
      i = pred[endofpath];
      colsol[endofpath] = i;
      const int j1 = endofpath;
      endofpath = rowsol[i];
      rowsol[i] = j1;
    } while (i != freerow);
  }
  return rowsol;
}

}  // namespace

Assignment jv_assign(const Eigen::MatrixXd& cost, double sentinel) {
  Assignment out;
  const int rows = static_cast<int>(cost.rows());
  const int cols = static_cast<int>(cost.cols());
  out.row_to_col.assign(rows, -1);
  if (rows == 0 || cols == 0) return out;
  if (!cost.allFinite()) throw std::invalid_argument("assignment costs must be finite");
  const int n = std::max(rows, cols);
  Eigen::MatrixXd sq = Eigen::MatrixXd::Constant(n, n, sentinel);
  sq.topLeftCorner(rows, cols) = cost;
  const auto rowsol = lapjv(sq);
  for (int i = 0; i < rows; ++i) {
    if (rowsol[i] < cols) {
      out.row_to_col[i] = rowsol[i];
      out.cost += cost(i, rowsol[i]);
    }
  }
  return out;
}

}  // namespace mmw
