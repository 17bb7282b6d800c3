#pragma once

// Deterministic reductions: each grid row is summed left-to-right into a
// partial, partials are folded in row order. The parallel variants distribute
// rows over threads but write partials by row index, so the fold sees the same
// operands in the same order as the serial variants — results are bit-identical
// for every thread count.

#include <vector>

namespace crime::ops::detail {

template <class RowTerm>
double det_sum(int nx, int ny, RowTerm term) {
  std::vector<double> partial(ny);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < ny; ++j) {
    double s = 0.0;
    for (int i = 0; i < nx; ++i) s += term(i, j);
    partial[j] = s;
  }
  double total = 0.0;
  for (int j = 0; j < ny; ++j) total += partial[j];
  return total;
}

template <class RowTerm>
double det_sum_serial(int nx, int ny, RowTerm term) {
  std::vector<double> partial(ny);
  for (int j = 0; j < ny; ++j) {
    double s = 0.0;
    for (int i = 0; i < nx; ++i) s += term(i, j);
    partial[j] = s;
  }
  double total = 0.0;
  for (int j = 0; j < ny; ++j) total += partial[j];
  return total;
}

template <class RowTerm, class Fold>
double det_fold(int nx, int ny, RowTerm term, Fold fold, double init) {
  std::vector<double> partial(ny, init);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < ny; ++j) {
    double s = init;
    for (int i = 0; i < nx; ++i) s = fold(s, term(i, j));
    partial[j] = s;
  }
  double total = init;
  for (int j = 0; j < ny; ++j) total = fold(total, partial[j]);
  return total;
}

template <class RowTerm, class Fold>
double det_fold_serial(int nx, int ny, RowTerm term, Fold fold, double init) {
  std::vector<double> partial(ny, init);
  for (int j = 0; j < ny; ++j) {
    double s = init;
    for (int i = 0; i < nx; ++i) s = fold(s, term(i, j));
    partial[j] = s;
  }
  double total = init;
  for (int j = 0; j < ny; ++j) total = fold(total, partial[j]);
  return total;
}

}  // namespace crime::ops::detail
