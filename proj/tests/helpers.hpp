#pragma once

#include "torsionlab/suite.hpp"

#include <doctest.h>

#include <initializer_list>
#include <vector>

namespace tl = torsionlab;

inline tl::Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  const tl::Index r = static_cast<tl::Index>(rows.size());
  const tl::Index c = r > 0 ? static_cast<tl::Index>(rows.begin()->size()) : 0;
  tl::Matrix m(r, c);
  tl::Index i = 0;
  for (const auto& row : rows) {
    tl::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline tl::Matrix matn(tl::Index rows, tl::Index cols) { return tl::Matrix::Zero(rows, cols); }

inline tl::MetricSpace unit_space(tl::Index n) { return tl::MetricSpace::euclidean(n); }

inline tl::MetricSpace space1(double g) {
  return tl::MetricSpace(1, tl::Matrix::Constant(1, 1, g));
}

/// Complex from degree q_min with the given per-degree dimensions, unit
/// Grams, and differentials.
inline tl::complexes::GradedMetricComplex make_complex(int q_min, std::vector<tl::Index> dims,
                                                       std::vector<tl::Matrix> diffs) {
  tl::complexes::GradedMetricComplex c;
  c.q_min = q_min;
  for (tl::Index d : dims) c.spaces.push_back(tl::MetricSpace::euclidean(d));
  c.diffs = std::move(diffs);
  return c;
}

/// 0 -> R --w--> R -> 0 in degrees (q0, q0+1) with unit metrics.
inline tl::complexes::GradedMetricComplex two_term(double w, int q0 = 0) {
  return make_complex(q0, {1, 1}, {tl::Matrix::Constant(1, 1, w)});
}

inline double max_abs(const tl::Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}
