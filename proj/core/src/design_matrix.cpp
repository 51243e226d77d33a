#include "bkf/design_matrix.hpp"

#include <cmath>

#include "bkf/errors.hpp"

namespace bkf {

namespace {

/// Rank of the 4x4 Gram matrix X'X by elimination with partial pivoting.
/// The Gram form is enough here: rank(X'X) == rank(X).
int gram_rank(std::array<std::array<double, 4>, 4> m) {
  double scale = 0.0;
  for (const auto& row : m)
    for (double v : row) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0;
  const double tol = 1e-10 * scale;

  int rank = 0;
  for (int col = 0; col < 4 && rank < 4; ++col) {
    int pivot = -1;
    double best = tol;
    for (int r = rank; r < 4; ++r) {
      if (std::abs(m[r][col]) > best) {
        best = std::abs(m[r][col]);
        pivot = r;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    for (int r = rank + 1; r < 4; ++r) {
      const double f = m[r][col] / m[rank][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[rank][c];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

bool matches(const RecordFilter& filter, const TrialRecord& record) {
  if (filter.persona && *filter.persona != record.persona) return false;
  if (filter.model && *filter.model != record.model_id) return false;
  if (filter.scenario && *filter.scenario != record.scenario) return false;
  return true;
}

DesignMatrix build_design(const std::vector<TrialRecord>& records, const RecordFilter& filter,
                          bool check_rank) {
  DesignMatrix design;
  for (const TrialRecord& record : records) {
    if (!matches(filter, record)) continue;
    design.rows.push_back({record.prior, record.signal_mic_level, record.signal_mac_level,
                           record.signal_mic_level * record.signal_mac_level});
    design.response.push_back(record.updated_expectation);
  }
  if (design.rows.empty()) throw InvalidParameter("no trial records match the filter");

  if (check_rank) {
    std::array<std::array<double, 4>, 4> gram{};
    for (const auto& row : design.rows)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) gram[i][j] += row[i] * row[j];
    const int rank = gram_rank(gram);
    if (rank < 4)
      throw RankDeficient("design matrix has rank " + std::to_string(rank) +
                          " of 4; the selected records do not identify all coefficients");
  }
  return design;
}

}  // namespace bkf
