#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace bbmsel {

/// Time series of population summaries sampled on a grid.
struct StatsSeries {
  struct Row {
    double t = 0.0;
    std::vector<double> med;  ///< one entry per alpha
    double count = 0.0;
    double Z = std::numeric_limits<double>::quiet_NaN();
    double Y = std::numeric_limits<double>::quiet_NaN();
    double R_cum = std::numeric_limits<double>::quiet_NaN();
    double barrier_shift = 0.0;
  };

  std::vector<double> alphas;
  std::vector<Row> rows;

  /// Appends a row; times must increase strictly and med must match alphas.
  void append(Row r);
  std::vector<double> times() const;
  std::vector<double> med_column(std::size_t alpha_index) const;
};

void write_series_csv(std::ostream& os, const StatsSeries& s, const std::string& manifest_hash);
StatsSeries read_series_csv(std::istream& is);

}  // namespace bbmsel
