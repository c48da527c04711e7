#pragma once

#include <Eigen/Dense>
#include <string>

#include "wspline/measure.hpp"

namespace wspline {

/// Read a raw density from a CSV file (one grid row per line, comma-separated
/// reals) and normalize it to a measure.
DiscreteMeasure read_density_csv(const std::string& path);

/// Read an 8-bit binary PGM (P5) as a raw density and normalize.
DiscreteMeasure read_density_pgm(const std::string& path);

/// Dispatch on file extension (.csv / .pgm).
DiscreteMeasure read_density(const std::string& path);

/// Full-precision CSV export of the weights, one grid row per line.
void write_density_csv(const DiscreteMeasure& mu, const std::string& path);

/// 8-bit PGM export; weights are scaled so the maximum maps to 255.
void write_density_pgm(const DiscreteMeasure& mu, const std::string& path);

/// Generic numeric table, one row per line, comma-separated.
Eigen::MatrixXd read_csv_matrix(const std::string& path);
void write_csv_matrix(const Eigen::MatrixXd& m, const std::string& path);

}  // namespace wspline
