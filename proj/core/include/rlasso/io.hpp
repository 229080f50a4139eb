#pragma once

#include <string>
#include <vector>

#include "rlasso/model.hpp"

namespace rlasso {

struct CsvRegression {
  VectorXd y;
  MatrixXd X;
  std::vector<std::string> names;  // predictor names in file order
  std::string response;
};

// Header row required. The response is selected by name; every other column
// becomes a predictor. Throws DataError for a missing file, duplicate header,
// unknown response, ragged rows, empty or non-numeric cells (with row and
// column), and files without predictors.
CsvRegression read_csv_regression(const std::string& path, const std::string& response_column);

// Splits one CSV line; double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv_line(const std::string& line);

// Shortest round-trip representation with at most 17 significant digits,
// '.' as decimal separator regardless of locale.
std::string format_double(double v);

}  // namespace rlasso
