// Copyright 2026 The lef Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "lef/error.hpp"
#include "lef/matrix.hpp"

#include <string>

namespace lef {

ParseError::ParseError(const std::string& what, std::size_t row, std::size_t column)
    : std::runtime_error(what), row_(row), column_(column) {}

CalibrationError::CalibrationError(const std::string& what, std::size_t point)
    : std::runtime_error("point " + std::to_string(point) + ": " + what), point_(point) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ContractViolation("matrix data has " + std::to_string(data_.size()) +
                            " entries, expected " + std::to_string(rows_ * cols_));
  }
}

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) {
    cols_ = values.size();
  } else if (values.size() != cols_) {
    throw ContractViolation("row has " + std::to_string(values.size()) + " entries, expected " +
                            std::to_string(cols_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
  Matrix out;
  out.cols_ = cols_;
  out.data_.reserve(indices.size() * cols_);
  for (std::size_t i : indices) {
    if (i >= rows_) throw ContractViolation("row index out of range");
    const auto r = row(i);
    out.data_.insert(out.data_.end(), r.begin(), r.end());
  }
  out.rows_ = indices.size();
  return out;
}

}  // namespace lef
