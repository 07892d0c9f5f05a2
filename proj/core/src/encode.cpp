#include "fairaudit/encode.hpp"

#include <cmath>

namespace fairaudit {

Encoder Encoder::fit(const Dataset& ds, Options opts) {
  Encoder enc;
  int protected_col = ds.schema.protected_attribute.empty()
                          ? -1
                          : ds.schema.column_index(ds.schema.protected_attribute);
  for (std::size_t ci = 0; ci < ds.schema.columns.size(); ++ci) {
    const auto& col = ds.schema.columns[ci];
    bool is_protected = int(ci) == protected_col;
    if (is_protected && !opts.include_protected) continue;
    if (col.kind == ColumnKind::numeric) {
      if (is_protected) enc.protected_features_.push_back(enc.names_.size());
      enc.sources_.push_back({int(ci), -1});
      enc.names_.push_back(col.name);
    } else {
      for (std::size_t k = 0; k < col.categories.size(); ++k) {
        if (is_protected) enc.protected_features_.push_back(enc.names_.size());
        enc.sources_.push_back({int(ci), int(k)});
        enc.names_.push_back(col.name + "_" + col.categories[k]);
      }
    }
  }
  return enc;
}

Matrix Encoder::transform(const Dataset& ds) const {
  Matrix m;
  m.rows = ds.n();
  m.cols = sources_.size();
  m.a.assign(m.rows * m.cols, 0.0);
  for (std::size_t j = 0; j < sources_.size(); ++j) {
    const Source& src = sources_[j];
    const auto& col = ds.schema.columns[std::size_t(src.column)];
    if (src.category < 0) {
      if (col.kind != ColumnKind::numeric)
        throw DataError("encoder/schema mismatch on column '" + col.name + "'");
      const auto& v = ds.numeric[ds.slot[std::size_t(src.column)]];
      for (std::size_t i = 0; i < m.rows; ++i) m.a[i * m.cols + j] = v[i];
    } else {
      if (col.kind != ColumnKind::categorical)
        throw DataError("encoder/schema mismatch on column '" + col.name + "'");
      const auto& v = ds.categorical[ds.slot[std::size_t(src.column)]];
      for (std::size_t i = 0; i < m.rows; ++i)
        m.a[i * m.cols + j] = v[i] == src.category ? 1.0 : 0.0;
    }
  }
  return m;
}

MinMaxScaler MinMaxScaler::fit(const Matrix& m) {
  if (m.rows == 0) throw DataError("cannot fit scaler on empty matrix");
  MinMaxScaler s;
  s.min_.resize(m.cols);
  s.scale_.resize(m.cols);
  for (std::size_t j = 0; j < m.cols; ++j) {
    double lo = m.a[j], hi = m.a[j];
    for (std::size_t i = 1; i < m.rows; ++i) {
      double v = m.a[i * m.cols + j];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    s.min_[j] = lo;
    s.scale_[j] = hi > lo ? 1.0 / (hi - lo) : 0.0;
  }
  return s;
}

Matrix MinMaxScaler::transform(const Matrix& m) const {
  if (m.cols != min_.size()) throw DataError("scaler/matrix column mismatch");
  Matrix out = m;
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j)
      out.a[i * m.cols + j] = (m.a[i * m.cols + j] - min_[j]) * scale_[j];
  return out;
}

Standardizer Standardizer::fit(const Matrix& m) {
  if (m.rows == 0) throw DataError("cannot fit scaler on empty matrix");
  Standardizer s;
  s.mean_.resize(m.cols);
  s.scale_.resize(m.cols);
  for (std::size_t j = 0; j < m.cols; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) sum += m.a[i * m.cols + j];
    double mean = sum / double(m.rows);
    double ss = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) {
      double dlt = m.a[i * m.cols + j] - mean;
      ss += dlt * dlt;
    }
    double sd = std::sqrt(ss / double(m.rows));
    s.mean_[j] = mean;
    s.scale_[j] = sd > 0.0 ? 1.0 / sd : 1.0;
  }
  return s;
}

Matrix Standardizer::transform(const Matrix& m) const {
  if (m.cols != mean_.size()) throw DataError("scaler/matrix column mismatch");
  Matrix out = m;
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j)
      out.a[i * m.cols + j] = (m.a[i * m.cols + j] - mean_[j]) * scale_[j];
  return out;
}

}  // namespace fairaudit
