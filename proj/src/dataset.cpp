#include "softsense/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "softsense/rng.hpp"

namespace softsense {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, Index row, const std::string& col) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw DataError("non-numeric cell at row " + std::to_string(row) +
                    ", column " + col + ": '" + cell + "'");
  }
  if (!std::isfinite(value)) {
    throw DataError("non-finite value at row " + std::to_string(row) +
                    ", column " + col);
  }
  return value;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path.string());

  std::string header;
  if (!std::getline(in, header)) {
    throw DataError("empty file: " + path.string());
  }
  if (header.size() >= 3 && header.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    header.erase(0, 3);
  }
  if (!header.empty() && header.back() == '\r') header.pop_back();

  const std::vector<std::string> names = split_line(header);
  // column position of A..H (0..7), NT (8), OUTLIER (9); -1 = absent
  std::array<int, 10> position;
  position.fill(-1);
  for (size_t c = 0; c < names.size(); ++c) {
    const std::string& name = names[c];
    int slot = -1;
    if (name.size() == 1 && name[0] >= 'A' && name[0] <= 'H') {
      slot = name[0] - 'A';
    } else if (name == "NT") {
      slot = 8;
    } else if (name == "OUTLIER") {
      slot = 9;
    } else {
      throw DataError("unexpected column in header: '" + name + "'");
    }
    if (position[static_cast<size_t>(slot)] != -1) {
      throw DataError("duplicate column in header: '" + name + "'");
    }
    position[static_cast<size_t>(slot)] = static_cast<int>(c);
  }
  for (int j = 0; j < kFeatureCount; ++j) {
    if (position[static_cast<size_t>(j)] == -1) {
      throw DataError("missing column: " +
                      feature_code(static_cast<FeatureId>(j)));
    }
  }
  if (position[8] == -1) throw DataError("missing column: NT");
  const bool has_outlier = position[9] != -1;

  std::vector<std::array<double, 9>> rows;
  std::vector<std::uint8_t> flags;
  std::string line;
  Index row_idx = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != names.size()) {
      throw DataError("row " + std::to_string(row_idx) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(names.size()));
    }
    std::array<double, 9> values{};
    for (int j = 0; j < kFeatureCount; ++j) {
      const auto fid = static_cast<FeatureId>(j);
      values[static_cast<size_t>(j)] = parse_cell(
          cells[static_cast<size_t>(position[static_cast<size_t>(j)])],
          row_idx, feature_code(fid));
    }
    values[8] = parse_cell(cells[static_cast<size_t>(position[8])], row_idx, "NT");
    std::uint8_t flag = 0;
    if (has_outlier) {
      const std::string& cell = cells[static_cast<size_t>(position[9])];
      if (cell == "0") {
        flag = 0;
      } else if (cell == "1") {
        flag = 1;
      } else {
        throw DataError("OUTLIER cell at row " + std::to_string(row_idx) +
                        " must be 0 or 1, got '" + cell + "'");
      }
    }
    rows.push_back(values);
    flags.push_back(flag);
    ++row_idx;
  }

  Dataset data;
  data.features.resize(static_cast<Index>(rows.size()), kFeatureCount);
  data.target.resize(static_cast<Index>(rows.size()));
  data.outlier_flag = std::move(flags);
  for (size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < kFeatureCount; ++j) {
      data.features(static_cast<Index>(i), j) = rows[i][static_cast<size_t>(j)];
    }
    data.target[static_cast<Index>(i)] = rows[i][8];
  }
  return data;
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open file for writing: " + path.string());
  out << "A,B,C,D,E,F,G,H,NT,OUTLIER\n";
  char buf[32];
  for (Index i = 0; i < data.n_rows(); ++i) {
    for (int j = 0; j < kFeatureCount; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.features(i, j));
      out << buf << ',';
    }
    std::snprintf(buf, sizeof(buf), "%.17g", data.target[i]);
    out << buf << ',' << (data.outlier_flag[static_cast<size_t>(i)] ? '1' : '0')
        << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

Dataset drop_flagged_outliers(const Dataset& data) {
  std::vector<int> keep;
  keep.reserve(static_cast<size_t>(data.n_rows()));
  for (Index i = 0; i < data.n_rows(); ++i) {
    if (!data.outlier_flag[static_cast<size_t>(i)]) {
      keep.push_back(static_cast<int>(i));
    }
  }
  if (keep.empty()) throw DataError("all rows are flagged as outliers");
  return select_rows(data, keep);
}

Dataset select_rows(const Dataset& data, const std::vector<int>& rows) {
  Dataset out;
  out.features = gather_rows(data.features, rows);
  out.target = gather(data.target, rows);
  out.outlier_flag.reserve(rows.size());
  for (int r : rows) {
    out.outlier_flag.push_back(data.outlier_flag[static_cast<size_t>(r)]);
  }
  return out;
}

NormStats zscore_fit(const Dataset& data, const std::vector<int>& rows) {
  if (rows.size() < 2) {
    throw DataError("zscore_fit needs at least 2 rows, got " +
                    std::to_string(rows.size()));
  }
  NormStats stats;
  stats.mean.resize(kFeatureCount + 1);
  stats.sd.resize(kFeatureCount + 1);
  stats.fitted_on = static_cast<Index>(rows.size());
  const double n = static_cast<double>(rows.size());
  for (int j = 0; j <= kFeatureCount; ++j) {
    double sum = 0.0;
    for (int r : rows) {
      sum += (j < kFeatureCount) ? data.features(r, j) : data.target[r];
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (int r : rows) {
      const double v = (j < kFeatureCount) ? data.features(r, j) : data.target[r];
      ss += (v - mean) * (v - mean);
    }
    stats.mean[j] = mean;
    stats.sd[j] = std::sqrt(ss / (n - 1.0));
  }
  return stats;
}

Standardized zscore_apply(const Dataset& data, const NormStats& stats) {
  if (stats.mean.size() != kFeatureCount + 1 ||
      stats.sd.size() != kFeatureCount + 1) {
    throw DataError("NormStats does not cover all columns");
  }
  Standardized out;
  out.data.features.resize(data.n_rows(), kFeatureCount);
  out.data.target.resize(data.n_rows());
  out.data.outlier_flag = data.outlier_flag;
  for (int j = 0; j <= kFeatureCount; ++j) {
    const std::string name =
        (j < kFeatureCount) ? feature_code(static_cast<FeatureId>(j)) : "NT";
    const auto col = (j < kFeatureCount)
                         ? data.features.col(j)
                         : Eigen::Ref<const Vector>(data.target);
    if (stats.sd[j] == 0.0) {
      out.degenerate_columns.push_back(name);
      if (j < kFeatureCount) {
        out.data.features.col(j).setZero();
      } else {
        out.data.target.setZero();
      }
    } else {
      const Vector scaled = (col.array() - stats.mean[j]) / stats.sd[j];
      if (j < kFeatureCount) {
        out.data.features.col(j) = scaled;
      } else {
        out.data.target = scaled;
      }
    }
  }
  return out;
}

SplitIndices split_dataset(Index n, std::uint64_t seed) {
  if (n < 5) {
    throw DataError("split_dataset needs n >= 5 rows, got " + std::to_string(n));
  }
  std::vector<int> order(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<size_t>(i)] = static_cast<int>(i);
  Rng rng(seed);
  rng.shuffle(order);

  const auto n_test = static_cast<size_t>(std::lround(0.20 * static_cast<double>(n)));
  const auto n_val = static_cast<size_t>(
      std::lround(0.20 * static_cast<double>(static_cast<size_t>(n) - n_test)));

  SplitIndices split;
  split.seed = seed;
  split.test.assign(order.begin(), order.begin() + static_cast<long>(n_test));
  split.validation.assign(order.begin() + static_cast<long>(n_test),
                          order.begin() + static_cast<long>(n_test + n_val));
  split.train.assign(order.begin() + static_cast<long>(n_test + n_val), order.end());
  std::sort(split.test.begin(), split.test.end());
  std::sort(split.validation.begin(), split.validation.end());
  std::sort(split.train.begin(), split.train.end());
  return split;
}

}  // namespace softsense
