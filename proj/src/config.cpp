#include "wavesense/config.hpp"

#include <istream>
#include <sstream>

namespace wavesense {

Mask make_mask(const CellGrid& grid) {
  if (!grid.even())
    throw std::invalid_argument("make_mask: grid side must be even");
  const int n = grid.n();
  Mask mask;
  mask.bits = BitMatrix::Zero(n, n);
  // 1-based (i, j) both even <=> 0-based indices both odd.
  for (int i = 1; i < n; i += 2)
    for (int j = 1; j < n; j += 2) mask.bits(i, j) = 1;
  return mask;
}

HsfConfiguration interleave(const HsfConfiguration& c_f,
                            const SensingConfiguration& c_s) {
  const int n = c_f.side();
  const int m = c_s.side();
  if (n != 2 * m)
    throw std::invalid_argument("interleave: sensing side must be half the full side");
  HsfConfiguration out = c_f;
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) out.bits(2 * r + 1, 2 * c + 1) = c_s.bits(r, c);
  return out;
}

SensingConfiguration extract_sensing(const HsfConfiguration& c) {
  const int n = c.side();
  if (n % 2 != 0)
    throw std::invalid_argument("extract_sensing: configuration side must be even");
  const int m = n / 2;
  BitMatrix out(m, m);
  for (int r = 0; r < m; ++r)
    for (int c2 = 0; c2 < m; ++c2) out(r, c2) = c.bits(2 * r + 1, 2 * c2 + 1);
  return SensingConfiguration(std::move(out));
}

BitMatrix bits_from_vector(const Vec& v, int m) {
  if (v.size() != static_cast<Eigen::Index>(m) * m)
    throw std::invalid_argument("bits_from_vector: vector length must be m^2");
  BitMatrix out(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) out(r, c) = v(r * m + c) != 0.0 ? 1 : 0;
  return out;
}

std::string to_csv(const BitMatrix& bits) {
  std::string out;
  out.reserve(static_cast<size_t>(bits.rows()) * (2 * bits.cols() + 1));
  for (Eigen::Index i = 0; i < bits.rows(); ++i) {
    for (Eigen::Index j = 0; j < bits.cols(); ++j) {
      if (j) out.push_back(',');
      out.push_back(bits(i, j) ? '1' : '0');
    }
    out.push_back('\n');
  }
  return out;
}

BitMatrix bits_from_csv(std::istream& in) {
  std::vector<std::vector<std::uint8_t>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::uint8_t> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (cell == "0")
        row.push_back(0);
      else if (cell == "1")
        row.push_back(1);
      else
        throw std::invalid_argument("bits_from_csv: entries must be 0 or 1");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("bits_from_csv: empty input");
  const size_t cols = rows.front().size();
  BitMatrix out(static_cast<Eigen::Index>(rows.size()),
                static_cast<Eigen::Index>(cols));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols)
      throw std::invalid_argument("bits_from_csv: ragged rows");
    for (size_t j = 0; j < cols; ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return out;
}

}  // namespace wavesense
