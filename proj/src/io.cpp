#include "wavesense/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wavesense {

std::string matrix_to_csv(const Mat& a) {
  std::ostringstream os;
  os.precision(17);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j) os << ',';
      os << a(i, j);
    }
    os << '\n';
  }
  return os.str();
}

std::string matrix_to_pgm(const Mat& a) {
  const double lo = a.minCoeff();
  const double hi = a.maxCoeff();
  const double range = hi - lo;
  std::ostringstream os;
  os << "P5\n" << a.cols() << ' ' << a.rows() << "\n255\n";
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      int v = 0;
      if (range > 0.0)
        v = static_cast<int>(std::lround((a(i, j) - lo) / range * 255.0));
      os.put(static_cast<char>(static_cast<unsigned char>(std::clamp(v, 0, 255))));
    }
  }
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& data) {
  namespace fs = std::filesystem;
  const fs::path dir = path.parent_path().empty() ? "." : path.parent_path();
  fs::create_directories(dir);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("short write: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace wavesense
