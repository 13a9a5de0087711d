#include "qsl/container.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>

#include "qsl/error.hpp"

namespace qsl {

namespace {

static_assert(std::endian::native == std::endian::little, "container IO assumes a little-endian host");

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  require(static_cast<bool>(in), ErrorKind::Io, "truncated container");
  return v;
}

}  // namespace

void write_container(const std::string& path, ContainerKind kind, std::uint64_t k, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + path);
  const bool vec = kind == ContainerKind::Vector;
  require(vec ? m.cols() == 1 : m.rows() == m.cols(), ErrorKind::DimensionMismatch,
          "container payload has the wrong shape");
  out.write("QSLB", 4);
  put(out, static_cast<std::uint32_t>(kind));
  put(out, k);
  put(out, static_cast<std::uint64_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      put(out, m(i, j).real());
      put(out, m(i, j).imag());
    }
  require(static_cast<bool>(out), ErrorKind::Io, "write failed for " + path);
}

ContainerData read_container(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  require(static_cast<bool>(in) && std::memcmp(magic, "QSLB", 4) == 0, ErrorKind::Io, "bad container magic");
  ContainerData d;
  const auto kind = get<std::uint32_t>(in);
  require(kind <= 2, ErrorKind::Io, "unknown container kind");
  d.kind = static_cast<ContainerKind>(kind);
  d.k = get<std::uint64_t>(in);
  const auto dim = static_cast<Eigen::Index>(get<std::uint64_t>(in));
  const Eigen::Index cols = d.kind == ContainerKind::Vector ? 1 : dim;
  d.data.resize(dim, cols);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = get<double>(in);
      const double im = get<double>(in);
      d.data(i, j) = cplx(re, im);
    }
  return d;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + path);
  out << "row,col,re,im\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out << i << ',' << j << ',' << m(i, j).real() << ',' << m(i, j).imag() << '\n';
}

}  // namespace qsl
