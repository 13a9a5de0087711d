#include <filesystem>

#include "doctest.h"
#include "qsl/container.hpp"
#include "qsl/error.hpp"

using namespace qsl;

TEST_CASE("container round trip") {
  const auto path = std::filesystem::temp_directory_path() / "qsl_container_test.bin";
  Matrix m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = cplx(i + 0.5 * j, i - j);
  write_container(path.string(), ContainerKind::Operator, 2, m);
  const ContainerData d = read_container(path.string());
  CHECK(d.kind == ContainerKind::Operator);
  CHECK(d.k == 2);
  CHECK((d.data - m).norm() == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("container errors") {
  CHECK_THROWS_AS(read_container("/nonexistent/qsl.bin"), Error);
  CHECK_THROWS_AS(write_container("/tmp/qsl_bad.bin", ContainerKind::Operator, 2, Matrix::Identity(3, 2)), Error);
}
