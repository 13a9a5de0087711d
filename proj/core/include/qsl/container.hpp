#pragma once

// Binary container for operators and vectors:
//   bytes 0..3   magic "QSLB"
//   uint32       kind (0 operator, 1 state, 2 vector)
//   uint64       k
//   uint64       dim
//   payload      row-major complex doubles (re, im), little-endian;
//                dim*dim entries for operators and states, dim for vectors.

#include <cstdint>
#include <string>

#include "qsl/linalg.hpp"

namespace qsl {

enum class ContainerKind : std::uint32_t { Operator = 0, State = 1, Vector = 2 };

struct ContainerData {
  ContainerKind kind = ContainerKind::Operator;
  std::uint64_t k = 0;
  Matrix data;  // dim x 1 for vectors
};

void write_container(const std::string& path, ContainerKind kind, std::uint64_t k, const Matrix& m);
ContainerData read_container(const std::string& path);

// Diagnostic CSV with columns row,col,re,im.
void write_matrix_csv(const std::string& path, const Matrix& m);

}  // namespace qsl
