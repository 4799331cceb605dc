#pragma once

#include "fsi/field.hpp"

#include <string>

namespace fsi {

/// Field snapshot files: a small fixed header followed by the coefficient
/// block as little-endian float64, mode-major in the ModeSet ordering.
/// Layout (bytes):
///   magic "FSIFLD1\0" | i32 slab | i32 vkind | i32 ncomp | i32 nvert
///   | i32 nmodes (= (2M+1)^2) | i32 M | f64 L
///   | ncomp * nvert * nmodes f64 values, component-major, then column
///     (mode) major, then vertical row
void writeFieldSnapshot(const std::string& path, const Field& f, int M, double L);
Field readFieldSnapshot(const std::string& path, int* M_out = nullptr, double* L_out = nullptr);

} // namespace fsi
