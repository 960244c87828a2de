#pragma once

#include <filesystem>
#include <iosfwd>

#include "odsym/matrix.hpp"

namespace odsym {

// Symmetric matrices use the Matrix Market coordinate format. Readers accept
// `real`, `integer` and `pattern` fields with either the `symmetric` or the
// `general` qualifier; entries may come from either triangle. A `general`
// file must list both (i,j) and (j,i) with equal values. The writer emits
// `%%MatrixMarket matrix coordinate real symmetric`, lower triangle, 1-based.
SparseSymMatrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const SparseSymMatrix& a);
SparseSymMatrix load_matrix(const std::filesystem::path& path);
void save_matrix(const std::filesystem::path& path, const SparseSymMatrix& a);

// Rectangular count matrices (documents x words), coordinate `general`.
SparseCounts read_counts(std::istream& in);
SparseCounts load_counts(const std::filesystem::path& path);

// Factors are headerless CSV: one line per row, comma-separated columns.
FactorMatrix read_factor(std::istream& in);
void write_factor(std::ostream& out, const FactorMatrix& h);
FactorMatrix load_factor(const std::filesystem::path& path);
void save_factor(const std::filesystem::path& path, const FactorMatrix& h);

}  // namespace odsym
