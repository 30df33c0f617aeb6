#pragma once

#include <Eigen/SparseCore>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "corrmine/types.hpp"

namespace corrmine {

/// Shortest representation that round-trips the double exactly (CSV cells).
std::string format_double(double v);

/// 17 significant digits (JSON payloads).
std::string format_double_17(double v);

/// CSV with rows = samples, columns = variables; a header row is detected by
/// failing to parse the first line as numbers. Ragged rows are rejected.
DataMatrix load_data_csv(const std::string& path);
void save_data_csv(const DataMatrix& data, const std::string& path);

/// Sparse symmetric triplet text: one header line "p=<p> format=sym-triplet",
/// then "i j value" per stored entry with 0-based i <= j.
void save_triplet(const SymMatrix& m, const std::string& path, ZeroTolerance tol = {});
void save_triplet(const Eigen::SparseMatrix<double>& m, const std::string& path);
SymMatrix load_triplet(const std::string& path, MatrixRole role);

/// Pre-formatted tabular output, emitted as CSV (header + rows) or as a JSON
/// array of objects. Cells tagged numeric are written unquoted in JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<bool> numeric;  ///< per column; empty means all numeric
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells);
};

std::string table_to_csv(const Table& table);
std::string table_to_json(const Table& table);
void save_table(const Table& table, const std::string& path, const std::string& format);

/// Minimal ordered JSON document builder; doubles are serialized with 17
/// significant digits so emitted files are reproducible byte for byte.
class Json {
 public:
  static Json object();
  static Json array();
  static Json str(const std::string& s);
  static Json num(double v);
  static Json integer(long long v);
  static Json boolean(bool v);
  static Json raw_null();

  Json& set(const std::string& key, Json v);     // objects
  Json& push(Json v);                            // arrays
  std::string dump(int indent = 2) const;

 private:
  struct Node;
  std::shared_ptr<Node> node_;
  Json() = default;
  void dump_to(std::string& out, int indent, int depth) const;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace corrmine
