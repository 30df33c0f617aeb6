#include "corrmine/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace corrmine {

std::string format_double(double v) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, result.ptr);
}

std::string format_double_17(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

bool parse_full_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace

DataMatrix load_data_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open " + path);

  std::vector<std::vector<double>> rows;
  std::optional<std::vector<std::string>> header;
  std::string line;
  std::size_t width = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (width == 0) width = cells.size();
    if (cells.size() != width) {
      fail(errc::io_error, path + ": ragged row at line " + std::to_string(line_no));
    }
    std::vector<double> parsed(cells.size());
    bool all_numeric = true;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!parse_full_double(cells[c], parsed[c])) {
        all_numeric = false;
        break;
      }
    }
    if (!all_numeric) {
      if (rows.empty() && !header) {
        header = std::vector<std::string>(cells.begin(), cells.end());
        continue;
      }
      fail(errc::io_error,
           path + ": non-numeric value at line " + std::to_string(line_no));
    }
    rows.push_back(std::move(parsed));
  }
  if (rows.empty()) fail(errc::io_error, path + ": no data rows");

  Matrix values(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      values(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    }
  }
  return DataMatrix(std::move(values), std::move(header));
}

void save_data_csv(const DataMatrix& data, const std::string& path) {
  std::string out;
  if (data.column_names()) {
    for (Index j = 0; j < data.p(); ++j) {
      if (j > 0) out += ',';
      out += (*data.column_names())[static_cast<std::size_t>(j)];
    }
    out += '\n';
  }
  for (Index i = 0; i < data.n(); ++i) {
    for (Index j = 0; j < data.p(); ++j) {
      if (j > 0) out += ',';
      out += format_double(data.values()(i, j));
    }
    out += '\n';
  }
  write_text_file(path, out);
}

namespace {

std::string triplet_header(Index p) {
  return "p=" + std::to_string(p) + " format=sym-triplet\n";
}

}  // namespace

void save_triplet(const SymMatrix& m, const std::string& path, ZeroTolerance tol) {
  const Matrix& values = m.values();
  const double cut = tol.absolute_for(values);
  std::string out = triplet_header(m.p());
  for (Index i = 0; i < m.p(); ++i) {
    for (Index j = i; j < m.p(); ++j) {
      if (std::abs(values(i, j)) > cut) {
        out += std::to_string(i) + " " + std::to_string(j) + " " +
               format_double(values(i, j)) + "\n";
      }
    }
  }
  write_text_file(path, out);
}

void save_triplet(const Eigen::SparseMatrix<double>& m, const std::string& path) {
  std::string out = triplet_header(m.rows());
  for (int k = 0; k < m.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
      if (it.row() <= it.col() && it.value() != 0.0) {
        out += std::to_string(it.row()) + " " + std::to_string(it.col()) + " " +
               format_double(it.value()) + "\n";
      }
    }
  }
  write_text_file(path, out);
}

SymMatrix load_triplet(const std::string& path, MatrixRole role) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) fail(errc::io_error, path + ": empty file");
  Index p = 0;
  if (std::sscanf(line.c_str(), "p=%td format=sym-triplet", &p) != 1 || p < 1) {
    fail(errc::io_error, path + ": bad header, expected 'p=<p> format=sym-triplet'");
  }
  Matrix values = Matrix::Zero(p, p);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    long long i = 0, j = 0;
    double v = 0;
    if (std::sscanf(line.c_str(), "%lld %lld %lf", &i, &j, &v) != 3) {
      fail(errc::io_error, path + ": bad triplet at line " + std::to_string(line_no));
    }
    if (i < 0 || j < 0 || i >= p || j >= p) {
      fail(errc::io_error, path + ": index out of range at line " + std::to_string(line_no));
    }
    values(i, j) = v;
    values(j, i) = v;
  }
  return SymMatrix(std::move(values), role);
}

void Table::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns.size()) {
    fail(errc::dimension_mismatch, "table row width does not match column count");
  }
  rows.push_back(std::move(cells));
}

std::string table_to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c > 0) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += ',';
      out += row[c];
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buffer[8];
          std::snprintf(buffer, sizeof(buffer), "\\u%04x", ch);
          out += buffer;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

bool numeric_cell_is_json_safe(const std::string& cell) {
  return !cell.empty() && cell.find_first_not_of("0123456789+-.eE") == std::string::npos;
}

}  // namespace

std::string table_to_json(const Table& table) {
  std::string out = "[\n";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out += "  {";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c > 0) out += ", ";
      out += '"' + json_escape(table.columns[c]) + "\": ";
      const bool numeric = table.numeric.empty() || table.numeric[c];
      const std::string& cell = table.rows[r][c];
      if (numeric) {
        out += numeric_cell_is_json_safe(cell) ? cell : "null";
      } else {
        out += '"' + json_escape(cell) + '"';
      }
    }
    out += r + 1 < table.rows.size() ? "},\n" : "}\n";
  }
  out += "]\n";
  return out;
}

void save_table(const Table& table, const std::string& path, const std::string& format) {
  if (format == "csv") {
    write_text_file(path, table_to_csv(table));
  } else if (format == "json") {
    write_text_file(path, table_to_json(table));
  } else {
    fail(errc::config_error, "unknown table format '" + format + "'");
  }
}

struct Json::Node {
  enum class Kind { Object, Array, String, Number, Integer, Boolean, Null } kind;
  std::vector<std::pair<std::string, Json>> members;
  std::vector<Json> items;
  std::string text;
  double number = 0;
  long long integer = 0;
  bool flag = false;
};

Json Json::object() {
  Json j;
  j.node_ = std::make_shared<Node>();
  j.node_->kind = Node::Kind::Object;
  return j;
}

Json Json::array() {
  Json j;
  j.node_ = std::make_shared<Node>();
  j.node_->kind = Node::Kind::Array;
  return j;
}

Json Json::str(const std::string& s) {
  Json j;
  j.node_ = std::make_shared<Node>();
  j.node_->kind = Node::Kind::String;
  j.node_->text = s;
  return j;
}

Json Json::num(double v) {
  Json j;
  j.node_ = std::make_shared<Node>();
  j.node_->kind = std::isfinite(v) ? Node::Kind::Number : Node::Kind::Null;
  j.node_->number = v;
  return j;
}

Json Json::integer(long long v) {
  Json j;
  j.node_ = std::make_shared<Node>();
  j.node_->kind = Node::Kind::Integer;
  j.node_->integer = v;
  return j;
}

Json Json::boolean(bool v) {
  Json j;
  j.node_ = std::make_shared<Node>();
  j.node_->kind = Node::Kind::Boolean;
  j.node_->flag = v;
  return j;
}

Json Json::raw_null() {
  Json j;
  j.node_ = std::make_shared<Node>();
  j.node_->kind = Node::Kind::Null;
  return j;
}

Json& Json::set(const std::string& key, Json v) {
  node_->members.emplace_back(key, std::move(v));
  return *this;
}

Json& Json::push(Json v) {
  node_->items.push_back(std::move(v));
  return *this;
}

namespace {

void indent_to(std::string& out, int indent, int depth) {
  out.append(static_cast<std::size_t>(indent * depth), ' ');
}

}  // namespace

std::string Json::dump(int indent) const {
  std::string out;
  dump_to(out, indent, 0);
  out += '\n';
  return out;
}

void Json::dump_to(std::string& out, int indent, int depth) const {
  const Node& node = *node_;
  switch (node.kind) {
    case Node::Kind::Object: {
      if (node.members.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      for (std::size_t k = 0; k < node.members.size(); ++k) {
        indent_to(out, indent, depth + 1);
        out += '"' + json_escape(node.members[k].first) + "\": ";
        node.members[k].second.dump_to(out, indent, depth + 1);
        out += k + 1 < node.members.size() ? ",\n" : "\n";
      }
      indent_to(out, indent, depth);
      out += '}';
      return;
    }
    case Node::Kind::Array: {
      if (node.items.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t k = 0; k < node.items.size(); ++k) {
        indent_to(out, indent, depth + 1);
        node.items[k].dump_to(out, indent, depth + 1);
        out += k + 1 < node.items.size() ? ",\n" : "\n";
      }
      indent_to(out, indent, depth);
      out += ']';
      return;
    }
    case Node::Kind::String:
      out += '"' + json_escape(node.text) + '"';
      return;
    case Node::Kind::Number:
      out += format_double_17(node.number);
      return;
    case Node::Kind::Integer:
      out += std::to_string(node.integer);
      return;
    case Node::Kind::Boolean:
      out += node.flag ? "true" : "false";
      return;
    case Node::Kind::Null:
      out += "null";
      return;
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot write " + path);
  out << content;
  if (!out) fail(errc::io_error, "write failed for " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace corrmine
