#include "adnd/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace adnd {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

std::size_t EdgeTable::anomaly_count() const {
  if (!labels) return 0;
  std::size_t c = 0;
  for (bool b : *labels) c += b ? 1 : 0;
  return c;
}

EdgeTable read_edge_table(std::istream& in) {
  std::string line;
  if (!next_line(in, line) || line.empty()) throw DataError("missing header");
  const auto header = split_fields(line);
  const bool two = header.size() == 2 && header[0] == "src" && header[1] == "dst";
  const bool three = header.size() == 3 && header[0] == "src" && header[1] == "dst" && header[2] == "label";
  if (!two && !three) throw DataError("bad header '" + line + "', expected src,dst[,label]");

  EdgeTable table;
  if (three) table.labels.emplace();
  std::size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    const auto where = "line " + std::to_string(line_no) + ": ";
    if (fields.size() != header.size()) {
      throw DataError(where + "expected " + std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    for (const auto& f : fields) {
      if (f.empty()) throw DataError(where + "missing field");
    }
    table.src.push_back(fields[0]);
    table.dst.push_back(fields[1]);
    if (three) {
      if (fields[2] != "0" && fields[2] != "1") throw DataError(where + "label must be 0 or 1");
      table.labels->push_back(fields[2] == "1");
    }
  }
  return table;
}

EdgeTable read_edge_table(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  try {
    return read_edge_table(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

EdgeCorpus intern_edges(const EdgeTable& table, std::shared_ptr<NodeVocab> vocab) {
  std::vector<Edge> edges;
  edges.reserve(table.size());
  for (std::size_t n = 0; n < table.size(); ++n) {
    const NodeIndex u = vocab->intern(table.src[n]);
    const NodeIndex v = vocab->intern(table.dst[n]);
    edges.push_back({u, v});
  }
  return EdgeCorpus(std::move(vocab), std::move(edges));
}

EdgeCorpus resolve_edges(const EdgeTable& table, std::shared_ptr<const NodeVocab> vocab) {
  std::vector<Edge> edges;
  edges.reserve(table.size());
  for (std::size_t n = 0; n < table.size(); ++n) {
    edges.push_back({vocab->resolve(table.src[n]), vocab->resolve(table.dst[n])});
  }
  return EdgeCorpus(std::move(vocab), std::move(edges));
}

ParsedEdges parse_edge_csv(const std::filesystem::path& path) {
  EdgeTable table = read_edge_table(path);
  auto corpus = intern_edges(table, std::make_shared<NodeVocab>());
  return {std::move(corpus), std::move(table.labels)};
}

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::optional<std::size_t> CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  while (next_line(in, line)) {
    if (!line.empty() && line[0] != '#') break;
    line.clear();
  }
  if (line.empty()) throw DataError("missing header");
  t.header = split_fields(line);
  std::size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_fields(line);
    if (fields.size() != t.header.size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(t.header.size()) + " fields");
    }
    t.rows.push_back(std::move(fields));
  }
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  try {
    return read_csv(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_edge_table(std::ostream& out, const EdgeTable& table) {
  out << (table.labels ? "src,dst,label\n" : "src,dst\n");
  for (std::size_t n = 0; n < table.size(); ++n) {
    out << table.src[n] << ',' << table.dst[n];
    if (table.labels) out << ',' << ((*table.labels)[n] ? '1' : '0');
    out << '\n';
  }
}

}  // namespace adnd
