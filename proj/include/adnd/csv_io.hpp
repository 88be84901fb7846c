#ifndef ADND_CSV_IO_HPP
#define ADND_CSV_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adnd/graph.hpp"

namespace adnd {

// Malformed or unreadable input data. The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raw rows of an edge-list file `src,dst[,label]`, before interning.
struct EdgeTable {
  std::vector<std::string> src;
  std::vector<std::string> dst;
  std::optional<std::vector<bool>> labels;  // true = anomalous

  std::size_t size() const { return src.size(); }
  std::size_t anomaly_count() const;
};

EdgeTable read_edge_table(std::istream& in);
EdgeTable read_edge_table(const std::filesystem::path& path);

// Interns every label into `vocab` (training-time ingestion).
EdgeCorpus intern_edges(const EdgeTable& table, std::shared_ptr<NodeVocab> vocab);
// Resolves against a frozen vocabulary; unknown nodes go to the unseen slot.
EdgeCorpus resolve_edges(const EdgeTable& table, std::shared_ptr<const NodeVocab> vocab);

struct ParsedEdges {
  EdgeCorpus corpus;
  std::optional<std::vector<bool>> labels;
};

// Reads a file and interns it into a fresh vocabulary.
ParsedEdges parse_edge_csv(const std::filesystem::path& path);

// Shortest text that parses back to the same double. Used for every float column we emit.
std::string format_real(double v);

// A generic header-indexed CSV (used for score files fed to `eval`).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

void write_edge_table(std::ostream& out, const EdgeTable& table);

}  // namespace adnd

#endif  // ADND_CSV_IO_HPP
