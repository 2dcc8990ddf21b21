#include "sdbscan/labels_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "sdbscan/error.hpp"

#include "json.hpp"

namespace sdbscan {

void write_labels_csv(std::ostream& out, const std::vector<int>& labels) {
  out << "point_id,cluster_id\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
}

std::vector<int> read_labels_csv(std::istream& in) {
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r" || line.starts_with("point_id")) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(line_no, "expected point_id,cluster_id");
    try {
      const auto id = std::stoull(line.substr(0, comma));
      const int label = std::stoi(line.substr(comma + 1));
      if (id != labels.size()) throw ParseError(line_no, "point ids must be consecutive from 0");
      labels.push_back(label);
    } catch (const std::logic_error&) {
      throw ParseError(line_no, "cannot parse '" + line + "'");
    }
  }
  return labels;
}

std::vector<int> read_labels_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return read_labels_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path.string());
  }
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  for (std::size_t i = 0; i < data.n(); ++i) {
    const auto row = data.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out << ',';
      out << nlohmann::json(row[j]).dump();
    }
    if (data.has_labels()) out << ',' << data.labels()[i];
    out << '\n';
  }
}

}  // namespace sdbscan
