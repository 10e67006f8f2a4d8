#include "curvgraph/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "curvgraph/errors.hpp"

namespace curvgraph {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  return out;
}

std::string format_double(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

bool parse_long(const std::string& token, long long& out) {
  if (token.empty()) return false;
  char* end = nullptr;
  out = std::strtoll(token.c_str(), &end, 10);
  return end == token.c_str() + token.size();
}

bool parse_double(const std::string& token, double& out) {
  if (token.empty()) return false;
  char* end = nullptr;
  out = std::strtod(token.c_str(), &end);
  return end == token.c_str() + token.size();
}

}  // namespace

EdgeListFile read_edgelist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());

  std::vector<std::pair<long long, long long>> raw;
  long long pinned_nodes = -1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      // A "# nodes=N" comment pins the node count.
      long long n = 0;
      if (std::sscanf(line.c_str() + hash, "# nodes=%lld", &n) == 1 && n >= 0) {
        pinned_nodes = n;
      }
      line = line.substr(0, hash);
    }
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;  // blank line
    long long u = 0, v = 0;
    if (!(fields >> b) || (fields >> extra) || !parse_long(a, u) ||
        !parse_long(b, v) || u < 0 || v < 0) {
      throw ParseError(line_no, path.string() + ": malformed edge at line " +
                                    std::to_string(line_no) + ": '" + line +
                                    "'");
    }
    raw.emplace_back(u, v);
  }

  std::vector<long long> ids;
  ids.reserve(raw.size() * 2);
  for (const auto& [u, v] : raw) {
    ids.push_back(u);
    ids.push_back(v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  EdgeListFile result;
  long long max_id = ids.empty() ? -1 : ids.back();
  bool dense = static_cast<long long>(ids.size()) == max_id + 1;
  if (pinned_nodes >= 0 && max_id >= pinned_nodes) {
    throw ParseError(line_no, path.string() + ": edge id " +
                                  std::to_string(max_id) +
                                  " exceeds pinned node count");
  }

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(raw.size());
  if (dense || pinned_nodes >= 0) {
    NodeId n = static_cast<NodeId>(pinned_nodes >= 0 ? pinned_nodes
                                                     : max_id + 1);
    for (const auto& [u, v] : raw) {
      edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
    result.graph = Graph::from_edges(n, edges);
  } else {
    result.remapped = true;
    result.id_map = ids;
    auto dense_id = [&ids](long long original) {
      return static_cast<NodeId>(
          std::lower_bound(ids.begin(), ids.end(), original) - ids.begin());
    };
    for (const auto& [u, v] : raw) {
      edges.emplace_back(dense_id(u), dense_id(v));
    }
    result.graph = Graph::from_edges(static_cast<NodeId>(ids.size()), edges);
  }
  return result;
}

void write_edgelist(const std::filesystem::path& path, const Graph& g) {
  auto out = open_out(path);
  out << "# nodes=" << g.num_nodes() << "\n";
  for (const auto& [u, v] : g.edge_list()) {
    out << u << ' ' << v << "\n";
  }
  if (!out) throw InputError("failed writing " + path.string());
}

// ---------------------------------------------------------------------------
// GML subset parser
// ---------------------------------------------------------------------------

namespace {

struct GmlToken {
  enum Kind { kAtom, kString, kOpen, kClose, kEnd } kind = kEnd;
  std::string text;
  std::size_t offset = 0;
};

class GmlLexer {
 public:
  explicit GmlLexer(const std::string& text) : text_(text) {}

  GmlToken next() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    GmlToken token;
    token.offset = pos_;
    if (pos_ >= text_.size()) return token;

    char c = text_[pos_];
    if (c == '[') {
      ++pos_;
      token.kind = GmlToken::kOpen;
      return token;
    }
    if (c == ']') {
      ++pos_;
      token.kind = GmlToken::kClose;
      return token;
    }
    if (c == '"') {
      std::size_t end = text_.find('"', pos_ + 1);
      if (end == std::string::npos) {
        throw ParseError(pos_, "gml: unterminated string at byte " +
                                   std::to_string(pos_));
      }
      token.kind = GmlToken::kString;
      token.text = text_.substr(pos_ + 1, end - pos_ - 1);
      pos_ = end + 1;
      return token;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '[' && text_[pos_] != ']' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    token.kind = GmlToken::kAtom;
    token.text = text_.substr(start, pos_ - start);
    return token;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
};

struct GmlNode {
  long long id = 0;
  bool has_id = false;
  std::string label;
  long long value = 0;
};

struct GmlEdge {
  long long source = 0, target = 0;
  bool has_source = false, has_target = false;
};

class GmlParser {
 public:
  explicit GmlParser(const std::string& text) : lexer_(text) {}

  void run() {
    // Top level: key-value pairs; the first "graph [ ... ]" block is parsed,
    // everything else is skipped.
    bool saw_graph = false;
    for (GmlToken token = lexer_.next();; token = lexer_.next()) {
      if (token.kind == GmlToken::kEnd) break;
      if (token.kind != GmlToken::kAtom) {
        throw ParseError(token.offset, "gml: expected a key at byte " +
                                           std::to_string(token.offset));
      }
      if (token.text == "graph" && !saw_graph) {
        expect_open();
        parse_graph();
        saw_graph = true;
      } else {
        skip_value();
      }
    }
    if (!saw_graph) throw ParseError(0, "gml: no graph block found");
  }

  std::vector<GmlNode> nodes;
  std::vector<GmlEdge> edges;

 private:
  void expect_open() {
    GmlToken token = lexer_.next();
    if (token.kind != GmlToken::kOpen) {
      throw ParseError(token.offset, "gml: expected '[' at byte " +
                                         std::to_string(token.offset));
    }
  }

  // Consumes the value following a key: a scalar token or a bracketed block.
  void skip_value() {
    GmlToken token = lexer_.next();
    switch (token.kind) {
      case GmlToken::kAtom:
      case GmlToken::kString:
        return;
      case GmlToken::kOpen:
        skip_block(token.offset);
        return;
      default:
        throw ParseError(token.offset, "gml: dangling key at byte " +
                                           std::to_string(token.offset));
    }
  }

  void skip_block(std::size_t open_offset) {
    int depth = 1;
    while (depth > 0) {
      GmlToken token = lexer_.next();
      if (token.kind == GmlToken::kEnd) {
        throw ParseError(open_offset, "gml: unbalanced '[' at byte " +
                                          std::to_string(open_offset));
      }
      if (token.kind == GmlToken::kOpen) ++depth;
      if (token.kind == GmlToken::kClose) --depth;
    }
  }

  void parse_graph() {
    while (true) {
      GmlToken token = lexer_.next();
      if (token.kind == GmlToken::kClose) return;
      if (token.kind == GmlToken::kEnd) {
        throw ParseError(token.offset, "gml: graph block not closed");
      }
      if (token.kind != GmlToken::kAtom) {
        throw ParseError(token.offset, "gml: expected a key at byte " +
                                           std::to_string(token.offset));
      }
      if (token.text == "node") {
        expect_open();
        parse_node(token.offset);
      } else if (token.text == "edge") {
        expect_open();
        parse_edge(token.offset);
      } else {
        skip_value();
      }
    }
  }

  void parse_node(std::size_t block_offset) {
    GmlNode node;
    while (true) {
      GmlToken token = lexer_.next();
      if (token.kind == GmlToken::kClose) break;
      if (token.kind == GmlToken::kEnd) {
        throw ParseError(block_offset, "gml: node block not closed");
      }
      if (token.kind != GmlToken::kAtom) {
        throw ParseError(token.offset, "gml: expected a key at byte " +
                                           std::to_string(token.offset));
      }
      if (token.text == "id") {
        node.has_id = read_int(node.id);
      } else if (token.text == "label") {
        GmlToken value = lexer_.next();
        if (value.kind != GmlToken::kString && value.kind != GmlToken::kAtom) {
          throw ParseError(value.offset, "gml: bad label at byte " +
                                             std::to_string(value.offset));
        }
        node.label = value.text;
      } else if (token.text == "value") {
        read_int(node.value);
      } else {
        skip_value();  // unknown keys are tolerated
      }
    }
    if (!node.has_id) {
      throw ParseError(block_offset, "gml: node block at byte " +
                                         std::to_string(block_offset) +
                                         " is missing an id");
    }
    nodes.push_back(std::move(node));
  }

  void parse_edge(std::size_t block_offset) {
    GmlEdge edge;
    while (true) {
      GmlToken token = lexer_.next();
      if (token.kind == GmlToken::kClose) break;
      if (token.kind == GmlToken::kEnd) {
        throw ParseError(block_offset, "gml: edge block not closed");
      }
      if (token.kind != GmlToken::kAtom) {
        throw ParseError(token.offset, "gml: expected a key at byte " +
                                           std::to_string(token.offset));
      }
      if (token.text == "source") {
        edge.has_source = read_int(edge.source);
      } else if (token.text == "target") {
        edge.has_target = read_int(edge.target);
      } else {
        skip_value();
      }
    }
    if (!edge.has_source || !edge.has_target) {
      throw ParseError(block_offset, "gml: edge block at byte " +
                                         std::to_string(block_offset) +
                                         " is missing source or target");
    }
    edges.push_back(edge);
  }

  bool read_int(long long& out) {
    GmlToken token = lexer_.next();
    if (token.kind != GmlToken::kAtom || !parse_long(token.text, out)) {
      throw ParseError(token.offset, "gml: expected an integer at byte " +
                                         std::to_string(token.offset));
    }
    return true;
  }

  GmlLexer lexer_;
};

}  // namespace

GmlGraph parse_gml_subset(const std::string& text) {
  GmlParser parser(text);
  parser.run();

  std::map<long long, NodeId> dense;
  for (const auto& node : parser.nodes) {
    if (dense.count(node.id)) {
      throw ParseError(0, "gml: duplicate node id " + std::to_string(node.id));
    }
    dense.emplace(node.id, 0);
  }
  NodeId next = 0;
  for (auto& [id, idx] : dense) idx = next++;

  GmlGraph out;
  out.labels.resize(parser.nodes.size());
  out.values.resize(parser.nodes.size());
  for (const auto& node : parser.nodes) {
    NodeId idx = dense.at(node.id);
    out.labels[idx] = node.label;
    out.values[idx] = node.value;
  }

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(parser.edges.size());
  for (const auto& edge : parser.edges) {
    auto s = dense.find(edge.source);
    auto t = dense.find(edge.target);
    if (s == dense.end() || t == dense.end()) {
      throw ParseError(0, "gml: edge references unknown node id " +
                              std::to_string(s == dense.end() ? edge.source
                                                              : edge.target));
    }
    edges.emplace_back(s->second, t->second);
  }
  out.graph = Graph::from_edges(static_cast<NodeId>(parser.nodes.size()), edges);
  return out;
}

GmlGraph read_gml_subset(const std::filesystem::path& path) {
  return parse_gml_subset(read_file(path));
}

DatasetBundle football_bundle(const std::filesystem::path& path,
                              std::uint64_t seed) {
  GmlGraph gml = read_gml_subset(path);
  const NodeId n = gml.graph.num_nodes();
  if (n == 0) throw InputError("football: empty graph");

  // Distinct `value` entries become class ids, in sorted order.
  std::vector<long long> distinct = gml.values;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  DatasetBundle bundle;
  bundle.name = "football";
  bundle.graph = std::move(gml.graph);
  bundle.labels.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    bundle.labels[i] = static_cast<std::int32_t>(
        std::lower_bound(distinct.begin(), distinct.end(), gml.values[i]) -
        distinct.begin());
  }

  // Raw adjacency rows as features; the diagonal stays zero.
  bundle.features = FeatureMatrix::Zero(n, n);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j : bundle.graph.neighbors(i)) bundle.features(i, j) = 1.0;
  }

  const int classes = static_cast<int>(distinct.size());
  bundle.splits.train.assign(n, 0);
  bundle.splits.val.assign(n, 0);
  bundle.splits.test.assign(n, 0);
  std::mt19937_64 rng(seed);
  for (int c = 0; c < classes; ++c) {
    std::vector<NodeId> members;
    for (NodeId i = 0; i < n; ++i) {
      if (bundle.labels[i] == c) members.push_back(i);
    }
    if (members.empty()) {
      throw InputError("football: class " + std::to_string(c) + " is empty");
    }
    NodeId pick = members[std::uniform_int_distribution<std::size_t>(
        0, members.size() - 1)(rng)];
    bundle.splits.train[pick] = 1;
  }
  bundle.splits.val = bundle.splits.train;  // no held-out validation nodes
  for (NodeId i = 0; i < n; ++i) {
    if (!bundle.splits.train[i]) bundle.splits.test[i] = 1;
  }
  bundle.validate();
  return bundle;
}

FeatureMatrix read_features(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool first_data_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(cells, cell, ',')) {
      double v = 0.0;
      // Trim surrounding spaces.
      std::size_t b = cell.find_first_not_of(" \t\r");
      std::size_t e = cell.find_last_not_of(" \t\r");
      std::string trimmed =
          b == std::string::npos ? std::string() : cell.substr(b, e - b + 1);
      if (!parse_double(trimmed, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (first_data_line) {
        first_data_line = false;  // header line
        continue;
      }
      throw ParseError(line_no, path.string() + ": non-numeric cell at row " +
                                    std::to_string(line_no));
    }
    first_data_line = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(line_no, path.string() + ": row " +
                                    std::to_string(line_no) + " has " +
                                    std::to_string(row.size()) +
                                    " cells, expected " +
                                    std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }

  if (rows.empty()) return FeatureMatrix(0, 0);
  FeatureMatrix x(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return x;
}

void write_features(const std::filesystem::path& path, const FeatureMatrix& x) {
  auto out = open_out(path);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (c > 0) out << ',';
      out << format_double(x(r, c));
    }
    out << "\n";
  }
  if (!out) throw InputError("failed writing " + path.string());
}

LabelVector read_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  LabelVector labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    long long v = 0;
    std::string trimmed = line;
    if (auto cr = trimmed.find('\r'); cr != std::string::npos) {
      trimmed.erase(cr);
    }
    if (!parse_long(trimmed, v) || v < 0) {
      throw ParseError(line_no, path.string() + ": bad label at line " +
                                    std::to_string(line_no));
    }
    labels.push_back(static_cast<std::int32_t>(v));
  }
  return labels;
}

void write_labels(const std::filesystem::path& path, const LabelVector& labels) {
  auto out = open_out(path);
  for (std::int32_t l : labels) out << l << "\n";
  if (!out) throw InputError("failed writing " + path.string());
}

SplitMasks read_splits(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  SplitMasks splits;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto cr = line.find('\r'); cr != std::string::npos) line.erase(cr);
    if (line.empty()) continue;
    splits.train.push_back(line == "train");
    splits.val.push_back(line == "val");
    splits.test.push_back(line == "test");
    if (line != "train" && line != "val" && line != "test" && line != "none") {
      throw ParseError(line_no, path.string() + ": bad split tag '" + line +
                                    "' at line " + std::to_string(line_no));
    }
  }
  return splits;
}

void write_splits(const std::filesystem::path& path, const SplitMasks& splits) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < splits.train.size(); ++i) {
    if (splits.train[i]) {
      out << "train\n";
    } else if (splits.val[i]) {
      out << "val\n";
    } else if (splits.test[i]) {
      out << "test\n";
    } else {
      out << "none\n";
    }
  }
  if (!out) throw InputError("failed writing " + path.string());
}

void save_bundle(const std::string& prefix, const DatasetBundle& bundle) {
  write_edgelist(prefix + ".edges", bundle.graph);
  write_features(prefix + ".features.csv", bundle.features);
  write_labels(prefix + ".labels", bundle.labels);
  write_splits(prefix + ".splits", bundle.splits);
}

DatasetBundle load_bundle(const std::string& prefix, const std::string& name) {
  DatasetBundle bundle;
  bundle.name = name;
  EdgeListFile edges = read_edgelist(prefix + ".edges");
  bundle.graph = std::move(edges.graph);
  bundle.features = read_features(prefix + ".features.csv");
  bundle.labels = read_labels(prefix + ".labels");
  bundle.splits = read_splits(prefix + ".splits");
  bundle.validate();
  return bundle;
}

double mean_of(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double population_std(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const double mean = mean_of(values);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return std::sqrt(var / static_cast<double>(values.size()));
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

std::string metrics_to_json(const MetricsReport& report) {
  nlohmann::ordered_json doc;
  doc["dataset"] = report.dataset;
  doc["scheme"] = report.scheme;
  doc["nctm"] = report.nctm;
  doc["cnm"] = report.cnm;
  doc["alpha"] = report.alpha;
  doc["epsilon"] = report.epsilon;
  doc["seeds"] = report.seeds;
  doc["models"] = nlohmann::ordered_json::array();
  for (const auto& model : report.models) {
    nlohmann::ordered_json m;
    m["name"] = model.name;
    m["mean"] = mean_of(model.accuracies);
    m["std"] = population_std(model.accuracies);
    m["median"] = median_of(model.accuracies);
    m["runs"] = model.accuracies.size();
    m["accuracies"] = model.accuracies;
    doc["models"].push_back(std::move(m));
  }
  return doc.dump(2);
}

void write_metrics(const std::filesystem::path& path,
                   const MetricsReport& report) {
  auto out = open_out(path);
  out << metrics_to_json(report) << "\n";
  if (!out) throw InputError("failed writing " + path.string());
}

void write_history(const std::filesystem::path& path,
                   const std::vector<EpochRecord>& history) {
  auto out = open_out(path);
  for (const EpochRecord& r : history) {
    nlohmann::ordered_json line;
    line["epoch"] = r.epoch;
    line["loss"] = r.loss;
    line["val_acc"] = r.val_acc;
    out << line.dump() << "\n";
  }
  if (!out) throw InputError("failed writing " + path.string());
}

void write_weight_dump(const std::filesystem::path& path,
                       const WeightedAdjacency& w) {
  auto out = open_out(path);
  out << "#tau nodes=" << w.num_nodes() << " entries=" << w.tau.size() << "\n";
  for (NodeId i = 0; i < w.num_nodes(); ++i) {
    auto nbrs = w.row_neighbors(i);
    auto tau = w.row_tau(i);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      out << i << '\t' << nbrs[k] << '\t' << format_double(tau[k]) << "\n";
    }
  }
  if (!out) throw InputError("failed writing " + path.string());
}

}  // namespace curvgraph
