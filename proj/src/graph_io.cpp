#include "meetwalk/graph_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"

#include "meetwalk/error.hpp"

namespace meetwalk {
namespace {

using nlohmann::json;

// Line of the most recent non-whitespace character the parser consumed.
// Newlines are only committed once a later token is read, so a value that is
// terminated by a line break still reports its own line.
struct LineTracker {
  std::size_t line = 1;
  std::size_t pending_newlines = 0;

  void consume(char c) {
    if (c == '\n') {
      ++pending_newlines;
    } else if (c != ' ' && c != '\t' && c != '\r') {
      line += pending_newlines;
      pending_newlines = 0;
    }
  }
};

class TrackingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  TrackingIterator(const char* pos, LineTracker* tracker) : pos_(pos), tracker_(tracker) {}

  reference operator*() const {
    tracker_->consume(*pos_);
    return *pos_;
  }
  TrackingIterator& operator++() {
    ++pos_;
    return *this;
  }
  TrackingIterator operator++(int) {
    TrackingIterator copy = *this;
    ++pos_;
    return copy;
  }
  friend bool operator==(const TrackingIterator& a, const TrackingIterator& b) { return a.pos_ == b.pos_; }

 private:
  const char* pos_;
  LineTracker* tracker_;
};

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

struct EdgeCheck {
  std::optional<ParseError> error;

  void fail(const std::string& message, std::size_t line) {
    if (!error) error.emplace(message, line);
  }
};

bool is_integral_number(const json& v) {
  if (v.is_number_integer()) return true;
  if (v.is_number_float()) {
    const double d = v.get<double>();
    return std::isfinite(d) && std::floor(d) == d;
  }
  return false;
}

}  // namespace

Digraph parse_graph(std::string_view text) {
  LineTracker tracker;
  EdgeCheck check;
  std::optional<std::size_t> n_line;
  std::vector<std::size_t> edge_lines;

  // Validate each edge as soon as its closing bracket is read so the error can
  // name the line the edge sits on.
  json::parser_callback_t callback = [&](int depth, json::parse_event_t event, json& parsed) {
    if (event == json::parse_event_t::key && depth == 1 && parsed == "n") n_line = tracker.line;
    if (event == json::parse_event_t::array_end && depth == 2) {
      edge_lines.push_back(tracker.line);
      if (!parsed.is_array() || parsed.size() != 3) {
        check.fail("edge must be an array [source, target, weight]", tracker.line);
        return true;
      }
      if (!is_integral_number(parsed[0]) || !is_integral_number(parsed[1])) {
        check.fail("edge endpoints must be integers", tracker.line);
        return true;
      }
      if (parsed[0].get<double>() < 1 || parsed[1].get<double>() < 1) {
        check.fail("node labels are 1-based; got " + parsed[0].dump() + "," + parsed[1].dump(), tracker.line);
      }
      if (!parsed[2].is_number()) {
        check.fail("edge weight must be a number", tracker.line);
      } else if (!(parsed[2].get<double>() > 0.0)) {
        check.fail("edge weight must be positive; got " + parsed[2].dump(), tracker.line);
      }
    }
    return true;
  };

  json doc;
  try {
    doc = json::parse(TrackingIterator(text.data(), &tracker),
                      TrackingIterator(text.data() + text.size(), &tracker), callback);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1));
  }
  if (check.error) throw *check.error;

  if (!doc.is_object() || !doc.contains("n") || !doc.contains("edges")) {
    throw ParseError("graph must be an object with keys \"n\" and \"edges\"", 1);
  }
  const std::size_t nl = n_line.value_or(1);
  if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 1) {
    throw ParseError("\"n\" must be a positive integer", nl);
  }
  if (!doc["edges"].is_array()) throw ParseError("\"edges\" must be an array", nl);
  const long long n = doc["n"].get<long long>();

  std::vector<Edge> edges;
  std::set<std::pair<long long, long long>> seen;
  edges.reserve(doc["edges"].size());
  for (std::size_t k = 0; k < doc["edges"].size(); ++k) {
    const json& e = doc["edges"][k];
    if (!e.is_array()) throw ParseError("edge must be an array [source, target, weight]", nl);
    const auto s = static_cast<long long>(e[0].get<double>());
    const auto t = static_cast<long long>(e[1].get<double>());
    if (s > n || t > n) {
      throw ParseError("edge (" + std::to_string(s) + "," + std::to_string(t) + ") exceeds n = " + std::to_string(n),
                       k < edge_lines.size() ? edge_lines[k] : nl);
    }
    if (!seen.insert({s, t}).second) {
      throw ParseError("duplicate edge (" + std::to_string(s) + "," + std::to_string(t) + ")",
                       k < edge_lines.size() ? edge_lines[k] : nl);
    }
    edges.push_back({static_cast<int>(s - 1), static_cast<int>(t - 1), e[2].get<double>()});
  }
  try {
    return Digraph(static_cast<int>(n), std::move(edges));
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), 1);
  }
}

std::string format_graph(const Digraph& graph) {
  std::ostringstream out;
  out << "{\n  \"n\": " << graph.node_count() << ",\n  \"edges\": [";
  bool first = true;
  for (const Edge& e : graph.edges()) {
    out << (first ? "\n" : ",\n") << "    [" << e.source + 1 << ", " << e.target + 1 << ", "
        << json(e.weight).dump() << "]";
    first = false;
  }
  out << (first ? "]\n}\n" : "\n  ]\n}\n");
  return out.str();
}

Digraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open graph file " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_graph(text);
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

void save_graph(const Digraph& graph, const std::filesystem::path& path) {
  write_text_file(path, format_graph(graph));
}

std::string format_matrix_csv(const Eigen::MatrixXd& matrix) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j > 0) out << ',';
      const double v = matrix(i, j);
      if (std::isinf(v)) {
        out << (v > 0 ? "inf" : "-inf");
      } else {
        out << json(v).dump();
      }
    }
    out << '\n';
  }
  return out.str();
}

void save_matrix_csv(const Eigen::MatrixXd& matrix, const std::filesystem::path& path) {
  write_text_file(path, format_matrix_csv(matrix));
}

}  // namespace meetwalk
