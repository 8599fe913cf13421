#ifndef MEETWALK_GRAPH_IO_HPP
#define MEETWALK_GRAPH_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "meetwalk/digraph.hpp"

namespace meetwalk {

// Graph files are JSON: {"n": 3, "edges": [[1, 2, 1.0], [2, 1, 0.5]]}
// with 1-based node labels. Parse failures raise ParseError carrying the line.

Digraph parse_graph(std::string_view text);
std::string format_graph(const Digraph& graph);

Digraph load_graph(const std::filesystem::path& path);
void save_graph(const Digraph& graph, const std::filesystem::path& path);

/// Dense, row-major, header-free CSV with round-trip precision.
std::string format_matrix_csv(const Eigen::MatrixXd& matrix);
void save_matrix_csv(const Eigen::MatrixXd& matrix, const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace meetwalk

#endif  // MEETWALK_GRAPH_IO_HPP
