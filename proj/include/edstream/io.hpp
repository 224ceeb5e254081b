#pragma once

#include <iosfwd>
#include <string>

#include "edstream/common.hpp"
#include "edstream/graph.hpp"

namespace eds {

// Graph text format:
//   n <count>
//   e <u> <v> [mult]      (weighted variant: real weight)
//   loop <v> [count]      (weighted variant: real weight)
// Blank lines and lines starting with '#' are ignored.
MultiGraph read_multigraph(std::istream& in);
WeightedGraph read_weighted(std::istream& in);
void write_multigraph(std::ostream& out, const MultiGraph& g);
void write_weighted(std::ostream& out, const WeightedGraph& g);

// Partition text format: one line per cluster, `cluster <id>: v1 v2 ...`.
// Other lines (summaries, comments) are ignored by the reader.
Partition read_partition(std::istream& in);
void write_partition(std::ostream& out, const Partition& p);

MultiGraph load_multigraph(const std::string& path);
Partition load_partition(const std::string& path);

// Locale-independent shortest round-trip formatting of a double.
std::string fmt_real(double x);

}  // namespace eds
