#pragma once

#include <string>
#include <vector>

namespace chainwalk {

/// Shortest decimal with up to 17 significant digits; round-trips the exact
/// double. All serialized numbers go through this so output files are
/// byte-reproducible.
std::string fmt17(double x);

std::string read_text_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &content);

/// step,node,probability rows, one block per recorded step (step 0 = start).
std::string probability_records_csv(const std::vector<std::vector<double>> &records);

}  // namespace chainwalk
