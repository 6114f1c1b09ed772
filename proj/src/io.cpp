#include "chainwalk/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "chainwalk/errors.hpp"

namespace chainwalk {

std::string fmt17(double x) {
    if (x == 0.0) x = 0.0;  // collapse -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << content;
    if (!out) throw ConfigError("short write to file: " + path);
}

std::string probability_records_csv(const std::vector<std::vector<double>> &records) {
    std::string out = "step,node,probability\n";
    for (std::size_t t = 0; t < records.size(); ++t) {
        for (std::size_t node = 0; node < records[t].size(); ++node) {
            out += std::to_string(t);
            out += ',';
            out += std::to_string(node);
            out += ',';
            out += fmt17(records[t][node]);
            out += '\n';
        }
    }
    return out;
}

}  // namespace chainwalk
