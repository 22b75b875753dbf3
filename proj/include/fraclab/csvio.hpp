#pragma once

#include <string>
#include <vector>

#include "fraclab/grid.hpp"

namespace fraclab {

// Doubles print with 17 significant digits so parsing recovers them exactly.
std::string format_double(double x);

// Grid-function CSV: a leading config comment, a sidecar line encoding the
// grid and the exterior tag, then x,value rows.  Callable exteriors do not
// serialize.  Round-trips bit-exactly.
std::string grid_function_to_csv(const GridFunction& u, const std::string& config_comment);
GridFunction grid_function_from_csv(const std::string& text);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

// x,value table with the config comment header.
std::string table_to_csv(const std::string& config_comment,
                         const std::vector<std::string>& columns,
                         const std::vector<std::vector<double>>& rows);

// flat key = value report block
std::string report_block(const std::vector<std::pair<std::string, std::string>>& kv);

}  // namespace fraclab
