#ifndef CURVOP_IO_HPP
#define CURVOP_IO_HPP

#include <string>
#include <vector>

#include "curvop/geometry.hpp"
#include "curvop/operators.hpp"

namespace curvop {

// fixed-width float formatting shared by all text outputs ("%.12e")
std::string fmt_double(double x);

std::string gridfield_to_csv(const GridField& gf);
// several fields on a shared grid, one value column per field
std::string gridfields_to_csv(const std::vector<GridField>& fields);
std::string gridfields_to_json(const std::vector<GridField>& fields);

std::string opgrid_to_json(const OpGrid& grid, const std::string& operator_name);

void write_file(const std::string& path, const std::string& content);

}  // namespace curvop

#endif
